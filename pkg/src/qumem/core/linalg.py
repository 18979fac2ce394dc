"""Dense complex linear algebra: tensor products, Hermitian eigensolvers and entropy."""

import logging
import math
from typing import Tuple

import numpy as np

from ..exceptions import DimensionMismatchError, NegativeEigenvalueError, NotHermitianError
from ..models.results import Spectrum

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-10
CLIP_TOL = 1e-12

METHODS = ("jacobi", "lapack")


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with (a (x) b)[d*i + k, d*j + l] = a[i, j] * b[k, l]."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 2:
        raise DimensionMismatchError(
            f"kron expects matrices, got shapes {a.shape} and {b.shape}"
        )
    return np.kron(a, b)


def hermitian_asymmetry(h: np.ndarray) -> float:
    """Largest entrywise |h - h^dagger|."""
    return float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0


def check_hermitian(h: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return h as a complex square matrix, or raise when it is not Hermitian."""
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {h.shape}")
    asymmetry = hermitian_asymmetry(h)
    if asymmetry > tol:
        raise NotHermitianError(asymmetry, tol)
    return h


def off_diagonal_norm(a: np.ndarray) -> float:
    """Frobenius norm of the off-diagonal part."""
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Apply the complex Jacobi rotation that annihilates a[p, q], in place."""
    apq = a[p, q]
    mag = abs(apq)
    phase = apq / mag
    tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c

    # J = [[c, s e^{i theta}], [-s e^{-i theta}, c]] on the (p, q) plane
    jpq = s * phase
    jqp = -s * phase.conjugate()

    col_p = a[:, p].copy()
    col_q = a[:, q]
    a[:, p] = c * col_p + jqp * col_q
    a[:, q] = jpq * col_p + c * col_q

    row_p = a[p, :].copy()
    row_q = a[q, :]
    a[p, :] = c * row_p + jqp.conjugate() * row_q
    a[q, :] = jpq.conjugate() * row_p + c * row_q

    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real

    vec_p = v[:, p].copy()
    vec_q = v[:, q]
    v[:, p] = c * vec_p + jqp * vec_q
    v[:, q] = jpq * vec_p + c * vec_q


def jacobi_eigh(
    h: np.ndarray, tol: float = 1e-14, max_sweeps: int = 100
) -> Tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigensolver for a Hermitian matrix.

    Sweeps over every (p, q) pair in row order until the off-diagonal
    Frobenius mass falls below ``tol`` relative to the norm of ``h``, or
    ``max_sweeps`` sweeps have run. Returns ascending eigenvalues and the
    matching orthonormal eigenvectors as columns.
    """
    a = np.array(h, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = float(np.linalg.norm(a))
    if n == 1 or scale == 0.0:
        return np.real(np.diag(a)).copy(), v

    threshold = tol * scale
    # below this an element cannot push the off-diagonal mass over threshold
    skip = threshold / n

    for sweep in range(max_sweeps):
        off = off_diagonal_norm(a)
        logger.debug("Jacobi sweep %d: off-diagonal mass %.3e", sweep, off)
        if off < threshold:
            break
        rotations = 0
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= skip:
                    continue
                _rotate(a, v, p, q)
                rotations += 1
        if rotations == 0:
            break
    else:
        off = off_diagonal_norm(a)
        if off >= threshold:
            logger.warning(
                "Jacobi stopped at the sweep limit (%d) with off-diagonal mass %.3e",
                max_sweeps, off,
            )

    values = np.real(np.diag(a))
    order = np.argsort(values, kind="stable")
    return values[order], v[:, order]


def hermitian_eigh(
    h: np.ndarray,
    method: str = "jacobi",
    tol: float = 1e-14,
    max_sweeps: int = 100,
) -> Tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and eigenvectors of a Hermitian matrix.

    ``method`` selects cyclic Jacobi or LAPACK (numpy.linalg.eigh); both
    reject matrices whose asymmetry exceeds 1e-10.
    """
    h = check_hermitian(h)
    h = 0.5 * (h + h.conj().T)
    if method == "jacobi":
        return jacobi_eigh(h, tol=tol, max_sweeps=max_sweeps)
    if method == "lapack":
        values, vectors = np.linalg.eigh(h)
        return values, vectors
    raise ValueError(f"unknown eigensolver {method!r}; expected one of {METHODS}")


def hermitian_spectrum(
    h: np.ndarray,
    method: str = "jacobi",
    tol: float = 1e-14,
    max_sweeps: int = 100,
) -> Spectrum:
    """Eigenvalues of a Hermitian matrix, ascending, as a Spectrum."""
    values, _ = hermitian_eigh(h, method=method, tol=tol, max_sweeps=max_sweeps)
    return Spectrum(values=tuple(float(x) for x in values), dimension=len(values))


def entropy_bits(s: Spectrum, clip: float = CLIP_TOL) -> float:
    """Von Neumann entropy -sum(l log2 l) in bits, with 0 log 0 = 0."""
    values = np.asarray(s.values, dtype=float)
    low = float(values.min())
    if low < -clip:
        raise NegativeEigenvalueError(low, clip)
    positive = values[values > 0.0]
    value = -float(np.sum(positive * np.log2(positive)))
    return max(0.0, value)
