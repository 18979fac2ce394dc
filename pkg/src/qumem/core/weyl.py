"""Weyl displacement operators U_{m,n}|k> = e^{2 pi i k n / d} |k + m mod d>."""

from itertools import product
from typing import Iterator, NamedTuple

import numpy as np

from ..exceptions import DimensionMismatchError, InvalidParameterError


class WeylIndex(NamedTuple):
    """Shift index m and phase index n of a displacement operator."""

    m: int
    n: int


def _check_dimension(d: int) -> None:
    if d < 2:
        raise InvalidParameterError(f"dimension must be at least 2, got d = {d}")


def _check_index(d: int, w: WeylIndex) -> None:
    if not (0 <= w.m < d and 0 <= w.n < d):
        raise InvalidParameterError(f"Weyl index {tuple(w)} outside 0..{d - 1}")


def root_of_unity_powers(d: int, n: int) -> np.ndarray:
    """Vector of e^{2 pi i k n / d} for k = 0..d-1, from exact rational angles."""
    k = np.arange(d)
    return np.exp(2j * np.pi * ((k * n) % d) / d)


def weyl_indices(d: int) -> Iterator[WeylIndex]:
    """All d^2 indices in lexicographic (m, n) order."""
    for m, n in product(range(d), repeat=2):
        yield WeylIndex(m, n)


def displacement(d: int, w: WeylIndex) -> np.ndarray:
    """Dense d x d displacement operator U_{m,n}."""
    _check_dimension(d)
    w = WeylIndex(*w)
    _check_index(d, w)
    u = np.zeros((d, d), dtype=complex)
    k = np.arange(d)
    u[(k + w.m) % d, k] = root_of_unity_powers(d, w.n)
    return u


def commutation_phase(d: int, a: WeylIndex, b: WeylIndex) -> complex:
    """Phase c with U_a U_b = c U_b U_a, namely e^{2 pi i (m'n - mn') / d}."""
    m, n = a
    mp, np_ = b
    return complex(np.exp(2j * np.pi * ((mp * n - m * np_) % d) / d))


def _pair_permutation(d: int, left: WeylIndex, right: WeylIndex) -> np.ndarray:
    """Image index of |k1 k2> under the shifts of U_left (x) U_right."""
    k = np.arange(d)
    return (((k + left.m) % d)[:, None] * d + ((k + right.m) % d)[None, :]).ravel()


def _check_pair_input(rho: np.ndarray, d: int) -> np.ndarray:
    _check_dimension(d)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (d * d, d * d):
        raise DimensionMismatchError(
            f"expected a {d * d} x {d * d} matrix for d = {d}, got {rho.shape}"
        )
    return rho


def conjugate_pair(
    rho: np.ndarray, d: int, left: WeylIndex, right: WeylIndex
) -> np.ndarray:
    """(U_left (x) U_right) rho (U_left (x) U_right)^dagger in O(d^4).

    The tensor product is monomial, so conjugation is a phase scaling
    followed by a simultaneous row and column permutation.
    """
    rho = _check_pair_input(rho, d)
    left, right = WeylIndex(*left), WeylIndex(*right)
    _check_index(d, left)
    _check_index(d, right)

    phases = np.kron(root_of_unity_powers(d, left.n), root_of_unity_powers(d, right.n))
    perm = _pair_permutation(d, left, right)
    out = np.empty_like(rho)
    out[np.ix_(perm, perm)] = phases[:, None] * rho * phases.conj()[None, :]
    return out


def conjugate_pair_dense(
    rho: np.ndarray, d: int, left: WeylIndex, right: WeylIndex
) -> np.ndarray:
    """Reference conjugation through an explicit Kronecker product."""
    rho = _check_pair_input(rho, d)
    u = np.kron(displacement(d, left), displacement(d, right))
    return u @ rho @ u.conj().T


def displace_pair(
    psi: np.ndarray, d: int, left: WeylIndex, right: WeylIndex
) -> np.ndarray:
    """(U_left (x) U_right) psi for a vector of length d^2."""
    _check_dimension(d)
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (d * d,):
        raise DimensionMismatchError(f"expected a vector of length {d * d}, got {psi.shape}")
    left, right = WeylIndex(*left), WeylIndex(*right)
    _check_index(d, left)
    _check_index(d, right)

    phases = np.kron(root_of_unity_powers(d, left.n), root_of_unity_powers(d, right.n))
    out = np.empty_like(psi)
    out[_pair_permutation(d, left, right)] = phases * psi
    return out
