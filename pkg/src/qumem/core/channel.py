"""The correlated two-use channel and its brute-force Kraus oracle."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from itertools import product
from typing import List, Optional, Tuple

import numpy as np

from ..exceptions import DimensionMismatchError, InvalidParameterError, OracleCapError
from ..models.channel import ChannelSpec, Family, NoiseTable, SchmidtSpec, eta_from_p, eta_range
from ..models.results import Numerics
from .linalg import check_hermitian, entropy_bits, hermitian_spectrum
from .states import build_state
from .weyl import WeylIndex, conjugate_pair, conjugate_pair_dense, displace_pair, displacement

logger = logging.getLogger(__name__)

DEFAULT_ORACLE_CAP = 12
DENSITY_TOL = 1e-10

KrausTerm = Tuple[int, int, int, int, float]

__all__ = [
    "DEFAULT_ORACLE_CAP",
    "apply_single_use",
    "apply_two_use",
    "apply_two_use_dense",
    "apply_two_use_pure",
    "check_density_matrix",
    "eta_from_p",
    "family_params",
    "kraus_terms",
    "noise_table",
    "oracle_output",
    "orbit_average",
    "orbit_holevo",
    "phase_average",
    "single_use_weights",
]


def family_params(family: Family, d: int, eta: float) -> Tuple[float, float]:
    """Identity weight p and off weight q of a family at noise parameter eta."""
    if d < 2:
        raise InvalidParameterError(f"dimension must be at least 2, got d = {d}")
    lo, hi = eta_range(family, d)
    if not (lo - 1e-15 <= eta <= hi + 1e-15):
        raise InvalidParameterError(
            f"eta = {eta} outside [{lo:.17g}, {hi:g}] for {family.value.upper()} with d = {d}"
        )
    if family == Family.QD:
        p = (1.0 + (d * d - 1) * eta) / (d * d)
        q = (1.0 - p) / (d * d - 1)
    else:
        p = (1.0 + (d - 1) * eta) / (d * d)
        q = (1.0 - d * p) / (d * (d - 1))
    # the interval ends can land a rounding step below zero
    return max(p, 0.0), max(q, 0.0)


def single_use_weights(family: Family, d: int, eta: float) -> np.ndarray:
    """Matrix q_{m,n} of single-use displacement probabilities.

    QD weighs U_{0,0} by p and every other displacement by q; QCD weighs
    every unshifted U_{0,n} by p and every shifted one by q.
    """
    p, q = family_params(family, d, eta)
    weights = np.full((d, d), q)
    if family == Family.QD:
        weights[0, 0] = p
    else:
        weights[0, :] = p
    return weights


def noise_table(spec: ChannelSpec) -> NoiseTable:
    """Joint probabilities p_{m,n,m',n'} of the Kraus pairs of the two uses."""
    d, mu, nu = spec.d, spec.mu, spec.nu
    q = single_use_weights(spec.family, d, spec.eta)

    table = (1.0 - mu) * np.einsum('ab,cd->abcd', q, q)
    m, n = np.meshgrid(np.arange(d), np.arange(d), indexing='ij')
    # n' = -n mod d, so n = n' = 0 fires both deltas with weights summing to 1
    table[m, n, m, n] += mu * (1.0 - nu) * q
    table[m, n, m, (-n) % d] += mu * nu * q

    return NoiseTable(d=d, p=table, marginals=q)


def kraus_terms(table: NoiseTable) -> List[KrausTerm]:
    """Nonzero (m, n, m', n', weight) tuples in lexicographic order."""
    d = table.d
    return [
        (m, n, mp, np_, float(table.p[m, n, mp, np_]))
        for m, n, mp, np_ in product(range(d), repeat=4)
        if table.p[m, n, mp, np_] > 0.0
    ]


def check_density_matrix(rho: np.ndarray, d: int, tol: float = DENSITY_TOL) -> np.ndarray:
    """Reject anything that is not a d^2 x d^2 density matrix within tol."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (d * d, d * d):
        raise DimensionMismatchError(
            f"expected a {d * d} x {d * d} matrix for d = {d}, got {rho.shape}"
        )
    rho = check_hermitian(rho, tol)
    trace = complex(np.trace(rho))
    if abs(trace - 1.0) > tol:
        raise InvalidParameterError(f"input has trace {trace.real:.15g}, expected 1")
    low = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
    if low < -tol:
        raise InvalidParameterError(f"input is not positive semidefinite (eigenvalue {low:.3e})")
    return rho


def _check_cap(d: int, cap: Optional[int], allow_large: bool) -> None:
    if cap is None or d <= cap:
        return
    if not allow_large:
        raise OracleCapError(d, cap)
    logger.warning("Oracle cap d <= %d overridden for d = %d", cap, d)


def _partial_sum(rho: np.ndarray, d: int, terms: List[KrausTerm]) -> np.ndarray:
    acc = np.zeros_like(rho)
    for m, n, mp, np_, weight in terms:
        acc += weight * conjugate_pair(rho, d, WeylIndex(m, n), WeylIndex(mp, np_))
    return acc


def apply_two_use(
    spec: ChannelSpec,
    rho: np.ndarray,
    workers: int = 1,
    cap: Optional[int] = DEFAULT_ORACLE_CAP,
    allow_large: bool = False,
) -> np.ndarray:
    """Output of the correlated two-use channel, summed Kraus pair by Kraus pair.

    The nonzero terms are split into contiguous lexicographic chunks, one
    per worker. Each worker accumulates its chunk in order and the partial
    sums are added in chunk order, so a fixed worker count is reproducible.
    """
    d = spec.d
    _check_cap(d, cap, allow_large)
    rho = check_density_matrix(rho, d)
    terms = kraus_terms(noise_table(spec))

    workers = max(1, min(workers, len(terms)))
    size = math.ceil(len(terms) / workers)
    chunks = [terms[i:i + size] for i in range(0, len(terms), size)]
    logger.info(
        "Oracle %s d=%d mu=%g nu=%g: %d Kraus terms over %d worker(s)",
        spec.family.value, d, spec.mu, spec.nu, len(terms), len(chunks),
    )

    if len(chunks) == 1:
        return _partial_sum(rho, d, chunks[0])

    with ThreadPoolExecutor(max_workers=len(chunks)) as executor:
        partials = list(executor.map(lambda chunk: _partial_sum(rho, d, chunk), chunks))

    out = partials[0]
    for partial in partials[1:]:
        out = out + partial
    return out


def apply_two_use_dense(spec: ChannelSpec, rho: np.ndarray) -> np.ndarray:
    """Reference two-use channel through explicit Kronecker products."""
    d = spec.d
    rho = check_density_matrix(rho, d)
    out = np.zeros_like(rho)
    for m, n, mp, np_, weight in kraus_terms(noise_table(spec)):
        out += weight * conjugate_pair_dense(rho, d, WeylIndex(m, n), WeylIndex(mp, np_))
    return out


def _pure_partial(psi: np.ndarray, d: int, terms: List[KrausTerm]) -> np.ndarray:
    columns = np.empty((d * d, len(terms)), dtype=complex)
    for k, (m, n, mp, np_, weight) in enumerate(terms):
        columns[:, k] = math.sqrt(weight) * displace_pair(psi, d, WeylIndex(m, n), WeylIndex(mp, np_))
    return columns @ columns.conj().T


def apply_two_use_pure(
    spec: ChannelSpec,
    psi: np.ndarray,
    workers: int = 1,
    cap: Optional[int] = DEFAULT_ORACLE_CAP,
    allow_large: bool = False,
) -> np.ndarray:
    """Output of the two-use channel on the pure state |psi><psi|.

    Every Kraus pair maps psi to one weighted column of V and the output is
    V V^dagger. Chunking across workers follows apply_two_use.
    """
    d = spec.d
    _check_cap(d, cap, allow_large)
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (d * d,):
        raise DimensionMismatchError(f"expected a vector of length {d * d}, got {psi.shape}")
    norm = float(np.vdot(psi, psi).real)
    if abs(norm - 1.0) > DENSITY_TOL:
        raise InvalidParameterError(f"state vector has norm {norm:.15g}, expected 1")
    terms = kraus_terms(noise_table(spec))

    workers = max(1, min(workers, len(terms)))
    size = math.ceil(len(terms) / workers)
    chunks = [terms[i:i + size] for i in range(0, len(terms), size)]
    logger.info(
        "Pure oracle %s d=%d mu=%g nu=%g: %d Kraus terms over %d worker(s)",
        spec.family.value, d, spec.mu, spec.nu, len(terms), len(chunks),
    )

    if len(chunks) == 1:
        return _pure_partial(psi, d, chunks[0])

    with ThreadPoolExecutor(max_workers=len(chunks)) as executor:
        partials = list(executor.map(lambda chunk: _pure_partial(psi, d, chunk), chunks))

    out = partials[0]
    for partial in partials[1:]:
        out = out + partial
    return out


def phase_average(rho: np.ndarray, d: int) -> np.ndarray:
    """Average of rho over the joint phase displacements U_{0,n} (x) U_{0,n}.

    The QCD channel cannot tell rho from its average when nu = 0 or d = 2.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (d * d, d * d):
        raise DimensionMismatchError(
            f"expected a {d * d} x {d * d} matrix for d = {d}, got {rho.shape}"
        )
    out = np.zeros_like(rho)
    for n in range(d):
        out += conjugate_pair(rho, d, WeylIndex(0, n), WeylIndex(0, n))
    return out / d


def apply_single_use(family: Family, d: int, eta: float, rho: np.ndarray) -> np.ndarray:
    """One use of the channel on a d x d state."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (d, d):
        raise DimensionMismatchError(f"expected a {d} x {d} matrix, got {rho.shape}")
    weights = single_use_weights(family, d, eta)
    out = np.zeros_like(rho)
    for m, n in product(range(d), repeat=2):
        if weights[m, n] > 0.0:
            u = displacement(d, WeylIndex(m, n))
            out += weights[m, n] * (u @ rho @ u.conj().T)
    return out


def orbit_average(rho: np.ndarray, d: int) -> np.ndarray:
    """(1/d^4) sum over a, b of (U_a (x) U_b) rho (U_a (x) U_b)^dagger."""
    rho = np.asarray(rho, dtype=complex)
    out = np.zeros_like(rho)
    for m, n, mp, np_ in product(range(d), repeat=4):
        out += conjugate_pair(rho, d, WeylIndex(m, n), WeylIndex(mp, np_))
    return out / d ** 4


def orbit_holevo(
    spec: ChannelSpec,
    rho: np.ndarray,
    method: str = "lapack",
    cap: Optional[int] = DEFAULT_ORACLE_CAP,
    allow_large: bool = False,
) -> float:
    """Holevo quantity of the equiprobable Weyl orbit of rho, member by member.

    By covariance it equals 2 log2 d - S(E(rho)).
    """
    d = spec.d
    rho = check_density_matrix(rho, d)
    members = d ** 4
    average = np.zeros_like(rho)
    entropies = []
    for m, n, mp, np_ in product(range(d), repeat=4):
        member = conjugate_pair(rho, d, WeylIndex(m, n), WeylIndex(mp, np_))
        out = apply_two_use(spec, member, cap=cap, allow_large=allow_large)
        average += out
        entropies.append(entropy_bits(hermitian_spectrum(out, method=method)))
    average /= members
    return entropy_bits(hermitian_spectrum(average, method=method)) - math.fsum(entropies) / members


def oracle_output(spec: ChannelSpec, s: SchmidtSpec, numerics: Numerics) -> np.ndarray:
    """Brute-force output for the pure input a Schmidt description names."""
    return apply_two_use_pure(
        spec,
        build_state(s),
        workers=numerics.workers,
        cap=numerics.oracle_cap,
        allow_large=numerics.allow_large,
    )
