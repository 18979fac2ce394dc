"""Analytic output states and spectra of the correlated two-use channel.

For a Schmidt-diagonal input sum_j c_j |jj> the QD output is

    (1 - mu) A + mu [(1 - nu) B + nu C + D]

and the QCD output is

    (1 - mu) d^2 A + mu d [(1 - nu) B + nu C]

with factors built below. Even d adds a cross term to B that couples |jj>
with |j + d/2, j + d/2>; odd d has no such term.

The factor builders also know the printed forms of three clauses that
disagree with the channel, so the errata ledger can measure them.
"""

import logging
import math
from typing import Dict, FrozenSet, List

import numpy as np

from ..exceptions import DimensionMismatchError, InvalidParameterError
from ..models.channel import ChannelSpec, Family, InputKind, Parity, SchmidtSpec
from ..models.results import ClosedFormOutput, Spectrum
from .channel import family_params
from .linalg import entropy_bits

logger = logging.getLogger(__name__)

# printed clauses that the factor builders can reproduce
PRINTED_C_PHASE = "qd.factor_c.phase"
PRINTED_B_CROSS = "qd.factor_b.cross_weight"
PRINTED_A_JOIN = "qcd.factor_a.join"

NO_PRINTED: FrozenSet[str] = frozenset()


def _pair_positions(d: int, m: int = 0) -> np.ndarray:
    """Flat index of |j+m, j+m> for j = 0..d-1."""
    return ((np.arange(d) + m) % d) * (d + 1)


def _schmidt_pieces(s: SchmidtSpec):
    d = s.d
    c = s.coefficients()
    alpha2 = np.abs(c) ** 2
    psi = np.zeros(d * d, dtype=complex)
    psi[_pair_positions(d)] = c
    rho = np.outer(psi, psi.conj())
    marginal = np.diag(alpha2)
    eye = np.eye(d)
    sides = np.kron(eye, marginal) + np.kron(marginal, eye)
    return c, alpha2, rho, sides


def _add_half_shift_term(b: np.ndarray, d: int, c: np.ndarray, weights: np.ndarray) -> None:
    """Add sum_{j,m} w_m c_j conj(c_{j+d/2}) |j+m, j+m><j+m+d/2, j+m+d/2|."""
    h = d // 2
    coupling = c * np.roll(c, -h).conj()
    for m in range(d):
        rows = _pair_positions(d, m)
        b[rows, np.roll(rows, -h)] += weights[m] * coupling


def qd_factors(
    d: int, p: float, q: float, s: SchmidtSpec, printed: FrozenSet[str] = NO_PRINTED
) -> Dict[str, np.ndarray]:
    """Factors A, B, C, D of the QD output."""
    eta = p - q
    n = d * d
    c, alpha2, rho, sides = _schmidt_pieces(s)

    a = d * d * q * q * np.eye(n, dtype=complex) + eta * eta * rho + d * q * eta * sides

    b = np.zeros((n, n), dtype=complex)
    cc = np.zeros((n, n), dtype=complex)
    pair = np.outer(c, c) if PRINTED_C_PHASE in printed else np.outer(c, c.conj())
    for m in range(d):
        idx = _pair_positions(d, m)
        b[idx, idx] += d * q * alpha2
        cc[np.ix_(idx, idx)] += d * q * pair
    if d % 2 == 0:
        weight = d if PRINTED_B_CROSS in printed else d * q
        _add_half_shift_term(b, d, c, np.full(d, weight))

    return {"A": a, "B": b, "C": cc, "D": eta * rho}


def qcd_factors(
    d: int, p: float, q: float, s: SchmidtSpec, printed: FrozenSet[str] = NO_PRINTED
) -> Dict[str, np.ndarray]:
    """Factors A, B, C of the QCD output."""
    n = d * d
    c, alpha2, rho, sides = _schmidt_pieces(s)
    diag = _pair_positions(d)
    shifts = np.full(d, q)
    shifts[0] = p

    paired = np.zeros((n, n), dtype=complex)
    paired[diag, diag] = alpha2
    identity_part = q * q * np.eye(n, dtype=complex)
    if PRINTED_A_JOIN in printed:
        a = identity_part + ((p - q) ** 2 * paired) @ (q * (p - q) * sides)
    else:
        a = identity_part + (p - q) ** 2 * paired + q * (p - q) * sides

    b = np.zeros((n, n), dtype=complex)
    b[diag, diag] = q + alpha2 * (p - q)
    if d % 2 == 0:
        _add_half_shift_term(b, d, c, shifts)

    cc = (p - q) * rho
    pair = np.outer(c, c.conj())
    for m in range(d):
        idx = _pair_positions(d, m)
        cc[np.ix_(idx, idx)] += q * pair

    return {"A": a, "B": b, "C": cc}


def output_matrix(
    spec: ChannelSpec, s: SchmidtSpec, printed: FrozenSet[str] = NO_PRINTED
) -> np.ndarray:
    """Raw assembled output matrix; printed clauses may break trace or symmetry."""
    if s.d != spec.d:
        raise DimensionMismatchError(f"state has d = {s.d}, channel has d = {spec.d}")
    if s.offset != 0:
        raise InvalidParameterError(
            f"closed-form output needs offset 0 (got {s.offset}); use the oracle path"
        )
    d, mu, nu = spec.d, spec.mu, spec.nu
    p, q = family_params(spec.family, d, spec.eta)

    if spec.family == Family.QD:
        f = qd_factors(d, p, q, s, printed)
        return (1.0 - mu) * f["A"] + mu * ((1.0 - nu) * f["B"] + nu * f["C"] + f["D"])
    f = qcd_factors(d, p, q, s, printed)
    return (1.0 - mu) * d * d * f["A"] + mu * d * ((1.0 - nu) * f["B"] + nu * f["C"])


def structured_output(spec: ChannelSpec, s: SchmidtSpec) -> ClosedFormOutput:
    """Two-use output for a Schmidt-diagonal input, with the parity-correct B."""
    return ClosedFormOutput(
        matrix=output_matrix(spec, s), family=spec.family, parity=spec.parity
    )


def _spectrum(values: List[float], d: int) -> Spectrum:
    return Spectrum(values=tuple(sorted(values)), dimension=d * d)


def product_spectrum(spec: ChannelSpec) -> Spectrum:
    """Output spectrum for the product input |00>.

    One top value, 2(d-1) edge values for |m0> and |0n>, and (d-1)^2 inner
    values of which the d-1 with m = n carry the memory boost. Nothing here
    depends on nu.
    """
    d, mu = spec.d, spec.mu
    p, q = family_params(spec.family, d, spec.eta)
    if spec.family == Family.QD:
        top = d * q + p - q
        head = (1.0 - mu) * top * top + mu * top
        edge = (1.0 - mu) * d * q * top
    else:
        head = (1.0 - mu) * d * d * p * p + mu * d * p
        edge = (1.0 - mu) * d * d * p * q
    inner = (1.0 - mu) * d * d * q * q
    boost = mu * d * q

    values = [head] + [edge] * (2 * (d - 1))
    values += [inner + (boost if m == n else 0.0) for m in range(1, d) for n in range(1, d)]
    return _spectrum(values, d)


def entangled_spectrum(spec: ChannelSpec) -> Spectrum:
    """Output spectrum for the maximally entangled input.

    The span of the |kk> states is circulant and diagonalised by Fourier
    vectors f_t; for even d the half-shift term contributes (-1)^t. The
    remaining d(d-1) states |ab>, a != b, share one background value.
    """
    d, mu, nu = spec.d, spec.mu, spec.nu
    p, q = family_params(spec.family, d, spec.eta)
    even = spec.parity == Parity.EVEN

    def half_shift(t: int) -> float:
        return 1.0 + (-1.0) ** t if even else 1.0

    if spec.family == Family.QD:
        eta = p - q
        background = (1.0 - mu) * q * (1.0 + eta)
        head = (1.0 - mu) * (p * eta + q) + mu * ((1.0 - nu) * (d * q * half_shift(0) + eta) + nu)
        block = [background + mu * (1.0 - nu) * d * q * half_shift(t) for t in range(1, d)]
    else:
        level = (1.0 - mu) * d * (p * p + (d - 1) * q * q)
        background = (1.0 - mu) * q * (2.0 - d * d * q)
        head = level + mu * ((1.0 - nu) * half_shift(0) / d + nu)
        block = [level + mu * (1.0 - nu) * half_shift(t) / d for t in range(1, d)]

    values = [head] + block + [background] * (d * (d - 1))
    return _spectrum(values, d)


def input_spectrum(spec: ChannelSpec, kind: InputKind) -> Spectrum:
    """Closed-form spectrum for a product or maximally entangled input."""
    if kind == InputKind.PRODUCT:
        return product_spectrum(spec)
    if kind == InputKind.ENTANGLED:
        return entangled_spectrum(spec)
    raise InvalidParameterError(f"no closed-form spectrum for {kind.value} inputs")


def mutual_information(d: int, s: Spectrum) -> float:
    """2 log2 d - S(output), clamped to [0, 2 log2 d]."""
    if s.dimension != d * d:
        raise DimensionMismatchError(
            f"spectrum has dimension {s.dimension}, expected {d * d} for d = {d}"
        )
    s.check_density()
    top = 2.0 * math.log2(d)
    return min(max(top - entropy_bits(s), 0.0), top)


def single_use_information(family: Family, d: int, eta: float) -> float:
    """log2 d - S(E(|0><0|)) for one memoryless use."""
    p, q = family_params(family, d, eta)
    if family == Family.QD:
        values = [eta + d * q] + [d * q] * (d - 1)
    else:
        values = [d * p] + [d * q] * (d - 1)
    top = math.log2(d)
    entropy = entropy_bits(Spectrum(values=tuple(sorted(values)), dimension=d))
    return min(max(top - entropy, 0.0), top)
