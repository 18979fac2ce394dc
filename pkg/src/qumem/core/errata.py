"""Printed closed forms that disagree with the channel, measured against the oracle.

Each clause pairs a printed form with its correction. The ledger
evaluates both against brute-force outputs at the requested point and at
a fixed probe point, and records every clause whose printed form misses.
"""

import logging
from typing import Callable, Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..models.channel import ChannelSpec, Family, InputKind, Parity, SchmidtSpec
from ..models.results import ErratumRecord, Numerics
from .channel import family_params, oracle_output
from .closedform import (
    PRINTED_A_JOIN,
    PRINTED_B_CROSS,
    PRINTED_C_PHASE,
    entangled_spectrum,
    output_matrix,
    product_spectrum,
)
from .linalg import hermitian_spectrum

logger = logging.getLogger(__name__)

PROBE_MU = 0.6
PROBE_NU = 0.5


def probe_state(d: int) -> SchmidtSpec:
    """Schmidt state with unequal amplitudes and distinct phases."""
    weights = np.arange(1, d + 1, dtype=float)
    amplitudes = np.sqrt(weights / weights.sum())
    phases = 0.3 + 0.7 * np.arange(d)
    return SchmidtSpec(d=d, amplitudes=tuple(amplitudes), phases=tuple(phases))


def _literal_counts(d: int) -> Tuple[int, int]:
    """Integers m with 0 < m < d/2, and with d/2 <= m < d."""
    low = (d - 1) // 2
    return low, d - 1 - low


def printed_qd_entangled(spec: ChannelSpec) -> List[float]:
    """QD entangled eigenvalues as printed, read by their literal index ranges."""
    d, mu, nu = spec.d, spec.mu, spec.nu
    p, q = family_params(spec.family, d, spec.eta)
    base = (1.0 - mu) * q * (1.0 + p - q)
    if spec.parity == Parity.EVEN:
        head = (1.0 - mu) * (p * (p - q) + q) + mu * (
            2.0 * (1.0 - nu) * d * q + nu * d * d * q + p - q
        )
        low, high = _literal_counts(d)
        return (
            [head]
            + [base + 2.0 * mu * (1.0 - nu) * d * q] * low
            + [base] * high
            + [base] * ((d - 1) ** 2)
        )
    head = (1.0 - mu) * (p * (p - q) + q) + mu * ((1.0 - nu) * (d * q + p - q) + nu)
    return [head] + [
        base + (mu * (1.0 - nu) * d * q if m == n else 0.0)
        for m in range(1, d)
        for n in range(1, d)
    ]


def printed_qcd_entangled(spec: ChannelSpec, even_form: bool) -> List[float]:
    """QCD entangled eigenvalues as printed for even (or odd) dimensions."""
    d, mu, nu = spec.d, spec.mu, spec.nu
    p, q = family_params(spec.family, d, spec.eta)
    level = (1.0 - mu) * d * (q * q * (d - 1) + p * p)
    off = (1.0 - mu) * q * (2.0 - d * d * q)
    pairs = (d - 1) * (d - 2)
    if even_form:
        low, high = _literal_counts(d)
        head = level + mu * ((1.0 - nu) * 2.0 / d + nu)
        return [head] + [level + mu * (1.0 - nu) * 2.0 / d] * low + [level] * high + [off] * pairs
    head = level + mu * ((1.0 - nu) / d + nu)
    return [head] + [level + mu * (1.0 - nu) / d] * (d - 1) + [off] * pairs


def spectrum_gap(a: Sequence[float], b: Sequence[float]) -> float:
    """Largest gap between sorted lists, the shorter padded with zeros."""
    n = max(len(a), len(b))
    left = np.sort(np.pad(np.asarray(a, dtype=float), (0, n - len(a))))
    right = np.sort(np.pad(np.asarray(b, dtype=float), (0, n - len(b))))
    return float(np.max(np.abs(left - right))) if n else 0.0


class FactorClause(NamedTuple):
    location: str
    family: Family
    even_only: bool
    discrepancy: str
    corrected_form: str


class SpectrumClause(NamedTuple):
    location: str
    family: Family
    parity: Parity
    kind: InputKind
    printed: Callable[[ChannelSpec], List[float]]
    discrepancy: str
    corrected_form: str


FACTOR_CLAUSES: Tuple[FactorClause, ...] = (
    FactorClause(
        PRINTED_C_PHASE, Family.QD, False,
        "factor C carries the phase exp(i(phi_i + phi_j))",
        "factor C carries exp(i(phi_i - phi_j)); the U (x) U phases cancel on |jj>",
    ),
    FactorClause(
        PRINTED_B_CROSS, Family.QD, True,
        "half-shift term of factor B is weighted by d",
        "half-shift term of factor B is weighted by d q",
    ),
    FactorClause(
        PRINTED_A_JOIN, Family.QCD, False,
        "paired and one-sided terms of factor A are joined by a product",
        "the terms of factor A are summed",
    ),
)

SPECTRUM_CLAUSES: Tuple[SpectrumClause, ...] = (
    SpectrumClause(
        "qd.entangled_spectrum.even", Family.QD, Parity.EVEN, InputKind.ENTANGLED,
        printed_qd_entangled,
        "lists d^2 - d + 1 values; the d - 1 states |0n> are missing",
        "head, d - 1 Fourier values (2 d q boost on even t) and d(d - 1) background values",
    ),
    SpectrumClause(
        "qd.entangled_spectrum.odd", Family.QD, Parity.ODD, InputKind.ENTANGLED,
        printed_qd_entangled,
        "lists 1 + (d - 1)^2 values",
        "head, d - 1 boosted Fourier values and d(d - 1) background values",
    ),
    SpectrumClause(
        "qcd.entangled_spectrum.even", Family.QCD, Parity.EVEN, InputKind.ENTANGLED,
        lambda spec: printed_qcd_entangled(spec, even_form=True),
        "lists d^2 - 2d + 2 values; the off-diagonal family needs d(d - 1) members",
        "head, d - 1 Fourier values and d(d - 1) values (1 - mu) q (2 - d^2 q)",
    ),
    SpectrumClause(
        "qcd.entangled_spectrum.odd", Family.QCD, Parity.ODD, InputKind.ENTANGLED,
        lambda spec: printed_qcd_entangled(spec, even_form=False),
        "lists d^2 - 2d + 2 values; the off-diagonal family needs d(d - 1) members",
        "head, d - 1 Fourier values and d(d - 1) values (1 - mu) q (2 - d^2 q)",
    ),
    SpectrumClause(
        "qcd.product_spectrum.odd", Family.QCD, Parity.ODD, InputKind.PRODUCT,
        lambda spec: printed_qcd_entangled(spec, even_form=True),
        "odd-d product spectrum refers to the entangled-input eigenvalues",
        "odd d shares the product spectrum of even d",
    ),
)


def _probe_points(spec: ChannelSpec) -> List[Tuple[str, ChannelSpec]]:
    points = [(f"mu={spec.mu:g} nu={spec.nu:g}", spec)]
    probe = spec.with_mu(PROBE_MU).with_nu(PROBE_NU)
    if probe != spec:
        points.append((f"mu={PROBE_MU:g} nu={PROBE_NU:g}", probe))
    return points


class _OracleCache:
    """Oracle outputs and spectra keyed by (spec, state)."""

    def __init__(self, numerics: Numerics):
        self.numerics = numerics
        self._outputs: Dict[Tuple[ChannelSpec, SchmidtSpec], np.ndarray] = {}
        self._spectra: Dict[Tuple[ChannelSpec, SchmidtSpec], List[float]] = {}

    def output(self, spec: ChannelSpec, s: SchmidtSpec) -> np.ndarray:
        key = (spec, s)
        if key not in self._outputs:
            self._outputs[key] = oracle_output(spec, s, self.numerics)
        return self._outputs[key]

    def spectrum(self, spec: ChannelSpec, s: SchmidtSpec) -> List[float]:
        key = (spec, s)
        if key not in self._spectra:
            found = hermitian_spectrum(
                self.output(spec, s),
                method=self.numerics.eigensolver,
                tol=self.numerics.jacobi_tol,
                max_sweeps=self.numerics.jacobi_max_sweeps,
            )
            self._spectra[key] = list(found.values)
        return self._spectra[key]


def _factor_deviation(
    clause: FactorClause,
    points: List[Tuple[str, ChannelSpec]],
    states: List[Tuple[str, SchmidtSpec]],
    cache: _OracleCache,
) -> Tuple[float, float, str]:
    before, after, where = 0.0, 0.0, ""
    printed: FrozenSet[str] = frozenset({clause.location})
    for point_label, point in points:
        for state_label, s in states:
            truth = cache.output(point, s)
            miss = float(np.max(np.abs(output_matrix(point, s, printed) - truth)))
            fixed = float(np.max(np.abs(output_matrix(point, s) - truth)))
            after = max(after, fixed)
            if miss > before:
                before, where = miss, f"{point_label} input={state_label}"
    return before, after, where


def _spectrum_deviation(
    clause: SpectrumClause,
    points: List[Tuple[str, ChannelSpec]],
    cache: _OracleCache,
) -> Tuple[float, float, str]:
    before, after, where = 0.0, 0.0, ""
    corrected = product_spectrum if clause.kind == InputKind.PRODUCT else entangled_spectrum
    for point_label, point in points:
        s = (
            SchmidtSpec.product(point.d)
            if clause.kind == InputKind.PRODUCT
            else SchmidtSpec.maximally_entangled(point.d)
        )
        truth = cache.spectrum(point, s)
        miss = spectrum_gap(clause.printed(point), truth)
        fixed = spectrum_gap(corrected(point).values, truth)
        after = max(after, fixed)
        if miss > before:
            before, where = miss, f"{point_label} input={clause.kind.value}"
    return before, after, where


def errata_ledger(
    spec: ChannelSpec,
    state: Optional[SchmidtSpec],
    numerics: Optional[Numerics] = None,
) -> List[ErratumRecord]:
    """Records for every printed clause that misses the oracle at this spec.

    Factor clauses are evaluated on ``state`` (when it has offset 0) and on
    a fixed probe state with unequal amplitudes and distinct phases.
    Spectrum clauses are evaluated on their own input. Both run at the
    requested memory point and at a fixed probe point.
    """
    numerics = numerics or Numerics()
    tol = numerics.validation_tol
    cache = _OracleCache(numerics)
    points = _probe_points(spec)

    states: List[Tuple[str, SchmidtSpec]] = []
    if state is not None and state.offset == 0:
        states.append(("requested", state))
    states.append(("probe", probe_state(spec.d)))

    records: List[ErratumRecord] = []
    for clause in FACTOR_CLAUSES:
        if clause.family != spec.family or (clause.even_only and spec.parity != Parity.EVEN):
            continue
        before, after, where = _factor_deviation(clause, points, states, cache)
        if before > tol:
            records.append(ErratumRecord(
                location=clause.location,
                discrepancy=clause.discrepancy,
                corrected_form=clause.corrected_form,
                max_deviation_before=before,
                max_deviation_after=after,
                probe=where,
            ))

    for sclause in SPECTRUM_CLAUSES:
        if sclause.family != spec.family or sclause.parity != spec.parity:
            continue
        before, after, where = _spectrum_deviation(sclause, points, cache)
        if before > tol:
            records.append(ErratumRecord(
                location=sclause.location,
                discrepancy=sclause.discrepancy,
                corrected_form=sclause.corrected_form,
                max_deviation_before=before,
                max_deviation_after=after,
                probe=where,
            ))

    for record in records:
        logger.info(
            "Erratum %s: %.3e before, %.3e after (%s)",
            record.location, record.max_deviation_before, record.max_deviation_after,
            record.probe,
        )
    return records


def clause_locations() -> List[str]:
    """Every clause the ledger knows about."""
    return [c.location for c in FACTOR_CLAUSES] + [c.location for c in SPECTRUM_CLAUSES]


__all__ = [
    "FACTOR_CLAUSES",
    "SPECTRUM_CLAUSES",
    "clause_locations",
    "errata_ledger",
    "printed_qcd_entangled",
    "printed_qd_entangled",
    "probe_state",
    "spectrum_gap",
]

