"""Crossover point mu_c where maximally entangled inputs overtake product inputs."""

import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect

from ..core.closedform import entangled_spectrum, mutual_information, product_spectrum
from ..exceptions import InvalidParameterError
from ..models.channel import ChannelSpec, Family
from ..models.results import CrossoverReport, CrossoverStatus, Numerics

logger = logging.getLogger(__name__)


def delta_information(spec: ChannelSpec, mu: float) -> float:
    """I(entangled) - I(product) at memory mu; positive means entanglement wins."""
    point = spec.with_mu(mu)
    entangled = mutual_information(spec.d, entangled_spectrum(point))
    separable = mutual_information(spec.d, product_spectrum(point))
    return entangled - separable


def delta_curve(spec: ChannelSpec, grid_size: int) -> Tuple[np.ndarray, np.ndarray]:
    """Delta I on a uniform grid of grid_size points in [0, 1]."""
    mus = np.linspace(0.0, 1.0, grid_size)
    return mus, np.array([delta_information(spec, float(mu)) for mu in mus])


def _sign_change_brackets(deltas: np.ndarray, zero_tol: float) -> List[Tuple[int, int]]:
    signed = [i for i, v in enumerate(deltas) if abs(v) > zero_tol]
    return [
        (i, j) for i, j in zip(signed, signed[1:])
        if (deltas[i] > 0) != (deltas[j] > 0)
    ]


def _refine(
    spec: ChannelSpec, lo: float, hi: float, tol: float
) -> Tuple[float, Tuple[float, float], Tuple[float, float]]:
    """Bisect a bracket and recover the final bracket from the evaluated points."""
    seen: Dict[float, float] = {}

    def f(mu: float) -> float:
        value = delta_information(spec, mu)
        seen[mu] = value
        return value

    root = bisect(f, lo, hi, xtol=tol / 2)
    f_lo = seen[lo]
    if seen.get(root) == 0.0:
        return root, (root, root), (0.0, 0.0)
    # every evaluation moved exactly one end of the bracket
    left = max(x for x, v in seen.items() if v * f_lo > 0)
    right = min(x for x, v in seen.items() if v * f_lo < 0 and x > left)
    return root, (left, right), (seen[left], seen[right])


def crossover_mu(
    spec: ChannelSpec,
    tol: float = 1e-8,
    numerics: Optional[Numerics] = None,
) -> CrossoverReport:
    """Scan Delta I(mu) and bisect every sign change to width tol.

    ``spec.mu`` is ignored. Grid points with |Delta I| <= zero_tol count as
    ties. With no sign change the status is ``entangled`` when Delta I is
    positive on the whole grid and ``none`` otherwise.
    """
    if tol <= 0:
        raise InvalidParameterError(f"crossover tolerance must be positive, got {tol}")
    numerics = numerics or Numerics()
    mus, deltas = delta_curve(spec, numerics.crossover_grid)
    brackets = _sign_change_brackets(deltas, numerics.zero_tol)

    if len(brackets) > 1:
        logger.warning(
            "%d sign changes of Delta I for %s d=%d eta=%g nu=%g",
            len(brackets), spec.family.value, spec.d, spec.eta, spec.nu,
        )

    roots: List[float] = []
    finals: List[Tuple[float, float]] = []
    ends: List[Tuple[float, float]] = []
    for i, j in brackets:
        root, bracket, values = _refine(spec, float(mus[i]), float(mus[j]), tol)
        roots.append(root)
        finals.append(bracket)
        ends.append(values)
        logger.info(
            "mu_c = %.12f in [%.12f, %.12f] for %s d=%d eta=%g nu=%g",
            root, bracket[0], bracket[1], spec.family.value, spec.d, spec.eta, spec.nu,
        )

    if roots:
        status = CrossoverStatus.CROSSING
    elif all(v > numerics.zero_tol for v in deltas):
        status = CrossoverStatus.ENTANGLED
    else:
        status = CrossoverStatus.NONE

    return CrossoverReport(
        family=spec.family,
        d=spec.d,
        eta=spec.eta,
        nu=spec.nu,
        status=status,
        mu_c=roots[0] if roots else None,
        roots=roots,
        brackets=finals,
        bracket_deltas=ends,
        delta_sign_changes=len(brackets),
        tolerance=tol,
        width=max((hi - lo for lo, hi in finals), default=None),
    )


def crossover_vs_dimension(
    family: Family,
    d_list: Sequence[int],
    eta: float,
    nu_list: Sequence[float],
    tol: float = 1e-8,
    numerics: Optional[Numerics] = None,
) -> List[CrossoverReport]:
    """One report per (d, nu), ordered by d and then by nu."""
    if not d_list:
        raise InvalidParameterError("crossover table needs at least one dimension")
    if not nu_list:
        raise InvalidParameterError("crossover table needs at least one nu value")
    numerics = numerics or Numerics()
    specs = [
        ChannelSpec(family=family, d=d, eta=eta, nu=nu)
        for d, nu in product(d_list, nu_list)
    ]

    def run(spec: ChannelSpec) -> CrossoverReport:
        return crossover_mu(spec, tol, numerics)

    if numerics.workers > 1 and len(specs) > 1:
        with ThreadPoolExecutor(max_workers=numerics.workers) as executor:
            return list(executor.map(run, specs))
    return [run(spec) for spec in specs]
