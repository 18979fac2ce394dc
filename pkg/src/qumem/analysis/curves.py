"""Mutual information at single points and along memory-parameter grids."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..core.channel import oracle_output
from ..core.closedform import input_spectrum, mutual_information, structured_output
from ..core.linalg import entropy_bits, hermitian_spectrum
from ..core.states import selector_state
from ..exceptions import InvalidParameterError
from ..models.channel import ChannelSpec, Family, InputKind, InputSelector
from ..models.results import MICurve, MIResult, Method, Numerics, Provenance, Spectrum

logger = logging.getLogger(__name__)

CLOSED_KINDS = (InputKind.PRODUCT, InputKind.ENTANGLED)


class Crossing(NamedTuple):
    """Sign change of a - b between grid points lo and hi."""
    lo: int
    hi: int
    mu: float


def _numeric_spectrum(matrix: np.ndarray, numerics: Numerics) -> Spectrum:
    return hermitian_spectrum(
        matrix,
        method=numerics.eigensolver,
        tol=numerics.jacobi_tol,
        max_sweeps=numerics.jacobi_max_sweeps,
    )


def resolve_method(selector: InputSelector, d: int, method: Method) -> Provenance:
    """How a point will be computed for this input and requested method."""
    if method == Method.ORACLE:
        return Provenance.ORACLE
    if selector.kind in CLOSED_KINDS:
        return Provenance.CLOSED
    offset = selector_state(selector, d).offset
    if offset == 0:
        return Provenance.STRUCTURED
    if method == Method.CLOSED:
        raise InvalidParameterError(
            f"no closed form for Schmidt inputs with offset {offset}; use --method oracle or auto"
        )
    return Provenance.ORACLE


def output_spectrum(
    spec: ChannelSpec,
    selector: InputSelector,
    provenance: Provenance,
    numerics: Numerics,
) -> Spectrum:
    """Output spectrum by the given route."""
    if provenance == Provenance.CLOSED:
        return input_spectrum(spec, selector.kind)
    state = selector_state(selector, spec.d)
    if provenance == Provenance.STRUCTURED:
        return _numeric_spectrum(structured_output(spec, state).matrix, numerics)
    return _numeric_spectrum(oracle_output(spec, state, numerics), numerics)


def mi_point(
    spec: ChannelSpec,
    selector: InputSelector,
    method: Method = Method.AUTO,
    numerics: Optional[Numerics] = None,
) -> MIResult:
    """Mutual information, output entropy and spectrum at one parameter point."""
    numerics = numerics or Numerics()
    provenance = resolve_method(selector, spec.d, method)
    spectrum = output_spectrum(spec, selector, provenance, numerics)
    info = mutual_information(spec.d, spectrum)
    logger.debug(
        "I(%s d=%d eta=%g mu=%g nu=%g %s) = %.17g via %s",
        spec.family.value, spec.d, spec.eta, spec.mu, spec.nu,
        selector.label, info, provenance.value,
    )
    return MIResult(
        family=spec.family,
        d=spec.d,
        eta=spec.eta,
        mu=spec.mu,
        nu=spec.nu,
        input_label=selector.label,
        method=provenance,
        information=info,
        entropy=entropy_bits(spectrum),
        spectrum=spectrum,
    )


def mu_grid(grid_size: int) -> List[float]:
    """Uniform grid on [0, 1] with both endpoints."""
    if grid_size < 2:
        raise InvalidParameterError(f"grid size must be at least 2, got {grid_size}")
    return [float(mu) for mu in np.linspace(0.0, 1.0, grid_size)]


def mi_vs_mu(
    spec: ChannelSpec,
    selector: InputSelector,
    grid_size: int = 101,
    method: Method = Method.AUTO,
    numerics: Optional[Numerics] = None,
) -> MICurve:
    """I(mu) on a uniform grid; the memory parameter of ``spec`` is ignored.

    Points are independent and may be evaluated concurrently; the curve is
    assembled in grid order.
    """
    numerics = numerics or Numerics()
    mus = mu_grid(grid_size)
    provenance = resolve_method(selector, spec.d, method)

    def point(mu: float) -> float:
        return mi_point(spec.with_mu(mu), selector, method, numerics).information

    if numerics.workers > 1 and provenance != Provenance.CLOSED:
        with ThreadPoolExecutor(max_workers=numerics.workers) as executor:
            values = list(executor.map(point, mus))
    else:
        values = [point(mu) for mu in mus]

    return MICurve(
        family=spec.family,
        d=spec.d,
        eta=spec.eta,
        nu=spec.nu,
        input=selector,
        grid=list(zip(mus, values)),
        method=provenance,
    )


def alpha_sweep(
    family: Family,
    d: int,
    eta: float,
    nu: float,
    alpha_list: Sequence[float],
    grid_size: int = 101,
    numerics: Optional[Numerics] = None,
) -> List[MICurve]:
    """One ansatz curve per angle, through the structured output."""
    if not alpha_list:
        raise InvalidParameterError("alpha sweep needs at least one angle")
    for alpha in alpha_list:
        if not (0.0 <= alpha <= math.pi / 2 + 1e-15):
            raise InvalidParameterError(f"ansatz angle {alpha} outside [0, pi/2]")
    spec = ChannelSpec(family=family, d=d, eta=eta, nu=nu)
    return [
        mi_vs_mu(spec, InputSelector.ansatz(alpha), grid_size, Method.CLOSED, numerics)
        for alpha in alpha_list
    ]


def curve_crossings(a: MICurve, b: MICurve, zero_tol: float = 1e-12) -> List[Crossing]:
    """Sign changes of a - b on their shared grid, linearly interpolated.

    Grid points where |a - b| <= zero_tol are ties and never form one end
    of a sign change.
    """
    if a.mus != b.mus:
        raise InvalidParameterError("curves are on different grids")
    mus = a.mus
    delta = [x - y for x, y in zip(a.values, b.values)]
    signed = [(i, v) for i, v in enumerate(delta) if abs(v) > zero_tol]

    crossings: List[Crossing] = []
    for (i, di), (j, dj) in zip(signed, signed[1:]):
        if (di > 0) != (dj > 0):
            mu = mus[i] + (mus[j] - mus[i]) * di / (di - dj)
            crossings.append(Crossing(lo=i, hi=j, mu=mu))
    return crossings


def sweep_crossings(
    curves: Sequence[MICurve], reference: Optional[MICurve] = None, zero_tol: float = 1e-12
) -> List[Tuple[str, str, float]]:
    """(label, label, mu) for every adjacent pair and every curve against a reference."""
    found: List[Tuple[str, str, float]] = []
    for left, right in zip(curves, curves[1:]):
        for c in curve_crossings(left, right, zero_tol):
            found.append((left.input.label, right.input.label, c.mu))
    if reference is not None:
        for curve in curves:
            for c in curve_crossings(curve, reference, zero_tol):
                found.append((curve.input.label, reference.input.label, c.mu))
    for left_label, right_label, mu in found:
        logger.info("Curves %s and %s cross near mu = %.6f", left_label, right_label, mu)
    return found
