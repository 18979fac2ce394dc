"""Closed forms checked against the brute-force oracle."""

import logging
from typing import Optional

import numpy as np

from ..core.channel import oracle_output
from ..core.closedform import input_spectrum, structured_output
from ..core.errata import errata_ledger, spectrum_gap
from ..core.linalg import hermitian_spectrum
from ..core.states import selector_state
from ..exceptions import ValidationFailure
from ..models.channel import ChannelSpec, InputSelector
from ..models.results import DeviationReport, Numerics
from .curves import CLOSED_KINDS

logger = logging.getLogger(__name__)


def validate(
    spec: ChannelSpec,
    selector: InputSelector,
    numerics: Optional[Numerics] = None,
) -> DeviationReport:
    """Deviation of the closed-form spectrum and matrix from the oracle, plus errata.

    Product and entangled inputs compare the closed-form spectrum; every
    offset-0 input compares the structured output matrix entrywise. Inputs
    with a nonzero offset have no closed form and only feed the ledger's
    probe evaluation.
    """
    numerics = numerics or Numerics()
    state = selector_state(selector, spec.d)
    truth = oracle_output(spec, state, numerics)
    truth_spectrum = hermitian_spectrum(
        truth,
        method=numerics.eigensolver,
        tol=numerics.jacobi_tol,
        max_sweeps=numerics.jacobi_max_sweeps,
    )

    spectrum_deviation = None
    matrix_deviation = None
    if state.offset == 0:
        structured = structured_output(spec, state).matrix
        matrix_deviation = float(np.max(np.abs(structured - truth)))
        if selector.kind in CLOSED_KINDS:
            closed = input_spectrum(spec, selector.kind)
            spectrum_deviation = spectrum_gap(closed.values, truth_spectrum.values)
        else:
            found = hermitian_spectrum(
                structured,
                method=numerics.eigensolver,
                tol=numerics.jacobi_tol,
                max_sweeps=numerics.jacobi_max_sweeps,
            )
            spectrum_deviation = spectrum_gap(found.values, truth_spectrum.values)
    else:
        logger.warning("No closed form for offset %d; only the errata ledger runs", state.offset)

    report = DeviationReport(
        family=spec.family,
        d=spec.d,
        eta=spec.eta,
        mu=spec.mu,
        nu=spec.nu,
        input_label=selector.label,
        spectrum_deviation=spectrum_deviation,
        matrix_deviation=matrix_deviation,
        tolerance=numerics.validation_tol,
        errata=errata_ledger(spec, state if state.offset == 0 else None, numerics),
    )
    logger.info(
        "Validation %s d=%d eta=%g mu=%g nu=%g %s: max deviation %.3e (%d errata)",
        spec.family.value, spec.d, spec.eta, spec.mu, spec.nu, selector.label,
        report.max_deviation, len(report.errata),
    )
    return report


def check_report(report: DeviationReport) -> DeviationReport:
    """Return the report, or raise ValidationFailure when it exceeds its tolerance."""
    if not report.passed:
        raise ValidationFailure(
            f"closed form deviates from the oracle by {report.max_deviation:.3e} "
            f"(tolerance {report.tolerance:.1e})",
            report,
        )
    return report
