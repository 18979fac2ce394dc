"""Experiment runner for qumem."""

import logging
import sys
from typing import Callable, Dict, List

from ..analysis.crossover import crossover_mu, crossover_vs_dimension
from ..analysis.curves import alpha_sweep, mi_point, mi_vs_mu, sweep_crossings
from ..analysis.validation import check_report, validate
from ..exceptions import ValidationFailure
from ..models.channel import ChannelSpec, InputSelector
from ..models.results import (
    Command,
    CrossoverReport,
    DeviationReport,
    MICurve,
    Method,
    Numerics,
    ResultTable,
    RunConfig,
    RunResult,
)
from ..presets.figure_presets import FigurePreset, FigurePresetManager, PresetKind
from ..utils.formatters import format_table
from .config import Config

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

MI_COLUMNS = ["family", "d", "eta", "mu", "nu", "input", "method", "I", "S", "spectrum"]
SWEEP_COLUMNS = ["mu", "I"]
ALPHA_COLUMNS = ["alpha", "mu", "I"]
FIGURE_COLUMNS = ["d", "nu", "input", "mu", "I"]
TABLE_COLUMNS = ["d", "nu", "eta", "mu_c", "status"]
CROSSOVER_COLUMNS = [
    "family", "d", "eta", "nu", "status", "mu_c", "mu_lo", "mu_hi", "sign_changes", "width",
]
VALIDATION_EXIT_CODE = 3

VALIDATE_COLUMNS = ["check", "location", "deviation_before", "deviation_after", "passed"]


def setup_logging(config: Config) -> logging.Logger:
    """Configure the qumem logger: console on stderr, optional log file."""
    logger = logging.getLogger("qumem")
    logger.setLevel(logging.DEBUG)

    # Remove existing handlers
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)

    formatter = logging.Formatter(LOG_FORMAT)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logging.DEBUG if config.debug else config.log_level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if config.log_file:
        file_handler = logging.FileHandler(config.log_file, encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


class ExperimentRunner:
    """Dispatches a parsed run configuration and emits its table."""

    def __init__(self, config: Config):
        """Initialize experiment runner."""
        self.config = config
        self.numerics = config.numerics()
        self.presets = FigurePresetManager()
        self.logger = setup_logging(config)

        self._handlers: Dict[Command, Callable[[RunConfig, Numerics], RunResult]] = {
            Command.MI: self._run_mi,
            Command.SWEEP: self._run_sweep,
            Command.CROSSOVER: self._run_crossover,
            Command.CROSSOVER_TABLE: self._run_crossover_table,
            Command.ALPHA_SWEEP: self._run_alpha_sweep,
            Command.VALIDATE: self._run_validate,
            Command.FIGURE: self._run_figure,
        }

    def run(self, run_config: RunConfig) -> RunResult:
        """Run one command and write its table to the requested destination."""
        self.logger.info("Starting %s: %s", run_config.command.value, run_config.model_dump(
            exclude={"command"}, exclude_none=True, mode="json",
        ))
        numerics = self.numerics
        if run_config.allow_large:
            numerics = numerics.model_copy(update={"allow_large": True})

        result = self._handlers[run_config.command](run_config, numerics)
        result.text = format_table(result.table, run_config.output_format, run_config.out)
        self.logger.info(
            "Finished %s: %d row(s), exit code %d",
            run_config.command.value, len(result.table.rows), result.exit_code,
        )
        return result

    @staticmethod
    def _spec(rc: RunConfig) -> ChannelSpec:
        return ChannelSpec(family=rc.family, d=rc.d, eta=rc.eta, mu=rc.mu, nu=rc.nu)

    @staticmethod
    def _scale(rc: RunConfig, info: float) -> float:
        return info / 2.0 if rc.per_use else info

    def _run_mi(self, rc: RunConfig, numerics: Numerics) -> RunResult:
        result = mi_point(self._spec(rc), rc.input, rc.method, numerics)
        row = [
            result.family, result.d, result.eta, result.mu, result.nu, result.input_label,
            result.method, self._scale(rc, result.information), result.entropy,
            list(result.spectrum.values),
        ]
        return RunResult(table=ResultTable(columns=MI_COLUMNS, rows=[row]))

    def _run_sweep(self, rc: RunConfig, numerics: Numerics) -> RunResult:
        curve = mi_vs_mu(self._spec(rc), rc.input, rc.grid, rc.method, numerics)
        rows = [[mu, self._scale(rc, info)] for mu, info in curve.grid]
        return RunResult(table=ResultTable(columns=SWEEP_COLUMNS, rows=rows))

    @staticmethod
    def _crossover_row(report: CrossoverReport) -> list:
        lo, hi = report.bracket if report.bracket else (None, None)
        return [
            report.family, report.d, report.eta, report.nu, report.status, report.mu_c,
            lo, hi, report.delta_sign_changes, report.width,
        ]

    def _run_crossover(self, rc: RunConfig, numerics: Numerics) -> RunResult:
        report = crossover_mu(self._spec(rc), rc.tol, numerics)
        return RunResult(
            table=ResultTable(columns=CROSSOVER_COLUMNS, rows=[self._crossover_row(report)])
        )

    @staticmethod
    def _table_rows(reports: List[CrossoverReport]) -> List[list]:
        return [[r.d, r.nu, r.eta, r.mu_c, r.status] for r in reports]

    def _run_crossover_table(self, rc: RunConfig, numerics: Numerics) -> RunResult:
        reports = crossover_vs_dimension(
            rc.family, rc.d_list or [rc.d], rc.eta, rc.nu_list or [rc.nu], rc.tol, numerics,
        )
        return RunResult(table=ResultTable(columns=TABLE_COLUMNS, rows=self._table_rows(reports)))

    def _alpha_rows(self, rc: RunConfig, curves: List[MICurve]) -> List[list]:
        return [
            [curve.input.alpha, mu, self._scale(rc, info)]
            for curve in curves
            for mu, info in curve.grid
        ]

    def _run_alpha_sweep(self, rc: RunConfig, numerics: Numerics) -> RunResult:
        alphas = rc.alpha_list or self.presets.get("fig2").alphas(rc.d)
        curves = alpha_sweep(rc.family, rc.d, rc.eta, rc.nu, alphas, rc.grid, numerics)
        reference = mi_vs_mu(self._spec(rc), InputSelector.product(), rc.grid, Method.AUTO, numerics)
        sweep_crossings(curves, reference, numerics.zero_tol)
        return RunResult(table=ResultTable(columns=ALPHA_COLUMNS, rows=self._alpha_rows(rc, curves)))

    def _run_validate(self, rc: RunConfig, numerics: Numerics) -> RunResult:
        report = validate(self._spec(rc), rc.input, numerics)
        rows = self._validation_rows(report)
        try:
            check_report(report)
        except ValidationFailure as e:
            self.logger.error(str(e))
            return RunResult(
                table=ResultTable(columns=VALIDATE_COLUMNS, rows=rows), exit_code=VALIDATION_EXIT_CODE,
                message=str(e),
            )
        return RunResult(table=ResultTable(columns=VALIDATE_COLUMNS, rows=rows))

    @staticmethod
    def _validation_rows(report: DeviationReport) -> List[list]:
        rows = []
        tol = report.tolerance
        for check, deviation in (
            ("spectrum", report.spectrum_deviation),
            ("matrix", report.matrix_deviation),
        ):
            if deviation is not None:
                rows.append([check, report.input_label, None, deviation, deviation <= tol])
        for record in report.errata:
            rows.append([
                "erratum", record.location, record.max_deviation_before,
                record.max_deviation_after, record.max_deviation_after <= tol,
            ])
        return rows

    def _run_figure(self, rc: RunConfig, numerics: Numerics) -> RunResult:
        preset = self.presets.get(rc.figure or "").with_family(rc.family_override)
        self.logger.info("Figure %s: %s", preset.name, preset.description)
        if preset.kind == PresetKind.CROSSOVER:
            reports = crossover_vs_dimension(
                preset.family, preset.dimensions(rc.d_max), preset.eta, preset.nu_list,
                rc.tol, numerics,
            )
            return RunResult(table=ResultTable(columns=TABLE_COLUMNS, rows=self._table_rows(reports)))
        if preset.kind == PresetKind.ALPHA:
            return self._alpha_figure(rc, preset, numerics)
        return self._curve_figure(rc, preset, numerics)

    def _alpha_figure(self, rc: RunConfig, preset: FigurePreset, numerics: Numerics) -> RunResult:
        rows: List[list] = []
        for d in preset.d_list:
            for nu in preset.nu_list:
                curves = alpha_sweep(
                    preset.family, d, preset.eta, nu, preset.alphas(d), rc.grid, numerics,
                )
                sweep_crossings(curves, zero_tol=numerics.zero_tol)
                rows.extend(self._alpha_rows(rc, curves))
        return RunResult(table=ResultTable(columns=ALPHA_COLUMNS, rows=rows))

    def _curve_figure(self, rc: RunConfig, preset: FigurePreset, numerics: Numerics) -> RunResult:
        rows: List[list] = []
        for d in preset.d_list:
            for nu in preset.nu_list:
                spec = ChannelSpec(family=preset.family, d=d, eta=preset.eta, nu=nu)
                for selector in preset.selectors():
                    curve = mi_vs_mu(spec, selector, rc.grid, Method.AUTO, numerics)
                    rows.extend(
                        [d, nu, selector.label, mu, self._scale(rc, info)]
                        for mu, info in curve.grid
                    )
        return RunResult(table=ResultTable(columns=FIGURE_COLUMNS, rows=rows))
