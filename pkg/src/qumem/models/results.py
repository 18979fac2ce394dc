"""Result records for qumem computations."""

import math
from enum import Enum
from pathlib import Path
from typing import Any, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..exceptions import NegativeEigenvalueError
from .channel import Family, InputSelector, Parity


class Method(str, Enum):
    """How a quantity should be computed."""
    CLOSED = "closed"
    ORACLE = "oracle"
    AUTO = "auto"


class Provenance(str, Enum):
    """How a quantity was actually computed."""
    CLOSED = "closed"
    STRUCTURED = "structured"
    ORACLE = "oracle"


class OutputFormat(str, Enum):
    """Output format options."""
    CSV = "csv"
    JSON = "json"


class Spectrum(BaseModel):
    """Eigenvalues of a Hermitian matrix of size `dimension`."""

    model_config = ConfigDict(frozen=True)

    values: Tuple[float, ...] = Field(..., description="Eigenvalues")
    dimension: int = Field(..., description="Number of eigenvalues", ge=1)

    @model_validator(mode="after")
    def check_length(self) -> "Spectrum":
        if len(self.values) != self.dimension:
            raise ValueError(
                f"spectrum has {len(self.values)} values for dimension {self.dimension}"
            )
        return self

    @property
    def total(self) -> float:
        return math.fsum(self.values)

    def check_density(self, sum_tol: float = 1e-10, clip: float = 1e-12) -> "Spectrum":
        """Enforce the density-matrix invariants and return self.

        Raises NegativeEigenvalueError below -clip and ValueError when the
        values do not sum to one within sum_tol.
        """
        low = min(self.values)
        if low < -clip:
            raise NegativeEigenvalueError(low, clip)
        if abs(self.total - 1.0) > sum_tol:
            raise ValueError(f"spectrum sums to {self.total:.15g}, not 1")
        return self


class ClosedFormOutput(BaseModel):
    """Two-use output state assembled from the analytic factors."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray = Field(..., description="d^2 x d^2 output state")
    family: Family
    parity: Parity

    @model_validator(mode="after")
    def check_state(self) -> "ClosedFormOutput":
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"output must be square, got shape {m.shape}")
        asymmetry = float(np.max(np.abs(m - m.conj().T)))
        if asymmetry > 1e-10:
            raise ValueError(f"output is not Hermitian (asymmetry {asymmetry:.3e})")
        trace = complex(np.trace(m))
        if abs(trace - 1.0) > 1e-10:
            raise ValueError(f"output has trace {trace.real:.15g}")
        return self


class MIResult(BaseModel):
    """Mutual information at a single parameter point."""

    family: Family
    d: int
    eta: float
    mu: float
    nu: float
    input_label: str
    method: Provenance
    information: float = Field(..., description="I(E_2) in bits")
    entropy: float = Field(..., description="Output entropy in bits")
    spectrum: Spectrum


class MICurve(BaseModel):
    """Mutual information as a function of the memory parameter."""

    family: Family
    d: int
    eta: float
    nu: float
    input: InputSelector
    grid: List[Tuple[float, float]] = Field(..., description="(mu, I) pairs")
    method: Provenance

    @model_validator(mode="after")
    def check_grid(self) -> "MICurve":
        mus = [mu for mu, _ in self.grid]
        if any(b <= a for a, b in zip(mus, mus[1:])):
            raise ValueError("mu values must be strictly increasing")
        if mus and (mus[0] < 0.0 or mus[-1] > 1.0):
            raise ValueError("mu values must lie in [0, 1]")
        top = 2.0 * math.log2(self.d)
        for mu, info in self.grid:
            if info < -1e-12 or info > top + 1e-12:
                raise ValueError(f"I = {info} at mu = {mu} outside [0, {top}]")
        return self

    @property
    def mus(self) -> List[float]:
        return [mu for mu, _ in self.grid]

    @property
    def values(self) -> List[float]:
        return [info for _, info in self.grid]


class CrossoverStatus(str, Enum):
    """Outcome of a crossover search."""
    CROSSING = "crossing"
    NONE = "none"
    ENTANGLED = "entangled"


class CrossoverReport(BaseModel):
    """Where maximally entangled inputs overtake product inputs."""

    family: Family
    d: int
    eta: float
    nu: float
    status: CrossoverStatus
    mu_c: Optional[float] = Field(default=None, description="First crossing point")
    roots: List[float] = Field(default_factory=list)
    brackets: List[Tuple[float, float]] = Field(default_factory=list)
    bracket_deltas: List[Tuple[float, float]] = Field(
        default_factory=list, description="Delta I at each bracket end"
    )
    delta_sign_changes: int = 0
    tolerance: float = Field(..., description="Requested bracket width")
    width: Optional[float] = Field(default=None, description="Widest final bracket")

    @model_validator(mode="after")
    def check_brackets(self) -> "CrossoverReport":
        if self.mu_c is None:
            return self
        for (lo, hi), (d_lo, d_hi) in zip(self.brackets, self.bracket_deltas):
            if hi - lo > self.tolerance:
                raise ValueError(f"bracket [{lo}, {hi}] wider than {self.tolerance}")
            if d_lo * d_hi > 0:
                raise ValueError(f"bracket [{lo}, {hi}] does not straddle a sign change")
        return self

    @property
    def bracket(self) -> Optional[Tuple[float, float]]:
        return self.brackets[0] if self.brackets else None


class ErratumRecord(BaseModel):
    """A printed formula that disagrees with the brute-force channel, and its fix."""

    location: str = Field(..., description="Formula label")
    discrepancy: str
    corrected_form: str
    max_deviation_before: float
    max_deviation_after: float
    probe: str = Field(default="", description="Input the clause was evaluated on")

    @model_validator(mode="after")
    def check_corrected(self) -> "ErratumRecord":
        if self.max_deviation_after > 1e-10:
            raise ValueError(
                f"{self.location}: corrected form still deviates by "
                f"{self.max_deviation_after:.3e}"
            )
        return self


class DeviationReport(BaseModel):
    """Closed form against the oracle for one parameter point."""

    family: Family
    d: int
    eta: float
    mu: float
    nu: float
    input_label: str
    spectrum_deviation: Optional[float] = None
    matrix_deviation: Optional[float] = None
    tolerance: float
    errata: List[ErratumRecord] = Field(default_factory=list)

    @property
    def max_deviation(self) -> float:
        found = [v for v in (self.spectrum_deviation, self.matrix_deviation) if v is not None]
        return max(found) if found else 0.0

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


class ResultTable(BaseModel):
    """Named columns and rows, ready for CSV or JSON emission."""

    columns: List[str]
    rows: List[List[Any]] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_widths(self) -> "ResultTable":
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(f"row {row!r} does not match columns {self.columns}")
        return self

    def records(self) -> List[dict]:
        return [dict(zip(self.columns, row)) for row in self.rows]


class Command(str, Enum):
    """CLI commands that produce data."""
    MI = "mi"
    SWEEP = "sweep"
    CROSSOVER = "crossover"
    CROSSOVER_TABLE = "crossover-table"
    ALPHA_SWEEP = "alpha-sweep"
    VALIDATE = "validate"
    FIGURE = "figure"


class RunConfig(BaseModel):
    """One fully parsed CLI invocation."""

    command: Command
    family: Family = Family.QD
    d: int = Field(default=2, ge=2)
    eta: float = 1.0
    mu: float = Field(default=0.0, ge=0.0, le=1.0)
    nu: float = Field(default=0.0, ge=0.0, le=1.0)
    input: InputSelector = Field(default_factory=InputSelector.entangled)
    grid: int = Field(default=101, ge=2)
    tol: float = Field(default=1e-8, gt=0.0)
    method: Method = Method.AUTO
    per_use: bool = False
    out: Optional[Path] = None
    output_format: OutputFormat = OutputFormat.CSV
    allow_large: bool = False
    d_list: List[int] = Field(default_factory=list)
    nu_list: List[float] = Field(default_factory=list)
    alpha_list: List[float] = Field(default_factory=list)
    figure: Optional[str] = None
    d_max: int = Field(default=20, ge=2)
    family_override: Optional[Family] = None


class RunResult(BaseModel):
    """Emitted data plus the exit status of a run."""

    table: ResultTable
    exit_code: int = 0
    message: str = ""
    text: str = Field(default="", description="Formatted table as emitted")


class Numerics(BaseModel):
    """Solver and tolerance settings shared by every computation."""

    model_config = ConfigDict(frozen=True)

    eigensolver: str = "jacobi"
    jacobi_tol: float = 1e-14
    jacobi_max_sweeps: int = 100
    workers: int = Field(default=1, ge=1)
    oracle_cap: Optional[int] = 12
    allow_large: bool = False
    zero_tol: float = 1e-12
    crossover_grid: int = Field(default=1001, ge=2)
    validation_tol: float = 1e-10
