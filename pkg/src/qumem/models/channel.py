"""Channel and input-state models for qumem."""

import math
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..exceptions import InvalidParameterError


class Family(str, Enum):
    """Supported noise families."""
    QD = "qd"
    QCD = "qcd"


class Parity(str, Enum):
    """Parity of the single-use dimension."""
    EVEN = "even"
    ODD = "odd"

    @classmethod
    def of(cls, d: int) -> "Parity":
        return cls.EVEN if d % 2 == 0 else cls.ODD


class InputKind(str, Enum):
    """Input-state families."""
    PRODUCT = "product"
    ENTANGLED = "entangled"
    ANSATZ = "ansatz"
    SCHMIDT = "schmidt"


def eta_range(family: Family, d: int) -> Tuple[float, float]:
    """Valid interval of the noise parameter eta for a family and dimension."""
    if family == Family.QD:
        return (-1.0 / (d * d - 1), 1.0)
    return (-1.0 / (d - 1), 1.0)


def eta_from_p(family: Family, d: int, p: float) -> float:
    """Noise parameter eta for an identity-weight p.

    QD uses eta = p - q with q = (1 - p)/(d^2 - 1); QCD uses eta = d(p - q)
    with q = (1 - dp)/(d(d - 1)).
    """
    top = 1.0 if family == Family.QD else 1.0 / d
    if not (0.0 <= p <= top + 1e-15):
        raise InvalidParameterError(f"p = {p} outside [0, {top:g}] for {family.value.upper()} with d = {d}")
    if family == Family.QD:
        return (d * d * p - 1.0) / (d * d - 1)
    return (d * d * p - 1.0) / (d - 1)


class ChannelSpec(BaseModel):
    """Two-use channel parameters: family, dimension, noise, memory and phase type."""

    model_config = ConfigDict(frozen=True)

    family: Family = Field(..., description="Noise family")
    d: int = Field(..., description="Single-use dimension", ge=2)
    eta: float = Field(..., description="Noise parameter")
    mu: float = Field(default=0.0, description="Memory parameter", ge=0.0, le=1.0)
    nu: float = Field(default=0.0, description="Phase-correlation parameter", ge=0.0, le=1.0)

    @model_validator(mode="after")
    def check_eta(self) -> "ChannelSpec":
        """Keep eta inside the family's interval."""
        lo, hi = eta_range(self.family, self.d)
        # boundary values computed as 1/(d-1) etc. may round a hair outside
        if not (lo - 1e-15 <= self.eta <= hi + 1e-15):
            raise ValueError(
                f"eta = {self.eta} outside [{lo:.17g}, {hi:g}] for "
                f"{self.family.value.upper()} with d = {self.d}"
            )
        return self

    @property
    def parity(self) -> Parity:
        return Parity.of(self.d)

    def with_mu(self, mu: float) -> "ChannelSpec":
        """Copy with a different memory parameter."""
        return ChannelSpec(family=self.family, d=self.d, eta=self.eta, mu=mu, nu=self.nu)

    def with_nu(self, nu: float) -> "ChannelSpec":
        """Copy with a different phase-correlation parameter."""
        return ChannelSpec(family=self.family, d=self.d, eta=self.eta, mu=self.mu, nu=nu)

    @classmethod
    def from_p(cls, family: Family, d: int, p: float, mu: float = 0.0, nu: float = 0.0) -> "ChannelSpec":
        """Build a spec from the identity weight p instead of eta."""
        return cls(family=family, d=d, eta=eta_from_p(family, d, p), mu=mu, nu=nu)


class SchmidtSpec(BaseModel):
    """Input state sum_j alpha_j e^{i phi_j} |j>|j+offset>."""

    model_config = ConfigDict(frozen=True)

    d: int = Field(..., description="Single-use dimension", ge=2)
    amplitudes: Tuple[float, ...] = Field(..., description="Nonnegative Schmidt amplitudes")
    phases: Tuple[float, ...] = Field(default=(), description="Phases in radians")
    offset: int = Field(default=0, description="Offset m of the second slot", ge=0)

    @model_validator(mode="after")
    def check_state(self) -> "SchmidtSpec":
        """Check lengths, signs and normalisation."""
        if len(self.amplitudes) != self.d:
            raise ValueError(f"expected {self.d} amplitudes, got {len(self.amplitudes)}")
        if self.phases and len(self.phases) != self.d:
            raise ValueError(f"expected {self.d} phases, got {len(self.phases)}")
        if any(a < 0 for a in self.amplitudes):
            raise ValueError("amplitudes must be nonnegative")
        norm = math.fsum(a * a for a in self.amplitudes)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"amplitudes are not normalised: sum alpha_j^2 = {norm:.15g}")
        if self.offset >= self.d:
            raise ValueError(f"offset {self.offset} outside 0..{self.d - 1}")
        return self

    @property
    def phase_values(self) -> Tuple[float, ...]:
        return self.phases if self.phases else (0.0,) * self.d

    def coefficients(self) -> np.ndarray:
        """Complex Schmidt coefficients alpha_j e^{i phi_j}."""
        alpha = np.asarray(self.amplitudes, dtype=float)
        phi = np.asarray(self.phase_values, dtype=float)
        return alpha * np.exp(1j * phi)

    @classmethod
    def product(cls, d: int) -> "SchmidtSpec":
        return cls(d=d, amplitudes=(1.0,) + (0.0,) * (d - 1))

    @classmethod
    def maximally_entangled(cls, d: int) -> "SchmidtSpec":
        return cls(d=d, amplitudes=(1.0 / math.sqrt(d),) * d)


class InputSelector(BaseModel):
    """Which input state a computation uses."""

    model_config = ConfigDict(frozen=True)

    kind: InputKind = Field(..., description="Input family")
    alpha: Optional[float] = Field(default=None, description="Ansatz angle")
    schmidt: Optional[SchmidtSpec] = Field(default=None, description="Explicit Schmidt state")
    source: Optional[str] = Field(default=None, description="Where the Schmidt state came from")

    @model_validator(mode="after")
    def check_payload(self) -> "InputSelector":
        if self.kind == InputKind.ANSATZ and self.alpha is None:
            raise ValueError("ansatz input needs an angle")
        if self.kind == InputKind.SCHMIDT and self.schmidt is None:
            raise ValueError("schmidt input needs a state")
        return self

    @property
    def label(self) -> str:
        if self.kind == InputKind.ANSATZ:
            return f"ansatz:{self.alpha!r}"
        if self.kind == InputKind.SCHMIDT:
            return f"schmidt:{self.source or 'inline'}"
        return self.kind.value

    @classmethod
    def product(cls) -> "InputSelector":
        return cls(kind=InputKind.PRODUCT)

    @classmethod
    def entangled(cls) -> "InputSelector":
        return cls(kind=InputKind.ENTANGLED)

    @classmethod
    def ansatz(cls, alpha: float) -> "InputSelector":
        return cls(kind=InputKind.ANSATZ, alpha=alpha)


class NoiseTable(BaseModel):
    """Probabilities p_{m,n,m',n'} of the Kraus pairs and their marginals q_{m,n}."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    d: int = Field(..., ge=2)
    p: np.ndarray = Field(..., description="Tensor of shape (d, d, d, d)")
    marginals: np.ndarray = Field(..., description="Matrix q_{m,n} of shape (d, d)")

    @field_validator("p", "marginals")
    @classmethod
    def check_real(cls, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        v.setflags(write=False)
        return v

    @model_validator(mode="after")
    def check_table(self) -> "NoiseTable":
        d = self.d
        if self.p.shape != (d, d, d, d) or self.marginals.shape != (d, d):
            raise ValueError("noise table shapes do not match d")
        if (self.p < 0).any():
            raise ValueError("noise table has negative entries")
        if abs(self.p.sum() - 1.0) > 1e-12:
            raise ValueError(f"noise table sums to {self.p.sum():.15g}")
        if np.abs(self.p.sum(axis=(2, 3)) - self.marginals).max() > 1e-12:
            raise ValueError("noise table rows do not reproduce the marginals")
        return self
