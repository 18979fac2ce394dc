"""Exceptions raised by qumem."""

from typing import Any, Optional


class QumemError(Exception):
    """Base class for qumem errors."""


class InvalidParameterError(QumemError, ValueError):
    """A parameter lies outside its valid range or is inconsistent."""


class DimensionMismatchError(InvalidParameterError):
    """Operand shapes do not fit together."""


class NotHermitianError(InvalidParameterError):
    """Matrix is not Hermitian within tolerance."""

    def __init__(self, asymmetry: float, tolerance: float):
        self.asymmetry = asymmetry
        self.tolerance = tolerance
        super().__init__(
            f"Matrix is not Hermitian: max|h - h^dagger| = {asymmetry:.3e} "
            f"exceeds {tolerance:.1e}"
        )


class NegativeEigenvalueError(QumemError, ValueError):
    """Spectrum has an eigenvalue below the clipping threshold."""

    def __init__(self, value: float, threshold: float):
        self.value = value
        self.threshold = threshold
        super().__init__(
            f"Eigenvalue {value:.3e} is below the clipping threshold -{threshold:.0e}"
        )


class OracleCapError(InvalidParameterError):
    """Brute-force channel requested above the dimension cap."""

    def __init__(self, d: int, cap: int):
        self.d = d
        self.cap = cap
        super().__init__(
            f"Oracle path is capped at d <= {cap} (requested d = {d}); "
            "pass --allow-large to override"
        )


class ValidationFailure(QumemError):
    """Closed-form result disagrees with the oracle beyond tolerance."""

    def __init__(self, message: str, report: Optional[Any] = None):
        self.report = report
        super().__init__(message)
