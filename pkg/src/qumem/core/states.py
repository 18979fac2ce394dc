"""Input states: Schmidt-form vectors, the one-angle ansatz and input selectors."""

import json
import math
from pathlib import Path
from typing import Any, Dict

import numpy as np
import toml
from pydantic import ValidationError

from ..exceptions import InvalidParameterError
from ..models.channel import InputKind, InputSelector, SchmidtSpec

NORM_TOL = 1e-12


def build_state(s: SchmidtSpec) -> np.ndarray:
    """Vector sum_j alpha_j e^{i phi_j} |j>|j + m mod d> of length d^2."""
    d = s.d
    v = np.zeros(d * d, dtype=complex)
    j = np.arange(d)
    v[j * d + (j + s.offset) % d] = s.coefficients()
    return v


def max_entangled_alpha(d: int) -> float:
    """Ansatz angle of the maximally entangled state, arccos(1/sqrt(d))."""
    return math.acos(1.0 / math.sqrt(d))


def ansatz_spec(d: int, alpha: float) -> SchmidtSpec:
    """Schmidt form of cos(a)|00> + sin(a)/sqrt(d-1) sum_{j>0} |jj>.

    Negative trigonometric factors are carried as a phase of pi so the
    amplitudes stay nonnegative.
    """
    if d < 2:
        raise InvalidParameterError(f"dimension must be at least 2, got d = {d}")
    head = math.cos(alpha)
    tail = math.sin(alpha) / math.sqrt(d - 1)
    amplitudes = (abs(head),) + (abs(tail),) * (d - 1)
    phases = (math.pi if head < 0 else 0.0,) + (math.pi if tail < 0 else 0.0,) * (d - 1)
    return SchmidtSpec(d=d, amplitudes=amplitudes, phases=phases)


def ansatz_state(d: int, alpha: float) -> np.ndarray:
    """cos(a)|00> + sin(a)/sqrt(d-1) sum_{j=1}^{d-1} |jj>."""
    if d < 2:
        raise InvalidParameterError(f"dimension must be at least 2, got d = {d}")
    v = np.zeros(d * d, dtype=complex)
    v[0] = math.cos(alpha)
    j = np.arange(1, d)
    v[j * d + j] = math.sin(alpha) / math.sqrt(d - 1)
    return v


def density(v: np.ndarray) -> np.ndarray:
    """Projector |v><v| of a unit vector."""
    v = np.asarray(v, dtype=complex).ravel()
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > NORM_TOL:
        raise InvalidParameterError(f"state vector has norm {norm:.15g}, expected 1")
    return np.outer(v, v.conj())


def _read_schmidt_file(path: Path) -> Dict[str, Any]:
    if not path.exists():
        raise InvalidParameterError(f"Schmidt state file not found: {path}")
    try:
        if path.suffix.lower() in ('.toml', '.tml'):
            return toml.load(path)
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except (OSError, ValueError) as e:
        raise InvalidParameterError(f"could not read Schmidt state {path}: {e}") from e


def load_schmidt(path: Path, d: int) -> SchmidtSpec:
    """Read amplitudes, optional phases and optional offset from JSON or TOML."""
    data = _read_schmidt_file(path)
    try:
        return SchmidtSpec(
            d=d,
            amplitudes=tuple(data.get('amplitudes', ())),
            phases=tuple(data.get('phases', ())),
            offset=int(data.get('offset', 0)),
        )
    except (ValidationError, TypeError) as e:
        raise InvalidParameterError(f"invalid Schmidt state in {path}: {e}") from e


def parse_input_selector(text: str, d: int) -> InputSelector:
    """Parse product, entangled, ansatz:<alpha|max> or schmidt:<file>."""
    kind, _, arg = text.strip().partition(':')
    kind = kind.lower()

    if kind == InputKind.PRODUCT.value and not arg:
        return InputSelector.product()
    if kind == InputKind.ENTANGLED.value and not arg:
        return InputSelector.entangled()
    if kind == InputKind.ANSATZ.value and arg:
        if arg.lower() == 'max':
            return InputSelector.ansatz(max_entangled_alpha(d))
        try:
            return InputSelector.ansatz(float(arg))
        except ValueError:
            raise InvalidParameterError(f"ansatz angle must be a number or 'max', got {arg!r}")
    if kind == InputKind.SCHMIDT.value and arg:
        spec = load_schmidt(Path(arg), d)
        return InputSelector(kind=InputKind.SCHMIDT, schmidt=spec, source=arg)

    raise InvalidParameterError(
        f"unknown input {text!r}; expected product, entangled, ansatz:<alpha|max> "
        "or schmidt:<file>"
    )


def selector_state(selector: InputSelector, d: int) -> SchmidtSpec:
    """Schmidt description of the state an input selector names."""
    if selector.kind == InputKind.PRODUCT:
        return SchmidtSpec.product(d)
    if selector.kind == InputKind.ENTANGLED:
        return SchmidtSpec.maximally_entangled(d)
    if selector.kind == InputKind.ANSATZ:
        return ansatz_spec(d, float(selector.alpha))  # type: ignore[arg-type]
    spec = selector.schmidt
    if spec is None or spec.d != d:
        raise InvalidParameterError(f"Schmidt state does not describe dimension d = {d}")
    return spec
