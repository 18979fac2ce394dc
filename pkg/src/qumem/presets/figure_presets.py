"""Figure parameter presets for qumem."""

import json
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, ValidationError

from ..core.states import max_entangled_alpha
from ..exceptions import InvalidParameterError
from ..models.channel import Family, InputKind, InputSelector, Parity

logger = logging.getLogger(__name__)


class PresetKind(str, Enum):
    """What a figure shows."""
    CURVES = "curves"
    ALPHA = "alpha"
    CROSSOVER = "crossover"


class FigurePreset(BaseModel):
    """Parameter grid of one figure."""

    name: str
    kind: PresetKind
    description: str = ""
    family: Family
    eta: float
    d_list: List[int] = Field(default_factory=list)
    nu_list: List[float] = Field(default_factory=list)
    inputs: List[InputKind] = Field(default_factory=list)
    alpha_fractions: List[float] = Field(default_factory=list)
    parity: Optional[Parity] = None

    def dimensions(self, d_max: int) -> List[int]:
        """Dimensions of the figure; parity presets run from 2 or 3 up to d_max."""
        if self.parity is None:
            return list(self.d_list)
        start = 2 if self.parity == Parity.EVEN else 3
        return list(range(start, d_max + 1, 2))

    def selectors(self) -> List[InputSelector]:
        return [InputSelector(kind=kind) for kind in self.inputs]

    def alphas(self, d: int) -> List[float]:
        """Ansatz angles as fractions of the maximally entangled angle."""
        top = max_entangled_alpha(d)
        return [fraction * top for fraction in self.alpha_fractions]

    def with_family(self, family: Optional[Family]) -> "FigurePreset":
        return self if family is None else self.model_copy(update={"family": family})


class FigurePresetManager:
    """Loads figure presets from a JSON file, with built-in defaults."""

    def __init__(self, presets_file: Optional[Path] = None):
        """Initialize preset manager."""
        if presets_file is None:
            presets_file = Path(__file__).parent / "figures.json"
        self.presets_file = presets_file
        self.presets = self._load_presets()

    def _load_presets(self) -> Dict[str, FigurePreset]:
        """Load presets from file, falling back to the defaults."""
        raw = self._get_default_presets()
        if self.presets_file.exists():
            try:
                with open(self.presets_file, 'r', encoding='utf-8') as f:
                    raw = json.load(f)
            except (OSError, ValueError) as e:
                logger.warning("Could not load presets %s: %s", self.presets_file, e)

        try:
            return {name: FigurePreset(name=name, **data) for name, data in raw.items()}
        except (ValidationError, TypeError) as e:
            logger.warning("Invalid presets in %s, using defaults: %s", self.presets_file, e)
            return {
                name: FigurePreset(name=name, **data)
                for name, data in self._get_default_presets().items()
            }

    @staticmethod
    def _get_default_presets() -> Dict[str, Dict[str, Any]]:
        """Get default presets."""
        curves = {"kind": "curves", "inputs": ["product", "entangled"]}
        nus = [0.0, 0.25, 0.5, 0.75, 1.0]
        return {
            "fig1": {**curves, "family": "qcd", "eta": 0.4, "d_list": [2], "nu_list": [0.0]},
            "fig2": {
                "kind": "alpha", "family": "qcd", "eta": 0.4, "d_list": [3], "nu_list": [1.0],
                "alpha_fractions": [0.0, 0.125, 0.25, 0.375, 0.5, 0.75, 1.0],
            },
            "fig3a": {**curves, "family": "qd", "eta": 0.8, "d_list": [2, 4, 6, 8, 10], "nu_list": [1.0]},
            "fig3b": {**curves, "family": "qd", "eta": 0.8, "d_list": [2, 4, 6, 8, 10], "nu_list": [0.0]},
            "fig4a": {"kind": "crossover", "family": "qd", "eta": 0.8, "nu_list": nus, "parity": "even"},
            "fig4b": {"kind": "crossover", "family": "qd", "eta": 0.8, "nu_list": nus, "parity": "odd"},
            "fig5": {**curves, "family": "qd", "eta": 0.8, "d_list": [3, 5, 7, 9, 11], "nu_list": [0.0]},
        }

    def get(self, name: str) -> FigurePreset:
        """Get a preset by name."""
        preset = self.presets.get(name.lower())
        if preset is None:
            raise InvalidParameterError(
                f"unknown figure {name!r}; expected one of {', '.join(self.names())}"
            )
        return preset

    def names(self) -> List[str]:
        return sorted(self.presets)
