"""
qumem - mutual information of qudit channels with correlated noise.

qumem simulates two consecutive uses of a d-dimensional channel whose
Weyl-displacement noise is correlated between the uses, and compares how
well product and maximally entangled inputs carry information.

Key Features:
- Quantum depolarizing (QD) and quasi-classical depolarizing (QCD) families
- Closed-form output spectra for product and maximally entangled inputs
- Brute-force Kraus oracle used to validate every closed form
- Crossover point between product and entangled inputs as a function of memory
- Deterministic CSV/JSON output for every figure's data
"""

__version__ = "0.1.0"
__author__ = "qumem Contributors"
__email__ = "contributors@qumem.dev"
__license__ = "MIT"

from .core.config import Config
from .core.runner import ExperimentRunner
from .models.channel import ChannelSpec, Family, InputSelector, SchmidtSpec
from .models.results import CrossoverReport, MICurve, MIResult, RunConfig, Spectrum

__all__ = [
    "__version__",
    "__author__",
    "__email__",
    "__license__",
    "Config",
    "ExperimentRunner",
    "ChannelSpec",
    "Family",
    "InputSelector",
    "SchmidtSpec",
    "CrossoverReport",
    "MICurve",
    "MIResult",
    "RunConfig",
    "Spectrum",
]
