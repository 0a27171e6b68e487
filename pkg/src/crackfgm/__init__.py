"""Free vibration of functionally graded plates with a centre crack.

Mindlin plates of a ceramic/metal graded material under a through-thickness
temperature field, discretised with eight-node serendipity elements.
"""

from .analysis import Analysis, analyze, default_divisions
from .material import SI3N4, SUS304, FgmSpec, PhaseMaterial, TemperatureCoefficients, ThermalState, isotropic
from .mesh import PlateGeometry, build_mesh
from .section import SectionProperties, integrate_section
from .solver import ModalResult, SolverError, ThermalBucklingError, nondimensionalize
from .studies import ConfigError, StudyConfig, parse_config, run_study

__all__ = [
    "Analysis", "analyze", "default_divisions",
    "SI3N4", "SUS304", "FgmSpec", "PhaseMaterial", "TemperatureCoefficients", "ThermalState", "isotropic",
    "PlateGeometry", "build_mesh",
    "SectionProperties", "integrate_section",
    "ModalResult", "SolverError", "ThermalBucklingError", "nondimensionalize",
    "ConfigError", "StudyConfig", "parse_config", "run_study",
]

__version__ = "0.1.0"
