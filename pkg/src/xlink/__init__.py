"""Cross-link interference engine for LEO satellite constellations.

Closed-form interference models for same-orbit, co-planar, shifted-plane and
mixed deployments, a time-stepped geometric simulator that checks them, and
sweep utilities over constellation and antenna parameters.
"""
from .kernels import BACKEND
from .orbital import ConstellationSpec, OrbitSpec, PhysicalConstants
from .radio import MMWAVE, SUBTHZ, AntennaPattern, RadioConfig
from .scenarios import ScenarioParams
from .series import TimeSeries

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "MMWAVE",
    "SUBTHZ",
    "AntennaPattern",
    "ConstellationSpec",
    "OrbitSpec",
    "PhysicalConstants",
    "RadioConfig",
    "ScenarioParams",
    "TimeSeries",
    "__version__",
]
