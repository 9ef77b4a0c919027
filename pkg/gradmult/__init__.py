"""
gradmult - exact mixed multiplicities of graded families of monomial ideals.
"""

from .errors import GradmultError
from .monomial_core import AmbientRing, MonomialIdeal, normalize
from .reports import CheckReport, Verdict
from .settings import EngineSettings, load_settings

__version__ = "0.1.0"

__all__ = [
    "AmbientRing",
    "CheckReport",
    "EngineSettings",
    "GradmultError",
    "MonomialIdeal",
    "Verdict",
    "load_settings",
    "normalize",
]
