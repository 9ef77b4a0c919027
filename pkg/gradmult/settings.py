"""
settings.py - Engine configuration
==================================

Every tunable of the engine lives in one frozen EngineSettings value so it can
be passed through the caches as part of their key.

Values are resolved in this order (first wins):
1. CLI flags
2. the workspace "settings" object
3. GRADMULT_* environment variables (a .env file is honoured)
4. built-in defaults
"""

import os
from dataclasses import dataclass, fields, replace
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from sympy import Rational

from .errors import WorkspaceError


@dataclass(frozen=True)
class EngineSettings:
    """Tunables for fitting, limits, checks and I/O."""

    fit_offset: Optional[int] = None      # None -> d + 1
    fit_cap: int = 64
    q_max: int = 12
    horizon_d2: int = 24
    horizon_d3: int = 12
    horizon_default: int = 8
    tolerance: Rational = Rational(1, 20)
    bracket_digits: int = 9
    bracket_rounds: int = 5
    c_max: int = 8
    workers: int = 1
    report_db: str = "./data/gradmult_reports.db"
    log_level: str = "INFO"
    log_file: Optional[str] = None

    def horizon_for(self, dimension: int) -> int:
        if dimension <= 2:
            return self.horizon_d2
        if dimension == 3:
            return self.horizon_d3
        return self.horizon_default

    def start_offset(self, dimension: int) -> int:
        return self.fit_offset if self.fit_offset is not None else dimension + 1

    def with_overrides(self, overrides: Dict[str, Any]) -> "EngineSettings":
        """Return a copy with `overrides` applied; None values are ignored."""
        known = {f.name: f for f in fields(self)}
        clean = {}
        for key, value in overrides.items():
            if value is None:
                continue
            if key not in known:
                raise WorkspaceError(f"unknown setting '{key}'", "$.settings")
            clean[key] = _coerce(key, value)
        return replace(self, **clean)


_INT_KEYS = {"fit_offset", "fit_cap", "q_max", "horizon_d2", "horizon_d3",
             "horizon_default", "bracket_digits", "bracket_rounds", "c_max", "workers"}


def _coerce(key: str, value: Any) -> Any:
    try:
        if key in _INT_KEYS:
            result = int(value)
            if result < 0 or (result == 0 and key != "fit_offset"):
                raise ValueError(value)
            return result
        if key == "tolerance":
            return Rational(str(value))
        return str(value)
    except (TypeError, ValueError) as e:
        raise WorkspaceError(f"invalid value for setting '{key}': {e}", "$.settings")


_ENV_KEYS = {
    "fit_offset": "GRADMULT_FIT_OFFSET",
    "fit_cap": "GRADMULT_FIT_CAP",
    "q_max": "GRADMULT_Q_MAX",
    "horizon_d2": "GRADMULT_HORIZON_D2",
    "horizon_d3": "GRADMULT_HORIZON_D3",
    "horizon_default": "GRADMULT_HORIZON_DEFAULT",
    "tolerance": "GRADMULT_TOLERANCE",
    "bracket_digits": "GRADMULT_BRACKET_DIGITS",
    "bracket_rounds": "GRADMULT_BRACKET_ROUNDS",
    "c_max": "GRADMULT_C_MAX",
    "workers": "GRADMULT_WORKERS",
    "report_db": "GRADMULT_REPORT_DB",
    "log_level": "GRADMULT_LOG_LEVEL",
    "log_file": "GRADMULT_LOG_FILE",
}


def load_settings(env_file: Optional[str] = None) -> EngineSettings:
    """
    Build settings from the environment.

    Args:
        env_file: Optional explicit .env path (default: search from cwd)

    Returns:
        EngineSettings with environment overrides applied
    """
    load_dotenv(env_file)
    overrides = {key: os.getenv(var) or None for key, var in _ENV_KEYS.items()}
    return EngineSettings().with_overrides(overrides)
