"""
Numerical settings loaded from config/solver_config.yaml.
"""

import logging
import os
from dataclasses import dataclass, field, fields, replace
from typing import Any, Dict, Optional, Tuple

import yaml

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = os.path.join(
    os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))),
    "config",
    "solver_config.yaml",
)


@dataclass(frozen=True)
class SpecfunSettings:
    series_rel_tol: float = 1e-14
    series_max_terms: int = 200000
    quad_epsabs: float = 1e-10
    quad_epsrel: float = 1e-12
    quad_limit: int = 200
    split_point: float = 1.0
    exclusion_radius: float = 1e-6
    merge_tol: float = 1e-9


@dataclass(frozen=True)
class SpectrumSettings:
    num_samples: int = 64
    xtol: float = 1e-10
    lower_bound_start: float = -1.0
    lower_bound_limit: float = -1e4
    x_max: float = 12.0
    derivative_step: float = 1e-5
    broad_resonance_limit: float = 0.1


@dataclass(frozen=True)
class EntangleSettings:
    k_schedule: Tuple[int, ...] = (8, 12, 16, 20)
    tol: float = 1e-3
    axial_cap: int = 60
    limit_inv_as: float = 40.0
    weight_floor: float = 1e-16
    symmetry_tol: float = 1e-10


@dataclass(frozen=True)
class OutputSettings:
    significant_digits: int = 12
    data_directory: str = "results"


@dataclass(frozen=True)
class SolverSettings:
    """All numeric knobs, grouped the way the YAML file groups them."""

    specfun: SpecfunSettings = field(default_factory=SpecfunSettings)
    spectrum: SpectrumSettings = field(default_factory=SpectrumSettings)
    entangle: EntangleSettings = field(default_factory=EntangleSettings)
    output: OutputSettings = field(default_factory=OutputSettings)


_SECTIONS = {
    "specfun": SpecfunSettings,
    "spectrum": SpectrumSettings,
    "entangle": EntangleSettings,
    "output": OutputSettings,
}


def _build_section(cls, values: Dict[str, Any]):
    known = {f.name: f for f in fields(cls)}
    unknown = set(values) - set(known)
    if unknown:
        raise ValueError(f"Unknown settings for {cls.__name__}: {sorted(unknown)}")
    converted = {}
    for name, value in values.items():
        default = getattr(cls(), name)
        if isinstance(default, tuple):
            converted[name] = tuple(value)
        elif isinstance(default, bool):
            converted[name] = bool(value)
        elif isinstance(default, int):
            converted[name] = int(value)
        elif isinstance(default, float):
            converted[name] = float(value)
        else:
            converted[name] = value
    return cls(**converted)


def load_settings(path: Optional[str] = None) -> SolverSettings:
    """
    Load solver settings from a YAML file.

    Args:
        path: YAML file; defaults to config/solver_config.yaml. A missing default
            file yields the built-in defaults.

    Returns:
        SolverSettings instance
    """
    config_path = path or DEFAULT_CONFIG_PATH
    if not os.path.exists(config_path):
        if path is not None:
            raise FileNotFoundError(config_path)
        logger.debug(f"No settings file at {config_path}, using defaults")
        return SolverSettings()

    with open(config_path, "r", encoding="utf-8") as f:
        raw = yaml.safe_load(f) or {}

    if not isinstance(raw, dict):
        raise ValueError(f"Settings file {config_path} must hold a mapping of sections")
    unknown = set(raw) - set(_SECTIONS)
    if unknown:
        raise ValueError(f"Unknown settings sections in {config_path}: {sorted(unknown)}")

    sections = {}
    for name, cls in _SECTIONS.items():
        sections[name] = _build_section(cls, raw.get(name) or {})
    return SolverSettings(**sections)


_DEFAULT_SETTINGS: Optional[SolverSettings] = None


def default_settings() -> SolverSettings:
    """Settings from the repository config file, loaded once."""
    global _DEFAULT_SETTINGS
    if _DEFAULT_SETTINGS is None:
        _DEFAULT_SETTINGS = load_settings()
    return _DEFAULT_SETTINGS


def with_overrides(settings: SolverSettings, section: str, **values: Any) -> SolverSettings:
    """Return a copy of settings with some fields of one section replaced."""
    current = getattr(settings, section)
    return replace(settings, **{section: replace(current, **values)})
