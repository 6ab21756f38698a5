"""
Run configuration for the command-line front end.

Text configs hold one ``key = value`` pair per line; ``#`` starts a comment.
YAML configs hold the same keys in a mapping. Numbers may be written as exact
rationals (``lambda = 5/6``), and ``lambda`` may list several values.
"""

import logging
import os
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import yaml

try:
    from ..models.errors import ConfigError
except ImportError:
    from models.errors import ConfigError

logger = logging.getLogger(__name__)

MODES = ('spectrum', 'entanglement', 'toy', 'validate')
FORMATS = ('csv', 'json')


@dataclass(frozen=True)
class RunConfig:
    """
    Resolved run configuration.

    Attributes:
        mode: spectrum, entanglement, toy or validate
        lambdas: Trap aspect ratios, kept as exact fractions
        r0_ratio: |r0| / d_perp
        inv_as_range: (lo, hi, step) of the inv_as grid, hi included
        branches: Adiabatic branch indices
        K_schedule: Truncation ramp
        tol: Entropy convergence tolerance
        output_path: Output file; defaults to <data directory>/<mode>.<format>
        format: csv or json
        g_range: (lo, hi, step) of the toy coupling ratio
        report: Optional markdown summary path
    """

    mode: str = 'spectrum'
    lambdas: Tuple[Fraction, ...] = (Fraction(1),)
    r0_ratio: Fraction = Fraction(1, 25)
    inv_as_range: Tuple[Fraction, Fraction, Fraction] = (Fraction(-10), Fraction(10), Fraction(1, 10))
    branches: Tuple[int, ...] = (0, 1, 2)
    K_schedule: Tuple[int, ...] = (8, 12, 16, 20)
    tol: Fraction = Fraction(1, 1000)
    output_path: Optional[str] = None
    format: str = 'csv'
    g_range: Tuple[Fraction, Fraction, Fraction] = (Fraction(0), Fraction(20), Fraction(1, 10))
    report: Optional[str] = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {', '.join(MODES)}, got '{self.mode}'", key='mode')
        if self.format not in FORMATS:
            raise ConfigError(f"format must be csv or json, got '{self.format}'", key='format')
        if not self.lambdas or any(lam <= 0 for lam in self.lambdas):
            raise ConfigError("every lambda must be positive", key='lambda')
        if self.r0_ratio < 0:
            raise ConfigError("r0_ratio must be non-negative", key='r0_ratio')
        _check_range(self.inv_as_range, 'inv_as_range')
        _check_range(self.g_range, 'g_range')
        if self.g_range[0] < 0:
            raise ConfigError("coupling ratios must be non-negative", key='g_range')
        if not self.branches or any(b < 0 for b in self.branches):
            raise ConfigError("branches must be a non-empty list of indices >= 0", key='branches')
        if not self.K_schedule or any(k <= 0 or k % 2 for k in self.K_schedule):
            raise ConfigError("K_schedule entries must be positive even integers", key='K_schedule')
        if any(b <= a for a, b in zip(self.K_schedule, self.K_schedule[1:])):
            raise ConfigError("K_schedule must be strictly increasing", key='K_schedule')
        if self.tol <= 0:
            raise ConfigError("tol must be positive", key='tol')

    def resolved_output_path(self, data_directory: str = "results") -> str:
        return self.output_path or os.path.join(data_directory, f"{self.mode}.{self.format}")

    def header(self, data_directory: str = "results") -> Dict[str, str]:
        """Every setting as text, in field order, for output provenance."""
        return {
            'mode': self.mode,
            'lambda': ', '.join(str(lam) for lam in self.lambdas),
            'r0_ratio': str(self.r0_ratio),
            'inv_as_range': ', '.join(str(v) for v in self.inv_as_range),
            'branches': ', '.join(str(b) for b in self.branches),
            'K_schedule': ', '.join(str(k) for k in self.K_schedule),
            'tol': str(self.tol),
            'output_path': self.resolved_output_path(data_directory),
            'format': self.format,
            'g_range': ', '.join(str(v) for v in self.g_range),
            'report': self.report or '',
        }


def _check_range(rng: Tuple[Fraction, Fraction, Fraction], key: str) -> None:
    lo, hi, step = rng
    if not lo < hi:
        raise ConfigError(f"range needs lo < hi, got lo={lo}, hi={hi}", key=key)
    if not step > 0:
        raise ConfigError(f"range step must be positive, got {step}", key=key)


def _number(text: str, key: str, line: Optional[int]) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"'{text.strip()}' is not a number", key=key, line=line)


def _numbers(text: str, key: str, line: Optional[int]) -> List[Fraction]:
    parts = [p for p in text.replace(';', ',').split(',') if p.strip()]
    if not parts:
        raise ConfigError("expected at least one value", key=key, line=line)
    return [_number(p, key, line) for p in parts]


def _integers(text: str, key: str, line: Optional[int]) -> Tuple[int, ...]:
    values = _numbers(text, key, line)
    if any(v.denominator != 1 for v in values):
        raise ConfigError(f"'{text.strip()}' must be integers", key=key, line=line)
    return tuple(int(v) for v in values)


def _triple(text: str, key: str, line: Optional[int]) -> Tuple[Fraction, Fraction, Fraction]:
    values = _numbers(text, key, line)
    if len(values) != 3:
        raise ConfigError("expected three values: lo, hi, step", key=key, line=line)
    return tuple(values)


def _apply(values: Dict[str, Any], key: str, text: str, line: Optional[int]) -> None:
    """Parse one setting into the field dictionary."""
    if key == 'mode':
        values['mode'] = text.strip().lower()
    elif key == 'format':
        values['format'] = text.strip().lower()
    elif key == 'lambda':
        lambdas = _numbers(text, key, line)
        if any(lam <= 0 for lam in lambdas):
            raise ConfigError("every lambda must be positive", key=key, line=line)
        values['lambdas'] = tuple(lambdas)
    elif key == 'r0_ratio':
        r0 = _number(text, key, line)
        if r0 < 0:
            raise ConfigError("r0_ratio must be non-negative", key=key, line=line)
        values['r0_ratio'] = r0
    elif key in ('inv_as_range', 'g_range'):
        rng = _triple(text, key, line)
        if rng[2] <= 0:
            raise ConfigError(f"range step must be positive, got {rng[2]}", key=key, line=line)
        values[key] = rng
    elif key in ('lo', 'hi', 'step'):
        value = _number(text, key, line)
        if key == 'step' and value <= 0:
            raise ConfigError(f"step must be positive, got {value}", key=key, line=line)
        values.setdefault('_inv_as_parts', {})[key] = value
    elif key == 'branches':
        branches = _integers(text, key, line)
        if any(b < 0 for b in branches):
            raise ConfigError("branch indices must be >= 0", key=key, line=line)
        values['branches'] = branches
    elif key == 'K_schedule':
        values['K_schedule'] = _integers(text, key, line)
    elif key == 'tol':
        values['tol'] = _number(text, key, line)
    elif key == 'output_path':
        values['output_path'] = text.strip() or None
    elif key == 'report':
        values['report'] = text.strip() or None
    else:
        raise ConfigError("unknown setting", key=key, line=line)


def _build(values: Dict[str, Any]) -> RunConfig:
    parts = values.pop('_inv_as_parts', {})
    if parts:
        lo, hi, step = values.get('inv_as_range', RunConfig.inv_as_range)
        values['inv_as_range'] = (parts.get('lo', lo), parts.get('hi', hi), parts.get('step', step))
    return RunConfig(**values)


def parse_config(text: str) -> RunConfig:
    """
    Parse a line-oriented ``key = value`` configuration.

    Args:
        text: Configuration text

    Returns:
        RunConfig with documented defaults for missing keys
    """
    values: Dict[str, Any] = {}
    seen: Dict[str, int] = {}
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError(f"expected 'key = value', got '{line}'", line=number)
        key, value = (part.strip() for part in line.split('=', 1))
        if not key:
            raise ConfigError("missing key before '='", line=number)
        if key in seen:
            raise ConfigError(f"duplicate setting (first on line {seen[key]})", key=key, line=number)
        seen[key] = number
        _apply(values, key, value, number)
    return _build(values)


def _yaml_text(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return ', '.join(str(v) for v in value)
    return '' if value is None else str(value)


def parse_yaml_config(text: str) -> RunConfig:
    """Parse the same settings from a YAML mapping."""
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError(f"invalid YAML: {e}")
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError("YAML config must be a mapping")
    values: Dict[str, Any] = {}
    for key, value in raw.items():
        _apply(values, str(key), _yaml_text(value), None)
    return _build(values)


def load_config(path: str) -> RunConfig:
    """Read a run configuration, choosing the parser by file extension."""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e.strerror}")
    if path.endswith(('.yaml', '.yml')):
        return parse_yaml_config(text)
    return parse_config(text)


def with_overrides(config: RunConfig, **values: Any) -> RunConfig:
    """Replace fields given on the command line; None leaves a field unchanged."""
    updates = {k: v for k, v in values.items() if v is not None}
    logger.debug(f"Command-line overrides: {updates}")
    return replace(config, **updates) if updates else config
