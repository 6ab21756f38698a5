"""
Command-line run configuration and execution.
"""

from .config import RunConfig, load_config, parse_config, parse_yaml_config
from .runner import run

__all__ = [
    "RunConfig",
    "load_config",
    "parse_config",
    "parse_yaml_config",
    "run"
]
