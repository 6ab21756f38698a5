"""
Programmatic entry point: resolve a run configuration and execute it.
"""

import logging
from typing import Optional

try:
    from .cli.config import RunConfig, load_config, with_overrides
    from .cli.runner import EXIT_CONFIG_ERROR, run
    from .models.errors import ConfigError
    from .models.settings import load_settings
except ImportError:
    from src.cli.config import RunConfig, load_config, with_overrides
    from src.cli.runner import EXIT_CONFIG_ERROR, run
    from src.models.errors import ConfigError
    from src.models.settings import load_settings

logger = logging.getLogger(__name__)


def main(config_path: Optional[str] = None, mode: Optional[str] = None,
         output: Optional[str] = None, fmt: Optional[str] = None,
         report: Optional[str] = None, settings_path: Optional[str] = None) -> int:
    """
    Run a configuration file, with command-line values taking precedence.

    Args:
        config_path: key = value or YAML run configuration; defaults apply when omitted
        mode: Overrides the configured mode
        output: Overrides the output path
        fmt: Overrides the output format
        report: Markdown summary path
        settings_path: Numerical settings YAML; defaults to config/solver_config.yaml

    Returns:
        Process exit status
    """
    try:
        config = load_config(config_path) if config_path else RunConfig()
        config = with_overrides(config, mode=mode, output_path=output, format=fmt, report=report)
        settings = load_settings(settings_path)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG_ERROR
    except (OSError, ValueError) as e:
        logger.error(f"Could not load settings: {e}")
        return EXIT_CONFIG_ERROR
    return run(config, settings)
