#!/usr/bin/env python3
"""
Two-fermion spectrum, pair entanglement and toy-model sweeps from the command line.

Examples:
    python3 scripts/crossover.py --config runs/fig1.cfg
    python3 scripts/crossover.py --mode toy --format json --output results/toy.json
    python3 scripts/crossover.py --mode validate --report results/validation.md
"""

import argparse
import logging
import os
import sys

# Add the project root to Python path
current_dir = os.path.dirname(os.path.abspath(__file__))
project_root = os.path.dirname(current_dir)
sys.path.insert(0, project_root)

from src.cli.config import FORMATS, MODES
from src.main import main as run_main


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description='Spectrum and pair entanglement of two trapped fermions')
    parser.add_argument('--config', type=str, default=None,
                        help='Run configuration, key = value text or YAML (default: built-in defaults)')
    parser.add_argument('--mode', choices=MODES, default=None,
                        help='Override the configured mode')
    parser.add_argument('--output', type=str, default=None,
                        help='Output file (default: results/<mode>.<format>)')
    parser.add_argument('--format', choices=FORMATS, default=None,
                        help='Output format (default: csv)')
    parser.add_argument('--report', type=str, default=None,
                        help='Also write a markdown summary to this path')
    parser.add_argument('--settings', type=str, default=None,
                        help='Numerical settings YAML (default: config/solver_config.yaml)')
    parser.add_argument('--log-level', default='INFO',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Logging level (default: INFO)')

    args = parser.parse_args(argv)

    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    return run_main(config_path=args.config, mode=args.mode, output=args.output,
                    fmt=args.format, report=args.report, settings_path=args.settings)


if __name__ == "__main__":
    raise SystemExit(main())
