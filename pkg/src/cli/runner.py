"""
Execute a run configuration and write its table with a provenance header.

Exit codes: 0 success, 1 configuration error, 2 numeric failure, 3 failed
acceptance check.
"""

import json
import logging
import math
import os
from fractions import Fraction
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

try:
    from .. import __version__
    from ..analysis.entangle import EntanglementAnalyzer
    from ..analysis.spectrum import SpectrumSolver
    from ..analysis.toymodel import toy_sweep
    from ..analysis.validation import AcceptanceSuite
    from ..models.errors import ConfigError, CrossoverError
    from ..models.settings import SolverSettings, default_settings
    from ..models.trap import TrapParams
    from ..reporting.report_generator import ReportGenerator
    from .config import RunConfig
except ImportError:
    from src import __version__
    from src.analysis.entangle import EntanglementAnalyzer
    from src.analysis.spectrum import SpectrumSolver
    from src.analysis.toymodel import toy_sweep
    from src.analysis.validation import AcceptanceSuite
    from src.models.errors import ConfigError, CrossoverError
    from src.models.settings import SolverSettings, default_settings
    from src.models.trap import TrapParams
    from src.reporting.report_generator import ReportGenerator
    from src.cli.config import RunConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_NUMERIC_FAILURE = 2
EXIT_VALIDATION_FAILURE = 3

SPECTRUM_COLUMNS = ['inv_as', 'branch', 'x', 'beta2']
ENTANGLEMENT_COLUMNS = ['inv_as', 'branch', 'K', 'spatial_entropy', 'total_entropy',
                        'converged', 'extrapolated']
TOY_COLUMNS = ['g_over_gap', 'entropy']
VALIDATE_COLUMNS = ['check', 'passed', 'value', 'target', 'detail']


def grid_points(lo: Fraction, hi: Fraction, step: Fraction) -> List[float]:
    """lo, lo + step, ... up to and including hi, computed exactly before rounding."""
    n = math.floor((hi - lo) / step)
    return [float(lo + i * step) for i in range(n + 1)]


def _sweep_frames(config: RunConfig, build) -> pd.DataFrame:
    frames = []
    for lam in config.lambdas:
        for branch_index in config.branches:
            df = build(float(lam), branch_index)
            df['lambda'] = float(lam)
            frames.append(df)
    return pd.concat(frames, ignore_index=True)


def build_table(config: RunConfig, settings: Optional[SolverSettings] = None) -> pd.DataFrame:
    """
    Compute the table for the configured mode, rows sorted.

    Multi-lambda sweeps carry a trailing ``lambda`` column.
    """
    settings = settings or default_settings()
    grid = grid_points(*config.inv_as_range)
    r0 = float(config.r0_ratio)

    if config.mode == 'spectrum':
        solver = SpectrumSolver(settings)
        df = _sweep_frames(config, lambda lam, b: solver.trace_branch(
            b, grid, TrapParams(lam=lam, r0_ratio=r0)).to_frame())
        columns = SPECTRUM_COLUMNS
    elif config.mode == 'entanglement':
        analyzer = EntanglementAnalyzer(settings)
        df = _sweep_frames(config, lambda lam, b: analyzer.entanglement_sweep(
            b, grid, TrapParams(lam=lam, r0_ratio=r0), config.K_schedule, float(config.tol)))
        columns = ENTANGLEMENT_COLUMNS
    elif config.mode == 'toy':
        df = toy_sweep(grid_points(*config.g_range))
        return df.sort_values('g_over_gap', kind='mergesort').reset_index(drop=True)[TOY_COLUMNS]
    else:
        suite = AcceptanceSuite(settings, K_schedule=config.K_schedule, tol=float(config.tol))
        return suite.run()[VALIDATE_COLUMNS]

    df = df.sort_values(['lambda', 'branch', 'inv_as'], kind='mergesort').reset_index(drop=True)
    if len(config.lambdas) > 1:
        return df[columns + ['lambda']]
    return df[columns]


def _json_value(value: Any, digits: int) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return None if math.isnan(value) else float(f"{value:.{digits}g}")
    return value


def write_output(df: pd.DataFrame, header: Dict[str, str], path: str, fmt: str,
                 digits: int = 12) -> str:
    """Write the table as CSV (with '# key = value' header lines) or JSON."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)

    with open(path, 'w', encoding='utf-8', newline='') as f:
        if fmt == 'csv':
            for key, value in header.items():
                f.write(f"# {key} = {value}\n")
            df.to_csv(f, index=False, float_format=f'%.{digits}g')
        else:
            rows = [{k: _json_value(v, digits) for k, v in row.items()}
                    for row in df.to_dict(orient='records')]
            f.write(json.dumps({'header': header, 'rows': rows}, sort_keys=True, indent=2))
            f.write("\n")
    logger.info(f"Wrote {len(df)} rows to {path}")
    return path


def _summary(df: pd.DataFrame, mode: str) -> pd.DataFrame:
    value = {'spectrum': 'x', 'entanglement': 'spatial_entropy'}[mode]
    keys = ['lambda', 'branch'] if 'lambda' in df.columns else ['branch']
    summary = df.groupby(keys, sort=True)[value].agg(['count', 'min', 'max']).reset_index()
    return summary.rename(columns={'count': 'points', 'min': f'min_{value}', 'max': f'max_{value}'})


def write_report(df: pd.DataFrame, config: RunConfig, header: Dict[str, str], path: str) -> str:
    """Markdown summary of a run."""
    report = ReportGenerator(output_dir=os.path.dirname(path))
    report.add_header(f"Crossover run: {config.mode}")
    report.add_header("Configuration", level=2)
    report.add_code_block("\n".join(f"{k} = {v}" for k, v in header.items()), language="ini")

    if config.mode == 'validate':
        passed = int(df['passed'].sum())
        report.add_header("Acceptance Checks", level=2)
        report.add_text(f"**Passed:** {passed} of {len(df)}")
        report.add_table(df)
        failed = df.loc[~df['passed'].astype(bool), 'check'].tolist()
        if failed:
            report.add_header("Failed", level=3)
            report.add_list(failed)
    elif config.mode == 'toy':
        report.add_header("Toy Model", level=2)
        report.add_text(f"**Points:** {len(df)}")
        report.add_text(f"**Largest entropy:** {df['entropy'].max():.6f}")
    else:
        report.add_header("Branches", level=2)
        report.add_table(_summary(df, config.mode))
    return report.save_report(os.path.basename(path))


def run(config: RunConfig, settings: Optional[SolverSettings] = None) -> int:
    """
    Run one configuration end to end.

    Args:
        config: Resolved run configuration
        settings: Numerical settings; defaults to config/solver_config.yaml

    Returns:
        Process exit status
    """
    settings = settings or default_settings()
    header = config.header(settings.output.data_directory)
    header['version'] = __version__
    path = config.resolved_output_path(settings.output.data_directory)

    logger.info(f"Starting {config.mode} run")
    try:
        df = build_table(config, settings)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG_ERROR
    except CrossoverError as e:
        logger.error(f"Numeric failure: {e}")
        return EXIT_NUMERIC_FAILURE

    write_output(df, header, path, config.format, settings.output.significant_digits)
    if config.report:
        write_report(df, config, header, config.report)

    if config.mode == 'validate' and not df['passed'].all():
        logger.error(f"{int((~df['passed']).sum())} acceptance checks failed")
        return EXIT_VALIDATION_FAILURE
    return EXIT_OK
