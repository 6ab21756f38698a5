"""
Data types for trapped two-atom spectra and pair states.
"""

from .errors import CrossoverError
from .pair_state import AmplitudeMatrix, ConvergenceReport, RelativeExpansion, SchmidtSpectrum
from .settings import SolverSettings, default_settings, load_settings
from .trap import (BRANCH_LABELS, Branch, BranchPoint, FArgs, FeshbachParams, PoleLattice,
                   ToyParams, TrapParams)

__all__ = [
    "CrossoverError",
    "AmplitudeMatrix",
    "ConvergenceReport",
    "RelativeExpansion",
    "SchmidtSpectrum",
    "SolverSettings",
    "default_settings",
    "load_settings",
    "BRANCH_LABELS",
    "Branch",
    "BranchPoint",
    "FArgs",
    "FeshbachParams",
    "PoleLattice",
    "ToyParams",
    "TrapParams"
]
