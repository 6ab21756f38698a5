"""
Shared fixtures for the test suite.
"""

import pytest

from src.analysis.entangle import EntanglementAnalyzer
from src.analysis.spectrum import SpectrumSolver
from src.models.settings import SolverSettings


@pytest.fixture(scope="session")
def settings():
    # built-in defaults, independent of edits to config/solver_config.yaml
    return SolverSettings()


@pytest.fixture(scope="session")
def solver(settings):
    return SpectrumSolver(settings)


@pytest.fixture(scope="session")
def analyzer(settings, solver):
    return EntanglementAnalyzer(settings, solver)
