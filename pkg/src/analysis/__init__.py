"""
Spectrum and pair-entanglement analysis.
"""

from .spectrum import SpectrumSolver, feshbach_map, field_to_trap_params
from .pairstate import assemble_amplitude, relative_expansion
from .entangle import EntanglementAnalyzer
from .toymodel import toy_sweep
from .validation import AcceptanceSuite

__all__ = [
    "SpectrumSolver",
    "feshbach_map",
    "field_to_trap_params",
    "assemble_amplitude",
    "relative_expansion",
    "EntanglementAnalyzer",
    "toy_sweep",
    "AcceptanceSuite"
]
