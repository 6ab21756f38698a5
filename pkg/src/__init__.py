"""
Pair entanglement of two trapped fermions across the BCS-BEC crossover.

Numerical tools for the two-atom spectrum in a cylindrical harmonic trap and
the spatial entanglement entropy of its eigenstates.
"""

__version__ = "1.0.0"
__author__ = "Cold Atom Analysis Team"
