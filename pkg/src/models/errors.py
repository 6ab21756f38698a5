"""
Error types for spectrum and entanglement calculations.

Every numeric failure derives from CrossoverError, itself a ValueError, so
callers that guard model construction with ``except ValueError`` keep working.
"""

from typing import Optional


class CrossoverError(ValueError):
    """Base class for all domain errors raised by this package."""


# Special functions
class GammaPoleError(CrossoverError):
    """Gamma function evaluated at a non-positive integer."""


class NearPoleError(CrossoverError):
    """F(u, eta) requested too close to one of its poles."""

    def __init__(self, u: float, pole: float, radius: float):
        super().__init__(
            f"u={u!r} lies within {radius:g} of the pole at u={pole!r}"
        )
        self.u = u
        self.pole = pole
        self.radius = radius


class SeriesTruncationError(CrossoverError):
    """The pole series of F hit its hard term cap before converging."""


# Spectrum
class NoRootError(CrossoverError):
    """No sign change of the quantization residual in the branch interval."""


class MultipleRootsError(CrossoverError):
    """More than one sign change found in a single branch interval."""


class ResonanceFieldError(CrossoverError):
    """Magnetic field placed exactly on the Feshbach resonance."""


class GridPointError(CrossoverError):
    """A sweep failed at one grid point; wraps the original error."""

    def __init__(self, inv_as: float, branch_index: int, cause: Exception):
        super().__init__(
            f"branch {branch_index} failed at inv_as={inv_as:.12g}: {cause}"
        )
        self.inv_as = inv_as
        self.branch_index = branch_index
        self.cause = cause


# Pair states
class OddModeError(CrossoverError):
    """An even oscillator index was required."""


class ResonantDenominatorError(CrossoverError):
    """Energy coincides with a noninteracting relative-motion level."""


# Entanglement
class AsymmetricAmplitudeError(CrossoverError):
    """Amplitude block is not symmetric under particle exchange."""


class NormalizationError(CrossoverError):
    """Weights or amplitudes are not normalized."""


# Command line
class ConfigError(CrossoverError):
    """Run configuration could not be parsed or validated."""

    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.key = key
        self.line = line
