"""
Trap, interaction and spectrum data types.

All energies are the dimensionless x = E/(2 hbar omega_perp) - 1 - lambda/2 and
all lengths are measured in units of the transverse oscillator length d_perp.
"""

import math
from dataclasses import dataclass, field, replace
from typing import List, Tuple

import numpy as np
import pandas as pd

# Adiabatic branches as labelled in the energy-spectrum figure
BRANCH_LABELS = {0: "e-a", 1: "a-d-b", 2: "b-f-c"}


@dataclass(frozen=True)
class FArgs:
    """Arguments of the regularized trap function F(u, eta)."""

    u: float
    eta: float

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta}")

    @classmethod
    def from_energy(cls, x: float, lam: float) -> "FArgs":
        """Map the energy x at aspect ratio lambda to (u, eta) = (-x/lambda, 1/lambda)."""
        return cls(u=-x / lam, eta=1.0 / lam)


@dataclass(frozen=True)
class PoleLattice:
    """Sorted, merged noninteracting relative energies p + q*lambda."""

    values: Tuple[float, ...]
    multiplicity: Tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != len(self.multiplicity):
            raise ValueError("values and multiplicity must have equal length")
        if not self.values or self.values[0] != 0.0:
            raise ValueError("pole lattice must start at exactly 0")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("pole values must be strictly increasing")
        if any(g < 1 for g in self.multiplicity):
            raise ValueError("pole multiplicities must be positive")

    def __len__(self) -> int:
        return len(self.values)

    def interval(self, branch_index: int) -> Tuple[float, float]:
        """Open interval holding branch `branch_index` (branch 0 is unbounded below)."""
        if branch_index < 0:
            raise ValueError(f"branch_index must be >= 0, got {branch_index}")
        if branch_index >= len(self.values):
            raise IndexError(f"lattice has no upper pole for branch {branch_index}")
        upper = self.values[branch_index]
        lower = -math.inf if branch_index == 0 else self.values[branch_index - 1]
        return lower, upper


@dataclass(frozen=True)
class TrapParams:
    """
    Trap geometry and dimensionless interaction parameters.

    Attributes:
        lam: Trap aspect ratio omega_z / omega_perp
        inv_as: Sweep variable -d_perp / a_s
        r0_ratio: |r0| / d_perp
    """

    lam: float
    inv_as: float = 0.0
    r0_ratio: float = 0.0

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"Trap aspect ratio must be positive, got {self.lam}")
        if self.r0_ratio < 0:
            raise ValueError(f"r0_ratio must be non-negative, got {self.r0_ratio}")
        if not math.isfinite(self.inv_as):
            raise ValueError(f"inv_as must be finite, got {self.inv_as}")

    def at(self, inv_as: float) -> "TrapParams":
        """Same trap and effective range at another interaction strength."""
        return replace(self, inv_as=float(inv_as))


@dataclass(frozen=True)
class FeshbachParams:
    """
    Experimental resonance parameters in any consistent unit system.

    Attributes:
        a_bg: Background scattering length
        B0: Resonance position
        Delta: Resonance width
        mu: Magnetic moment difference between open and closed channel
        m: Atomic mass
        hbar: Reduced Planck constant in the same units (SI by default)
    """

    a_bg: float
    B0: float
    Delta: float
    mu: float
    m: float
    hbar: float = 1.054571817e-34

    def __post_init__(self):
        if self.Delta == 0:
            raise ValueError("Resonance width Delta must be non-zero")
        if self.mu == 0:
            raise ValueError("Magnetic moment difference mu must be non-zero")
        if self.m <= 0:
            raise ValueError(f"Mass must be positive, got {self.m}")


@dataclass(frozen=True)
class BranchPoint:
    """One adiabatic eigenstate at one interaction strength."""

    inv_as: float
    x: float
    beta2: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.beta2 <= 1.0:
            raise ValueError(f"beta2 must lie in [0, 1], got {self.beta2}")


@dataclass
class Branch:
    """An adiabatic branch traced over an ascending grid of inv_as."""

    branch_index: int
    lam: float
    r0_ratio: float
    points: List[BranchPoint] = field(default_factory=list)

    def __post_init__(self):
        if self.branch_index < 0:
            raise ValueError(f"branch_index must be >= 0, got {self.branch_index}")

    @property
    def label(self) -> str:
        return BRANCH_LABELS.get(self.branch_index, f"branch-{self.branch_index}")

    @property
    def inv_as(self) -> np.ndarray:
        return np.array([p.inv_as for p in self.points])

    @property
    def x(self) -> np.ndarray:
        return np.array([p.x for p in self.points])

    @property
    def beta2(self) -> np.ndarray:
        return np.array([p.beta2 for p in self.points])

    def params_at(self, index: int) -> TrapParams:
        return TrapParams(lam=self.lam, inv_as=self.points[index].inv_as, r0_ratio=self.r0_ratio)

    def is_increasing(self) -> bool:
        """True when x rises strictly along the grid."""
        return bool(np.all(np.diff(self.x) > 0))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'inv_as': self.inv_as,
            'branch': self.branch_index,
            'x': self.x,
            'beta2': self.beta2,
        })


@dataclass(frozen=True)
class ToyParams:
    """
    Three-level two-atom toy model.

    Attributes:
        omega: Trap level spacing
        delta: Interaction shift of |00>, below omega
        g: Single-excitation coupling strength
    """

    omega: float
    delta: float = 0.0
    g: float = 0.0

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.g < 0:
            raise ValueError(f"g must be non-negative, got {self.g}")
        if not self.omega - self.delta > 0:
            raise ValueError(f"delta must lie below omega, got delta={self.delta}, omega={self.omega}")

    @property
    def g_over_gap(self) -> float:
        return self.g / (self.omega - self.delta)
