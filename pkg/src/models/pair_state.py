"""
Two-atom spatial state containers: relative-motion expansion, particle-basis
amplitude blocks, Schmidt spectra and truncation ramps.
"""

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

Parity = Tuple[int, int, int]
ModeTriple = Tuple[int, int, int]

# Parity sectors (0 = even, 1 = odd) per Cartesian direction
PARITY_SECTORS: List[Parity] = list(itertools.product((0, 1), repeat=3))


def parity_indices(cap: int, parity: int) -> np.ndarray:
    """Single-direction oscillator indices 0..cap with the given parity."""
    return np.arange(parity, cap + 1, 2)


@dataclass
class RelativeExpansion:
    """
    Relative-motion wavefunction over even oscillator modes.

    ``coeffs[i, j, l]`` is the amplitude of the mode k = (2i, 2j, 2l); odd modes
    are never stored because the contact coupling cannot reach them.
    """

    lam: float
    x: float
    coeffs: np.ndarray
    K: int
    K_z: Optional[int] = None

    def __post_init__(self):
        if self.K_z is None:
            self.K_z = self.K
        for name, cap in (("K", self.K), ("K_z", self.K_z)):
            if cap < 0 or cap % 2:
                raise ValueError(f"{name} must be a non-negative even integer, got {cap}")
        expected = (self.K // 2 + 1, self.K // 2 + 1, self.K_z // 2 + 1)
        if self.coeffs.shape != expected:
            raise ValueError(f"coeffs shape {self.coeffs.shape} does not match caps {expected}")

    @property
    def caps(self) -> ModeTriple:
        return (self.K, self.K, self.K_z)

    @property
    def norm2(self) -> float:
        return float(np.sum(self.coeffs ** 2))

    def coefficient(self, k: ModeTriple) -> float:
        """Amplitude c_k; zero for odd or out-of-range modes."""
        if any(kd % 2 or kd < 0 for kd in k) or any(kd > cap for kd, cap in zip(k, self.caps)):
            return 0.0
        return float(self.coeffs[k[0] // 2, k[1] // 2, k[2] // 2])

    def as_dict(self, floor: float = 0.0) -> Dict[ModeTriple, float]:
        """Map from mode triple to amplitude, skipping entries not above floor."""
        out = {}
        for idx in zip(*np.nonzero(np.abs(self.coeffs) > floor)):
            out[tuple(2 * int(i) for i in idx)] = float(self.coeffs[idx])
        return out

    def normalized(self) -> "RelativeExpansion":
        norm = np.sqrt(self.norm2)
        if norm == 0:
            raise ValueError("cannot normalize an empty expansion")
        return RelativeExpansion(self.lam, self.x, self.coeffs / norm, self.K, self.K_z)


@dataclass
class AmplitudeMatrix:
    """
    Symmetric two-atom amplitude eta_{m1,m2} stored by parity sector.

    Each block is indexed by the single-particle triples of one sector in
    C order over (x, y, z); see ``sector_modes``.
    """

    caps: ModeTriple
    blocks: Dict[Parity, np.ndarray] = field(default_factory=dict)

    def sector_modes(self, parity: Parity) -> List[ModeTriple]:
        axes = [parity_indices(cap, p) for cap, p in zip(self.caps, parity)]
        return [tuple(int(v) for v in m) for m in itertools.product(*axes)]

    def items(self) -> Iterator[Tuple[Parity, np.ndarray]]:
        for parity in PARITY_SECTORS:
            if parity in self.blocks:
                yield parity, self.blocks[parity]

    @property
    def norm2(self) -> float:
        return float(sum(np.sum(block ** 2) for _, block in self.items()))

    def max_asymmetry(self) -> float:
        return max((float(np.max(np.abs(b - b.T))) for _, b in self.items() if b.size), default=0.0)

    def entry(self, m1: ModeTriple, m2: ModeTriple) -> float:
        """eta_{m1,m2}; zero whenever m1 and m2 differ in parity along some direction."""
        parity = tuple(v % 2 for v in m1)
        if parity != tuple(v % 2 for v in m2) or parity not in self.blocks:
            return 0.0
        if any(v > cap for v, cap in zip(m1 + m2, self.caps + self.caps)):
            return 0.0
        index = {m: i for i, m in enumerate(self.sector_modes(parity))}
        return float(self.blocks[parity][index[m1], index[m2]])


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Pooled Schmidt weights kappa_q^2 and the entropies derived from them."""

    kappa2: np.ndarray
    spatial_entropy: float
    total_entropy: float

    @property
    def schmidt_rank(self) -> int:
        return int(np.count_nonzero(self.kappa2 > 1e-16))


@dataclass
class ConvergenceReport:
    """Spatial entropy along a truncation schedule."""

    entropies: List[Tuple[int, float]]
    extrapolated: float
    converged: bool
    tolerance: float
    extrapolation_ok: bool = True

    def __post_init__(self):
        ks = [k for k, _ in self.entropies]
        if ks != sorted(ks):
            raise ValueError("entropies must be ordered by increasing K")

    @property
    def final_K(self) -> int:
        return self.entropies[-1][0]

    @property
    def final_entropy(self) -> float:
        return self.entropies[-1][1]
