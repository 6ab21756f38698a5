"""
Open-channel pair state in the single-particle oscillator basis.

The contact coupling reaches only even relative modes k = (k_x, k_y, k_z), with
amplitudes proportional to prod_d phi_{k_d}(0) / (x - E_k). With the center of
mass frozen in its ground state, the change to particle coordinates
r = (r1 - r2)/sqrt(2), R = (r1 + r2)/sqrt(2) factorizes per direction:

    |0>_R |k>_r = sum_{a+b=k} (-1)^b sqrt(binom(k, a)) 2^{-k/2} |a>_1 |b>_2

so a and b always share a parity and the particle-basis amplitude splits
into eight parity sectors.
"""

import logging
import math
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np
from scipy import special

try:
    from ..models.errors import OddModeError, ResonantDenominatorError
    from ..models.pair_state import (PARITY_SECTORS, AmplitudeMatrix, ModeTriple,
                                     RelativeExpansion, parity_indices)
    from ..models.settings import SpecfunSettings
    from ..numerics.specfun import enumerate_poles
except ImportError:
    from models.errors import OddModeError, ResonantDenominatorError
    from models.pair_state import (PARITY_SECTORS, AmplitudeMatrix, ModeTriple,
                                   RelativeExpansion, parity_indices)
    from models.settings import SpecfunSettings
    from numerics.specfun import enumerate_poles

logger = logging.getLogger(__name__)

SIGN_ON_SECOND = "second"
SIGN_ON_FIRST = "first"


def _require_even(k: int, what: str = "k") -> None:
    if k < 0 or k % 2:
        raise OddModeError(f"{what} must be a non-negative even integer, got {k}")


def mode_amplitude_at_origin(k: int) -> float:
    """
    Oscillator eigenfunction phi_k(0) in units of the oscillator length.

        phi_k(0) = pi^{-1/4} (-1)^{k/2} sqrt(k!) / (2^{k/2} (k/2)!)
    """
    _require_even(k)
    half = k // 2
    log_mag = 0.5 * special.gammaln(k + 1) - half * math.log(2.0) - special.gammaln(half + 1)
    return (-1) ** half * math.pi ** -0.25 * math.exp(log_mag)


def _origin_amplitudes(cap: int) -> np.ndarray:
    return np.array([mode_amplitude_at_origin(k) for k in range(0, cap + 1, 2)])


def truncation_caps(K: int, lam: float, axial_cap: int = 60) -> Tuple[int, int]:
    """
    Per-direction caps (K_perp, K_z).

    For cigar-shaped traps (lambda < 1) the cheap axial quanta need K_z >= K/lambda,
    limited to axial_cap; otherwise both caps equal K.
    """
    _require_even(K, "K")
    if lam >= 1:
        return K, K
    k_z = int(math.ceil(K / lam - 1e-9))
    k_z += k_z % 2
    return K, max(K, min(axial_cap - axial_cap % 2, k_z))


def relative_expansion(x: float, lam: float, K: int, K_z: Optional[int] = None,
                       resonance_tol: float = 1e-9) -> RelativeExpansion:
    """
    Normalized relative-motion coefficients at energy x.

    Args:
        x: Dimensionless pair energy (a solved branch point)
        lam: Trap aspect ratio
        K: Transverse cap on each relative mode index
        K_z: Axial cap; defaults to K
        resonance_tol: Minimum distance of x from every level (k_x+k_y)/2 + lambda k_z/2

    Returns:
        Normalized RelativeExpansion
    """
    K_z = K if K_z is None else K_z
    _require_even(K, "K")
    _require_even(K_z, "K_z")

    i = np.arange(K // 2 + 1, dtype=float)
    l = np.arange(K_z // 2 + 1, dtype=float)
    levels = i[:, None, None] + i[None, :, None] + lam * l[None, None, :]
    denom = x - levels
    if np.min(np.abs(denom)) < resonance_tol:
        raise ResonantDenominatorError(
            f"x={x!r} coincides with a noninteracting level at lambda={lam!r}"
        )

    phi_perp = _origin_amplitudes(K)
    phi_z = _origin_amplitudes(K_z)
    numer = phi_perp[:, None, None] * phi_perp[None, :, None] * phi_z[None, None, :]
    coeffs = numer / denom
    return RelativeExpansion(lam=lam, x=x, coeffs=coeffs, K=K, K_z=K_z).normalized()


def limit_expansion(branch_index: int, lam: float, K: Optional[int] = None,
                    K_z: Optional[int] = None,
                    settings: Optional[SpecfunSettings] = None) -> RelativeExpansion:
    """
    Limit state of a branch as inv_as -> +inf, up to a global sign.

    Only the relative modes sitting on the branch's upper pole survive, each
    weighted by prod_d phi_{k_d}(0). Caps left as None are set to the smallest
    values that reach every mode on the pole.
    """
    lattice = enumerate_poles(lam, float(max(1, branch_index)), settings)
    x_star = lattice.interval(branch_index)[1]
    tol = 1e-9 if settings is None else settings.merge_tol
    need_perp = 2 * int(math.floor(x_star + tol))
    need_z = 2 * int(math.floor(x_star / lam + tol))
    K = need_perp if K is None else K
    K_z = max(need_z, K) if K_z is None else K_z
    _require_even(K, "K")
    _require_even(K_z, "K_z")

    i = np.arange(K // 2 + 1, dtype=float)
    l = np.arange(K_z // 2 + 1, dtype=float)
    levels = i[:, None, None] + i[None, :, None] + lam * l[None, None, :]
    on_pole = np.abs(levels - x_star) < tol

    # modes on the pole beyond the caps would be silently dropped
    if K < need_perp or K_z < need_z:
        raise ValueError(f"caps K={K}, K_z={K_z} do not reach the level x={x_star:g}")

    phi_perp = _origin_amplitudes(K)
    phi_z = _origin_amplitudes(K_z)
    numer = phi_perp[:, None, None] * phi_perp[None, :, None] * phi_z[None, None, :]
    coeffs = np.where(on_pole, numer, 0.0)
    return RelativeExpansion(lam=lam, x=x_star, coeffs=coeffs, K=K, K_z=K_z).normalized()


def _transfer_value(k: int, a: int, sign_on: str) -> float:
    b = k - a
    sign = (-1) ** (b if sign_on == SIGN_ON_SECOND else a)
    log_mag = 0.5 * (special.gammaln(k + 1) - (special.gammaln(a + 1) + special.gammaln(b + 1)))
    return sign * math.exp(log_mag - 0.5 * k * math.log(2.0))


def beamsplitter_coeffs(k: int, sign_on: str = SIGN_ON_SECOND) -> List[Tuple[int, int, float]]:
    """
    Particle-basis expansion of (center-of-mass ground) x (relative mode k).

    Returns:
        List of (a, b, T) with a + b = k, ordered by decreasing a
    """
    _require_even(k)
    if sign_on not in (SIGN_ON_SECOND, SIGN_ON_FIRST):
        raise ValueError(f"sign_on must be '{SIGN_ON_SECOND}' or '{SIGN_ON_FIRST}'")
    return [(a, k - a, _transfer_value(k, a, sign_on)) for a in range(k, -1, -1)]


@lru_cache(maxsize=64)
def _transfer_tensor(rel_cap: int, particle_cap: int, parity: int, sign_on: str) -> np.ndarray:
    """T[k/2, ia, ib] restricted to particle indices of one parity."""
    idx = parity_indices(particle_cap, parity)
    position = {int(v): n for n, v in enumerate(idx)}
    tensor = np.zeros((rel_cap // 2 + 1, len(idx), len(idx)))
    for kk in range(rel_cap // 2 + 1):
        k = 2 * kk
        for a in idx:
            b = k - int(a)
            if b in position:
                tensor[kk, position[int(a)], position[b]] = _transfer_value(k, int(a), sign_on)
    tensor.setflags(write=False)
    return tensor


def assemble_amplitude(rel: RelativeExpansion, sign_on: str = SIGN_ON_SECOND) -> AmplitudeMatrix:
    """
    Two-atom amplitude eta_{m1,m2} = sum_k c_k prod_d T^{(k_d)}_{m1_d, m2_d}.

    The particle caps equal the relative caps, since a + b = k never exceeds k.
    """
    caps: ModeTriple = rel.caps
    blocks = {}
    for parity in PARITY_SECTORS:
        tx = _transfer_tensor(caps[0], caps[0], parity[0], sign_on)
        ty = _transfer_tensor(caps[1], caps[1], parity[1], sign_on)
        tz = _transfer_tensor(caps[2], caps[2], parity[2], sign_on)
        block = np.einsum('abc,aij,bkl,cmn->ikmjln', rel.coeffs, tx, ty, tz, optimize=True)
        dim = tx.shape[1] * ty.shape[1] * tz.shape[1]
        blocks[parity] = block.reshape(dim, dim)
    amp = AmplitudeMatrix(caps=caps, blocks=blocks)
    logger.debug(f"Assembled amplitude with caps {caps}, norm^2={amp.norm2:.15f}")
    return amp


def project_relative(amp: AmplitudeMatrix, sign_on: str = SIGN_ON_SECOND) -> np.ndarray:
    """Transpose basis change: recover c_k (indexed by k/2) from eta."""
    caps = amp.caps
    coeffs = np.zeros((caps[0] // 2 + 1, caps[1] // 2 + 1, caps[2] // 2 + 1))
    for parity, block in amp.items():
        tx = _transfer_tensor(caps[0], caps[0], parity[0], sign_on)
        ty = _transfer_tensor(caps[1], caps[1], parity[1], sign_on)
        tz = _transfer_tensor(caps[2], caps[2], parity[2], sign_on)
        shape = (tx.shape[1], ty.shape[1], tz.shape[1]) * 2
        coeffs += np.einsum('ikmjln,aij,bkl,cmn->abc', block.reshape(shape), tx, ty, tz,
                            optimize=True)
    return coeffs


def dense_matrix(amp: AmplitudeMatrix) -> np.ndarray:
    """Scatter the parity blocks into the full single-particle matrix."""
    nx, ny, nz = (c + 1 for c in amp.caps)
    full = np.zeros((nx * ny * nz, nx * ny * nz))
    for parity, block in amp.items():
        flat = [(mx * ny + my) * nz + mz for mx, my, mz in amp.sector_modes(parity)]
        full[np.ix_(flat, flat)] = block
    return full
