"""
Three-level two-atom toy model.

Each atom keeps its trap ground state |0> and one excited level |1>. The
interaction lowers |00> by omega - delta and couples it to the single
excitations with strength g; |11> is dropped. Only the symmetric combination
(|10> + |01>)/sqrt(2) couples to |00>, so the ground state lives in a 2x2 block.
"""

import logging
import math
from typing import Sequence, Tuple

import numpy as np
import pandas as pd

try:
    from ..models.errors import NormalizationError
    from ..models.trap import ToyParams
    from .entangle import entropy
except ImportError:
    from models.errors import NormalizationError
    from models.trap import ToyParams
    from analysis.entangle import entropy

logger = logging.getLogger(__name__)

_SQRT2 = math.sqrt(2.0)


def toy_ground_state(p: ToyParams) -> Tuple[float, float]:
    """
    Ground state over {|00>, (|10> + |01>)/sqrt(2)}.

    Args:
        p: Toy model parameters

    Returns:
        (a00, a_sym), normalized, with a00 >= 0
    """
    h = np.array([[p.delta, _SQRT2 * p.g],
                  [_SQRT2 * p.g, p.omega]])
    _, vectors = np.linalg.eigh(h)
    a00, a_sym = vectors[:, 0]
    if a00 < 0:
        a00, a_sym = -a00, -a_sym
    return float(a00), float(a_sym)


def toy_state_vector(a00: float, a_sym: float) -> np.ndarray:
    """Two-atom amplitudes over |00>, |01>, |10>, |11>."""
    return np.array([a00, a_sym / _SQRT2, a_sym / _SQRT2, 0.0])


def toy_entropy(a00: float, a_sym: float) -> float:
    """Entropy of one atom's reduced state in a00|00> + a_sym(|10> + |01>)/sqrt(2)."""
    norm2 = a00 ** 2 + a_sym ** 2
    if abs(norm2 - 1.0) > 1e-8:
        raise NormalizationError(f"toy state has norm^2 {norm2:.12g}, expected 1")
    m = np.array([[a00, a_sym / _SQRT2],
                  [a_sym / _SQRT2, 0.0]])
    weights = np.clip(np.linalg.eigvalsh(m @ m.T), 0.0, None)
    return entropy(weights / np.sum(weights))


def toy_saturation_entropy() -> float:
    """Strong-coupling limit 2 ln 2 - (sqrt(3)/2) ln(2 + sqrt(3))."""
    return 2.0 * math.log(2.0) - 0.5 * math.sqrt(3.0) * math.log(2.0 + math.sqrt(3.0))


def toy_sweep(g_over_gap: Sequence[float], omega: float = 1.0, delta: float = 0.0) -> pd.DataFrame:
    """
    Entropy against the coupling ratio g / (omega - delta).

    Args:
        g_over_gap: Non-negative coupling ratios
        omega: Trap level spacing
        delta: Shift of |00>

    Returns:
        DataFrame with columns (g_over_gap, entropy)
    """
    gap = omega - delta
    rows = []
    for ratio in g_over_gap:
        p = ToyParams(omega=omega, delta=delta, g=float(ratio) * gap)
        rows.append({'g_over_gap': float(ratio), 'entropy': toy_entropy(*toy_ground_state(p))})
    logger.info(f"Toy sweep over {len(rows)} coupling values")
    return pd.DataFrame(rows, columns=['g_over_gap', 'entropy'])
