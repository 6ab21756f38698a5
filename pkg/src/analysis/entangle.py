"""
Schmidt decomposition and von Neumann entropy of the two-atom spatial state.

Because the amplitude is real and symmetric, its Schmidt coefficients are the
absolute eigenvalues of each parity block; no singular value decomposition is
needed.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import optimize

try:
    from ..models.errors import (AsymmetricAmplitudeError, CrossoverError, GridPointError,
                                 NormalizationError)
    from ..models.pair_state import AmplitudeMatrix, ConvergenceReport, SchmidtSpectrum
    from ..models.settings import SolverSettings, default_settings
    from ..models.trap import TrapParams
    from .pairstate import (SIGN_ON_SECOND, assemble_amplitude, limit_expansion,
                            relative_expansion, truncation_caps)
    from .spectrum import SpectrumSolver
except ImportError:
    from models.errors import (AsymmetricAmplitudeError, CrossoverError, GridPointError,
                               NormalizationError)
    from models.pair_state import AmplitudeMatrix, ConvergenceReport, SchmidtSpectrum
    from models.settings import SolverSettings, default_settings
    from models.trap import TrapParams
    from analysis.pairstate import (SIGN_ON_SECOND, assemble_amplitude, limit_expansion,
                                    relative_expansion, truncation_caps)
    from analysis.spectrum import SpectrumSolver

logger = logging.getLogger(__name__)

SPIN_SINGLET_ENTROPY = math.log(2.0)


def entropy(kappa2: Sequence[float], floor: float = 1e-16) -> float:
    """
    Von Neumann entropy -sum k^2 ln k^2 in nats.

    Args:
        kappa2: Schmidt weights, summing to one
        floor: Weights below this contribute nothing

    Returns:
        Entropy in nats
    """
    weights = np.asarray(kappa2, dtype=float)
    total = float(np.sum(weights))
    if abs(total - 1.0) > 1e-8:
        raise NormalizationError(f"Schmidt weights sum to {total:.12g}, expected 1")
    kept = weights[weights >= floor]
    return float(max(-np.sum(kept * np.log(kept)), 0.0))


def total_entropy(spatial: float) -> float:
    """Spatial entropy plus the ln 2 of the spin singlet."""
    return spatial + SPIN_SINGLET_ENTROPY


def schmidt(amp: AmplitudeMatrix, symmetry_tol: float = 1e-10,
            floor: float = 1e-16) -> SchmidtSpectrum:
    """
    Symmetric Schmidt decomposition block by block.

    Args:
        amp: Normalized symmetric amplitude
        symmetry_tol: Largest tolerated |eta - eta^T|
        floor: Weight floor passed to the entropy

    Returns:
        SchmidtSpectrum with weights pooled across sectors, largest first
    """
    asymmetry = amp.max_asymmetry()
    if asymmetry > symmetry_tol:
        raise AsymmetricAmplitudeError(f"amplitude asymmetry {asymmetry:.3g} exceeds {symmetry_tol:g}")

    pooled: List[np.ndarray] = []
    for parity, block in amp.items():
        if block.size == 0:
            continue
        eigenvalues = np.linalg.eigh(block)[0]
        pooled.append(eigenvalues ** 2)
    kappa2 = np.sort(np.concatenate(pooled))[::-1] if pooled else np.zeros(0)

    spatial = entropy(kappa2, floor)
    return SchmidtSpectrum(kappa2=kappa2, spatial_entropy=spatial, total_entropy=total_entropy(spatial))


def extrapolate_power_law(ks: Sequence[int], values: Sequence[float]) -> Tuple[float, bool]:
    """
    Extrapolate S(K) = S_inf - A K^{-p} through the last three points.

    Returns:
        (extrapolated value, whether the fit was possible); the last value is
        returned when it was not
    """
    if len(ks) < 3:
        return float(values[-1]), False
    k1, k2, k3 = (float(k) for k in ks[-3:])
    s1, s2, s3 = (float(v) for v in values[-3:])
    d1, d2 = s2 - s1, s3 - s2
    if d2 == 0.0:
        return s3, True
    if d1 == 0.0 or d1 * d2 < 0:
        return s3, False

    ratio = d2 / d1
    ratio_max = math.log(k3 / k2) / math.log(k2 / k1)
    if ratio >= ratio_max:
        return s3, False

    def mismatch(p: float) -> float:
        return (k2 ** -p - k3 ** -p) / (k1 ** -p - k2 ** -p) - ratio

    p_lo, p_hi = 1e-6, 60.0
    if mismatch(p_hi) >= 0:
        # tail already below anything a power law can resolve
        return s3, True
    p = optimize.brentq(mismatch, p_lo, p_hi, xtol=1e-12)
    amplitude = d2 / (k2 ** -p - k3 ** -p)
    return s3 + amplitude * k3 ** -p, True


class EntanglementAnalyzer:
    """Pair entanglement along adiabatic branches."""

    def __init__(self, settings: Optional[SolverSettings] = None,
                 solver: Optional[SpectrumSolver] = None):
        """
        Initialize the analyzer.

        Args:
            settings: Numerical settings; defaults to config/solver_config.yaml
            solver: Spectrum solver to share (one is created otherwise)
        """
        self.settings = settings or default_settings()
        self.solver = solver or SpectrumSolver(self.settings)

    def schmidt(self, amp: AmplitudeMatrix) -> SchmidtSpectrum:
        cfg = self.settings.entangle
        return schmidt(amp, cfg.symmetry_tol, cfg.weight_floor)

    def spectrum_at(self, x: float, lam: float, K: int,
                    sign_on: str = SIGN_ON_SECOND) -> SchmidtSpectrum:
        """Schmidt spectrum of the open-channel state at a solved energy x."""
        K_perp, K_z = truncation_caps(K, lam, self.settings.entangle.axial_cap)
        rel = relative_expansion(x, lam, K_perp, K_z)
        return self.schmidt(assemble_amplitude(rel, sign_on))

    def branch_entanglement(self, branch_index: int, p: TrapParams, K: int) -> SchmidtSpectrum:
        """
        Solve one branch point and decompose its pair state.

        Args:
            branch_index: Adiabatic branch
            p: Trap and interaction parameters
            K: Even truncation cap (the axial cap is scaled for lambda < 1)

        Returns:
            SchmidtSpectrum of the branch state
        """
        point = self.solver.solve_branch_point(branch_index, p)
        return self.spectrum_at(point.x, p.lam, K)

    def _converge_at(self, x: float, lam: float, K_schedule: Sequence[int],
                     tol: float) -> ConvergenceReport:
        schedule = [int(k) for k in K_schedule]
        if not schedule:
            raise ValueError("K_schedule must not be empty")
        if any(b <= a for a, b in zip(schedule, schedule[1:])):
            raise ValueError(f"K_schedule must be strictly increasing, got {schedule}")

        entropies = []
        for K in schedule:
            value = self.spectrum_at(x, lam, K).spatial_entropy
            logger.debug(f"x={x:.12g} lambda={lam:g}: K={K} -> S={value:.12g}")
            entropies.append((K, value))

        values = [s for _, s in entropies]
        converged = len(values) >= 2 and abs(values[-1] - values[-2]) < tol
        extrapolated, fit_ok = extrapolate_power_law(schedule, values)
        return ConvergenceReport(entropies=entropies, extrapolated=extrapolated,
                                 converged=converged, tolerance=tol, extrapolation_ok=fit_ok)

    def converge_entropy(self, branch_index: int, p: TrapParams,
                         K_schedule: Optional[Sequence[int]] = None,
                         tol: Optional[float] = None) -> ConvergenceReport:
        """
        Spatial entropy of one branch point along a truncation schedule.

        The energy is solved once; only the basis cap changes along the ramp.
        """
        cfg = self.settings.entangle
        schedule = cfg.k_schedule if K_schedule is None else K_schedule
        tol = cfg.tol if tol is None else tol

        point = self.solver.solve_branch_point(branch_index, p)
        report = self._converge_at(point.x, p.lam, schedule, tol)
        if not report.converged:
            logger.warning(
                f"entropy not converged to {tol:g} on branch {branch_index} at "
                f"inv_as={p.inv_as:g}, lambda={p.lam:g}: last K={report.final_K}"
            )
        if not report.extrapolation_ok:
            logger.warning(f"power-law extrapolation failed at inv_as={p.inv_as:g}; using K={report.final_K}")
        return report

    def limit_entropy(self, branch_index: int, lam: float) -> float:
        """Spatial entropy of the branch's inv_as -> +inf limit state."""
        rel = limit_expansion(branch_index, lam, settings=self.settings.specfun)
        return self.schmidt(assemble_amplitude(rel)).spatial_entropy

    def entanglement_sweep(self, branch_index: int, inv_as_grid: Sequence[float],
                           base: TrapParams, K_schedule: Optional[Sequence[int]] = None,
                           tol: Optional[float] = None) -> pd.DataFrame:
        """
        Entropy curve of one branch over a grid of inv_as.

        Returns:
            DataFrame with columns (inv_as, branch, K, spatial_entropy,
            total_entropy, converged, extrapolated); K is the last cap used
        """
        cfg = self.settings.entangle
        schedule = cfg.k_schedule if K_schedule is None else K_schedule
        tol = cfg.tol if tol is None else tol

        branch = self.solver.trace_branch(branch_index, inv_as_grid, base)
        rows = []
        not_converged = 0
        for point in branch.points:
            try:
                report = self._converge_at(point.x, base.lam, schedule, tol)
            except CrossoverError as e:
                raise GridPointError(point.inv_as, branch_index, e) from e
            not_converged += not report.converged
            rows.append({
                'inv_as': point.inv_as,
                'branch': branch_index,
                'K': report.final_K,
                'spatial_entropy': report.final_entropy,
                'total_entropy': total_entropy(report.final_entropy),
                'converged': report.converged,
                'extrapolated': report.extrapolated,
            })

        if not_converged:
            logger.warning(f"{not_converged} of {len(rows)} points on branch {branch.label} "
                           f"did not converge to {tol:g}")
        logger.info(f"Entropy sweep of branch {branch.label}: {len(rows)} points (lambda={base.lam:g})")
        return pd.DataFrame(rows, columns=['inv_as', 'branch', 'K', 'spatial_entropy',
                                           'total_entropy', 'converged', 'extrapolated'])
