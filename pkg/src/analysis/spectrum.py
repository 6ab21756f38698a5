"""
Two-atom energy spectrum in a cylindrical trap with a two-channel contact interaction.

The quantization condition in dimensionless form reads

    sqrt(2 lambda) [ d/a_s + (|r0|/d)(x + 1 + lambda/2) ] = -(lambda/sqrt(pi)) F(-x/lambda, 1/lambda)

with the sweep variable inv_as = -d/a_s. Between consecutive noninteracting
levels the left minus right side rises monotonically from -inf to +inf, so each
pole interval holds exactly one root: the adiabatic branch.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import constants, optimize

try:
    from ..models.errors import (CrossoverError, GridPointError, MultipleRootsError,
                                 NoRootError, ResonanceFieldError)
    from ..models.settings import SolverSettings, default_settings
    from ..models.trap import Branch, BranchPoint, FeshbachParams, PoleLattice, TrapParams
    from ..numerics.specfun import (F_spherical_closed_form, enumerate_poles, eval_F_dx,
                                    eval_F_energy)
except ImportError:
    from models.errors import (CrossoverError, GridPointError, MultipleRootsError,
                               NoRootError, ResonanceFieldError)
    from models.settings import SolverSettings, default_settings
    from models.trap import Branch, BranchPoint, FeshbachParams, PoleLattice, TrapParams
    from numerics.specfun import (F_spherical_closed_form, enumerate_poles, eval_F_dx,
                                  eval_F_energy)

logger = logging.getLogger(__name__)

_SQRT_PI = math.sqrt(math.pi)


class SpectrumSolver:
    """Solve the quantization condition and trace adiabatic branches."""

    def __init__(self, settings: Optional[SolverSettings] = None):
        """
        Initialize the solver.

        Args:
            settings: Numerical settings; defaults to config/solver_config.yaml
        """
        self.settings = settings or default_settings()
        self._lattices = {}

    # ------------------------------------------------------------------
    # Quantization condition
    # ------------------------------------------------------------------
    def quantization_residual(self, x: float, p: TrapParams) -> float:
        """Left minus right side of the quantization condition at energy x."""
        lam = p.lam
        lhs = math.sqrt(2.0 * lam) * (-p.inv_as + p.r0_ratio * (x + 1.0 + lam / 2.0))
        return lhs + (lam / _SQRT_PI) * eval_F_energy(x, lam, self.settings.specfun)

    def residual_dx(self, x: float, p: TrapParams) -> float:
        """Partial derivative of the residual in x (positive between poles)."""
        lam = p.lam
        dF = eval_F_dx(x, lam, self.settings.spectrum.derivative_step, self.settings.specfun)
        return math.sqrt(2.0 * lam) * p.r0_ratio + (lam / _SQRT_PI) * dF

    def pole_lattice(self, lam: float, min_poles: int = 1) -> PoleLattice:
        """Pole lattice holding at least `min_poles` values, extended as needed up to x_max."""
        x_max_limit = self.settings.spectrum.x_max
        cached = self._lattices.get(lam)
        if cached is not None and len(cached) >= min_poles:
            return cached

        x_max = max(1.0, lam)
        while True:
            lattice = enumerate_poles(lam, min(x_max, x_max_limit), self.settings.specfun)
            if len(lattice) >= min_poles or x_max >= x_max_limit:
                break
            x_max *= 2.0
        if len(lattice) < min_poles:
            raise CrossoverError(
                f"branch needs {min_poles} poles but only {len(lattice)} lie below x_max={x_max_limit}"
            )
        self._lattices[lam] = lattice
        return lattice

    def branch_interval(self, branch_index: int, lam: float) -> Tuple[float, float]:
        """Open pole interval of a branch; branch 0 is unbounded below."""
        return self.pole_lattice(lam, branch_index + 1).interval(branch_index)

    def _edge(self, lam: float) -> float:
        # stay clear of the exclusion radius, which is measured in u = -x/lambda
        return 4.0 * self.settings.specfun.exclusion_radius * lam

    def _check_broad_resonance(self, p: TrapParams) -> None:
        limit = self.settings.spectrum.broad_resonance_limit
        if p.r0_ratio > limit:
            logger.warning(
                f"|r0|/d_perp = {p.r0_ratio:g} exceeds {limit:g}; "
                "the broad-resonance model is outside its validity range"
            )

    def _lower_bound(self, p: TrapParams, hi: float) -> float:
        cfg = self.settings.spectrum
        x_lo = min(cfg.lower_bound_start, hi - 1.0)
        while self.quantization_residual(x_lo, p) >= 0:
            if x_lo < cfg.lower_bound_limit:
                raise NoRootError(
                    f"no bound-state root above x={cfg.lower_bound_limit:g} for inv_as={p.inv_as:g}"
                )
            x_lo *= 2.0
        return x_lo

    def _find_root(self, lo: float, hi: float, p: TrapParams) -> float:
        cfg = self.settings.spectrum
        samples = np.linspace(lo, hi, cfg.num_samples + 2)
        residuals = np.array([self.quantization_residual(x, p) for x in samples])

        exact = np.nonzero(residuals == 0.0)[0]
        if len(exact) == 1:
            return float(samples[exact[0]])
        signs = np.sign(residuals)
        changes = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
        if len(changes) == 0:
            raise NoRootError(f"no sign change of the residual in ({lo:.12g}, {hi:.12g})")
        if len(changes) > 1:
            raise MultipleRootsError(
                f"{len(changes)} sign changes in ({lo:.12g}, {hi:.12g}); "
                "the broad-resonance assumption does not hold here"
            )
        i = int(changes[0])
        logger.debug(f"bracket [{samples[i]:.12g}, {samples[i + 1]:.12g}] for inv_as={p.inv_as:g}")
        return float(optimize.brentq(self.quantization_residual, samples[i], samples[i + 1],
                                     args=(p,), xtol=cfg.xtol))

    def solve_branch_point(self, branch_index: int, p: TrapParams,
                           seed: Optional[float] = None) -> BranchPoint:
        """
        Root of the quantization condition on one branch.

        Args:
            branch_index: 0 for the bound branch, n for the interval (pole_{n-1}, pole_n)
            p: Trap and interaction parameters
            seed: A known lower bound for the root, e.g. the root at a smaller inv_as

        Returns:
            BranchPoint with the energy and its molecular fraction
        """
        if branch_index < 0:
            raise ValueError(f"branch_index must be >= 0, got {branch_index}")
        self._check_broad_resonance(p)

        lower, upper = self.branch_interval(branch_index, p.lam)
        edge = self._edge(p.lam)
        hi = upper - edge
        lo = self._lower_bound(p, hi) if math.isinf(lower) else lower + edge
        if seed is not None and lo < seed < hi and self.quantization_residual(seed, p) <= 0:
            lo = seed

        x = self._find_root(lo, hi, p)
        return BranchPoint(inv_as=p.inv_as, x=x, beta2=self._implicit_beta2(x, p))

    # ------------------------------------------------------------------
    # Branch tracing
    # ------------------------------------------------------------------
    def trace_branch(self, branch_index: int, inv_as_grid: Sequence[float],
                     base: TrapParams) -> Branch:
        """
        Follow one branch across an ascending grid of inv_as.

        Each root seeds the search at the next grid value, since x rises with inv_as.
        """
        grid = [float(v) for v in inv_as_grid]
        if any(b < a for a, b in zip(grid, grid[1:])):
            raise ValueError("inv_as grid must be sorted ascending")

        branch = Branch(branch_index=branch_index, lam=base.lam, r0_ratio=base.r0_ratio)
        seed = None
        for inv_as in grid:
            try:
                point = self.solve_branch_point(branch_index, base.at(inv_as), seed=seed)
            except CrossoverError as e:
                raise GridPointError(inv_as, branch_index, e) from e
            branch.points.append(point)
            seed = point.x
        logger.info(f"Traced branch {branch.label} over {len(grid)} points (lambda={base.lam:g})")
        return branch

    def trace_spectrum(self, branches: Sequence[int], inv_as_grid: Sequence[float],
                       base: TrapParams) -> pd.DataFrame:
        """Energy-spectrum table with columns (inv_as, branch, x, beta2)."""
        frames = [self.trace_branch(b, inv_as_grid, base).to_frame() for b in branches]
        df = pd.concat(frames, ignore_index=True)
        return df.sort_values(['branch', 'inv_as'], kind='mergesort').reset_index(drop=True)

    # ------------------------------------------------------------------
    # Molecular fraction
    # ------------------------------------------------------------------
    def _implicit_beta2(self, x: float, p: TrapParams) -> float:
        if p.r0_ratio == 0:
            return 0.0
        dx_dinv = math.sqrt(2.0 * p.lam) / self.residual_dx(x, p)
        return float(min(max(p.r0_ratio * dx_dinv, 0.0), 1.0))

    def molecular_fraction(self, branch: Branch, at_index: int) -> float:
        """
        Closed-channel weight beta^2 = (|r0|/d) dx/d(inv_as) by implicit differentiation.

        Args:
            branch: A traced branch
            at_index: Grid index of the point

        Returns:
            beta^2 at that point
        """
        point = branch.points[at_index]
        return self._implicit_beta2(point.x, branch.params_at(at_index))

    @staticmethod
    def grid_molecular_fraction(branch: Branch, at_index: int) -> float:
        """beta^2 from finite differences of x over the grid (second order at the ends)."""
        if len(branch.points) < 3:
            raise ValueError("grid differentiation needs at least three points")
        slope = np.gradient(branch.x, branch.inv_as, edge_order=2)
        return float(branch.r0_ratio * slope[at_index])

    # ------------------------------------------------------------------
    # Single-channel reference
    # ------------------------------------------------------------------
    def single_channel_roots(self, x_lo: float, x_hi: float, inv_as: float) -> List[float]:
        """
        Roots of the spherical single-channel condition
        sqrt(2) d/a_s = -F(-x, 1)/sqrt(pi) on (x_lo, x_hi).
        """
        edge = self._edge(1.0)

        def residual(x: float) -> float:
            return -math.sqrt(2.0) * inv_as + F_spherical_closed_form(x) / _SQRT_PI

        breaks = [float(n) for n in range(max(0, math.ceil(x_lo)), math.floor(x_hi) + 1)]
        bounds = sorted(set([x_lo] + [b for b in breaks if x_lo < b < x_hi] + [x_hi]))
        roots = []
        for a, b in zip(bounds, bounds[1:]):
            a_in = a + edge if float(a).is_integer() else a
            b_in = b - edge if float(b).is_integer() else b
            fa, fb = residual(a_in), residual(b_in)
            if fa * fb < 0:
                roots.append(float(optimize.brentq(residual, a_in, b_in,
                                                   xtol=self.settings.spectrum.xtol)))
        return roots


def feshbach_map(B: float, fp: FeshbachParams) -> Tuple[float, float]:
    """
    Scattering length and effective range at magnetic field B.

        a_s = a_bg (1 - Delta / (B - B0)),   r0 = -2 hbar^2 / (m mu a_bg Delta)
    """
    if B == fp.B0:
        raise ResonanceFieldError(f"field B={B} sits on the resonance B0={fp.B0}")
    a_s = fp.a_bg * (1.0 - fp.Delta / (B - fp.B0))
    r0 = -2.0 * fp.hbar ** 2 / (fp.m * fp.mu * fp.a_bg * fp.Delta)
    return a_s, r0


def oscillator_length(m: float, omega: float, hbar: float = constants.hbar) -> float:
    """Harmonic oscillator length sqrt(hbar / (m omega))."""
    if m <= 0 or omega <= 0:
        raise ValueError("mass and trap frequency must be positive")
    return math.sqrt(hbar / (m * omega))


def field_to_trap_params(B: float, fp: FeshbachParams, d_perp: float, lam: float) -> TrapParams:
    """Dimensionless trap parameters (inv_as = -d/a_s, |r0|/d) at field B."""
    a_s, r0 = feshbach_map(B, fp)
    if a_s == 0:
        raise ValueError(f"scattering length vanishes at B={B}; inv_as is unbounded")
    return TrapParams(lam=lam, inv_as=-d_perp / a_s, r0_ratio=abs(r0) / d_perp)
