"""
Regularized trap function F(u, eta) and the Gamma-function identities around it.

    F(u, eta) = int_0^inf dt [ eta e^{-u t} / (sqrt(1 - e^{-t}) (1 - e^{-eta t})) - t^{-3/2} ]

The integral is split at t = T. On (0, T] the subtracted integrand is integrated
adaptively after t = s^2. On [T, inf) both denominators are expanded,

    1/sqrt(1 - e^{-t}) = sum_p c_p e^{-p t},   c_p = binom(2p, p) / 4^p
    1/(1 - e^{-eta t}) = sum_q e^{-q eta t}

and integrated termwise, giving sum_{p,q} c_p eta e^{-a T}/a with a = u + p + q eta.
The termwise form is also the continuation to u < 0, with simple poles at
u = -(p + q eta).
"""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np
from scipy import integrate, special

try:
    from ..models.errors import GammaPoleError, NearPoleError, SeriesTruncationError
    from ..models.settings import SpecfunSettings, default_settings
    from ..models.trap import FArgs, PoleLattice
except ImportError:
    from models.errors import GammaPoleError, NearPoleError, SeriesTruncationError
    from models.settings import SpecfunSettings, default_settings
    from models.trap import FArgs, PoleLattice

logger = logging.getLogger(__name__)

_SQRT_PI = math.sqrt(math.pi)


def _specfun_settings(settings: Optional[SpecfunSettings]) -> SpecfunSettings:
    return settings if settings is not None else default_settings().specfun


def _is_gamma_pole(z: float) -> bool:
    return z <= 0 and float(z).is_integer()


def gamma_fn(z: float) -> float:
    """Gamma function on the real line; raises at non-positive integers."""
    if _is_gamma_pole(z):
        raise GammaPoleError(f"Gamma has a pole at z={z}")
    return float(special.gamma(z))


def F_spherical_closed_form(x: float) -> float:
    """
    Spherical-trap value F(-x, 1) = -2 sqrt(pi) Gamma(-x) / Gamma(-x - 1/2).

    Where Gamma(-x - 1/2) has a pole the result is exactly zero; where Gamma(-x)
    has a pole (x = 0, 1, 2, ...) GammaPoleError is raised.
    """
    z = -x
    if _is_gamma_pole(z):
        raise GammaPoleError(f"Gamma(-x) has a pole at x={x}")
    return float(-2.0 * _SQRT_PI * special.gamma(z) * special.rgamma(z - 0.5))


def _log_planck(z: float) -> float:
    """log(z / (1 - e^{-z})) without cancellation at small z."""
    if z < 1e-2:
        z2 = z * z
        return z / 2.0 - z2 / 24.0 + z2 * z2 / 2880.0 - z2 * z2 * z2 / 181440.0
    return math.log(z) - math.log(-math.expm1(-z))


def _subtracted_integrand(s: float, u: float, eta: float) -> float:
    # 2 s [f(s^2) - s^{-3}] written as 2 (h - 1)/s^2 with h = t^{3/2} f(t)
    t = s * s
    log_h = -u * t + 0.5 * _log_planck(t) + _log_planck(eta * t)
    return 2.0 * math.expm1(log_h) / t


def _nearest_pole_u(u: float, eta: float) -> Tuple[float, float]:
    """Closest lattice point -(p + q eta) to u and its distance."""
    if u > 0:
        return 0.0, u
    best_pole, best_dist = 0.0, abs(u)
    for p in range(int(math.floor(-u)) + 2):
        q = max(0, int(round((-u - p) / eta)))
        for qq in (q - 1, q, q + 1):
            if qq < 0:
                continue
            pole = -(p + qq * eta)
            dist = abs(u - pole)
            if dist < best_dist:
                best_pole, best_dist = pole, dist
    return best_pole, best_dist


def _check_pole_distance(u: float, eta: float, radius: float) -> None:
    pole, dist = _nearest_pole_u(u, eta)
    if dist < radius:
        raise NearPoleError(u, pole, radius)


def _pole_series(u: float, eta: float, split: float, rel_tol: float, max_terms: int) -> float:
    """sum_{p,q} c_p eta e^{-a T} / a, truncated on the running term size."""
    total = 0.0
    n_terms = 0
    c_p = 1.0
    chunk = max(16, int(math.ceil(40.0 / (eta * split))))
    p = 0
    while True:
        row = 0.0
        q_start = 0
        while True:
            q = np.arange(q_start, q_start + chunk, dtype=float)
            a = u + p + q * eta
            terms = c_p * eta * np.exp(-a * split) / a
            row += float(np.sum(terms))
            n_terms += chunk
            q_start += chunk
            if n_terms > max_terms:
                raise SeriesTruncationError(
                    f"pole series for u={u}, eta={eta} did not converge within {max_terms} terms"
                )
            scale = max(abs(total + row), 1.0)
            if a[-1] > 0 and abs(terms[-1]) < rel_tol * scale:
                break
        total += row
        first_a = u + p
        if first_a > 0 and abs(row) < rel_tol * max(abs(total), 1.0):
            break
        p += 1
        c_p *= (2.0 * p - 1.0) / (2.0 * p)
    return total


def eval_F(args: FArgs, settings: Optional[SpecfunSettings] = None) -> float:
    """
    Evaluate the regularized trap function F(u, eta).

    Args:
        args: (u, eta) with eta > 0
        settings: Quadrature and series tolerances; defaults to the config file

    Returns:
        F(u, eta), analytically continued to u < 0
    """
    cfg = _specfun_settings(settings)
    u, eta = float(args.u), float(args.eta)
    _check_pole_distance(u, eta, cfg.exclusion_radius)

    split = cfg.split_point
    near, _ = integrate.quad(
        _subtracted_integrand, 0.0, math.sqrt(split), args=(u, eta),
        epsabs=cfg.quad_epsabs, epsrel=cfg.quad_epsrel, limit=cfg.quad_limit,
    )
    # removed counterterm on [T, inf): -int_T^inf t^{-3/2} dt
    counterterm_tail = -2.0 / math.sqrt(split)
    series = _pole_series(u, eta, split, cfg.series_rel_tol, cfg.series_max_terms)
    return near + counterterm_tail + series


def eval_F_energy(x: float, lam: float, settings: Optional[SpecfunSettings] = None) -> float:
    """F(-x/lambda, 1/lambda), the form entering the quantization condition."""
    return eval_F(FArgs.from_energy(x, lam), settings)


def eval_F_dx(x: float, lam: float, h: float = 1e-5,
              settings: Optional[SpecfunSettings] = None) -> float:
    """Centered difference d/dx of F(-x/lambda, 1/lambda)."""
    return (eval_F_energy(x + h, lam, settings) - eval_F_energy(x - h, lam, settings)) / (2.0 * h)


def enumerate_poles(lam: float, x_max: float,
                    settings: Optional[SpecfunSettings] = None) -> PoleLattice:
    """
    Noninteracting relative energies n_perp + n_z * lambda up to x_max.

    Values closer than the merge tolerance are merged; the multiplicity counts the
    (n_perp, n_z) pairs landing on each merged value.
    """
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if not x_max > 0:
        raise ValueError(f"x_max must be positive, got {x_max}")
    tol = _specfun_settings(settings).merge_tol

    raw: List[float] = []
    for n_perp in range(int(math.floor(x_max + tol)) + 1):
        for n_z in range(int(math.floor((x_max - n_perp + tol) / lam)) + 1):
            value = n_perp + n_z * lam
            if value <= x_max + tol:
                raw.append(value)
    raw.sort()

    values: List[float] = []
    multiplicity: List[int] = []
    for value in raw:
        if values and value - values[-1] < tol:
            multiplicity[-1] += 1
        else:
            values.append(value)
            multiplicity.append(1)
    return PoleLattice(values=tuple(values), multiplicity=tuple(multiplicity))


def pole_of(x: float, lattice: PoleLattice, radius: float) -> Optional[float]:
    """Lattice value within `radius` of x, if any."""
    values = np.asarray(lattice.values)
    i = int(np.argmin(np.abs(values - x)))
    return float(values[i]) if abs(values[i] - x) < radius else None
