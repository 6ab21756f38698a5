"""
Special functions for the trap quantization condition.
"""

from .specfun import F_spherical_closed_form, enumerate_poles, eval_F, gamma_fn

__all__ = [
    "F_spherical_closed_form",
    "enumerate_poles",
    "eval_F",
    "gamma_fn"
]
