"""Adaptive Gauss-Legendre quadrature for smooth integrands.

Orbit integrals are transformed so their inverse-square-root endpoint
singularities cancel analytically; what reaches this module is smooth, so a
modest-order panel rule with interval bisection converges fast.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = ["QuadratureFailureError", "adaptive_gauss", "fixed_gauss"]


class QuadratureFailureError(Exception):
    """Adaptive refinement exhausted its budget before reaching tolerance."""


@lru_cache(maxsize=8)
def _nodes(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def fixed_gauss(f, a: float, b: float, order: int = 32) -> float:
    """Single-panel Gauss-Legendre estimate of the integral of f on [a, b]."""
    x, w = _nodes(order)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * float(np.dot(w, f(mid + half * x)))


def adaptive_gauss(f, a: float, b: float, rel_tol: float = 1e-8,
                   order: int = 32, max_depth: int = 24) -> float:
    """Adaptive bisection Gauss-Legendre integral of a vectorized f on [a, b].

    Convergence is judged panel-wise against whole-integral scale; raises
    QuadratureFailureError when max_depth is exceeded anywhere.
    """
    whole = fixed_gauss(f, a, b, order)
    scale = max(abs(whole), 1e-300)

    def recurse(lo, hi, est, depth):
        mid = 0.5 * (lo + hi)
        left = fixed_gauss(f, lo, mid, order)
        right = fixed_gauss(f, mid, hi, order)
        err = abs(left + right - est)
        if err <= rel_tol * max(scale, abs(left + right)):
            return left + right
        if depth >= max_depth:
            raise QuadratureFailureError(
                f"no convergence on [{lo:.6g}, {hi:.6g}] (err {err:.3g})"
            )
        return (recurse(lo, mid, left, depth + 1)
                + recurse(mid, hi, right, depth + 1))

    return recurse(a, b, whole, 0)
