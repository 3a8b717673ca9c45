"""Product quadrature on S^q, exact for spherical polynomials up to a degree.

The measure factorizes as d mu_q = (1 - t^2)^(q/2 - 1) dt d mu_{q-1} with
t the cosine of the colatitude.  A Gauss rule for that weight in t,
composed with a recursively built rule on the cross-section sphere (equal
angles on the circle), integrates every polynomial of ambient degree at
most D exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_gegenbauer

from .kernels import sphere_area

__all__ = ["QuadratureRule", "gauss_weight_rule", "quadrature_rule"]


@dataclass(frozen=True)
class QuadratureRule:
    """Positive-weight nodes on S^q whose weights sum to omega_q."""

    q: int
    degree: int  # polynomial exactness
    nodes: np.ndarray  # (K, q+1)
    weights: np.ndarray  # (K,)

    def __len__(self) -> int:
        return self.nodes.shape[0]

    def integrate(self, values: np.ndarray) -> float:
        """Integral against mu_q of a function given by its node values."""
        return float(self.weights @ values)


def gauss_weight_rule(q: int, degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss rule on [-1, 1] for the weight (1 - t^2)^(q/2 - 1), exact to `degree`."""
    if q < 2:
        raise ValueError(f"sphere dimension must be >= 2, got q={q}")
    if degree < 0:
        raise ValueError(f"exactness degree must be >= 0, got {degree}")
    m = degree // 2 + 1
    # Gegenbauer weight (1-t^2)^(alpha - 1/2) with alpha = (q-1)/2
    t, w = roots_gegenbauer(m, (q - 1) / 2.0)
    return t, w


def quadrature_rule(q: int, degree: int) -> QuadratureRule:
    """Product rule on S^q exact for spherical polynomials of degree <= `degree`."""
    if q > 4:
        raise ValueError(f"quadrature rules are implemented for q <= 4, got q={q}")
    if q < 1:
        raise ValueError(f"sphere dimension must be >= 1, got q={q}")
    if degree < 0:
        raise ValueError(f"exactness degree must be >= 0, got {degree}")
    if q == 1:
        count = degree + 1
        phi = 2.0 * math.pi * np.arange(count) / count
        nodes = np.column_stack([np.cos(phi), np.sin(phi)])
        weights = np.full(count, 2.0 * math.pi / count)
        return QuadratureRule(q=1, degree=degree, nodes=nodes, weights=weights)

    t, wt = gauss_weight_rule(q, degree)
    sub = quadrature_rule(q - 1, degree)
    s = np.sqrt(np.clip(1.0 - t * t, 0.0, None))
    k_sub = len(sub)
    nodes = np.empty((t.size * k_sub, q + 1))
    nodes[:, :-1] = np.repeat(s, k_sub)[:, None] * np.tile(sub.nodes, (t.size, 1))
    nodes[:, -1] = np.repeat(t, k_sub)
    weights = np.repeat(wt, k_sub) * np.tile(sub.weights, t.size)
    return QuadratureRule(q=q, degree=degree, nodes=nodes, weights=weights)
