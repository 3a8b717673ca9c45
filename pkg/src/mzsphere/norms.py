"""Continuous and discretized L_p norms of spherical polynomials.

Continuous norms are integrals against the surface measure mu_q; the
normalized flag divides by the total mass, giving the probability-measure
version.  Even integer p uses product quadrature that is exact for the
integrand; other finite p refines the rule by node doubling until the
value stabilizes; p = inf takes the maximum over a densified node grid
(Chebyshev-dense along the colatitude).
"""

from __future__ import annotations

import math

import numpy as np

from .kernels import sphere_area
from .polynomials import SpherePolynomial, evaluate_all
from .quadrature import QuadratureRule, quadrature_rule

__all__ = ["continuous_norm", "continuous_norms", "discrete_norm", "discrete_norms"]

_REFINE_STOP = 1e-8
_REFINE_CAP = 2048  # exactness-degree cap for the node-doubling fallback
_CHUNK = 1 << 16


def _is_even_int(p) -> bool:
    return float(p).is_integer() and int(p) % 2 == 0 and p >= 2


def _integrals_abs_p(polys, rule: QuadratureRule, p: float) -> np.ndarray:
    """integral |P|^p d mu_q for each polynomial, chunked over rule nodes."""
    total = np.zeros(len(polys))
    for lo in range(0, len(rule), _CHUNK):
        vals = evaluate_all(polys, rule.nodes[lo : lo + _CHUNK])
        total += rule.weights[lo : lo + _CHUNK] @ np.abs(vals) ** p
    return total


def _sup_norms(polys, q: int, degree: int) -> np.ndarray:
    grid = quadrature_rule(q, 4 * max(2 * degree, 16))
    best = np.zeros(len(polys))
    for lo in range(0, len(grid), _CHUNK):
        vals = evaluate_all(polys, grid.nodes[lo : lo + _CHUNK])
        best = np.maximum(best, np.max(np.abs(vals), axis=0))
    return best


def continuous_norms(
    polys: list[SpherePolynomial],
    p,
    rule: QuadratureRule | None = None,
    normalized: bool = False,
) -> np.ndarray:
    """Continuous L_p norms of a batch of polynomials of a common dimension q."""
    if p != math.inf and p < 1:
        raise ValueError(f"p must be in [1, inf], got {p}")
    q = polys[0].q
    degree = max(poly.degree for poly in polys)
    if p == math.inf:
        return _sup_norms(polys, q, degree)  # normalization does not change a sup
    if _is_even_int(p):
        needed = degree * int(p)
        if rule is None or rule.degree < needed:
            rule = quadrature_rule(q, needed)
        integrals = _integrals_abs_p(polys, rule, float(p))
    else:
        exactness = max(rule.degree if rule is not None else 0, 2 * degree, 8)
        rule = quadrature_rule(q, exactness)
        integrals = _integrals_abs_p(polys, rule, float(p))
        while exactness < _REFINE_CAP:
            exactness *= 2
            rule = quadrature_rule(q, exactness)
            refined = _integrals_abs_p(polys, rule, float(p))
            done = np.all(
                np.abs(refined - integrals) <= _REFINE_STOP * np.maximum(refined, 1e-300)
            )
            integrals = refined
            if done:
                break
    if normalized:
        integrals = integrals / sphere_area(q)
    return integrals ** (1.0 / float(p))


def continuous_norm(
    poly: SpherePolynomial,
    p,
    rule: QuadratureRule | None = None,
    normalized: bool = False,
) -> float:
    """Continuous L_p norm of a single polynomial (see continuous_norms)."""
    return float(continuous_norms([poly], p, rule=rule, normalized=normalized)[0])


def discrete_norms(values: np.ndarray, p, weights: np.ndarray | None) -> np.ndarray:
    """Weighted discrete p-norms of the columns of a (points, polys) value matrix."""
    values = np.atleast_2d(values)
    if p == math.inf:
        return np.max(np.abs(values), axis=0)  # weights are irrelevant at p = inf
    if p < 1:
        raise ValueError(f"p must be in [1, inf], got {p}")
    if weights is None:
        raise ValueError("finite-p discrete norms need weights")
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (values.shape[0],):
        raise ValueError(
            f"weights length {weights.shape} does not match {values.shape[0]} points"
        )
    if np.any(weights < 0.0):
        raise ValueError("weights must be nonnegative")
    return (weights @ np.abs(values) ** float(p)) ** (1.0 / float(p))


def discrete_norm(poly: SpherePolynomial, p, points, weights) -> float:
    """Weighted discrete p-norm (sum_j w_j |P(xi_j)|^p)^(1/p); max at p = inf."""
    values = poly.eval(points.coords)[:, None]
    w = None if weights is None else np.asarray(weights, dtype=np.float64)
    return float(discrete_norms(values, p, w)[0])
