"""Coupon-collector bounds, budgets, and occupancy simulation.

The failure bound M (1 - 1/M)^t controls the probability that t uniform
draws from M types miss at least one type; the budget t > M log(M / eps)
pushes it below eps.  The sample budget for the all-p random sandwich
inverts the patch-count requirement of the scattered-data theorem against
the number of patches affordable after coupon collection.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import sphere_constants
from .rng import NS_COUPON, philox_stream

__all__ = [
    "coupon_failure_bound",
    "coupon_budget",
    "coupon_simulate",
    "budget_coupon",
    "coupon_condition_lhs",
]


def coupon_failure_bound(m: int, t: int) -> float:
    """Upper bound M (1 - 1/M)^t for the probability of missing some type."""
    if m < 1:
        raise ValueError(f"number of types must be >= 1, got {m}")
    if t < 0:
        raise ValueError(f"number of draws must be >= 0, got {t}")
    if m == 1:
        return 0.0
    return m * (1.0 - 1.0 / m) ** t


def coupon_budget(m: int, eps: float) -> int:
    """Minimal integer t with t > M log(M / eps)."""
    if m < 1:
        raise ValueError(f"number of types must be >= 1, got {m}")
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must be in (0, 1), got {eps}")
    return int(math.floor(m * math.log(m / eps))) + 1


def coupon_simulate(m: int, t: int, reps: int, seed: int) -> float:
    """Empirical probability that t uniform draws from {1..M} miss some type."""
    if reps < 1:
        raise ValueError(f"need at least one repetition, got {reps}")
    if m < 1 or t < 1:
        raise ValueError("need m >= 1 types and t >= 1 draws")
    block = max(1, (1 << 21) // t)
    failures = 0
    done = 0
    block_id = 0
    while done < reps:
        count = min(block, reps - done)
        gen = philox_stream(seed, NS_COUPON, block_id)
        draws = gen.integers(0, m, size=(count, t))
        flat = draws + (np.arange(count)[:, None] * m)
        occupancy = np.bincount(flat.ravel(), minlength=count * m).reshape(count, m)
        failures += int(np.sum(np.any(occupancy == 0, axis=1)))
        done += count
        block_id += 1
    return failures / reps


def coupon_condition_lhs(n: int, q: int, eps: float, n_points: int) -> float:
    """Left side 5 C_q alpha_q (N / (2 log(N/eps)))^(-1/q) (n + q^2) of the budget rule."""
    consts = sphere_constants(q)
    patches = n_points / (2.0 * math.log(n_points / eps))
    return (
        5.0
        * consts.sandwich_const
        * consts.diameter_coeff
        * patches ** (-1.0 / q)
        * (n + q * q)
    )


def budget_coupon(n: int, q: int, eta: float, eps: float) -> int:
    """Minimal N >= 3 satisfying the all-p random sandwich sample condition.

    The condition's left side is strictly decreasing in N for N >= 3, so
    the minimum is located by doubling followed by bisection and verified
    by direct substitution.
    """
    if not 0.0 < eta < 1.0:
        raise ValueError(f"eta must be in (0, 1), got {eta}")
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must be in (0, 1), got {eps}")
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")

    def satisfied(n_points: int) -> bool:
        return coupon_condition_lhs(n, q, eps, n_points) < eta

    if satisfied(3):
        return 3
    hi = 6
    while not satisfied(hi):
        hi *= 2
        if hi > 1 << 200:
            raise RuntimeError("budget search failed to terminate")
    lo = hi // 2  # f(lo) >= eta, f(hi) < eta
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if satisfied(mid):
            hi = mid
        else:
            lo = mid
    assert satisfied(hi) and not satisfied(hi - 1)
    return hi
