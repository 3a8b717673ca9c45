"""Two-sided norm-discretization (sandwich) checkers and weight constructions.

The deterministic checker compares continuous norms against the
partition-weighted discrete norms of a compatible pair; the random-points
experiment draws a budget-sized sample, collects occupancy counts over an
equal-area partition, and checks the sandwich with the occupancy weights
w = 1 / (M m_j), which sum to one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coupon import budget_coupon, coupon_condition_lhs
from .geometry import (
    CompatiblePair,
    OccupancyFailure,
    PointSet,
    build_compatible_pair,
    mesh_norm_estimate,
    sample_uniform,
    sphere_constants,
)
from .partition import equal_area_partition
from .polynomials import evaluate_all, random_polynomial
from .norms import continuous_norms, discrete_norms
from .rng import NS_EXPERIMENT, NS_TRIAL, derive_seed

__all__ = [
    "MzReport",
    "det_mz_check",
    "required_patches_det",
    "MeshWeights",
    "mesh_norm_weights",
    "InfeasibleBudget",
    "random_mz_run",
    "random_mz_experiment",
    "DEFAULT_P_LIST",
]

DEFAULT_P_LIST = (1.0, 2.0, 4.0, math.inf)

#: roundoff cushion when comparing ratios against the sandwich window
_WINDOW_SLACK = 1e-12


@dataclass(frozen=True)
class MzReport:
    """Worst-case distortion of discrete versus continuous norms."""

    q: int
    n: int
    eta: float
    p_values: tuple
    trials: int
    worst_lower: float
    worst_upper: float
    partition_norm: float
    precondition_lhs: float
    precondition_ok: bool
    normalized: bool
    passed: bool
    per_p: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "q": self.q,
            "n": self.n,
            "eta": self.eta,
            "precondition_lhs": self.precondition_lhs,
            "precondition_ok": self.precondition_ok,
            "partition_norm": self.partition_norm,
            "p": [("inf" if p == math.inf else p) for p in self.p_values],
            "worst_lower": self.worst_lower,
            "worst_upper": self.worst_upper,
            "per_p": {
                ("inf" if p == math.inf else repr(float(p))): [lo, hi]
                for p, (lo, hi) in self.per_p.items()
            },
            "trials": self.trials,
            "normalized": self.normalized,
            "pass": self.passed,
        }


def _ratio_report(
    q: int,
    n: int,
    eta: float,
    p_list,
    trials: int,
    seed: int,
    values: np.ndarray,
    weights: np.ndarray | None,
    polys,
    normalized: bool,
    partition_norm: float,
    precondition_lhs: float,
) -> MzReport:
    worst_lower = math.inf
    worst_upper = -math.inf
    per_p = {}
    for p in p_list:
        disc = discrete_norms(values, p, weights)
        cont = continuous_norms(polys, p, normalized=normalized)
        ratios = disc / cont
        lo, hi = float(np.min(ratios)), float(np.max(ratios))
        per_p[p] = (lo, hi)
        worst_lower = min(worst_lower, lo)
        worst_upper = max(worst_upper, hi)
    passed = (
        worst_lower >= (1.0 - eta) - _WINDOW_SLACK
        and worst_upper <= (1.0 + eta) + _WINDOW_SLACK
    )
    return MzReport(
        q=q,
        n=n,
        eta=eta,
        p_values=tuple(p_list),
        trials=trials,
        worst_lower=worst_lower,
        worst_upper=worst_upper,
        partition_norm=partition_norm,
        precondition_lhs=precondition_lhs,
        precondition_ok=precondition_lhs <= eta,
        normalized=normalized,
        passed=passed,
        per_p=per_p,
    )


def det_mz_check(
    pair: CompatiblePair,
    n: int,
    eta: float,
    p_list=DEFAULT_P_LIST,
    trials: int = 50,
    seed: int = 0,
) -> MzReport:
    """Check (1-eta) ||P|| <= patch-area weighted discrete norm <= (1+eta) ||P||.

    Norms are against the unnormalized measure; weights are the patch areas
    of the representatives' patches.  When the geometric precondition
    5 C_q (n + q^2) ||Z|| <= eta fails, the check still runs and the report
    flags it.
    """
    if not 0.0 < eta < 1.0:
        raise ValueError(f"eta must be in (0, 1), got {eta}")
    partition = pair.partition
    q = partition.q
    pnorm = partition.max_diameter_bound()
    lhs = 5.0 * sphere_constants(q).sandwich_const * (n + q * q) * pnorm
    polys = [
        random_polynomial(q, n, derive_seed(seed, NS_TRIAL, t)) for t in range(trials)
    ]
    values = evaluate_all(polys, pair.representatives)
    weights = np.full(partition.M, partition.area_each)
    return _ratio_report(
        q, n, eta, p_list, trials, seed, values, weights, polys,
        normalized=False, partition_norm=pnorm, precondition_lhs=lhs,
    )


def required_patches_det(q: int, n: int, eta: float) -> int:
    """Patch count that certifies the sandwich precondition via the diameter law.

    Uses the equal-area diameter bound coeff * M^(-1/q); the returned M can
    be astronomically large, in which case construction is not attempted by
    the callers (infeasible at desk scale).
    """
    consts = sphere_constants(q)
    needed = 5.0 * consts.sandwich_const * (n + q * q) * consts.diameter_coeff / eta
    return int(math.ceil(needed**q))


@dataclass(frozen=True)
class MeshWeights:
    """Nonnegative quadrature-style weights built from a point set alone."""

    weights: np.ndarray
    mesh_norm_value: float
    mesh_norm_upper: float
    precondition_lhs: float
    precondition_ok: bool


def mesh_norm_weights(
    points: PointSet,
    n: int,
    eta: float,
    probe_resolution: int = 4096,
) -> MeshWeights:
    """Weights a_xi from a nearest-point cell assignment over a fine probe grid.

    Every probe cell of an equal-area probe partition contributes its area
    to the nearest point (ties to the lower point index), so the weights
    sum to the sphere area and duplicated points receive weight zero.  The
    mesh-norm precondition 40 C_q q sqrt(2q(q+1)) (n + q^2) delta <= eta is
    evaluated with the upper mesh-norm estimate and flagged.
    """
    if len(points) == 0:
        raise ValueError("cannot build weights for an empty point set")
    q = points.q
    est = mesh_norm_estimate(points, resolution=probe_resolution)
    consts = sphere_constants(q)
    lhs = (
        40.0
        * consts.sandwich_const
        * q
        * math.sqrt(2.0 * q * (q + 1.0))
        * (n + q * q)
        * est.upper
    )
    probes = equal_area_partition(q, probe_resolution)
    centers = probes.centers()
    owner = np.empty(len(centers), dtype=np.int64)
    for lo in range(0, len(centers), 8192):
        dots = centers[lo : lo + 8192] @ points.coords.T
        owner[lo : lo + 8192] = np.argmax(dots, axis=1)  # first max: lower index
    weights = np.bincount(owner, minlength=len(points)).astype(np.float64)
    weights *= probes.area_each
    return MeshWeights(
        weights=weights,
        mesh_norm_value=est.value,
        mesh_norm_upper=est.upper,
        precondition_lhs=lhs,
        precondition_ok=lhs <= eta,
    )


@dataclass(frozen=True)
class InfeasibleBudget:
    """Signal that the theorem-mandated sizes exceed what can be constructed."""

    q: int
    n: int
    eta: float
    eps: float
    n_required: int
    m_required: int
    cap: int

    def __bool__(self) -> bool:
        return False


def occupancy_weights(patch_count: int, occupancy: np.ndarray, assignments: np.ndarray) -> np.ndarray:
    """Per-point weights w_j = 1 / (M m_j); they sum to exactly one."""
    return 1.0 / (patch_count * occupancy[assignments].astype(np.float64))


def random_mz_run(
    points: PointSet,
    partition,
    n: int,
    eta: float,
    p_list=DEFAULT_P_LIST,
    trials: int = 50,
    seed: int = 0,
):
    """Occupancy-weighted sandwich check for a concrete sample and partition.

    Returns an OccupancyFailure value when some patch holds no point;
    otherwise an MzReport against the normalized-measure norms.
    """
    pair = build_compatible_pair(points, partition)
    if isinstance(pair, OccupancyFailure):
        return pair
    weights = occupancy_weights(partition.M, pair.occupancy, pair.assignments)
    total = float(np.sum(weights))
    if abs(total - 1.0) > 1e-12:
        raise RuntimeError(f"occupancy weights sum to {total}, expected 1")
    q = partition.q
    pnorm = partition.max_diameter_bound()
    lhs = 5.0 * sphere_constants(q).sandwich_const * (n + q * q) * pnorm
    polys = [
        random_polynomial(q, n, derive_seed(seed, NS_TRIAL, t)) for t in range(trials)
    ]
    values = evaluate_all(polys, points.coords)
    return _ratio_report(
        q, n, eta, p_list, trials, seed, values, weights, polys,
        normalized=True, partition_norm=pnorm, precondition_lhs=lhs,
    )


def random_mz_experiment(
    n: int,
    q: int,
    eta: float,
    eps: float,
    p_list=DEFAULT_P_LIST,
    trials: int = 50,
    seed: int = 0,
    m_cap: int = 10**7,
):
    """End-to-end random-points sandwich experiment at the theorem budget.

    N comes from the sample-budget solver and M = floor(N / log(N/eps)).
    When M exceeds m_cap the experiment is not attempted and an
    InfeasibleBudget value is returned with the required sizes.
    """
    n_points = budget_coupon(n, q, eta, eps)
    m_patches = int(math.floor(n_points / math.log(n_points / eps)))
    if m_patches > m_cap or m_patches < 2:
        return InfeasibleBudget(
            q=q, n=n, eta=eta, eps=eps,
            n_required=n_points, m_required=m_patches, cap=m_cap,
        )
    partition = equal_area_partition(q, m_patches)
    points = sample_uniform(q, n_points, derive_seed(seed, NS_EXPERIMENT))
    return random_mz_run(points, partition, n, eta, p_list=p_list, trials=trials, seed=seed)
