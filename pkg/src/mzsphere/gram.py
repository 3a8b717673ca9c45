"""Sampling Gram matrices, their extremal eigenvalues, and sample budgets.

For N points and the degree-n polynomial space of dimension d, the scaled
Gram matrix (1/N) L L* is computed basis-free through the zonal trace
kernel; its nonzero spectrum coincides with that of (1/N) L* L, whose
extremal eigenvalues are the sharp constants of the squared-norm sandwich.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np
from scipy.linalg.blas import dsyrk

from .geometry import PointSet
from .kernels import poly_space_dim, zonal_kernel_sum
from .rng import NS_EIG, philox_stream
from .sphharm import basis_size, sph_harm_basis

__all__ = [
    "addition_kernel",
    "GramMatrix",
    "gram_matrix",
    "ExtremalEigs",
    "extremal_eigs",
    "explicit_basis_matrix_q2",
    "budget_tropp",
    "budget_even_p",
    "EigStats",
    "eig_experiment",
]

_BASIS_BLOCK = 8192


def addition_kernel(q: int, n: int, u):
    """sum_{l=0}^{n} h_q(l) R_l(u): the zonal form of sum_k e_k(x) e_k(y).

    Here (e_k) is any orthonormal basis of the degree-n space under the
    normalized measure; at u = 1 the value is the space dimension d_q(n).
    """
    return zonal_kernel_sum(q, n, u)


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric (1/N)-scaled Gram matrix of point evaluations."""

    q: int
    n: int
    point_count: int
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return poly_space_dim(self.q, self.n)


def gram_matrix(points: PointSet, n: int) -> GramMatrix:
    """Gram matrix G_ij = (1/N) sum_l h_q(l) R_l(xi_i . xi_j) without a basis."""
    coords = points.coords
    npts = len(points)
    dots = np.clip(coords @ coords.T, -1.0, 1.0)
    np.fill_diagonal(dots, 1.0)  # unit rows: diagonal is exactly 1
    mat = addition_kernel(points.q, n, dots) / npts
    return GramMatrix(q=points.q, n=n, point_count=npts, matrix=mat)


class ExtremalEigs(NamedTuple):
    lambda_min: float
    lambda_max: float
    rank_deficient: bool


def extremal_eigs(gram: GramMatrix, d: int | None = None) -> ExtremalEigs:
    """Extremal eigenvalues of (1/N) L* L from the point-side Gram matrix.

    The d-th largest eigenvalue of (1/N) L L* is the smallest eigenvalue of
    (1/N) L* L; when N < d the latter is singular and reported as 0 with
    the rank_deficient flag set.
    """
    if d is None:
        d = gram.dim
    w = np.linalg.eigvalsh(gram.matrix)
    lam_max = float(w[-1])
    if gram.point_count < d:
        return ExtremalEigs(0.0, lam_max, True)
    return ExtremalEigs(float(w[gram.point_count - d]), lam_max, False)


def explicit_basis_matrix_q2(points: PointSet, n: int) -> np.ndarray:
    """Matrix L_jk = e_k(xi_j) of the real harmonic basis; cross-check oracle."""
    if points.q != 2:
        raise ValueError(f"explicit basis is implemented for q=2 only, got q={points.q}")
    return sph_harm_basis(n, points.coords)


def budget_tropp(n: int, q: int, eta: float, eps: float) -> int:
    """Minimal N with N > log(2 d_q(n) / eps) * 3 d_q(n) / eta^2."""
    if not 0.0 < eta < 1.0:
        raise ValueError(f"eta must be in (0, 1), got {eta}")
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must be in (0, 1), got {eps}")
    d = poly_space_dim(q, n)
    x = math.log(2.0 * d / eps) * 3.0 * d / (eta * eta)
    return int(math.floor(x)) + 1


def budget_even_p(n: int, q: int, p: int, eta: float, eps: float) -> int:
    """Budget for the p-th power sandwich with even p, via the degree n*p/2 space."""
    if p < 2 or p % 2 != 0:
        raise ValueError(f"p must be an even integer >= 2, got {p}")
    return budget_tropp(n * p // 2, q, eta, eps)


@dataclass(frozen=True)
class EigStats:
    """Per-repetition extremal eigenvalues with mean and 1%/99% quantiles."""

    n: int
    q: int
    point_count: int
    lambda_min: np.ndarray
    lambda_max: np.ndarray

    def __post_init__(self):
        lmin = np.asarray(self.lambda_min, dtype=np.float64)
        lmax = np.asarray(self.lambda_max, dtype=np.float64)
        if np.any(lmin > lmax):
            raise ValueError("lambda_min exceeds lambda_max in some repetition")
        if np.any(lmin < -1e-8):
            raise ValueError("Gram matrices must be positive semidefinite")
        object.__setattr__(self, "lambda_min", np.maximum(lmin, 0.0))
        object.__setattr__(self, "lambda_max", lmax)

    @property
    def reps(self) -> int:
        return len(self.lambda_min)

    def summary(self) -> dict:
        """Row in the eigenvalue table schema (n, lMin1, lMinM, lMin99, lMax1, lMaxM, lMax99)."""
        q01_min, q99_min = np.quantile(self.lambda_min, [0.01, 0.99])
        q01_max, q99_max = np.quantile(self.lambda_max, [0.01, 0.99])
        return {
            "n": self.n,
            "lMin1": float(q01_min),
            "lMinM": float(np.mean(self.lambda_min)),
            "lMin99": float(q99_min),
            "lMax1": float(q01_max),
            "lMaxM": float(np.mean(self.lambda_max)),
            "lMax99": float(q99_max),
        }


def _rep_points(q: int, n_points: int, seed: int, rep: int) -> np.ndarray:
    gen = philox_stream(seed, NS_EIG, rep)
    coords = gen.standard_normal((n_points, q + 1))
    coords /= np.linalg.norm(coords, axis=1, keepdims=True)
    return coords


def _explicit_extremes_q2(coords: np.ndarray, n: int) -> tuple[float, float]:
    """lambda_min/max of (1/N) L* L via blocked L* L accumulation (d x d)."""
    npts = coords.shape[0]
    d = basis_size(n)
    gram = np.zeros((d, d), order="F")
    for lo in range(0, npts, _BASIS_BLOCK):
        block = sph_harm_basis(n, coords[lo : lo + _BASIS_BLOCK])
        # C-ordered (B, d) viewed as Fortran (d, B): dsyrk accumulates B^T B
        gram = dsyrk(1.0, block.T, beta=1.0, c=gram, trans=0, lower=1, overwrite_c=1)
    w = np.linalg.eigvalsh(gram / npts, UPLO="L")
    return float(w[0]), float(w[-1])


def eig_experiment(
    n: int,
    q: int,
    eta: float,
    eps: float,
    reps: int,
    seed: int,
    threads: int = 1,
) -> EigStats:
    """Repeatedly draw budget-sized point sets and record extremal eigenvalues.

    Each repetition has its own substream, so results do not depend on the
    thread count.  For q = 2 the d x d explicit-basis path is used; other q
    fall back to the N x N zonal Gram matrix.
    """
    if reps < 1:
        raise ValueError(f"need at least one repetition, got {reps}")
    n_points = budget_tropp(n, q, eta, eps)
    d = poly_space_dim(q, n)

    def one_rep(rep: int) -> tuple[float, float]:
        coords = _rep_points(q, n_points, seed, rep)
        if q == 2 and n_points >= d:
            return _explicit_extremes_q2(coords, n)
        pts = PointSet(q=q, coords=coords)
        res = extremal_eigs(gram_matrix(pts, n), d)
        return res.lambda_min, res.lambda_max

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one_rep, range(reps)))
    else:
        results = [one_rep(r) for r in range(reps)]
    lmin = np.array([r[0] for r in results])
    lmax = np.array([r[1] for r in results])
    return EigStats(n=n, q=q, point_count=n_points, lambda_min=lmin, lambda_max=lmax)
