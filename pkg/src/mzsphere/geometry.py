"""Points, geodesic distance, uniform sampling, and point-set quality on S^q."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .kernels import sphere_area
from .partition import EqualAreaPartition, equal_area_partition
from .rng import NS_SAMPLE, philox_stream

__all__ = [
    "SpherePoint",
    "PointSet",
    "geodesic",
    "sample_uniform",
    "SphereConstants",
    "sphere_constants",
    "MeshNormEstimate",
    "mesh_norm_estimate",
    "CompatiblePair",
    "OccupancyFailure",
    "build_compatible_pair",
]

_SAMPLE_BLOCK = 1 << 16


@dataclass(frozen=True)
class SpherePoint:
    """A unit vector in R^(q+1); renormalized on construction."""

    q: int
    coords: np.ndarray

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=np.float64)
        if coords.shape != (self.q + 1,):
            raise ValueError(
                f"expected {self.q + 1} coordinates for S^{self.q}, got shape {coords.shape}"
            )
        norm = float(np.linalg.norm(coords))
        if norm < 1e-12:
            raise ValueError("cannot normalize a (near-)zero vector onto the sphere")
        object.__setattr__(self, "coords", coords / norm)


def geodesic(x: SpherePoint, y: SpherePoint) -> float:
    """Geodesic distance arccos(x . y) in [0, pi]."""
    if x.q != y.q:
        raise ValueError(f"dimension mismatch: S^{x.q} vs S^{y.q}")
    dot = float(np.dot(x.coords, y.coords))
    return math.acos(min(1.0, max(-1.0, dot)))


@dataclass(frozen=True)
class PointSet:
    """N points on S^q, stored as an (N, q+1) array of unit rows."""

    q: int
    coords: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=np.float64)
        if coords.ndim != 2 or coords.shape[1] != self.q + 1:
            raise ValueError(
                f"expected an (N, {self.q + 1}) coordinate array, got {coords.shape}"
            )
        object.__setattr__(self, "coords", coords)

    def __len__(self) -> int:
        return self.coords.shape[0]

    def point(self, i: int) -> SpherePoint:
        return SpherePoint(self.q, self.coords[i])

    # -- serialization ------------------------------------------------

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for row in self.coords:
                fh.write(",".join(repr(float(v)) for v in row))
                fh.write("\n")

    @classmethod
    def from_csv(cls, path, seed: int | None = None) -> "PointSet":
        coords = np.loadtxt(path, delimiter=",", ndmin=2)
        return cls(q=coords.shape[1] - 1, coords=coords, seed=seed)

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "q": self.q,
            "N": len(self),
            "seed": self.seed,
            "points": [[float(v) for v in row] for row in self.coords],
        }

    def to_json(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(self.to_json_dict(), fh)
            fh.write("\n")

    @classmethod
    def from_json(cls, path) -> "PointSet":
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        return cls(q=data["q"], coords=np.asarray(data["points"]), seed=data.get("seed"))


def sample_uniform(q: int, n_points: int, seed: int) -> PointSet:
    """n_points i.i.d. uniform points on S^q, deterministic for a fixed seed.

    Points are generated in fixed blocks, each from its own Philox
    substream, so the result is reproducible independently of how blocks
    might be distributed over workers.
    """
    if q < 1:
        raise ValueError(f"sphere dimension must be >= 1, got q={q}")
    if n_points < 1:
        raise ValueError(f"need at least one point, got {n_points}")
    coords = np.empty((n_points, q + 1))
    for block, lo in enumerate(range(0, n_points, _SAMPLE_BLOCK)):
        hi = min(lo + _SAMPLE_BLOCK, n_points)
        gen = philox_stream(seed, NS_SAMPLE, block)
        coords[lo:hi] = gen.standard_normal((hi - lo, q + 1))
    norms = np.linalg.norm(coords, axis=1, keepdims=True)
    if np.any(norms < 1e-12):
        raise RuntimeError("degenerate Gaussian draw; cannot normalize")
    return PointSet(q=q, coords=coords / norms, seed=seed)


@dataclass(frozen=True)
class SphereConstants:
    """Dimension-dependent constants used by budgets and preconditions.

    diameter_coeff:     equal-area patch diameters are at most
                        diameter_coeff * M^(-1/q) for an M-patch partition.
    sandwich_const:     constant in the scattered-data sandwich precondition
                        5 * sandwich_const * (n + q^2) * ||Z|| <= eta.
    kernel_deriv_const: constant in the smoothing-kernel derivative
                        integral bound.
    """

    q: int
    diameter_coeff: float
    sandwich_const: float
    kernel_deriv_const: float


def sphere_constants(q: int) -> SphereConstants:
    if q < 2:
        raise ValueError(f"sphere dimension must be >= 2, got q={q}")
    diameter_coeff = 8.0 * (sphere_area(q) * q / sphere_area(q - 1)) ** (1.0 / q)
    sandwich_const = 2.0 * (3.0 + 3.0 ** (q / 2.0) * math.pi)
    kernel_deriv_const = 3.0 ** (q / 2.0) * math.pi + 2.0 * q + 2.0
    return SphereConstants(q, diameter_coeff, sandwich_const, kernel_deriv_const)


@dataclass(frozen=True)
class MeshNormEstimate:
    """Lower estimate of the covering radius plus the probe-spacing uncertainty."""

    value: float
    probe_spacing: float

    @property
    def upper(self) -> float:
        return self.value + self.probe_spacing


def mesh_norm_estimate(points: PointSet, resolution: int = 4096) -> MeshNormEstimate:
    """Covering radius max_x min_y d(x, y) estimated over an equal-area probe grid.

    The reported value is a lower estimate; the true mesh norm exceeds it by
    at most the probe spacing diameter_coeff * resolution^(-1/q).
    """
    if len(points) == 0:
        raise ValueError("mesh norm of an empty point set is undefined")
    if resolution < 1000:
        raise ValueError(f"resolution must be >= 1000 probes, got {resolution}")
    q = points.q
    probes = equal_area_partition(q, resolution).centers()
    worst = 0.0
    for lo in range(0, len(probes), 8192):
        chunk = probes[lo : lo + 8192]
        dots = np.clip(chunk @ points.coords.T, -1.0, 1.0)
        nearest = np.arccos(np.max(dots, axis=1))
        worst = max(worst, float(np.max(nearest)))
    spacing = sphere_constants(q).diameter_coeff * resolution ** (-1.0 / q)
    return MeshNormEstimate(value=worst, probe_spacing=spacing)


@dataclass(frozen=True)
class OccupancyFailure:
    """Outcome value for a point set that leaves some patches empty."""

    patch_count: int
    empty_patches: np.ndarray
    occupancy: np.ndarray

    def __bool__(self) -> bool:  # failures are falsy so callers can branch directly
        return False


@dataclass(frozen=True)
class CompatiblePair:
    """A partition together with exactly one representative point per patch."""

    partition: EqualAreaPartition
    points: PointSet
    assignments: np.ndarray  # patch index of every point
    rep_indices: np.ndarray  # index into points of the first point per patch
    occupancy: np.ndarray  # number of points per patch, all >= 1

    def __bool__(self) -> bool:
        return True

    @property
    def patch_count(self) -> int:
        return self.partition.M

    @property
    def representatives(self) -> np.ndarray:
        return self.points.coords[self.rep_indices]

    @classmethod
    def from_centers(cls, partition: EqualAreaPartition) -> "CompatiblePair":
        """The canonical pair whose representatives are the patch centers."""
        centers = PointSet(q=partition.q, coords=partition.centers())
        idx = np.arange(partition.M, dtype=np.int64)
        return cls(
            partition=partition,
            points=centers,
            assignments=idx,
            rep_indices=idx,
            occupancy=np.ones(partition.M, dtype=np.int64),
        )


def build_compatible_pair(points: PointSet, partition: EqualAreaPartition):
    """Pair the partition with the first-drawn point per patch.

    Returns a CompatiblePair when every patch holds at least one point and
    an OccupancyFailure value (not an exception) otherwise.
    """
    idx = partition.patch_index_many(points.coords)
    occupancy = np.bincount(idx, minlength=partition.M)
    empty = np.flatnonzero(occupancy == 0)
    if empty.size:
        return OccupancyFailure(
            patch_count=partition.M, empty_patches=empty, occupancy=occupancy
        )
    n = len(points)
    firsts = np.empty(partition.M, dtype=np.int64)
    firsts[idx[::-1]] = np.arange(n - 1, -1, -1)
    return CompatiblePair(
        partition=partition,
        points=points,
        assignments=idx,
        rep_indices=firsts,
        occupancy=occupancy,
    )
