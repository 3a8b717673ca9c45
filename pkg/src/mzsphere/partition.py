"""Recursive zonal equal-area partitions of S^q with certified diameter bounds.

The construction follows the classical cap-collars-cap layout: two polar
caps whose area equals the target patch area, collars of near-equal
colatitude extent in between, and per-collar patch counts obtained by
rounding ideal real-valued counts while conserving the total.  Collar
cross-sections are partitioned recursively on S^(q-1), terminating in equal
arcs on the circle.

Patch areas are exact by construction (collar boundaries are recomputed
from cumulative patch counts through the inverse cap-area function).  Each
patch carries a certified upper bound on its geodesic diameter, obtained
from explicit paths along meridians and parallels; the bound never
undershoots the true diameter.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import betainc, betaincinv

from .kernels import sphere_area

__all__ = [
    "cap_area",
    "cap_colatitude",
    "CirclePartition",
    "EqualAreaPartition",
    "equal_area_partition",
    "partition_norm_bound",
]

_HALF_PI = math.pi / 2.0


def cap_area(q: int, theta: float) -> float:
    """Area of the polar cap {x : colatitude(x) <= theta} on S^q."""
    if q < 1:
        raise ValueError(f"sphere dimension must be >= 1, got q={q}")
    if theta <= 0.0:
        return 0.0
    if theta >= math.pi:
        return sphere_area(q)
    if theta > _HALF_PI:
        return sphere_area(q) - cap_area(q, math.pi - theta)
    s = math.sin(theta)
    return 0.5 * sphere_area(q) * float(betainc(q / 2.0, 0.5, s * s))


def cap_colatitude(q: int, area: float) -> float:
    """Inverse of cap_area: colatitude of the cap with the given area."""
    total = sphere_area(q)
    if not 0.0 <= area <= total * (1.0 + 1e-12):
        raise ValueError(f"cap area {area} outside [0, omega_q={total}]")
    area = min(area, total)
    if area > total / 2.0:
        return math.pi - cap_colatitude(q, total - area)
    s2 = float(betaincinv(q / 2.0, 0.5, 2.0 * area / total))
    return math.asin(math.sqrt(min(max(s2, 0.0), 1.0)))


class CirclePartition:
    """M equal arcs of the circle S^1; the base case of the recursion.

    Arc j covers [j*h, (j+1)*h] with h = 2 pi / M, boundaries inclusive and
    ties resolved to the lower index.
    """

    q = 1

    def __init__(self, patch_count: int):
        if patch_count < 1:
            raise ValueError(f"patch count must be >= 1, got {patch_count}")
        self.M = patch_count
        self.arc = 2.0 * math.pi / patch_count

    def patch_index_many(self, coords: np.ndarray) -> np.ndarray:
        phi = np.mod(np.arctan2(coords[:, 1], coords[:, 0]), 2.0 * math.pi)
        idx = np.minimum((phi / self.arc).astype(np.int64), self.M - 1)
        # a point exactly on a boundary belongs to the lower-indexed arc
        tie = (phi == idx * self.arc) & (idx > 0)
        idx[tie] -= 1
        return idx

    def patch_bands(self, j: int) -> list[tuple[float, float]]:
        return [(j * self.arc, (j + 1) * self.arc)]

    def patch_area(self, j: int) -> float:
        return self.arc

    def patch_areas(self) -> np.ndarray:
        return np.full(self.M, self.arc)

    def diameter_bounds(self) -> np.ndarray:
        return np.full(self.M, min(self.arc, math.pi))

    def max_diameter_bound(self) -> float:
        return min(self.arc, math.pi)

    def centers(self) -> np.ndarray:
        mid = (np.arange(self.M) + 0.5) * self.arc
        return np.column_stack([np.cos(mid), np.sin(mid)])


def _round_collar_counts(ideal: list[float], total: int) -> list[int]:
    """Round ideal per-collar counts to integers that sum exactly to total."""
    counts: list[int] = []
    discrepancy = 0.0
    for i, y in enumerate(ideal):
        if i == len(ideal) - 1:
            m = total - sum(counts)
        else:
            m = max(1, int(math.floor(y + discrepancy + 0.5)))
        discrepancy += y - m
        counts.append(m)
    if counts[-1] < 1:
        raise RuntimeError(
            f"collar rounding produced an empty collar for counts {ideal}"
        )
    return counts


def _collar_diameter_bound(lo: float, hi: float, sub_bound) -> np.ndarray:
    """Certified diameter bound for cells [lo, hi] x C with diam(C) <= sub_bound.

    Each candidate is the length of an explicit path (meridian segments plus
    a parallel arc, or a route through the nearest pole), so the minimum is
    still an upper bound for the true geodesic diameter.
    """
    sub = np.asarray(sub_bound, dtype=np.float64)
    dth = hi - lo
    s_lo, s_hi = math.sin(lo), math.sin(hi)
    s_max = 1.0 if lo <= _HALF_PI <= hi else max(s_lo, s_hi)
    s_min = min(s_lo, s_hi)
    cands = [
        np.full_like(sub, math.pi),
        dth + s_max * sub,
        2.0 * dth + s_min * sub,
    ]
    if hi <= _HALF_PI:
        cands.append(np.full_like(sub, 2.0 * hi))
    if lo >= _HALF_PI:
        cands.append(np.full_like(sub, 2.0 * (math.pi - lo)))
    return np.minimum.reduce(cands)


class EqualAreaPartition:
    """Zonal equal-area partition of S^q into M patches of area omega_q / M.

    Zones are ordered north cap, collars by increasing colatitude, south
    cap; within a collar, patches follow the recursive sub-partition order.
    Patch membership is a total function with boundary ties resolved to the
    lower patch index.
    """

    def __init__(self, q: int, patch_count: int):
        if q < 2:
            raise ValueError(f"sphere dimension must be >= 2, got q={q}")
        if patch_count < 1:
            raise ValueError(f"patch count must be >= 1, got {patch_count}")
        self.q = q
        self.M = patch_count
        self.area_each = sphere_area(q) / patch_count
        self._build()

    # -- construction -------------------------------------------------

    def _build(self) -> None:
        q, M = self.q, self.M
        volume = self.area_each
        if M == 1:
            zone_hi = [math.pi]
            subs: list = [None]
        elif M == 2:
            zone_hi = [_HALF_PI, math.pi]
            subs = [None, None]
        else:
            theta_c = cap_colatitude(q, volume)
            delta_ideal = volume ** (1.0 / q)
            n_collars = max(
                1, int(math.floor((math.pi - 2.0 * theta_c) / delta_ideal + 0.5))
            )
            delta_fit = (math.pi - 2.0 * theta_c) / n_collars
            fit_bounds = [theta_c + i * delta_fit for i in range(n_collars + 1)]
            ideal = [
                (cap_area(q, fit_bounds[i + 1]) - cap_area(q, fit_bounds[i])) / volume
                for i in range(n_collars)
            ]
            counts = _round_collar_counts(ideal, M - 2)
            # recompute boundaries so every collar holds exactly counts[i] patches
            cumulative = np.cumsum([1] + counts)
            zone_hi = [cap_colatitude(q, c * volume) for c in cumulative]
            zone_hi.append(math.pi)
            if q - 1 == 1:
                subs = [None] + [CirclePartition(m) for m in counts] + [None]
            else:
                subs = [None] + [EqualAreaPartition(q - 1, m) for m in counts] + [None]
        self._zone_hi = np.asarray(zone_hi)
        self._zone_lo = np.concatenate([[0.0], self._zone_hi[:-1]])
        self._subs = subs
        counts_per_zone = [1 if s is None else s.M for s in subs]
        self._zone_counts = np.asarray(counts_per_zone, dtype=np.int64)
        self._zone_offsets = np.concatenate(
            [[0], np.cumsum(self._zone_counts)]
        ).astype(np.int64)
        assert self._zone_offsets[-1] == M

    # -- lookup --------------------------------------------------------

    def _locate(self, j: int) -> tuple[int, int]:
        if not 0 <= j < self.M:
            raise IndexError(f"patch index {j} out of range 0..{self.M - 1}")
        z = int(np.searchsorted(self._zone_offsets[1:], j, side="right"))
        return z, j - int(self._zone_offsets[z])

    def patch_index_many(self, coords: np.ndarray) -> np.ndarray:
        """Patch index for each row of coords; boundary ties go to the lower index."""
        coords = np.asarray(coords, dtype=np.float64)
        theta = np.arccos(np.clip(coords[:, -1], -1.0, 1.0))
        zone = np.searchsorted(self._zone_hi, theta, side="left")
        zone = np.minimum(zone, len(self._zone_hi) - 1)
        out = np.empty(len(coords), dtype=np.int64)
        for z in np.unique(zone):
            mask = zone == z
            sub = self._subs[z]
            if sub is None:
                out[mask] = self._zone_offsets[z]
            else:
                cross = coords[mask, :-1]
                norms = np.linalg.norm(cross, axis=1, keepdims=True)
                cross = cross / norms
                out[mask] = self._zone_offsets[z] + sub.patch_index_many(cross)
        return out

    def patch_index(self, x) -> int:
        """Patch index of a single point (coords array or SpherePoint)."""
        coords = np.asarray(getattr(x, "coords", x), dtype=np.float64)
        return int(self.patch_index_many(coords[None, :])[0])

    # -- geometry ------------------------------------------------------

    def patch_bands(self, j: int) -> list[tuple[float, float]]:
        """Inclusive colatitude bands of patch j, one per recursion level."""
        z, local = self._locate(j)
        band = (float(self._zone_lo[z]), float(self._zone_hi[z]))
        sub = self._subs[z]
        if sub is None:
            return [band]
        return [band] + sub.patch_bands(local)

    def patch_area(self, j: int) -> float:
        """Closed-form patch area from the stored colatitude bands."""
        z, local = self._locate(j)
        lo, hi = float(self._zone_lo[z]), float(self._zone_hi[z])
        band = cap_area(self.q, hi) - cap_area(self.q, lo)
        sub = self._subs[z]
        if sub is None:
            return band
        return band / sphere_area(self.q - 1) * sub.patch_area(local)

    def patch_areas(self) -> np.ndarray:
        return np.array([self.patch_area(j) for j in range(self.M)])

    def diameter_bounds(self) -> np.ndarray:
        """Certified geodesic diameter bound per patch, in patch order."""
        parts = []
        for z, sub in enumerate(self._subs):
            lo, hi = float(self._zone_lo[z]), float(self._zone_hi[z])
            if sub is None:
                if lo == 0.0:
                    bound = min(2.0 * hi, math.pi)
                else:
                    bound = min(2.0 * (math.pi - lo), math.pi)
                parts.append(np.array([bound]))
            else:
                parts.append(_collar_diameter_bound(lo, hi, sub.diameter_bounds()))
        return np.concatenate(parts)

    def max_diameter_bound(self) -> float:
        return float(np.max(self.diameter_bounds()))

    def centers(self) -> np.ndarray:
        """One interior representative point per patch (patch order)."""
        q = self.q
        blocks = []
        for z, sub in enumerate(self._subs):
            lo, hi = float(self._zone_lo[z]), float(self._zone_hi[z])
            if sub is None:
                pole = np.zeros((1, q + 1))
                pole[0, -1] = 1.0 if lo == 0.0 else -1.0
                blocks.append(pole)
            else:
                mid = 0.5 * (lo + hi)
                sub_centers = sub.centers()
                block = np.empty((sub.M, q + 1))
                block[:, :-1] = math.sin(mid) * sub_centers
                block[:, -1] = math.cos(mid)
                blocks.append(block)
        return np.vstack(blocks)

    def to_json_dict(self, include_patches: bool = True) -> dict:
        out = {
            "schema": 1,
            "q": self.q,
            "M": self.M,
            "area_each": self.area_each,
            "max_diameter_bound": self.max_diameter_bound(),
        }
        if include_patches:
            bounds = self.diameter_bounds()
            out["patches"] = [
                {
                    "index": j,
                    "bands": [[lo, hi] for lo, hi in self.patch_bands(j)],
                    "area": self.patch_area(j),
                    "diameter_bound": float(bounds[j]),
                }
                for j in range(self.M)
            ]
        return out


def equal_area_partition(q: int, patch_count: int) -> EqualAreaPartition:
    """Equal-area partition of S^q into patch_count patches (q in {2, 3, 4})."""
    if q > 4:
        raise ValueError(f"equal-area partitions are implemented for q <= 4, got q={q}")
    if patch_count < 2:
        raise ValueError(f"patch count must be >= 2, got {patch_count}")
    return EqualAreaPartition(q, patch_count)


def partition_norm_bound(partition) -> float:
    """Certified upper bound for the partition norm (maximal patch diameter)."""
    return partition.max_diameter_bound()
