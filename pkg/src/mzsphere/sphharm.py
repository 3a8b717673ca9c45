"""Real spherical harmonics on S^2, orthonormal for the normalized measure.

The basis is evaluated with the fully normalized associated Legendre
recurrences (no factorial ratios), which stay stable far beyond degree 50.
Basis order: degree l = 0..n; within a degree, m = 0 first, then the
(cos m phi, sin m phi) pair for m = 1..l.  Every basis function has mean
square 1 over the sphere, so the squared values at any point sum to
(n+1)^2.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["sph_harm_basis", "sph_harm_basis_cols", "basis_size"]


def basis_size(n: int) -> int:
    return (n + 1) * (n + 1)


def sph_harm_basis_cols(n: int, coords: np.ndarray) -> np.ndarray:
    """(d, N) array with one row per basis function, one column per point.

    The row-major layout makes each recurrence step a contiguous write,
    which matters when accumulating Gram matrices over large point blocks.
    """
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    coords = np.asarray(coords, dtype=np.float64)
    if coords.ndim != 2 or coords.shape[1] != 3:
        raise ValueError(f"expected (N, 3) coordinates, got {coords.shape}")
    npts = coords.shape[0]
    ct = np.clip(coords[:, 2], -1.0, 1.0)
    st = np.hypot(coords[:, 0], coords[:, 1])
    # azimuth direction; poles get an arbitrary one (their m >= 1 terms vanish)
    safe = np.where(st > 0.0, st, 1.0)
    cos_phi = np.where(st > 0.0, coords[:, 0] / safe, 1.0)
    sin_phi = np.where(st > 0.0, coords[:, 1] / safe, 0.0)

    out = np.empty((basis_size(n), npts))
    sqrt2 = math.sqrt(2.0)

    cos_m = np.ones(npts)  # cos(m phi), starting at m = 0
    sin_m = np.zeros(npts)
    diag = np.ones(npts)  # fully normalized P_m^m without the Condon-Shortley sign
    cos_col = np.empty(npts)
    sin_col = np.empty(npts)
    for m in range(n + 1):
        if m > 0:
            diag = diag * st * math.sqrt((2.0 * m + 1.0) / (2.0 * m))
            cos_m, sin_m = (
                cos_m * cos_phi - sin_m * sin_phi,
                sin_m * cos_phi + cos_m * sin_phi,
            )
            np.multiply(sqrt2 * cos_m, 1.0, out=cos_col)
            np.multiply(sqrt2 * sin_m, 1.0, out=sin_col)
        p_prev = diag  # P_m^m
        p_curr = None
        for ell in range(m, n + 1):
            if ell == m:
                p = p_prev
            elif ell == m + 1:
                p = math.sqrt(2.0 * m + 3.0) * ct * p_prev
                p_curr = p
            else:
                a = math.sqrt((4.0 * ell * ell - 1.0) / (ell * ell - m * m))
                b = math.sqrt(
                    ((ell - 1.0) ** 2 - m * m) / (4.0 * (ell - 1.0) ** 2 - 1.0)
                )
                p = a * (ct * p_curr - b * p_prev)
                p_prev, p_curr = p_curr, p
            base = ell * ell
            if m == 0:
                out[base] = p
            else:
                np.multiply(p, cos_col, out=out[base + 2 * m - 1])
                np.multiply(p, sin_col, out=out[base + 2 * m])
    return out


def sph_harm_basis(n: int, coords: np.ndarray) -> np.ndarray:
    """(N, d) matrix of the basis functions at unit vectors (rows of coords)."""
    return sph_harm_basis_cols(n, coords).T
