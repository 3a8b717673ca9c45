"""Spherical polynomials as test instances for the verification experiments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import sample_uniform
from .kernels import poly_space_dim, zonal_kernel_sum
from .rng import NS_POLY, derive_seed, philox_stream
from .sphharm import basis_size, sph_harm_basis

__all__ = ["SpherePolynomial", "random_polynomial", "evaluate_all"]


@dataclass(frozen=True)
class SpherePolynomial:
    """Element of the degree-n spherical polynomial space.

    For q = 2 the representation is a coefficient vector over the real
    harmonic basis (orthonormal under the normalized measure).  For q >= 3
    it is a zonal combination sum_i c_i S_n(x . z_i) with S_n the zonal
    trace kernel, which spans the space for generic centers.
    """

    q: int
    degree: int
    coeffs: np.ndarray
    centers: np.ndarray | None = None

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.float64)
        object.__setattr__(self, "coeffs", coeffs)
        if self.q == 2 and self.centers is None:
            if coeffs.shape != (basis_size(self.degree),):
                raise ValueError(
                    f"expected {basis_size(self.degree)} harmonic coefficients, "
                    f"got shape {coeffs.shape}"
                )
        else:
            if self.centers is None:
                raise ValueError("zonal representation requires centers")
            centers = np.asarray(self.centers, dtype=np.float64)
            if centers.shape != (coeffs.size, self.q + 1):
                raise ValueError(
                    f"centers shape {centers.shape} does not match "
                    f"{coeffs.size} coefficients on S^{self.q}"
                )
            object.__setattr__(self, "centers", centers)

    def eval(self, coords: np.ndarray) -> np.ndarray:
        """Values at unit vectors given as rows of coords."""
        coords = np.asarray(coords, dtype=np.float64)
        if self.centers is None:
            return sph_harm_basis(self.degree, coords) @ self.coeffs
        dots = np.clip(coords @ self.centers.T, -1.0, 1.0)
        return zonal_kernel_sum(self.q, self.degree, dots) @ self.coeffs


def random_polynomial(q: int, n: int, seed: int) -> SpherePolynomial:
    """Random element of the degree-n space, deterministic per seed.

    q = 2 draws i.i.d. standard normal harmonic coefficients; q >= 3 draws
    2 d_q(n) uniform zonal centers with standard normal coefficients.
    """
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    if q == 2:
        coeffs = philox_stream(seed, NS_POLY).standard_normal(basis_size(n))
        return SpherePolynomial(q=q, degree=n, coeffs=coeffs)
    m = 2 * poly_space_dim(q, n)
    centers = sample_uniform(q, m, derive_seed(seed, NS_POLY, 1)).coords
    coeffs = philox_stream(seed, NS_POLY, 2).standard_normal(m)
    return SpherePolynomial(q=q, degree=n, coeffs=coeffs, centers=centers)


def evaluate_all(polys: list[SpherePolynomial], coords: np.ndarray) -> np.ndarray:
    """(K, len(polys)) matrix of values; shares the basis when q = 2."""
    if not polys:
        raise ValueError("no polynomials to evaluate")
    q = polys[0].q
    degree = max(p.degree for p in polys)
    if q == 2 and all(p.centers is None for p in polys):
        basis = sph_harm_basis(degree, coords)
        cmat = np.zeros((basis.shape[1], len(polys)))
        for j, p in enumerate(polys):
            cmat[: p.coeffs.size, j] = p.coeffs
        return basis @ cmat
    return np.column_stack([p.eval(coords) for p in polys])
