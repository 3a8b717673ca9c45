"""Special functions on the q-sphere.

Harmonic space dimensions, surface areas, ultraspherical polynomials for the
weight w_q(t) = (1 - t^2)^(q/2 - 1), and the zonal kernels built from them:
the reproducing (Christoffel-Darboux type) kernel of the degree-n polynomial
space and the de la Vallee Poussin style product kernel with uniformly
bounded L1 norm.

Conventions: S^q is the unit sphere in R^(q+1); mu_q is its unnormalized
surface measure with total mass omega_q; R_n denotes the ultraspherical
polynomial normalized so that R_n(1) = 1.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "harmonic_dim",
    "poly_space_dim",
    "sphere_area",
    "UltrasphericalEvaluator",
    "zonal_kernel_sum",
    "cd_kernel_eval",
    "DlvpKernel",
    "kernel_l1",
    "kernel_sup",
    "kernel_deriv_integral",
    "dlvp_l1_bound",
    "dlvp_sup_bound",
    "dlvp_deriv_bound",
]

#: tolerance for arguments slightly outside [-1, 1]; values within it are clamped
T_CLAMP_TOL = 1e-12


def harmonic_dim(q: int, degree: int) -> int:
    """Dimension of the space of spherical harmonics of exact degree on S^q.

    Computed cancellation-free in product form with exact integer
    arithmetic, so there is no overflow for any practical (q, degree).
    For q = 2 this is 2*degree + 1, for q = 3 it is (degree + 1)**2.
    """
    if q < 2:
        raise ValueError(f"sphere dimension must be >= 2, got q={q}")
    if degree < 0:
        raise ValueError(f"harmonic degree must be >= 0, got {degree}")
    num = 2 * degree + q - 1
    prod = 1
    for j in range(degree + 1, degree + q - 1):
        prod *= j
    return num * prod // math.factorial(q - 1)


def poly_space_dim(q: int, n: int) -> int:
    """Dimension of the space of spherical polynomials of degree at most n on S^q."""
    if n < 0:
        raise ValueError(f"polynomial degree must be >= 0, got {n}")
    return sum(harmonic_dim(q, ell) for ell in range(n + 1))


def sphere_area(q: int) -> float:
    """Surface area omega_q of the unit sphere S^q embedded in R^(q+1)."""
    if q < 1:
        raise ValueError(f"sphere dimension must be >= 1, got q={q}")
    return 2.0 * math.pi ** ((q + 1) / 2.0) / math.gamma((q + 1) / 2.0)


def _clamp_argument(t, clip_tol: float = T_CLAMP_TOL):
    """Validate |t| <= 1 + clip_tol and clamp into [-1, 1]. Returns ndarray and scalar flag."""
    arr = np.asarray(t, dtype=np.float64)
    scalar = arr.ndim == 0
    if np.any(np.abs(arr) > 1.0 + clip_tol):
        worst = float(np.max(np.abs(arr)))
        raise ValueError(f"kernel argument out of range: |t| = {worst} > 1 + {clip_tol}")
    return np.clip(arr, -1.0, 1.0), scalar


class UltrasphericalEvaluator:
    """Forward three-term recurrence for R_0, ..., R_max_degree on [-1, 1].

    The recurrence

        (k + q - 2) R_k(t) = (2k + q - 3) t R_{k-1}(t) - (k - 1) R_{k-2}(t)

    has integer coefficients, so evaluation at t = 1 telescopes to exactly 1
    in floating point.  Instances are immutable after construction and safe
    to use from concurrent workers.
    """

    def __init__(self, q: int, max_degree: int):
        if q < 2:
            raise ValueError(f"sphere dimension must be >= 2, got q={q}")
        if max_degree < 0:
            raise ValueError(f"max_degree must be >= 0, got {max_degree}")
        self.q = q
        self.max_degree = max_degree
        k = np.arange(2, max_degree + 1, dtype=np.float64)
        # integer-valued doubles keep (c1 - c2)/den == 1 exact at t = 1
        self._c1 = 2.0 * k + q - 3.0
        self._c2 = k - 1.0
        self._den = k + q - 2.0

    def _check_degree(self, n: int) -> None:
        if not 0 <= n <= self.max_degree:
            raise ValueError(
                f"degree {n} exceeds evaluator range 0..{self.max_degree}"
            )

    def eval(self, n: int, t):
        """Value of R_n(t); t may be a scalar or an ndarray."""
        self._check_degree(n)
        u, scalar = _clamp_argument(t)
        r_prev = np.ones_like(u)
        if n == 0:
            return float(r_prev) if scalar else r_prev
        r = u.copy()
        for k in range(2, n + 1):
            i = k - 2
            r, r_prev = (self._c1[i] * u * r - self._c2[i] * r_prev) / self._den[i], r
        return float(r) if scalar else r

    def eval_with_deriv(self, n: int, t):
        """Pair (R_n(t), R_n'(t)), differentiating the recurrence term by term."""
        self._check_degree(n)
        u, scalar = _clamp_argument(t)
        r_prev = np.ones_like(u)
        d_prev = np.zeros_like(u)
        if n == 0:
            out = (r_prev, d_prev)
            return (float(out[0]), float(out[1])) if scalar else out
        r = u.copy()
        d = np.ones_like(u)
        for k in range(2, n + 1):
            i = k - 2
            r_new = (self._c1[i] * u * r - self._c2[i] * r_prev) / self._den[i]
            d_new = (self._c1[i] * (r + u * d) - self._c2[i] * d_prev) / self._den[i]
            r_prev, r = r, r_new
            d_prev, d = d, d_new
        return (float(r), float(d)) if scalar else (r, d)


def _zonal_sums(q: int, stops, u: np.ndarray, want_deriv: bool = False):
    """Partial sums S_m(u) = sum_{k<=m} h_q(k) R_k(u) at each requested stop.

    Runs a single recurrence sweep up to max(stops).  When want_deriv is
    set, the derivative sums dS_m/du are returned alongside.
    """
    stops = list(stops)
    nmax = max(stops)
    h = [float(harmonic_dim(q, k)) for k in range(nmax + 1)]

    r_prev = np.ones_like(u)
    d_prev = np.zeros_like(u)
    s = h[0] * r_prev
    ds = np.zeros_like(u)
    sums = {}
    dsums = {}
    if 0 in stops:
        sums[0] = s.copy()
        dsums[0] = ds.copy()
    if nmax >= 1:
        r = u.copy()
        d = np.ones_like(u)
        s = s + h[1] * r
        ds = ds + h[1] * d
        if 1 in stops:
            sums[1] = s.copy()
            dsums[1] = ds.copy()
        for k in range(2, nmax + 1):
            c1 = 2.0 * k + q - 3.0
            c2 = k - 1.0
            den = k + q - 2.0
            r_new = (c1 * u * r - c2 * r_prev) / den
            if want_deriv:
                d_new = (c1 * (r + u * d) - c2 * d_prev) / den
                d_prev, d = d, d_new
                ds = ds + h[k] * d
            r_prev, r = r, r_new
            s = s + h[k] * r
            if k in stops:
                sums[k] = s.copy()
                dsums[k] = ds.copy()
    out_s = [sums[m] for m in stops]
    if want_deriv:
        return out_s, [dsums[m] for m in stops]
    return out_s


def zonal_kernel_sum(q: int, n: int, u):
    """S_n(u) = sum_{k=0}^{n} h_q(k) R_k(u), the zonal trace kernel of Pi_n^q.

    A sigma_q-orthonormal basis (e_k) of Pi_n^q satisfies
    sum_k e_k(x) e_k(y) = S_n(x . y); in particular S_n(1) = dim Pi_n^q.
    """
    arr, scalar = _clamp_argument(u)
    (s,) = _zonal_sums(q, [n], arr)
    return float(s) if scalar else s


def cd_kernel_eval(q: int, n: int, t):
    """Reproducing kernel K_n(t) of Pi_n^q in the weighted polynomial norm.

    K_n(t) = (omega_{q-1}/omega_q) * S_n(t); K_n(1) equals
    (omega_{q-1}/omega_q) * dim Pi_n^q.
    """
    factor = sphere_area(q - 1) / sphere_area(q)
    return factor * zonal_kernel_sum(q, n, t)


class DlvpKernel:
    """De la Vallee Poussin style product kernel of degree at most 2n.

    v_n(t) = K_{floor(n/2)}(t) * K_{floor(3n/2)}(t) / (omega_{q-1} * K_{floor(n/2)}(1)).

    Convolving against mu_q reproduces every spherical polynomial of degree
    at most n, because K_{floor(3n/2)} / omega_{q-1} reproduces the product
    of the polynomial with the degree-floor(n/2) factor, which is 1 at t = 1.
    Immutable; evaluation is pure.
    """

    def __init__(self, q: int, n: int):
        if q < 2:
            raise ValueError(f"sphere dimension must be >= 2, got q={q}")
        if n < 0:
            raise ValueError(f"kernel degree parameter must be >= 0, got {n}")
        self.q = q
        self.n = n
        self.deg_lo = n // 2
        self.deg_hi = (3 * n) // 2
        #: polynomial degree of v_n as a function of t (at most 2n)
        self.degree = self.deg_lo + self.deg_hi
        # v_n(t) = S_lo(t) * S_hi(t) / (omega_q * d_q(deg_lo))
        self._norm = sphere_area(q) * poly_space_dim(q, self.deg_lo)

    def eval(self, t):
        """v_n(t) for scalar or ndarray t."""
        u, scalar = _clamp_argument(t)
        s_lo, s_hi = _zonal_sums(self.q, [self.deg_lo, self.deg_hi], u)
        v = s_lo * s_hi / self._norm
        return float(v) if scalar else v

    def eval_deriv(self, t):
        """v_n'(t) by the product rule on the two kernel factors."""
        u, scalar = _clamp_argument(t)
        (s_lo, s_hi), (d_lo, d_hi) = _zonal_sums(
            self.q, [self.deg_lo, self.deg_hi], u, want_deriv=True
        )
        dv = (d_lo * s_hi + s_lo * d_hi) / self._norm
        return float(dv) if scalar else dv


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)

#: total panel cap for the adaptive composite rules below
_PANEL_CAP = 1 << 16


def _composite_integral(f, a: float, b: float, panels: int) -> float:
    """Composite 16-point Gauss-Legendre integral of f over [a, b]."""
    edges = np.linspace(a, b, panels + 1)
    lo = edges[:-1, None]
    hi = edges[1:, None]
    pts = 0.5 * (lo + hi) + 0.5 * (hi - lo) * _GL_NODES[None, :]
    wts = 0.5 * (hi - lo) * _GL_WEIGHTS[None, :]
    return float(np.sum(f(pts.ravel()) * wts.ravel()))


def _refine_integral(f, a: float, b: float, panels: int, tol: float) -> float:
    value = _composite_integral(f, a, b, panels)
    while panels < _PANEL_CAP:
        panels *= 2
        new = _composite_integral(f, a, b, panels)
        if abs(new - value) < tol:
            return new
        value = new
    return value


def kernel_l1(q: int, n: int, panels: int | None = None, tol: float = 1e-9) -> float:
    """Weighted L1 norm of v_n: integral of |v_n(t)| (1-t^2)^(q/2-1) over [-1, 1].

    Evaluated in the colatitude variable as integral of
    |v_n(cos tau)| sin(tau)^(q-1) over [0, pi], which has the same value and
    a smooth weight for every q >= 2.  The integrand is refined by panel
    doubling until successive composite values differ by less than tol.
    """
    kern = DlvpKernel(q, n)

    def f(tau):
        return np.abs(kern.eval(np.cos(tau))) * np.sin(tau) ** (q - 1)

    start = max(panels or 0, 4 * n, 8)
    return _refine_integral(f, 0.0, math.pi, start, tol)


def kernel_sup(q: int, n: int, grid: int | None = None) -> float:
    """Max of |v_n| over a Chebyshev-spaced grid of at least 8n + 64 abscissae."""
    count = max(grid or 0, 8 * n + 64)
    t = np.cos(np.linspace(0.0, math.pi, count))
    kern = DlvpKernel(q, n)
    return float(np.max(np.abs(kern.eval(t))))


def kernel_deriv_integral(
    q: int, n: int, panels: int | None = None, tol: float = 1e-9
) -> float:
    """Integral of |v_n'(cos tau) sin(tau)^q| over [0, pi], refined by panel doubling."""
    kern = DlvpKernel(q, n)

    def f(tau):
        return np.abs(kern.eval_deriv(np.cos(tau))) * np.sin(tau) ** q

    start = max(panels or 0, 8 * n, 8)
    return _refine_integral(f, 0.0, math.pi, start, tol)


def dlvp_l1_bound(q: int) -> float:
    """Upper bound 3^(q/2) / omega_{q-1} for the weighted L1 norm of every v_n."""
    return 3.0 ** (q / 2.0) / sphere_area(q - 1)


def dlvp_sup_bound(q: int, n: int) -> float:
    """Upper bound 2 max(n, 2q)^q / (omega_{q-1} Gamma(q/2) Gamma(q/2+1)) for sup |v_n|."""
    return (
        2.0
        * max(n, 2 * q) ** q
        / (sphere_area(q - 1) * math.gamma(q / 2.0) * math.gamma(q / 2.0 + 1.0))
    )


def dlvp_deriv_bound(q: int, n: int) -> float:
    """Upper bound (3^(q/2) pi + 2q + 2) (n + q^2) / omega_{q-1} for the derivative integral."""
    c = 3.0 ** (q / 2.0) * math.pi + 2.0 * q + 2.0
    return c * (n + q * q) / sphere_area(q - 1)
