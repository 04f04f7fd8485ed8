"""Closed-form layer kernels for the Laplacian on the half-space.

The point z = (x, y) lives in R x R^(n-1) with x >= 0; data points y' live
on the boundary plane.  The modified kernels subtract the cutoff-weighted
leading multipole terms at infinity so that data with polynomial growth
stays integrable.  Scalar functions below mirror the batch evaluators in
the compiled backend (used by the quadrature); both share the same
formulas.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import CoincidentPoints
from .special_fn import gegenbauer, sphere_volume

#: Distances below this are treated as a coincident-point error.
COINCIDENT_TOL = 1e-300


@dataclass(frozen=True)
class HalfSpacePoint:
    """A point (x, y) of the closed half-space, x >= 0."""

    x: float
    y: np.ndarray

    def __post_init__(self):
        y = np.atleast_1d(np.asarray(self.y, dtype=np.float64))
        object.__setattr__(self, "y", y)
        if self.x < 0:
            raise ValueError(f"half-space coordinate x must be >= 0, got {self.x}")
        if not (math.isfinite(self.x) and np.all(np.isfinite(y))):
            raise ValueError("coordinates must be finite")

    @property
    def z(self):
        """The full coordinate vector (x, y) in R^n."""
        return np.concatenate(([self.x], self.y))

    @property
    def zmod(self):
        return float(np.sqrt(self.x * self.x + self.y @ self.y))

    @property
    def rho(self):
        """Reciprocal modulus 1/|z| (boundary defining function at infinity)."""
        m = self.zmod
        return math.inf if m == 0 else 1.0 / m

    @property
    def direction(self):
        """Unit direction z/|z| on the half-sphere (undefined at the origin)."""
        m = self.zmod
        if m == 0:
            raise ValueError("direction undefined at the origin")
        return self.z / m


@dataclass(frozen=True)
class CutoffSpec:
    """Smooth radial cutoff: 0 inside inner_radius, 1 outside outer_radius.

    The transition profile is the exp-based smooth step
    s(u) = e(u)/(e(u) + e(1-u)) with e(u) = exp(-1/u); results depend on it
    only through support and smoothness.
    """

    inner_radius: float = 1.0
    outer_radius: float = 2.0
    profile: str = "exp-step"

    def __post_init__(self):
        if not 0 < self.inner_radius < self.outer_radius:
            raise ValueError("need 0 < inner_radius < outer_radius")
        if self.profile != "exp-step":
            raise ValueError(f"unknown cutoff profile {self.profile!r}")

    def __call__(self, s):
        vals = _backend.impl.cutoff_vals(
            np.atleast_1d(np.asarray(s, dtype=np.float64)),
            self.inner_radius, self.outer_radius)
        return float(vals[0]) if np.isscalar(s) else vals


@dataclass(frozen=True)
class KernelSpec:
    """Choice of layer kind, modification order and cutoff for dimension n."""

    n: int = 3
    kind: str = "single"
    k: int = 0
    cutoff: CutoffSpec = field(default_factory=CutoffSpec)

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"dimension must be >= 3, got {self.n}")
        if self.kind not in ("single", "double"):
            raise ValueError(f"kind must be 'single' or 'double', got {self.kind!r}")
        if self.k < 0:
            raise ValueError(f"modification order must be >= 0, got {self.k}")

    @property
    def sl_prefactor(self):
        """1 / ((2 - n) vol S^(n-1)) -- negative for n >= 3."""
        return 1.0 / ((2.0 - self.n) * sphere_volume(self.n))

    @property
    def dl_prefactor(self):
        """1 / vol S^(n-1)."""
        return 1.0 / sphere_volume(self.n)


def _dist(a, b):
    d = float(np.linalg.norm(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)))
    if d < COINCIDENT_TOL:
        raise CoincidentPoints(f"evaluation points coincide: {a} == {b}")
    return d


def fundamental_solution(n, z, zp):
    """|z - z'|^(2-n) / ((2-n) vol S^(n-1)) for z, z' in R^n."""
    r = _dist(z, zp)
    return r ** (2 - n) / ((2 - n) * sphere_volume(n))


def single_layer(n, z, yp):
    """Single layer (Neumann) kernel at half-space point z and boundary y'."""
    yp = np.atleast_1d(np.asarray(yp, dtype=float))
    d2 = z.x * z.x + float(np.sum((z.y - yp) ** 2))
    if d2 < COINCIDENT_TOL:
        raise CoincidentPoints("single_layer evaluated on its singularity")
    return d2 ** (0.5 * (2 - n)) / ((2 - n) * sphere_volume(n))


def double_layer(n, z, yp):
    """Double layer (Poisson) kernel: x (x^2 + |y-y'|^2)^(-n/2) / vol S^(n-1)."""
    yp = np.atleast_1d(np.asarray(yp, dtype=float))
    d2 = z.x * z.x + float(np.sum((z.y - yp) ** 2))
    if d2 < COINCIDENT_TOL:
        raise CoincidentPoints("double_layer evaluated on its singularity")
    return z.x * d2 ** (-0.5 * n) / sphere_volume(n)


def multipole_term(n, kind, m, z, zp):
    """m-th term of the multipole expansion of the layer kernels (no prefactor).

    single: |z|^m |z'|^(-(m+n-2)) C^((n-2)/2)_m(T)
    double: x |z|^(m-1) |z'|^(-(m+n-1)) C^(n/2)_(m-1)(T)
    with T = <z, z'>/(|z||z'|), continued by 0 at z = 0 (the |z| powers kill
    the angular ambiguity; the only surviving limit is the single m = 0 term).
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    zp = np.atleast_1d(np.asarray(zp, dtype=float))
    if m < 0:
        raise ValueError(f"multipole order must be >= 0, got {m}")
    rp = float(np.linalg.norm(zp))
    if rp == 0.0:
        raise ValueError("multipole expansion point z' must be nonzero")
    rz = float(np.linalg.norm(z))
    theta = 0.0 if rz == 0.0 else float(z @ zp) / (rz * rp)
    if kind == "single":
        if m == 0:
            return rp ** (2 - n)
        if rz == 0.0:
            return 0.0
        return rz ** m * rp ** (-(m + n - 2)) * gegenbauer(0.5 * (n - 2), m, theta)
    if kind == "double":
        if m == 0:
            return 0.0  # C_{-1} = 0 by convention
        if rz == 0.0:
            return 0.0
        x = z[0]
        return x * rz ** (m - 1) * rp ** (-(m + n - 1)) * gegenbauer(0.5 * n, m - 1, theta)
    raise ValueError(f"kind must be 'single' or 'double', got {kind!r}")


def _embed(yp):
    """Boundary point y' as the full-space point (0, y')."""
    yp = np.atleast_1d(np.asarray(yp, dtype=float))
    return np.concatenate(([0.0], yp))


def modified_single(spec, z, yp):
    """Single layer kernel with the first k cutoff-weighted multipole terms
    removed; k = 0 is the plain kernel."""
    base = single_layer(spec.n, z, yp)
    if spec.k == 0:
        return base
    psi = spec.cutoff(float(np.linalg.norm(np.atleast_1d(yp))))
    if psi == 0.0:
        return base
    zpfull = _embed(yp)
    corr = sum(multipole_term(spec.n, "single", m, z.z, zpfull)
               for m in range(spec.k))
    return base - spec.sl_prefactor * psi * corr


def modified_double(spec, z, yp):
    """Double layer kernel with the first k cutoff-weighted multipole terms
    removed; k = 0 is the plain kernel."""
    base = double_layer(spec.n, z, yp)
    if spec.k == 0:
        return base
    psi = spec.cutoff(float(np.linalg.norm(np.atleast_1d(yp))))
    if psi == 0.0:
        return base
    zpfull = _embed(yp)
    # double multipole terms reindexed: term m+1 carries C^(n/2)_m
    corr = sum(multipole_term(spec.n, "double", m + 1, z.z, zpfull)
               for m in range(spec.k))
    return base - spec.dl_prefactor * psi * corr


def boundary_single(spec, y, yp):
    """(Modified) single boundary layer kernel: the kernel at x = 0."""
    return modified_single(spec, HalfSpacePoint(0.0, y), yp)


def boundary_double(spec, y, yp):
    """(Modified) double boundary layer kernel -- identically zero on the
    half-space (the plain kernel carries a factor x and the modification
    terms vanish at x = 0)."""
    return 0.0


# ---------------------------------------------------------------------------
# batch evaluators for the quadrature (backend-dispatched)


def kernel_batch(spec, z, yp):
    """(Modified) layer kernel of ``spec`` at z against points yp (N, n-1)."""
    impl = _backend.impl
    yp = np.ascontiguousarray(yp, dtype=np.float64)
    y = np.ascontiguousarray(z.y, dtype=np.float64)
    if spec.kind == "single":
        vals = impl.single_layer_vals(z.x, y, yp, spec.n, spec.sl_prefactor)
        if spec.k > 0:
            vals = vals - impl.mod_correction_single(
                z.x, y, yp, spec.n, spec.k,
                spec.cutoff.inner_radius, spec.cutoff.outer_radius,
                spec.sl_prefactor)
    else:
        vals = impl.double_layer_vals(z.x, y, yp, spec.n, spec.dl_prefactor)
        if spec.k > 0:
            vals = vals - impl.mod_correction_double(
                z.x, y, yp, spec.n, spec.k,
                spec.cutoff.inner_radius, spec.cutoff.outer_radius,
                spec.dl_prefactor)
    return vals


def normal_derivative_single_batch(spec, z, yp):
    """d/d(nu) of the modified single layer kernel in z, nu = -d/dx.

    Equals -DL(z, y') plus the x-derivative of the subtracted multipole
    terms (which vanishes identically for orders m < 2).
    """
    impl = _backend.impl
    yp = np.ascontiguousarray(yp, dtype=np.float64)
    y = np.ascontiguousarray(z.y, dtype=np.float64)
    vals = -impl.double_layer_vals(z.x, y, yp, spec.n, 1.0 / sphere_volume(spec.n))
    if spec.k > 2:
        vals = vals + impl.mod_correction_normal(
            z.x, y, yp, spec.n, spec.k,
            spec.cutoff.inner_radius, spec.cutoff.outer_radius,
            spec.sl_prefactor)
    return vals


def boundary_single_batch(spec, y, yp):
    """(Modified) single boundary layer kernel against points yp (N, n-1)."""
    impl = _backend.impl
    yp = np.ascontiguousarray(yp, dtype=np.float64)
    y = np.ascontiguousarray(np.atleast_1d(y), dtype=np.float64)
    return impl.boundary_single_vals(y, yp, spec.n, spec.k,
                                     spec.cutoff.inner_radius,
                                     spec.cutoff.outer_radius,
                                     spec.sl_prefactor)
