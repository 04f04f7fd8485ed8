"""Boundary data on the compactified plane.

A datum is an interior evaluator plus the coefficients f_j of its expansion
at the sphere at infinity, f ~ sum_{j >= l} |y'|^(-j) f_j(y'/|y'|), with
integer leading order l.  Coefficients are stored as callables on unit
directions; the log-condition integrals only ever need pointwise sphere
evaluation.  Data in this package is restricted to integer-order, log-free
expansions (the case of every worked fixture); the index set of a datum is
the integer set of its leading order.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .index_calculus import DEFAULT_TRUNCATION, integer_index_set

#: Default expansion depth J; caps every log-detection scan.
DEFAULT_DEPTH = 10


def _as_points(yp):
    yp = np.asarray(yp, dtype=np.float64)
    if yp.ndim == 1:
        return yp[None, :], True
    return yp, False


def constant_on_sphere(c):
    """Coefficient function that is the constant c on the sphere."""
    def fn(omega):
        return np.full(omega.shape[0], float(c))
    return fn


def component_power(i, d):
    """Coefficient function omega -> omega_i^d (restriction of a monomial)."""
    def fn(omega):
        return omega[:, i] ** d
    return fn


@dataclass(frozen=True)
class BoundaryData:
    """Polyhomogeneous boundary datum: evaluator + expansion at infinity."""

    n: int
    evaluate: object                      # (N, n-1) array -> (N,) array
    leading_order: int
    coefficients: dict                    # j -> callable on unit directions
    depth: int = DEFAULT_DEPTH
    name: str = ""
    validity_radius: float = 5.0          # expansion trusted for |y'| >= this
    expansion_constant: float = 1.0       # C in the remainder bound

    def __call__(self, yp):
        pts, single = _as_points(yp)
        vals = np.asarray(self.evaluate(pts), dtype=np.float64)
        return float(vals[0]) if single else vals

    def index_set(self, truncation=DEFAULT_TRUNCATION):
        """Integer index set of the datum (its leading order)."""
        return integer_index_set(self.leading_order, truncation)

    def coefficient_values(self, j, omegas):
        """f_j on unit directions (zeros when the coefficient is absent)."""
        fn = self.coefficients.get(j)
        if fn is None:
            return np.zeros(omegas.shape[0])
        return np.asarray(fn(omegas), dtype=np.float64)

    def partial_sum(self, yp, jmax=None):
        """sum_{l <= j <= jmax} |y'|^(-j) f_j(y'/|y'|) away from the origin."""
        if jmax is None:
            jmax = self.leading_order + self.depth
        pts, single = _as_points(yp)
        r = np.linalg.norm(pts, axis=1)
        if np.any(r == 0.0):
            raise ValueError("partial_sum is undefined at the origin")
        omegas = pts / r[:, None]
        acc = np.zeros(pts.shape[0])
        for j in sorted(self.coefficients):
            if j > jmax:
                break
            acc += r ** (-float(j)) * self.coefficient_values(j, omegas)
        return float(acc[0]) if single else acc

    def check_expansion(self, radii=(10.0, 20.0, 40.0), n_angles=16):
        """Verify |eval - partial_sum| <= C |y'|^(-(l+J+1)) on test rings.

        The bound carries a floor at the float64 roundoff of the evaluator
        (the mathematical remainder quickly drops below representable
        precision).  Returns the worst ratio defect/bound (<= 1 on
        success); raises on failure.
        """
        worst = 0.0
        jmax = self.leading_order + self.depth
        for r in radii:
            if r < self.validity_radius:
                continue
            phis = 2.0 * math.pi * np.arange(n_angles) / n_angles
            if self.n == 3:
                pts = r * np.stack([np.cos(phis), np.sin(phis)], axis=1)
            else:
                rng = np.random.default_rng(0)
                dirs = rng.normal(size=(n_angles, self.n - 1))
                dirs /= np.linalg.norm(dirs, axis=1)[:, None]
                pts = r * dirs
            vals = self(pts)
            defect = np.max(np.abs(vals - self.partial_sum(pts, jmax)))
            floor = 16.0 * np.finfo(float).eps * np.max(np.abs(vals))
            bound = self.expansion_constant * r ** (-(jmax + 1)) + floor
            worst = max(worst, defect / bound)
        if worst > 1.0:
            raise ValueError(
                f"expansion coefficients inconsistent with evaluator: "
                f"defect/bound = {worst:.3g} for {self.name or 'data'}")
        return worst


def make_example_f(n=3, depth=DEFAULT_DEPTH):
    """f(y') = 1/(1 + |y'|^2): leading order 2, alternating even coefficients.

    Its layer potentials develop logarithms at infinity.
    """
    if n != 3:
        raise ValueError("the worked examples are three-dimensional")

    def evaluate(pts):
        return 1.0 / (1.0 + np.sum(pts ** 2, axis=1))

    coeffs = {2 + 2 * i: constant_on_sphere((-1.0) ** i)
              for i in range(depth // 2 + 1) if 2 * i <= depth}
    return BoundaryData(n, evaluate, 2, coeffs, depth=depth, name="example-f",
                        validity_radius=2.0)


def make_example_g(n=3, depth=DEFAULT_DEPTH):
    """g(y') = |y'|/(1 + |y'|^4): leading order 3, coefficients every 4th order.

    Its layer potentials stay free of logarithms (parity).
    """
    if n != 3:
        raise ValueError("the worked examples are three-dimensional")

    def evaluate(pts):
        r = np.sqrt(np.sum(pts ** 2, axis=1))
        return r / (1.0 + r ** 4)

    coeffs = {3 + 4 * i: constant_on_sphere((-1.0) ** i)
              for i in range(depth // 4 + 1) if 4 * i <= depth}
    return BoundaryData(n, evaluate, 3, coeffs, depth=depth, name="example-g",
                        validity_radius=2.0)


def make_homogeneous_poly(n, degree, angular, name=""):
    """Datum |y'|^d * angular(y'/|y'|), leading order -d.

    ``angular`` must be the sphere restriction of a degree-d homogeneous
    polynomial (the caller's responsibility); then its parity equals the
    parity of d and the modified no-log condition holds automatically.
    """
    if degree < 0 or int(degree) != degree:
        raise ValueError(f"degree must be a non-negative integer, got {degree}")

    def evaluate(pts):
        r = np.linalg.norm(pts, axis=1)
        omegas = np.zeros_like(pts)
        omegas[:, 0] = 1.0
        nz = r > 0
        omegas[nz] = pts[nz] / r[nz, None]
        return r ** float(degree) * np.asarray(angular(omegas), dtype=np.float64)

    return BoundaryData(n, evaluate, -degree, {-degree: angular},
                        depth=DEFAULT_DEPTH,
                        name=name or f"poly:{degree}",
                        validity_radius=1.0)


def make_smooth_decay(n, order):
    """Datum (1 + |y'|^2)^(-order/2): leading order ``order`` >= 1.

    Coefficients follow the binomial series of (1 + s)^(-order/2).
    """
    if order < 1 or int(order) != order:
        raise ValueError(f"order must be a positive integer, got {order}")

    def evaluate(pts):
        return (1.0 + np.sum(pts ** 2, axis=1)) ** (-0.5 * order)

    coeffs = {}
    binom = 1.0
    for i in range(DEFAULT_DEPTH // 2 + 1):
        if i > 0:
            binom *= (-0.5 * order - (i - 1)) / i
        coeffs[order + 2 * i] = constant_on_sphere(binom)
    return BoundaryData(n, evaluate, order, coeffs, name=f"decay:{order}",
                        validity_radius=3.0)


def get_data(name, n=3):
    """Registry of named built-in data.

    Names: ``example-f``, ``example-g``, ``poly:<d>:<odd|even>`` (monomial
    angular part omega_1^d; the parity tag must match d), ``decay:<l>``.
    """
    if name == "example-f":
        return make_example_f(n)
    if name == "example-g":
        return make_example_g(n)
    if name.startswith("poly:"):
        parts = name.split(":")
        degree = int(parts[1])
        if len(parts) > 2:
            parity = parts[2]
            if parity not in ("odd", "even"):
                raise ValueError(f"parity must be odd or even, got {parity!r}")
            if (degree % 2 == 0) != (parity == "even"):
                raise ValueError(
                    f"a homogeneous polynomial of degree {degree} restricts to "
                    f"an {'even' if degree % 2 == 0 else 'odd'} sphere function; "
                    f"{parity!r} does not match")
        return make_homogeneous_poly(n, degree, component_power(0, degree),
                                     name=name)
    if name.startswith("decay:"):
        return make_smooth_decay(n, int(name.split(":")[1]))
    raise KeyError(f"unknown boundary data {name!r}")


# ---------------------------------------------------------------------------
# table-backed user data (n = 3)


def _load_columns(path, ncols):
    arr = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    if arr.shape[1] != ncols:
        raise ValueError(f"{path}: expected {ncols} columns, found {arr.shape[1]}")
    return arr


def load_from_tables(samples_csv, coeffs_csv, leading_order, n=3,
                     depth=DEFAULT_DEPTH):
    """Boundary datum from two CSV tables (n = 3 only).

    ``samples_csv``: rows ``radius,angle,value`` on a full (radius x angle)
    grid; the evaluator uses a cubic spline along the radius and periodic
    linear interpolation in the angle.  Beyond the largest sampled radius
    the evaluator switches to the coefficient expansion (so far-field decay
    is governed by the declared coefficients).

    ``coeffs_csv``: rows ``j,angle,value``; each order j becomes a periodic
    spline coefficient function on the circle.
    """
    if n != 3:
        raise ValueError("table-backed data is implemented for n = 3")
    samples = _load_columns(samples_csv, 3)
    radii = np.unique(samples[:, 0])
    angles = np.unique(samples[:, 1])
    grid = np.full((len(radii), len(angles)), np.nan)
    ri = np.searchsorted(radii, samples[:, 0])
    ai = np.searchsorted(angles, samples[:, 1])
    grid[ri, ai] = samples[:, 2]
    if np.any(np.isnan(grid)):
        raise ValueError(f"{samples_csv}: samples must cover a full grid")
    radial_splines = CubicSpline(radii, grid, axis=0)
    angles_ext = np.concatenate([angles, [angles[0] + 2.0 * math.pi]])

    coeff_rows = _load_columns(coeffs_csv, 3)
    coeffs = {}
    for j in np.unique(coeff_rows[:, 0]):
        rows = coeff_rows[coeff_rows[:, 0] == j]
        phis = rows[:, 1]
        order = np.argsort(phis)
        phis, vals = phis[order], rows[order, 2]
        phis_ext = np.concatenate([phis, [phis[0] + 2.0 * math.pi]])
        vals_ext = np.concatenate([vals, [vals[0]]])
        spline = CubicSpline(phis_ext, vals_ext, bc_type="periodic")

        def coeff_fn(omega, _spline=spline):
            phi = np.arctan2(omega[:, 1], omega[:, 0]) % (2.0 * math.pi)
            return _spline(phi)

        coeffs[int(round(j))] = coeff_fn

    r_max = radii[-1]

    def evaluate(pts, _splines=radial_splines):
        r = np.linalg.norm(pts, axis=1)
        phi = np.arctan2(pts[:, 1], pts[:, 0]) % (2.0 * math.pi)
        out = np.empty(len(pts))
        inside = r <= r_max
        if np.any(inside):
            rows = _splines(np.clip(r[inside], radii[0], r_max))
            rows_ext = np.concatenate([rows, rows[:, :1]], axis=1)
            out[inside] = [np.interp(p, angles_ext, row)
                           for p, row in zip(phi[inside], rows_ext)]
        if np.any(~inside):
            rfar = r[~inside]
            om = pts[~inside] / rfar[:, None]
            acc = np.zeros(len(rfar))
            for j, fn in sorted(coeffs.items()):
                if j <= leading_order + depth:
                    acc += rfar ** (-float(j)) * np.asarray(fn(om), dtype=float)
            out[~inside] = acc
        return out

    return BoundaryData(n, evaluate, leading_order, coeffs, depth=depth,
                        name="table", validity_radius=max(3.0, float(r_max)))
