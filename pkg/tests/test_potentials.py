import json
import math

import numpy as np
import pytest

from halfpot import index_calculus as ic
from halfpot.boundary_data import (BoundaryData, get_data, make_example_f,
                                   make_example_g, make_smooth_decay)
from halfpot.errors import NonIntegrable
from halfpot.kernels import HalfSpacePoint, KernelSpec
from halfpot.potentials import (apply_boundary, apply_boundary_double,
                                apply_layer, apply_normal_derivative_single,
                                eval_grid, make_field, solve_dirichlet,
                                solve_neumann, write_grid_csv)
from halfpot.quadrature import QuadratureSpec

QUAD = QuadratureSpec()
FAST = QuadratureSpec(rel_tol=1e-6, abs_tol=1e-8, far_radius=200.0,
                      angular_points=32)
# far-field profile: the one-term tail model needs far_radius >> |z| to
# certify tight tolerances on slowly-decaying integrands
FARQ = QuadratureSpec(rel_tol=1e-6, abs_tol=1e-9, far_radius=1e6)


def bump_data(radius=50.0):
    """Approximately 1 on a large disc, decaying like |y'|^-8."""
    def evaluate(pts):
        return 1.0 / (1.0 + (np.sum(pts ** 2, axis=1) / radius ** 2) ** 4)
    return BoundaryData(3, evaluate, 8, {}, name="bump",
                        validity_radius=4 * radius)


def test_double_layer_of_near_constant_data():
    # total mass of the kernel is 1/2; the bump differs from 1 only beyond
    # radius ~50 where the kernel carries ~x/(2*50) of its mass
    fld = make_field(KernelSpec(3, "double", 0), bump_data(), QUAD)
    v = apply_layer(fld, HalfSpacePoint(1.0, np.zeros(2)))
    assert abs(v - 0.5) <= 0.02


def test_far_field_slope_matches_index_family():
    # log-free datum: the single layer behaves like -mass/(4 pi |z|)
    g = make_example_g()
    fld = make_field(KernelSpec(3, "single", 0), g, FARQ)
    direction = np.array([math.cos(0.6), math.sin(0.6), 0.0])
    rs = np.geomspace(10.0, 100.0, 8)
    vals = np.array([apply_layer(fld, HalfSpacePoint(r * direction[0],
                                                     r * direction[1:]))
                     for r in rs])
    slope = np.polyfit(np.log(rs), np.log(np.abs(vals)), 1)[0]
    assert abs(slope - (-1.0)) <= 0.05
    mass = 2 * math.pi * math.pi / (2 * math.sqrt(2))  # integral of g
    assert vals[-1] * rs[-1] == pytest.approx(-mass / (4 * math.pi), rel=0.02)


def test_nonintegrable_gate():
    const = get_data("poly:0:even")
    with pytest.raises(NonIntegrable):
        make_field(KernelSpec(3, "single", 0), const, QUAD)
    fld = make_field(KernelSpec(3, "single", 0), make_example_f(), QUAD)
    object.__setattr__(fld, "data", const)  # simulate stale field
    with pytest.raises(NonIntegrable):
        apply_layer(fld, HalfSpacePoint(1.0, np.zeros(2)))


def test_double_layer_at_boundary_is_zero_off_diagonal():
    fld = make_field(KernelSpec(3, "double", 0), make_example_f(), QUAD)
    assert apply_layer(fld, HalfSpacePoint(0.0, np.array([0.5, 0.5]))) == 0.0
    sfld = make_field(KernelSpec(3, "single", 0), make_example_f(), QUAD)
    with pytest.raises(ValueError):
        apply_layer(sfld, HalfSpacePoint(0.0, np.zeros(2)))


def test_normal_derivative_unmodified_equals_minus_double():
    f = make_example_f()
    sfld = make_field(KernelSpec(3, "single", 0), f, QUAD)
    dfld = make_field(KernelSpec(3, "double", 0), f, QUAD)
    z = HalfSpacePoint(0.7, np.array([0.2, -0.1]))
    assert apply_normal_derivative_single(sfld, z) == -apply_layer(dfld, z)


def test_normal_derivative_matches_finite_difference():
    f = make_example_f()
    for k in (0, 3):
        quad = QuadratureSpec(rel_tol=1e-8, abs_tol=1e-12, far_radius=2e4)
        fld = make_field(KernelSpec(3, "single", k), f, quad)
        y = np.array([0.3, 0.1])
        h = 1e-4
        fd = -(apply_layer(fld, HalfSpacePoint(0.5 + h, y))
               - apply_layer(fld, HalfSpacePoint(0.5 - h, y))) / (2 * h)
        direct = apply_normal_derivative_single(fld, HalfSpacePoint(0.5, y))
        assert abs(fd - direct) <= 1e-5


def test_boundary_operator_analytic_value():
    # radial reduction oracle: N0 f(0) = -(1/2) * integral of f over radii
    # = -(1/2)(pi/2) for f = 1/(1+r^2)
    f = make_example_f()
    v = apply_boundary(KernelSpec(3, "single", 0), f, np.zeros(2), QUAD)
    assert abs(v - (-math.pi / 4)) <= 1e-6


def test_boundary_operator_translation_covariance():
    def evaluate(pts, c=np.zeros(2)):
        return np.exp(-np.sum((pts - c) ** 2, axis=1))

    base = BoundaryData(3, evaluate, 12, {}, name="gauss")
    c = np.array([0.8, -0.4])
    shifted = BoundaryData(
        3, lambda pts: np.exp(-np.sum((pts - c) ** 2, axis=1)), 12, {},
        name="gauss-shifted")
    spec = KernelSpec(3, "single", 0)
    quad = QuadratureSpec(rel_tol=1e-9, abs_tol=1e-12)
    a = apply_boundary(spec, base, np.array([0.3, 0.2]), quad)
    b = apply_boundary(spec, shifted, np.array([0.3, 0.2]) + c, quad)
    assert abs(a - b) <= 1e-8


def test_boundary_double_operator_is_zero():
    assert apply_boundary_double(KernelSpec(3, "double", 0),
                                 make_example_f(), np.zeros(2)) == 0.0


def test_solvers_choose_minimal_order():
    f = make_example_f()
    fld = solve_dirichlet(f, QUAD)
    assert fld.spec.kind == "double" and fld.spec.k == 0
    assert fld.derived_index_family.get("Y") == ic.integer_index_set(0)
    assert fld.derived_index_family.get("Z") == ic.extended_union(
        ic.integer_index_set(2), ic.integer_index_set(2))
    lin = get_data("poly:1:odd")
    nfld = solve_neumann(lin, FAST)
    assert nfld.spec.k == 3 and nfld.ambiguity_degree == 3
    dfl = solve_dirichlet(lin, FAST)
    assert dfl.spec.k == 1


def test_linearity():
    f, g = make_example_f(), make_example_g()
    a, b = 2.0, -0.5
    combo = BoundaryData(
        3, lambda pts: a * f(pts) + b * g(pts), 2,
        {j: (lambda om, j=j: a * f.coefficient_values(j, om)
             + b * g.coefficient_values(j, om)) for j in range(2, 13)},
        name="combo")
    spec = KernelSpec(3, "double", 0)
    z = HalfSpacePoint(0.8, np.array([0.1, 0.4]))
    va = apply_layer(make_field(spec, f, QUAD), z)
    vb = apply_layer(make_field(spec, g, QUAD), z)
    vc = apply_layer(make_field(spec, combo, QUAD), z)
    assert abs(vc - (a * va + b * vb)) <= 1e-8


def test_potential_harmonicity():
    from halfpot.analysis import check_harmonicity
    f = make_example_f()
    fld = make_field(KernelSpec(3, "double", 0), f, QUAD)
    rng = np.random.default_rng(3)
    pts = [HalfSpacePoint(0.3 + 2.7 * rng.random(), rng.uniform(-1, 1, 2))
           for _ in range(8)]
    rep = check_harmonicity(fld, pts, 1e-2, quad_tol=QUAD.abs_tol,
                            c2=100.0, c0=10.0)
    assert rep.passed


def test_gate_matches_symbolic_gate_small_sample():
    rng = np.random.default_rng(5)
    for _ in range(12):
        kind = ("single", "double")[int(rng.integers(0, 2))]
        k = int(rng.integers(0, 4))
        l = int(rng.integers(-3, 4))
        data = (make_smooth_decay(3, l) if l >= 1
                else get_data(f"poly:{-l}"))
        numeric_raises = symbolic_raises = False
        try:
            make_field(KernelSpec(3, kind, k), data, FAST)
        except NonIntegrable:
            numeric_raises = True
        try:
            ic.layer_potential_index_family(kind, k, 3, data.index_set())
        except ic.IntegrabilityViolation:
            symbolic_raises = True
        assert numeric_raises == symbolic_raises == (l <= ic.alpha(kind, k))


def test_grid_csv_and_metadata(tmp_path):
    f = make_example_f()
    fld = solve_dirichlet(f, FAST)
    pts = np.array([[1.0, 0.0, 0.0], [0.5, 0.3, -0.2]])
    values = write_grid_csv(fld, pts, tmp_path / "grid.csv",
                            tmp_path / "meta.json")
    lines = (tmp_path / "grid.csv").read_text().strip().splitlines()
    assert lines[0] == "x,y1,y2,value"
    assert len(lines) == 3
    back = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    assert np.allclose(back[:, :3], pts)
    assert np.allclose(back[:, 3], values)
    meta = json.loads((tmp_path / "meta.json").read_text())
    assert meta["kernel"] == {"n": 3, "kind": "double", "k": 0,
                              "cutoff": {"inner_radius": 1.0,
                                         "outer_radius": 2.0,
                                         "profile": "exp-step"}}
    assert meta["index_family"]["sets"]["Z"] == [[2.0, 0.0, 1]]
    assert meta["data"] == "example-f"
    assert np.allclose(eval_grid(fld, pts), values)


def test_boundary_operator_matches_dense_midpoint_oracle_on_disc():
    # polar midpoint rule at 4x the working resolution on a bounded disc;
    # the Jacobian cancels the kernel singularity, so midpoint converges
    from halfpot.kernels import boundary_single_batch
    from halfpot.quadrature import integrate_plane_singular

    f = make_example_f()
    spec = KernelSpec(3, "single", 0)
    lib = integrate_plane_singular(
        3, lambda yp: boundary_single_batch(spec, np.zeros(2), yp) * f(yp),
        np.zeros(2), 1.0, QUAD, radial_limit=20.0)
    n_r, n_phi = 4 * 2000, 4 * 64
    rs = (np.arange(n_r) + 0.5) * (20.0 / n_r)
    phis = (np.arange(n_phi) + 0.5) * (2 * math.pi / n_phi)
    rr, pp = np.meshgrid(rs, phis, indexing="ij")
    pts = np.stack([rr * np.cos(pp), rr * np.sin(pp)], axis=-1).reshape(-1, 2)
    vals = boundary_single_batch(spec, np.zeros(2), pts) * f(pts)
    oracle = float(vals @ rr.reshape(-1)) * (20.0 / n_r) * (2 * math.pi / n_phi)
    assert abs(lib.value - oracle) <= 1e-6
