import math

import numpy as np
import pytest

from halfpot.boundary_data import (get_data, load_from_tables, make_example_f,
                                   make_example_g, make_homogeneous_poly,
                                   make_smooth_decay)


def test_example_f_basics():
    f = make_example_f()
    assert f(np.zeros(2)) == 1.0
    assert f.leading_order == 2
    # even coefficients alternate, odd ones are absent
    om = np.array([[1.0, 0.0]])
    assert f.coefficient_values(2, om)[0] == 1.0
    assert f.coefficient_values(4, om)[0] == -1.0
    assert f.coefficient_values(3, om)[0] == 0.0


def test_example_g_basics():
    g = make_example_g()
    assert g.leading_order == 3
    om = np.array([[0.0, 1.0]])
    assert g.coefficient_values(3, om)[0] == 1.0
    assert g.coefficient_values(7, om)[0] == -1.0
    assert g.coefficient_values(5, om)[0] == 0.0
    pt = np.array([2.0, 0.0])
    assert g(pt) == pytest.approx(2.0 / 17.0, rel=1e-14)


def test_expansion_remainder_geometric():
    f = make_example_f()
    pt = np.array([10.0, 0.0])
    defect = abs(f(pt) - f.partial_sum(pt, jmax=10))
    assert defect <= 10.0 ** -12


def test_check_expansion_passes_for_examples():
    assert make_example_f().check_expansion() <= 1.0
    assert make_example_g().check_expansion() <= 1.0
    assert make_smooth_decay(3, 2).check_expansion() <= 1.0


def test_homogeneous_poly_fixtures():
    const = make_homogeneous_poly(3, 0, lambda om: np.ones(len(om)))
    assert const(np.array([3.0, -1.0])) == 1.0
    assert const.leading_order == 0
    lin = get_data("poly:1:odd")
    assert lin.leading_order == -1
    pts = np.array([[2.0, 5.0], [-1.0, 0.3]])
    assert np.allclose(lin(pts), pts[:, 0])


def test_poly_parity_mismatch_rejected():
    with pytest.raises(ValueError):
        get_data("poly:1:even")
    with pytest.raises(ValueError):
        get_data("poly:2:odd")
    assert get_data("poly:2:even").leading_order == -2


def test_registry_unknown_name():
    with pytest.raises(KeyError):
        get_data("nonsense")


def test_smooth_decay_expansion():
    d = make_smooth_decay(3, 3)
    assert d.leading_order == 3
    pt = np.array([20.0, 0.0])
    assert abs(d(pt) - d.partial_sum(pt)) <= 2.0 * 20.0 ** -(3 + 11)


def test_table_loader_roundtrip(tmp_path):
    f = make_example_f()
    radii = np.linspace(0.0, 30.0, 121)
    angles = np.linspace(0.0, 2 * math.pi, 48, endpoint=False)
    with open(tmp_path / "samples.csv", "w") as fh:
        for r in radii:
            for a in angles:
                val = f(np.array([r * math.cos(a), r * math.sin(a)]))
                fh.write(f"{r},{a},{val}\n")
    with open(tmp_path / "coeffs.csv", "w") as fh:
        for j in range(2, 13, 2):
            for a in angles:
                fh.write(f"{j},{a},{(-1.0) ** ((j - 2) // 2)}\n")
    data = load_from_tables(tmp_path / "samples.csv", tmp_path / "coeffs.csv",
                            leading_order=2)
    assert data.leading_order == 2
    # accuracy limited by the sampling grid (cubic radial spline, h = 0.25)
    pts = np.array([[0.5, 0.2], [3.0, -4.0], [11.0, 7.0]])
    assert np.allclose(data(pts), f(pts), rtol=1e-3, atol=1e-6)
    # beyond the sampled radius the evaluator switches to the expansion
    far = np.array([[80.0, 10.0]])
    assert data(far)[0] == pytest.approx(f(far)[0], rel=1e-6)
    om = np.array([[1.0, 0.0]])
    assert data.coefficient_values(4, om)[0] == pytest.approx(-1.0, abs=1e-9)


def test_table_loader_rejects_ragged_grid(tmp_path):
    with open(tmp_path / "bad.csv", "w") as fh:
        fh.write("0.0,0.0,1.0\n1.0,0.5,2.0\n")
    with open(tmp_path / "coeffs.csv", "w") as fh:
        fh.write("2,0.0,1.0\n2,3.14,1.0\n")
    with pytest.raises(ValueError):
        load_from_tables(tmp_path / "bad.csv", tmp_path / "coeffs.csv", 2)
