import numpy as np
import pytest

from hsusy.grid import (Grid, GridFunction, cumulative_integral, derivative, inner, read_csv,
                        second_difference, trapezoid_norm, write_csv)


def test_grid_spacing_and_validation():
    g = Grid(-12, 12, 4801)
    assert g.h == pytest.approx(0.005)
    assert Grid.from_spacing(-12, 12, 0.005) == g
    assert g.x[0] == -12 and g.x[-1] == 12
    with pytest.raises(ValueError):
        Grid(1, 0, 10)
    with pytest.raises(ValueError):
        Grid(0, 1, 2)


def test_grid_arrays_are_read_only():
    g = Grid(0, 1, 11)
    with pytest.raises(ValueError):
        g.x[0] = 3
    f = GridFunction(g, np.zeros(11))
    with pytest.raises(ValueError):
        f.values[0] = 1


def test_grid_function_rejects_bad_samples():
    g = Grid(0, 1, 11)
    with pytest.raises(ValueError):
        GridFunction(g, np.zeros(10))
    with pytest.raises(ValueError):
        GridFunction(g, np.full(11, np.nan))


def test_interior_mask():
    g = Grid(-10, 10, 2001)
    m = g.interior(0.9)
    assert g.x[m].min() == pytest.approx(-9.0)
    assert g.x[m].max() == pytest.approx(9.0)


def test_derivative_order():
    errs = []
    for n in (201, 401):
        g = Grid(0, 2, n)
        errs.append(np.max(np.abs(derivative(np.sin(g.x), g.h)[2:-2] - np.cos(g.x[2:-2]))))
    assert errs[0] / errs[1] > 14  # fourth order: ratio 16


def test_second_difference():
    g = Grid(-1, 1, 101)
    d2 = second_difference(g.x**2, g.h)
    assert np.isnan(d2[0]) and np.isnan(d2[-1])
    assert np.allclose(d2[1:-1], 2.0)


def test_cumulative_integral_reference_point():
    g = Grid(-3, 3, 601)
    cum = cumulative_integral(np.exp(-g.x**2), g, 0.0)
    assert cum[g.index_of(0.0)] == pytest.approx(0.0, abs=1e-12)
    assert cum[-1] - cum[0] == pytest.approx(np.sqrt(np.pi) * 0.9999779095, rel=1e-8)


def test_norm_and_inner():
    g = Grid(-10, 10, 4001)
    f = np.pi**-0.25 * np.exp(-g.x**2 / 2)
    assert trapezoid_norm(f, g.h) == pytest.approx(1.0, abs=1e-12)
    assert abs(inner(f, 1j * f, g.h) - 1j) < 1e-12


def test_csv_round_trip(tmp_path):
    g = Grid(0, 1, 5)
    write_csv(tmp_path / "r.csv", g, np.arange(5.0), {"eps": -1.2})
    meta, x, v = read_csv(tmp_path / "r.csv")
    assert meta["eps"] == "-1.2" and meta["n"] == "5"
    assert np.array_equal(x, g.x) and np.array_equal(v, np.arange(5.0))
    write_csv(tmp_path / "c.csv", g, np.arange(5.0) * (1 + 2j))
    _, _, vc = read_csv(tmp_path / "c.csv")
    assert np.array_equal(vc, np.arange(5.0) * (1 + 2j))
