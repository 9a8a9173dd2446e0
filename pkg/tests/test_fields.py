import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import nested_loop_distance_integral
from terrasim.fields import (
    GridMismatchError,
    ScalarField,
    constant_field,
    distance_weighted_double_integral,
    gaussian_mixture,
    integrate,
)
from terrasim.grid import build_disk_grid

G64 = build_disk_grid(1.0, 64)


def test_constant_one(grid16):
    assert np.all(constant_field(grid16, 1.0).values == 1.0)


def test_constant_integrals():
    assert integrate(G64, constant_field(G64, 0.0)) == 0.0
    assert abs(integrate(G64, constant_field(G64, 2.0)) - 2 * math.pi) < 0.05 * 2 * math.pi
    assert abs(integrate(G64, constant_field(G64, 1.0)) - math.pi) < 0.05 * math.pi


def test_constant_rejects_nan(grid4):
    with pytest.raises(ValueError):
        constant_field(grid4, float("nan"))


def test_single_cell_integral(grid16):
    v = np.zeros(grid16.n_cells)
    v[7] = 3.5
    assert integrate(grid16, ScalarField(grid16, v)) == 3.5 * grid16.h**2


def test_gaussian_peak_on_cell(grid16):
    c = grid16.centers[20]
    f = gaussian_mixture(grid16, [(c, 1.0, 0.2)])
    assert f.values[20] == 1.0
    assert np.all(f.values > 0)


def test_gaussian_empty_and_linear(grid16):
    assert np.all(gaussian_mixture(grid16, []).values == 0)
    one = gaussian_mixture(grid16, [((0.1, -0.2), 0.7, 0.3)])
    two = gaussian_mixture(grid16, [((0.1, -0.2), 0.7, 0.3)] * 2)
    assert np.array_equal(two.values, 2 * one.values)


@pytest.mark.parametrize("bump", [((0, 0), 1.0, 0.0), ((0, 0), 1.0, -1.0), ((0, 0), -1.0, 0.2)])
def test_gaussian_rejects(grid4, bump):
    with pytest.raises(ValueError):
        gaussian_mixture(grid4, [bump])


def test_grid_mismatch(grid4, grid16):
    a, b = constant_field(grid4, 1), constant_field(grid16, 1)
    with pytest.raises(GridMismatchError):
        a + b
    with pytest.raises(GridMismatchError):
        integrate(grid4, b)
    with pytest.raises(GridMismatchError):
        distance_weighted_double_integral(grid4, b, b)


@settings(max_examples=30, deadline=None)
@given(a=st.floats(-5, 5), b=st.floats(-5, 5), seed=st.integers(0, 2**32 - 1))
def test_integrate_linear(grid16, a, b, seed):
    rng = np.random.default_rng(seed)
    f = ScalarField(grid16, rng.normal(size=grid16.n_cells))
    g = ScalarField(grid16, rng.normal(size=grid16.n_cells))
    lhs = integrate(grid16, a * f + b * g)
    rhs = a * integrate(grid16, f) + b * integrate(grid16, g)
    scale = abs(a) * np.abs(f.values).sum() + abs(b) * np.abs(g.values).sum()
    assert abs(lhs - rhs) <= 1e-14 * max(1.0, scale)


def test_double_integral_annihilator(grid16):
    z = constant_field(grid16, 0.0)
    o = constant_field(grid16, 1.0)
    assert distance_weighted_double_integral(grid16, z, o) == 0.0
    assert distance_weighted_double_integral(grid16, o, z) == 0.0


def test_double_integral_single_pair(grid16):
    p, q = 3, 150
    f = np.zeros(grid16.n_cells)
    g = np.zeros(grid16.n_cells)
    f[p], g[q] = 2.0, 0.5
    d = math.dist(grid16.centers[p], grid16.centers[q])
    got = distance_weighted_double_integral(grid16, ScalarField(grid16, f), ScalarField(grid16, g))
    assert got == pytest.approx(d * 2.0 * 0.5 * grid16.h**4, rel=1e-15)


def test_double_integral_rejects_negative(grid16):
    f = constant_field(grid16, -1.0)
    with pytest.raises(ValueError):
        distance_weighted_double_integral(grid16, f, constant_field(grid16, 1.0))


def _sparse(rng, n, density=0.3):
    v = rng.uniform(0, 2, n)
    v[rng.uniform(size=n) > density] = 0.0
    return v


@pytest.mark.parametrize("seed", range(5))
def test_double_integral_brute_force(grid16, seed):
    rng = np.random.default_rng(seed)
    f, g = _sparse(rng, grid16.n_cells), _sparse(rng, grid16.n_cells)
    ref = nested_loop_distance_integral(grid16.centers.tolist(), f.tolist(), g.tolist(), grid16.h)
    got = distance_weighted_double_integral(grid16, ScalarField(grid16, f), ScalarField(grid16, g))
    assert abs(got - ref) <= 1e-12 * ref


def test_double_integral_chunked_matches_single_block(monkeypatch):
    import terrasim.fields as fields

    g = build_disk_grid(1.0, 40)
    rng = np.random.default_rng(11)
    f, w = ScalarField(g, _sparse(rng, g.n_cells, 0.9)), ScalarField(g, _sparse(rng, g.n_cells, 0.9))
    big = distance_weighted_double_integral(g, f, w)
    monkeypatch.setattr(fields, "CHUNK", 37)
    assert distance_weighted_double_integral(g, f, w) == pytest.approx(big, rel=1e-13)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), density=st.floats(0.01, 1.0))
def test_double_integral_symmetric(grid16, seed, density):
    rng = np.random.default_rng(seed)
    f = ScalarField(grid16, _sparse(rng, grid16.n_cells, density))
    g = ScalarField(grid16, _sparse(rng, grid16.n_cells, density))
    assert distance_weighted_double_integral(grid16, f, g) == distance_weighted_double_integral(grid16, g, f)


def test_to_image_roundtrip(grid16):
    f = gaussian_mixture(grid16, [((0.2, 0.1), 1.0, 0.4)])
    img = f.to_image()
    assert np.isnan(img[0, 0])
    assert np.array_equal(img[grid16.ij[:, 1], grid16.ij[:, 0]], f.values)
