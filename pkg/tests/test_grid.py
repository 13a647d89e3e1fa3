import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxop.grid import (
    GridFunction,
    VectorField,
    forward_transform,
    inverse_transform,
    make_grid,
    node_coordinates,
    sample,
)


def test_make_grid_spacing():
    assert make_grid(1, 1.0, 4).h == 0.5
    assert make_grid(3, 4.0, 64).h == 0.125


@pytest.mark.parametrize(
    "d,L,N", [(2, 1.0, 5), (2, 1.0, 2), (1, 0.0, 8), (1, -1.0, 8), (0, 1.0, 8)]
)
def test_make_grid_rejects(d, L, N):
    with pytest.raises(ValueError):
        make_grid(d, L, N)


def test_sample_node_formula():
    spec = make_grid(1, 1.0, 4)
    f = sample(spec, lambda p: p[..., 0])
    np.testing.assert_allclose(f.values, [-0.75, -0.25, 0.25, 0.75])


def test_sample_constant_and_symmetry():
    spec = make_grid(2, 1.5, 8)
    one = sample(spec, lambda p: np.ones(p.shape[:-1]))
    assert np.all(one.values == 1.0)
    g = sample(spec, lambda p: np.exp(-np.sum(p**2, -1)))
    np.testing.assert_array_equal(g.values, g.values[::-1, ::-1])


def test_sample_is_deterministic():
    spec = make_grid(2, 1.0, 8)
    a = sample(spec, lambda p: np.sin(3 * p[..., 0]) + p[..., 1] ** 2)
    b = sample(spec, lambda p: np.sin(3 * p[..., 0]) + p[..., 1] ** 2)
    np.testing.assert_array_equal(a.values, b.values)


def test_sample_rejects_nonfinite():
    spec = make_grid(1, 1.0, 4)
    with pytest.raises(ValueError):
        sample(spec, lambda p: np.where(p[..., 0] == 0.25, np.inf, 1.0))
    # cell-centered nodes dodge the singular radius |x| = 0
    assert np.all(np.isfinite(sample(spec, lambda p: 1.0 / p[..., 0]).values))


def test_values_are_read_only():
    spec = make_grid(1, 1.0, 4)
    f = sample(spec, lambda p: p[..., 0])
    with pytest.raises(ValueError):
        f.values[0] = 3.0


def test_delta_has_flat_modulus():
    spec = make_grid(1, 1.0, 16)
    vals = np.zeros(spec.shape)
    vals[7] = 1.0
    fhat = forward_transform(GridFunction(spec, vals))
    mods = np.abs(fhat.values)
    np.testing.assert_allclose(mods, mods[0])


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.sampled_from([4, 8, 16]), st.integers(0, 2**31 - 1))
def test_roundtrip_and_plancherel(d, N, seed):
    if N**d > 5000:
        N = 8
    spec = make_grid(d, 1.7, N)
    vals = np.random.default_rng(seed).standard_normal(spec.shape)
    f = GridFunction(spec, vals)
    fhat = forward_transform(f)
    back = inverse_transform(fhat)
    scale = np.abs(vals).max()
    assert np.abs(back.values - vals).max() <= 1e-12 * scale
    phys = np.sum(np.abs(vals) ** 2) * spec.cell_volume
    freq = np.sum(np.abs(fhat.values) ** 2) * spec.freq_step**spec.d
    assert abs(phys - freq) <= 1e-12 * phys


def test_domain_tag_mismatch():
    spec = make_grid(1, 1.0, 8)
    f = sample(spec, lambda p: p[..., 0])
    with pytest.raises(ValueError):
        inverse_transform(f)
    with pytest.raises(ValueError):
        forward_transform(forward_transform(f))


def test_vector_field_validation():
    spec = make_grid(1, 1.0, 8)
    other = make_grid(1, 2.0, 8)
    f = sample(spec, lambda p: p[..., 0])
    g = sample(other, lambda p: p[..., 0])
    with pytest.raises(ValueError):
        VectorField(())
    with pytest.raises(ValueError):
        VectorField((f, g))
    assert len(VectorField((f, f))) == 2


def test_node_coordinates_shape():
    spec = make_grid(3, 1.0, 4)
    assert node_coordinates(spec).shape == (4, 4, 4, 3)
