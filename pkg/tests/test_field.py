import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from beurlinglab.field import (
    SampledField,
    WeightField,
    bilinear_at,
    from_spectrum,
    lp_norm,
    make_grid,
    pairing,
    sample_analytic,
    subsampled_cell_means,
    to_spectrum,
    weighted_lp_norm,
)


def test_cell_area():
    assert make_grid(8, 64).cell_area == 0.015625


@pytest.mark.parametrize("args", [(8, 63), (8, 4), (0, 64), (-1, 64)])
def test_make_grid_rejects(args):
    with pytest.raises(ValueError):
        make_grid(*args)


def test_half_cell_offset():
    g = make_grid(16, 256)
    r = np.abs(g.z)
    assert r.min() >= 1 / 32
    assert r.min() == pytest.approx(g.spacing / math.sqrt(2), rel=1e-14)


def test_fields_are_immutable(g64):
    f = sample_analytic("gaussian", g64)
    with pytest.raises(ValueError):
        f.samples[0, 0] = 1


def test_field_shape_and_finite(g64):
    with pytest.raises(ValueError):
        SampledField(g64, np.zeros((4, 4)))
    a = np.zeros((64, 64))
    a[0, 0] = np.nan
    with pytest.raises(ValueError):
        SampledField(g64, a)


def test_grid_mismatch(g64):
    other = make_grid(4, 64)
    with pytest.raises(ValueError):
        pairing(sample_analytic("gaussian", g64), sample_analytic("gaussian", other))


def test_constant_family(g64):
    assert np.all(sample_analytic("constant", g64).samples == 1)


def test_lehto_alpha_zero_is_identity_in_disc(g64):
    f = sample_analytic("lehto", g64, n=1, alpha=0.0)
    inside = np.abs(g64.z) < 1
    assert np.allclose(f.samples[inside], g64.z[inside], atol=0, rtol=1e-15)


def test_family_parameter_checks(g64):
    with pytest.raises(ValueError):
        sample_analytic("lehto", g64, n=1, alpha=0.3, p=4)
    with pytest.raises(ValueError):
        sample_analytic("quadrant_power", g64, alpha=2.5)
    with pytest.raises(ValueError):
        sample_analytic("no_such_family", g64)


def test_gaussian_mass(g256):
    f = sample_analytic("gaussian", g256)
    assert abs(f.samples.sum().real * g256.cell_area - 1) <= 1e-12


def test_gaussian_dx_norm(g256):
    assert abs(lp_norm(sample_analytic("gaussian_dx", g256)) ** 2 - math.pi / 2) <= 1e-6


def test_gaussian_norm(g256):
    assert abs(lp_norm(sample_analytic("gaussian", g256)) - 2**-0.5) <= 1e-6


def test_constant_l1_area():
    g = make_grid(2, 16)
    assert lp_norm(sample_analytic("constant", g), 1) == pytest.approx(4, rel=1e-14)


def test_lp_norm_rejects_small_p(g64):
    with pytest.raises(ValueError):
        lp_norm(sample_analytic("gaussian", g64), 0.5)


def test_weighted_norm_unit_weight(g64):
    f = sample_analytic("gaussian_dx", g64)
    w = WeightField(g64, np.ones((64, 64)))
    assert weighted_lp_norm(f, w, 3) == pytest.approx(lp_norm(f, 3), rel=1e-14)


def test_weighted_norm_homogeneous_in_weight(g64):
    f = sample_analytic("gaussian_dx", g64)
    w = WeightField(g64, 1 + np.abs(g64.z))
    p = 3.0
    w2 = WeightField(g64, 2 * w.samples)
    assert weighted_lp_norm(f, w2, p) == pytest.approx(2 ** (1 / p) * weighted_lp_norm(f, w, p), rel=1e-14)


def test_quadrant_power_weighted_norm():
    g = make_grid(4, 512)
    f = sample_analytic("quadrant_power", g, alpha=1.0)
    w = WeightField(g, np.abs(g.z))
    assert weighted_lp_norm(f, w) ** 2 == pytest.approx(math.pi / 2, rel=0.01)


def test_weight_positivity(g64):
    with pytest.raises(ValueError):
        WeightField(g64, np.zeros((64, 64)))
    w = WeightField(g64, 2 * np.ones((64, 64)))
    assert np.all(w.inverse().samples == 0.5)


def test_pairing_self_and_odd(g256):
    f = sample_analytic("gaussian_dx", g256)
    assert pairing(f, f).real == pytest.approx(lp_norm(f) ** 2, rel=1e-14)
    assert abs(pairing(sample_analytic("gaussian", g256), f)) <= 1e-12


def test_round_trip(g64, random_field):
    f = random_field(g64, 3)
    back = from_spectrum(to_spectrum(f))
    assert np.linalg.norm(back.samples - f.samples) <= 1e-12 * np.linalg.norm(f.samples)


def test_gaussian_self_transform():
    g = make_grid(16, 256)
    F = to_spectrum(sample_analytic("gaussian", g))
    assert np.max(np.abs(F.coefficients - np.exp(-np.pi * np.abs(F.xi) ** 2))) <= 1e-8


def test_constant_spectrum_at_zero(g64):
    F = to_spectrum(sample_analytic("constant", g64)).coefficients
    assert abs(F[0, 0]) == pytest.approx(g64.extent**2, rel=1e-14)
    F[0, 0] = 0
    assert np.abs(F).max() <= 1e-12


@given(st.integers(0, 10_000), st.integers(0, 10_000))
def test_parseval(s1, s2):
    g = make_grid(8, 32)
    r1, r2 = np.random.default_rng(s1), np.random.default_rng(s2)
    f = SampledField(g, r1.normal(size=(32, 32)) + 1j * r1.normal(size=(32, 32)))
    h = SampledField(g, r2.normal(size=(32, 32)) + 1j * r2.normal(size=(32, 32)))
    gap = abs(pairing(f, h) - pairing(to_spectrum(f), to_spectrum(h)))
    assert gap <= 1e-10 * lp_norm(f) * lp_norm(h)


# |c|^p must stay clear of the subnormal range
@given(
    st.floats(-30, 3),
    st.floats(0, 2 * math.pi),
    st.sampled_from([1.0, 1.5, 2.0, 4.0, math.inf]),
)
def test_lp_homogeneous(logc, phase, p):
    c = 10.0**logc * complex(math.cos(phase), math.sin(phase))
    g = make_grid(8, 32)
    f = SampledField(g, np.exp(-np.abs(g.z) ** 2) * (1 + g.z))
    assert lp_norm(f * c, p) == pytest.approx(abs(c) * lp_norm(f, p), rel=1e-12)


def test_lp_zero_scale():
    g = make_grid(8, 32)
    f = SampledField(g, np.exp(-np.abs(g.z) ** 2))
    assert lp_norm(f * 0, 2) == 0


def test_bilinear_at_linear_field(g64):
    f = sample_analytic("identity", g64)
    for pt in (0j, 0.3 - 0.7j, 1.23 + 2.5j):
        assert bilinear_at(f, pt) == pytest.approx(pt, abs=1e-13)
    with pytest.raises(ValueError):
        bilinear_at(f, 10 + 0j)


def test_subsampled_cell_means_exact_for_linear(g64):
    mask = np.abs(g64.z) < 0.5
    m = subsampled_cell_means(lambda w: w, g64, mask, sub=4)
    assert np.allclose(m, g64.z[mask], atol=1e-14)
