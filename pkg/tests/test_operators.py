import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from beurlinglab.experiments import smooth_random_field
from beurlinglab.field import SampledField, lp_norm, make_grid, pairing, sample_analytic
from beurlinglab.operators import (
    AB_power,
    KernelSpec,
    MultiplierSymbol,
    Riesz_power,
    Shifted_AB,
    Wirtinger_d,
    Wirtinger_dbar,
    ab_transform,
    adjoint_check,
    apply_multiplier,
    direct_kernel_apply,
    lp_ratio,
    riesz,
    rotate90,
    wirtinger,
)

G = make_grid(8, 64)
# fine enough that smooth test fields have no Nyquist content
G128 = make_grid(8, 128)
NZ = G.xi != 0


def mean_zero(seed, grid=G):
    r = np.random.default_rng(seed)
    a = r.normal(size=(grid.size,) * 2) + 1j * r.normal(size=(grid.size,) * 2)
    return SampledField(grid, a - a.mean())


def rel(a, b):
    return np.linalg.norm(a - b) / np.linalg.norm(b)


@given(st.integers(-16, 16).filter(bool))
def test_unimodular_symbols(n):
    assert np.allclose(np.abs(AB_power(n)(G.xi[NZ])), 1, atol=1e-14)
    assert np.allclose(np.abs(Riesz_power(n)(G.xi[NZ])), 1, atol=1e-14)


@given(st.integers(-8, 8))
def test_even_riesz_is_ab(m):
    assert np.allclose(AB_power(m)(G.xi), Riesz_power(2 * m)(G.xi), atol=1e-13)


def test_zero_frequency_is_zero():
    for s in (AB_power(3), Riesz_power(-1), Wirtinger_d, Wirtinger_dbar):
        assert s(np.array([0j]))[0] == 0


def test_unknown_tag():
    with pytest.raises(ValueError):
        MultiplierSymbol("laplace")


def test_shifted_pole_value():
    n, th = 4, math.pi / 2
    pole = -n * cmath.exp(1j * th)
    assert Shifted_AB(n, th)(np.array([pole]))[0] == 0


def test_intertwining_symbols():
    lhs = AB_power(1)(G.xi) * Wirtinger_dbar(G.xi)
    assert np.allclose(lhs, Wirtinger_d(G.xi), rtol=0, atol=1e-12)


def test_ab_power_zero_removes_mean(random_field):
    f = random_field(G, 1) + SampledField(G, np.full((64, 64), 2.0))
    out = ab_transform(f, 0)
    assert np.allclose(out.samples, f.samples - f.mean(), atol=1e-13)


@given(st.integers(0, 1000), st.integers(-16, 16))
def test_isometry(seed, n):
    f = mean_zero(seed)
    assert abs(lp_norm(ab_transform(f, n)) / lp_norm(f) - 1) <= 1e-10


@given(st.integers(0, 1000), st.integers(-6, 6), st.integers(-6, 6))
def test_group_law(seed, m, n):
    f = mean_zero(seed)
    a = ab_transform(ab_transform(f, n), m).samples
    assert rel(a, ab_transform(f, m + n).samples) <= 1e-10


def test_inverse_power(random_field):
    f = random_field(G, 2)
    back = ab_transform(ab_transform(f, 1), -1)
    assert rel(back.samples, f.samples - f.mean()) <= 1e-10


def test_T_of_z_gaussian(g256):
    gz = np.exp(-np.pi * np.abs(g256.z) ** 2)
    t = ab_transform(SampledField(g256, g256.z * gz), 1).samples
    assert np.abs(t - np.conj(g256.z) * gz).max() <= 1e-7


def test_dbar_gaussian(g256):
    d = wirtinger(sample_analytic("gaussian", g256), "dbar")
    gz = np.exp(-np.pi * np.abs(g256.z) ** 2)
    assert np.abs(d.samples + np.pi * g256.z * gz).max() <= 1e-8


def test_d_of_z_on_bump():
    # exact: d(z b) = b + r b'/2 and dbar(z b) = z^2 b'/(2r) for radial b
    g = make_grid(16, 256)
    z = g.z
    r = np.abs(z)
    b = np.exp(-((r / 3) ** 8))
    db = -8 / 3 * (r / 3) ** 7 * b
    f = SampledField(g, z * b)
    assert np.abs(wirtinger(f, "d").samples - (b + r * db / 2)).max() <= 1e-6
    assert np.abs(wirtinger(f, "dbar").samples - z**2 * db / (2 * r)).max() <= 1e-6
    inner = r < 0.5
    assert np.abs(wirtinger(f, "d").samples[inner] - 1).max() <= 1e-5


@given(st.integers(0, 1000))
def test_intertwining_fields(seed):
    f = mean_zero(seed)
    assert rel(ab_transform(wirtinger(f, "dbar"), 1).samples, wirtinger(f, "d").samples) <= 1e-12


def test_laplacian_symbol(random_field):
    f = random_field(G, 5)
    lhs = wirtinger(wirtinger(f, "dbar"), "d")
    rhs = apply_multiplier(f, MultiplierSymbol("ab", 0))  # mean removal only, then scale spectrum
    from beurlinglab.field import SpectralField, from_spectrum, to_spectrum

    F = to_spectrum(f)
    lap = from_spectrum(SpectralField(G, -np.pi**2 * np.abs(F.xi) ** 2 * F.coefficients))
    assert rel(lhs.samples, lap.samples) <= 1e-12
    assert rhs.grid == G


def test_wirtinger_order():
    with pytest.raises(ValueError):
        wirtinger(mean_zero(0), "d", 0)
    f = mean_zero(1)
    assert rel(wirtinger(f, "d", 2).samples, wirtinger(wirtinger(f, "d"), "d").samples) <= 1e-12


@pytest.mark.parametrize("q", [1, 2, 3])
def test_riesz_rotation_covariance(q, random_field):
    f = random_field(G128, 7)
    psi = q * math.pi / 2
    lhs = rotate90(riesz(rotate90(f, q)), -q)
    assert rel(lhs.samples, cmath.exp(-1j * psi) * riesz(f).samples) <= 1e-10


def test_rotate90_moves_points():
    z = sample_analytic("identity", G)
    # (U f)(x) = f(O_{-pi/2} x) = -i x for f = z
    assert np.allclose(rotate90(z, 1).samples, -1j * G.z, atol=1e-13)
    assert np.array_equal(rotate90(z, 4).samples, z.samples)


def test_omega_value():
    assert KernelSpec(2, 1.0).omega(1 + 0j) == pytest.approx(-1 / math.pi)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_omega_circle_mean(k):
    zeta = np.exp(2j * np.pi * np.arange(360) / 360)
    assert abs(KernelSpec(k, 1.0).omega(zeta).mean()) <= 1e-12


def test_kernelspec_checks():
    with pytest.raises(ValueError):
        KernelSpec(0, 1.0)
    with pytest.raises(ValueError):
        KernelSpec(2, 0.0)
    with pytest.raises(ValueError):
        direct_kernel_apply(mean_zero(0), KernelSpec(2, G.spacing))


def test_direct_kernel_against_spectral():
    g = make_grid(8, 128)
    u = sample_analytic("gaussian_dx", g)
    d = direct_kernel_apply(u, KernelSpec(2, 2 * g.spacing))
    assert rel(d.samples, ab_transform(u, 1).samples) <= 0.05


@given(st.integers(0, 1000), st.integers(0, 1000))
def test_adjoint(s1, s2):
    # smooth fields: white noise puts mass on the Nyquist lines, where the
    # lattice is not symmetric under xi -> -xi
    f = smooth_random_field(G128, np.random.default_rng(s1))
    h = smooth_random_field(G128, np.random.default_rng(s2))
    assert adjoint_check(f, h) <= 1e-10 * lp_norm(f) * lp_norm(h)


def test_adjoint_trivial_cases():
    f = mean_zero(3)
    assert adjoint_check(f, SampledField(G, np.zeros((64, 64)))) == 0
    real = SampledField(G, f.samples.real)
    a = pairing(ab_transform(real, 1), real)
    b = pairing(real, ab_transform(real, -1))
    assert a == pytest.approx(b, abs=1e-12)


def test_lp_ratio_l2_is_one():
    assert lp_ratio(mean_zero(4), AB_power(1), 2) == pytest.approx(1, abs=1e-12)
