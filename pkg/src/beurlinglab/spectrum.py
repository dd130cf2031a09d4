"""Approximate eigenvectors of T for points of the unit circle.

S_n multiplies by exp(2 pi i n Re(e^{-i theta} z)), which translates the
spectrum by the frequency vector n e^{i theta}; on a band-limited field,
(T - e^{-2 i theta}) S_n f is of size O(1/n).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .field import GridSpec, SampledField, SpectralField, from_spectrum, lp_norm, make_grid, to_spectrum
from .operators import Shifted_AB, ab_transform, multiply_spectrum, AB_power

BUMP_RADIUS = 0.9


def _bump(t):
    t = np.asarray(t, dtype=float)
    inside = t < 1
    out = np.zeros_like(t)
    out[inside] = np.exp(-1 / (1 - t[inside] ** 2))
    return out


def _from_symbol(grid: GridSpec, F: np.ndarray) -> SampledField:
    f = from_spectrum(SpectralField(grid, F))
    return f * (1 / lp_norm(f, 2))


def bandlimited_bump(grid: GridSpec, radius: float = BUMP_RADIUS) -> SampledField:
    """Unit-norm field whose spectrum is a smooth bump on |xi| < radius."""
    if grid.extent < 8:
        raise ValueError("extent must be at least 8 to resolve the unit frequency disc")
    if grid.size / (2 * grid.extent) <= radius:
        raise ValueError("grid bandwidth does not contain the bump")
    return _from_symbol(grid, _bump(np.abs(grid.xi) / radius))


def sector_probe(grid: GridSpec, lo_deg: float = 10.0, hi_deg: float = 35.0, r_lo: float = 0.2, r_hi: float = BUMP_RADIUS) -> SampledField:
    """Unit-norm field with spectrum smooth inside an annular sector of angles [lo, hi] degrees."""
    xi = grid.xi
    ang = np.degrees(np.angle(xi))
    mid, half = 0.5 * (lo_deg + hi_deg), 0.5 * (hi_deg - lo_deg)
    rm, rh = 0.5 * (r_lo + r_hi), 0.5 * (r_hi - r_lo)
    F = _bump(np.abs(ang - mid) / half) * _bump(np.abs(np.abs(xi) - rm) / rh)
    if not np.any(F):
        raise ValueError("no lattice frequency inside the sector")
    return _from_symbol(grid, F)


def is_lattice_exact(grid: GridSpec, theta: float, n: float) -> bool:
    v = n * np.exp(1j * theta) * grid.extent
    return abs(v.real - round(v.real)) < 1e-9 and abs(v.imag - round(v.imag)) < 1e-9


def modulate(f: SampledField, theta: float, n: float) -> SampledField:
    """Pointwise product with exp(2 pi i n Re(e^{-i theta} z))."""
    if n and not is_lattice_exact(f.grid, theta, n):
        warnings.warn("frequency shift is off the lattice; the spectrum is only approximately translated", stacklevel=2)
    z = f.grid.z
    return f.like(f.samples * np.exp(2j * np.pi * n * (np.exp(-1j * theta) * z).real))


def shifted_multiplier_check(f: SampledField, theta: float, n: int) -> float:
    """Relative gap between DFT(S_n^{-1} T S_n f) and Phi(xi/n + e^{i theta}) f^."""
    if not is_lattice_exact(f.grid, theta, n):
        raise ValueError("(theta, n) must shift by a lattice vector")
    lhs = to_spectrum(modulate(ab_transform(modulate(f, theta, n), 1), theta, -n)).coefficients
    rhs = multiply_spectrum(to_spectrum(f), Shifted_AB(n, theta)).coefficients
    return float(np.linalg.norm(lhs - rhs) / np.linalg.norm(rhs))


@dataclass(frozen=True)
class SpectralProbe:
    theta: float
    n: int
    residual: float
    size: int

    @property
    def lam(self) -> complex:
        return complex(np.exp(-2j * self.theta))


def probe_grid(n: int, extent: float = 8.0, radius: float = BUMP_RADIUS) -> GridSpec:
    """Smallest power-of-two grid whose band holds the bump shifted by n."""
    N = 16
    while (N / 2 - 1) / extent < n + radius:
        N *= 2
    return make_grid(extent, N)


def spectral_residual(theta: float, n: int, extent: float = 8.0, size: int | None = None) -> SpectralProbe:
    grid = make_grid(extent, size) if size else probe_grid(n, extent)
    if not is_lattice_exact(grid, theta, n):
        raise ValueError("(theta, n) must shift by a lattice vector")
    if (grid.size / 2 - 1) / extent < n + BUMP_RADIUS:
        raise ValueError("grid band too narrow for this shift")
    u = modulate(bandlimited_bump(grid), theta, n)
    lam = np.exp(-2j * theta)
    r = lp_norm(ab_transform(u, 1) - u * lam, 2)
    return SpectralProbe(theta, n, r, grid.size)


def residual_slope(theta: float = 0.0, ns=(4, 8, 16, 32, 64), extent: float = 8.0) -> float:
    res = [spectral_residual(theta, n, extent).residual for n in ns]
    return float(np.polyfit(np.log(ns), np.log(res), 1)[0])


def multiplier_floor(f: SampledField, lam: complex, tol: float = 1e-14) -> float:
    """min |xi_bar/xi - lam| over the spectral support of f."""
    F = to_spectrum(f).coefficients
    xi = f.grid.xi
    supp = np.abs(F) > tol * np.abs(F).max()
    return float(np.min(np.abs(AB_power(1)(xi[supp]) - lam)))


def eigen_gap(f: SampledField, lam: complex) -> float:
    """||(T - lam) f||_2 / ||f||_2."""
    return lp_norm(ab_transform(f, 1) - f * lam, 2) / lp_norm(f, 2)
