"""Sampled complex fields on a centered square grid.

The plane is approximated by the torus [-L/2, L/2)^2 sampled at cell centres,
so no sample ever sits on the origin. The discrete Fourier transform is scaled
by the cell area and phase-shifted to the cell-centre lattice, so that
``to_spectrum`` approximates

    f^(xi) = integral f(x) exp(-2 pi i <x, xi>) dx

on the frequency lattice (m1, m2) / L.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class GridSpec:
    extent: float
    size: int

    def __post_init__(self):
        if not self.extent > 0:
            raise ValueError(f"extent must be positive, got {self.extent}")
        n = self.size
        if n < 8 or n & (n - 1):
            raise ValueError(f"size must be a power of two >= 8, got {n}")

    @property
    def spacing(self) -> float:
        return self.extent / self.size

    @property
    def cell_area(self) -> float:
        return self.spacing**2

    @cached_property
    def axis(self) -> np.ndarray:
        return (np.arange(self.size) + 0.5) * self.spacing - self.extent / 2

    @cached_property
    def z(self) -> np.ndarray:
        """Complex sample positions, indexed [i, j] -> x_i + i y_j."""
        x = self.axis
        return x[:, None] + 1j * x[None, :]

    @cached_property
    def xi(self) -> np.ndarray:
        """Complex frequencies xi1 + i xi2 in FFT order."""
        k = np.fft.fftfreq(self.size, d=self.spacing)
        return k[:, None] + 1j * k[None, :]

    @cached_property
    def _phase(self) -> np.ndarray:
        # shift from index origin to the first cell centre
        x0 = self.axis[0]
        k = np.fft.fftfreq(self.size, d=self.spacing)
        p = np.exp(-2j * np.pi * x0 * k)
        return p[:, None] * p[None, :]


def make_grid(extent: float, size: int) -> GridSpec:
    return GridSpec(float(extent), int(size))


def _check_finite(a: np.ndarray, what: str):
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{what} contains non-finite values")


@dataclass(frozen=True, eq=False)
class SampledField:
    grid: GridSpec
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        n = self.grid.size
        if s.shape != (n, n):
            raise ValueError(f"expected {(n, n)} samples, got {s.shape}")
        _check_finite(s, "field")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    def like(self, samples) -> "SampledField":
        return SampledField(self.grid, samples)

    def __add__(self, other):
        _same_grid(self, other)
        return self.like(self.samples + other.samples)

    def __sub__(self, other):
        _same_grid(self, other)
        return self.like(self.samples - other.samples)

    def __mul__(self, c):
        if isinstance(c, SampledField):
            _same_grid(self, c)
            return self.like(self.samples * c.samples)
        return self.like(self.samples * c)

    __rmul__ = __mul__

    def conj(self) -> "SampledField":
        return self.like(np.conj(self.samples))

    def mean(self) -> complex:
        return complex(self.samples.mean())


@dataclass(frozen=True, eq=False)
class SpectralField:
    grid: GridSpec
    coefficients: np.ndarray

    @property
    def xi(self) -> np.ndarray:
        return self.grid.xi

    @property
    def cell_area(self) -> float:
        return 1.0 / self.grid.extent**2


@dataclass(frozen=True, eq=False)
class WeightField:
    grid: GridSpec
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        n = self.grid.size
        if s.shape != (n, n):
            raise ValueError(f"expected {(n, n)} samples, got {s.shape}")
        _check_finite(s, "weight")
        if np.any(s <= 0):
            raise ValueError("weights must be strictly positive")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    def inverse(self) -> "WeightField":
        return WeightField(self.grid, 1.0 / self.samples)


def _same_grid(a, b):
    if a.grid != b.grid:
        raise ValueError("fields live on different grids")


# --- analytic families -----------------------------------------------------


def lehto_profile(n: int, x: np.ndarray) -> np.ndarray:
    """Radial cut-off g_n: 1 on [0, 1], exp(-(x-1)^n) beyond."""
    x = np.asarray(x, dtype=float)
    return np.where(x <= 1, 1.0, np.exp(-np.maximum(x - 1, 0.0) ** n))


def _gaussian(z, **_):
    return np.exp(-np.pi * np.abs(z) ** 2)


def _gaussian_dx(z, **_):
    return -2 * np.pi * z.real * np.exp(-np.pi * np.abs(z) ** 2)


def _lehto(z, n, alpha, p=None):
    if n < 1:
        raise ValueError("lehto family needs n >= 1")
    if p is not None and not (p > 2 and alpha * p < 1):
        raise ValueError(f"lehto family needs p > 2 and alpha < 1/p (alpha={alpha}, p={p})")
    r = np.abs(z)
    return z**n * r ** (-2 * alpha) * lehto_profile(n, r)


def _quadrant_power(z, alpha):
    if not -2 < alpha < 2:
        raise ValueError("quadrant_power needs |alpha| < 2")
    r = np.abs(z)
    inside = (z.real > 0) & (z.imag > 0) & (r < 1)
    return np.where(inside, r ** (-alpha), 0.0)


FAMILIES: dict[str, Callable] = {
    "gaussian": _gaussian,
    "gaussian_dx": _gaussian_dx,
    "lehto": _lehto,
    "quadrant_power": _quadrant_power,
    "identity": lambda z: z,
    "constant": lambda z, value=1.0: np.full(z.shape, value, dtype=complex),
}


def sample_analytic(family, grid: GridSpec, **params) -> SampledField:
    """Evaluate a named family (or any callable of the complex positions)."""
    if callable(family):
        fn = family
    else:
        try:
            fn = FAMILIES[family]
        except KeyError:
            raise ValueError(f"unknown family {family!r}") from None
    return SampledField(grid, fn(grid.z, **params))


# --- quadrature ------------------------------------------------------------


def lp_norm(f: SampledField, p: float = 2.0) -> float:
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    a = np.abs(f.samples)
    if np.isinf(p):
        return float(a.max())
    return float((np.sum(a**p) * f.grid.cell_area) ** (1 / p))


def weighted_lp_norm(f: SampledField, w: WeightField, p: float = 2.0) -> float:
    _same_grid(f, w)
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    return float((np.sum(np.abs(f.samples) ** p * w.samples) * f.grid.cell_area) ** (1 / p))


def pairing(f, g) -> complex:
    """<f, g> = integral of f * conj(g); works for spatial or spectral fields."""
    _same_grid(f, g)
    if isinstance(f, SpectralField):
        return complex(np.vdot(g.coefficients, f.coefficients) * f.cell_area)
    return complex(np.vdot(g.samples, f.samples) * f.grid.cell_area)


def to_spectrum(f: SampledField) -> SpectralField:
    g = f.grid
    return SpectralField(g, np.fft.fft2(f.samples) * g._phase * g.cell_area)


def from_spectrum(F: SpectralField) -> SampledField:
    g = F.grid
    return SampledField(g, np.fft.ifft2(F.coefficients / g._phase) / g.cell_area)


def bilinear_at(f: SampledField, point: complex = 0j) -> complex:
    """Bilinear interpolation of the samples at an arbitrary point."""
    g = f.grid
    u = (point.real + g.extent / 2) / g.spacing - 0.5
    v = (point.imag + g.extent / 2) / g.spacing - 0.5
    i0, j0 = int(np.floor(u)), int(np.floor(v))
    if not (0 <= i0 < g.size - 1 and 0 <= j0 < g.size - 1):
        raise ValueError("interpolation point outside the sampled region")
    s, t = u - i0, v - j0
    a = f.samples
    return complex(
        (1 - s) * (1 - t) * a[i0, j0]
        + s * (1 - t) * a[i0 + 1, j0]
        + (1 - s) * t * a[i0, j0 + 1]
        + s * t * a[i0 + 1, j0 + 1]
    )


def subsampled_cell_means(fn: Callable, grid: GridSpec, mask: np.ndarray, sub: int = 4) -> np.ndarray:
    """Cell averages of ``fn`` on the cells selected by ``mask`` (sub x sub midpoints)."""
    h = grid.spacing
    offs = ((np.arange(sub) + 0.5) / sub - 0.5) * h
    d = offs[:, None] + 1j * offs[None, :]
    centres = grid.z[mask]
    vals = fn(centres[:, None, None] + d[None, :, :])
    return vals.reshape(len(centres), -1).mean(axis=1)
