"""Planar Cauchy transform, Neumann-series Beltrami solver and area distortion."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .field import GridSpec, SampledField, SpectralField, bilinear_at, from_spectrum, to_spectrum
from .operators import Wirtinger_d, Wirtinger_dbar, ab_transform


class ConvergenceError(RuntimeError):
    def __init__(self, iterations: int, residual: float):
        super().__init__(f"Neumann iteration stalled after {iterations} steps, residual {residual:.3e}")
        self.iterations = iterations
        self.residual = residual


@dataclass(frozen=True)
class BeltramiCoefficient:
    field: SampledField
    support_radius: float

    def __post_init__(self):
        outside = np.abs(self.field.grid.z) > self.support_radius
        if np.any(self.field.samples[outside] != 0):
            raise ValueError("coefficient does not vanish outside its support radius")
        if not self.k < 1:
            raise ValueError(f"sup |mu| = {self.k} is not below 1")

    @property
    def k(self) -> float:
        return float(np.abs(self.field.samples).max())

    @property
    def grid(self) -> GridSpec:
        return self.field.grid


@dataclass(frozen=True)
class NormalSolution:
    displacement: SampledField
    h: SampledField
    iterations: int
    residual: float

    @property
    def f(self) -> np.ndarray:
        return self.displacement.grid.z + self.displacement.samples


def _l2(a) -> float:
    return float(np.linalg.norm(a))


def cauchy_P(h: SampledField) -> SampledField:
    """Solve dbar g = h spectrally (zero mode dropped), then pin g(0) = 0."""
    H = to_spectrum(h)
    sym = Wirtinger_dbar(H.xi)
    G = np.zeros_like(H.coefficients)
    nz = sym != 0
    G[nz] = H.coefficients[nz] / sym[nz]
    g = from_spectrum(SpectralField(h.grid, G))
    return g.like(g.samples - bilinear_at(g, 0j))


def neumann_solve(mu: BeltramiCoefficient, tol: float = 1e-10, maxit: int = 500) -> tuple[SampledField, int, float]:
    """Iterate h <- mu + mu T h from h = 0. Returns (h, iterations, relative residual)."""
    m = mu.field.samples
    norm_mu = _l2(m)
    h = mu.field.like(np.zeros_like(m))
    if norm_mu == 0:
        return h, 1, 0.0
    res = math.inf
    Th = h.samples
    for it in range(1, maxit + 1):
        h = h.like(m + m * Th)
        Th = ab_transform(h, 1).samples
        res = _l2(h.samples - m - m * Th) / norm_mu
        if res <= tol:
            return h, it, res
    raise ConvergenceError(maxit, res)


def normal_solution(mu: BeltramiCoefficient, tol: float = 1e-10, maxit: int = 500) -> NormalSolution:
    h, it, res = neumann_solve(mu, tol, maxit)
    return NormalSolution(cauchy_P(h), h, it, res)


def _derivatives(g: SampledField) -> tuple[np.ndarray, np.ndarray]:
    """(f_z, f_zbar) for f = z + g."""
    G = to_spectrum(g)
    fz = 1 + from_spectrum(SpectralField(g.grid, Wirtinger_d(G.xi) * G.coefficients)).samples
    fzb = from_spectrum(SpectralField(g.grid, Wirtinger_dbar(G.xi) * G.coefficients)).samples
    return fz, fzb


def beltrami_residual(g: SampledField, mu: BeltramiCoefficient) -> float:
    fz, fzb = _derivatives(g)
    return _l2(fzb - mu.field.samples * fz) / _l2(fz)


def distortion_ratio(g: SampledField) -> np.ndarray:
    fz, fzb = _derivatives(g)
    return np.abs(fzb) / np.abs(fz)


def jacobian(g: SampledField) -> SampledField:
    fz, fzb = _derivatives(g)
    return g.like(np.abs(fz) ** 2 - np.abs(fzb) ** 2)


def area_image(g: SampledField, r: float) -> float:
    grid = g.grid
    if not r < grid.extent / 2:
        raise ValueError("radius must stay inside the grid")
    J = jacobian(g).samples.real
    return float(J[np.abs(grid.z) < r].sum() * grid.cell_area)


def area_exponent(g: SampledField, radii) -> float:
    """Slope of log |f(B(0, r))| against log r."""
    radii = np.asarray(radii, dtype=float)
    areas = np.array([area_image(g, r) for r in radii])
    return float(np.polyfit(np.log(radii), np.log(areas), 1)[0])


# --- radial stretch --------------------------------------------------------


def stretch_k(K: float) -> float:
    return (K - 1) / (K + 1)


def radial_stretch_mu(K: float, grid: GridSpec) -> BeltramiCoefficient:
    if not K > 1:
        raise ValueError("radial stretch needs K > 1")
    z = grid.z
    mu = np.where(np.abs(z) <= 1, -stretch_k(K) * z / np.conj(z), 0)
    return BeltramiCoefficient(SampledField(grid, mu), 1.0)


def stretch_map(z, K: float):
    """z |z|^{1/K - 1} inside the unit disc, identity outside."""
    r = np.abs(z)
    return np.where(r <= 1, z * r ** (1 / K - 1), z)


def stretch_derivatives(z, K: float):
    """Hand-coded (f_z, f_zbar) of the stretch, writing f = z^{1+a} zbar^a with a = (1/K - 1)/2."""
    a = (1 / K - 1) / 2
    r = np.abs(z)
    fz = (1 + a) * r ** (2 * a)
    fzb = a * (z / np.conj(z)) * r ** (2 * a)
    inside = r <= 1
    return np.where(inside, fz, 1.0), np.where(inside, fzb, 0.0)


def stretch_jacobian(z, K: float):
    r = np.abs(z)
    return np.where(r <= 1, r ** (2 / K - 2) / K, 1.0)


def stretch_weight(z, K: float, p: float):
    """J_{f^{-1}}^{1 - p/2} for the stretch, written as a power of |z|."""
    e = (2 * K - 2) * (1 - p / 2)
    return K ** (1 - p / 2) * np.abs(z) ** e
