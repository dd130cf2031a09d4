"""Coefficient checks for schlicht functions, the generating function built
from <T^n f, g>, and explicit collisions for (1 - alpha) z + alpha K(z)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .field import SampledField, lp_norm, pairing
from .norm_lab import conjugate_exponent, kappa
from .operators import ab_transform


def koebe(z):
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1):
        raise ValueError("Koebe function is evaluated on the open unit disc only")
    out = z / (1 - z) ** 2
    return out if out.ndim else complex(out)


@dataclass(frozen=True, eq=False)
class TaylorCoeffs:
    """a_1..a_N (coeffs[0] is a_1); radius is the extraction circle, if any."""

    coeffs: np.ndarray
    radius: float | None = None

    def __getitem__(self, n: int) -> complex:
        if n < 1:
            raise IndexError("coefficients start at a_1")
        return complex(self.coeffs[n - 1])

    def __len__(self):
        return len(self.coeffs)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            acc = (acc + c) * z
        return acc


def koebe_coeffs(N: int) -> TaylorCoeffs:
    return TaylorCoeffs(np.arange(1, N + 1, dtype=complex))


def taylor_from_circle(f: Callable, r: float, N: int, M: int | None = None) -> TaylorCoeffs:
    """a_n = r^{-n} (1/M) sum_j f(r e^{i theta_j}) e^{-i n theta_j}, n = 1..N."""
    if not 0 < r < 1:
        raise ValueError("radius must lie in (0, 1)")
    M = M or 4 * N
    if M < 4 * N:
        raise ValueError("need at least 4N samples on the circle")
    theta = 2 * np.pi * np.arange(M) / M
    vals = np.asarray(f(r * np.exp(1j * theta)), dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise ValueError("non-finite samples on the extraction circle")
    c = np.fft.fft(vals) / M
    n = np.arange(1, N + 1)
    return TaylorCoeffs(c[1 : N + 1] / r**n, r)


@dataclass(frozen=True)
class GateVerdict:
    bieberbach: bool
    bounds: tuple
    equalities: tuple

    @property
    def all_pass(self) -> bool:
        return self.bieberbach and all(self.bounds)


def coefficient_gates(c: TaylorCoeffs, eq_tol: float = 1e-9) -> GateVerdict:
    """|a_2| <= 2 and |a_n| <= n for every available n, with equality flags."""
    if abs(c[1] - 1) > 1e-6:
        raise ValueError("coefficients are not normalized (a_1 != 1)")
    mods = np.abs(c.coeffs)
    n = np.arange(1, len(c) + 1)
    bounds = tuple(bool(v) for v in mods <= n + eq_tol)
    eq = tuple(bool(v) for v in np.abs(mods - n) <= eq_tol)
    b = len(c) < 2 or bool(mods[1] <= 2 + eq_tol)
    return GateVerdict(b, bounds, eq)


# --- collisions ------------------------------------------------------------


def mixed_koebe(alpha: float) -> Callable:
    return lambda z: (1 - alpha) * np.asarray(z) + alpha * koebe(z)


@dataclass(frozen=True)
class CollisionWitness:
    alpha: float
    z: complex
    w: complex
    defect: float
    a: complex
    b: complex
    x: float
    eps: float


def _solve_x(target: float) -> float:
    """x > 1/2 with x (4x - 1)^2 = target (the left side increases from 1/2)."""
    lo, hi = 0.5, 1.0
    while hi * (4 * hi - 1) ** 2 < target:
        hi *= 2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid * (4 * mid - 1) ** 2 < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def collision_construct(alpha: float, x: float | None = None) -> CollisionWitness:
    """Distinct z, w in the disc with g(z) = g(w), g = (1 - alpha) z + alpha K.

    Without an explicit x the construction takes the x > 1/2 solving
    x (4x - 1)^2 = (1/2 + gamma) / 2, halfway between the infimum 1/2 and gamma."""
    if not 0 < alpha < 2 / 3:
        raise ValueError("collisions exist only for 0 < alpha < 2/3")
    gamma = (1 - alpha) / alpha
    if x is None:
        x = _solve_x((0.5 + gamma) / 2)
    if not (x > 0.5 and x * (4 * x - 1) ** 2 < gamma):
        raise ValueError("x must satisfy x > 1/2 and x (4x - 1)^2 < gamma")
    eps = gamma / x - (4 * x - 1) ** 2
    p = 3 * x * x - x
    y = math.sqrt(4 * p + eps)
    # roots of t^2 - y t + p; the discriminant equals eps
    y1 = 0.5 * (y + math.sqrt(eps))
    y2 = 0.5 * (y - math.sqrt(eps))
    a, b = complex(x, y1), complex(x, y2)
    z, w = 1 - 1 / a, 1 - 1 / b
    g = mixed_koebe(alpha)
    defect = abs(complex(g(z)) - complex(g(w)))
    return CollisionWitness(alpha, z, w, defect, a, b, x, eps)


def injectivity_scan(g: Callable | float, M: int = 20000, radius: float = 0.95, seed: int = 0, pairs=()) -> float:
    """min |g(z) - g(w)| / |z - w| over random far pairs, close pairs and given pairs.

    ``g`` may be a callable or alpha for (1 - alpha) z + alpha K."""
    if not callable(g):
        g = mixed_koebe(float(g))
    rng = np.random.default_rng(seed)

    def disc(n):
        r = radius * np.sqrt(rng.uniform(0, 1, n))
        return r * np.exp(2j * np.pi * rng.uniform(0, 1, n))

    z1, z2 = disc(M // 2), disc(M // 2)
    c = disc(M - M // 2)
    d = 1e-4 * np.exp(2j * np.pi * rng.uniform(0, 1, c.size))
    z = np.concatenate([z1, c, np.array([p[0] for p in pairs], dtype=complex)])
    w = np.concatenate([z2, c + d, np.array([p[1] for p in pairs], dtype=complex)])
    keep = (np.abs(w) <= radius + 1e-12) & (z != w)
    z, w = z[keep], w[keep]
    return float(np.min(np.abs(g(z) - g(w)) / np.abs(z - w)))


def quadratic_collision(a: complex) -> tuple[complex, complex] | None:
    """A pair z != w in the disc with z + 2a z^2 = w + 2a w^2, when one exists."""
    if a == 0:
        return None
    s = -1 / (2 * a)
    if abs(s) >= 2:
        return None
    t = 0.5 * (2 - abs(s)) * (1j * s / abs(s))
    return s / 2 + t, s / 2 - t


# --- generating function ---------------------------------------------------


def psi_coefficients(f: SampledField, g: SampledField, p: float, N: int = 8, phases=None, norm_tol: float = 1e-3) -> np.ndarray:
    """Coefficients of z^1..z^N: 1, then e^{i a_n} n <T^{n-1} f, g> / kappa_{n-1}(p)."""
    if N > 16:
        raise ValueError("at most 16 coefficients")
    q = conjugate_exponent(p)
    if abs(lp_norm(f, p) - 1) > norm_tol or abs(lp_norm(g, q) - 1) > norm_tol:
        raise ValueError("inputs must be normalized in L^p and L^q")
    ph = np.zeros(N + 1) if phases is None else np.asarray(phases, dtype=float)
    out = np.zeros(N, dtype=complex)
    out[0] = 1.0
    u = f
    for n in range(2, N + 1):
        u = ab_transform(u, 1)
        out[n - 1] = np.exp(1j * ph[n]) * n * pairing(u, g) / kappa(n - 1, p)
    return out


def psi_pairings(f: SampledField, g: SampledField, nmax: int = 5) -> np.ndarray:
    """<T^n f, g> for n = 1..nmax."""
    out = []
    u = f
    for _ in range(nmax):
        u = ab_transform(u, 1)
        out.append(pairing(u, g))
    return np.array(out)


def psi_is_quadratic(coeffs: np.ndarray, tol: float = 1e-3) -> bool:
    return bool(np.all(np.abs(coeffs[2:]) <= tol))
