"""Dyadic Haar analysis on [0, 1), martingale transforms, dyadic A2 weights,
weighted Haar functions and the Bellman/Carleson machinery.

Functions on [0, 1) are modelled at a finite depth D: a StepFunction holds the
2^D leaf values, and every sum over dyadic intervals runs over levels < D.
Children of I are I- (left half) and I+ (right half); Delta_I u means
<u>_{I+} - <u>_{I-}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from .field import SampledField


@dataclass(frozen=True, order=True)
class DyadicInterval:
    level: int
    index: int

    def __post_init__(self):
        if self.level < 0 or not 0 <= self.index < 2**self.level:
            raise ValueError(f"invalid dyadic interval ({self.level}, {self.index})")

    @property
    def length(self) -> float:
        return 2.0**-self.level

    @property
    def left(self) -> float:
        return self.index * self.length

    @property
    def minus(self) -> "DyadicInterval":
        return DyadicInterval(self.level + 1, 2 * self.index)

    @property
    def plus(self) -> "DyadicInterval":
        return DyadicInterval(self.level + 1, 2 * self.index + 1)

    def contains(self, other: "DyadicInterval") -> bool:
        if other.level < self.level:
            return False
        return other.index >> (other.level - self.level) == self.index

    def leaf_slice(self, depth: int) -> slice:
        if self.level > depth:
            raise ValueError("interval finer than the leaf depth")
        w = 2 ** (depth - self.level)
        return slice(self.index * w, (self.index + 1) * w)


def intervals(depth: int, top: DyadicInterval | None = None) -> Iterator[DyadicInterval]:
    """All J inside ``top`` (default [0, 1)) with level < depth."""
    top = top or DyadicInterval(0, 0)
    for lev in range(top.level, depth):
        w = 2 ** (lev - top.level)
        for k in range(top.index * w, (top.index + 1) * w):
            yield DyadicInterval(lev, k)


@dataclass(frozen=True, eq=False)
class StepFunction:
    depth: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (2**self.depth,):
            raise ValueError(f"expected {2**self.depth} leaf values, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("step function values must be finite")
        object.__setattr__(self, "values", v)

    def inner(self, other: "StepFunction", weight: np.ndarray | None = None) -> complex:
        w = 1.0 if weight is None else weight
        return complex(np.sum(self.values * np.conj(other.values) * w) / self.values.size)

    def norm(self, weight: np.ndarray | None = None) -> float:
        return math.sqrt(self.inner(self, weight).real)

    def mean(self) -> complex:
        return complex(self.values.mean())


def haar(I: DyadicInterval, depth: int) -> StepFunction:
    if I.level >= depth:
        raise ValueError("Haar function needs level < depth")
    v = np.zeros(2**depth)
    s = I.leaf_slice(depth)
    half = (s.stop - s.start) // 2
    amp = I.length**-0.5
    v[s.start : s.start + half] = -amp
    v[s.start + half : s.stop] = amp
    return StepFunction(depth, v)


def haar_coefficients(f: StepFunction) -> tuple[complex, list[np.ndarray]]:
    """(<f, 1>, [<f, h_I> for I at level l]) by the fast pyramid."""
    avg = f.values.copy()
    coeffs: list[np.ndarray] = []
    for lev in range(f.depth - 1, -1, -1):
        m, p = avg[0::2], avg[1::2]
        # <f, h_I> = |I|^{1/2} (<f>_{I+} - <f>_{I-}) / 2
        coeffs.append(2.0 ** (-lev / 2) * (p - m) / 2)
        avg = (m + p) / 2
    return complex(avg[0]), coeffs[::-1]


def haar_synthesis(mean: complex, coeffs: list[np.ndarray]) -> StepFunction:
    v = np.array([mean], dtype=complex)
    for lev, c in enumerate(coeffs):
        d = 2.0 ** (lev / 2) * c
        v = np.stack([v - d, v + d], axis=1).ravel()
    return StepFunction(len(coeffs), v)


@dataclass(frozen=True, eq=False)
class MartingaleSymbol:
    """sigma_I stored level by level; |sigma_I| <= 1."""

    levels: tuple

    def __post_init__(self):
        lv = tuple(np.asarray(a, dtype=complex) for a in self.levels)
        for k, a in enumerate(lv):
            if a.shape != (2**k,):
                raise ValueError(f"level {k} needs {2**k} entries")
            if np.any(np.abs(a) > 1 + 1e-12):
                raise ValueError("martingale symbol entries must satisfy |sigma| <= 1")
        object.__setattr__(self, "levels", lv)

    @property
    def depth(self) -> int:
        return len(self.levels)

    def __getitem__(self, I: DyadicInterval) -> complex:
        return complex(self.levels[I.level][I.index])

    @classmethod
    def constant(cls, depth: int, value: complex) -> "MartingaleSymbol":
        return cls(tuple(np.full(2**k, value, dtype=complex) for k in range(depth)))

    @classmethod
    def random(cls, depth: int, rng: np.random.Generator, complex_valued: bool = True) -> "MartingaleSymbol":
        out = []
        for k in range(depth):
            r = rng.uniform(0, 1, 2**k)
            ph = rng.uniform(0, 2 * np.pi, 2**k) if complex_valued else np.pi * rng.integers(0, 2, 2**k)
            out.append(r * np.exp(1j * ph))
        return cls(tuple(out))


def martingale_transform(f: StepFunction, sigma: MartingaleSymbol) -> StepFunction:
    if sigma.depth != f.depth:
        raise ValueError("symbol and function depths differ")
    _, c = haar_coefficients(f)
    return haar_synthesis(0.0, [a * s for a, s in zip(c, sigma.levels)])


# --- weights ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DyadicWeight:
    depth: int
    leaves: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.leaves, dtype=float)
        if v.shape != (2**self.depth,):
            raise ValueError(f"expected {2**self.depth} leaf values")
        if not np.all(np.isfinite(v)) or np.any(v <= 0):
            raise ValueError("weight leaves must be positive and finite")
        v.setflags(write=False)
        object.__setattr__(self, "leaves", v)

    @staticmethod
    def _pyramid(v: np.ndarray) -> list[np.ndarray]:
        out = [v]
        while out[-1].size > 1:
            a = out[-1]
            out.append((a[0::2] + a[1::2]) / 2)
        return out[::-1]

    @cached_property
    def averages(self) -> list[np.ndarray]:
        """averages[l][k] = <w>_I for I = (l, k), l = 0..depth."""
        return self._pyramid(self.leaves)

    @cached_property
    def inverse_averages(self) -> list[np.ndarray]:
        return self._pyramid(1.0 / self.leaves)

    def avg(self, I: DyadicInterval) -> float:
        return float(self.averages[I.level][I.index])

    def inv_avg(self, I: DyadicInterval) -> float:
        return float(self.inverse_averages[I.level][I.index])

    def measure(self, I: DyadicInterval) -> float:
        return self.avg(I) * I.length

    def delta(self, I: DyadicInterval) -> float:
        return self.avg(I.plus) - self.avg(I.minus)

    def inv_delta(self, I: DyadicInterval) -> float:
        return self.inv_avg(I.plus) - self.inv_avg(I.minus)

    @classmethod
    def from_function(cls, fn, depth: int) -> "DyadicWeight":
        x = (np.arange(2**depth) + 0.5) / 2**depth
        return cls(depth, fn(x))

    @classmethod
    def random_log_uniform(cls, depth: int, rng: np.random.Generator, spread: float = 3.0) -> "DyadicWeight":
        return cls(depth, np.exp(rng.uniform(-spread, spread, 2**depth)))


def dyadic_a2(w: DyadicWeight) -> float:
    return float(max(np.max(a * b) for a, b in zip(w.averages, w.inverse_averages)))


def weighted_haar(I: DyadicInterval, w: DyadicWeight) -> tuple[float, float]:
    """Values (A on I-, B on I+) of the L^2(w)-normalized Haar function."""
    if I.level >= w.depth:
        raise ValueError("weighted Haar needs level < depth")
    lm, lp, l = w.measure(I.minus), w.measure(I.plus), w.measure(I)
    return -math.sqrt(lp / (lm * l)), math.sqrt(lm / (lp * l))


def weighted_haar_function(I: DyadicInterval, w: DyadicWeight) -> StepFunction:
    A, B = weighted_haar(I, w)
    v = np.zeros(2**w.depth)
    s = I.leaf_slice(w.depth)
    half = (s.stop - s.start) // 2
    v[s.start : s.start + half] = A
    v[s.start + half : s.stop] = B
    return StepFunction(w.depth, v)


def haar_decomposition(I: DyadicInterval, w: DyadicWeight) -> tuple[float, float]:
    """(alpha, beta) with h_I = alpha h_I^w + beta chi_I / sqrt|I|."""
    A, B = weighted_haar(I, w)
    s = math.sqrt(I.length)
    # values of h_I are -1/s on I- and +1/s on I+
    alpha = 2 / (s * (B - A))
    beta = s * (1 / s - alpha * B)
    m = w.avg(I)
    assert 0 < abs(alpha) <= math.sqrt(m) * (1 + 1e-12)
    assert abs(beta) <= abs(w.delta(I)) / m * (1 + 1e-12) + 1e-15
    return alpha, beta


# --- Bellman function and Carleson sums ------------------------------------


def bellman_b(x, y, alpha: float):
    return (x * y) ** alpha


def carleson_terms(w: DyadicWeight, alpha: float) -> list[np.ndarray]:
    """mu_J for every J, level by level (levels 0..depth-1)."""
    out = []
    for lev in range(w.depth):
        x, y = w.averages[lev], w.inverse_averages[lev]
        dx = w.averages[lev + 1][1::2] - w.averages[lev + 1][0::2]
        dy = w.inverse_averages[lev + 1][1::2] - w.inverse_averages[lev + 1][0::2]
        out.append((x * y) ** alpha * (dx**2 / x**2 + dy**2 / y**2) * 2.0**-lev)
    return out


def bellman_defects(w: DyadicWeight, alpha: float) -> list[np.ndarray]:
    """|J| b(J) - |J-| b(J-) - |J+| b(J+), level by level."""
    g = [bellman_b(x, y, alpha) * 2.0**-lev for lev, (x, y) in enumerate(zip(w.averages, w.inverse_averages))]
    return [g[lev] - g[lev + 1][0::2] - g[lev + 1][1::2] for lev in range(w.depth)]


# 2x the worst local constant seen by calibrate_carleson_constant on its stress family
CARLESON_C0 = 16.0


def carleson_constant(alpha: float, c0: float = CARLESON_C0) -> float:
    return c0 / (alpha * (1 - 2 * alpha))


def carleson_sum(w: DyadicWeight, alpha: float, I: DyadicInterval | None = None, c0: float = CARLESON_C0) -> tuple[float, float]:
    if not 0 < alpha < 0.5:
        raise ValueError("alpha must lie in (0, 1/2)")
    I = I or DyadicInterval(0, 0)
    terms = carleson_terms(w, alpha)
    total = 0.0
    for lev in range(I.level, w.depth):
        k = 2 ** (lev - I.level)
        total += float(terms[lev][I.index * k : (I.index + 1) * k].sum())
    return total, carleson_constant(alpha, c0) * dyadic_a2(w) ** alpha * I.length


def local_bellman_constant(w: DyadicWeight, alpha: float) -> float:
    """min over J with mu_J > 0 of defect_J / (alpha (1 - 2 alpha) mu_J)."""
    best = math.inf
    for mu, d in zip(carleson_terms(w, alpha), bellman_defects(w, alpha)):
        ok = mu > 1e-300
        if np.any(ok):
            best = min(best, float(np.min(d[ok] / (alpha * (1 - 2 * alpha) * mu[ok]))))
    return best


def stress_weights(rng: np.random.Generator, depth: int = 8, count: int = 200) -> list[DyadicWeight]:
    """Random log-uniform weights plus power weights and two-valued jumps."""
    out = [DyadicWeight.random_log_uniform(depth, rng, spread=s) for s in np.linspace(0.5, 6, count)]
    for a in (-0.99, -0.9, -0.5, 0.5, 0.9, 0.99):
        out.append(DyadicWeight.from_function(lambda x, a=a: x**a, depth))
    for r in (1e-4, 1e-2, 1e2, 1e4):
        v = np.ones(2**depth)
        v[2 ** (depth - 1) :] = r
        out.append(DyadicWeight(depth, v))
    return out


@dataclass(frozen=True)
class CarlesonCalibration:
    c_min: float
    c0: float
    alphas: tuple
    weights: int


def calibrate_carleson_constant(seed: int = 0, depth: int = 8, count: int = 200, alphas=(0.05, 0.1, 0.25, 0.4, 0.45)) -> CarlesonCalibration:
    rng = np.random.default_rng(seed)
    ws = stress_weights(rng, depth, count)
    c_min = min(local_bellman_constant(w, a) for w in ws for a in alphas)
    return CarlesonCalibration(c_min, 2 / c_min, tuple(alphas), len(ws))


def bellman_hessian_check(x, y, u, v, alpha: float) -> bool:
    """-d^2 b[u, v] >= alpha (1 - 2 alpha) (xy)^alpha (u^2/x^2 + v^2/y^2)."""
    x, y, u, v = (np.asarray(t, dtype=float) for t in (x, y, u, v))
    if np.any(x <= 0) or np.any(y <= 0) or not 0 < alpha < 0.5:
        raise ValueError("needs x, y > 0 and 0 < alpha < 1/2")
    s = u**2 / x**2 + v**2 / y**2
    lhs = alpha * (x * y) ** alpha * ((1 - alpha) * s - 2 * alpha * u * v / (x * y))
    rhs = alpha * (1 - 2 * alpha) * (x * y) ** alpha * s
    return bool(np.all(lhs >= rhs * (1 - 1e-12) - 1e-300))


def wittwer_probe(w: DyadicWeight, sigma: MartingaleSymbol, f: StepFunction) -> float:
    Tf = martingale_transform(f, sigma)
    return Tf.norm(w.leaves) / (f.norm(w.leaves) * dyadic_a2(w))


def wittwer_search(w: DyadicWeight, rng: np.random.Generator, sweeps: int = 3) -> float:
    """Coordinate ascent over real signs of sigma and over leaf values of f."""
    D = w.depth
    sigma = MartingaleSymbol.random(D, rng, complex_valued=False)
    f = StepFunction(D, rng.normal(size=2**D))
    best = wittwer_probe(w, sigma, f)
    levels = [a.copy() for a in sigma.levels]
    for _ in range(sweeps):
        for lev in range(D):
            for k in range(2**lev):
                for cand in (1.0, -1.0):
                    old = levels[lev][k]
                    levels[lev][k] = cand
                    val = wittwer_probe(w, MartingaleSymbol(tuple(levels)), f)
                    if val > best:
                        best = val
                    else:
                        levels[lev][k] = old
        # one power-type step on f: f <- w^{-1} T* (w T f) direction
        sig = MartingaleSymbol(tuple(levels))
        g = martingale_transform(f, sig)
        cand = martingale_transform(StepFunction(D, w.leaves * g.values), MartingaleSymbol(tuple(np.conj(a) for a in levels)))
        cand = StepFunction(D, cand.values / w.leaves)
        if cand.norm() > 0:
            val = wittwer_probe(w, sig, cand)
            if val > best:
                best, f = val, cand
    return best


# --- planar Haar projection ------------------------------------------------


def planar_haar_projection(f: SampledField, t: tuple[int, int], m: int) -> SampledField:
    """Projection onto h_Q^0 = |I|^{-1/2} chi_I (x) h_J over squares of side rho = m cells
    offset by t = (t1, t2) cells. The squares tile the periodic grid."""
    N = f.grid.size
    if m < 2 or m % 2 or N % m:
        raise ValueError("square side must be an even number of cells dividing the grid size")
    t1, t2 = (int(t[0]) % m, int(t[1]) % m)
    a = np.roll(f.samples, (-t1, -t2), axis=(0, 1))
    blocks = a.reshape(N // m, m, N // m, m)
    sign = np.where(np.arange(m) < m // 2, -1.0, 1.0)
    rho = m * f.grid.spacing
    hq = sign / rho
    c = np.einsum("ajbk,k->ab", blocks, hq) * f.grid.cell_area
    proj = c[:, None, :, None] * np.broadcast_to(hq, (1, m, 1, m))
    out = np.roll(proj.reshape(N, N), (t1, t2), axis=(0, 1))
    return f.like(out)


def translation_average(f: SampledField, m: int) -> SampledField:
    """Mean of planar_haar_projection over all m^2 aligned offsets."""
    acc = np.zeros_like(f.samples)
    for t1 in range(m):
        for t2 in range(m):
            acc += planar_haar_projection(f, (t1, t2), m).samples
    return f.like(acc / m**2)
