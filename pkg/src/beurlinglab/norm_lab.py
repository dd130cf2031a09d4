"""Closed-form norm candidates for powers of T and the Lehto lower-bound family.

kappa(n, p) = (1/q)_n / (1/p)_n is evaluated as a product of the factors
(2k + 1 + d) / (2k + 1 - d), d = 1 - 2/p, accumulated in log space so that
n in the tens of thousands stays finite.

The Lehto family is f(z) = z^n |z|^{-2 alpha} g_n(|z|) with g_n = 1 on the
unit disc and exp(-((x - 1)/tau)^n) outside. Writing f = z^n G(s), s = |z|^2:

    n = 1:  d f = G + s G',                 dbar f = z^2 G'
    n = 2:  d^2 f = 2G + 4 s G' + s^2 G'',  dbar^2 f = z^4 G''

Inside the disc both L^p integrals are elementary; outside the derivatives
of G are coded by hand and integrated on the grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as gamma_fn

from .field import GridSpec, SampledField, lp_norm, subsampled_cell_means
from .operators import ab_transform

EULER_GAMMA = float(np.euler_gamma)
LOWER_RATIO = 4 * math.exp(EULER_GAMMA - 2)
PSI_LIMIT = EULER_GAMMA + 2 * math.log(2) - 2


def conjugate_exponent(p: float) -> float:
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")
    return p / (p - 1)


def pochhammer(a: float, n: int) -> float:
    if n < 0:
        raise ValueError("n must be >= 0")
    out = 1.0
    for j in range(n):
        out *= a + j
    return out


def log_kappa_table(nmax: int, p) -> np.ndarray:
    """log kappa_n(p) for n = 0..nmax; p may be an array (rows follow p)."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if np.any(p <= 1):
        raise ValueError("p must exceed 1")
    d = 1 - 2 / p
    k = np.arange(nmax)
    terms = np.log((2 * k[None, :] + 1 + d[:, None]) / (2 * k[None, :] + 1 - d[:, None]))
    out = np.zeros((p.size, nmax + 1))
    out[:, 1:] = np.cumsum(terms, axis=1)
    return out


def kappa(n: int, p: float) -> float:
    if n < 0:
        raise ValueError("n must be >= 0")
    conjugate_exponent(p)
    return float(np.exp(log_kappa_table(n, p)[0, n]))


def kappa_bound(n, p):
    """n^{1 - 2/p*} (p* - 1)."""
    ps = max(p, conjugate_exponent(p))
    return np.asarray(n, dtype=float) ** (1 - 2 / ps) * (ps - 1)


@dataclass(frozen=True)
class KappaRow:
    n: int
    p: float
    q: float
    kappa: float
    bound: float
    ratio: float


def ratio_check(n: int, p: float) -> KappaRow:
    if n < 1 or p < 2:
        raise ValueError("ratio_check needs n >= 1 and p >= 2")
    k = kappa(n, p)
    b = float(kappa_bound(n, p))
    row = KappaRow(n, p, conjugate_exponent(p), k, b, k / b)
    assert LOWER_RATIO <= row.ratio <= 1 + 1e-12, row
    return row


def ratio_scan(nmax: int, ps) -> np.ndarray:
    """kappa_n(p) / bound over n = 1..nmax (rows follow ps)."""
    ps = np.asarray(ps, dtype=float)
    lk = log_kappa_table(nmax, ps)[:, 1:]
    n = np.arange(1, nmax + 1)
    lb = (1 - 2 / ps[:, None]) * np.log(n)[None, :] + np.log(ps - 1)[:, None]
    return np.exp(lk - lb)


def kappa_submultiplicative(m: int, n: int, p: float) -> bool:
    """kappa_{m+n} <= kappa_m kappa_n (with equality at p = 2)."""
    lhs = kappa(m + n, p)
    rhs = kappa(m, p) * kappa(n, p)
    return lhs <= rhs * (1 + 1e-12)


def gamma_p(s: float, p: float) -> float:
    return s ** (1 - 2 / p) * (p - 1)


def gamma_submultiplicative(s: float, t: float, p: float) -> bool:
    if s < 1 or t < 1 or p < 2:
        raise ValueError("needs s, t >= 1 and p >= 2")
    return gamma_p(s + t, p) <= gamma_p(s, p) * gamma_p(t, p) * (1 + 1e-12)


def phi(u):
    """((u + 1)/(u - 1)) log u, continued by 2 at u = 1."""
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0):
        raise ValueError("phi needs u > 0")
    near = np.abs(u - 1) < 1e-6
    safe = np.where(near, 2.0, u)
    val = (safe + 1) / (safe - 1) * np.log(safe)
    # series about 1: 2 + (u-1)^2/6 + ...
    val = np.where(near, 2 + (u - 1) ** 2 / 6, val)
    return val if val.ndim else float(val)


def psi_seq(n: int) -> float:
    if n < 2:
        raise ValueError("psi_seq needs n >= 2")
    k = np.arange(1, n)
    return float(np.sum(2.0 / (2 * k + 1)) - math.log(n))


def gaussian_pnorm_closed(p: float) -> float:
    """L^p norm of -2 pi x exp(-pi |z|^2)."""
    if p < 1:
        raise ValueError("p must be >= 1")
    val = 2**p * math.pi ** ((p - 1) / 2) * gamma_fn((p + 1) / 2) / p ** (1 + p / 2)
    return float(val ** (1 / p))


# --- Lehto family ----------------------------------------------------------


@dataclass(frozen=True)
class LehtoParams:
    n: int
    alpha: float
    p: float
    tau: float = 1.0

    def __post_init__(self):
        if self.n not in (1, 2):
            raise ValueError("Lehto derivatives are coded for n in {1, 2} only")
        if not self.p > 2:
            raise ValueError("Lehto family needs p > 2")
        if not 1 - self.alpha * self.p > 0:
            raise ValueError("Lehto family needs alpha < 1/p")


def disc_integrals(n: int, p: float, alpha: float) -> tuple[float, float]:
    """Integrals of |d^n f|^p and |dbar^n f|^p over the unit disc."""
    if not 1 - alpha * p > 0:
        raise ValueError("needs alpha < 1/p")
    c = math.pi / (1 - alpha * p)
    num = c * math.prod((k - alpha) ** p for k in range(1, n + 1))
    den = c * math.prod(abs(k + alpha) ** p for k in range(0, n))
    return num, den


def _outer_G(s, prm: LehtoParams):
    """G, G', G'' of G(s) = s^{-alpha} exp(-phi(s)) on s >= 1."""
    a, t = prm.alpha, prm.tau
    r = np.sqrt(s)
    if prm.n == 1:
        ph = (r - 1) / t
        d1 = 1 / (2 * t * r)
        d2 = -1 / (4 * t * s * r)
    else:
        ph = ((r - 1) / t) ** 2
        d1 = (1 - 1 / r) / t**2
        d2 = 1 / (2 * t**2 * s * r)
    E = np.exp(-ph)
    E1 = -d1 * E
    E2 = (d1**2 - d2) * E
    P = s ** (-a)
    P1 = -a * s ** (-a - 1)
    P2 = a * (a + 1) * s ** (-a - 2)
    return P * E, P1 * E + P * E1, P2 * E + 2 * P1 * E1 + P * E2


def _inner_G(s, prm: LehtoParams):
    a = prm.alpha
    return s ** (-a), -a * s ** (-a - 1), a * (a + 1) * s ** (-a - 2)


def lehto_derivatives(z, prm: LehtoParams):
    """(d^n f, dbar^n f) at complex points, from the hand-coded G derivatives."""
    z = np.asarray(z, dtype=complex)
    s = np.abs(z) ** 2
    inside = s <= 1
    si = np.where(inside, s, 1.0)
    so = np.where(inside, 1.0, s)
    Gi, Go = _inner_G(si, prm), _outer_G(so, prm)
    G0, G1, G2 = (np.where(inside, a, b) for a, b in zip(Gi, Go))
    if prm.n == 1:
        return G0 + s * G1, z**2 * G1
    return 2 * G0 + 4 * s * G1 + s**2 * G2, z**4 * G2


def exterior_integrals(prm: LehtoParams, grid: GridSpec, sub: int = 8) -> tuple[float, float]:
    """Grid quadrature of |d^n f|^p and |dbar^n f|^p over |z| > 1.

    Cells cut by the unit circle are averaged on a sub x sub lattice."""
    r = np.abs(grid.z)
    seam = np.abs(r - 1) < grid.spacing
    bulk = (r > 1) & ~seam

    def outer(z):
        a, b = lehto_derivatives(z, prm)
        out = np.abs(z) > 1
        return np.where(out, np.abs(a) ** prm.p, 0.0), np.where(out, np.abs(b) ** prm.p, 0.0)

    a, b = outer(grid.z[bulk])
    num = a.sum()
    den = b.sum()
    num += subsampled_cell_means(lambda w: outer(w)[0], grid, seam, sub).real.sum()
    den += subsampled_cell_means(lambda w: outer(w)[1], grid, seam, sub).real.sum()
    return float(num * grid.cell_area), float(den * grid.cell_area)


def lehto_ratio(prm: LehtoParams, grid: GridSpec) -> float:
    """||d^n f||_p / ||dbar^n f||_p with closed-form disc parts."""
    di_num, di_den = disc_integrals(prm.n, prm.p, prm.alpha)
    ex_num, ex_den = exterior_integrals(prm, grid)
    return float(((di_num + ex_num) / (di_den + ex_den)) ** (1 / prm.p))


def lehto_spectral_ratio(prm: LehtoParams, grid: GridSpec) -> float:
    """||T^n u||_p / ||u||_p for u = dbar^n f sampled on the grid."""
    u = SampledField(grid, lehto_derivatives(grid.z, prm)[1])
    return lp_norm(ab_transform(u, prm.n), prm.p) / lp_norm(u, prm.p)


# --- weak type diagnostic --------------------------------------------------


@dataclass(frozen=True)
class WeakCurve:
    n: int
    levels: np.ndarray
    values: np.ndarray

    @property
    def sup(self) -> float:
        return float(self.values.max())


def weak11_diagnostic(n: int, grid: GridSpec, width: float | None = None, levels=None) -> WeakCurve:
    """lambda * |{|T^n f| > lambda}| / ||f||_1 for a mollified point mass f."""
    w = width if width is not None else 2 * grid.spacing
    z = grid.z
    f = np.exp(-np.pi * np.abs(z / w) ** 2)
    f /= f.sum() * grid.cell_area
    F = SampledField(grid, f)
    u = np.abs(ab_transform(F, n).samples) if n else np.abs(f)
    if levels is None:
        levels = np.logspace(-3, math.log10(u.max()), 40)
    levels = np.asarray(levels, dtype=float)
    mass = f.sum() * grid.cell_area
    vals = np.array([lam * np.count_nonzero(u > lam) * grid.cell_area for lam in levels]) / mass
    return WeakCurve(n, levels, vals)
