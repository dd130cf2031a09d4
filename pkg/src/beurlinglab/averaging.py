"""Kernels of the averaging construction and the constant relating the
averaged Haar shift to T.

alpha = h0 * h0 and beta = chi0 * chi0 on the line; F(x, y) = -beta(x) alpha(y);
F^rho(x) = rho^-2 F(x / rho); G^rho is the e^{-2 i psi} rotation average of
F^rho; k^r sums G^{2^n r} over dyadic scales.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from .field import SampledField


def alpha_fn(x):
    a = np.abs(np.asarray(x, dtype=float))
    return np.where(a <= 0.5, 3 * a - 1, np.where(a <= 1, 1 - a, 0.0))


def beta_fn(x):
    return np.maximum(1 - np.abs(np.asarray(x, dtype=float)), 0.0)


def F_kernel(x, y):
    return -beta_fn(x) * alpha_fn(y)


def F_rho(x, y, rho: float):
    return F_kernel(np.asarray(x) / rho, np.asarray(y) / rho) / rho**2


# --- rotation average ------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def _kink_angles(r: float) -> np.ndarray:
    """Polar angles phi where (r cos phi, r sin phi) meets a kink line of F."""
    out = [0.0, 0.5 * np.pi, np.pi, 1.5 * np.pi]
    for c in (0.5, 1.0):
        if c < r:
            a = math.acos(c / r)
            b = math.asin(c / r)
            out += [a, -a, np.pi - a, np.pi + a, b, np.pi - b, -b, np.pi + b]
    return np.unique(np.mod(out, 2 * np.pi))


def _G1_exact(xi: complex) -> complex:
    r, th = abs(xi), math.atan2(xi.imag, xi.real)
    if r == 0:
        return 0j
    # integrate over phi = th - psi on pieces where F is polynomial
    br = np.concatenate([_kink_angles(r), [2 * np.pi]])
    total = 0j
    for a, b in zip(br[:-1], br[1:]):
        if b - a < 1e-15:
            continue
        phi = 0.5 * (b - a) * _GL_NODES + 0.5 * (a + b)
        vals = F_kernel(r * np.cos(phi), r * np.sin(phi)) * np.exp(-2j * (th - phi))
        total += 0.5 * (b - a) * np.dot(_GL_WEIGHTS, vals)
    return total / (2 * np.pi)


def G_rho(xi, rho: float = 1.0, M_angles: int = 256, method: str = "trapezoid"):
    """(1/2pi) int F^rho(O_{-psi} xi) e^{-2 i psi} d psi.

    ``trapezoid`` uses M_angles equispaced angles; ``exact`` integrates
    piecewise between the kinks of F with Gauss-Legendre panels."""
    if not rho > 0:
        raise ValueError("rho must be positive")
    xi = np.asarray(xi, dtype=complex)
    if method == "exact":
        flat = np.array([_G1_exact(complex(v) / rho) for v in xi.ravel()]) / rho**2
        out = flat.reshape(xi.shape)
    elif method == "trapezoid":
        if M_angles < 64:
            raise ValueError("M_angles must be >= 64")
        psi = 2 * np.pi * np.arange(M_angles) / M_angles
        rot = xi[..., None] * np.exp(-1j * psi)
        out = np.mean(F_rho(rot.real, rot.imag, rho) * np.exp(-2j * psi), axis=-1)
    else:
        raise ValueError(f"unknown method {method!r}")
    return out if out.ndim else complex(out)


def scale_start(x: complex, r: float) -> int:
    """N(x, r) = floor(log2(|x| / r) - 1/2): terms below it vanish."""
    return math.floor(math.log2(abs(x) / r) - 0.5)


def k_r_partial(x, r: float = 1.0, M: int = 20, M_angles: int = 256, method: str = "trapezoid"):
    """sum_{n = N(x, r)}^{M} G^{2^n r}(x) at each point x != 0."""
    xs = np.atleast_1d(np.asarray(x, dtype=complex))
    if np.any(xs == 0):
        raise ValueError("k^r is not evaluated at the origin")
    out = np.zeros(xs.shape, dtype=complex)
    for idx, v in np.ndenumerate(xs):
        n0 = scale_start(v, r)
        for n in range(n0, M + 1):
            out[idx] += G_rho(v, 2.0**n * r, M_angles, method)
    return out if np.ndim(x) else complex(out[0])


KERNEL_BOUND = 8 / 3


# --- the constant ----------------------------------------------------------


def C_of_y(y):
    """Closed form of int_0^1 alpha(x) / (x^2 + y^2) dx for y > 0."""
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise ValueError("y must be positive")
    return (
        (np.arctan(1 / y) - 2 * np.arctan(1 / (2 * y))) / y
        + 2 * np.log(4 * y**2 + 1)
        - 0.5 * np.log(y**2 + 1)
        - 3 * np.log(y)
        - 4 * math.log(2)
    )


def C_of_y_quadrature(y: float) -> float:
    f = lambda x: float(alpha_fn(x)) / (x * x + y * y)
    a = integrate.quad(f, 0, 0.5, epsabs=1e-14, epsrel=1e-13)[0]
    b = integrate.quad(f, 0.5, 1, epsabs=1e-14, epsrel=1e-13)[0]
    return a + b


def _closed() -> float:
    return (math.atan(2) - 4 * math.atan(0.5) + 15 / 8 * math.log(5) - 4 * math.log(2)) / 12


def _C_route() -> float:
    f = lambda y: (1 - y) * y**2 * float(C_of_y(y))
    return integrate.quad(f, 0, 1, epsabs=1e-15, epsrel=1e-13, limit=200)[0]


def _F_route() -> float:
    # F is even in each variable: integrate one quadrant on its polynomial pieces
    g = lambda y, x: float(F_kernel(x, y)) * (x * x - y * y) / (x * x + y * y)
    tot = 0.0
    for y0, y1 in ((0, 0.5), (0.5, 1)):
        tot += integrate.dblquad(g, 0, 1, y0, y1, epsabs=1e-13, epsrel=1e-12)[0]
    full = 4 * tot
    return -full / 8


_ROUTES = {"closed": _closed, "C_quadrature": _C_route, "F_quadrature": _F_route}


def averaging_integral(method: str = "closed") -> float:
    """The quantity int_0^1 (1 - y) y^2 C(y) dy, equivalently
    -(1/8) int F(x, y) (x^2 - y^2)/(x^2 + y^2), by one of three routes."""
    try:
        return float(_ROUTES[method]())
    except KeyError:
        raise ValueError(f"unknown method {method!r}") from None


def averaging_constant(method: str = "closed") -> float:
    """c with (averaged shift) = c T: four times the averaging integral."""
    return 4 * averaging_integral(method)


# --- identities ------------------------------------------------------------


def polar_identity_check(F_test, extent: float = 20.0, n: int = 801, angles: int = 16) -> float:
    """Relative gap between 2 pi int F and int_{S^1} int_C F(lambda sigma) d lambda d sigma.

    Both sides use the same trapezoid lattice; the right side rotates it."""
    t = np.linspace(-extent / 2, extent / 2, n)
    h = t[1] - t[0]
    lam = t[:, None] + 1j * t[None, :]
    lhs = 2 * np.pi * F_test(lam).sum() * h * h
    sig = np.exp(2j * np.pi * np.arange(angles) / angles)
    inner = np.array([F_test(lam * s).sum() * h * h for s in sig])
    rhs = inner.mean() * 2 * np.pi
    return float(abs(lhs - rhs) / abs(lhs))


def convolve_with_F(f: SampledField, m: int) -> SampledField:
    """Periodic convolution of f with F^rho (rho = m cells) sampled at lattice lags."""
    g = f.grid
    N = g.size
    lag = np.fft.fftfreq(N, d=1.0 / N) * g.spacing
    kern = F_rho(lag[:, None], lag[None, :], m * g.spacing) * g.cell_area
    return f.like(np.fft.ifft2(np.fft.fft2(f.samples) * np.fft.fft2(kern)))
