"""Fourier multipliers and direct kernel quadrature for T, its powers and Riesz powers."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import SampledField, SpectralField, from_spectrum, lp_norm, pairing, to_spectrum


def _safe_div(num, den):
    out = np.zeros(np.broadcast(num, den).shape, dtype=complex)
    nz = den != 0
    np.divide(num, den, out=out, where=nz)
    return out


@dataclass(frozen=True)
class MultiplierSymbol:
    """A named symbol on the frequency lattice. ``tag`` is one of
    ``ab``, ``riesz``, ``d``, ``dbar``, ``shifted_ab``."""

    tag: str
    power: int = 1
    theta: float = 0.0

    def __post_init__(self):
        if self.tag not in ("ab", "riesz", "d", "dbar", "shifted_ab"):
            raise ValueError(f"unknown symbol tag {self.tag!r}")
        if self.tag == "shifted_ab" and self.power < 1:
            raise ValueError("shifted_ab needs a positive shift n")

    def __call__(self, xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=complex)
        nz = xi != 0
        if self.tag == "ab":
            base = _safe_div(np.conj(xi), xi)
            out = _int_power(base, self.power)
        elif self.tag == "riesz":
            base = _safe_div(np.conj(xi), np.abs(xi))
            out = _int_power(base, self.power)
        elif self.tag == "d":
            out = np.pi * 1j * np.conj(xi)
        elif self.tag == "dbar":
            out = np.pi * 1j * xi
        else:
            zeta = xi / self.power + np.exp(1j * self.theta)
            # the pole at xi = -n e^{i theta} takes the value 0
            return _safe_div(np.conj(zeta), zeta)
        return np.where(nz, out, 0)


def _int_power(base, k):
    if k >= 0:
        return base**k
    # |base| = 1 off the origin, so the inverse power is the conjugate power
    return np.conj(base) ** (-k)


def AB_power(n: int) -> MultiplierSymbol:
    return MultiplierSymbol("ab", n)


def Riesz_power(k: int) -> MultiplierSymbol:
    return MultiplierSymbol("riesz", k)


Wirtinger_d = MultiplierSymbol("d")
Wirtinger_dbar = MultiplierSymbol("dbar")


def Shifted_AB(n: int, theta: float) -> MultiplierSymbol:
    return MultiplierSymbol("shifted_ab", n, theta)


def multiply_spectrum(F: SpectralField, m: MultiplierSymbol) -> SpectralField:
    return SpectralField(F.grid, m(F.xi) * F.coefficients)


def apply_multiplier(f: SampledField, m: MultiplierSymbol) -> SampledField:
    return from_spectrum(multiply_spectrum(to_spectrum(f), m))


def ab_transform(f: SampledField, n: int = 1) -> SampledField:
    return apply_multiplier(f, AB_power(n))


def riesz(f: SampledField, k: int = 1) -> SampledField:
    return apply_multiplier(f, Riesz_power(k))


def wirtinger(f: SampledField, which: str = "d", order: int = 1) -> SampledField:
    if order < 1:
        raise ValueError("order must be >= 1")
    sym = {"d": Wirtinger_d, "dbar": Wirtinger_dbar}[which]
    F = to_spectrum(f)
    xi = F.xi
    s = sym(xi) ** order
    return from_spectrum(SpectralField(f.grid, s * F.coefficients))


def rotate90(f: SampledField, quarter_turns: int = 1) -> SampledField:
    """(U f)(x) = f(O_{-psi} x) with psi = quarter_turns * pi/2, exact on the grid."""
    a = f.samples
    for _ in range(quarter_turns % 4):
        # new[i, j] = old at the point rotated by -pi/2: (x, y) -> (y, -x)
        a = a.T[::-1, :]
    return f.like(a)


# --- direct kernel ---------------------------------------------------------


@dataclass(frozen=True)
class KernelSpec:
    k: int
    eps: float

    def __post_init__(self):
        if self.k == 0:
            raise ValueError("kernel power k must be nonzero")
        if not self.eps > 0:
            raise ValueError("cutoff must be positive")

    def omega(self, zeta):
        """Angular part on the unit circle."""
        k = self.k
        return (1j) ** abs(k) * abs(k) / (2 * np.pi) * np.asarray(zeta, dtype=complex) ** (-k)

    def kernel(self, zeta):
        r = np.abs(zeta)
        return self.omega(zeta / r) / r**2


def direct_kernel_apply(f: SampledField, spec: KernelSpec, chunk: int = 1024) -> SampledField:
    """Truncated convolution over |zeta| > eps by plain O(N^4) summation (N <= 128 in practice)."""
    g = f.grid
    if spec.eps < 2 * g.spacing - 1e-12:
        raise ValueError("cutoff must cover at least two cells")
    zs = g.z.ravel()
    fs = f.samples.ravel()
    out = np.empty(zs.size, dtype=complex)
    # quantize to whole cells; small slack keeps lattice distances equal to eps excluded
    eps = spec.eps + 1e-9 * g.spacing
    for s in range(0, zs.size, chunk):
        d = zs[s : s + chunk, None] - zs[None, :]
        r = np.abs(d)
        far = r > eps
        kern = np.zeros_like(d)
        kern[far] = spec.kernel(d[far])
        out[s : s + chunk] = kern @ fs
    return f.like(out.reshape(g.size, g.size) * g.cell_area)


def adjoint_check(f: SampledField, g: SampledField) -> float:
    """|<Tf, g> - <f, S g>| with S g = conj(T conj g)."""
    lhs = pairing(ab_transform(f, 1), g)
    Sg = ab_transform(g.conj(), 1).conj()
    return abs(lhs - pairing(f, Sg))


def lp_ratio(f: SampledField, m: MultiplierSymbol, p: float) -> float:
    """Empirical ||m(D) f||_p / ||f||_p (no sharpness claim)."""
    return lp_norm(apply_multiplier(f, m), p) / lp_norm(f, p)
