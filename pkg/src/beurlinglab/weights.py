"""Planar power weights, A2 lower estimates over square families, the
sharpness experiment for T on L^2(|z|^alpha) and the affine change of variables."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, ndimage

from .field import GridSpec, SampledField, WeightField, sample_analytic, subsampled_cell_means, weighted_lp_norm
from .operators import ab_transform


def power_weight(alpha: float, grid: GridSpec) -> WeightField:
    if not abs(alpha) < 2:
        raise ValueError("power weight needs |alpha| < 2")
    return WeightField(grid, np.abs(grid.z) ** alpha)


@dataclass(frozen=True)
class Square:
    center: complex
    side: float
    angle: float = 0.0

    def corners(self) -> np.ndarray:
        u = np.array([1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j]) * self.side / 2
        return self.center + u * np.exp(1j * self.angle)

    def mask(self, grid: GridSpec) -> np.ndarray:
        u = (grid.z - self.center) * np.exp(-1j * self.angle)
        return (np.abs(u.real) <= self.side / 2) & (np.abs(u.imag) <= self.side / 2)


@dataclass(frozen=True)
class SquareFamily:
    squares: tuple = field(default_factory=tuple)

    def __len__(self):
        return len(self.squares)

    def __add__(self, other: "SquareFamily") -> "SquareFamily":
        return SquareFamily(self.squares + other.squares)

    @classmethod
    def build(cls, grid: GridSpec, rng: np.random.Generator, scales: int = 4, per_scale: int = 16) -> "SquareFamily":
        """Random squares at ``scales`` dyadic sides (largest L/4) plus, at each
        side, squares centred on the origin in several orientations."""
        if scales < 3 or per_scale < 16:
            raise ValueError("need at least 3 scales and 16 placements per scale")
        L = grid.extent
        out = []
        for j in range(scales):
            s = L / 4 / 2**j
            room = L / 2 - s / math.sqrt(2)
            for _ in range(per_scale):
                c = complex(*rng.uniform(-room, room, 2))
                out.append(Square(c, s, float(rng.uniform(0, np.pi / 2))))
            for ang in (0.0, np.pi / 8, np.pi / 4):
                out.append(Square(0j, s, ang))
        return cls(tuple(out))


def a2_estimate(w: WeightField, fam: SquareFamily, min_cells: int = 4) -> float:
    """max over the family of <w>_Q <w^{-1}>_Q (cell centres inside Q)."""
    g = w.grid
    half = g.extent / 2
    best = 0.0
    for Q in fam.squares:
        c = Q.corners()
        if np.any(np.abs(c.real) > half + 1e-12) or np.any(np.abs(c.imag) > half + 1e-12):
            raise ValueError(f"square {Q} leaves the grid domain")
        m = Q.mask(g)
        if np.count_nonzero(m) < min_cells:
            continue
        v = w.samples[m]
        best = max(best, float(v.mean() * (1 / v).mean()))
    return best


# --- sharpness -------------------------------------------------------------


def _corner_cell_integral(power: float, h: float) -> float:
    """int over [0, h]^2 of r^{-power}, power < 2."""
    ang = integrate.quad(lambda t: math.cos(t) ** (power - 2), 0, math.pi / 4)[0]
    return h ** (2 - power) * 2 / (2 - power) * ang


def sector_field(alpha: float, grid: GridSpec, sub: int = 8, near: int = 8) -> tuple[SampledField, np.ndarray]:
    """Cell averages of f = |z|^{-alpha} chi_E and cell integrals of |f|^2 |z|^alpha.

    Cells near the origin or cut by the arc are refined on a sub x sub lattice;
    the cell touching the origin uses the exact corner integral."""
    z = grid.z
    r = np.abs(z)
    h = grid.spacing
    E = (z.real > 0) & (z.imag > 0)
    inE = E & (r < 1)

    def f(w):
        rr = np.abs(w)
        return np.where((w.real > 0) & (w.imag > 0) & (rr < 1), rr ** (-alpha), 0.0)

    # |f|^2 |z|^alpha = |z|^{-alpha} = f on E, so one set of cell means serves both
    vals = np.where(inE, r ** (-alpha), 0.0)
    fine = E & ((r < near * h) | (np.abs(r - 1) < h))
    vals[fine] = subsampled_cell_means(f, grid, fine, sub).real
    m = grid.size // 2
    vals[m, m] = _corner_cell_integral(alpha, h) / grid.cell_area
    return SampledField(grid, vals), vals * grid.cell_area


@dataclass(frozen=True)
class SharpnessReport:
    alpha: float
    norm_f_sq: float
    closed_form: float
    rel_error: float
    far_norm_sq: float
    far_lower_bound: float
    ratio: float


FAR_CONSTANT = math.pi / 4096


def sector_norm_closed(alpha: float) -> float:
    return math.pi / (2 * (2 - alpha))


def sharpness_experiment(alpha: float, grid: GridSpec) -> SharpnessReport:
    """Weighted norms of the sector field and of its transform.

    The norm of f is integrated with refined cells; the transform and the
    ratio use plain point samples of f on both sides of the quotient."""
    if not 0 <= alpha < 2:
        raise ValueError("alpha must lie in [0, 2)")
    if grid.size < 256 or grid.extent < 4:
        raise ValueError("grid too coarse to resolve the sector")
    _, mass = sector_field(alpha, grid)
    nf = float(mass.sum())
    closed = sector_norm_closed(alpha)
    w = power_weight(alpha, grid).samples
    f = sample_analytic("quadrant_power", grid, alpha=alpha)
    dens = np.abs(ab_transform(f, 1).samples) ** 2 * w
    z = grid.z
    X = (z.real < 0) & (z.imag < 0) & (np.abs(z) < 1)
    far = float(dens[X].sum() * grid.cell_area)
    ratio = math.sqrt(dens.sum() / np.sum(np.abs(f.samples) ** 2 * w))
    return SharpnessReport(alpha, nf, closed, nf / closed - 1, far, 0.5 * FAR_CONSTANT / (2 - alpha) ** 3, ratio)


# --- affine maps -----------------------------------------------------------


@dataclass(frozen=True)
class AffineMap:
    """x -> Lambda x + b restricted to lattice-exact families.

    kind: 'identity', 'rotate' (quarter turns), 'translate' (whole cells) or 'dilate' (factor)."""

    kind: str
    amount: float = 0

    def det(self) -> float:
        return float(self.amount) ** 2 if self.kind == "dilate" else 1.0


def _compose(a: np.ndarray, A: AffineMap, grid: GridSpec) -> np.ndarray:
    if A.kind == "identity":
        return a.copy()
    if A.kind == "rotate":
        # (g o A)(x) with A rotation by +pi/2 per quarter turn
        out = a
        for _ in range(int(A.amount) % 4):
            out = out[::-1, :].T
        return out
    if A.kind == "translate":
        k = complex(A.amount)
        return np.roll(a, (-int(k.real), -int(k.imag)), axis=(0, 1))
    if A.kind == "dilate":
        lam = float(A.amount)
        if lam < 1 or abs(math.log2(lam) - round(math.log2(lam))) > 1e-12:
            raise ValueError("only dyadic dilations by 2^j >= 1 are supported")
        # sample index of the point lam * x for each grid point x
        i = (lam * grid.axis + grid.extent / 2) / grid.spacing - 0.5
        I, J = np.meshgrid(i, i, indexing="ij")
        kw = dict(order=3, mode="constant", cval=0.0)
        re = ndimage.map_coordinates(a.real, [I, J], **kw)
        im = ndimage.map_coordinates(a.imag, [I, J], **kw) if np.iscomplexobj(a) else 0.0
        return re + 1j * im
    raise ValueError(f"unsupported affine map {A.kind!r}")


def affine_norm_identity(g: SampledField, A: AffineMap, w: WeightField) -> float:
    """Relative gap between ||g o A||_{L^2(w o A)} and det^{-1/2} ||g||_{L^2(w)}."""
    grid = g.grid
    gA = SampledField(grid, _compose(g.samples, A, grid))
    wA = _compose(w.samples.astype(complex), A, grid).real
    if A.kind == "dilate":
        # w o A may leave the sampled window; outside it only matters where g o A vanishes
        wA = np.where(wA > 0, wA, 1.0)
    lhs = weighted_lp_norm(gA, WeightField(grid, wA), 2)
    rhs = weighted_lp_norm(g, w, 2) / math.sqrt(A.det())
    return abs(lhs - rhs) / rhs
