"""Macro-pixel layout: circle packing, radius equalization and hologram rendering."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import bisect

from .optics import JtmaParams, QuadratureSpec, pixel_amplitude

HEX_NUMBERS = {1: 0, 7: 1, 19: 2, 37: 3, 61: 4, 91: 5}


class LayoutError(ValueError):
    """Infeasible packing or equalization."""


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class PixelLayout:
    d: int
    centers: np.ndarray = field(repr=False)
    radii: np.ndarray = field(repr=False)
    enclosing_radius: float

    def __post_init__(self):
        c = np.asarray(self.centers, dtype=float).reshape(-1, 2)
        r = np.asarray(self.radii, dtype=float).reshape(-1)
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "radii", r)
        if not (len(c) == len(r) == self.d):
            raise ValueError("d must equal the number of centers and radii")
        if np.any(r <= 0):
            raise ValueError("pixel radii must be positive")

    def violations(self, tol: float = 1e-9) -> list[str]:
        out = []
        dist = np.hypot(self.centers[:, 0], self.centers[:, 1])
        for m in np.nonzero(dist + self.radii > self.enclosing_radius * (1 + tol))[0]:
            out.append(f"pixel {m} leaves the aperture")
        diff = self.centers[:, None] - self.centers[None]
        pd = np.hypot(diff[..., 0], diff[..., 1])
        need = self.radii[:, None] + self.radii[None]
        for m, n in zip(*np.nonzero(np.triu(pd < need * (1 - tol), 1))):
            out.append(f"pixels {m} and {n} overlap")
        return out

    @property
    def is_valid(self) -> bool:
        return not self.violations()

    def rings(self, rel_tol: float = 0.05) -> list[np.ndarray]:
        """Pixel indices grouped by centre distance, innermost first."""
        dist = np.hypot(self.centers[:, 0], self.centers[:, 1])
        order = np.argsort(dist, kind="stable")
        tol = rel_tol * float(np.min(self.radii))
        groups: list[list[int]] = []
        for i in order:
            if groups and dist[i] - dist[groups[-1][-1]] <= tol:
                groups[-1].append(int(i))
            else:
                groups.append([int(i)])
        return [np.array(g) for g in groups]

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "enclosing_radius": self.enclosing_radius,
            "centers": self.centers.tolist(),
            "radii": self.radii.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PixelLayout":
        return cls(
            d=int(data["d"]),
            centers=np.array(data["centers"], dtype=float),
            radii=np.array(data["radii"], dtype=float),
            enclosing_radius=float(data["enclosing_radius"]),
        )


def _hex_points(rings: int) -> np.ndarray:
    """Centred hexagonal lattice points with unit spacing, ring by ring."""
    pts = [(0.0, 0.0)]
    dirs = [np.array([math.cos(math.pi / 3 * i), math.sin(math.pi / 3 * i)]) for i in range(6)]
    for n in range(1, rings + 1):
        for side in range(6):
            start = n * dirs[side]
            step = dirs[(side + 2) % 6]
            for s in range(n):
                pts.append(tuple(start + s * step))
    return np.array(pts)


def _spread_points(d: int, seed: int = 0, iters: int = 3000) -> tuple[np.ndarray, float]:
    """Points in the unit disc pushed apart by short-range repulsion.

    Returns the points and their minimum pairwise distance. Deterministic in seed.
    """
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-0.5, 0.5, size=(d, 2))
    target = 2.0 / math.sqrt(d)
    for it in range(iters):
        step = 0.1 * (1 - it / iters) + 1e-3
        diff = pts[:, None] - pts[None]
        dist = np.hypot(diff[..., 0], diff[..., 1])
        np.fill_diagonal(dist, np.inf)
        push = np.clip(target - dist, 0.0, None) / dist
        pts = pts + step * np.sum(diff * push[..., None], axis=1)
        norm = np.hypot(pts[:, 0], pts[:, 1])
        pts = pts / np.maximum(norm, 1.0)[:, None]
        mind = float(np.min(dist))
        # grow the target while the set is loose, shrink it when crowded
        target *= 1.002 if mind > 0.98 * target else 0.999
    diff = pts[:, None] - pts[None]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    np.fill_diagonal(dist, np.inf)
    return pts, float(np.min(dist))


def pack_pixels(
    d: int,
    enclosing_radius: float,
    min_gap: float | None = None,
    gap_fraction: float = 0.1,
    seed: int = 0,
) -> PixelLayout:
    """d equal, non-overlapping circles inside the aperture.

    Centred-hexagonal d uses concentric hexagonal rings; other d use a seeded
    repulsion relaxation. The gap between neighbours is ``min_gap`` if given,
    otherwise ``gap_fraction`` times the resulting radius.
    """
    if d < 1:
        raise LayoutError(f"dimension must be >= 1, got {d}")
    big_r = float(enclosing_radius)
    if d == 1:
        return PixelLayout(1, np.zeros((1, 2)), np.array([big_r]), big_r)

    if d in HEX_NUMBERS:
        n = HEX_NUMBERS[d]
        unit = _hex_points(n)
        # extent n*s + r = R with s = 2r + gap
        if min_gap is None:
            r = big_r / (n * (2 + gap_fraction) + 1)
            gap = gap_fraction * r
        else:
            gap = min_gap
            r = (big_r - n * gap) / (2 * n + 1)
        spacing = 2 * r + gap
        centers = unit * spacing
    else:
        unit, delta = _spread_points(d, seed)
        # delta (R - r) >= 2 r + gap
        if min_gap is None:
            r = delta * big_r / (delta + 2 + gap_fraction)
        else:
            r = (delta * big_r - min_gap) / (delta + 2)
        centers = unit * (big_r - r)
    if r <= 0:
        raise LayoutError(f"d={d} pixels do not fit in radius {big_r} with the requested gap")
    layout = PixelLayout(d, centers, np.full(d, r), big_r)
    bad = layout.violations()
    if bad:
        raise LayoutError("; ".join(bad))
    return layout


@dataclass(frozen=True)
class EqualizationResult:
    layout: PixelLayout
    rates: np.ndarray
    iterations: int

    @property
    def rate_ratio(self) -> float:
        return float(np.max(self.rates) / np.min(self.rates))


def diagonal_rates(layout: PixelLayout, p: JtmaParams, q: QuadratureSpec = QuadratureSpec()) -> np.ndarray:
    return np.array([pixel_amplitude(c, r, p, q) ** 2 for c, r in zip(layout.centers, layout.radii)])


def optimize_radii(
    layout: PixelLayout,
    p: JtmaParams,
    q: QuadratureSpec = QuadratureSpec(),
    tol: float = 0.01,
    max_iter: int = 60,
) -> EqualizationResult:
    """Shrink inner rings until every diagonal rate matches the outer ring's.

    The outermost ring keeps its radius. Each inner ring shares one radius, found
    by bisection on the (monotone) rate of a representative pixel.
    """
    if layout.d == 1:
        return EqualizationResult(layout, diagonal_rates(layout, p, q), 0)
    rings = layout.rings()
    outer = rings[-1]
    rates = diagonal_rates(layout, p, q)
    target = float(np.mean(rates[outer]))
    radii = layout.radii.copy()
    total_iter = 0
    for ring in rings[:-1]:
        rep = ring[0]
        c, r_max = layout.centers[rep], float(np.min(layout.radii[ring]))
        if abs(rates[rep] / target - 1) <= tol / 4:
            continue
        if rates[rep] < target:
            raise LayoutError(
                f"ring at |c|={np.hypot(*c):.4g} is dimmer than the outer ring even at full radius"
            )
        # amplitude grows like r^2 for small discs: safe lower bracket
        r_lo = r_max * math.sqrt(target / rates[rep]) * 0.5
        counter = {"n": 0}

        def residual(r, c=c, counter=counter):
            counter["n"] += 1
            return pixel_amplitude(c, r, p, q) ** 2 / target - 1

        while residual(r_lo) > 0:
            r_lo *= 0.5
        try:
            r_new = bisect(residual, r_lo, r_max, xtol=1e-12 * r_max, rtol=1e-10, maxiter=max_iter)
        except RuntimeError as exc:
            raise ConvergenceError(f"radius bisection did not converge: {exc}") from exc
        total_iter += counter["n"]
        radii[ring] = r_new
    new = replace(layout, radii=radii)
    rates = diagonal_rates(new, p, q)
    return EqualizationResult(new, rates, total_iter)


# --------------------------------------------------------------------------- holograms


@dataclass(frozen=True)
class PhaseMask:
    """Phase in [0, 2pi) where a grating is displayed, NaN where the SLM is off."""

    values: np.ndarray

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def on(self) -> np.ndarray:
        return ~np.isnan(self.values)

    def to_gray(self) -> np.ndarray:
        g = np.zeros(self.values.shape, dtype=np.uint8)
        on = self.on
        g[on] = np.round(self.values[on] / (2 * np.pi) * 255).astype(np.uint8)
        return g


def render_hologram(
    layout: PixelLayout,
    state,
    raster: tuple[int, int] = (512, 512),
    grating_period: float = 8.0,
) -> PhaseMask:
    """Blazed grating inside each pixel, shifted by the phase of its coefficient.

    The enclosing circle is fitted to the shorter raster side. Pixels whose
    coefficient vanishes stay switched off, as does the background.
    """
    state = np.asarray(state, dtype=complex)
    if state.shape != (layout.d,):
        raise ValueError(f"state must have length {layout.d}")
    if grating_period < 4:
        raise ValueError("raster too coarse: need at least 4 samples per grating period")
    width, height = raster
    scale = min(width, height) / (2 * layout.enclosing_radius)
    x = (np.arange(width) - (width - 1) / 2) / scale
    y = ((height - 1) / 2 - np.arange(height)) / scale
    xx, yy = np.meshgrid(x, y)
    values = np.full((height, width), np.nan)
    ramp = 2 * np.pi * np.arange(width)[None, :] / grating_period
    for m in range(layout.d):
        amp = state[m]
        if abs(amp) < 1e-12:
            continue
        c, r = layout.centers[m], layout.radii[m]
        inside = (xx - c[0]) ** 2 + (yy - c[1]) ** 2 < r * r
        phase = np.mod(ramp + np.angle(amp), 2 * np.pi)
        values[inside] = np.broadcast_to(phase, values.shape)[inside]
    return PhaseMask(values)
