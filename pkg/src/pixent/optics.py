"""Gaussian-beam design and the two-photon momentum-space model.

Momenta are 2-vectors in arbitrary inverse-length units; the JTMA widths in
:class:`JtmaParams` fix the scale. Beam quantities use um for waists, mm for
positions and nm for wavelengths.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss


class BeamPropagationError(ValueError):
    pass


class QuadratureWarning(RuntimeWarning):
    """Doubling the quadrature order moved the result by more than the tolerance."""


# --------------------------------------------------------------------------- beams


@dataclass(frozen=True)
class GaussianBeam:
    waist: float  # um
    waist_position: float  # mm, measured downstream from the current reference plane
    wavelength: float  # nm

    def __post_init__(self):
        if not self.waist > 0 or not self.wavelength > 0:
            raise ValueError("waist and wavelength must be positive")

    @property
    def rayleigh_range(self) -> float:
        """Rayleigh range in mm."""
        w = self.waist * 1e-3
        return math.pi * w * w / (self.wavelength * 1e-6)

    def q(self) -> complex:
        return complex(-self.waist_position, self.rayleigh_range)

    @classmethod
    def from_q(cls, q: complex, wavelength: float) -> "GaussianBeam":
        if not np.isfinite(q) or q.imag <= 0:
            raise BeamPropagationError(f"degenerate beam parameter q={q}")
        w_mm = math.sqrt(q.imag * wavelength * 1e-6 / math.pi)
        return cls(waist=w_mm * 1e3, waist_position=-q.real, wavelength=wavelength)


@dataclass(frozen=True)
class Space:
    distance: float  # mm

    def __post_init__(self):
        if self.distance < 0:
            raise ValueError("free-space distance must be >= 0")

    @property
    def abcd(self) -> np.ndarray:
        return np.array([[1.0, self.distance], [0.0, 1.0]])


@dataclass(frozen=True)
class Lens:
    focal_length: float  # mm

    def __post_init__(self):
        if self.focal_length == 0:
            raise ValueError("focal length must be nonzero")

    @property
    def abcd(self) -> np.ndarray:
        return np.array([[1.0, 0.0], [-1.0 / self.focal_length, 1.0]])


def _apply(q: complex, m: np.ndarray) -> complex:
    den = m[1, 0] * q + m[1, 1]
    if abs(den) < 1e-300:
        raise BeamPropagationError("ABCD transform sends the beam waist to infinity")
    return (m[0, 0] * q + m[0, 1]) / den


def propagate_steps(beam: GaussianBeam, elements: Sequence[Space | Lens]) -> list[GaussianBeam]:
    """Beam after each element; waist_position is relative to the plane just after it."""
    q = beam.q()
    out = []
    for el in elements:
        q = _apply(q, el.abcd)
        out.append(GaussianBeam.from_q(q, beam.wavelength))
    return out


def propagate(beam: GaussianBeam, elements: Sequence[Space | Lens]) -> GaussianBeam:
    """Transform the complex beam parameter through a chain of thin lenses and gaps."""
    if not elements:
        return beam
    return propagate_steps(beam, elements)[-1]


# Design presets: (input beam, elements, target output waist in um). Input
# geometry that the targets leave open is a reconstruction.
BEAM_PRESETS: dict[str, tuple[GaussianBeam, list, float]] = {
    # laser waist taken 125 mm before the first lens; 4f spacing
    "pump": (GaussianBeam(950.0, -125.0, 405.0), [Lens(250.0), Space(300.0), Lens(50.0)], 188.0),
    "slm": (GaussianBeam(188.0, 0.0, 810.0), [Space(250.0), Lens(250.0), Space(250.0)], 343.0),
    "ift": (GaussianBeam(1117.0, 0.0, 810.0), [Lens(150.0), Space(650.0), Lens(500.0)], 3723.0),
}


# --------------------------------------------------------------------------- JTMA


@dataclass(frozen=True)
class JtmaParams:
    sigma_p: float
    sigma_s: float
    sigma_c: float = math.inf
    # sinc argument is sinc_scale * |ks - ki|^2 / sigma_s^2; 1.0 is the verbatim form
    sinc_scale: float = 1.0

    def __post_init__(self):
        if not (self.sigma_p > 0 and self.sigma_s > 0 and self.sigma_c > 0):
            raise ValueError("all JTMA widths must be strictly positive")

    @classmethod
    def desk(cls, ratio: float = 50.0, sigma_c: float = math.inf) -> "JtmaParams":
        """Dimensionless preset: sigma_s = 1, sigma_p = 1/ratio."""
        return cls(sigma_p=1.0 / ratio, sigma_s=1.0, sigma_c=sigma_c)

    @classmethod
    def lab_reconstruction(
        cls,
        pump_waist_um: float = 188.0,
        pump_wavelength_nm: float = 405.0,
        crystal_length_mm: float = 5.0,
        refractive_index: float = 1.84,
        collection_waist_um: float = 3723.0,
        fourier_focal_mm: float = 250.0,
        signal_wavelength_nm: float = 810.0,
    ) -> "JtmaParams":
        """Widths in 1/mm rebuilt from the setup geometry (not measured values).

        sigma_p = 2 / w_pump; sigma_s = sqrt(4 k_p / L); sigma_c maps the collection
        waist on the SLM back to crystal momentum through the Fourier lens.
        """
        k_p = 2 * math.pi * refractive_index / (pump_wavelength_nm * 1e-6)
        sigma_p = 2.0 / (pump_waist_um * 1e-3)
        sigma_s = math.sqrt(4 * k_p / crystal_length_mm)
        lam_f = signal_wavelength_nm * 1e-6 * fourier_focal_mm
        sigma_c = 2 * math.pi * collection_waist_um * 1e-3 / (math.sqrt(2) * lam_f)
        return cls(sigma_p=sigma_p, sigma_s=sigma_s, sigma_c=sigma_c)


def _sinc(x):
    return np.sinc(np.asarray(x) / np.pi)


def jtma_amplitude(ks, ki, p: JtmaParams):
    """F(ks, ki) = exp(-|ks+ki|^2 / 2 sigma_p^2) * sinc(|ks-ki|^2 / sigma_s^2), sinc(x) = sin(x)/x."""
    ks = np.asarray(ks, dtype=float)
    ki = np.asarray(ki, dtype=float)
    plus = np.sum((ks + ki) ** 2, axis=-1)
    minus = np.sum((ks - ki) ** 2, axis=-1)
    return np.exp(-0.5 * plus / p.sigma_p**2) * _sinc(p.sinc_scale * minus / p.sigma_s**2)


def collected_jtma(ks, ki, p: JtmaParams):
    ks = np.asarray(ks, dtype=float)
    ki = np.asarray(ki, dtype=float)
    coll = np.exp(-0.5 * (np.sum(ks**2, axis=-1) + np.sum(ki**2, axis=-1)) / p.sigma_c**2)
    return coll * jtma_amplitude(ks, ki, p)


# --------------------------------------------------------------------------- holograms


@dataclass(frozen=True)
class Hologram:
    """Mask function over one photon's momentum plane.

    ``func`` maps an (..., 2) array of momenta to complex amplitudes of modulus <= 1.
    ``bbox`` = (xmin, xmax, ymin, ymax) bounds the support, or None if unbounded.
    """

    func: Callable[[np.ndarray], np.ndarray]
    bbox: tuple[float, float, float, float] | None = None

    def __call__(self, k):
        return self.func(np.asarray(k, dtype=float))


def zero_hologram() -> Hologram:
    return Hologram(lambda k: np.zeros(k.shape[:-1], dtype=complex), (-1.0, 1.0, -1.0, 1.0))


def pixel_hologram(centers, radii, coeffs, mirror: bool = False) -> Hologram:
    """Phase-weighted sum of disc indicators (pixels must not overlap).

    With ``mirror`` the discs are point-reflected through the origin, which is how
    the idler arm sees the signal layout.
    """
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    if mirror:
        centers = -centers
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    coeffs = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    if np.any(np.abs(coeffs) > 1 + 1e-12):
        raise ValueError("hologram coefficients must have modulus <= 1")
    on = np.abs(coeffs) > 0
    if not np.any(on):
        return zero_hologram()
    c_on, r_on, a_on = centers[on], radii[on], coeffs[on]

    def func(k):
        out = np.zeros(k.shape[:-1], dtype=complex)
        for c, r, a in zip(c_on, r_on, a_on):
            inside = np.sum((k - c) ** 2, axis=-1) < r * r
            out = np.where(inside, a, out)
        return out

    bbox = (
        float(np.min(c_on[:, 0] - r_on)),
        float(np.max(c_on[:, 0] + r_on)),
        float(np.min(c_on[:, 1] - r_on)),
        float(np.max(c_on[:, 1] + r_on)),
    )
    return Hologram(func, bbox)


# --------------------------------------------------------------------------- quadrature


@dataclass(frozen=True)
class QuadratureSpec:
    # tensor-product Gauss-Legendre (box route)
    order: int = 48
    panels: int = 1
    box_scale: float = 5.0
    # per-pixel-pair route: polar Gauss-Legendre over the signal disc ...
    disc_radial: int = 24
    disc_angular: int = 48
    # ... and, per signal node, polar nodes around the pump-Gaussian centre clipped to the idler disc
    inner_radial: int = 20
    inner_angular: int = 12
    gaussian_cut: float = 8.0
    rtol: float = 0.01

    def doubled(self) -> "QuadratureSpec":
        return QuadratureSpec(
            order=2 * self.order,
            panels=self.panels,
            box_scale=self.box_scale,
            disc_radial=2 * self.disc_radial,
            disc_angular=2 * self.disc_angular,
            inner_radial=2 * self.inner_radial,
            inner_angular=2 * self.inner_angular,
            gaussian_cut=self.gaussian_cut,
            rtol=self.rtol,
        )


def _gl_1d(lo: float, hi: float, order: int, panels: int):
    x, w = leggauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    half = np.diff(edges) / 2
    mid = (edges[:-1] + edges[1:]) / 2
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _plane_grid(bbox, q: QuadratureSpec):
    xs, wx = _gl_1d(bbox[0], bbox[1], q.order, q.panels)
    ys, wy = _gl_1d(bbox[2], bbox[3], q.order, q.panels)
    pts = np.stack(np.meshgrid(xs, ys, indexing="ij"), axis=-1).reshape(-1, 2)
    wts = np.outer(wx, wy).ravel()
    return pts, wts


def _box_amplitude(phi_s: Hologram, phi_i: Hologram, p: JtmaParams, q: QuadratureSpec) -> complex:
    half = q.box_scale * p.sigma_s
    default = (-half, half, -half, half)
    ks, ws = _plane_grid(phi_s.bbox or default, q)
    ki, wi = _plane_grid(phi_i.bbox or default, q)
    u = ws * phi_s(ks)
    v = wi * phi_i(ki)
    keep_s = u != 0
    keep_i = v != 0
    ks, u = ks[keep_s], u[keep_s]
    ki, v = ki[keep_i], v[keep_i]
    total = 0j
    chunk = max(1, 4_000_000 // max(len(ki), 1))
    for start in range(0, len(ks), chunk):
        blk = collected_jtma(ks[start : start + chunk, None, :], ki[None, :, :], p)
        total += u[start : start + chunk] @ (blk @ v)
    return total


def coincidence_probability(
    phi_s: Hologram, phi_i: Hologram, p: JtmaParams, q: QuadratureSpec = QuadratureSpec(), check: bool = False
) -> float:
    """|int d2ks d2ki phi_s(ks) phi_i(ki) G(ks, ki)|^2 by tensor-product Gauss-Legendre.

    The box is each hologram's support bounding box, or [-L, L]^2 with
    L = box_scale * sigma_s for unbounded masks. With ``check`` the integral is
    repeated at doubled order and a :class:`QuadratureWarning` is issued if it
    moves by more than ``q.rtol``.
    """
    if q.order < 8:
        raise ValueError("quadrature order must be >= 8 per axis")
    prob = abs(_box_amplitude(phi_s, phi_i, p, q)) ** 2
    if check:
        fine = abs(_box_amplitude(phi_s, phi_i, p, q.doubled())) ** 2
        if abs(fine - prob) > q.rtol * max(abs(fine), 1e-300):
            warnings.warn(f"coincidence probability not converged: {prob:.6g} vs {fine:.6g}", QuadratureWarning)
    return float(prob)


def pair_amplitude(a, ra: float, b, rb: float, p: JtmaParams, q: QuadratureSpec = QuadratureSpec()) -> float:
    """int_{|ks-a|<ra} int_{|ki-b|<rb} G(ks, ki).

    Outer polar Gauss-Legendre over the signal disc. For each signal node the pump
    Gaussian is centred at ki = -ks, so the idler integral is done in polar
    coordinates about that point: radially up to ``gaussian_cut`` widths, angularly
    over the arc of each circle that lies inside the idler disc (split where the
    arc stops being a full circle).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    cut = q.gaussian_cut * p.sigma_p
    if np.hypot(*(a + b)) - ra - rb > cut:
        return 0.0

    t, wt = leggauss(q.disc_radial)
    r = ra * (t + 1) / 2
    wr = ra / 2 * wt * r
    phi = 2 * np.pi * (np.arange(q.disc_angular) + 0.5) / q.disc_angular
    ks = (a + r[:, None, None] * np.stack([np.cos(phi), np.sin(phi)], axis=-1)[None]).reshape(-1, 2)
    wks = np.repeat(wr, q.disc_angular) * (2 * np.pi / q.disc_angular)

    centre = -ks
    rel = centre - b
    dist = np.hypot(rel[:, 0], rel[:, 1])
    toward = np.arctan2(-rel[:, 1], -rel[:, 0])

    x, wx = leggauss(q.inner_radial)
    inv2s2 = 0.5 / p.sigma_p**2
    coll_s = np.exp(-0.5 * np.sum(ks**2, axis=-1) / p.sigma_c**2)

    def smooth(kin):
        # everything except the pump Gaussian, which is handled radially
        minus = np.sum((ks[:, None, None, :] - kin) ** 2, axis=-1)
        coll_i = np.exp(-0.5 * np.sum(kin**2, axis=-1) / p.sigma_c**2)
        return coll_s[:, None, None] * coll_i * _sinc(p.sinc_scale * minus / p.sigma_s**2)

    # full circles: rho in [0, rb - dist] when the Gaussian centre is inside the idler disc
    hi_full = np.clip(rb - dist, 0.0, cut)
    rho = hi_full[:, None] * (x + 1) / 2
    wrho = hi_full[:, None] / 2 * wx * rho * np.exp(-inv2s2 * rho**2)
    th = 2 * np.pi * np.arange(q.inner_angular) / q.inner_angular
    e = np.stack([np.cos(th), np.sin(th)], axis=-1)
    kin = centre[:, None, None, :] + rho[:, :, None, None] * e[None, None]
    full = np.sum(wrho * smooth(kin).sum(axis=-1), axis=-1) * (2 * np.pi / q.inner_angular)

    # partial arcs: rho in [|rb - dist|, rb + dist]
    lo = np.abs(rb - dist)
    hi = np.minimum(rb + dist, cut)
    width = np.clip(hi - lo, 0.0, None)
    rho = lo[:, None] + width[:, None] * (x + 1) / 2
    wrho = width[:, None] / 2 * wx * rho * np.exp(-inv2s2 * rho**2)
    with np.errstate(divide="ignore", invalid="ignore"):
        cosb = (dist[:, None] ** 2 + rho**2 - rb * rb) / (2 * rho * dist[:, None])
    beta = np.arccos(np.clip(np.nan_to_num(cosb, nan=1.0), -1.0, 1.0))
    y, wy = leggauss(q.inner_angular)
    ang = toward[:, None, None] + beta[:, :, None] * y[None, None, :]
    e = np.stack([np.cos(ang), np.sin(ang)], axis=-1)
    kin = centre[:, None, None, :] + rho[:, :, None, None] * e
    arc = np.sum(wrho * beta * (smooth(kin) * wy).sum(axis=-1), axis=-1)

    return float(np.sum(wks * (full + arc)))


def idler_centers(layout, mirror_idler: bool = True) -> np.ndarray:
    c = np.asarray(layout.centers, dtype=float)
    return -c if mirror_idler else c


def amplitude_matrix(
    layout, p: JtmaParams, q: QuadratureSpec = QuadratureSpec(), mirror_idler: bool = True, check: bool = False
) -> np.ndarray:
    """A[m, n] = int over signal pixel m and idler pixel n of the collected JTMA.

    Idler pixel n sits at the point reflection of signal pixel n, so the
    anticorrelated pairs land on the diagonal. Any product of pixel-superposition
    masks then has amplitude sum_mn phi_s(m) phi_i(n) A[m, n].
    """
    centers = np.asarray(layout.centers, dtype=float)
    radii = np.asarray(layout.radii, dtype=float)
    _check_no_overlap(centers, radii)
    bc = idler_centers(layout, mirror_idler)
    d = len(radii)
    amp = np.zeros((d, d))
    for m in range(d):
        for n in range(d):
            amp[m, n] = pair_amplitude(centers[m], radii[m], bc[n], radii[n], p, q)
    if check:
        fine = amplitude_matrix(layout, p, q.doubled(), mirror_idler, check=False)
        scale = np.max(np.abs(fine))
        # entries below 1e-3 of the largest are compared on the absolute scale
        floor = np.maximum(np.abs(fine), 1e-3 * scale)
        if np.any(np.abs(fine - amp) > q.rtol * floor):
            warnings.warn("amplitude matrix not converged under order doubling", QuadratureWarning)
    return amp


def pixel_amplitude(center, radius: float, p: JtmaParams, q: QuadratureSpec = QuadratureSpec()) -> float:
    """Diagonal element for one pixel and its mirrored idler partner."""
    c = np.asarray(center, dtype=float)
    return pair_amplitude(c, radius, -c, radius, p, q)


def _check_no_overlap(centers: np.ndarray, radii: np.ndarray) -> None:
    diff = centers[:, None, :] - centers[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    need = radii[:, None] + radii[None, :]
    np.fill_diagonal(dist, np.inf)
    if np.any(dist < need * (1 - 1e-12)):
        raise ValueError("pixels overlap")
