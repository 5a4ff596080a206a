"""File formats: count CSVs, the JSON manifest, layouts, SVG renderings and PGM masks.

Manifest (JSON)::

    {
      "format": "pixent-manifest/1",
      "d": 7,
      "seed": 1,
      "layout": "layout.json",          # optional, relative to the manifest
      "jtma": {"sigma_p": ..., ...},    # optional provenance of simulated data
      "settings": [
        {"basis_a": "wf:k=0", "basis_b": "wf:k=0", "conjugate_b": true,
         "counts": "counts_wf0.csv", "acquisition_time": null}
      ]
    }

Count files hold d rows of d comma-separated non-negative integers.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .basis_design import PhaseMask, PixelLayout
from .optics import JtmaParams
from .state import BasisPair, BasisSpec, CountMatrix

MANIFEST_FORMAT = "pixent-manifest/1"


class DataError(ValueError):
    """Malformed or inconsistent input files."""


def write_counts_csv(path: Path, counts: np.ndarray) -> None:
    counts = np.asarray(counts, dtype=np.int64)
    lines = [",".join(str(int(v)) for v in row) for row in counts]
    Path(path).write_text("\n".join(lines) + "\n")


def read_counts_csv(path: Path) -> np.ndarray:
    rows = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([int(tok) for tok in line.split(",")])
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: non-integer entry") from exc
    if not rows or any(len(r) != len(rows) for r in rows):
        raise DataError(f"{path}: expected a square d x d table")
    arr = np.array(rows, dtype=np.int64)
    if np.any(arr < 0):
        raise DataError(f"{path}: negative counts")
    return arr


@dataclass
class Manifest:
    d: int
    settings: list[CountMatrix]
    files: list[str] = field(default_factory=list)
    layout: str | None = None
    jtma: JtmaParams | None = None
    seed: int | None = None

    def to_json(self) -> dict:
        return {
            "format": MANIFEST_FORMAT,
            "d": self.d,
            "seed": self.seed,
            "layout": self.layout,
            "jtma": None if self.jtma is None else _jtma_json(self.jtma),
            "settings": [
                {
                    "basis_a": c.basis_pair.a.label,
                    "basis_b": c.basis_pair.b.label,
                    "conjugate_b": c.basis_pair.b.conjugate,
                    "counts": f,
                    "acquisition_time": c.acquisition_time,
                }
                for c, f in zip(self.settings, self.files)
            ],
        }


def _jtma_json(p: JtmaParams) -> dict:
    return {k: (str(v) if v == float("inf") else v) for k, v in asdict(p).items()}


def write_manifest(path: Path, manifest: Manifest) -> None:
    Path(path).write_text(json.dumps(manifest.to_json(), indent=2) + "\n")


def read_manifest(path: Path) -> Manifest:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read manifest {path}: {exc}") from exc
    if data.get("format", MANIFEST_FORMAT) != MANIFEST_FORMAT:
        raise DataError(f"unsupported manifest format {data.get('format')!r}")
    d = int(data["d"])
    settings, files = [], []
    for entry in data.get("settings", []):
        pair = BasisPair(
            BasisSpec.parse(entry["basis_a"]),
            BasisSpec.parse(entry["basis_b"], conjugate=bool(entry.get("conjugate_b", True))),
        )
        counts_path = path.parent / entry["counts"]
        if not counts_path.exists():
            raise DataError(f"count file {counts_path} does not exist")
        counts = read_counts_csv(counts_path)
        if counts.shape != (d, d):
            raise DataError(f"{counts_path}: shape {counts.shape} inconsistent with d={d}")
        settings.append(CountMatrix(d, pair, counts, entry.get("acquisition_time")))
        files.append(entry["counts"])
    jtma = data.get("jtma")
    return Manifest(
        d=d,
        settings=settings,
        files=files,
        layout=data.get("layout"),
        jtma=None if jtma is None else JtmaParams(**{k: float(v) for k, v in jtma.items()}),
        seed=data.get("seed"),
    )


def write_layout(path: Path, layout: PixelLayout) -> None:
    Path(path).write_text(json.dumps(layout.to_dict(), indent=2) + "\n")


def read_layout(path: Path) -> PixelLayout:
    return PixelLayout.from_dict(json.loads(Path(path).read_text()))


# --------------------------------------------------------------------------- rendering


def layout_svg(layout: PixelLayout, size: int = 400) -> str:
    s = size / (2.2 * layout.enclosing_radius)
    c0 = size / 2
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="black"/>',
        f'<circle cx="{c0}" cy="{c0}" r="{layout.enclosing_radius * s:.3f}" fill="none" stroke="#888" stroke-dasharray="4 3"/>',
    ]
    for m, (c, r) in enumerate(zip(layout.centers, layout.radii)):
        x, y = c0 + c[0] * s, c0 - c[1] * s
        parts.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{r * s:.3f}" fill="#4a7bd0" stroke="white" stroke-width="0.5"/>')
        parts.append(
            f'<text x="{x:.3f}" y="{y:.3f}" font-size="{max(6, r * s * 0.6):.1f}" fill="white" '
            f'text-anchor="middle" dominant-baseline="central">{m}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _lerp_color(t: float) -> str:
    lo = np.array([255, 255, 255])
    hi = np.array([20, 40, 120])
    rgb = np.round(lo + (hi - lo) * float(np.clip(t, 0, 1))).astype(int)
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def heatmap_svg(matrix: np.ndarray, title: str = "", cell: int = 12) -> str:
    """Counts normalized to the matrix maximum on a linear white-to-blue scale."""
    m = np.asarray(matrix, dtype=float)
    peak = m.max() if m.max() > 0 else 1.0
    d = m.shape[0]
    pad = 24
    w = h = d * cell + 2 * pad
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<text x="{w / 2}" y="{pad * 0.65}" font-size="12" text-anchor="middle">{title}</text>',
    ]
    for i in range(d):
        for j in range(d):
            parts.append(
                f'<rect x="{pad + j * cell}" y="{pad + i * cell}" width="{cell}" height="{cell}" '
                f'fill="{_lerp_color(m[i, j] / peak)}"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_pgm(path: Path, mask: PhaseMask) -> None:
    """Binary 8-bit PGM; phase maps linearly to 0-255, switched-off area to 0."""
    gray = mask.to_gray()
    header = f"P5\n{mask.width} {mask.height}\n255\n".encode()
    Path(path).write_bytes(header + gray.tobytes())


def read_pgm(path: Path) -> np.ndarray:
    raw = Path(path).read_bytes()
    magic, dims, maxval, body = raw.split(b"\n", 3)
    if magic != b"P5" or maxval != b"255":
        raise DataError(f"{path}: not an 8-bit binary PGM")
    w, h = (int(x) for x in dims.split())
    return np.frombuffer(body, dtype=np.uint8).reshape(h, w)
