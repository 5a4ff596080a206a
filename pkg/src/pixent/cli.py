"""Command-line front end: ``pixent {design,simulate,certify,beam,report}``.

Exit status: 0 success, 2 usage, 3 data or validation error, 4 numerical
non-convergence.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import replace
from pathlib import Path

import numpy as np

from .basis_design import ConvergenceError, LayoutError, render_hologram
from .config import ExperimentConfig, load_config
from .dataio import (
    DataError,
    Manifest,
    heatmap_svg,
    layout_svg,
    read_manifest,
    write_counts_csv,
    write_layout,
    write_manifest,
    write_pgm,
)
from .optics import BEAM_PRESETS, GaussianBeam, Lens, QuadratureWarning, Space, propagate_steps
from .pipeline import certify_dataset, design_layout, forward_state, parse_bases, simulate_dataset
from .stats import BootstrapError

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _config(args) -> ExperimentConfig:
    cfg = load_config(args.config)
    lay, sim = cfg.layout, cfg.simulate
    if getattr(args, "d", None) is not None:
        lay = replace(lay, d=args.d)
    if getattr(args, "seed", None) is not None:
        sim = replace(sim, seed=args.seed)
    for name in ("noise", "model", "bases", "total_pairs"):
        val = getattr(args, name, None)
        if val is not None:
            sim = replace(sim, **{name: val})
    if getattr(args, "no_optimize", False):
        lay = replace(lay, optimize=False)
    if lay.d < 1:
        raise UsageError(f"dimension must be a positive integer, got {lay.d}")
    return replace(cfg, layout=lay, simulate=sim)


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_design(args) -> int:
    cfg = _config(args)
    out = _outdir(args)
    layout, eq = design_layout(cfg)
    write_layout(out / "layout.json", layout)
    (out / "layout.svg").write_text(layout_svg(layout))
    print(f"d = {layout.d}, enclosing radius = {layout.enclosing_radius:g}")
    for i, ring in enumerate(layout.rings()):
        dist = float(np.hypot(*layout.centers[ring[0]]))
        print(f"  ring {i}: {len(ring):3d} pixels at |c| = {dist:.4f}, radius = {layout.radii[ring[0]]:.4f}")
    if eq is not None:
        print(f"  diagonal rate max/min = {eq.rate_ratio:.5f}")
    if args.hologram:
        coeffs = np.ones(layout.d) / math.sqrt(layout.d)
        write_pgm(out / "hologram.pgm", render_hologram(layout, coeffs, tuple(args.raster)))
    print(f"wrote {out / 'layout.json'}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _config(args)
    out = _outdir(args)
    sim = cfg.simulate
    pairs = parse_bases(sim.bases, cfg.layout.d)
    layout_ref = None
    layout = None
    if sim.model == "optics":
        layout, _ = design_layout(cfg)
        write_layout(out / "layout.json", layout)
        layout_ref = "layout.json"
    state = forward_state(cfg, layout)
    settings = simulate_dataset(state, pairs, sim.total_pairs, sim.seed)
    files = []
    for c in settings:
        name = "counts_" + c.basis_pair.label.replace(":k=", "") + ".csv"
        write_counts_csv(out / name, c.counts)
        files.append(name)
    manifest = Manifest(
        d=cfg.layout.d,
        settings=settings,
        files=files,
        layout=layout_ref,
        jtma=cfg.jtma if sim.model == "optics" else None,
        seed=sim.seed,
    )
    write_manifest(out / "manifest.json", manifest)
    print(f"model={sim.model} d={cfg.layout.d} noise={sim.noise:g} pairs/setting~{sim.total_pairs:g}")
    if state.d <= 31:
        print(f"true fidelity to Phi+ = {state.fidelity_phi_plus():.6f}")
    print(f"wrote {len(files)} count files and {out / 'manifest.json'}")
    return EXIT_OK


def cmd_certify(args) -> int:
    manifest = read_manifest(Path(args.manifest))
    if not manifest.settings:
        raise DataError("manifest lists no basis settings")
    seed = args.seed if args.seed is not None else (manifest.seed or 0)
    report = certify_dataset(manifest.settings, manifest.d, args.resamples, seed)
    text = report.summary()
    print(text)
    if args.out:
        out = _outdir(args)
        (out / "report.txt").write_text(text + "\n")
        (out / "report.json").write_text(json.dumps(report.to_json(), indent=2) + "\n")
        for c, f in zip(manifest.settings, manifest.files):
            svg = heatmap_svg(c.counts, f"{c.basis_pair.label} (normalized counts)")
            (out / (Path(f).stem + ".svg")).write_text(svg)
    return EXIT_OK


def _parse_elements(text: str) -> list:
    elements = []
    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        kind, _, val = tok.partition(":")
        kind = kind.strip().lower()
        if kind == "lens":
            elements.append(Lens(float(val)))
        elif kind == "space":
            elements.append(Space(float(val)))
        else:
            raise UsageError(f"unknown optical element {tok!r} (use lens:F or space:L, in mm)")
    return elements


def cmd_beam(args) -> int:
    expected = None
    if args.preset:
        if args.preset not in BEAM_PRESETS:
            raise UsageError(f"unknown preset {args.preset!r}; choose from {sorted(BEAM_PRESETS)}")
        beam, elements, expected = BEAM_PRESETS[args.preset]
    else:
        bc = load_config(args.config).beam
        if bc.preset:
            beam, elements, expected = BEAM_PRESETS[bc.preset]
        elif bc.waist_um is None or bc.wavelength_nm is None:
            raise UsageError("give --preset or a [beam] section with waist_um and wavelength_nm")
        else:
            beam = GaussianBeam(bc.waist_um, bc.waist_position_mm, bc.wavelength_nm)
            elements = _parse_elements(bc.elements)
    print(f"{'element':>14} {'waist [um]':>12} {'waist at [mm]':>14}")
    print(f"{'input':>14} {beam.waist:12.1f} {beam.waist_position:14.2f}")
    for el, b in zip(elements, propagate_steps(beam, elements)):
        name = f"lens f={el.focal_length:g}" if isinstance(el, Lens) else f"space {el.distance:g}"
        print(f"{name:>14} {b.waist:12.1f} {b.waist_position:14.2f}")
    if expected is not None:
        final = propagate_steps(beam, elements)[-1].waist
        print(f"target {expected:g} um, deviation {100 * (final / expected - 1):+.2f} %")
    return EXIT_OK


def cmd_report(args) -> int:
    data = json.loads(Path(args.report).read_text())
    f = data["fidelity"]
    e = data["eof"]
    lo, hi = data["d_ent_interval"]
    rows = [
        ("dimension", f"{data['d']}"),
        ("method", data["method"]),
        ("fidelity", f"{f['value']:.4f} +/- {f['std'] or float('nan'):.4f} ({f['kind']})"),
        ("d_ent", f"{data['d_ent']} (interval {lo}..{hi})"),
        ("EoF [ebits]", f"{e['value']:.3f} +/- {e['std'] or float('nan'):.3f}"),
    ]
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k:<{width}}  {v}")
    for note in f.get("notes", []):
        print(f"note: {note}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pixent", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, out_default="out"):
        p.add_argument("--config", help="INI experiment config")
        p.add_argument("--seed", type=int)
        p.add_argument("--out", default=out_default, help="output directory")

    p = sub.add_parser("design", help="pack and equalize a pixel basis")
    common(p)
    p.add_argument("--d", type=int)
    p.add_argument("--no-optimize", action="store_true", help="skip rate equalization")
    p.add_argument("--hologram", action="store_true", help="also write hologram.pgm for the uniform superposition")
    p.add_argument("--raster", type=int, nargs=2, default=(512, 512), metavar=("W", "H"))
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("simulate", help="forward-model count matrices")
    common(p)
    p.add_argument("--d", type=int)
    p.add_argument("--bases", help="e.g. wf:0,wf:1 or std,wf:0 or all")
    p.add_argument("--model", choices=("optics", "ideal"))
    p.add_argument("--noise", type=float, help="isotropic white-noise fraction")
    p.add_argument("--total-pairs", dest="total_pairs", type=float, help="expected pairs per setting")
    p.add_argument("--no-optimize", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("certify", help="fidelity, d_ent and EoF from a manifest")
    p.add_argument("manifest")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="directory for report and heatmaps")
    p.add_argument("--resamples", type=int, default=1000)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("beam", help="Gaussian beam propagation table")
    p.add_argument("--preset", help=f"one of {', '.join(BEAM_PRESETS)}")
    p.add_argument("--config")
    p.set_defaults(func=cmd_beam)

    p = sub.add_parser("report", help="print a saved report.json")
    p.add_argument("report")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always", QuadratureWarning)
            return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except BootstrapError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (LayoutError, DataError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
