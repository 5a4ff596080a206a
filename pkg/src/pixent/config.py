"""Experiment configuration: INI file with flat key = value sections.

    [layout]
    d = 7
    enclosing_radius = 0.5
    gap_fraction = 0.1
    optimize = true
    tol = 0.01

    [jtma]
    sigma_p = 0.02
    sigma_s = 1.0
    sigma_c = inf
    sinc_scale = 1.0

    [quadrature]
    disc_radial = 24

    [simulate]
    model = optics        ; or "ideal" (Phi+ without optics)
    noise = 0.0
    total_pairs = 1e6
    bases = wf:0,wf:1
    seed = 1

    [beam]
    preset = pump         ; pump | slm | ift, or give the fields below
    waist_um = 950
    waist_position_mm = 0
    wavelength_nm = 405
    elements = lens:250, space:300, lens:50

Every section is optional; missing keys take the dataclass defaults.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field, fields
from pathlib import Path

from .optics import JtmaParams, QuadratureSpec


@dataclass
class LayoutConfig:
    d: int = 7
    enclosing_radius: float = 0.5
    gap_fraction: float = 0.1
    min_gap: float | None = None
    optimize: bool = True
    tol: float = 0.01
    seed: int = 0


@dataclass
class SimulateConfig:
    model: str = "optics"
    noise: float = 0.0
    total_pairs: float = 1e6
    bases: str = "wf:0,wf:1"
    seed: int = 1


@dataclass
class BeamConfig:
    preset: str | None = None
    waist_um: float | None = None
    waist_position_mm: float = 0.0
    wavelength_nm: float | None = None
    elements: str = ""


@dataclass
class ExperimentConfig:
    layout: LayoutConfig = field(default_factory=LayoutConfig)
    jtma: JtmaParams = field(default_factory=JtmaParams.desk)
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    simulate: SimulateConfig = field(default_factory=SimulateConfig)
    beam: BeamConfig = field(default_factory=BeamConfig)


def _coerce(cls, section: configparser.SectionProxy | None, base=None):
    if section is None:
        return base if base is not None else cls()
    kwargs = {}
    for f in fields(cls):
        if f.name not in section:
            continue
        raw = section[f.name].strip()
        kind = str(f.type)
        if "bool" in kind:
            kwargs[f.name] = section.getboolean(f.name)
        elif "int" in kind and "float" not in kind:
            kwargs[f.name] = int(float(raw))
        elif "float" in kind:
            kwargs[f.name] = None if raw.lower() == "none" else float(raw)
        else:
            kwargs[f.name] = raw
    unknown = set(section) - {f.name for f in fields(cls)}
    if unknown:
        raise ValueError(f"unknown keys in [{section.name}]: {sorted(unknown)}")
    if base is not None:
        merged = {f.name: getattr(base, f.name) for f in fields(cls)}
        merged.update(kwargs)
        kwargs = merged
    return cls(**kwargs)


def load_config(path: str | Path | None) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    with open(path) as fh:
        parser.read_file(fh)
    get = lambda name: parser[name] if parser.has_section(name) else None  # noqa: E731
    return ExperimentConfig(
        layout=_coerce(LayoutConfig, get("layout")),
        jtma=_coerce(JtmaParams, get("jtma"), base=JtmaParams.desk()),
        quadrature=_coerce(QuadratureSpec, get("quadrature")),
        simulate=_coerce(SimulateConfig, get("simulate")),
        beam=_coerce(BeamConfig, get("beam")),
    )
