"""Forward model (optics -> state -> counts) and certification from count data."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .basis_design import EqualizationResult, PixelLayout, optimize_radii, pack_pixels
from .config import ExperimentConfig
from .numtheory import is_prime
from .optics import amplitude_matrix
from .state import (
    BasisPair,
    CountMatrix,
    TwoQuditState,
    apply_isotropic_noise,
    counts_to_probs,
    outcome_probabilities,
    phi_plus,
    pure_state_from_amplitudes,
    simulate_counts,
)
from .stats import poisson_bootstrap
from .witness import (
    CertificationReport,
    FidelityResult,
    certify_dimension,
    eof_bound,
    fidelity_exact_all_mubs,
    fidelity_lower_bound_standard_wf,
    fidelity_lower_bound_two_wf,
)


class CoverageError(ValueError):
    """Not enough basis settings to evaluate any witness."""


def design_layout(cfg: ExperimentConfig) -> tuple[PixelLayout, EqualizationResult | None]:
    lc = cfg.layout
    layout = pack_pixels(lc.d, lc.enclosing_radius, lc.min_gap, lc.gap_fraction, lc.seed)
    if not lc.optimize or lc.d == 1:
        return layout, None
    res = optimize_radii(layout, cfg.jtma, cfg.quadrature, tol=lc.tol)
    return res.layout, res


def forward_state(cfg: ExperimentConfig, layout: PixelLayout | None = None) -> TwoQuditState:
    sc = cfg.simulate
    if sc.model == "ideal":
        s = phi_plus(cfg.layout.d)
    elif sc.model == "optics":
        if layout is None:
            layout, _ = design_layout(cfg)
        s = pure_state_from_amplitudes(amplitude_matrix(layout, cfg.jtma, cfg.quadrature))
    else:
        raise ValueError(f"unknown simulation model {sc.model!r}")
    return apply_isotropic_noise(s, sc.noise) if sc.noise else s


def parse_bases(text: str, d: int | None = None) -> list[BasisPair]:
    """Comma-separated labels ('std,wf:0,wf:1'); 'all' expands to every MUB for d."""
    if text.strip().lower() == "all":
        if d is None:
            raise ValueError("'all' needs the dimension")
        return all_mub_pairs(d)
    labels = [t for t in (x.strip() for x in text.split(",")) if t]
    if not labels:
        raise ValueError("no bases requested")
    return [BasisPair.matched(t) for t in labels]


def all_mub_pairs(d: int) -> list[BasisPair]:
    return [BasisPair.matched("standard")] + [BasisPair.matched(f"wf:{k}") for k in range(d)]


def simulate_dataset(
    state: TwoQuditState, pairs: Sequence[BasisPair], total_pairs: float, seed: int
) -> list[CountMatrix]:
    out = []
    for i, pair in enumerate(pairs):
        probs = np.clip(outcome_probabilities(state, pair.a, pair.b), 0.0, None)
        sub_seed = int(np.random.SeedSequence([seed, i]).generate_state(1)[0])
        out.append(simulate_counts(probs, total_pairs, sub_seed, pair))
    return out


@dataclass(frozen=True)
class WitnessPlan:
    method: str
    fidelity: Callable[[list[CountMatrix]], FidelityResult]
    eof_indices: tuple[int, int]


def plan_witness(settings: Sequence[CountMatrix], d: int) -> WitnessPlan:
    """Pick the strongest witness the available basis settings allow.

    All d + 1 MUBs (prime d) give the exact fidelity; standard + one WF basis
    gives the standard/WF bound; otherwise the first valid pair of WF bases.
    """
    std_idx = None
    wf_idx: dict[int, int] = {}
    for i, c in enumerate(settings):
        if c.d != d:
            raise ValueError(f"setting {i} has d={c.d}, manifest says {d}")
        a, b = c.basis_pair.a, c.basis_pair.b
        if a.kind != b.kind or a.k != b.k:
            continue
        if a.kind == "standard":
            std_idx = i if std_idx is None else std_idx
        elif b.conjugate and not a.conjugate:
            wf_idx.setdefault(a.k, i)

    if std_idx is not None and is_prime(d) and d > 2 and len(wf_idx) == d:
        order = [wf_idx[k] for k in range(d)]

        def exact(cs):
            return fidelity_exact_all_mubs(
                counts_to_probs(cs[std_idx]), [counts_to_probs(cs[i]) for i in order], d
            )

        return WitnessPlan("all-mubs", exact, (std_idx, order[0]))

    if std_idx is not None and wf_idx:
        k, i = next(iter(wf_idx.items()))

        def std_wf(cs):
            return fidelity_lower_bound_standard_wf(counts_to_probs(cs[std_idx]), counts_to_probs(cs[i]), k, d)

        return WitnessPlan("standard+wf", std_wf, (std_idx, i))

    ks = list(wf_idx)
    for x in range(len(ks)):
        for y in range(x + 1, len(ks)):
            k, kp = ks[x], ks[y]
            if d % 2 == 1 and math.gcd(kp - k, d) == 1:
                i, j = wf_idx[k], wf_idx[kp]

                def two_wf(cs, i=i, j=j, k=k, kp=kp):
                    pk, pkp = counts_to_probs(cs[i]), counts_to_probs(cs[j])
                    fwd = fidelity_lower_bound_two_wf(pk, pkp, k, kp, d)
                    rev = fidelity_lower_bound_two_wf(pkp, pk, kp, k, d)
                    return fwd if fwd.value >= rev.value else rev

                return WitnessPlan("two-wf", two_wf, (i, j))
    raise CoverageError("need all MUBs, standard + WF, or two WF bases with gcd(k'-k, d) = 1")


def certify_dataset(
    settings: Sequence[CountMatrix], d: int, n_resamples: int = 1000, seed: int = 0
) -> CertificationReport:
    settings = list(settings)
    for c in settings:
        if c.total <= 0:
            raise ValueError(f"setting {c.basis_pair.label} has no counts")
    plan = plan_witness(settings, d)
    i, j = plan.eof_indices

    def eof_of(cs):
        return eof_bound(counts_to_probs(cs[i]), counts_to_probs(cs[j]), d).value

    fid = plan.fidelity(settings)
    eof = eof_bound(counts_to_probs(settings[i]), counts_to_probs(settings[j]), d)
    f_boot = poisson_bootstrap(settings, lambda cs: plan.fidelity(cs).value, n_resamples, seed)
    e_boot = poisson_bootstrap(settings, eof_of, n_resamples, seed)
    d_ent = certify_dimension(fid.value, d)
    interval = (
        certify_dimension(fid.value - f_boot.std, d),
        certify_dimension(fid.value + f_boot.std, d),
    )
    return CertificationReport(
        d=d,
        fidelity=fid,
        d_ent=d_ent,
        eof=eof,
        uncertainties={"fidelity": f_boot.std, "eof": e_boot.std},
        d_ent_interval=interval,
        method=plan.method,
    )
