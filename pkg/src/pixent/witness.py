"""Fidelity witnesses, Schmidt-number thresholds and the entanglement-of-formation bound.

All functions take normalized outcome-probability matrices P[i, j] for a
basis pair (basis on arm A, conjugated basis on arm B).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .mub import NonPrimeDimensionWarning
from .numtheory import is_prime

NORM_TOL = 1e-6


@dataclass(frozen=True)
class FidelityResult:
    value: float
    kind: str  # "exact" | "lower_bound"
    bases_used: tuple[str, ...]
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class TargetState:
    """Schmidt coefficients of the target |Phi> = sum_n lambda_n |nn>."""

    lambdas: np.ndarray = field(repr=False)

    def __post_init__(self):
        lam = np.sort(np.abs(np.asarray(self.lambdas, dtype=float)))[::-1]
        if abs(np.sum(lam**2) - 1) > 1e-9:
            raise ValueError("Schmidt coefficients must satisfy sum lambda^2 = 1")
        object.__setattr__(self, "lambdas", lam)

    @property
    def d(self) -> int:
        return len(self.lambdas)

    @property
    def is_uniform(self) -> bool:
        return bool(np.ptp(self.lambdas) == 0)

    @classmethod
    def maximally_entangled(cls, d: int) -> "TargetState":
        return cls(np.full(d, 1 / math.sqrt(d)))


@dataclass(frozen=True)
class EofBound:
    value: float  # clamped at zero
    raw: float
    conditional_entropies: tuple[float, float]


def _check_probs(*mats: np.ndarray) -> int:
    d = None
    for p in mats:
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ValueError("probability matrices must be square")
        if d is not None and p.shape[0] != d:
            raise ValueError("probability matrices differ in dimension")
        d = p.shape[0]
        if np.any(p < -NORM_TOL) or abs(p.sum() - 1) > NORM_TOL:
            raise ValueError("probability matrix is not normalized")
    return d


def f1(probs) -> float:
    """(1/d) * sum of the correlated (diagonal) probabilities."""
    p = np.asarray(probs, dtype=float)
    return float(np.trace(p) / p.shape[0])


def cross_term(probs) -> float:
    """sum over constrained quadruples of gamma * sqrt(P[m', n'] P[m, n]).

    gamma = 1/d fixes n' = n + m' - m (mod d), after which the index constraints
    reduce to m != n and m' != m. Grouping by the offset s = n - m turns the
    triple sum into sum_s [(sum_m sqrt P[m, m+s])^2 - sum_m P[m, m+s]].
    """
    p = np.asarray(probs, dtype=float)
    d = p.shape[0]
    m = np.arange(d)
    total = 0.0
    for s in range(1, d):
        band = np.clip(p[m, (m + s) % d], 0.0, None)
        total += np.sum(np.sqrt(band)) ** 2 - np.sum(band)
    return total / d


def _bound(p_std, p_mub) -> float:
    d = p_std.shape[0]
    return f1(p_std) + float(np.trace(p_mub)) - 1 / d - cross_term(p_std)


def fidelity_lower_bound_two_wf(probs_k, probs_kp, k: int, kp: int, d: int) -> FidelityResult:
    """Fidelity bound from WF bases k and k' alone.

    Basis k plays the standard-basis role: it supplies the 1/d-weighted diagonal
    and the cross-term penalty, while k' supplies the full diagonal sum.
    """
    pk = np.asarray(probs_k, dtype=float)
    pkp = np.asarray(probs_kp, dtype=float)
    if _check_probs(pk, pkp) != d:
        raise ValueError("probability matrices do not match d")
    if d % 2 == 0 or k % d == kp % d or math.gcd(kp - k, d) != 1:
        raise ValueError(f"invalid WF pair (k={k}, k'={kp}) for d={d}")
    notes = ()
    if not is_prime(d):
        notes = (f"d={d} is not prime; bound relies on gcd(k'-k, d)=1",)
        warnings.warn(notes[0], NonPrimeDimensionWarning, stacklevel=2)
    value = _bound(pk, pkp)
    return FidelityResult(value, "lower_bound", (f"wf:k={k}", f"wf:k={kp}"), notes)


def fidelity_lower_bound_standard_wf(probs_std, probs_k, k: int, d: int) -> FidelityResult:
    """Larger of the standard-as-reference bound and its exchanged-role variant."""
    ps = np.asarray(probs_std, dtype=float)
    pk = np.asarray(probs_k, dtype=float)
    if _check_probs(ps, pk) != d:
        raise ValueError("probability matrices do not match d")
    if not 0 <= k < d:
        raise ValueError(f"WF index {k} outside [0, {d})")
    value = max(_bound(ps, pk), _bound(pk, ps))
    return FidelityResult(value, "lower_bound", ("standard", f"wf:k={k}"))


def fidelity_exact_all_mubs(probs_std, probs_wf, d: int) -> FidelityResult:
    """Exact fidelity to Phi+ from the standard basis and all d WF bases (prime d).

    Summing the WF diagonal over every k cancels all cross terms, leaving
    F = (1/d) tr P_std + (sum_k tr P_k - 1) / d.
    """
    if not is_prime(d) or d == 2:
        raise ValueError(f"exact fidelity needs an odd prime dimension, got {d}")
    probs_wf = [np.asarray(p, dtype=float) for p in probs_wf]
    if len(probs_wf) != d:
        raise ValueError(f"need all {d} WF bases, got {len(probs_wf)}")
    ps = np.asarray(probs_std, dtype=float)
    _check_probs(ps, *probs_wf)
    value = f1(ps) + (sum(float(np.trace(p)) for p in probs_wf) - 1) / d
    return FidelityResult(value, "exact", ("standard",) + tuple(f"wf:k={k}" for k in range(d)))


def schmidt_threshold(target: TargetState, r: int) -> float:
    """B_r: the sum of the r largest squared Schmidt coefficients."""
    if not 0 <= r <= target.d:
        raise ValueError(f"r={r} outside [0, {target.d}]")
    if target.is_uniform:
        return r / target.d
    return float(np.sum(target.lambdas[:r] ** 2))


def certify_dimension(fidelity: float, target: TargetState | int) -> int:
    """Largest r + 1 with F > B_r, clamped to [1, d]."""
    if isinstance(target, int):
        target = TargetState.maximally_entangled(target)
    d_ent = 1
    for r in range(1, target.d):
        if fidelity > schmidt_threshold(target, r):
            d_ent = r + 1
        else:
            break
    return d_ent


def shannon(p) -> float:
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def conditional_entropy(probs, transpose: bool = False) -> float:
    """H({P_jk}) - H({P_j}) with P_j = sum_k P_jk (or the row/column-swapped variant)."""
    p = np.asarray(probs, dtype=float)
    if transpose:
        p = p.T
    return shannon(p) - shannon(p.sum(axis=1))


def eof_bound(probs_1, probs_2, d: int | None = None, transpose: bool = False) -> EofBound:
    """E_oF >= log2(d) - H(A1|B1) - H(A2|B2), clamped at zero."""
    p1 = np.asarray(probs_1, dtype=float)
    p2 = np.asarray(probs_2, dtype=float)
    dd = _check_probs(p1, p2)
    if d is not None and d != dd:
        raise ValueError("probability matrices do not match d")
    h1 = conditional_entropy(p1, transpose)
    h2 = conditional_entropy(p2, transpose)
    raw = math.log2(dd) - h1 - h2
    return EofBound(max(0.0, raw), raw, (h1, h2))


@dataclass(frozen=True)
class CertificationReport:
    d: int
    fidelity: FidelityResult
    d_ent: int
    eof: EofBound
    uncertainties: dict[str, float]
    d_ent_interval: tuple[int, int]
    method: str

    def __post_init__(self):
        if not 1 <= self.d_ent <= self.d:
            raise ValueError("d_ent outside [1, d]")
        if self.eof.value > math.log2(self.d) + 1e-9:
            raise ValueError("EoF bound exceeds log2(d)")

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "method": self.method,
            "fidelity": {
                "value": self.fidelity.value,
                "kind": self.fidelity.kind,
                "bases_used": list(self.fidelity.bases_used),
                "std": self.uncertainties.get("fidelity"),
                "notes": list(self.fidelity.notes),
            },
            "d_ent": self.d_ent,
            "d_ent_interval": list(self.d_ent_interval),
            "eof": {
                "value": self.eof.value,
                "raw": self.eof.raw,
                "std": self.uncertainties.get("eof"),
            },
        }

    def summary(self) -> str:
        f_std = self.uncertainties.get("fidelity", float("nan"))
        e_std = self.uncertainties.get("eof", float("nan"))
        label = "F" if self.fidelity.kind == "exact" else "F (lower bound)"
        lo, hi = self.d_ent_interval
        return "\n".join(
            [
                f"d = {self.d}  [{self.method}; bases: {', '.join(self.fidelity.bases_used[:4])}"
                + (" ..." if len(self.fidelity.bases_used) > 4 else "") + "]",
                f"{label} = {100 * self.fidelity.value:.2f} +/- {100 * f_std:.2f} %",
                f"d_ent = {self.d_ent}   (range over F +/- sigma: {lo}..{hi})",
                f"EoF >= {self.eof.value:.3f} +/- {e_std:.3f} ebits   (raw {self.eof.raw:.3f}, max {math.log2(self.d):.3f})",
            ]
        )
