"""Two-qudit states, basis-pair outcome statistics and Poisson count synthesis.

Two-photon kets are indexed |m n> -> m * d + n (numpy kron order).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .mub import standard_matrix, wf_matrix

MAX_DENSE_D = 31


@dataclass(frozen=True)
class BasisSpec:
    """A local measurement basis: the standard pixel basis or WF basis k.

    ``conjugate`` requests the complex-conjugated vectors, as used on the idler arm.
    """

    kind: str = "standard"
    k: int = 0
    conjugate: bool = False

    def __post_init__(self):
        if self.kind not in ("standard", "wf"):
            raise ValueError(f"unknown basis kind {self.kind!r}")

    @property
    def label(self) -> str:
        return "standard" if self.kind == "standard" else f"wf:k={self.k}"

    def matrix(self, d: int) -> np.ndarray:
        if self.kind == "standard":
            return standard_matrix(d)
        if not 0 <= self.k < d:
            raise ValueError(f"WF index {self.k} outside [0, {d})")
        return wf_matrix(d, self.k, self.conjugate)

    @classmethod
    def parse(cls, text: str, conjugate: bool = False) -> "BasisSpec":
        """Accepts 'standard', 'std', 'wf:3' or 'wf:k=3'."""
        t = text.strip().lower()
        if t in ("standard", "std"):
            return cls("standard", 0, conjugate)
        m = re.fullmatch(r"wf:(?:k=)?(\d+)", t)
        if not m:
            raise ValueError(f"cannot parse basis label {text!r}")
        return cls("wf", int(m.group(1)), conjugate)


@dataclass(frozen=True)
class BasisPair:
    a: BasisSpec
    b: BasisSpec

    @classmethod
    def matched(cls, label: str) -> "BasisPair":
        """Same basis on both arms, conjugated on arm B."""
        return cls(BasisSpec.parse(label), BasisSpec.parse(label, conjugate=True))

    @property
    def label(self) -> str:
        return self.a.label


@dataclass(frozen=True)
class TwoQuditState:
    """Either pure (vector) or dense mixed (matrix), plus an optional white-noise weight.

    The represented operator is (1 - noise) * rho_0 + noise * I / d^2.
    """

    d: int
    vector: np.ndarray | None = field(default=None, repr=False)
    matrix: np.ndarray | None = field(default=None, repr=False)
    noise: float = 0.0

    def __post_init__(self):
        if (self.vector is None) == (self.matrix is None):
            raise ValueError("give exactly one of vector or matrix")
        n = self.d * self.d
        if self.vector is not None:
            v = np.asarray(self.vector, dtype=complex).reshape(n)
            if abs(np.vdot(v, v).real - 1) > 1e-10:
                raise ValueError("pure state is not normalized")
            object.__setattr__(self, "vector", v)
        else:
            rho = np.asarray(self.matrix, dtype=complex).reshape(n, n)
            if abs(np.trace(rho).real - 1) > 1e-10:
                raise ValueError("density matrix trace != 1")
            if np.max(np.abs(rho - rho.conj().T)) > 1e-10:
                raise ValueError("density matrix is not Hermitian")
            object.__setattr__(self, "matrix", rho)
        if not 0 <= self.noise <= 1:
            raise ValueError("noise weight outside [0, 1]")

    @property
    def is_pure(self) -> bool:
        return self.vector is not None and self.noise == 0

    def density_matrix(self) -> np.ndarray:
        n = self.d * self.d
        if n > MAX_DENSE_D**2:
            raise MemoryError(f"dense density matrix refused for d={self.d} > {MAX_DENSE_D}")
        rho = np.outer(self.vector, self.vector.conj()) if self.vector is not None else self.matrix
        return (1 - self.noise) * rho + self.noise * np.eye(n) / n

    def fidelity_phi_plus(self) -> float:
        """<Phi+|rho|Phi+> with |Phi+> = sum_m |mm> / sqrt(d)."""
        d = self.d
        diag = np.arange(d) * (d + 1)
        if self.vector is not None:
            f0 = abs(np.sum(self.vector[diag])) ** 2 / d
        else:
            f0 = float(np.sum(self.matrix[np.ix_(diag, diag)]).real) / d
        return float((1 - self.noise) * f0 + self.noise / d**2)


def phi_plus(d: int) -> TwoQuditState:
    return TwoQuditState(d, vector=np.eye(d).reshape(-1) / math.sqrt(d))


def maximally_mixed(d: int) -> TwoQuditState:
    return apply_isotropic_noise(phi_plus(d), 1.0)


def pure_state_from_amplitudes(amp) -> TwoQuditState:
    """Pure state with coefficients c_mn = A[m, n] / ||A||_F."""
    amp = np.asarray(amp, dtype=complex)
    if amp.ndim != 2 or amp.shape[0] != amp.shape[1]:
        raise ValueError("amplitude matrix must be square")
    norm = np.linalg.norm(amp)
    if norm == 0:
        raise ValueError("zero amplitude matrix")
    return TwoQuditState(amp.shape[0], vector=(amp / norm).reshape(-1))


def apply_isotropic_noise(s: TwoQuditState, p: float) -> TwoQuditState:
    """(1 - p) rho + p I / d^2."""
    if not 0 <= p <= 1:
        raise ValueError(f"noise probability {p} outside [0, 1]")
    if s.matrix is not None:
        rho = s.density_matrix()
        n = s.d * s.d
        return TwoQuditState(s.d, matrix=(1 - p) * rho + p * np.eye(n) / n)
    return TwoQuditState(s.d, vector=s.vector, noise=1 - (1 - p) * (1 - s.noise))


def outcome_probabilities(s: TwoQuditState, basis_a: BasisSpec, basis_b: BasisSpec) -> np.ndarray:
    """P[i, j] = <a_i b_j| rho |a_i b_j> for the two local bases."""
    d = s.d
    ua = basis_a.matrix(d)
    ub = basis_b.matrix(d)
    if s.vector is not None:
        coeffs = s.vector.reshape(d, d)
        probs = np.abs(ua.conj().T @ coeffs @ ub.conj()) ** 2
    else:
        u = np.kron(ua, ub)
        probs = np.sum(u.conj() * (s.matrix @ u), axis=0).real.reshape(d, d)
    return (1 - s.noise) * probs + s.noise / d**2


@dataclass
class CountMatrix:
    d: int
    basis_pair: BasisPair
    counts: np.ndarray
    acquisition_time: float | None = None

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.shape != (self.d, self.d):
            raise ValueError(f"counts must be {self.d}x{self.d}, got {self.counts.shape}")
        if np.any(self.counts < 0):
            raise ValueError("counts must be non-negative")

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def simulate_counts(
    probs, total_pairs: float, seed: int, basis_pair: BasisPair | None = None, acquisition_time: float | None = None
) -> CountMatrix:
    """Independent Poisson(total_pairs * P[i, j]) draws; deterministic per seed."""
    probs = np.asarray(probs, dtype=float)
    if np.any(probs < 0):
        raise ValueError("negative probabilities")
    if total_pairs < 0:
        raise ValueError("total_pairs must be non-negative")
    rng = np.random.default_rng(seed)
    counts = rng.poisson(total_pairs * probs)
    return CountMatrix(probs.shape[0], basis_pair or BasisPair.matched("standard"), counts, acquisition_time)


def counts_to_probs(c: CountMatrix | np.ndarray) -> np.ndarray:
    """N_mn / sum_ij N_ij."""
    counts = c.counts if isinstance(c, CountMatrix) else np.asarray(c)
    total = counts.sum()
    if total <= 0:
        raise ValueError("all-zero count matrix")
    return counts / total
