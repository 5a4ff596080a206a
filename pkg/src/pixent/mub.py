"""Wootters-Fields mutually unbiased bases and the witness cross-term coefficients."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .numtheory import gen_gauss_sum, is_prime, psi, root_of_unity


class NonPrimeDimensionWarning(UserWarning):
    """WF bases in a non-prime dimension do not form a complete MUB set."""


@dataclass(frozen=True)
class WfBasis:
    d: int
    k: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"dimension must be >= 2, got {self.d}")
        if not 0 <= self.k < self.d:
            raise ValueError(f"basis index k={self.k} outside [0, {self.d})")

    @property
    def label(self) -> str:
        return f"wf:k={self.k}"

    def matrix(self, conjugate: bool = False) -> np.ndarray:
        """Basis vectors as the columns of a d x d unitary."""
        return wf_matrix(self.d, self.k, conjugate)


def _phases(d: int, exponents: np.ndarray) -> np.ndarray:
    # exponents reduced in integer arithmetic before exp
    return np.exp(2j * np.pi * (np.asarray(exponents, dtype=np.int64) % d) / d)


def wf_vector(basis: WfBasis, j: int, conjugate: bool = False) -> np.ndarray:
    """|j_k> with components omega^(j m + k m^2) / sqrt(d)."""
    d, k = basis.d, basis.k
    if not 0 <= j < d:
        raise IndexError(f"vector index j={j} outside [0, {d})")
    m = np.arange(d, dtype=np.int64)
    v = _phases(d, j * m + k * m * m) / math.sqrt(d)
    return v.conj() if conjugate else v


def wf_matrix(d: int, k: int, conjugate: bool = False) -> np.ndarray:
    m = np.arange(d, dtype=np.int64)
    j = m[None, :]
    u = _phases(d, j * m[:, None] + k * (m * m)[:, None]) / math.sqrt(d)
    return u.conj() if conjugate else u


def standard_matrix(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex)


def gamma_tilde(m: int, n: int, mp: int, np_: int, d: int) -> Fraction:
    """1/d when m - m' - n + n' = 0 (mod d), else 0."""
    return Fraction(1, d) if (m - mp - n + np_) % d == 0 else Fraction(0)


def coeff_c_standard(m: int, n: int, mp: int, np_: int, k: int, d: int) -> complex:
    lin = m - mp - n + np_
    quad = k * (m * m - mp * mp - n * n + np_ * np_)
    return sum(root_of_unity(j * lin + quad, d) for j in range(d))


def _check_pair(k: int, kp: int, d: int) -> None:
    if d % 2 == 0:
        raise ValueError(f"two-WF coefficient needs odd d, got {d}")
    if k % d == kp % d:
        raise ValueError("two-WF coefficient needs k != k'")
    if math.gcd(kp - k, d) != 1:
        raise ValueError(f"gcd(k' - k, d) = gcd({kp - k}, {d}) != 1")
    if not is_prime(d):
        warnings.warn(
            f"d={d} is not prime; k={k}, k'={kp} are still unbiased but the WF set is incomplete",
            NonPrimeDimensionWarning,
            stacklevel=3,
        )


def coeff_c_two_wf(m: int, n: int, mp: int, np_: int, k: int, kp: int, d: int) -> complex:
    """Closed-form cross-term coefficient when WF basis k plays the standard role for k'."""
    _check_pair(k, kp, d)
    s = psi(kp - k, d)
    prefactor = root_of_unity(s * (mp * mp - m * m - np_ * np_ + n * n), d)
    lin = 2 * s * (m - mp - n + np_)
    return prefactor * sum(root_of_unity(j * lin, d) for j in range(d))


def transition_coeff(m: int, n: int, k: int, kp: int, d: int) -> complex:
    """c^{(k,k')}_{mn} = d^{-1/2} sum_p omega^(p(m-n) + p^2 (k'-k)), by direct summation."""
    return sum(root_of_unity(p * (m - n) + p * p * (kp - k), d) for p in range(d)) / math.sqrt(d)


def transition_coeff_closed(m: int, n: int, k: int, kp: int, d: int) -> complex:
    """Same coefficient through the generalized Gauss-sum evaluation."""
    return gen_gauss_sum(kp - k, m - n, d) / math.sqrt(d)


def coeff_tensor_two_wf(k: int, kp: int, d: int) -> np.ndarray:
    """coeff_c_two_wf for every (m, n, m', n') at once, indexed [m, n, m', n']."""
    _check_pair(k, kp, d)
    s = psi(kp - k, d)
    i = np.arange(d, dtype=np.int64)
    m, n, mp, np_ = np.ix_(i, i, i, i)
    phase = _phases(d, s * (mp * mp - m * m - np_ * np_ + n * n))
    return np.where((m - mp - n + np_) % d == 0, d * phase, 0.0)


def coeff_tensor_two_wf_direct(k: int, kp: int, d: int) -> np.ndarray:
    """Four-factor sum over j as one contraction of the direct transition matrix."""
    i = np.arange(d, dtype=np.int64)
    p = i[:, None, None]
    c = _phases(d, p * (i[None, :, None] - i[None, None, :]) + p * p * (kp - k)).sum(axis=0) / math.sqrt(d)
    return np.einsum("jb,jd,ja,jc->abcd", c.conj(), c, c, c.conj(), optimize=True).transpose(0, 2, 1, 3)


def coeff_tensor_standard(k: int, d: int) -> np.ndarray:
    """coeff_c_standard for every (m, n, m', n'), by explicit summation over j."""
    i = np.arange(d, dtype=np.int64)
    m, n, mp, np_ = np.ix_(i, i, i, i)
    lin = m - mp - n + np_
    quad = k * (m * m - mp * mp - n * n + np_ * np_)
    return sum(_phases(d, j * lin + quad) for j in range(d))


def coeff_c_two_wf_direct(m: int, n: int, mp: int, np_: int, k: int, kp: int, d: int) -> complex:
    """Four-factor product sum over j of transition coefficients (no Gauss-sum shortcut)."""
    c = lambda a, b: transition_coeff(a, b, k, kp, d)  # noqa: E731
    return sum(
        c(j, mp).conjugate() * c(j, np_) * c(j, m) * c(j, n).conjugate() for j in range(d)
    )


def verify_mutually_unbiased(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> bool:
    """True iff both bases (columns) are orthonormal and all overlaps have modulus 1/sqrt(d)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"basis shapes differ or are not square: {a.shape} vs {b.shape}")
    d = a.shape[0]
    eye = np.eye(d)
    for u in (a, b):
        if np.max(np.abs(u.conj().T @ u - eye)) > tol:
            return False
    overlaps = np.abs(a.conj().T @ b)
    return bool(np.max(np.abs(overlaps - 1 / math.sqrt(d))) <= tol)
