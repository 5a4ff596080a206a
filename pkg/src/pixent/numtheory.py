"""Exact number theory for Wootters-Fields bases and Gauss sums.

Only odd moduli are supported. Complex results are plain Python ``complex``.
"""
from __future__ import annotations

import cmath
import math


def _check_odd(n: int, name: str = "n") -> None:
    if n < 1 or n % 2 == 0:
        raise ValueError(f"{name} must be an odd positive integer, got {n}")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for p in range(3, math.isqrt(n) + 1, 2):
        if n % p == 0:
            return False
    return True


def root_of_unity(exponent: int, d: int) -> complex:
    """exp(2*pi*i*exponent/d), with the exponent reduced mod d first."""
    e = exponent % d
    return cmath.exp(2j * math.pi * e / d)


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) by quadratic reciprocity."""
    _check_odd(n)
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def eps(d: int) -> complex:
    """1 for d = 1 mod 4, i for d = 3 mod 4."""
    _check_odd(d, "d")
    return 1 + 0j if d % 4 == 1 else 1j


def psi(a: int, c: int) -> int:
    """The unique 0 <= psi < c with 4*psi*a = 1 (mod c)."""
    _check_odd(c, "c")
    if math.gcd(a, c) != 1:
        raise ValueError(f"gcd({a}, {c}) != 1: no inverse of 4a mod c")
    if c == 1:
        return 0
    return pow(4 * a, -1, c)


def gauss_sum_direct(a: int, d: int) -> complex:
    """sum_{i<d} exp(2 pi i a i^2 / d) by direct summation."""
    _check_odd(d, "d")
    return sum(root_of_unity(a * i * i, d) for i in range(d))


def gauss_sum_closed(a: int, d: int) -> complex:
    """Closed form (a/d) * eps_d * sqrt(d); requires gcd(a, d) = 1."""
    _check_odd(d, "d")
    if math.gcd(a, d) != 1:
        # (a/d) = 0 here but the direct sum need not vanish
        raise ValueError(f"closed form needs gcd(a, d) = 1, got a={a}, d={d}")
    return jacobi(a, d) * eps(d) * math.sqrt(d)


def gen_gauss_sum_direct(a: int, b: int, c: int) -> complex:
    _check_odd(c, "c")
    return sum(root_of_unity(a * n * n + b * n, c) for n in range(c))


def gen_gauss_sum(a: int, b: int, c: int) -> complex:
    """Generalized quadratic Gauss sum G(a, b, c) = sum_n exp(2 pi i (a n^2 + b n)/c).

    Evaluated by completing the square: eps_c sqrt(c) (a/c) exp(-2 pi i psi(a) b^2 / c).
    """
    _check_odd(c, "c")
    if math.gcd(a, c) != 1:
        raise ValueError(f"gcd({a}, {c}) != 1")
    return eps(c) * math.sqrt(c) * jacobi(a, c) * root_of_unity(-psi(a, c) * b * b, c)
