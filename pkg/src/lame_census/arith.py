"""Exact number theory for the census: totients, Moebius inversion, divisor tables.

Everything here is exact: arbitrary-precision integers and reduced
`fractions.Fraction`. Floating point never enters; the reconciliation
tests downstream rely on exact integer equality. Factorization is plain
trial division, which is plenty for the desk-scale moduli (a few
thousand) this package targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

__all__ = [
    "DivisorTable",
    "divisors",
    "euler_phi",
    "factorize",
    "gcd3",
    "moebius_invert",
    "moebius_mu",
    "psi",
]


def gcd3(a: int, b: int, n: int) -> int:
    """gcd of a, b and the modulus n; gcd3(0, 0, n) = n."""
    if n < 1:
        raise ValueError(f"modulus must be positive, got {n}")
    if a < 0 or b < 0:
        raise ValueError("gcd3 expects nonnegative a, b")
    return math.gcd(math.gcd(a, b), n)


def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n as (p, exponent) pairs, p ascending."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            out.append((p, k))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    """Count of k in 1..n coprime to n."""
    value = n
    for p, _ in factorize(n):
        value -= value // p
    return value


@lru_cache(maxsize=None)
def psi(n: int) -> int:
    """Count of pairs (k1, k2) in {0..n-1}^2 with gcd3(k1, k2, n) = 1.

    Multiplicative, equal to n^2 * prod_{p|n} (1 - 1/p^2). The brute-force
    pair count is kept as the oracle in the test suite.
    """
    value = n * n
    for p, _ in factorize(n):
        value = value // (p * p) * (p * p - 1)
    return value


@lru_cache(maxsize=None)
def moebius_mu(n: int) -> int:
    """Moebius function: 0 on square factors, else (-1)^(number of primes)."""
    mu = 1
    for _, k in factorize(n):
        if k > 1:
            return 0
        mu = -mu
    return mu


@dataclass(frozen=True)
class DivisorTable:
    """All divisors of N, ascending."""

    N: int
    divisors: tuple[int, ...]

    def __post_init__(self) -> None:
        d = self.divisors
        if not d or d[0] != 1 or d[-1] != self.N:
            raise ValueError(f"bad divisor table for {self.N}: {d}")
        if any(self.N % e for e in d) or len(set(d)) != len(d):
            raise ValueError(f"bad divisor table for {self.N}: {d}")

    def __iter__(self):
        return iter(self.divisors)

    def __len__(self) -> int:
        return len(self.divisors)


@lru_cache(maxsize=None)
def divisors(n: int) -> DivisorTable:
    """Divisor table of n by trial division up to sqrt(n)."""
    if n < 1:
        raise ValueError(f"need a positive integer, got {n}")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return DivisorTable(n, tuple(small + large[::-1]))


def moebius_invert(F: Mapping[int, Fraction | int], n: int) -> Fraction:
    """Invert a divisor sum: return f(n) = sum_{d|n} mu(n/d) * F(d).

    F must be defined on every divisor of n. Exact rational arithmetic.
    """
    total = Fraction(0)
    for d in divisors(n):
        if d not in F:
            raise ValueError(f"F is missing divisor {d} of {n}")
        total += moebius_mu(n // d) * Fraction(F[d])
    return total
