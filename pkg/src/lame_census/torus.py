"""Combinatorial oracle over spherical-torus configurations.

A configuration is an integer angle triple (theta1, theta2, theta3) with
theta_i in 1..n and sum 2n+1, together with a rational edge-length triple
(l1, l2, l3), l_i > 0, l1+l2+l3 = 1 (lengths normalized by the full
perimeter).  Each configuration carries a marked 2-torsion point, and the
cyclic Z/3 action rotates angles and lengths simultaneously.  Counting
Z/3 orbits of configurations whose monodromy class has exact order N is
the first-principles count of Lame equations with cyclic monodromy C_N;
the closed formulas in `census` are reconciled against it.

Monodromy classes live in (Q/Z)^2 up to simultaneous negation:

* projective mode: (2s, 2t) = (l2+l3, l1+l3) mod 1, independent of theta;
* ordinary mode:   (s, t) = ((l2+l3)/2 + (theta1-1)/2,
                            (l1+l3)/2 + (theta2-1)/2) mod 1,
  where the two ansatz branches of one equation are (s, t) and (-s, -t).

The order of a class is the lcm of the denominators of its two
coordinates, i.e. the order of the subgroup of (Q/Z)^2 it generates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Literal, NamedTuple

from .errors import DomainError

__all__ = [
    "BurnsideCount",
    "LengthTriple",
    "Mode",
    "MonodromyClass",
    "ThetaTriple",
    "TorusConfig",
    "burnside_count",
    "configs_for_order",
    "cyclic_rotate",
    "enumerate_theta_triples",
    "epsilon_oracle",
    "lengths_from_projective",
    "monodromy_class",
    "oracle_L",
    "ord_region_member",
    "ordinary_from_config",
    "projective_from_lengths",
    "region_weight_ord",
    "region_weight_proj",
]

Mode = Literal["projective", "ordinary"]

_HALF = Fraction(1, 2)


def _check_mode(mode: str) -> str:
    if mode not in ("projective", "ordinary"):
        raise ValueError(f"mode must be 'projective' or 'ordinary', got {mode!r}")
    return mode


def _frac1(x: Fraction) -> Fraction:
    """Representative of x mod 1 in [0, 1)."""
    return x % 1


@dataclass(frozen=True)
class ThetaTriple:
    """Integer cone angles of the two isometric triangles, sum 2n+1."""

    t1: int
    t2: int
    t3: int

    def __post_init__(self) -> None:
        ts = (self.t1, self.t2, self.t3)
        total = sum(ts)
        if total < 3 or total % 2 == 0:
            raise DomainError(f"angle sum must be odd and >= 3, got {total}")
        n = (total - 1) // 2
        if any(t < 1 or t > n for t in ts):
            raise DomainError(f"angles must lie in 1..{n}, got {ts}")

    @property
    def n(self) -> int:
        return (self.t1 + self.t2 + self.t3 - 1) // 2

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.t1, self.t2, self.t3)


@dataclass(frozen=True)
class LengthTriple:
    """Positive rational edge lengths summing to 1 (units of the perimeter)."""

    l1: Fraction
    l2: Fraction
    l3: Fraction

    def __post_init__(self) -> None:
        ls = (self.l1, self.l2, self.l3)
        if any(l <= 0 for l in ls):
            raise DomainError(f"lengths must be positive, got {ls}")
        if sum(ls) != 1:
            raise DomainError(f"lengths must sum to 1, got {ls}")

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.l1, self.l2, self.l3)


@dataclass(frozen=True)
class TorusConfig:
    """One spherical torus with labelled 2-torsion: angles plus edge lengths."""

    theta: ThetaTriple
    lengths: LengthTriple

    @property
    def n(self) -> int:
        return self.theta.n


@dataclass(frozen=True)
class MonodromyClass:
    """Canonical monodromy parameter pair mod 1 with sign identification.

    Stored as the lexicographic minimum of (x, y) and (-x mod 1, -y mod 1);
    the flip identifies the developing map f with 1/f (projective mode) and
    the two ansatz branches w_a, w_{-a} (ordinary mode).
    """

    mode: str
    x: Fraction
    y: Fraction

    @classmethod
    def canonical(cls, mode: str, x: Fraction, y: Fraction) -> "MonodromyClass":
        _check_mode(mode)
        x, y = _frac1(x), _frac1(y)
        flipped = (_frac1(-x), _frac1(-y))
        if flipped < (x, y):
            x, y = flipped
        return cls(mode, x, y)

    @property
    def order(self) -> int:
        return math.lcm(self.x.denominator, self.y.denominator)


class BurnsideCount(NamedTuple):
    orbits: int
    fixed: int

    @property
    def total(self) -> int:
        """Size of the underlying configuration set, 3*orbits - 2*fixed."""
        return 3 * self.orbits - 2 * self.fixed


@lru_cache(maxsize=None)
def _theta_tuples(n: int) -> tuple[tuple[int, int, int], ...]:
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    return tuple(
        (t1, t2, 2 * n + 1 - t1 - t2)
        for t1 in range(1, n + 1)
        for t2 in range(1, n + 1)
        if 1 <= 2 * n + 1 - t1 - t2 <= n
    )


@lru_cache(maxsize=None)
def enumerate_theta_triples(n: int) -> tuple[ThetaTriple, ...]:
    """All angle triples in {1..n}^3 with sum 2n+1, lexicographic order.

    There are n(n+1)/2 of them, and each automatically satisfies the strict
    triangle inequalities (asserted in the test suite).
    """
    return tuple(ThetaTriple(*t) for t in _theta_tuples(n))


def lengths_from_projective(u: Fraction, v: Fraction) -> LengthTriple:
    """Solve (u, v) = (2s, 2t) = (l2+l3, l1+l3) for the length triple.

    Valid on the open region 0 < u < 1, 0 < v < 1, u + v > 1; boundary values
    correspond to degenerate lengths (use the sign-flipped representative
    (1-u, 1-v) first when u + v < 1).
    """
    if not (0 < u < 1 and 0 < v < 1):
        raise DomainError(f"need 0 < u, v < 1, got ({u}, {v})")
    if u + v <= 1:
        raise DomainError(
            f"need u + v > 1, got ({u}, {v}); flip signs to (1-u, 1-v) first"
        )
    return LengthTriple(1 - u, 1 - v, u + v - 1)


def projective_from_lengths(config: TorusConfig) -> MonodromyClass:
    """Projective class of a configuration: +-(l2+l3, l1+l3) mod 1.

    Independent of the angles: gluing extra hemisphere pairs onto the sides
    leaves the projective monodromy untouched.
    """
    l1, l2, l3 = config.lengths.as_tuple()
    return MonodromyClass.canonical("projective", l2 + l3, l1 + l3)


def ordinary_from_config(
    config: TorusConfig, sign: int = +1
) -> tuple[Fraction, Fraction]:
    """Ansatz parameters (s, t) mod 1 for one branch of a configuration.

    Each hemisphere pair on a side shifts the parameter by 1/2, so the angle
    triple contributes (theta1-1)/2 to s and (theta2-1)/2 to t. The two signs
    give the two ansatz branches of the same equation.
    """
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    l1, l2, l3 = config.lengths.as_tuple()
    t1, t2, _ = config.theta.as_tuple()
    s = _frac1(sign * (l2 + l3) / 2 + Fraction(t1 - 1, 2))
    t = _frac1(sign * (l1 + l3) / 2 + Fraction(t2 - 1, 2))
    return s, t


def monodromy_class(config: TorusConfig, mode: str) -> MonodromyClass:
    """Canonical monodromy class of a configuration in the given mode."""
    _check_mode(mode)
    if mode == "projective":
        return projective_from_lengths(config)
    s, t = ordinary_from_config(config, +1)
    return MonodromyClass.canonical("ordinary", s, t)


def region_weight_proj(u: Fraction, v: Fraction, n: int) -> int:
    """Number of developing maps with projective parameters (u, v) = (2s, 2t).

    n(n+1)/2 on the open complement of the lines u = 0, v = 0, u + v = 0
    (mod 1); zero on those lines, where the lengths degenerate.
    """
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    u, v = _frac1(u), _frac1(v)
    if u == 0 or v == 0 or _frac1(u + v) == 0:
        return 0
    return n * (n + 1) // 2


def ord_region_member(
    theta: ThetaTriple, s: Fraction, t: Fraction, alternative: str
) -> bool:
    """Membership of (s, t) mod 1 in one ansatz region of an angle triple.

    Alternative "A" shifts by ((1-theta1)/2, (1-theta2)/2) and tests the open
    base triangle s' < 1/2, t' < 1/2, s' + t' > 1/2; alternative "B" is
    membership of (-s, -t) in "A". All inequalities strict: boundary points
    are the degenerate-length and Lame-function cases the census excludes.
    """
    if alternative == "B":
        return ord_region_member(theta, -s, -t, "A")
    if alternative != "A":
        raise ValueError(f"alternative must be 'A' or 'B', got {alternative!r}")
    sp = _frac1(s + Fraction(1 - theta.t1, 2))
    tp = _frac1(t + Fraction(1 - theta.t2, 2))
    return sp < _HALF and tp < _HALF and sp + tp > _HALF


def region_weight_ord(s: Fraction, t: Fraction, n: int) -> int:
    """Number of ansatz branches with ordinary parameters (s, t) mod 1."""
    count = 0
    for theta in enumerate_theta_triples(n):
        count += ord_region_member(theta, s, t, "A")
        count += ord_region_member(theta, s, t, "B")
    return count


def cyclic_rotate(config: TorusConfig) -> TorusConfig:
    """Rotate angles and lengths simultaneously: (x1,x2,x3) -> (x2,x3,x1)."""
    t1, t2, t3 = config.theta.as_tuple()
    l1, l2, l3 = config.lengths.as_tuple()
    return TorusConfig(ThetaTriple(t2, t3, t1), LengthTriple(l2, l3, l1))


def _compositions(total: int) -> Iterator[tuple[int, int, int]]:
    """Ordered triples of positive integers summing to total, lexicographic."""
    for c1 in range(1, total - 1):
        for c2 in range(1, total - c1):
            yield c1, c2, total - c1 - c2


def _ordinary_order(c1: int, c2: int, c3: int, n_den: int, t1: int, t2: int) -> int:
    """Order of the ordinary class of lengths (c1, c2, c3)/n_den with angles t1, t2.

    s = (c2+c3)/(2*n_den) + (t1-1)/2 mod 1 has denominator 2*n_den/gcd; same
    for t; the class order is their lcm.
    """
    two_n = 2 * n_den
    us = (c2 + c3 + n_den * (t1 - 1)) % two_n
    ut = (c1 + c3 + n_den * (t2 - 1)) % two_n
    return math.lcm(two_n // math.gcd(us, two_n), two_n // math.gcd(ut, two_n))


def configs_for_order(n: int, N: int, mode: str) -> tuple[TorusConfig, ...]:
    """All configurations with lengths c_i/N whose class has exact order N.

    Lengths run over positive integer compositions c1+c2+c3 = N; the angle
    triple runs over all valid triples for n. Deterministic order: the
    composition varies outermost, angles lexicographic within it.
    """
    _check_mode(mode)
    if n < 1 or N < 1:
        raise DomainError(f"need n, N >= 1, got ({n}, {N})")
    thetas = enumerate_theta_triples(n)
    out: list[TorusConfig] = []
    for c1, c2, c3 in _compositions(N):
        if mode == "projective":
            if N // math.gcd(math.gcd(c1, c2), N) != N:
                continue
            lengths = LengthTriple(Fraction(c1, N), Fraction(c2, N), Fraction(c3, N))
            out.extend(TorusConfig(theta, lengths) for theta in thetas)
        else:
            lengths = None
            for theta in thetas:
                if _ordinary_order(c1, c2, c3, N, theta.t1, theta.t2) != N:
                    continue
                if lengths is None:
                    lengths = LengthTriple(
                        Fraction(c1, N), Fraction(c2, N), Fraction(c3, N)
                    )
                out.append(TorusConfig(theta, lengths))
    return tuple(out)


@lru_cache(maxsize=None)
def burnside_count(n: int, N: int, mode: str) -> BurnsideCount:
    """Z/3 orbit and fixed-point counts over the exact-order-N configurations.

    orbits = (|X| + 2*fixed)/3 by Burnside; a non-integral average means the
    enumeration is broken and raises.  Runs on plain integers (no Fraction
    objects) so the full acceptance grid stays fast; `configs_for_order` is
    the object-level view of the same enumeration.
    """
    _check_mode(mode)
    if n < 1 or N < 1:
        raise DomainError(f"need n, N >= 1, got ({n}, {N})")
    thetas = _theta_tuples(n)
    sym_theta = (2 * n + 1) % 3 == 0  # a rotation-fixed angle triple exists
    total = 0
    fixed = 0
    for c1, c2, c3 in _compositions(N):
        if mode == "projective":
            if N // math.gcd(math.gcd(c1, c2), N) == N:
                total += len(thetas)
                if sym_theta and c1 == c2 == c3:
                    fixed += 1
        else:
            c_sym = c1 == c2 == c3
            for t1, t2, t3 in thetas:
                if _ordinary_order(c1, c2, c3, N, t1, t2) == N:
                    total += 1
                    if c_sym and t1 == t2 == t3:
                        fixed += 1
    if (total + 2 * fixed) % 3:
        raise AssertionError(
            f"Burnside average not integral at (n={n}, N={N}, {mode}): "
            f"|X|={total}, fixed={fixed}"
        )
    return BurnsideCount((total + 2 * fixed) // 3, fixed)


def oracle_L(n: int, N: int, mode: str) -> int:
    """Number of Lame equations with cyclic monodromy of exact order N."""
    if N < 3:
        raise DomainError(f"the census is defined for N >= 3, got {N}")
    return burnside_count(n, N, mode).orbits


def epsilon_oracle(n: int, N: int, mode: str = "projective") -> int:
    """Count of configurations fixed by the Z/3 label rotation."""
    return burnside_count(n, N, mode).fixed
