"""Closed-form counting formulas and divisor-sum identities, kept exact.

Formula values are reduced fractions, never rounded: a non-integral value
is evidence of a misprint in the source formulas and must surface, not
vanish. Two switches absorb the suspected misprints:

* the epsilon correction term ships in a `printed` variant (n = 3 and
  3 | N-1, exactly as typeset) and an `oracle` variant (the actual count
  of rotation-fixed configurations, which is what Burnside needs);
* the projective divisor-sum closed form ships printed (overcounts by a
  factor 2) and corrected; the ordinary closed form ships printed (odd-N
  branch misprinted by an additive 3*a_n) and corrected, next to the
  region-count form, which is exact as typeset.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import arith, torus
from .errors import DomainError

__all__ = [
    "CensusReport",
    "EPSILON_VARIANTS",
    "L_ord_formula",
    "L_proj_formula",
    "census_report",
    "coeff_ab",
    "epsilon_printed",
    "epsilon_term",
    "ord_divisor_sum_closed",
    "ord_divisor_sum_region",
    "proj_divisor_sum_closed",
    "verify_divisor_identity",
]

EPSILON_VARIANTS = ("printed", "oracle")

_TWO_THIRDS = Fraction(2, 3)


def _check_variant(variant: str) -> str:
    if variant not in EPSILON_VARIANTS:
        raise ValueError(f"epsilon variant must be one of {EPSILON_VARIANTS}, got {variant!r}")
    return variant


def epsilon_printed(n: int, N: int) -> int:
    """The correction term exactly as typeset: 1 iff n = 3 and 3 | N-1."""
    if n < 1 or N < 1:
        raise DomainError(f"need n, N >= 1, got ({n}, {N})")
    return 1 if n == 3 and (N - 1) % 3 == 0 else 0


def epsilon_term(n: int, N: int, variant: str, mode: str = "projective") -> int:
    """Epsilon per variant: as typeset, or the oracle's fixed-point count."""
    _check_variant(variant)
    if variant == "printed":
        return epsilon_printed(n, N)
    return torus.epsilon_oracle(n, N, mode)


def coeff_ab(n: int) -> tuple[Fraction, Fraction]:
    """Coefficients (a_n, b_n): a_{2l} = a_{2l+1} = l(l+1)/2, b_{2l-1} = b_{2l} = l^2."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    la = n // 2
    lb = (n + 1) // 2
    return Fraction(la * (la + 1), 2), Fraction(lb * lb)


def L_proj_formula(n: int, N: int, variant: str = "oracle") -> Fraction:
    """Projective count: n(n+1)/12 * (Psi(N) - 3*phi(N)) + (2/3)*epsilon."""
    if N < 3:
        raise DomainError(f"the projective formula is stated for N >= 3, got {N}")
    eps = epsilon_term(n, N, variant, "projective")
    return (
        Fraction(n * (n + 1), 12) * (arith.psi(N) - 3 * arith.euler_phi(N))
        + _TWO_THIRDS * eps
    )


def L_ord_formula(n: int, N: int, variant: str = "oracle") -> Fraction:
    """Ordinary count: (1/2)(n(n+1)/24 * Psi - a_n*phi(N) - b_n*phi(N/2)) + (2/3)*eps.

    phi(N/2) is taken to be 0 for odd N.
    """
    if N < 3:
        raise DomainError(f"the ordinary formula is stated for N >= 3, got {N}")
    a_n, b_n = coeff_ab(n)
    phi_half = arith.euler_phi(N // 2) if N % 2 == 0 else 0
    eps = epsilon_term(n, N, variant, "ordinary")
    return (
        Fraction(1, 2)
        * (
            Fraction(n * (n + 1), 24) * arith.psi(N)
            - a_n * arith.euler_phi(N)
            - b_n * phi_half
        )
        + _TWO_THIRDS * eps
    )


def proj_divisor_sum_closed(n: int, N: int, corrected: bool) -> Fraction:
    """Closed form for the projective divisor sum over d | N.

    Printed: n(n+1)/2 * (N^2 - 3N + 2). The printed right side is twice the
    lattice-point count it is meant to equal; `corrected` halves it.
    """
    if n < 1 or N < 1:
        raise DomainError(f"need n, N >= 1, got ({n}, {N})")
    quad = N * N - 3 * N + 2
    return Fraction(n * (n + 1), 4 if corrected else 2) * quad


def ord_divisor_sum_closed(n: int, N: int, corrected: bool = False) -> Fraction:
    """Closed form for the ordinary divisor sum over d | N, per parity of N.

    Printed: n(n+1)/16*(N^2-1) - (3/2)*a_n*(N+1) for odd N, and
    n(n+1)/16*N^2 - (2*a_n+b_n)*(3N/4 - 1) for even N. The odd branch as
    typeset exceeds the region count by the constant 3*a_n (invisible at
    n = 1 where a_1 = 0); `corrected` replaces (N+1) by (N-1), restoring
    exact agreement. The even branch is exact as typeset.
    """
    if n < 1 or N < 1:
        raise DomainError(f"need n, N >= 1, got ({n}, {N})")
    a_n, b_n = coeff_ab(n)
    nn = Fraction(n * (n + 1), 16)
    if N % 2 == 1:
        shift = N - 1 if corrected else N + 1
        return nn * (N * N - 1) - Fraction(3, 2) * a_n * shift
    return nn * N * N - (2 * a_n + b_n) * (Fraction(3 * N, 4) - 1)


def ord_divisor_sum_region(n: int, N: int) -> Fraction:
    """Region-count form of the ordinary divisor sum (exact for both parities).

    With m = (N+1)//2 for odd N and m = N/2 for even N:
    a_n * 3(m-1)(m-2)/2 + (b_n - a_n) * m(m-1)/2   (odd)
    a_n * 3(m-1)(m-2)/2 + (b_n - a_n) * (m-1)(m-2)/2  (even)
    """
    if n < 1 or N < 1:
        raise DomainError(f"need n, N >= 1, got ({n}, {N})")
    a_n, b_n = coeff_ab(n)
    m = (N + 1) // 2
    side = Fraction(3 * (m - 1) * (m - 2), 2)
    mid = Fraction(m * (m - 1), 2) if N % 2 == 1 else Fraction((m - 1) * (m - 2), 2)
    return a_n * side + (b_n - a_n) * mid


@dataclass(frozen=True)
class CensusReport:
    """Per-(n, N) reconciliation record."""

    n: int
    N: int
    mode: str
    formula_value: Fraction
    oracle_value: int
    fixed_count: int
    discrepancy: bool
    notes: str

    @staticmethod
    def build(
        n: int,
        N: int,
        mode: str,
        formula_value: Fraction,
        oracle_value: int,
        fixed_count: int,
        notes: str = "",
    ) -> "CensusReport":
        discrepancy = formula_value.denominator != 1 or formula_value != oracle_value
        return CensusReport(
            n, N, mode, formula_value, oracle_value, fixed_count, discrepancy, notes
        )


def census_report(n: int, N: int, mode: str, variant: str = "oracle") -> CensusReport:
    """Formula-vs-oracle record for one grid cell under one epsilon variant."""
    formula = (
        L_proj_formula(n, N, variant)
        if mode == "projective"
        else L_ord_formula(n, N, variant)
    )
    count = torus.burnside_count(n, N, mode)
    notes = ""
    if formula.denominator != 1:
        notes = f"non-integral formula value under eps={variant}"
    elif formula != count.orbits:
        notes = f"formula {formula} != oracle {count.orbits} under eps={variant}"
    return CensusReport.build(n, N, mode, formula, count.orbits, count.fixed, notes)


def _enumerated_divisor_sum(n: int, N: int, mode: str) -> tuple[int, int]:
    """Sum of (3*orbits - 2*fixed, fixed) over the divisors of N.

    Equal to the total number of exact-order-d configurations summed over
    d | N; divisors below 3 contribute nothing (no positive compositions).
    """
    lhs = 0
    fixed_total = 0
    for d in arith.divisors(N):
        count = torus.burnside_count(n, d, mode)
        lhs += count.total
        fixed_total += count.fixed
    return lhs, fixed_total


def verify_divisor_identity(n: int, N: int, mode: str) -> CensusReport:
    """Compare the enumerated divisor sum against the closed forms.

    The report's formula value is the closed form that the identity claims
    (corrected projective, region-count ordinary); the notes record how the
    printed variants deviate.
    """
    lhs, fixed_total = _enumerated_divisor_sum(n, N, mode)
    notes = []
    if mode == "projective":
        exact = proj_divisor_sum_closed(n, N, corrected=True)
        printed = proj_divisor_sum_closed(n, N, corrected=False)
        if printed == lhs:
            notes.append("printed form matches (zero case)")
        elif printed == 2 * lhs:
            notes.append("printed form overshoots by exactly factor 2")
        else:
            notes.append(f"printed form off: {printed} vs lhs {lhs}")
    else:
        exact = ord_divisor_sum_region(n, N)
        printed = ord_divisor_sum_closed(n, N, corrected=False)
        corrected = ord_divisor_sum_closed(n, N, corrected=True)
        if printed == lhs:
            notes.append("printed closed form matches")
        else:
            a_n, _ = coeff_ab(n)
            if N % 2 == 1 and lhs - printed == 3 * a_n:
                notes.append("printed odd-N closed form low by exactly 3*a_n")
            else:
                notes.append(f"printed closed form off: {printed} vs lhs {lhs}")
        if corrected != lhs:
            notes.append(f"corrected closed form off: {corrected} vs lhs {lhs}")
    return CensusReport.build(n, N, mode, exact, lhs, fixed_total, "; ".join(notes))
