"""Double-precision Weierstrass analytics on the lattice Z + Z*tau.

The period convention is (omega1, omega2) = (1, tau) throughout, NOT the
classical (2w1, 2w2): quasi-periods are eta_j = zeta(z + omega_j) - zeta(z),
and Legendre's relation reads eta1*tau - eta2 = 2*pi*i (the sign is forced
by Im tau > 0 and validated at construction).

Everything is built from q-series with q = exp(i*pi*tau), truncated when
the running term bound drops below the lattice tolerance:

    zeta(z) = eta1*z + pi*cot(pi*z) + 4*pi*sum c_k sin(2*pi*k*z)
    wp(z)   = -eta1 + pi^2/sin^2(pi*z) - 8*pi^2 sum k*c_k cos(2*pi*k*z)
    sigma(z) = exp(eta1*z^2/2) * theta1(pi*z, q) / (pi * theta1'(0, q))

with c_k = q^{2k}/(1 - q^{2k}). Arguments are reduced into the fundamental
cell first (quasi-periodicity corrections tracked exactly), so evaluation
is stable for any z. No modular reduction of tau is performed: monodromy
parameters are tied to the marked basis (1, tau), and a silent basis
change would corrupt them. Inputs are desk-scale, Im tau >= 0.1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DomainError, NumericError, PoleError

__all__ = [
    "AnsatzData",
    "AnsatzPoint",
    "LatticeData",
    "accessory_B",
    "ansatz_from_parameters",
    "ansatz_value",
    "g_fn",
    "hecke_Z",
    "j_invariant",
    "lattice_constants",
    "mod_2pi_i_distance",
    "monodromy_exponent",
    "ode_residual",
    "sigma_w",
    "wp",
    "wp_prime",
    "zeta_w",
]

TWO_PI_I = 2j * math.pi
_MAX_TERMS = 800
_POLE_EPS = 1e-8
_QUAD_DELTA = 1e-3  # minimum pole clearance for monodromy contours


@dataclass
class LatticeData:
    """Immutable-by-convention lattice constants for Z + Z*tau."""

    tau: complex
    eta1: complex
    eta2: complex
    g2: complex
    g3: complex
    tol: float
    lambert: tuple[complex, ...] = field(repr=False, default=())  # q^{2k}/(1-q^{2k})


def _lambert_sum(qpow: complex, weight, tol: float) -> complex:
    """Sum weight(k) * x^k / (1 - x^k) for x = qpow until terms fall below tol."""
    total = 0j
    xk = 1 + 0j
    for k in range(1, _MAX_TERMS):
        xk *= qpow
        term = weight(k) * xk / (1 - xk)
        total += term
        if abs(term) < tol and k > 4:
            return total
    raise NumericError("Lambert series did not converge; tau too close to the real axis?")


def lattice_constants(tau: complex, tol: float = 1e-14) -> LatticeData:
    """Quasi-periods and Eisenstein invariants for the lattice Z + Z*tau.

    eta1 comes from the weight-2 Lambert series, eta2 independently from
    2*zeta(tau/2); the Legendre relation eta1*tau - eta2 = 2*pi*i is then
    asserted to 10*tol as a consistency check of the two series.
    """
    tau = complex(tau)
    if tau.imag <= 0:
        raise DomainError(f"Im(tau) must be positive, got {tau}")
    if tau.imag < 0.1:
        raise DomainError(f"tau too close to the real axis for double precision: {tau}")
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    q = cmath.exp(1j * math.pi * tau)
    qq = q * q

    eta1 = math.pi**2 / 3 * (1 - 24 * _lambert_sum(qq, lambda k: k, tol))
    g2 = 4 * math.pi**4 / 3 * (1 + 240 * _lambert_sum(qq, lambda k: k**3, tol))
    g3 = 8 * math.pi**6 / 27 * (1 - 504 * _lambert_sum(qq, lambda k: k**5, tol))

    # c_k table sized for arguments reduced into |Im z| <= Im(tau)/2.
    n_terms = int(math.log(10 / tol) / (math.pi * tau.imag)) + 8
    if n_terms > _MAX_TERMS:
        raise NumericError(f"q-series needs {n_terms} terms at tau={tau}; refusing")
    coeffs = []
    xk = 1 + 0j
    for _ in range(n_terms):
        xk *= qq
        coeffs.append(xk / (1 - xk))

    lattice = LatticeData(tau, eta1, 0j, g2, g3, tol, tuple(coeffs))
    lattice.eta2 = 2 * _zeta_reduced(tau / 2, lattice)
    legendre = eta1 * tau - lattice.eta2 - TWO_PI_I
    if abs(legendre) > 10 * tol:
        raise NumericError(f"Legendre relation violated by {abs(legendre):.3e} at tau={tau}")
    return lattice


def _split(z: complex, tau: complex) -> tuple[float, float]:
    """Real coordinates (x, y) with z = x + y*tau."""
    y = z.imag / tau.imag
    return z.real - y * tau.real, y


def _reduce(z: complex, L: LatticeData) -> tuple[complex, int, int]:
    """z0 with z = z0 + m + k*tau and lattice coordinates of z0 in [-1/2, 1/2]."""
    x, y = _split(complex(z), L.tau)
    m, k = round(x), round(y)
    return complex(z) - m - k * L.tau, m, k


def lattice_distance(z: complex, L: LatticeData) -> float:
    """Distance from z to the nearest lattice point."""
    z0, _, _ = _reduce(z, L)
    return min(abs(z0 - m - k * L.tau) for m in (-1, 0, 1) for k in (-1, 0, 1))


def _sin_series(z0: complex, coeffs: Sequence[complex], scale: float):
    """Yield c_k * sin(2*pi*k*z0) terms via running powers of exp(2*pi*i*z0)."""
    w = cmath.exp(2j * math.pi * z0)
    wk, wik = 1 + 0j, 1 + 0j
    wi = 1 / w
    for c in coeffs:
        wk *= w
        wik *= wi
        yield c * (wk - wik) / 2j * scale


def _zeta_reduced(z0: complex, L: LatticeData) -> complex:
    total = L.eta1 * z0 + math.pi * cmath.cos(math.pi * z0) / cmath.sin(math.pi * z0)
    w = cmath.exp(2j * math.pi * z0)
    wk, wik = 1 + 0j, 1 + 0j
    wi = 1 / w
    for c in L.lambert:
        wk *= w
        wik *= wi
        total += 4 * math.pi * c * (wk - wik) / 2j
    return total


def zeta_w(z: complex, L: LatticeData) -> complex:
    """Weierstrass zeta: odd, with zeta(z + omega_j) = zeta(z) + eta_j."""
    z0, m, k = _reduce(z, L)
    if abs(z0) < _POLE_EPS:
        raise PoleError(f"zeta pole: z={z} is within {_POLE_EPS} of the lattice")
    return _zeta_reduced(z0, L) + m * L.eta1 + k * L.eta2


def wp(z: complex, L: LatticeData) -> complex:
    """Weierstrass elliptic function on Z + Z*tau."""
    z0, _, _ = _reduce(z, L)
    if abs(z0) < _POLE_EPS:
        raise PoleError(f"wp pole: z={z} is within {_POLE_EPS} of the lattice")
    s = cmath.sin(math.pi * z0)
    total = -L.eta1 + math.pi**2 / (s * s)
    w = cmath.exp(2j * math.pi * z0)
    wk, wik = 1 + 0j, 1 + 0j
    wi = 1 / w
    for i, c in enumerate(L.lambert, start=1):
        wk *= w
        wik *= wi
        total -= 8 * math.pi**2 * i * c * (wk + wik) / 2
    return total


def wp_prime(z: complex, L: LatticeData) -> complex:
    """Derivative of wp."""
    z0, _, _ = _reduce(z, L)
    if abs(z0) < _POLE_EPS:
        raise PoleError(f"wp' pole: z={z} is within {_POLE_EPS} of the lattice")
    s = cmath.sin(math.pi * z0)
    total = -2 * math.pi**3 * cmath.cos(math.pi * z0) / (s * s * s)
    w = cmath.exp(2j * math.pi * z0)
    wk, wik = 1 + 0j, 1 + 0j
    wi = 1 / w
    for i, c in enumerate(L.lambert, start=1):
        wk *= w
        wik *= wi
        total += 16 * math.pi**3 * i * i * c * (wk - wik) / 2j
    return total


def _theta1(v: complex, q: complex, tol: float) -> complex:
    """Jacobi theta_1(v, q) by its sine series (entire, superfast decay)."""
    total = 0j
    qj = q**0.25
    q2 = q * q
    sign = 1.0
    for j in range(_MAX_TERMS):
        term = sign * qj * cmath.sin((2 * j + 1) * v)
        total += term
        if j > 2 and abs(term) < tol * max(1.0, abs(total)):
            return 2 * total
        qj *= q2 ** (j + 1)
        sign = -sign
    raise NumericError("theta1 series did not converge")


def _theta1_prime0(q: complex, tol: float) -> complex:
    total = 0j
    qj = q**0.25
    q2 = q * q
    sign = 1.0
    for j in range(_MAX_TERMS):
        term = sign * (2 * j + 1) * qj
        total += term
        if j > 2 and abs(term) < tol * abs(total):
            return 2 * total
        qj *= q2 ** (j + 1)
        sign = -sign
    raise NumericError("theta1' series did not converge")


def sigma_w(z: complex, L: LatticeData) -> complex:
    """Weierstrass sigma: entire, odd, sigma(z) ~ z near 0."""
    z0, m, k = _reduce(z, L)
    q = cmath.exp(1j * math.pi * L.tau)
    base = (
        cmath.exp(L.eta1 * z0 * z0 / 2)
        * _theta1(math.pi * z0, q, L.tol)
        / (math.pi * _theta1_prime0(q, L.tol))
    )
    if m == 0 and k == 0:
        return base
    # sigma(z0 + w) = (-1)^(m+k+mk) exp(eta_w (z0 + w/2)) sigma(z0), w = m + k*tau
    omega = m + k * L.tau
    eta_omega = m * L.eta1 + k * L.eta2
    sign = -1.0 if (m + k + m * k) % 2 else 1.0
    return sign * cmath.exp(eta_omega * (z0 + omega / 2)) * base


def hecke_Z(t: float, s: float, L: LatticeData) -> complex:
    """Hecke function Z(a) = zeta(a) - t*eta1 - s*eta2 at a = t + s*tau.

    Doubly periodic in (t, s) with integer periods and odd; vanishes at the
    three 2-torsion half-period parameter pairs.
    """
    a = t + s * L.tau
    return zeta_w(a, L) - t * L.eta1 - s * L.eta2


def j_invariant(L: LatticeData) -> complex:
    disc = L.g2**3 - 27 * L.g3**2
    if disc == 0:
        raise NumericError("degenerate lattice: discriminant vanished")
    return 1728 * L.g2**3 / disc


@dataclass(frozen=True)
class AnsatzPoint:
    """One ansatz location a = t + s*tau with its real coordinates."""

    t: float
    s: float
    a: complex


@dataclass
class AnsatzData:
    """Ansatz point set for the order-n equation on a fixed lattice."""

    n: int
    points: tuple[AnsatzPoint, ...]
    lattice: LatticeData

    def __post_init__(self) -> None:
        if len(self.points) != self.n:
            raise DomainError(f"expected {self.n} ansatz points, got {len(self.points)}")
        for p in self.points:
            if abs(p.t - round(p.t)) < 1e-12 and abs(p.s - round(p.s)) < 1e-12:
                raise DomainError(f"ansatz point on the lattice: t={p.t}, s={p.s}")

    @property
    def s_total(self) -> float:
        return sum(p.s for p in self.points)

    @property
    def t_total(self) -> float:
        return sum(p.t for p in self.points)


def ansatz_from_parameters(
    n: int, params: Sequence[tuple[float, float]], L: LatticeData
) -> AnsatzData:
    """Build AnsatzData from (t_mu, s_mu) pairs on the lattice L."""
    pts = tuple(AnsatzPoint(t, s, t + s * L.tau) for t, s in params)
    return AnsatzData(n, pts, L)


def g_fn(z: complex, A: AnsatzData) -> complex:
    """Logarithmic derivative of the developing map:

    g(z) = sum_mu wp'(a_mu) / (wp(z) - wp(a_mu)),

    elliptic with simple poles (residues +-1) at z = +-a_mu.
    """
    L = A.lattice
    for p in A.points:
        if min(lattice_distance(z - p.a, L), lattice_distance(z + p.a, L)) < _POLE_EPS:
            raise PoleError(f"g has a pole at z = +-a mod lattice (z={z}, a={p.a})")
    wz = wp(z, L)
    return sum(wp_prime(p.a, L) / (wz - wp(p.a, L)) for p in A.points)


def ansatz_value(z: complex, A: AnsatzData) -> complex:
    """The ansatz solution exp(z * sum zeta(a_mu)) * prod sigma(z-a_mu)/sigma(z)."""
    L = A.lattice
    if lattice_distance(z, L) < _POLE_EPS:
        raise PoleError(f"ansatz pole at the lattice: z={z}")
    zsum = sum(zeta_w(p.a, L) for p in A.points)
    value = cmath.exp(z * zsum)
    sz = sigma_w(z, L)
    for p in A.points:
        value *= sigma_w(z - p.a, L) / sz
    return value


def accessory_B(A: AnsatzData) -> complex:
    """Accessory parameter B = (2n-1) * sum wp(a_mu)."""
    return (2 * A.n - 1) * sum(wp(p.a, A.lattice) for p in A.points)


def ode_residual(z: complex, A: AnsatzData, h: float = 1e-3) -> float:
    """Normalized residual |w'' - (n(n+1) wp(z) + B) w| / |w| at z.

    w'' comes from a 5-point central finite-difference stencil of the ansatz
    value, deliberately independent of any analytic derivative formula.
    """
    w = [ansatz_value(z + j * h, A) for j in (-2, -1, 0, 1, 2)]
    w2 = (-w[0] + 16 * w[1] - 30 * w[2] + 16 * w[3] - w[4]) / (12 * h * h)
    B = accessory_B(A)
    residual = w2 - (A.n * (A.n + 1) * wp(z, A.lattice) + B) * w[2]
    return abs(residual) / max(abs(w[2]), 1e-300)


def _segment_clearance(z0: complex, omega: complex, A: AnsatzData) -> float:
    """Distance from the segment [z0, z0 + omega] to the pole set of g."""
    L = A.lattice
    xs = [z0, z0 + omega]
    best = math.inf
    for p in A.points:
        for a in (p.a, -p.a):
            # lattice translates of a near the segment's bounding box
            for dm in range(-3, 5):
                for dk in range(-3, 5):
                    pole = a + dm + dk * L.tau
                    best = min(best, _point_segment_distance(pole, xs[0], xs[1]))
    return best


def _point_segment_distance(p: complex, a: complex, b: complex) -> float:
    d = b - a
    denom = abs(d) ** 2
    if denom == 0:
        return abs(p - a)
    u = ((p - a).real * d.real + (p - a).imag * d.imag) / denom
    u = max(0.0, min(1.0, u))
    return abs(p - (a + u * d))


def _adaptive_simpson(f, a: float, b: float, tol: float, depth: int = 28) -> complex:
    fa, fm, fb = f(a), f((a + b) / 2), f(b)
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    return _simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)


def _simpson_step(f, a, b, fa, fm, fb, whole, tol, depth) -> complex:
    m = (a + b) / 2
    lm, rm = (a + m) / 2, (m + b) / 2
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6 * (fa + 4 * flm + fm)
    right = (b - m) / 6 * (fm + 4 * frm + fb)
    if depth <= 0:
        raise NumericError(
            f"adaptive Simpson hit depth limit on [{a}, {b}]; pole too close to the path?"
        )
    if abs(left + right - whole) < 15 * tol:
        return left + right + (left + right - whole) / 15
    half = tol / 2
    return _simpson_step(f, a, m, fa, flm, fm, left, half, depth - 1) + _simpson_step(
        f, m, b, fm, frm, fb, right, half, depth - 1
    )


def monodromy_exponent(
    direction: int,
    A: AnsatzData,
    basepoint: complex | None = None,
    quad_tol: float = 1e-10,
) -> complex:
    """Integral of g along the period omega_direction, defined mod 2*pi*i.

    The straight segment [z0, z0 + omega] is used when it clears the poles
    of g by at least 1e-3; otherwise the whole segment is shifted through a
    deterministic sequence of offsets until it does (parallel shifts change
    the integral only by residue multiples of 2*pi*i, and leave the real
    part untouched).
    """
    if direction not in (1, 2):
        raise ValueError(f"direction must be 1 or 2, got {direction}")
    L = A.lattice
    omega = 1 + 0j if direction == 1 else L.tau
    if basepoint is None:
        basepoint = 0.1547 + 0.2163 * L.tau
    z0 = complex(basepoint)
    candidates = [z0] + [
        z0 + j * (0.0618 + 0.0382 * L.tau) * (1 if j % 2 else -1) for j in range(1, 25)
    ]
    for start in candidates:
        if _segment_clearance(start, omega, A) >= _QUAD_DELTA:
            return _adaptive_simpson(
                lambda u: g_fn(start + u * omega, A) * omega, 0.0, 1.0, quad_tol
            )
    raise NumericError(
        f"could not find a contour clear of poles for direction {direction}"
    )


def mod_2pi_i_distance(value: complex, target: complex) -> float:
    """Distance between value and target modulo integer multiples of 2*pi*i."""
    d = value - target
    k = round(d.imag / (2 * math.pi))
    return abs(d - k * TWO_PI_I)
