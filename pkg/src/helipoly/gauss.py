"""Rational times, generalized quadratic Gauss sums, and Dirac-delta trains.

At a rational time ``t_pq = (2*pi/M**2)*(p/q)`` the filament function of a
helical M-polygon collapses onto a train of equally spaced Dirac deltas:
Mq of them per 2*pi period when q is odd, Mq/2 when q is even.  The complex
weights all share one modulus and their phases come from generalized
quadratic Gauss sums

    G(a, m, q) = sum_{c=0}^{q-1} exp(2*pi*i*(c**2*a + c*m)/q)

evaluated at a = -p, plus the Galilean plane wave, which also drags the
whole train by the shift ``2*theta0*p/(M*q)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import TWO_PI, PolygonConfig


@dataclass(frozen=True)
class RationalTime:
    """A reduced fraction p/q of the time period, with derived structure.

    parity is "q_odd", "q_half_even" (q = 0 mod 4) or "q_half_odd"
    (q = 2 mod 4); corner_count counts the Dirac deltas (= polygon corners)
    in one 2*pi period; galilean_shift is reduced into [0, 2*pi/M).
    """

    cfg: PolygonConfig
    p: int
    q: int
    t: float
    parity: str
    galilean_shift: float
    corner_count: int

    @property
    def q_eff(self) -> int:
        """q for odd q, q/2 for even q (the energy/modulus divisor)."""
        return self.q if self.q % 2 else self.q // 2

    @property
    def spacing(self) -> float:
        return TWO_PI / self.corner_count


@dataclass(frozen=True)
class DeltaTrain:
    """Locations (sorted, one 2*pi period) and weights of the delta train."""

    locations: np.ndarray
    coefficients: np.ndarray
    modulus: float
    global_phase: float


def rational_time(cfg: PolygonConfig, p: int, q: int) -> RationalTime:
    """Classify the rational time t = (2*pi/M**2)*(p/q)."""
    if int(p) != p or int(q) != q:
        raise ValueError(f"p, q must be integers, got p={p!r}, q={q!r}")
    p, q = int(p), int(q)
    if q < 1:
        raise ValueError(f"q must be >= 1, got q={q}")
    if p < 0:
        raise ValueError(f"p must be >= 0, got p={p}")
    g = math.gcd(p, q)
    if g > 1:
        p //= g
        q //= g
    if q % 2 == 1:
        parity, count = "q_odd", cfg.M * q
    elif q % 4 == 0:
        parity, count = "q_half_even", cfg.M * q // 2
    else:
        parity, count = "q_half_odd", cfg.M * q // 2
    t = (TWO_PI / cfg.M**2) * (p / q)
    shift = (2.0 * cfg.theta0 * p / (cfg.M * q)) % (TWO_PI / cfg.M)
    return RationalTime(cfg=cfg, p=p, q=q, t=t, parity=parity,
                        galilean_shift=shift, corner_count=count)


def gauss_sum(p: int, m: int, q: int) -> complex:
    """G(p, m, q) = sum_{c < q} exp(2*pi*i*(c**2*p + c*m)/q) by direct summation.

    Exponents are reduced modulo q in integer arithmetic before touching
    floating point, so each term's angle is exact and the sum stays accurate
    for q up to 1e6 and beyond.
    """
    if q < 1:
        raise ValueError(f"q must be >= 1, got q={q}")
    c = np.arange(q, dtype=np.int64)
    expo = ((c * c % q) * (p % q) + c * (m % q)) % q
    return complex(np.exp((2j * math.pi / q) * expo.astype(float)).sum())


def gauss_sum_row(p: int, q: int) -> np.ndarray:
    """All G(-p, m, q) for m = 0..q-1 at once.

    The row over m is the inverse DFT (times q) of exp(-2*pi*i*c**2*p/q),
    i.e. the same direct summation batched through one FFT.
    """
    if q < 1:
        raise ValueError(f"q must be >= 1, got q={q}")
    c = np.arange(q, dtype=np.int64)
    expo = (c * c % q) * (p % q) % q
    g = np.exp((-2j * math.pi / q) * expo.astype(float))
    return np.fft.ifft(g) * q


def corner_locations(rt: RationalTime) -> tuple[np.ndarray, np.ndarray]:
    """Sorted corner locations in [0, 2*pi) and their fine lattice indices.

    Corners sit at galilean_shift + (2*pi/(M*q))*f where the fine index f runs
    over all integers (q odd), the even integers (q = 0 mod 4) or the odd
    integers (q = 2 mod 4); the complementary residue class carries vanishing
    Gauss sums.
    """
    fine = TWO_PI / (rt.cfg.M * rt.q)
    spacing = rt.spacing
    if rt.parity == "q_odd":
        step, f_parity = 1, 0
    elif rt.parity == "q_half_even":
        step, f_parity = 2, 0
    else:
        step, f_parity = 2, 1
    offset = rt.galilean_shift + f_parity * fine
    first = offset % spacing
    lattice_shift = round((offset - first) / spacing)
    j = np.arange(rt.corner_count, dtype=np.int64)
    locations = first + spacing * j.astype(float)
    f = step * (j - lattice_shift) + f_parity
    return locations, f


def delta_train(cfg: PolygonConfig, rt: RationalTime) -> DeltaTrain:
    """Delta train of the filament function at t_pq, on one 2*pi period.

    The weight of the delta at location ell with fine lattice index f is

        (c_theta0/q) * G(-p, f mod q, q) * exp(i*(gamma*ell - gamma**2*t)),

    the exponential being the Galilean plane wave evaluated at the delta.
    """
    if rt.cfg != cfg:
        raise ValueError("rt was built for a different polygon configuration")
    locations, f = corner_locations(rt)
    row = gauss_sum_row(rt.p, rt.q)
    phases = cfg.gamma * locations - cfg.gamma**2 * rt.t
    coeffs = (cfg.c_theta0 / rt.q) * row[np.mod(f, rt.q)] * np.exp(1j * phases)
    modulus = cfg.c_theta0 / math.sqrt(rt.q_eff)
    global_phase = (cfg.theta0**2 / TWO_PI) * (rt.p / rt.q_eff)
    return DeltaTrain(locations=locations, coefficients=coeffs,
                      modulus=modulus, global_phase=global_phase)
