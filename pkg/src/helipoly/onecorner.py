"""Self-similar one-corner solution and its matching to the M-corner frame.

At a fixed time t > 0 the solution generated by a single corner of strength
c0 has curvature c0/sqrt(t) and torsion s/(2t); integrating the
Frenet-Serret system in arc length from s = 0 outward gives its frame and,
with X'(s) = T(s) and the anchor X(0) = 2*c0*sqrt(t)*b(0), the curve.
The tangent spirals onto fixed asymptotes A+- = (A1, +-A2, +-A3) with
A1 = exp(-pi*c0**2/2); rotating the solution so the asymptotes land on two
adjacent side directions of a helical polygon overlays the one-corner curve
on that polygon's corner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebraic import FrameSet, tangent_at
from .gauss import RationalTime
from .geometry import TWO_PI, PolygonConfig


class InsufficientDomainError(ValueError):
    """Tail averages have not settled; integrate further in s."""

    def __init__(self, variation: float, tol: float, suggested_S: float):
        super().__init__(
            f"tail variation {variation:.2e} exceeds {tol:.2e}; "
            f"integrate to about S = {suggested_S:.1f}")
        self.suggested_S = suggested_S


@dataclass(frozen=True)
class SelfSimilarSolution:
    c0: float
    t: float
    s: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray
    binormal: np.ndarray
    curve: np.ndarray


@dataclass(frozen=True)
class MatchedSolution:
    rotation: np.ndarray
    anchor: np.ndarray
    s: np.ndarray
    tangent: np.ndarray
    curve: np.ndarray


def selfsimilar_frame(c0: float, t: float, S: float, ds: float) -> SelfSimilarSolution:
    """Integrate the Frenet system with kappa = c0/sqrt(t), tau = s/(2t)
    outward from s = 0 by fixed-step RK4.

    Initial frame T = (1,0,0), n = (0,1,0), b = (0,0,1), so the reversal
    symmetry s -> -s (even curvature, odd torsion) makes the first tangent
    component even and the other two odd.  The corner point starts at
    X(0) = 2*c0*sqrt(t)*b(0), which the self-similar scaling of the flow
    forces at s = 0.
    """
    if t <= 0.0:
        raise ValueError(f"t must be positive, got {t}")
    if c0 < 0.0:
        raise ValueError(f"c0 must be nonnegative, got {c0}")
    if ds <= 0.0 or S <= 0.0:
        raise ValueError("S and ds must be positive")
    kappa = c0 / math.sqrt(t)
    m = int(round(S / ds))
    inv2t = 0.5 / t

    def sweep(direction: int) -> np.ndarray:
        h = direction * ds
        Y = np.empty((4, 3))
        Y[0] = (1.0, 0.0, 0.0)
        Y[1] = (0.0, 1.0, 0.0)
        Y[2] = (0.0, 0.0, 1.0)
        Y[3] = (0.0, 0.0, 2.0 * c0 * math.sqrt(t))
        B = np.zeros((4, 4))
        B[0, 1] = kappa
        B[1, 0] = -kappa
        B[3, 0] = 1.0
        out = np.empty((m + 1, 4, 3))
        out[0] = Y
        s = 0.0
        for i in range(1, m + 1):
            tau = s * inv2t
            tau_h = (s + 0.5 * h) * inv2t
            tau_f = (s + h) * inv2t
            B[1, 2], B[2, 1] = tau, -tau
            k1 = B @ Y
            B[1, 2], B[2, 1] = tau_h, -tau_h
            k2 = B @ (Y + (0.5 * h) * k1)
            k3 = B @ (Y + (0.5 * h) * k2)
            B[1, 2], B[2, 1] = tau_f, -tau_f
            k4 = B @ (Y + h * k3)
            Y = Y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            s += h
            out[i] = Y
        return out

    fwd = sweep(+1)
    bwd = sweep(-1)
    full = np.concatenate([bwd[::-1], fwd[1:]], axis=0)
    s_grid = ds * np.arange(-m, m + 1)
    return SelfSimilarSolution(c0=c0, t=t, s=s_grid,
                               tangent=full[:, 0], normal=full[:, 1],
                               binormal=full[:, 2], curve=full[:, 3])


def asymptotes(sol: SelfSimilarSolution, tail_frac: float = 0.1,
               tol: float = 1e-3) -> tuple[np.ndarray, np.ndarray]:
    """(A-, A+) estimated by averaging the tangent over the outer tails.

    The two half-window averages of each tail must agree to ``tol``;
    the estimates are then symmetrized to the (A1, +-A2, +-A3) form,
    whose first component is e**(-pi*c0**2/2).
    """
    m = (sol.s.size - 1) // 2
    k = max(2, 2 * int(m * tail_frac / 2.0))
    plus = sol.tangent[-k:]
    minus = sol.tangent[:k]
    variation = max(
        float(np.linalg.norm(plus[:k // 2].mean(0) - plus[k // 2:].mean(0))),
        float(np.linalg.norm(minus[:k // 2].mean(0) - minus[k // 2:].mean(0))))
    if variation > tol:
        S = float(sol.s[-1])
        raise InsufficientDomainError(variation, tol, S * math.sqrt(variation / tol) * 2.0)
    ap = plus.mean(axis=0)
    am = minus.mean(axis=0)
    v = np.array([0.5 * (ap[0] + am[0]),
                  0.5 * (ap[1] - am[1]),
                  0.5 * (ap[2] - am[2])])
    v /= np.linalg.norm(v)
    return np.array([v[0], -v[1], -v[2]]), v


def selfsimilar_asymptotes(c0: float, *, tol: float = 1e-3, S0: float = 30.0,
                           ds: float = 5e-4, max_doublings: int = 6):
    """Asymptotes at S chosen by the tail criterion: double S until the
    tail averages settle below tol."""
    S = S0
    last = None
    for _ in range(max_doublings):
        sol = selfsimilar_frame(c0, 1.0, S, ds)
        try:
            return asymptotes(sol, tol=tol), S
        except InsufficientDomainError as exc:
            last = exc
            S *= 2.0
    raise last


def _rotation_about(axis: np.ndarray, angle: float) -> np.ndarray:
    axis = axis / np.linalg.norm(axis)
    K = np.array([[0.0, -axis[2], axis[1]],
                  [axis[2], 0.0, -axis[0]],
                  [-axis[1], axis[0], 0.0]])
    return np.eye(3) + math.sin(angle) * K + (1.0 - math.cos(angle)) * (K @ K)


def side_directions(cfg: PolygonConfig) -> tuple[np.ndarray, np.ndarray]:
    """Target asymptote directions of the matched polygon corner:
    T- = (a*cos(2*pi/M), -a*sin(2*pi/M), b), T+ = (a, 0, b)."""
    a, b, M = cfg.a, cfg.b, cfg.M
    tm = np.array([a * math.cos(TWO_PI / M), -a * math.sin(TWO_PI / M), b])
    tp = np.array([a, 0.0, b])
    return tm, tp


def matching_rotation(asym: tuple[np.ndarray, np.ndarray],
                      cfg: PolygonConfig) -> np.ndarray:
    """Rotation R = M2 @ M1 taking (A-, A+) onto the polygon side pair.

    M1 rotates A+ onto T+ about the axis orthogonal to both; M2 then
    rotates about T+ by the signed angle from M1 @ A- to T-.
    """
    am, ap = np.asarray(asym[0], float), np.asarray(asym[1], float)
    tm, tp = side_directions(cfg)
    axis = np.cross(ap, tp)
    sn = float(np.linalg.norm(axis))
    if sn < 1e-12:
        M1 = np.eye(3)
    else:
        M1 = _rotation_about(axis, math.atan2(sn, float(ap @ tp)))
    am1 = M1 @ am
    u = am1 - (am1 @ tp) * tp
    v = tm - (tm @ tp) * tp
    ang = math.atan2(float(np.cross(u, v) @ tp), float(u @ v))
    M2 = _rotation_about(tp, ang)
    return M2 @ M1


def rotated_solution(sol: SelfSimilarSolution, rotation: np.ndarray,
                     cfg: PolygonConfig) -> MatchedSolution:
    """Place the rotated one-corner curve at the polygon's s = 0 corner,
    X_rot = X0 + R @ X."""
    anchor = corner_anchor(cfg)
    return MatchedSolution(rotation=rotation, anchor=anchor, s=sol.s,
                           tangent=sol.tangent @ rotation.T,
                           curve=anchor + sol.curve @ rotation.T)


def corner_anchor(cfg: PolygonConfig) -> np.ndarray:
    """Corner of the helical polygon at s = 0:
    (-a*pi/M, -a*pi/(M*tan(pi/M)), 0)."""
    a, M = cfg.a, cfg.M
    return np.array([-a * math.pi / M,
                     -a * math.pi / (M * math.tan(math.pi / M)), 0.0])


def corner_trajectory(rotation: np.ndarray, cfg: PolygonConfig, c0: float,
                      times: np.ndarray) -> np.ndarray:
    """X_rot(0, t) = X0 + 2*c0*sqrt(t)*(R @ b(0)): the corner point of the
    one-corner solution scales as sqrt(t) along a fixed direction."""
    times = np.asarray(times, float)
    direction = rotation @ np.array([0.0, 0.0, 1.0])
    return corner_anchor(cfg) + 2.0 * c0 * np.sqrt(times)[:, None] * direction


def curvature_fd(frames: FrameSet, cfg: PolygonConfig, rt: RationalTime) -> float:
    """Corner strength recovered from the reconstructed tangent at t_1q by
    the symmetric difference over +-4*pi/(M*q); needs p = 1, q = 2 mod 4 so
    the tangent is continuous at those arc lengths."""
    if rt.p != 1 or rt.q % 4 != 2:
        raise ValueError(
            f"curvature recovery needs p=1 and q = 2 mod 4, got p={rt.p}, q={rt.q}")
    h = 2.0 * TWO_PI / (cfg.M * rt.q)
    tp = tangent_at(frames, h)
    tm = tangent_at(frames, TWO_PI - h)
    return math.sqrt(rt.t) * float(np.linalg.norm(tp - tm)) / (2.0 * h)
