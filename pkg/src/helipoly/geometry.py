"""Regular helical M-polygons: initial data and closed-form geometric scalars.

A helical M-polygon is an arc-length parameterized closed polygonal curve
whose unit tangent takes exactly M values per 2*pi period, all lying on the
horizontal circle of radius ``a`` at height ``b`` on the unit sphere
(``a**2 + b**2 = 1``).  ``b = 0`` gives the planar regular polygon, and as
``b -> 1`` the curve straightens into a vertical line.

Two angles characterize the corners:

* curvature angle   ``rho0   = 2*asin(a*sin(pi/M))``   (between adjacent tangents),
* torsion angle     ``theta0 = 2*atan(b*tan(pi/M))``   (between adjacent osculating planes),

which satisfy ``cos(rho0/2)*cos(theta0/2) = cos(pi/M)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PolygonConfig:
    """All scalars derived from the side count M and the torsion parameter.

    ``gamma = M*theta0/(2*pi)`` is the frequency of the plane-wave factor that
    relates the filament function of the helical polygon to the planar one;
    ``c_theta0`` is the strength of each initial Dirac delta of that filament
    function; ``c_M`` is the constant vertical speed of the center of mass.
    ``theta0_frac`` keeps theta0/pi as an exact fraction when the torsion was
    given that way (needed to build exact time periods downstream).
    """

    M: int
    b: float
    a: float
    theta0: float
    rho0: float
    gamma: float
    c_theta0: float
    c_M: float
    theta0_frac: Fraction | None = None

    @property
    def side_length(self) -> float:
        return TWO_PI / self.M

    @property
    def t_period(self) -> float:
        """Time period T_f = 2*pi/M**2 of the corner/side structure."""
        return TWO_PI / self.M**2


@dataclass(frozen=True)
class CurveSample:
    """One node of the discretized initial polygon."""

    s: float
    position: np.ndarray
    tangent: np.ndarray


def polygon_config(M: int, b: float | None = None,
                   theta0: float | Fraction | None = None) -> PolygonConfig:
    """Build a :class:`PolygonConfig` from M and either b or theta0.

    ``theta0`` may be a float (radians) or a ``Fraction`` f meaning
    ``theta0 = f*pi`` exactly; the fraction is kept on the config.
    The two torsion parameterizations are linked by
    ``b = tan(theta0/2)/tan(pi/M)``.
    """
    if int(M) != M or M < 3:
        raise ValueError(f"M must be an integer >= 3, got {M!r}")
    M = int(M)
    if (b is None) == (theta0 is None):
        raise ValueError("exactly one of b or theta0 must be given")

    theta0_frac = None
    if theta0 is not None:
        if isinstance(theta0, Fraction):
            theta0_frac = theta0
            theta0 = float(theta0) * math.pi
        theta0 = float(theta0)
        if not 0.0 <= theta0 < TWO_PI / M:
            raise ValueError(
                f"theta0 must lie in [0, 2*pi/M) = [0, {TWO_PI / M:.6g}), got {theta0!r}")
        b = math.tan(theta0 / 2.0) / math.tan(math.pi / M)
    else:
        b = float(b)
        if not 0.0 <= b < 1.0:
            raise ValueError(f"b must lie in [0, 1), got {b!r}")
        theta0 = 2.0 * math.atan(b * math.tan(math.pi / M))
        if b == 0.0:
            theta0_frac = Fraction(0)

    a = math.sqrt(max(0.0, 1.0 - b * b))
    rho0 = 2.0 * math.asin(a * math.sin(math.pi / M))
    gamma = M * theta0 / TWO_PI
    log_cos_half_rho = math.log(math.cos(rho0 / 2.0))
    c_theta0 = math.sqrt(-2.0 / math.pi * log_cos_half_rho)
    c_M = -2.0 * log_cos_half_rho / ((math.pi / M) * math.tan(math.pi / M))
    return PolygonConfig(M=M, b=b, a=a, theta0=theta0, rho0=rho0, gamma=gamma,
                         c_theta0=c_theta0, c_M=c_M, theta0_frac=theta0_frac)


def side_tangent(cfg: PolygonConfig, k: int) -> np.ndarray:
    """Unit tangent on side k: (a*cos(2*pi*k/M), a*sin(2*pi*k/M), b)."""
    ang = TWO_PI * (k % cfg.M) / cfg.M
    return np.array([cfg.a * math.cos(ang), cfg.a * math.sin(ang), cfg.b])


def corner_position(cfg: PolygonConfig, k: int) -> np.ndarray:
    """Corner k of the initial polygon, at arc length s_k = 2*pi*k/M.

    The horizontal components place the corners on a circle of radius
    a*pi/(M*sin(pi/M)); the third component is b*s_k (k is NOT reduced
    mod M, so the helix climbs).
    """
    M, a, b = cfg.M, cfg.a, cfg.b
    ang = math.pi * (2 * k - 1) / M
    r = a * math.pi / (M * math.sin(math.pi / M))
    return np.array([r * math.sin(ang), -r * math.cos(ang), b * TWO_PI * k / M])


def initial_tangent(cfg: PolygonConfig, s) -> np.ndarray:
    """Tangent of the initial polygon at arc length s (reduced mod 2*pi).

    Piecewise constant; at a corner the value of the right-hand side is
    returned.  Accepts scalars or arrays.
    """
    s = np.asarray(s, dtype=float)
    k = np.floor_divide(np.mod(s, TWO_PI), TWO_PI / cfg.M).astype(int) % cfg.M
    ang = TWO_PI * k / cfg.M
    out = np.stack([cfg.a * np.cos(ang), cfg.a * np.sin(ang),
                    np.broadcast_to(cfg.b, ang.shape)], axis=-1)
    return out if out.ndim > 1 else out.reshape(3)


def initial_curve(cfg: PolygonConfig, s) -> np.ndarray:
    """Point of the initial polygon at arc length s in [0, 2*pi].

    Corners as in :func:`corner_position`; linear interpolation along each
    side.  The third component equals b*s exactly.
    """
    s = np.asarray(s, dtype=float)
    scalar = s.ndim == 0
    s = np.atleast_1d(s)
    h = TWO_PI / cfg.M
    k = np.floor_divide(s, h).astype(int)
    out = np.empty(s.shape + (3,))
    for i, (si, ki) in enumerate(zip(s, k)):
        out[i] = corner_position(cfg, int(ki)) + (si - ki * h) * side_tangent(cfg, int(ki))
    return out[0] if scalar else out


def mirror_matrix(cfg: PolygonConfig) -> np.ndarray:
    """Reflection through the vertical plane at azimuth pi - pi/M.

    This is the plane that exchanges the tangents of the sides meeting at
    the s = 0 corner: initial_tangent(-s) == mirror_matrix @ initial_tangent(s).
    """
    alpha = math.pi - math.pi / cfg.M
    c, s = math.cos(2 * alpha), math.sin(2 * alpha)
    return np.array([[c, s, 0.0], [s, -c, 0.0], [0.0, 0.0, 1.0]])


def planar_mirror_axis_rotation(cfg: PolygonConfig) -> np.ndarray:
    """Rotation by pi about the horizontal axis at azimuth -pi/M (the
    bisector direction of the s = 0 corner's tangents).

    For b = 0 this proper rotation maps the evolving tangent field onto its
    arc-length reflection, T(-s, t) = P @ T(s, t), at every time; it flips
    the vertical component, so it is a symmetry of planar data only.  The
    corner trajectory X(0, t) then stays in the vertical plane through the
    orthogonal horizontal direction, azimuth pi/2 - pi/M.
    """
    beta = -math.pi / cfg.M
    u = np.array([math.cos(beta), math.sin(beta), 0.0])
    return 2.0 * np.outer(u, u) - np.eye(3)


def sample_grid(cfg: PolygonConfig, N: int) -> list[CurveSample]:
    """Sample the initial polygon on the uniform grid s_j = 2*pi*j/N.

    N must be divisible by M so that every corner falls on a node.  At
    corner nodes the stored tangent is the normalized average of the two
    adjacent side tangents, which keeps the discrete data mirror symmetric.
    """
    if N % cfg.M != 0:
        raise ValueError(f"N = {N} is not divisible by M = {cfg.M}")
    per_side = N // cfg.M
    samples = []
    for j in range(N):
        s = TWO_PI * j / N
        k, r = divmod(j, per_side)
        if r == 0:
            t = side_tangent(cfg, k - 1) + side_tangent(cfg, k)
            t /= np.linalg.norm(t)
            pos = corner_position(cfg, k)
        else:
            t = side_tangent(cfg, k)
            pos = corner_position(cfg, k) + (s - TWO_PI * k / cfg.M) * t
        samples.append(CurveSample(s=s, position=pos, tangent=t))
    return samples
