"""Corner-trajectory analysis: channels, fingerprints, reference curves.

The trajectory of one corner X(0, t) is decomposed into the cylindrical
radius R(t), the unwrapped azimuth nu(t) and the detrended height
X3tilde(t) = X3(0,t) - c_M*t.  Periodic channels are expanded in Fourier
series; the "fingerprint" n -> n*c_n exposes the dominating integer
frequencies, which lie in arithmetic sets A_{c,d} (torsion theta0 = pi*c/d)
or A_M (straight-line limit).  Truncated lacunary trigonometric sums built
on those sets reproduce the observed multifractal trajectories.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .geometry import TWO_PI, PolygonConfig
from .gauss import rational_time


@dataclass(frozen=True)
class TrajectorySeries:
    """Uniformly sampled trajectory of a single point."""

    times: np.ndarray
    points: np.ndarray
    cfg: PolygonConfig

    def __post_init__(self):
        t = np.asarray(self.times, float)
        if t.ndim != 1 or t.size < 1:
            raise ValueError("times must be a non-empty 1-d array")
        if t.size > 1:
            dt = np.diff(t)
            if np.any(dt <= 0) or abs(dt.max() - dt.min()) > 1e-9 * abs(dt.mean()) + 1e-15:
                raise ValueError("times must be strictly increasing and uniformly spaced")
        if self.points.shape != (t.size, 3):
            raise ValueError("points must have shape (len(times), 3)")

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])


class TrajectoryChannels(NamedTuple):
    R: np.ndarray
    nu: np.ndarray
    x3tilde: np.ndarray


@dataclass(frozen=True)
class Fingerprint:
    """values[i] = indices[i] * (Fourier coefficient at harmonic indices[i])."""

    indices: np.ndarray
    values: np.ndarray
    period: float
    channel: str
    scaling: float = 1.0


@dataclass(frozen=True)
class FrequencySet:
    kind: str
    members: np.ndarray
    bound: int


def period_cd(cfg: PolygonConfig) -> float:
    """Structural time period of the trajectory for theta0 = pi*c/d:
    (d/2)*T_f when c*d is odd, d*T_f when c*d is even."""
    c, d = theta0_fraction(cfg)
    Tf = cfg.t_period
    return (d / 2.0) * Tf if (c * d) % 2 == 1 else d * Tf


def theta0_fraction(cfg: PolygonConfig) -> tuple[int, int]:
    """(c, d) with theta0 = pi*c/d, requiring the exact fraction on cfg."""
    if cfg.theta0_frac is None:
        raise ValueError("cfg.theta0 was not given as an exact fraction of pi")
    f = cfg.theta0_frac
    return int(f.numerator), int(f.denominator)


def trajectory_scaling(cfg: PolygonConfig) -> float:
    """Normalization pi*M/(2*a*c_theta0*d) for trajectory fingerprints.

    Divides out the leading amplitude of the vertical harmonic response
    (delta strength c_theta0, horizontal tangent radius a, structural period
    proportional to d/M**2), so the dominating fingerprint values sit near
    1/4 when c*d is odd and 1/2 when c*d is even.
    """
    _, d = theta0_fraction(cfg)
    return math.pi * cfg.M / (2.0 * cfg.a * cfg.c_theta0 * d)


def trajectory_components(traj: TrajectorySeries) -> TrajectoryChannels:
    """Polar radius, unwrapped azimuth, and height detrended with the
    algebraic center-of-mass speed (not a fitted slope).

    Samples on the z-axis get a NaN azimuth.
    """
    x, y, z = traj.points.T
    R = np.hypot(x, y)
    nu = np.arctan2(y, x)
    on_axis = R < 1e-12
    if np.any(on_axis):
        nu = np.where(on_axis, np.nan, nu)
        good = ~on_axis
        nu[good] = np.unwrap(nu[good])
    else:
        nu = np.unwrap(nu)
    x3tilde = z - traj.cfg.c_M * traj.times
    return TrajectoryChannels(R=R, nu=nu, x3tilde=x3tilde)


def fingerprint(values, period: float, n_max: int, dt: float,
                channel: str = "", scaling: float = 1.0) -> Fingerprint:
    """Fingerprint of a uniformly sampled periodic signal.

    ``values`` must cover an integer number of ``period``s, endpoint
    exclusive (len(values)*dt = R*period).  The harmonic-n coefficient is
    the period average c_n = mean(values * exp(-2*pi*i*n*t/period)); the
    fingerprint value is n*c_n, optionally times ``scaling``.
    """
    values = np.asarray(values)
    L = values.shape[0]
    span = L * dt
    reps = span / period
    R = round(reps)
    if R < 1 or abs(reps - R) > 1e-6 * max(1.0, R):
        raise ValueError(
            f"samples cover {reps:.9g} periods; an integer number is required")
    if n_max >= L // (2 * R):
        raise ValueError(f"n_max = {n_max} too large for {L} samples over {R} period(s)")
    spec = np.fft.fft(values) / L
    n = np.arange(1, n_max + 1)
    vals = scaling * n * spec[n * R]
    return Fingerprint(indices=n, values=vals, period=period,
                       channel=channel, scaling=scaling)


def fingerprint_of(times: np.ndarray, values: np.ndarray, period: float,
                   n_max: int, channel: str = "", scaling: float = 1.0) -> Fingerprint:
    """Fingerprint of a series given with its time axis; a final sample that
    closes the period(s) exactly is dropped."""
    times = np.asarray(times, float)
    values = np.asarray(values)
    dt = float(times[1] - times[0])
    span = times[-1] - times[0] + dt
    if abs((times[-1] - times[0]) / period - round((times[-1] - times[0]) / period)) < 1e-9:
        values = values[:-1]
    return fingerprint(values, period, n_max, dt, channel=channel, scaling=scaling)


def frequency_set_cd(c: int, d: int, bound: int) -> FrequencySet:
    """A_{c,d}: positive integers n(n*d + c)/2 (c*d odd) or n(n*d + c)
    (c*d even), n over the integers."""
    if math.gcd(c, d) != 1:
        raise ValueError(f"gcd(c, d) must be 1, got c={c}, d={d}")
    halve = (c * d) % 2 == 1
    lim = int(math.isqrt(max(8 * bound // max(d, 1), 0))) + abs(c) + 2
    vals = set()
    for n in range(-lim, lim + 1):
        v = n * (n * d + c)
        if halve:
            v //= 2
        if 1 <= v <= bound:
            vals.add(v)
    return FrequencySet(kind=f"A_{c},{d}", members=np.array(sorted(vals)), bound=bound)


def frequency_set_m(M: int, bound: int) -> FrequencySet:
    """A_M = {1} union {n*M +/- 1, n >= 1}, members up to bound."""
    vals = {1}
    n = 1
    while n * M - 1 <= bound:
        for v in (n * M - 1, n * M + 1):
            if 1 <= v <= bound:
                vals.add(v)
        n += 1
    return FrequencySet(kind=f"A_{M}", members=np.array(sorted(vals)), bound=bound)


def dominant_set(kind: str, bound: int, *, c: int | None = None,
                 d: int | None = None, M: int | None = None) -> FrequencySet:
    """Dispatch on kind: "cd" -> A_{c,d}, "m" -> A_M."""
    if kind == "cd":
        return frequency_set_cd(c, d, bound)
    if kind == "m":
        return frequency_set_m(M, bound)
    raise ValueError(f"unknown frequency-set kind {kind!r}")


def _lacunary_sum(t, freqs: np.ndarray, amps: np.ndarray) -> np.ndarray:
    """sum_k amps[k] * exp(2*pi*i*freqs[k]*t), chunked over k."""
    t = np.atleast_1d(np.asarray(t, float))
    out = np.zeros(t.shape, complex)
    for i in range(0, freqs.size, 64):
        f = freqs[i:i + 64]
        a = amps[i:i + 64]
        out += (a * np.exp(2j * math.pi * np.outer(t, f))).sum(axis=1)
    return out


def riemann_phi(variant: str, t, K: int, *, c: int | None = None,
                d: int | None = None, M: int | None = None) -> np.ndarray:
    """Truncated reference sums for corner trajectories.

    variant "classic":  sum_{k<=K} sin(pi*k**2*t)/(pi*k**2)   (real)
    variant "phi":      sum_{k<=K} exp(i*pi*k**2*t)/(i*pi*k**2)
    variant "phi_cd":   sum over the first K members k of A_{c,d} of
                        exp(2*pi*i*k*t)/k
    variant "phi_m":    sum over the first K members k of A_M of
                        exp(2*pi*i*k**2*t)/k**2
    """
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    t_arr = np.atleast_1d(np.asarray(t, float))
    if variant == "classic":
        k = np.arange(1, K + 1, dtype=float)
        out = np.zeros(t_arr.shape)
        for i in range(0, K, 64):
            kk = k[i:i + 64]
            out += (np.sin(math.pi * np.outer(t_arr, kk * kk)) / (math.pi * kk * kk)).sum(axis=1)
    elif variant == "phi":
        k = np.arange(1, K + 1, dtype=float)
        out = _lacunary_sum(t_arr, k * k / 2.0, 1.0 / (1j * math.pi * k * k))
    elif variant == "phi_cd":
        members = frequency_set_cd(c, d, _bound_for(K, lambda b: frequency_set_cd(c, d, b))).members[:K]
        out = _lacunary_sum(t_arr, members.astype(float), 1.0 / members.astype(float))
    elif variant == "phi_m":
        members = frequency_set_m(M, _bound_for(K, lambda b: frequency_set_m(M, b))).members[:K]
        f = members.astype(float) ** 2
        out = _lacunary_sum(t_arr, f, 1.0 / f)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return out if np.ndim(t) else out[0]


def _bound_for(K: int, builder) -> int:
    bound = max(4 * K, 16)
    while builder(bound).members.size < K:
        bound *= 2
    return bound


def phi_m_uniform(M: int, K: int, L: int) -> np.ndarray:
    """phi_m sampled at t = j/L, j = 0..L-1, synthesized by one inverse FFT.

    Exact on the grid: exp(2*pi*i*k**2*j/L) only depends on k**2 mod L.
    """
    members = frequency_set_m(M, _bound_for(K, lambda b: frequency_set_m(M, b))).members[:K]
    spec = np.zeros(L, complex)
    f = members.astype(np.int64) ** 2
    np.add.at(spec, np.mod(f, L), 1.0 / f.astype(float) ** 1)
    return np.fft.ifft(spec) * L


def stereo_project(values, mode: str = "sphere",
                   cfg: PolygonConfig | None = None,
                   times: np.ndarray | None = None) -> np.ndarray:
    """Stereographic projection z = (v1 + i*v2)/(1 + v3).

    mode "sphere" projects unit vectors (rows of ``values``); mode
    "trajectory" projects a trajectory point series using the detrended
    height v3 = X3 - c_M*t (requires cfg and times).
    """
    values = np.asarray(values, float)
    if mode == "trajectory":
        if cfg is None or times is None:
            raise ValueError("trajectory mode needs cfg and times")
        v3 = values[:, 2] - cfg.c_M * np.asarray(times, float)
    elif mode == "sphere":
        v3 = values[:, 2]
    else:
        raise ValueError(f"unknown projection mode {mode!r}")
    denom = 1.0 + v3
    if np.any(np.abs(denom) < 1e-9):
        raise ValueError("projection pole: |1 + v3| < 1e-9 at some sample")
    return (values[:, 0] + 1j * values[:, 1]) / denom


def stereo_unproject(z: np.ndarray) -> np.ndarray:
    """Inverse of the sphere-mode projection, back onto the unit sphere."""
    z = np.asarray(z, complex)
    r2 = np.abs(z) ** 2
    return np.stack([2.0 * z.real, 2.0 * z.imag, 1.0 - r2], axis=-1) / (1.0 + r2)[..., None]


class AffineFit(NamedTuple):
    lam: float
    mu: complex
    abs_err: float
    rel_err: float


def affine_fit(z: np.ndarray, phi: np.ndarray) -> AffineFit:
    """Least-squares phi ~ lam*z + mu with real lam, complex mu.

    Reports max_t |phi - lam*z - mu| and the same normalized by |phi|.
    """
    z = np.asarray(z, complex)
    phi = np.asarray(phi, complex)
    if z.shape != phi.shape:
        raise ValueError("series lengths differ")
    zc = z - z.mean()
    pc = phi - phi.mean()
    denom = float(np.vdot(zc, zc).real)
    if denom < 1e-300:
        raise ValueError("degenerate fit: z is constant")
    lam = float(np.vdot(zc, pc).real) / denom
    mu = complex(phi.mean() - lam * z.mean())
    resid = phi - lam * z - mu
    abs_err = float(np.abs(resid).max())
    rel_err = float(np.max(np.abs(resid) / np.abs(phi)))
    return AffineFit(lam=lam, mu=mu, abs_err=abs_err, rel_err=rel_err)


def rotate_align(z: np.ndarray, M: int, clockwise: bool = True) -> np.ndarray:
    """Rotate a complex series by pi/2 - pi/M (clockwise by default)."""
    ang = math.pi / 2.0 - math.pi / M
    return np.asarray(z, complex) * np.exp(-1j * ang if clockwise else 1j * ang)


def phase_shift(state0, state1, cfg: PolygonConfig) -> float:
    """Residual rotation of the polygon about z after one time period.

    Takes two curve snapshots one T_f apart (the second is the M-sided
    revival).  The tangent of the side initially covering s = pi/M is
    side-averaged at both times, the second sampling window moved by the
    Galilean shift, and the azimuth difference is reduced to (-pi/M, pi/M].
    """
    Tf = cfg.t_period
    if abs((state1.t - state0.t) - Tf) > 1e-9 * Tf:
        raise ValueError("snapshots must be exactly one time period apart")
    shift = rational_time(cfg, 1, 1).galilean_shift
    side = TWO_PI / cfg.M

    def side_mean_azimuth(state, lo):
        s = np.mod(np.asarray(state.s, float) - lo, TWO_PI)
        mask = (s >= 0.25 * side) & (s < 0.75 * side)
        if not np.any(mask):
            raise ValueError("no samples in the side-average window")
        t = np.asarray(state.tangents, float)[mask].mean(axis=0)
        return math.atan2(t[1], t[0])

    phi0 = side_mean_azimuth(state0, 0.0)
    phi1 = side_mean_azimuth(state1, shift)
    dphi = phi1 - phi0
    return float((dphi + math.pi / cfg.M) % (TWO_PI / cfg.M) - math.pi / cfg.M)
