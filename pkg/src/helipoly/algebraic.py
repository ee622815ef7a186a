"""Exact polygon reconstruction at rational times from the delta train.

Crossing a Dirac delta of the (scaled) filament function with weight
``alpha + i*beta`` rotates the orthonormal frame (T, e1, e2) by the matrix
exponential of the parallel-frame generator

    A = [[ 0, alpha, beta],
         [-alpha, 0,    0],
         [-beta,  0,    0]],

i.e. a rotation by angle rho = |alpha + i*beta| about the axis
(0, beta, -alpha)/rho expressed in the current frame.  Chaining the
corner rotations around one space period multiplies out to a rotation by
M*theta0 about the x-axis, which is the discrete form of total torsion
conservation; integrating the tangent rows then rebuilds the polygon up to
a rigid motion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.spatial import cKDTree

from .gauss import DeltaTrain, RationalTime, corner_locations, delta_train
from .geometry import TWO_PI, PolygonConfig


@dataclass(frozen=True)
class FrameSet:
    """Per-side orthonormal frames (rows T, e1, e2) of the t_pq polygon.

    frames[i] is the frame on the side following corner i; boundaries[i] is
    the arc length of corner i.  The frame on the initial stub [0, boundaries[0])
    is the identity.
    """

    frames: np.ndarray
    boundaries: np.ndarray

    @property
    def tangents(self) -> np.ndarray:
        return self.frames[:, 0, :]


@dataclass(frozen=True)
class AlgebraicCurve:
    """Reconstructed polygon: corner positions plus the two period endpoints.

    ``alignment`` is the rotation that took the raw reconstruction onto the
    +z period axis; apply it to FrameSet rows to express them in the same
    frame as the vertices.
    """

    vertices: np.ndarray
    boundaries: np.ndarray
    aligned: bool
    vertical_offset: float = 0.0
    z_rotation: float | None = None
    alignment: np.ndarray = field(default_factory=lambda: np.eye(3))


def rho_q(cfg: PolygonConfig, q: int) -> float:
    """Angle between adjacent sides of the polygon at any t_pq.

    cos(rho_q/2) = cos(rho0/2)**(1/q) for odd q, exponent 2/q for even q.
    """
    if q < 1:
        raise ValueError(f"q must be >= 1, got q={q}")
    expo = (1.0 if q % 2 else 2.0) / q
    return 2.0 * math.acos(math.cos(cfg.rho0 / 2.0) ** expo)


def scaled_coefficients(train: DeltaTrain, cfg: PolygonConfig,
                        rt: RationalTime) -> np.ndarray:
    """Rescale the delta weights to common modulus rho_q, dropping the
    global phase; these are the corner weights the frames integrate."""
    rho = rho_q(cfg, rt.q)
    scale = (rho / train.modulus) * np.exp(-1j * train.global_phase)
    return train.coefficients * scale


def corner_rotation(z: complex) -> np.ndarray:
    """Rodrigues form of exp(A) for the generator A of a corner of weight z."""
    rho = abs(z)
    if rho == 0.0:
        raise ValueError("zero-modulus corner weight gives a degenerate corner")
    axis = np.array([0.0, z.imag / rho, -z.real / rho])
    K = np.array([[0.0, -axis[2], axis[1]],
                  [axis[2], 0.0, -axis[0]],
                  [-axis[1], axis[0], 0.0]])
    return np.eye(3) + math.sin(rho) * K + (1.0 - math.cos(rho)) * (K @ K)


def reconstruct_frames(coeffs: np.ndarray, rt: RationalTime) -> FrameSet:
    """Chain the per-corner rotations starting from the identity frame."""
    coeffs = np.asarray(coeffs, dtype=complex)
    if np.any(np.abs(coeffs) == 0.0):
        raise ValueError("zero-modulus corner weight gives a degenerate corner")
    n = coeffs.size
    rho = np.abs(coeffs)
    ax_y = coeffs.imag / rho
    ax_z = -coeffs.real / rho
    sin_r, cos_r = np.sin(rho), np.cos(rho)
    # Rodrigues for axis (0, ay, az): R = I + sin*K + (1-cos)*K@K, batched.
    R = np.empty((n, 3, 3))
    R[:, 0, 0] = cos_r
    R[:, 0, 1] = -sin_r * ax_z
    R[:, 0, 2] = sin_r * ax_y
    R[:, 1, 0] = sin_r * ax_z
    R[:, 1, 1] = 1.0 - (1.0 - cos_r) * ax_z * ax_z
    R[:, 1, 2] = (1.0 - cos_r) * ax_y * ax_z
    R[:, 2, 0] = -sin_r * ax_y
    R[:, 2, 1] = (1.0 - cos_r) * ax_y * ax_z
    R[:, 2, 2] = 1.0 - (1.0 - cos_r) * ax_y * ax_y
    frames = np.empty((n, 3, 3))
    F = np.eye(3)
    for i in range(n):
        F = R[i] @ F
        frames[i] = F
    boundaries, _ = corner_locations(rt)
    return FrameSet(frames=frames, boundaries=boundaries)


def rotation_x(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rotation_z(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def tangent_at(frames: FrameSet, s: float) -> np.ndarray:
    """Piecewise-constant tangent of the reconstructed polygon at arc length s."""
    b = frames.boundaries
    n = b.size
    spacing = TWO_PI / n
    s = s % TWO_PI
    if s < b[0]:
        return np.array([1.0, 0.0, 0.0])
    i = min(int((s - b[0]) // spacing), n - 1)
    return frames.frames[i, 0]


def reconstruct_curve(frames: FrameSet, rt: RationalTime) -> AlgebraicCurve:
    """Integrate the tangents: stub, full sides, closing stub; then align
    the period vector with +z (skipped for the closed planar case)."""
    b = frames.boundaries
    n = b.size
    if n != rt.corner_count:
        raise ValueError(f"frame count {n} does not match corner count {rt.corner_count}")
    spacing = rt.spacing
    stub = b[0]
    T = frames.tangents
    verts = np.empty((n + 2, 3))
    verts[0] = 0.0
    verts[1] = stub * np.array([1.0, 0.0, 0.0])
    steps = spacing * T[:-1]
    verts[2:n + 1] = verts[1] + np.cumsum(steps, axis=0)
    verts[n + 1] = verts[n] + (spacing - stub) * T[-1]
    v = verts[-1] - verts[0]
    vlen = float(np.linalg.norm(v))
    aligned = False
    L1 = np.eye(3)
    if vlen > 1e-9:
        vhat = v / vlen
        axis = np.cross(vhat, [0.0, 0.0, 1.0])
        sn = float(np.linalg.norm(axis))
        cs = float(vhat[2])
        if sn > 1e-15:
            axis /= sn
            K = np.array([[0.0, -axis[2], axis[1]],
                          [axis[2], 0.0, -axis[0]],
                          [-axis[1], axis[0], 0.0]])
            L1 = np.eye(3) + sn * K + (1.0 - cs) * (K @ K)
            verts = verts @ L1.T
        aligned = True
    return AlgebraicCurve(vertices=verts, boundaries=b.copy(), aligned=aligned,
                          alignment=L1)


def center_speed(cfg: PolygonConfig) -> float:
    """Vertical speed of the center of mass,
    c_M = -2*ln(cos(rho0/2)) / ((pi/M)*tan(pi/M))."""
    return cfg.c_M


def arclength_mean(vertices: np.ndarray) -> np.ndarray:
    """Mean of a piecewise-linear curve weighted by segment length."""
    seg = np.diff(vertices, axis=0)
    lengths = np.linalg.norm(seg, axis=1)
    mids = 0.5 * (vertices[1:] + vertices[:-1])
    total = lengths.sum()
    if total == 0.0:
        return vertices[0]
    return (mids * lengths[:, None]).sum(axis=0) / total


def place_vertical(curve: AlgebraicCurve, cfg: PolygonConfig,
                   rt: RationalTime) -> AlgebraicCurve:
    """Translate so the period-mean height is pi*b + c_M*t and the horizontal
    center of mass sits at the origin."""
    mean = arclength_mean(curve.vertices)
    target = np.array([0.0, 0.0, math.pi * cfg.b + cfg.c_M * rt.t])
    offset = target - mean
    return replace(curve, vertices=curve.vertices + offset,
                   vertical_offset=float(offset[2]))


def fit_z_rotation(curve: AlgebraicCurve, reference: np.ndarray) -> float:
    """Angle phi minimizing the summed squared distance from Rot_z(phi) applied
    to the curve vertices to their nearest reference points."""
    reference = np.asarray(reference, dtype=float)
    if reference.size == 0:
        raise ValueError("reference point set is empty")
    tree = cKDTree(reference.reshape(-1, 3))
    verts = curve.vertices

    def cost(phi: float) -> float:
        d, _ = tree.query(verts @ rotation_z(phi).T)
        return float(np.dot(d, d))

    grid = np.linspace(-math.pi, math.pi, 721, endpoint=False)
    costs = [cost(g) for g in grid]
    k = int(np.argmin(costs))
    lo, hi = grid[k] - (grid[1] - grid[0]), grid[k] + (grid[1] - grid[0])
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, bb = lo, hi
    c = bb - invphi * (bb - a)
    d = a + invphi * (bb - a)
    fc, fd = cost(c), cost(d)
    for _ in range(80):
        if fc < fd:
            bb, d, fd = d, c, fc
            c = bb - invphi * (bb - a)
            fc = cost(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (bb - a)
            fd = cost(d)
    return float((a + bb) / 2.0)


def fit_z_rotation_tangents(tangents: np.ndarray, reference: np.ndarray) -> float:
    """Closed-form z-rotation aligning paired tangent lists (least squares)."""
    t = np.asarray(tangents, float)
    r = np.asarray(reference, float)
    s = np.sum((t[:, 0] + 1j * t[:, 1]) * (r[:, 0] - 1j * r[:, 1]))
    return float(-np.angle(s))


def algebraic_solution(cfg: PolygonConfig, rt: RationalTime,
                       train: DeltaTrain | None = None) -> tuple[FrameSet, AlgebraicCurve]:
    """Full pipeline: delta train -> scaled weights -> frames -> placed curve."""
    if train is None:
        train = delta_train(cfg, rt)
    coeffs = scaled_coefficients(train, cfg, rt)
    frames = reconstruct_frames(coeffs, rt)
    curve = reconstruct_curve(frames, rt)
    curve = place_vertical(curve, cfg, rt)
    return frames, curve
