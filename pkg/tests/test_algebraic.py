import math

import numpy as np
import pytest

from helipoly.algebraic import (
    algebraic_solution,
    arclength_mean,
    corner_rotation,
    fit_z_rotation,
    fit_z_rotation_tangents,
    place_vertical,
    reconstruct_curve,
    reconstruct_frames,
    rho_q,
    rotation_x,
    rotation_z,
    scaled_coefficients,
    tangent_at,
)
from helipoly.gauss import delta_train, rational_time
from helipoly.geometry import TWO_PI, corner_position, polygon_config


def kabsch_residual(pts, ref):
    """Max distance after the best rigid alignment of pts onto ref."""
    A = pts - pts.mean(axis=0)
    B = ref - ref.mean(axis=0)
    U, _, Vt = np.linalg.svd(A.T @ B)
    d = np.sign(np.linalg.det(U @ Vt))
    R = (U @ np.diag([1.0, 1.0, d]) @ Vt).T
    return float(np.linalg.norm(A @ R.T - B, axis=1).max())


def test_rho_q_identity():
    cfg = polygon_config(7, b=0.3)
    assert rho_q(cfg, 1) == pytest.approx(cfg.rho0, abs=1e-15)


def test_rho_q_odd():
    cfg = polygon_config(3, b=0.0)
    # rho0 = 2*pi/3 so cos(rho0/2) = 1/2
    assert rho_q(cfg, 5) == pytest.approx(2 * math.acos(0.5 ** 0.2), abs=1e-14)
    assert rho_q(cfg, 5) == pytest.approx(1.02895, abs=5e-5)


def test_rho_q_two_matches_rho0():
    cfg = polygon_config(3, b=0.0)
    assert rho_q(cfg, 2) == pytest.approx(cfg.rho0, abs=1e-14)


def test_scaled_coefficients_initial():
    cfg = polygon_config(4, b=0.0)
    rt = rational_time(cfg, 0, 1)
    coeffs = scaled_coefficients(delta_train(cfg, rt), cfg, rt)
    assert coeffs == pytest.approx(np.full(4, cfg.rho0), abs=1e-13)


def test_scaled_coefficients_moduli():
    cfg = polygon_config(6, theta0=math.pi / 5)
    rt = rational_time(cfg, 1, 5)
    coeffs = scaled_coefficients(delta_train(cfg, rt), cfg, rt)
    assert coeffs.size == 30
    assert np.abs(np.abs(coeffs) - rho_q(cfg, 5)).max() < 1e-10


def test_scaled_phase_is_constant_offset():
    cfg = polygon_config(5, theta0=0.8)
    rt = rational_time(cfg, 2, 3)
    train = delta_train(cfg, rt)
    coeffs = scaled_coefficients(train, cfg, rt)
    dphase = np.angle(coeffs / train.coefficients)
    assert np.abs(dphase + train.global_phase).max() < 1e-12


def test_corner_rotation_planar():
    rho = 0.7
    R = corner_rotation(rho + 0j)
    # acting on the frame rows (T, e1, e2): T rotates toward e1, e2 fixed
    F = (R @ np.eye(3))
    assert F[0] == pytest.approx([math.cos(rho), math.sin(rho), 0], abs=1e-15)
    assert F[2] == pytest.approx([0, 0, 1], abs=1e-15)
    with pytest.raises(ValueError, match="degenerate"):
        corner_rotation(0j)


def test_frame_product_planar_identity():
    cfg = polygon_config(3, b=0.0)
    rt = rational_time(cfg, 0, 1)
    frames = reconstruct_frames(scaled_coefficients(delta_train(cfg, rt), cfg, rt), rt)
    assert np.abs(frames.frames[-1] - np.eye(3)).max() < 1e-12


@pytest.mark.parametrize("M,theta0,p,q", [
    (3, 0.0, 1, 2), (6, math.pi / 5, 1, 5), (6, math.pi / 5, 1, 4),
    (6, math.pi / 5, 3, 10), (5, 0.7, 2, 7), (4, 1.2, 5, 12),
    (7, 0.5, 3, 8), (8, 0.3, 7, 11), (10, 0.55, 5, 9), (3, 1.9, 11, 12),
])
def test_frame_product_rotation_identity(M, theta0, p, q):
    cfg = polygon_config(M, theta0=theta0)
    rt = rational_time(cfg, p, q)
    frames = reconstruct_frames(scaled_coefficients(delta_train(cfg, rt), cfg, rt), rt)
    err = np.abs(frames.frames[-1] - rotation_x(M * cfg.theta0)).max()
    assert err <= 1e-9


def test_frames_orthonormal_and_angles():
    cfg = polygon_config(6, theta0=math.pi / 5)
    rt = rational_time(cfg, 1, 5)
    frames = reconstruct_frames(scaled_coefficients(delta_train(cfg, rt), cfg, rt), rt)
    for F in frames.frames:
        assert np.abs(F @ F.T - np.eye(3)).max() < 1e-10
        assert np.linalg.det(F) == pytest.approx(1.0, abs=1e-10)
    T = frames.tangents
    dots = np.einsum("ij,ij->i", T, np.roll(T, -1, axis=0))
    expected = rho_q(cfg, 5)
    assert np.abs(np.arccos(np.clip(dots, -1, 1)) - expected).max() < 1e-9


def test_reconstruct_planar_closed():
    cfg = polygon_config(4, b=0.0)
    rt = rational_time(cfg, 0, 1)
    frames = reconstruct_frames(scaled_coefficients(delta_train(cfg, rt), cfg, rt), rt)
    curve = reconstruct_curve(frames, rt)
    assert not curve.aligned  # closed polygon, alignment skipped
    v = curve.vertices[-1] - curve.vertices[0]
    assert np.linalg.norm(v) < 1e-12


def test_reconstruct_initial_polygon():
    cfg = polygon_config(6, theta0=math.pi / 5)
    rt = rational_time(cfg, 0, 1)
    _, curve = algebraic_solution(cfg, rt)
    corners = curve.vertices[1:-1]
    ref = np.array([corner_position(cfg, k) for k in range(6)])
    assert kabsch_residual(corners, ref) < 1e-10
    side = np.diff(curve.vertices[1:-1], axis=0)
    assert np.linalg.norm(side, axis=1) == pytest.approx(TWO_PI / 6, abs=1e-12)
    assert side[:, 2] == pytest.approx(TWO_PI * cfg.b / 6, abs=1e-12)


@pytest.mark.parametrize("p,q", [(1, 1), (1, 2), (1, 3), (1, 4), (2, 5),
                                 (5, 6), (3, 7), (1, 8), (4, 9), (7, 10),
                                 (9, 11), (5, 12)])
def test_period_vector_length(p, q):
    cfg = polygon_config(6, theta0=math.pi / 5)
    rt = rational_time(cfg, p, q)
    frames = reconstruct_frames(scaled_coefficients(delta_train(cfg, rt), cfg, rt), rt)
    curve = reconstruct_curve(frames, rt)
    v = curve.vertices[-1] - curve.vertices[0]
    assert np.linalg.norm(v) == pytest.approx(TWO_PI * cfg.b, abs=1e-8)
    # aligned along +z
    assert v[:2] == pytest.approx([0.0, 0.0], abs=1e-9)


def test_energy_conservation_identity():
    for M, q in [(3, 7), (6, 10), (9, 16)]:
        cfg = polygon_config(M, b=0.4)
        rt = rational_time(cfg, 1, q)
        q_eff = q if q % 2 else q // 2
        assert abs(rt.corner_count * (cfg.c_theta0 / math.sqrt(q_eff)) ** 2
                   - M * cfg.c_theta0**2) < 1e-12


def test_center_speed_limits():
    # M -> infinity at fixed b: c_M -> 1 - b**2
    cfg = polygon_config(400, b=0.4)
    assert cfg.c_M == pytest.approx(1 - 0.4**2, abs=1e-3)
    cfg0 = polygon_config(400, b=0.0)
    assert cfg0.c_M == pytest.approx(1.0, abs=1e-3)
    # b -> 1: c_M -> 0
    cfg1 = polygon_config(6, b=1 - 1e-8)
    assert cfg1.c_M < 1e-6


def test_place_vertical_initial_time():
    cfg = polygon_config(6, theta0=math.pi / 5)
    rt = rational_time(cfg, 0, 1)
    _, curve = algebraic_solution(cfg, rt)
    mean = arclength_mean(curve.vertices)
    assert mean == pytest.approx([0.0, 0.0, math.pi * cfg.b], abs=1e-10)


def test_place_vertical_moves_with_center_speed():
    cfg = polygon_config(6, theta0=math.pi / 5)
    rt = rational_time(cfg, 1, 1)
    _, curve = algebraic_solution(cfg, rt)
    mean = arclength_mean(curve.vertices)
    assert mean[2] == pytest.approx(math.pi * cfg.b + cfg.c_M * rt.t, abs=1e-10)


def test_place_vertical_planar():
    cfg = polygon_config(4, b=0.0)
    rt = rational_time(cfg, 1, 3)
    frames = reconstruct_frames(scaled_coefficients(delta_train(cfg, rt), cfg, rt), rt)
    curve = place_vertical(reconstruct_curve(frames, rt), cfg, rt)
    assert arclength_mean(curve.vertices)[2] == pytest.approx(cfg.c_M * rt.t, abs=1e-10)


def test_fit_z_rotation_self():
    cfg = polygon_config(6, theta0=math.pi / 5)
    rt = rational_time(cfg, 1, 5)
    _, curve = algebraic_solution(cfg, rt)
    assert abs(fit_z_rotation(curve, curve.vertices)) < 1e-8


def test_fit_z_rotation_exact_recovery():
    cfg = polygon_config(6, theta0=math.pi / 5)
    rt = rational_time(cfg, 1, 5)
    _, curve = algebraic_solution(cfg, rt)
    ref = curve.vertices @ rotation_z(0.3).T
    assert fit_z_rotation(curve, ref) == pytest.approx(0.3, abs=1e-8)


def test_fit_z_rotation_empty_reference():
    cfg = polygon_config(4, b=0.0)
    rt = rational_time(cfg, 0, 1)
    _, curve = algebraic_solution(cfg, rt)
    with pytest.raises(ValueError, match="empty"):
        fit_z_rotation(curve, np.empty((0, 3)))


def test_fit_z_rotation_tangents_closed_form():
    rng = np.random.default_rng(7)
    T = rng.normal(size=(12, 3))
    T /= np.linalg.norm(T, axis=1, keepdims=True)
    ref = T @ rotation_z(-0.41).T
    assert fit_z_rotation_tangents(T, ref) == pytest.approx(-0.41, abs=1e-12)


def test_tangent_at_segments():
    cfg = polygon_config(6, theta0=math.pi / 5)
    rt = rational_time(cfg, 1, 4)
    frames = reconstruct_frames(scaled_coefficients(delta_train(cfg, rt), cfg, rt), rt)
    stub = frames.boundaries[0]
    assert tangent_at(frames, stub / 2) == pytest.approx([1.0, 0.0, 0.0])
    # just after the first corner: first frame's tangent
    assert tangent_at(frames, stub + 1e-9) == pytest.approx(frames.tangents[0])
    # wrap side carries the final frame whose tangent is again x-hat
    assert tangent_at(frames, TWO_PI - 1e-9) == pytest.approx([1.0, 0.0, 0.0], abs=1e-9)
