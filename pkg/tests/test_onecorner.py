import math

import numpy as np
import pytest

from helipoly.algebraic import reconstruct_frames, scaled_coefficients
from helipoly.gauss import delta_train, rational_time
from helipoly.geometry import polygon_config
from helipoly.onecorner import (
    InsufficientDomainError,
    asymptotes,
    corner_anchor,
    corner_trajectory,
    curvature_fd,
    matching_rotation,
    rotated_solution,
    selfsimilar_asymptotes,
    selfsimilar_frame,
    side_directions,
)


def test_zero_strength_is_straight_line():
    sol = selfsimilar_frame(0.0, 1.0, 5.0, 1e-3)
    assert np.abs(sol.tangent - [1.0, 0.0, 0.0]).max() < 1e-9
    # straight segment through the (degenerate) anchor
    assert np.abs(sol.curve[:, 0] - sol.s).max() < 1e-9


def test_frames_stay_orthonormal():
    sol = selfsimilar_frame(0.4, 1.0, 20.0, 1e-3)
    F = np.stack([sol.tangent, sol.normal, sol.binormal], axis=1)
    gram = np.einsum("nij,nkj->nik", F, F)
    assert np.abs(gram - np.eye(3)).max() < 1e-9


def test_anchor_scales_like_sqrt_t():
    a = selfsimilar_frame(0.3, 1.0, 1.0, 1e-2)
    b = selfsimilar_frame(0.3, 4.0, 1.0, 1e-2)
    mid = a.s.size // 2
    assert np.linalg.norm(b.curve[mid]) == pytest.approx(
        2 * np.linalg.norm(a.curve[mid]), rel=1e-12)


def test_input_validation():
    with pytest.raises(ValueError, match="t"):
        selfsimilar_frame(0.3, 0.0, 1.0, 1e-2)
    with pytest.raises(ValueError, match="c0"):
        selfsimilar_frame(-0.3, 1.0, 1.0, 1e-2)


@pytest.mark.parametrize("c0", [0.2, 0.4, 0.8])
def test_asymptote_first_component(c0):
    sol = selfsimilar_frame(c0, 1.0, 40.0, 1e-3)
    am, ap = asymptotes(sol, tol=8e-3)
    target = math.exp(-math.pi * c0**2 / 2)
    assert abs(ap[0] - target) < 1e-3
    assert am[0] == pytest.approx(ap[0])
    assert am[1:] == pytest.approx(-ap[1:])


def test_asymptote_angle_matches_corner_angle():
    cfg = polygon_config(6, theta0=math.pi / 5)
    sol = selfsimilar_frame(cfg.c_theta0, 1.0, 40.0, 1e-3)
    am, ap = asymptotes(sol, tol=2e-3)
    angle = math.acos(float(np.clip(am @ ap, -1, 1)))
    assert angle == pytest.approx(cfg.rho0, abs=2e-4)


def test_asymptotes_insufficient_domain():
    sol = selfsimilar_frame(0.8, 1.0, 3.0, 1e-3)
    with pytest.raises(InsufficientDomainError) as err:
        asymptotes(sol, tol=1e-6)
    assert err.value.suggested_S > 3.0


def test_selfsimilar_asymptotes_grows_domain():
    (am, ap), S = selfsimilar_asymptotes(0.3, tol=1e-3, S0=5.0, ds=2e-3)
    assert S >= 5.0
    assert abs(ap[0] - math.exp(-math.pi * 0.09 / 2)) < 1e-3


def test_matching_rotation_identity_case():
    cfg = polygon_config(6, theta0=math.pi / 5)
    tm, tp = side_directions(cfg)
    R = matching_rotation((tm, tp), cfg)
    assert np.abs(R - np.eye(3)).max() < 1e-12


def test_matching_rotation_exact_asymptotes():
    # synthetic asymptotes with exactly the polygon's corner angle map onto
    # the side pair to machine precision
    cfg = polygon_config(6, theta0=math.pi / 5)
    half = cfg.rho0 / 2
    ap = np.array([math.cos(half), math.sin(half) * 0.6,
                   math.sin(half) * 0.8])
    am = np.array([ap[0], -ap[1], -ap[2]])
    R = matching_rotation((am, ap), cfg)
    tm, tp = side_directions(cfg)
    assert np.abs(R @ ap - tp).max() < 1e-12
    assert np.abs(R @ am - tm).max() < 1e-6
    assert np.abs(R @ R.T - np.eye(3)).max() < 1e-12
    assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-12)


def test_matching_rotation_estimated_asymptotes():
    cfg = polygon_config(6, theta0=math.pi / 5)
    sol = selfsimilar_frame(cfg.c_theta0, 1.0, 40.0, 1e-3)
    am, ap = asymptotes(sol, tol=2e-3)
    R = matching_rotation((am, ap), cfg)
    tm, tp = side_directions(cfg)
    assert np.abs(R @ ap - tp).max() < 1e-12  # exact by construction
    assert np.abs(R @ am - tm).max() < 5e-4   # limited by estimation error
    assert np.abs(R @ R.T - np.eye(3)).max() < 1e-12


def test_rotated_solution_anchor():
    cfg = polygon_config(6, theta0=math.pi / 5)
    t = 1e-6
    sol = selfsimilar_frame(cfg.c_theta0, t, 5.0 * math.sqrt(t), 1e-3 * math.sqrt(t))
    R = np.eye(3)
    matched = rotated_solution(sol, R, cfg)
    mid = sol.s.size // 2
    # at tiny t the corner point sits at the polygon corner
    assert np.abs(matched.curve[mid] - corner_anchor(cfg)).max() < 1e-2
    a = cfg.a
    expected = [-a * math.pi / 6, -a * math.pi / (6 * math.tan(math.pi / 6)), 0.0]
    assert corner_anchor(cfg) == pytest.approx(expected)


def test_corner_trajectory_limit():
    cfg = polygon_config(6, theta0=math.pi / 5)
    R = np.eye(3)
    pts = corner_trajectory(R, cfg, cfg.c_theta0, np.array([0.0, 1e-8, 1.0]))
    assert pts[0] == pytest.approx(corner_anchor(cfg))
    assert np.linalg.norm(pts[2] - corner_anchor(cfg)) == pytest.approx(
        2 * cfg.c_theta0, rel=1e-12)


def test_curvature_recovery_table_row():
    cfg = polygon_config(6, theta0=math.pi / 5)
    rt = rational_time(cfg, 1, 1002)
    frames = reconstruct_frames(
        scaled_coefficients(delta_train(cfg, rt), cfg, rt), rt)
    err = abs(cfg.c_theta0 - curvature_fd(frames, cfg, rt))
    assert err == pytest.approx(6.8511e-5, rel=1e-3)


def test_curvature_fd_parity_guard():
    cfg = polygon_config(6, theta0=math.pi / 5)
    rt = rational_time(cfg, 1, 1001)
    frames = reconstruct_frames(
        scaled_coefficients(delta_train(cfg, rt), cfg, rt), rt)
    with pytest.raises(ValueError, match="2 mod 4"):
        curvature_fd(frames, cfg, rt)
