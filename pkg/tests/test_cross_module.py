"""Cross-module consistency: evolved fields against exact reconstructions,
the one-corner overlay, and the large-q tangent cloud."""

import math

import numpy as np
import pytest

from helipoly.algebraic import (
    algebraic_solution,
    fit_z_rotation,
    reconstruct_curve,
    reconstruct_frames,
    scaled_coefficients,
)
from helipoly.analysis import stereo_project
from helipoly.evolution import choose_nt, evolve, numeric_angles
from helipoly.gauss import delta_train, gauss_sum, rational_time
from helipoly.geometry import polygon_config


def test_planar_revival_at_period():
    # zero torsion: the field at T_f reproduces the initial polygon exactly
    # (side-mean angles back to rho0, Galilean and phase shifts both zero)
    cfg = polygon_config(3, b=0.0)
    N = 3 * 192
    nt = choose_nt(N, cfg.t_period)
    res = evolve(cfg, N, nt, cfg.t_period, snapshot_times=[cfg.t_period])
    rt = rational_time(cfg, 1, 1)
    ang = numeric_angles(res.snapshots[0], rt)
    assert ang.abs_max < 1e-6


def test_fit_z_rotation_against_evolved_curve():
    # the placed algebraic polygon lands on the evolved curve after a
    # z-rotation; the residual shrinks with resolution
    cfg = polygon_config(6, theta0=math.pi / 5)
    rt = rational_time(cfg, 1, 5)
    _, curve = algebraic_solution(cfg, rt)
    resid = {}
    for Ng in (64, 128):
        N = 6 * Ng
        nt = choose_nt(N, rt.t)
        res = evolve(cfg, N, nt, rt.t, snapshot_times=[rt.t])
        ref = res.snapshots[0].positions
        phi = fit_z_rotation(curve, ref)
        c, s = math.cos(phi), math.sin(phi)
        R = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1.0]])
        from scipy.spatial import cKDTree
        d, _ = cKDTree(ref).query(curve.vertices @ R.T)
        resid[Ng] = d.max()
    side = rt.spacing
    assert resid[128] < resid[64] < 0.2 * side


def test_one_corner_trajectory_overlay():
    # for small times the corner trajectory follows the matched self-similar
    # solution: X_rot(0,t) = X0 + 2*c0*sqrt(t)*(R b(0))
    from helipoly.onecorner import (
        asymptotes,
        corner_trajectory,
        matching_rotation,
        selfsimilar_frame,
    )

    cfg = polygon_config(6, theta0=math.pi / 5)
    t_end = cfg.t_period / 20
    N = 6 * 192
    nt = choose_nt(N, t_end)
    res = evolve(cfg, N, nt, t_end)
    sol = selfsimilar_frame(cfg.c_theta0, 1.0, 40.0, 1e-3)
    R = matching_rotation(asymptotes(sol, tol=2e-3), cfg)
    pred = corner_trajectory(R, cfg, cfg.c_theta0, res.trajectory.times)
    scale = 2 * cfg.c_theta0 * math.sqrt(t_end)
    planar = np.hypot(*(res.trajectory.points[:, :2] - pred[:, :2]).T)
    assert planar.max() < 0.1 * scale
    # vertical components agree to ten percent at the end of the window
    z_num = res.trajectory.points[-1, 2]
    z_pred = pred[-1, 2]
    assert z_num == pytest.approx(z_pred, rel=0.1)


def test_large_q_tangent_cloud():
    # near the straight-line limit the reconstructed tangents concentrate at
    # the pole; their stereographic image keeps the threefold symmetry
    cfg = polygon_config(3, b=1 - 1e-5)
    rt = rational_time(cfg, 18209, 65764)
    assert rt.corner_count == 98646
    frames = reconstruct_frames(
        scaled_coefficients(delta_train(cfg, rt), cfg, rt), rt)
    curve = reconstruct_curve(frames, rt)
    T = frames.tangents @ curve.alignment.T
    assert T[:, 2].mean() == pytest.approx(cfg.b, abs=1e-6)
    z = stereo_project(T)
    assert np.abs(z).max() < 0.01
    from scipy.spatial import cKDTree
    tree = cKDTree(np.column_stack([z.real, z.imag]))
    d, _ = tree.query(np.column_stack([(z * np.exp(2j * np.pi / 3)).real,
                                       (z * np.exp(2j * np.pi / 3)).imag]))
    assert d.max() < 1e-12


def test_gauss_sum_large_q():
    q = 99991  # prime
    assert abs(gauss_sum(-3, 7, q)) == pytest.approx(math.sqrt(q), rel=1e-12)
