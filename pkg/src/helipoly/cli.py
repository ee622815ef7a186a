"""Command-line toolkit: simulation runs, reconstructions, analysis, plots.

Commands: angles, algebraic, evolve, trajectory, fingerprint, riemann,
onecorner, sweep.  Artifact-producing commands write comma-separated series
files (17 significant digits, LF newlines) plus a JSON manifest with sha256
checksums, so re-running with the manifest's parameters reproduces the
artifacts byte for byte.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import itertools
import json
import math
import os
import re
import sys
from fractions import Fraction

import numpy as np

from . import __version__, algebraic, analysis, evolution, gauss, geometry, onecorner
from .svgplot import Series, render_svg


# ---------------------------------------------------------------- parsing

_PI_FRACTION = re.compile(r"^(\d+)(?:/(\d+))?pi$")


def parse_theta0(text: str) -> Fraction | float:
    """Torsion angle: 'c/dpi' is the exact fraction (c/d)*pi, otherwise a
    plain float in radians."""
    text = text.strip().lower()
    m = _PI_FRACTION.match(text)
    if m:
        return Fraction(int(m.group(1)), int(m.group(2) or 1))
    return float(text)


def parse_tend(text: str, cfg: geometry.PolygonConfig) -> float:
    """End time: plain float, 'Ktf' for K time periods, or 'Ktfcd' for K
    structural trajectory periods (needs an exact theta0 fraction)."""
    text = text.strip().lower()
    if text.endswith("tfcd"):
        return float(text[:-4] or 1) * analysis.period_cd(cfg)
    if text.endswith("tf"):
        return float(text[:-2] or 1) * cfg.t_period
    return float(text)


def build_config(args) -> geometry.PolygonConfig:
    if args.M is None:
        raise ValueError("--M is required")
    if args.theta0 is not None:
        return geometry.polygon_config(args.M, theta0=parse_theta0(args.theta0))
    if args.b is not None:
        return geometry.polygon_config(args.M, b=args.b)
    raise ValueError("one of --b or --theta0 is required")


def load_config_file(path: str) -> dict:
    """Flat key=value lines or a single JSON object."""
    with open(path) as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return json.loads(text)
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"bad config line (expected key=value): {line!r}")
        key, val = line.split("=", 1)
        out[key.strip()] = val.strip()
    return out


def apply_config_defaults(args: argparse.Namespace, parser: argparse.ArgumentParser):
    """Fill in unset options from --config; explicit flags win."""
    if not getattr(args, "config", None):
        return
    values = load_config_file(args.config)
    for key, val in values.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            raise ValueError(f"unknown config key {key!r}")
        if getattr(args, dest) is None:
            if isinstance(val, str):
                for cast in (int, float):
                    try:
                        val = cast(val)
                        break
                    except ValueError:
                        continue
            setattr(args, dest, val)


# ---------------------------------------------------------------- artifacts

def write_series(path: str, header: list[str], columns: list[np.ndarray]) -> str:
    """Comma-separated series file: header line, then rows at full double
    precision (17 significant digits), LF newlines."""
    columns = [np.asarray(c) for c in columns]
    if not columns or columns[0].size == 0:
        raise ValueError("refusing to write an empty series")
    if len(header) != len(columns):
        raise ValueError("header and column counts differ")
    n = columns[0].size
    if any(c.size != n for c in columns):
        raise ValueError("columns have unequal lengths")
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for i in range(n):
                fh.write(",".join(f"{float(c[i]):.17g}" for c in columns) + "\n")
    except OSError as exc:
        raise OSError(f"failed writing series to {path}: {exc}") from exc
    return path


def read_series(path: str) -> tuple[list[str], np.ndarray]:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return header, data


def sha256_of(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


class ArtifactDir:
    """Output directory that collects artifacts and emits the manifest."""

    def __init__(self, out: str | None, command: str, parameters: dict):
        self.out = out
        self.command = command
        self.parameters = parameters
        self.files: list[str] = []

    def path(self, name: str) -> str:
        if self.out is None:
            raise ValueError("--out is required to write artifacts")
        os.makedirs(self.out, exist_ok=True)
        return os.path.join(self.out, name)

    def add(self, path: str) -> str:
        self.files.append(path)
        return path

    def series(self, name: str, header: list[str], columns) -> str:
        return self.add(write_series(self.path(name), header, columns))

    def svg(self, name: str, series, **kw) -> str:
        return self.add(render_svg(series, self.path(name), **kw))

    def finish(self, extra: dict | None = None) -> str | None:
        if self.out is None:
            return None
        manifest = {
            "command": self.command,
            "version": __version__,
            "parameters": self.parameters,
            "artifacts": [{"path": os.path.basename(p), "sha256": sha256_of(p)}
                          for p in self.files],
        }
        if extra:
            manifest.update(extra)
        path = self.path("manifest.json")
        with open(path, "w", newline="\n") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return path


def _params(args, keys) -> dict:
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


# ---------------------------------------------------------------- commands

def cmd_angles(args) -> int:
    cfg = build_config(args)
    rows = [("M", cfg.M), ("b", cfg.b), ("a", cfg.a), ("theta0", cfg.theta0),
            ("rho0", cfg.rho0), ("gamma", cfg.gamma),
            ("c_theta0", cfg.c_theta0), ("c_M", cfg.c_M)]
    for name, val in rows:
        print(f"{name} = {val:.17g}")
    if args.out:
        art = ArtifactDir(args.out, "angles", _params(args, ["M", "b", "theta0"]))
        art.series("angles.csv", [r[0] for r in rows],
                   [np.array([r[1]], float) for r in rows])
        art.finish()
    return 0


def cmd_algebraic(args) -> int:
    cfg = build_config(args)
    if args.p is None or args.q is None:
        raise ValueError("--p and --q are required")
    rt = gauss.rational_time(cfg, args.p, args.q)
    train = gauss.delta_train(cfg, rt)
    frames, curve = algebraic.algebraic_solution(cfg, rt, train)
    print(f"t = {rt.t:.17g}  corners = {rt.corner_count}  parity = {rt.parity}")
    print(f"rho_q = {algebraic.rho_q(cfg, rt.q):.17g}")
    print(f"galilean_shift = {rt.galilean_shift:.17g}")
    extra = {}
    if args.reference:
        _, ref = read_series(args.reference)
        phi = algebraic.fit_z_rotation(curve, ref[:, -3:])
        extra["z_rotation"] = phi
        print(f"z_rotation = {phi:.17g}")
    if args.out:
        art = ArtifactDir(args.out, "algebraic",
                          _params(args, ["M", "b", "theta0", "p", "q"]))
        svert = np.concatenate([[0.0], frames.boundaries, [2 * math.pi]])
        art.series("vertices.csv", ["s", "X1", "X2", "X3"],
                   [svert] + [curve.vertices[:, i] for i in range(3)])
        art.series("tangents.csv", ["s_corner", "T1", "T2", "T3"],
                   [frames.boundaries] + [frames.tangents[:, i] for i in range(3)])
        art.series("train.csv", ["location", "re", "im", "abs"],
                   [train.locations, train.coefficients.real,
                    train.coefficients.imag, np.abs(train.coefficients)])
        art.svg("vertices.svg",
                [Series(curve.vertices[:, 0], curve.vertices[:, 1],
                        label="polygon")],
                title=f"t_pq polygon (M={cfg.M}, p={rt.p}, q={rt.q})",
                xlabel="X1", ylabel="X2", equal_axes=True)
        art.finish(extra or None)
    return 0


def _resolved_run(args):
    cfg = build_config(args)
    if args.Ngrid is None:
        raise ValueError("--Ngrid is required")
    N = args.Ngrid * cfg.M
    tend = parse_tend(args.tend, cfg) if args.tend else cfg.t_period
    if args.Nt in (None, "auto"):
        nt = evolution.choose_nt(N, tend)
    else:
        nt = int(args.Nt)
    renorm = (args.renorm or "on") == "on"
    return cfg, N, nt, tend, renorm


def cmd_evolve(args) -> int:
    cfg, N, nt, tend, renorm = _resolved_run(args)
    snaps = [float(x) for x in args.snap.split(",")] if args.snap else []
    res = evolution.evolve(cfg, N, nt, tend, renormalize=renorm,
                           snapshot_times=snaps)
    print(f"N = {N}  Nt = {nt}  tend = {tend:.17g}")
    if tend >= cfg.t_period * (1 - 1e-9):
        try:
            cs = evolution.center_speed_num(res)
        except ValueError:
            pass  # the time period does not land on this step grid
        else:
            print(f"c_M = {cfg.c_M:.17g}  c_M_num = {cs.fd:.17g}  lsq = {cs.lsq:.17g}")
    if args.out:
        art = ArtifactDir(args.out, "evolve",
                          _params(args, ["M", "b", "theta0", "Ngrid", "Nt",
                                         "tend", "renorm", "snap"]))
        traj = res.trajectory
        art.series("trajectory.csv", ["t", "X1", "X2", "X3"],
                   [traj.times] + [traj.points[:, i] for i in range(3)])
        art.series("heights.csv", ["t", "h"],
                   [res.heights[:, 0], res.heights[:, 1]])
        st = res.final_state
        sgrid = geometry.TWO_PI * np.arange(st.n) / N
        art.series("final_state.csv", ["s", "v_re", "v_im", "w"],
                   [sgrid, st.v.real, st.v.imag, st.w])
        for i, snap in enumerate(res.snapshots):
            art.series(f"snapshot_{i:03d}.csv",
                       ["s", "T1", "T2", "T3", "X1", "X2", "X3"],
                       [snap.s] + [snap.tangents[:, j] for j in range(3)]
                       + [snap.positions[:, j] for j in range(3)])
        art.svg("trajectory.svg",
                [Series(traj.points[:, 0], traj.points[:, 1], label="X(0,t)")],
                title="corner trajectory, horizontal plane",
                xlabel="X1", ylabel="X2", equal_axes=True)
        art.finish()
    return 0


def cmd_trajectory(args) -> int:
    cfg = build_config(args)
    if not args.infile:
        raise ValueError("--in is required")
    header, data = read_series(args.infile)
    if header[:4] != ["t", "X1", "X2", "X3"]:
        raise ValueError(f"unexpected columns {header!r} in {args.infile}")
    traj = analysis.TrajectorySeries(times=data[:, 0], points=data[:, 1:4], cfg=cfg)
    ch = analysis.trajectory_components(traj)
    art = ArtifactDir(args.out, "trajectory",
                      _params(args, ["M", "b", "theta0", "infile", "compare_phim"]))
    extra = {}
    if args.compare_phim:
        # stereographic trajectory against the lacunary reference sum; the
        # trajectory winds clockwise, the sum counterclockwise
        z = analysis.stereo_project(traj.points, mode="trajectory",
                                    cfg=cfg, times=traj.times)
        zM = analysis.rotate_align(np.conj(z), cfg.M, clockwise=False)
        phi = analysis.phi_m_uniform(cfg.M, args.compare_phim, traj.times.size - 1)
        phi = np.concatenate([phi, phi[:1]])
        fit = analysis.affine_fit(zM, phi)
        extra["phim_fit"] = {"lam": fit.lam, "mu_re": fit.mu.real,
                             "mu_im": fit.mu.imag, "abs_err": fit.abs_err,
                             "rel_err": fit.rel_err}
        print(f"phim_fit lam = {fit.lam:.17g}  abs = {fit.abs_err:.17g}  "
              f"rel = {fit.rel_err:.17g}")
        if args.out:
            fitted = fit.lam * zM + fit.mu
            art.series("zphi.csv",
                       ["t", "z_re", "z_im", "phi_re", "phi_im",
                        "fit_re", "fit_im"],
                       [traj.times, zM.real, zM.imag, phi.real, phi.imag,
                        fitted.real, fitted.imag])
            art.svg("zphi.svg",
                    [Series(fitted.real, fitted.imag, label="lam*z_M + mu"),
                     Series(phi.real, phi.imag, label="phi_M")],
                    title=f"trajectory vs phi_{cfg.M}", xlabel="Re",
                    ylabel="Im", equal_axes=True)
    if args.out:
        art.series("channels.csv", ["t", "X1", "X2", "X3", "R", "nu", "X3tilde"],
                   [traj.times, traj.points[:, 0], traj.points[:, 1],
                    traj.points[:, 2], ch.R, ch.nu, ch.x3tilde])
        art.svg("channels.svg",
                [Series(traj.times, ch.R, label="R"),
                 Series(traj.times, ch.x3tilde, label="X3tilde")],
                title="trajectory channels", xlabel="t")
        art.finish(extra or None)
    mask = np.isfinite(ch.nu)
    A = np.column_stack([traj.times[mask], np.ones(int(mask.sum()))])
    slope = float(np.linalg.lstsq(A, ch.nu[mask], rcond=None)[0][0])
    print(f"nu_slope = {slope:.17g}")
    return 0


def cmd_fingerprint(args) -> int:
    cfg = build_config(args)
    if not args.infile:
        raise ValueError("--in is required")
    header, data = read_series(args.infile)
    if args.channel is None:
        args.channel = "X3tilde"
    if args.nmax is None:
        args.nmax = 2000
    if args.channel not in header:
        raise ValueError(f"channel {args.channel!r} not in {header}")
    times = data[:, header.index("t")]
    values = data[:, header.index(args.channel)]
    if args.period:
        period = float(args.period)
    else:
        period = analysis.period_cd(cfg)
    scaling = 1.0
    if args.scale == "auto":
        scaling = analysis.trajectory_scaling(cfg)
    elif args.scale not in (None, "none"):
        scaling = float(args.scale)
    fp = analysis.fingerprint_of(times, values, period, args.nmax,
                                 channel=args.channel, scaling=scaling)
    mags = np.abs(fp.values)
    top = np.argsort(mags)[::-1][:10]
    print(f"period = {period:.17g}  scaling = {scaling:.17g}")
    print("top harmonics:", " ".join(str(int(n)) for n in np.sort(fp.indices[top])))
    if args.out:
        art = ArtifactDir(args.out, "fingerprint",
                          _params(args, ["M", "b", "theta0", "infile", "channel",
                                         "nmax", "period", "scale", "mark"]))
        art.series("fingerprint.csv", ["n", "re", "im", "abs"],
                   [fp.indices.astype(float), fp.values.real, fp.values.imag, mags])
        series = [Series(fp.indices.astype(float), mags, label="|n c_n|",
                         kind="points")]
        if args.mark:
            if args.mark == "cd":
                c, d = analysis.theta0_fraction(cfg)
                members = analysis.frequency_set_cd(c, d, args.nmax).members
            elif args.mark == "m":
                fs = analysis.frequency_set_m(cfg.M, int(math.isqrt(args.nmax)) + 1)
                members = fs.members[fs.members**2 <= args.nmax] ** 2
            else:
                raise ValueError(f"unknown --mark {args.mark!r}")
            members = members[members <= args.nmax]
            art.series("dominating.csv", ["n"], [members.astype(float)])
            series.append(Series(members.astype(float),
                                 mags[members - 1], label="dominating",
                                 kind="stars", color="#d62728"))
        art.svg("fingerprint.svg", series, title=f"fingerprint of {args.channel}",
                xlabel="n", ylabel="|n c_n|")
        art.finish()
    return 0


def cmd_riemann(args) -> int:
    variant = args.variant or "classic"
    K = args.terms if args.terms is not None else 1024
    L = args.samples if args.samples is not None else 4096
    if variant in ("classic", "phi"):
        tmax = 2.0
    elif variant == "phi_cd":
        if args.c is None or args.d is None:
            raise ValueError("--c and --d are required for phi_cd")
        tmax = 0.5 if (args.c * args.d) % 2 else 1.0
    elif variant == "phi_m":
        if args.M is None:
            raise ValueError("--M is required for phi_m")
        tmax = 1.0
    else:
        raise ValueError(f"unknown variant {variant!r}")
    t = np.linspace(0.0, tmax, L)
    vals = analysis.riemann_phi(variant, t, K, c=args.c, d=args.d, M=args.M)
    vals = np.asarray(vals, complex)
    print(f"variant = {variant}  terms = {K}  samples = {L}  tmax = {tmax}")
    if args.out:
        art = ArtifactDir(args.out, "riemann",
                          _params(args, ["variant", "terms", "samples", "c", "d", "M"]))
        art.series("riemann.csv", ["t", "re", "im"], [t, vals.real, vals.imag])
        art.svg("riemann.svg", [Series(vals.real, vals.imag, label=variant)],
                title=f"{variant} (K={K})", xlabel="Re", ylabel="Im",
                equal_axes=True)
        art.finish()
    return 0


def cmd_onecorner(args) -> int:
    cfg = build_config(args)
    c0 = cfg.c_theta0
    if args.table1:
        qs = [1002, 2002, 4002, 8002] if args.qlist is None else \
            [int(x) for x in args.qlist.split(",")]
        errors = []
        for q in qs:
            rt = gauss.rational_time(cfg, 1, q)
            train = gauss.delta_train(cfg, rt)
            coeffs = algebraic.scaled_coefficients(train, cfg, rt)
            frames = algebraic.reconstruct_frames(coeffs, rt)
            err = abs(c0 - onecorner.curvature_fd(frames, cfg, rt))
            errors.append(err)
            print(f"q = {q:7d}   |c0 - approx| = {err:.5e}")
        if args.out:
            art = ArtifactDir(args.out, "onecorner",
                              _params(args, ["M", "b", "theta0", "qlist"]))
            art.series("table1.csv", ["q", "error"],
                       [np.array(qs, float), np.array(errors)])
            art.finish()
        return 0
    q = args.q if args.q is not None else 502
    t = (2 * math.pi / cfg.M**2) / q
    # --S/--ds are in similarity units s/sqrt(t); the solve is at t_1q
    S = args.S if args.S else 40.0
    ds = args.ds if args.ds else min(5e-4, 0.02 / S)
    sol = onecorner.selfsimilar_frame(c0, t, S * math.sqrt(t), ds * math.sqrt(t))
    am, ap = onecorner.asymptotes(sol, tol=args.tail_tol or 1e-3)
    R = onecorner.matching_rotation((am, ap), cfg)
    matched = onecorner.rotated_solution(sol, R, cfg)
    print(f"c0 = {c0:.17g}  t = t_1,{q} = {t:.17g}")
    print(f"A+ = {ap[0]:.12g} {ap[1]:.12g} {ap[2]:.12g}")
    print(f"A1 target exp(-pi c0^2/2) = {math.exp(-math.pi * c0**2 / 2):.12g}")
    if args.out:
        art = ArtifactDir(args.out, "onecorner",
                          _params(args, ["M", "b", "theta0", "q", "S", "ds"]))
        art.series("solution.csv", ["s", "T1", "T2", "T3", "X1", "X2", "X3"],
                   [sol.s] + [sol.tangent[:, i] for i in range(3)]
                   + [sol.curve[:, i] for i in range(3)])
        art.series("matched.csv", ["s", "T1", "T2", "T3", "X1", "X2", "X3"],
                   [matched.s] + [matched.tangent[:, i] for i in range(3)]
                   + [matched.curve[:, i] for i in range(3)])
        art.svg("matched.svg",
                [Series(matched.curve[:, 0], matched.curve[:, 1], label="X_rot")],
                title="matched one-corner curve", xlabel="X1", ylabel="X2",
                equal_axes=True)
        art.finish({"rotation": R.tolist(),
                    "asymptote_plus": ap.tolist(),
                    "asymptote_minus": am.tolist()})
    return 0


def _sweep_one(payload) -> tuple[str, int]:
    argv, subdir = payload
    code = run_command(argv + ["--out", subdir])
    return subdir, code


def cmd_sweep(args) -> int:
    if not args.sweep_config:
        raise ValueError("--sweep-config is required")
    with open(args.sweep_config) as fh:
        spec = json.load(fh)
    command = spec["command"]
    base = {str(k): v for k, v in spec.get("base", {}).items()}
    grid = {str(k): v for k, v in spec.get("grid", {}).items()}
    if not args.out:
        raise ValueError("--out is required")
    os.makedirs(args.out, exist_ok=True)
    keys = sorted(grid)
    runs = []
    for i, combo in enumerate(itertools.product(*(grid[k] for k in keys))):
        params = dict(base)
        params.update(dict(zip(keys, combo)))
        argv = [command]
        for k, v in sorted(params.items()):
            argv += [f"--{k}", str(v)]
        tag = "_".join(f"{k}{v}" for k, v in zip(keys, combo))
        subdir = os.path.join(args.out, f"run_{i:03d}_{tag}")
        runs.append((argv, subdir))
    results = []
    with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as ex:
        for subdir, code in ex.map(_sweep_one, runs):
            print(f"{subdir}: exit {code}")
            results.append({"dir": os.path.basename(subdir), "exit": code})
    with open(os.path.join(args.out, "sweep_manifest.json"), "w", newline="\n") as fh:
        json.dump({"command": command, "version": __version__, "runs": results},
                  fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 0 if all(r["exit"] == 0 for r in results) else 1


# ---------------------------------------------------------------- driver

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="helipoly",
        description="Binormal-flow dynamics of regular helical polygons.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tend=False):
        p.add_argument("--M", type=int, default=None)
        p.add_argument("--b", type=float, default=None)
        p.add_argument("--theta0", type=str, default=None,
                       help="radians, or an exact fraction of pi like 1/5pi")
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--config", type=str, default=None,
                       help="key=value or JSON file; flags override")

    p = sub.add_parser("angles", help="derived scalar parameters")
    common(p)

    p = sub.add_parser("algebraic", help="exact polygon at a rational time")
    common(p)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--reference", type=str, default=None,
                   help="series file of points for the z-rotation fit")

    p = sub.add_parser("evolve", help="pseudo-spectral time integration")
    common(p)
    p.add_argument("--Ngrid", type=int, default=None, help="nodes per side, N/M")
    p.add_argument("--Nt", type=str, default=None, help="step count or 'auto'")
    p.add_argument("--tend", type=str, default=None,
                   help="seconds, or 'Ktf' / 'Ktfcd' multiples")
    p.add_argument("--renorm", choices=["on", "off"], default=None)
    p.add_argument("--snap", type=str, default=None,
                   help="comma-separated snapshot times")

    p = sub.add_parser("trajectory", help="R, nu, X3tilde channels of a run")
    common(p)
    p.add_argument("--in", dest="infile", type=str, default=None)
    p.add_argument("--compare-phim", type=int, default=None, metavar="K",
                   help="overlay the stereographic trajectory on the K-term "
                        "reference sum and fit it")

    p = sub.add_parser("fingerprint", help="n * Fourier coefficient spectrum")
    common(p)
    p.add_argument("--in", dest="infile", type=str, default=None)
    p.add_argument("--channel", type=str, default=None)
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--period", type=str, default=None,
                   help="seconds; defaults to the structural period")
    p.add_argument("--scale", type=str, default=None, help="none | auto | float")
    p.add_argument("--mark", choices=["cd", "m"], default=None,
                   help="star the dominating frequency set")

    p = sub.add_parser("riemann", help="reference trigonometric sums")
    common(p)
    p.add_argument("--variant", choices=["classic", "phi", "phi_cd", "phi_m"],
                   default=None)
    p.add_argument("--terms", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--c", type=int, default=None)
    p.add_argument("--d", type=int, default=None)

    p = sub.add_parser("onecorner", help="self-similar one-corner matching")
    common(p)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--S", type=float, default=None,
                   help="half-width of the s-range, in units of sqrt(t)")
    p.add_argument("--ds", type=float, default=None,
                   help="step in the same sqrt(t) units")
    p.add_argument("--tail-tol", type=float, default=None)
    p.add_argument("--table1", action="store_true",
                   help="curvature-recovery error table over q")
    p.add_argument("--qlist", type=str, default=None)

    p = sub.add_parser("sweep", help="fan out runs over a parameter grid")
    p.add_argument("--sweep-config", type=str, default=None)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--jobs", type=int, default=None)
    return parser


_DISPATCH = {
    "angles": cmd_angles,
    "algebraic": cmd_algebraic,
    "evolve": cmd_evolve,
    "trajectory": cmd_trajectory,
    "fingerprint": cmd_fingerprint,
    "riemann": cmd_riemann,
    "onecorner": cmd_onecorner,
    "sweep": cmd_sweep,
}


def run_command(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if hasattr(args, "config"):
            apply_config_defaults(args, parser)
        return _DISPATCH[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
