"""Command-line front end.

Subcommands: ``branch``, ``verify-exact``, ``evolve``, ``kernels`` and
``diagnose``.  Every option may also come from a flat ``key = value``
file given with ``--config``; flags on the command line win.  The output
directory is ``--outdir``, else ``$GO_WAVES_OUTDIR``, else the config
file entry, else the current directory.

Exit codes: 0 success, 2 invalid input, 3 solver failure, 4 blow-up.
"""
from __future__ import annotations

import argparse
import logging
import math
import os
import subprocess
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import diagnose
from .evolution import BREAKING_FACTOR, EvolutionConfig, evolve, stability_ceiling
from .exact_waves import ExactWave, verify_exact
from .fourier import (
    TorusGrid,
    WaveProfile,
    kernel_G,
    kernel_G_printed,
    kernel_G_series,
    kernel_K,
    kernel_K_series,
    mean_tolerance,
    shift,
)
from .model import CriticalGardner, ModelParams
from .solver import ContinuationSettings, SolverError, check_bifurcation, continue_branch

EXIT_OK, EXIT_INVALID, EXIT_SOLVER, EXIT_BLOWUP = 0, 2, 3, 4
OUTDIR_ENV = "GO_WAVES_OUTDIR"
VERIFY_TOL = 1e-4

log = logging.getLogger("gardner_ostrovsky")


class InputError(ValueError):
    """Invalid user input; maps to exit code 2."""


def fmt(v) -> str:
    """Shortest round-trip text for numbers; blank for None."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def git_describe() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=10,
        )
    except (OSError, subprocess.SubprocessError):
        return "unknown"
    return out.stdout.strip() or "unknown"


def header(args) -> list[str]:
    lines = [f"# gardner_ostrovsky {__version__} {args.command}"]
    for key in sorted(vars(args)):
        if key in ("func", "command"):
            continue
        val = getattr(args, key)
        lines.append(f"# {key} = {val if not isinstance(val, float) else fmt(val)}")
    return lines


def write_text(path: Path, args, body: list[str]):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(header(args) + body) + "\n")


def write_profile(path: Path, args, profile: WaveProfile, extra: list[str] = ()):
    rows = [f"# {line}" for line in extra]
    rows += [f"{fmt(x)} {fmt(u)}" for x, u in zip(profile.grid.nodes, profile.samples)]
    write_text(path, args, rows)


def read_profile(path: str) -> WaveProfile:
    """Two-column ``x value`` file over one period on the torus grid."""
    try:
        data = np.loadtxt(path, comments="#", ndmin=2)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read profile file {path}: {exc}") from exc
    if data.shape[1] != 2:
        raise InputError(f"profile file {path} must have two columns")
    n = data.shape[0]
    try:
        grid = TorusGrid(n)
    except ValueError as exc:
        raise InputError(f"profile file {path}: {exc}") from exc
    if np.max(np.abs(data[:, 0] - grid.nodes)) > 1e-9:
        raise InputError(f"profile file {path}: x column is not the grid -pi + 2 pi j/{n}")
    return WaveProfile(grid, data[:, 1])


def _params(args):
    try:
        if getattr(args, "critical", False):
            if args.sigma == 0:
                raise InputError("--critical needs sigma != 0")
            return CriticalGardner(beta=args.beta, sigma=args.sigma)
        return ModelParams.gardner(args.beta, args.sigma, args.alpha)
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _positive(name, v):
    if not (v > 0 and math.isfinite(v)):
        raise InputError(f"{name} must be a positive finite number, got {v}")


def _even_n(name, n):
    if n < 8 or n % 2:
        raise InputError(f"{name} must be an even integer >= 8, got {n}")


def cmd_branch(args, outdir: Path) -> int:
    params = _params(args)
    if args.k0 < 1:
        raise InputError("k0 must be a positive integer")
    try:
        ck = check_bifurcation(params, args.k0)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    for name in ("eps_start", "eps_step", "tol", "relaxed_tol"):
        _positive(name.replace("_", "-"), getattr(args, name))
    if not args.eps_max > 0:
        raise InputError("eps-max must be positive")
    if args.slack_floor < 0 or args.perturb < 0:
        raise InputError("slack-floor and perturb must be nonnegative")
    _even_n("n", args.n)
    _even_n("max-n", args.max_n)
    if args.sample_every < 1 or args.max_steps < 1:
        raise InputError("sample-every and max-steps must be positive")

    settings = ContinuationSettings(
        n=args.n,
        max_n=max(args.n, args.max_n),
        tol=args.tol,
        relaxed_tol=args.relaxed_tol,
        slack_floor=args.slack_floor,
        eps_max=args.eps_max,
        max_steps=args.max_steps,
    )
    initial = None
    if args.perturb > 0:
        rng = np.random.default_rng(args.seed)
        a = np.zeros(args.n // 2 - 1)
        a[args.k0 - 1] = args.eps_start
        a[: min(8, a.size)] += args.perturb * args.eps_start * rng.standard_normal(min(8, a.size))
        initial = WaveProfile.from_cosines(TorusGrid(args.n), a)
    try:
        branch = continue_branch(params, args.k0, args.eps_start, args.eps_step, settings, initial=initial)
    except SolverError as exc:
        print(f"error: no branch point converged: {exc}", file=sys.stderr)
        return EXIT_SOLVER

    cols = "eps,c,max_phi,min_phi,slack,residual,crest_count,asymmetry,fourier_decay,holder_exponent_or_blank"
    rows = [cols]
    profiles_dir = outdir / "profiles"
    last = len(branch.points) - 1
    for i, pt in enumerate(branch.points):
        p_c = branch.params_at(pt)
        d = diagnose(p_c, pt.c, pt.profile)
        s = pt.profile.samples
        rows.append(
            ",".join(
                fmt(v)
                for v in (
                    pt.eps,
                    pt.c,
                    s.max(),
                    s.min(),
                    d.slack,
                    pt.residual_norm,
                    d.crest_count,
                    d.asymmetry,
                    d.fourier_decay_rate,
                    d.holder_exponent,
                )
            )
        )
        if i % args.sample_every == 0 or i == last:
            write_profile(
                profiles_dir / f"profile_{i:04d}.txt",
                args,
                pt.profile,
                [f"eps = {fmt(pt.eps)}", f"c = {fmt(pt.c)}", "columns: x phi"],
            )
    write_text(outdir / "branch.csv", args, rows)

    term = branch.terminal
    manifest = {
        "command": "branch",
        "version": __version__,
        "git_describe": git_describe(),
        "beta": params.beta,
        "sigma": params.sigma,
        "alpha": "critical" if args.critical else params.alpha,
        "k0": args.k0,
        "bifurcation_speed": ck,
        "n_initial": settings.n,
        "n_max": settings.max_n,
        "n_terminal": term.profile.grid.n,
        "tol": settings.tol,
        "relaxed_tol": settings.relaxed_tol,
        "slack_floor": settings.slack_floor,
        "eps_start": args.eps_start,
        "eps_step": args.eps_step,
        "eps_max": args.eps_max,
        "seed": args.seed,
        "perturb": args.perturb,
        "points": len(branch.points),
        "termination": branch.termination.value,
        "terminal_c": term.c,
        "terminal_eps": term.eps,
    }
    write_text(outdir / "manifest.txt", args, [f"{k} = {v if isinstance(v, str) else fmt(v)}" for k, v in manifest.items()])
    print(f"{len(branch.points)} points, termination={branch.termination.value}, terminal c={fmt(term.c)}")
    return EXIT_OK


def cmd_verify_exact(args, outdir: Path) -> int:
    param = args.sigma if args.family == "reduced" else args.alpha
    _even_n("n", args.n)
    if args.n < 1024:
        raise InputError("verify-exact needs n >= 1024")
    try:
        corrected = ExactWave(args.family, param)
        printed = ExactWave(args.family, param, printed=True)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    r_corr = verify_exact(corrected, args.n)
    r_print = verify_exact(printed, args.n)
    tested = "printed" if args.use_printed_form else "corrected"
    r_test = r_print if args.use_printed_form else r_corr
    ok = r_test <= args.tol
    print(f"family = {args.family}  parameter = {fmt(param)}  c = {fmt(corrected.speed)}  n = {args.n}")
    print(f"residual corrected form = {fmt(r_corr)}")
    print(f"residual printed form   = {fmt(r_print)}")
    print(f"tested form = {tested}: {'PASS' if ok else 'FAIL'} (tolerance {fmt(args.tol)})")
    if not ok and args.use_printed_form:
        print("the printed form is a negative control; failure is expected")
    return EXIT_OK if ok else EXIT_SOLVER


def _branch_point_for(args, params):
    try:
        check_bifurcation(params, 1)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    settings = ContinuationSettings(n=args.n, max_n=max(args.n, args.max_n), eps_max=args.eps)
    step = min(args.eps, 0.05)
    branch = continue_branch(params, 1, min(args.eps, 0.01), step, settings)
    return branch.terminal


def cmd_evolve(args, outdir: Path) -> int:
    params = _params(args)
    _positive("dt", args.dt)
    _positive("t-final", args.t_final)
    _even_n("n", args.n)
    if args.record_every < 1:
        raise InputError("record-every must be positive")
    if not args.breaking_factor > 1:
        raise InputError("breaking-factor must exceed 1")
    sources = [args.profile is not None, args.eps is not None, args.cosine is not None]
    if sum(sources) > 1:
        raise InputError("give at most one of --profile, --eps, --cosine")
    c = args.c
    if args.profile is not None:
        u0 = read_profile(args.profile)
        if abs(u0.mean) > mean_tolerance(u0) * 1e3:
            raise InputError(f"profile has nonzero mean {u0.mean:.3e}")
        u0 = WaveProfile.from_rcoeffs(u0.grid, np.concatenate([[0.0], u0.rcoeffs[1:]]))
    elif args.eps is not None:
        _positive("eps", args.eps)
        try:
            pt = _branch_point_for(args, params)
        except SolverError as exc:
            print(f"error: branch point did not converge: {exc}", file=sys.stderr)
            return EXIT_SOLVER
        u0, c = pt.profile, pt.c
    elif args.cosine is not None:
        u0 = WaveProfile.from_function(TorusGrid(args.n), lambda x: args.cosine * np.cos(x))
    else:
        u0 = WaveProfile(TorusGrid(args.n), np.zeros(args.n))
    ceiling = stability_ceiling(params, u0)
    if args.dt > ceiling:
        raise InputError(f"dt = {args.dt} exceeds the stability ceiling {ceiling:.3e}")

    res = evolve(u0, EvolutionConfig(args.dt, args.t_final, params, args.record_every, breaking_factor=args.breaking_factor))
    rows = ["t,x,u"]
    for t, snap in zip(res.times, res.snapshots):
        rows += [f"{fmt(t)},{fmt(x)},{fmt(u)}" for x, u in zip(snap.grid.nodes, snap.samples)]
    write_text(outdir / "snapshots.csv", args, rows)

    summary = {
        "n": u0.grid.n,
        "dt": args.dt,
        "t_reached": float(res.times[-1]),
        "breaking": res.breaking,
        "grad_sup": res.grad_sup,
    }
    if c is not None and not res.breaking and u0.sup() > 0:
        summary["c"] = c
        summary["traveling_error"] = (res.final - shift(u0, c * res.times[-1])).sup() / u0.sup()
    write_text(outdir / "summary.txt", args, [f"{k} = {fmt(v)}" for k, v in summary.items()])
    for k, v in summary.items():
        print(f"{k} = {fmt(v)}")
    if res.breaking:
        print(f"error: wave breaking at t = {fmt(res.times[-1])}, sup|u_x| = {fmt(res.grad_sup)}", file=sys.stderr)
        return EXIT_BLOWUP
    return EXIT_OK


def cmd_kernels(args, outdir: Path) -> int:
    _even_n("points", args.points)
    _positive("beta", args.beta)
    _positive("c", args.c)
    if args.k_terms < 1 or args.g_terms < 1:
        raise InputError("series term counts must be positive")
    grid = TorusGrid(args.points)
    x = grid.nodes
    k_closed = kernel_K(x)
    k_series = kernel_K_series(grid, args.k_terms)
    g_form = kernel_G_printed if args.paper_G_form else kernel_G
    g_closed = g_form(x, args.beta, args.c)
    g_series = kernel_G_series(grid, args.beta, args.c, args.g_terms)
    dk = np.abs(k_closed - k_series)
    dg = np.abs(g_closed - g_series)
    rows = ["x,K_closed,K_series,K_absdiff,G_closed,G_series,G_absdiff"]
    for r in zip(x, k_closed, k_series, dk, g_closed, g_series, dg):
        rows.append(",".join(fmt(v) for v in r))
    write_text(outdir / "kernels.csv", args, rows)
    form = "printed" if args.paper_G_form else "cosh"
    print(f"max |K_closed - K_series({args.k_terms})| = {fmt(dk.max())}")
    print(f"max |G_{form} - G_series({args.g_terms})| = {fmt(dg.max())}  (beta = {fmt(args.beta)}, c = {fmt(args.c)})")
    if args.paper_G_form:
        print("mismatch" if dg.max() > 1e-5 else "match", "for the printed closed form of G")
    return EXIT_OK


def cmd_diagnose(args, outdir: Path) -> int:
    params = _params(args)
    _positive("c", args.c)
    prof = read_profile(args.profile)
    rep = diagnose(params.at_speed(args.c), args.c, prof)
    lines = [f"{k} = {v if isinstance(v, str) else fmt(v)}" for k, v in vars(rep).items()]
    write_text(outdir / "diagnostics.txt", args, lines)
    print("\n".join(lines))
    return EXIT_OK


def _model_flags(p, critical=False):
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=0.0)
    if critical:
        p.add_argument("--critical", action="store_true", help="tie alpha = -sigma^2/(4c) to the speed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="go-waves", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat key = value file; flags override it")
        p.add_argument("--outdir", help=f"output directory (else ${OUTDIR_ENV}, else .)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("-v", "--verbose", action="store_true")

    p = sub.add_parser("branch", help="continue a branch of traveling waves")
    common(p)
    _model_flags(p, critical=True)
    p.add_argument("--k0", type=int, default=1)
    p.add_argument("--eps-start", type=float, default=0.01)
    p.add_argument("--eps-step", type=float, default=0.01)
    p.add_argument("--eps-max", type=float, default=math.inf)
    p.add_argument("--n", type=int, default=512)
    p.add_argument("--max-n", type=int, default=1024)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--relaxed-tol", type=float, default=1e-6)
    p.add_argument("--slack-floor", type=float, default=1e-2)
    p.add_argument("--max-steps", type=int, default=500)
    p.add_argument("--sample-every", type=int, default=10, help="write every k-th profile")
    p.add_argument("--perturb", type=float, default=0.0, help="random relative perturbation of the first guess")
    p.set_defaults(func=cmd_branch)

    p = sub.add_parser("verify-exact", help="residuals of the explicit highest waves")
    common(p)
    p.add_argument("--family", choices=("reduced", "modified"), default="reduced")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--n", type=int, default=4096)
    p.add_argument("--tol", type=float, default=VERIFY_TOL)
    p.add_argument("--use-printed-form", action="store_true")
    p.set_defaults(func=cmd_verify_exact)

    p = sub.add_parser("evolve", help="time-evolve initial data")
    common(p)
    _model_flags(p)
    p.add_argument("--profile", help="initial data from a two-column profile file")
    p.add_argument("--eps", type=float, help="start from the k0 = 1 branch point at this amplitude")
    p.add_argument("--cosine", type=float, help="start from A cos(x)")
    p.add_argument("--c", type=float, help="speed for the traveling-error summary (profile input)")
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--max-n", type=int, default=1024)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--t-final", type=float, default=1.0)
    p.add_argument("--record-every", type=int, default=100)
    p.add_argument("--breaking-factor", type=float, default=BREAKING_FACTOR, help="gradient growth flagged as breaking")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("kernels", help="closed-form kernels against their series")
    common(p)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--points", type=int, default=1000)
    p.add_argument("--k-terms", type=int, default=100_000)
    p.add_argument("--g-terms", type=int, default=1_000_000)
    p.add_argument("--paper-G-form", dest="paper_G_form", action="store_true")
    p.set_defaults(func=cmd_kernels)

    p = sub.add_parser("diagnose", help="diagnostics of a profile file")
    common(p)
    _model_flags(p, critical=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--c", type=float, required=True)
    p.set_defaults(func=cmd_diagnose)
    return parser


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def read_config(path: str) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = val
    return out


def _apply_config(sub: argparse.ArgumentParser, values: dict[str, str]) -> dict:
    actions = {a.dest: a for a in sub._actions}
    typed = {}
    for key, val in values.items():
        act = actions.get(key)
        if act is None or key in ("config", "help"):
            raise InputError(f"unknown config key {key!r}")
        try:
            if isinstance(act, argparse._StoreTrueAction):
                typed[key] = _parse_bool(val)
            elif act.type is not None:
                typed[key] = act.type(val)
            else:
                typed[key] = val
        except ValueError as exc:
            raise InputError(f"bad value for {key}: {exc}") from exc
        if act.choices is not None and typed[key] not in act.choices:
            raise InputError(f"bad value for {key}: {val!r} not in {act.choices}")
    return typed


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        values = read_config(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        typed = _apply_config(sub, values)
        typed.pop("outdir", None)  # the environment variable outranks the file
        sub.set_defaults(**typed)
        args = parser.parse_args(argv)
        cfg_outdir = values.get("outdir")
    else:
        cfg_outdir = None
    args.outdir = args.outdir or os.environ.get(OUTDIR_ENV) or cfg_outdir or "."
    return args


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    outdir = Path(args.outdir)
    try:
        return args.func(args, outdir)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
