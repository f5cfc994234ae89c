"""Newton solver and amplitude continuation for periodic traveling waves.

Unknowns are the cosine coefficients ``a_1..a_M`` of ``phi`` (M = n/2 - 1)
and the speed ``c``.  The amplitude constraint ``a_{k0} = eps`` closes the
system, so the branch is parameterized by the ``cos(k0 x)`` projection.
"""
from __future__ import annotations

import enum
import logging
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg

from . import analysis
from .fourier import TorusGrid, WaveProfile, resample
from .model import (
    ModelParams,
    basis_coefficients,
    bifurcation_speed,
    jacobian_matrix,
    residual,
    residual_rcoeffs,
    speed_derivative_rcoeffs,
)

log = logging.getLogger(__name__)


class SolverError(RuntimeError):
    pass


class Termination(str, enum.Enum):
    MAX_STEPS = "max_steps"
    NEWTON_FAILURE = "newton_failure"
    SLACK_EXHAUSTED = "slack_exhausted"
    AMPLITUDE_TARGET = "amplitude_target"


@dataclass(frozen=True, eq=False)
class BranchPoint:
    c: float
    eps: float
    profile: WaveProfile
    residual_norm: float
    newton_iters: int
    diagnostics: analysis.DiagnosticsReport | None = None
    regime: str | None = None
    tol: float | None = None


@dataclass(frozen=True)
class ContinuationSettings:
    n: int = 512
    max_n: int = 1024
    tol: float = 1e-10
    relaxed_tol: float = 1e-6
    relax_below_slack: float = 0.05
    slack_floor: float = 1e-2
    eps_max: float = math.inf
    max_steps: int = 500
    min_step: float = 1e-5
    max_iters: int = 25
    tail_threshold: float = 1e-10
    diagnostics: bool = False


@dataclass(eq=False)
class Branch:
    k0: int
    params: object
    points: list[BranchPoint] = field(default_factory=list)
    termination: Termination | None = None

    def params_at(self, point: BranchPoint) -> ModelParams:
        return self.params.at_speed(point.c)

    @property
    def terminal(self) -> BranchPoint:
        return self.points[-1]


def check_bifurcation(params, k0: int) -> float:
    """Return ``c_{k0}``; raise ValueError when it is not positive."""
    ck = bifurcation_speed(params, k0)
    if ck is None:
        raise ValueError(
            f"no positive bifurcation speed for k0={k0}: need beta < 1/k0^4 (beta in [0, 1) for k0 = 1), got beta={params.beta}"
        )
    return ck


def initial_guess(params, k0: int, eps: float) -> tuple[float, WaveProfile]:
    """Speed ``c_{k0}`` and profile ``eps cos(k0 x)`` on a 512-node grid."""
    ck = check_bifurcation(params, k0)
    grid = TorusGrid(max(512, 8 * k0))
    return ck, WaveProfile.from_function(grid, lambda x: eps * np.cos(k0 * x))


def _cos_part(rc: np.ndarray, m: int) -> np.ndarray:
    return 2 * rc[1 : m + 1].real


def _profile_from(a: np.ndarray, grid: TorusGrid) -> WaveProfile:
    return WaveProfile.from_cosines(grid, a)


def _check_even(profile: WaveProfile):
    s = profile.samples
    mirror = np.roll(s[::-1], 1)  # s at -x_j
    tol = 1e-10 * max(1.0, profile.sup())
    if abs(profile.mean) > tol or np.max(np.abs(s - mirror)) > tol:
        raise SolverError("iterate left the even zero-mean subspace")


def _residual_norm(family, c, a, grid) -> tuple[np.ndarray, float]:
    prof = _profile_from(a, grid)
    rc = residual_rcoeffs(family.at_speed(c), c, prof.rcoeffs, grid.n)
    res = WaveProfile.from_rcoeffs(grid, rc)
    return _cos_part(rc, len(a)), res.sup()


def newton_solve(
    params,
    c0: float,
    profile0: WaveProfile,
    eps: float,
    tol: float = 1e-10,
    max_iters: int = 25,
    k0: int = 1,
) -> BranchPoint:
    """Solve the steady equation in the even subspace with ``a_{k0} = eps``.

    ``params`` is a :class:`ModelParams` or any object with ``at_speed``
    and ``speed_sensitivity`` (speed-dependent nonlinearity).  At least one
    Newton step is always taken.
    """
    if eps == 0:
        raise ValueError("amplitude eps must be nonzero (eps = 0 is the trivial solution)")
    grid = profile0.grid
    m = grid.n // 2 - 1
    _check_even(profile0)
    a = basis_coefficients(profile0)
    a[k0 - 1] = eps
    c = float(c0)
    r, rnorm = _residual_norm(params, c, a, grid)
    perturbed = False
    for it in range(1, max_iters + 1):
        prof = _profile_from(a, grid)
        p_c = params.at_speed(c)
        jac = np.empty((m + 1, m + 1))
        jac[:m, :m] = jacobian_matrix(p_c, c, prof)
        jac[:m, m] = _cos_part(speed_derivative_rcoeffs(params, c, prof.rcoeffs, grid.n), m)
        jac[m, :] = 0.0
        jac[m, k0 - 1] = 1.0
        rhs = -np.concatenate([r, [a[k0 - 1] - eps]])
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
                step = scipy.linalg.solve(jac, rhs)
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgWarning) as exc:
            if it == 1 and not perturbed:
                # degenerate start exactly at another bifurcation speed
                perturbed = True
                c += 1e-8
                r, rnorm = _residual_norm(params, c, a, grid)
                continue
            raise SolverError(f"singular bordered Jacobian at iteration {it}") from exc
        a = a + step[:m]
        c = c + step[m]
        if not np.all(np.isfinite(a)) or not math.isfinite(c):
            raise SolverError("Newton iterate is not finite")
        if c <= 0:
            raise SolverError(f"Newton iterate has nonpositive speed c={c}")
        r, rnorm = _residual_norm(params, c, a, grid)
        log.debug("newton it=%d c=%.12g |res|=%.3e", it, c, rnorm)
        if rnorm <= tol:
            prof = _profile_from(a, grid)
            _check_even(prof)
            return BranchPoint(c=c, eps=eps, profile=prof, residual_norm=rnorm, newton_iters=it)
    raise SolverError(f"Newton did not converge in {max_iters} iterations (|res| = {rnorm:.3e})")


def _tail(profile: WaveProfile) -> float:
    a = np.abs(profile.cosines())
    top = np.max(a)
    return float(np.max(a[-8:]) / top) if top > 0 else 0.0


def _regime(c, ck, eps):
    return "asymptotic" if abs(c - ck) < 10 * eps**2 else "continued"


def doubled_residual(params, point: BranchPoint) -> float:
    """Residual of a stored point re-evaluated on a grid twice as fine."""
    fine = resample(point.profile, 2 * point.profile.grid.n)
    return residual(params.at_speed(point.c), point.c, fine).sup()


def _point_tol(params, point, settings) -> float:
    if params.beta == 0:
        s = analysis.slack(params.at_speed(point.c), point.c, point.profile)
        if s < settings.relax_below_slack:
            return settings.relaxed_tol
    return settings.tol


def _solve_refined(params, c, guess, eps, settings, tol, k0):
    """Solve, doubling the grid until the solution is resolved.

    A point counts as resolved when its spectral tail is below
    ``tail_threshold`` or, at ``max_n``, when its residual on the doubled
    grid stays within ten times its tolerance.
    """
    point = newton_solve(params, c, guess, eps, tol=tol, max_iters=settings.max_iters, k0=k0)
    while True:
        ptol = _point_tol(params, point, settings)
        resolved = _tail(point.profile) <= settings.tail_threshold
        if resolved or point.profile.grid.n >= settings.max_n:
            break
        finer = resample(point.profile, 2 * point.profile.grid.n)
        point = newton_solve(params, point.c, finer, eps, tol=min(tol, ptol), max_iters=settings.max_iters, k0=k0)
    r2 = doubled_residual(params, point)
    if r2 > 10 * ptol:
        raise SolverError(f"under-resolved at n={point.profile.grid.n}: doubled-grid residual {r2:.2e}")
    return replace(point, tol=ptol)


def _predict(points, eps, n):
    """Linear extrapolation in eps of (c, cosine coefficients) from the last two points."""
    last = points[-1]
    prof = last.profile if last.profile.grid.n == n else resample(last.profile, n)
    if len(points) < 2:
        return last.c, prof
    prev = points[-2]
    pprof = prev.profile if prev.profile.grid.n == n else resample(prev.profile, n)
    t = (eps - last.eps) / (last.eps - prev.eps)
    a = prof.cosines() + t * (prof.cosines() - pprof.cosines())
    c = last.c + t * (last.c - prev.c)
    return c, WaveProfile.from_cosines(prof.grid, a)


def continue_branch(
    params,
    k0: int = 1,
    eps_start: float = 0.01,
    eps_step: float = 0.01,
    settings: ContinuationSettings | None = None,
    initial: WaveProfile | None = None,
) -> Branch:
    """Follow the branch bifurcating from ``(c_{k0}, 0)`` in increasing eps.

    The step is halved whenever Newton fails or, for beta = 0, the solution
    crosses a singular level (negative slack, or an extremum beyond a root
    of ``F'``; the latter is the only sign of overshoot at a double root).  The branch ends when the beta = 0
    slack drops to ``slack_floor``, eps reaches ``eps_max``, the step falls below
    ``min_step`` or ``max_steps`` points are stored.

    ``initial`` replaces the default first guess ``eps_start cos(k0 x)``;
    it must be even with zero mean.
    """
    settings = settings or ContinuationSettings()
    if eps_start <= 0 or eps_step <= 0:
        raise ValueError("eps_start and eps_step must be positive")
    ck, guess = initial_guess(params, k0, eps_start)
    if initial is not None:
        guess = initial
    if guess.grid.n != settings.n:
        guess = resample(guess, settings.n)
    branch = Branch(k0=k0, params=params)
    # only beta = 0 waves can reach the singular level
    singular = params.beta == 0

    point = _solve_refined(params, ck, guess, eps_start, settings, settings.tol, k0)
    branch.points.append(_finish(point, params, ck, settings))
    step = eps_step
    while True:
        last = branch.points[-1]
        s_last = analysis.slack(params.at_speed(last.c), last.c, last.profile) if singular else math.inf
        if s_last <= settings.slack_floor:
            branch.termination = Termination.SLACK_EXHAUSTED
            break
        if last.eps >= settings.eps_max:
            branch.termination = Termination.AMPLITUDE_TARGET
            break
        if len(branch.points) >= settings.max_steps:
            branch.termination = Termination.MAX_STEPS
            break
        eps = min(last.eps + step, settings.eps_max)
        tol = settings.relaxed_tol if s_last < settings.relax_below_slack else settings.tol
        c_guess, guess = _predict(branch.points, eps, last.profile.grid.n)
        try:
            point = _solve_refined(params, c_guess, guess, eps, settings, tol, k0)
            if singular:
                _reject_overshoot(params.at_speed(point.c), point)
        except SolverError as exc:
            step /= 2
            log.info("eps=%.6g failed (%s); step -> %.3g", eps, exc, step)
            if step < settings.min_step:
                branch.termination = Termination.NEWTON_FAILURE
                break
            continue
        branch.points.append(_finish(point, params, ck, settings))
    return branch


def _reject_overshoot(p: ModelParams, point: BranchPoint):
    s = analysis.slack(p, point.c, point.profile)
    if s < 0 or not analysis.amplitude_check(p, point.c, point.profile).ok:
        raise SolverError(f"overshoot past the singular level (slack {s:.3e})")


def _finish(point: BranchPoint, params, ck, settings) -> BranchPoint:
    diag = None
    if settings.diagnostics:
        diag = analysis.diagnose(params.at_speed(point.c), point.c, point.profile)
    return replace(point, diagnostics=diag, regime=_regime(point.c, ck, point.eps))
