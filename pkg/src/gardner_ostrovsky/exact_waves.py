"""Closed-form highest waves at beta = 0 and the steady ODE with its Hamiltonian.

The two explicit waves are

    phi_sigma(x) = (3 (|x| - pi)^2 - pi^2) / (18 sigma),   c = pi^2/9   (alpha = 0)
    phi_alpha(x) = (pi/2 - |x|) / sqrt(2 alpha),           c = pi^2/8   (sigma = 0)

for ``x`` in [-pi, pi].  The ``*_printed`` variants carry ``pi^2`` and
``pi^2/2`` in place of ``pi`` and ``pi/2``; they are kept as negative
controls and do not solve the equation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fourier import TorusGrid, WaveProfile, _reduce
from .model import ModelParams, residual

REDUCED_SPEED = np.pi**2 / 9
MODIFIED_SPEED = np.pi**2 / 8


def reduced_ostrovsky_peak(sigma: float, x):
    if sigma == 0:
        raise ValueError("sigma must be nonzero")
    ax = np.abs(_reduce(x))
    return (3 * (ax - np.pi) ** 2 - np.pi**2) / (18 * sigma)


def reduced_ostrovsky_peak_printed(sigma: float, x):
    ax = np.abs(_reduce(x))
    return (3 * (ax - np.pi**2) ** 2 - np.pi**2) / (18 * sigma)


def modified_peak(alpha: float, x):
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    ax = np.abs(_reduce(x))
    return (np.pi / 2 - ax) / np.sqrt(2 * alpha)


def modified_peak_printed(alpha: float, x):
    ax = np.abs(_reduce(x))
    return (np.pi**2 / 2 - ax) / np.sqrt(2 * alpha)


@dataclass(frozen=True)
class ExactWave:
    """One of the explicit highest waves.

    ``family`` is ``"reduced"`` (parameter sigma, alpha = 0) or
    ``"modified"`` (parameter alpha, sigma = 0).
    """

    family: str
    param: float = 1.0
    printed: bool = False

    def __post_init__(self):
        if self.family not in ("reduced", "modified"):
            raise ValueError(f"unknown wave family {self.family!r}")
        if self.family == "reduced" and self.param == 0:
            raise ValueError("sigma must be nonzero")
        if self.family == "modified" and self.param <= 0:
            raise ValueError("alpha must be positive")

    @property
    def params(self) -> ModelParams:
        if self.family == "reduced":
            return ModelParams.gardner(0.0, self.param, 0.0)
        return ModelParams.gardner(0.0, 0.0, self.param)

    @property
    def speed(self) -> float:
        return REDUCED_SPEED if self.family == "reduced" else MODIFIED_SPEED

    def __call__(self, x):
        if self.family == "reduced":
            f = reduced_ostrovsky_peak_printed if self.printed else reduced_ostrovsky_peak
        else:
            f = modified_peak_printed if self.printed else modified_peak
        return f(self.param, x)

    def profile(self, n: int) -> WaveProfile:
        return WaveProfile.from_function(TorusGrid(n), self)


def verify_exact(wave: ExactWave, n: int = 4096, c: float | None = None) -> float:
    """Sup-norm of the zero-mean part of ``F(phi) + K * phi`` on ``n`` nodes.

    The convolution uses the trapezoid rule, so the residual of an exact
    solution is O(n^-2) rather than zero.  ``c`` defaults to the wave's own
    speed.
    """
    if n < 1024:
        raise ValueError("verification needs n >= 1024")
    c = wave.speed if c is None else c
    r = residual(wave.params, c, wave.profile(n), method="quadrature")
    # residual() divides by c; undo that to report F(phi) + K*phi directly
    return c * r.sup()


@dataclass(frozen=True)
class OdeState:
    phi: float
    phi_prime: float
    v: float
    v_prime: float
    x: float = 0.0

    def __post_init__(self):
        if not np.all(np.isfinite([self.phi, self.phi_prime, self.v, self.v_prime, self.x])):
            raise ValueError("ODE state must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.phi, self.phi_prime, self.v, self.v_prime])


@dataclass(frozen=True, eq=False)
class Trajectory:
    x: np.ndarray
    states: np.ndarray  # shape (len(x), 4): phi, phi', v, v'
    blew_up: bool = False


def _as_states(state) -> np.ndarray:
    if isinstance(state, OdeState):
        return state.as_array()
    return np.asarray(state, dtype=float)


def _require_beta(params: ModelParams):
    if params.beta <= 0:
        raise ValueError("the steady ODE needs beta > 0")


def vector_field(params: ModelParams, c: float, states) -> np.ndarray:
    """Right-hand side of phi'' = (c phi - n(phi) + v)/beta, v'' = phi."""
    y = _as_states(states)
    phi, dphi, v, dv = np.moveaxis(y, -1, 0)
    g, b = params.gamma, params.beta
    ddphi = (c * phi - params.poly(phi) + g * v) / b
    return np.stack([dphi, ddphi, dv, phi], axis=-1)


def hamiltonian(params: ModelParams, c: float, state):
    """``E = (phi'^2 + (gamma/beta) v'^2)/2 + (-c phi^2/2 + N(phi) - gamma v phi)/beta``."""
    _require_beta(params)
    y = _as_states(state)
    phi, dphi, v, dv = np.moveaxis(y, -1, 0)
    g, b = params.gamma, params.beta
    big_n = params.poly.integ()  # N(0) = 0
    e = 0.5 * (dphi**2 + g / b * dv**2) + (-0.5 * c * phi**2 + big_n(phi) - g * v * phi) / b
    return float(e) if np.ndim(e) == 0 else e


def energy_rate(params: ModelParams, c: float, states) -> tuple[np.ndarray, np.ndarray]:
    """``dE/dx = grad E . f`` along the vector field, and the size of its terms.

    Returns the rate and the sum of absolute values of the individual
    products, which sets the scale for a relative zero test.
    """
    _require_beta(params)
    y = _as_states(states)
    phi, dphi, v, dv = np.moveaxis(y, -1, 0)
    g, b = params.gamma, params.beta
    grad = np.stack([(-c * phi + params.poly(phi) - g * v) / b, dphi, -g / b * phi, g / b * dv], axis=-1)
    terms = grad * vector_field(params, c, y)
    return terms.sum(axis=-1), np.abs(terms).sum(axis=-1)


def ode_flow(params: ModelParams, c: float, state0, x_span: tuple[float, float], step: float) -> Trajectory:
    """Classical RK4 with fixed step over ``x_span``.

    Integration stops at the first non-finite state; the trajectory up to
    that point is returned with ``blew_up=True``.
    """
    _require_beta(params)
    if step <= 0:
        raise ValueError("step must be positive")
    x0, x1 = x_span
    nsteps = int(round((x1 - x0) / step))
    y0 = _as_states(state0)
    if y0.shape != (4,):
        raise ValueError("state0 must hold (phi, phi', v, v')")
    out = np.empty((nsteps + 1, 4))
    out[0] = y0
    h = float(step)
    # scalar arithmetic: per-step array overhead would dominate a 4-dim system
    coeffs = [float(a) for a in params.poly.coef[::-1]]
    cc, g, b = float(c), float(params.gamma), float(params.beta)

    def accel(phi, v):
        nl = 0.0
        for a in coeffs:
            nl = nl * phi + a
        return (cc * phi - nl + g * v) / b

    p, dp, v, dv = (float(t) for t in y0)
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(nsteps):
            try:
                k1 = (dp, accel(p, v), dv, p)
                y2 = (p + 0.5 * h * k1[0], dp + 0.5 * h * k1[1], v + 0.5 * h * k1[2], dv + 0.5 * h * k1[3])
                k2 = (y2[1], accel(y2[0], y2[2]), y2[3], y2[0])
                y3 = (p + 0.5 * h * k2[0], dp + 0.5 * h * k2[1], v + 0.5 * h * k2[2], dv + 0.5 * h * k2[3])
                k3 = (y3[1], accel(y3[0], y3[2]), y3[3], y3[0])
                y4 = (p + h * k3[0], dp + h * k3[1], v + h * k3[2], dv + h * k3[3])
                k4 = (y4[1], accel(y4[0], y4[2]), y4[3], y4[0])
                p, dp, v, dv = (
                    yi + h / 6 * (a + 2 * bb + 2 * cq + d)
                    for yi, a, bb, cq, d in zip((p, dp, v, dv), k1, k2, k3, k4)
                )
            except OverflowError:
                p = math.inf
            if not (math.isfinite(p) and math.isfinite(dp) and math.isfinite(v) and math.isfinite(dv)):
                return Trajectory(x0 + h * np.arange(i + 1), out[: i + 1].copy(), blew_up=True)
            out[i + 1] = (p, dp, v, dv)
    return Trajectory(x0 + h * np.arange(nsteps + 1), out)
