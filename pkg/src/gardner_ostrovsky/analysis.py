"""Regularity, amplitude and symmetry diagnostics for wave profiles."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import minimize_scalar

from .fourier import WaveProfile, derivative, reflect
from .model import F_eval, ModelParams

SMOOTH_SLACK = 1e-2
AMPLITUDE_SLACK = 1e-6


@dataclass(frozen=True)
class SingularLevels:
    """Roots of ``F'`` nearest to zero on each side, with their orders."""

    phi_minus: float | None
    phi_plus: float | None
    order_a_minus: int | None
    order_a_plus: int | None


@dataclass(frozen=True)
class AmplitudeCheck:
    ok: bool
    upper_margin: float | None
    lower_margin: float | None
    spread_margin: float | None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class DiagnosticsReport:
    slack: float
    holder_exponent: float | None
    holder_constant: float | None
    predicted_exponent: float
    predicted_constant: float
    asymmetry: float
    crest_count: int
    fourier_decay_rate: float
    amplitude_ok: bool
    regime: str = "smooth"


def _singular_order(params: ModelParams, c: float, phi_bar: float) -> int:
    dpoly = Polynomial((0.0, -c)) + params.poly
    scale = max(1.0, abs(phi_bar)) ** params.degree * max(abs(a) for a in params.nonlin_coeffs)
    for m in range(2, params.degree + 1):
        if abs(dpoly.deriv(m)(phi_bar)) > 1e-10 * scale:
            return m
    raise RuntimeError("all derivatives of F vanish at the singular level")


def _real_roots_of_dn(params: ModelParams, c: float) -> list[float]:
    if params.degree == 3 and params.alpha != 0:
        s, a = params.sigma, params.alpha
        disc = s**2 / (4 * a**2) + c / a
        if disc < -1e-12 * (s**2 / (4 * a**2) + abs(c / a)):
            return []
        r = math.sqrt(max(disc, 0.0))
        return sorted({-s / (2 * a) - r, -s / (2 * a) + r})
    if params.degree == 2:
        return [c / params.sigma]
    poly = params.poly.deriv(1) - c
    roots = poly.roots()
    scale = max(1.0, np.max(np.abs(roots)))
    real = sorted(float(r.real) for r in roots if abs(r.imag) <= 1e-9 * scale)
    merged: list[float] = []
    for r in real:
        if not merged or abs(r - merged[-1]) > 1e-9 * scale:
            merged.append(r)
    return merged


def singular_levels(params: ModelParams, c: float) -> SingularLevels:
    """Roots of ``F'(u) = -c + n'(u)`` closest to the origin on each side."""
    if c <= 0:
        raise ValueError("wave speed must be positive")
    roots = _real_roots_of_dn(params, c)
    neg = [r for r in roots if r < 0]
    pos = [r for r in roots if r > 0]
    lo = max(neg) if neg else None
    hi = min(pos) if pos else None
    return SingularLevels(
        lo,
        hi,
        _singular_order(params, c, lo) if lo is not None else None,
        _singular_order(params, c, hi) if hi is not None else None,
    )


def slack(params: ModelParams, c: float, profile: WaveProfile) -> float:
    """``min_x (c - n'(phi(x)))`` over the grid nodes."""
    return float(np.min(c - params.poly.deriv(1)(profile.samples)))


def predicted_holder(params: ModelParams, c: float, phi_bar: float) -> tuple[int, float, float]:
    """Order ``a``, exponent ``2/a`` and constant of the local law at a singular level.

    Near an extremum at the level ``phi_bar``,
    ``|phi - phi_bar| ~ (a! |phi_bar| / (2 |F^(a)(phi_bar)|))^(1/a) |x - x_bar|^(2/a)``.
    """
    d1 = F_eval(params, c, phi_bar, 1)
    if abs(d1) > 1e-8 * max(1.0, c):
        raise ValueError(f"F'({phi_bar}) = {d1:.3e} is not zero")
    a = _singular_order(params, c, phi_bar)
    fa = F_eval(params, c, phi_bar, a)
    const = (math.factorial(a) * abs(phi_bar) / (2 * abs(fa))) ** (1.0 / a)
    return a, 2.0 / a, const


def holder_fit(profile: WaveProfile, x_star: float, window: int = 16, exclude_radius: float = 2.0) -> tuple[float, float]:
    """Fit ``|phi(x) - phi(x_star)| = C |x - x_star|^p`` on both sides of ``x_star``.

    ``window`` and ``exclude_radius`` are measured in grid spacings; nodes
    with ``exclude_radius < |x - x_star|/h <= window`` enter a least-squares
    fit in log-log coordinates.  Returns ``(p, C)``.
    """
    grid = profile.grid
    h = grid.spacing
    i0 = int(round((x_star + np.pi) / h)) % grid.n
    offsets = np.arange(-int(window), int(window) + 1)
    offsets = offsets[np.abs(offsets) > exclude_radius]
    if len(offsets) < 8:
        raise ValueError(f"only {len(offsets)} usable nodes in the fit window")
    vals = profile.samples[(i0 + offsets) % grid.n]
    dphi = np.abs(vals - profile.samples[i0])
    if np.any(dphi == 0):
        raise ValueError("profile is flat inside the fit window")
    slope, intercept = np.polyfit(np.log(np.abs(offsets) * h), np.log(dphi), 1)
    return float(slope), float(math.exp(intercept))


def _asym_value(profile: WaveProfile, lam: float, norm: float) -> float:
    return float(np.max(np.abs(reflect(profile, lam).samples - profile.samples)) / norm)


def asymmetry(profile: WaveProfile, n_scan: int = 64) -> tuple[float, float]:
    """Best reflection axis and ``min_lam ||phi(2 lam - .) - phi||_inf / ||phi||_inf``.

    Axes are scanned on a coarse grid over [0, pi) (an axis at ``lam`` and
    ``lam + pi`` are equivalent) and the best one is refined with a bounded
    Brent/golden-section search.  The axes allowed by the phase of the
    dominant Fourier mode are tried as well; they are exact for a
    symmetric profile, where the objective has a kink that slows the
    line search.
    """
    norm = profile.sup()
    if norm == 0:
        raise ValueError("asymmetry is undefined for the zero profile")
    lams = np.pi * np.arange(n_scan) / n_scan
    vals = np.array([_asym_value(profile, lam, norm) for lam in lams])
    i = int(np.argmin(vals))
    best = (float(vals[i]), float(lams[i]))
    if best[0] == 0.0:
        return best[1], 0.0
    d = np.pi / n_scan
    res = minimize_scalar(
        lambda lam: _asym_value(profile, lam, norm),
        bounds=(lams[i] - d, lams[i] + d),
        method="bounded",
        options={"xatol": 1e-12},
    )
    best = min(best, (float(res.fun), float(res.x % np.pi)))
    # even about lam  <=>  rc[k] exp(ik lam) real for every k
    rc = profile.rcoeffs[1:-1]
    k = int(np.argmax(np.abs(rc))) + 1
    base = -np.angle(profile.rcoeffs[k]) / k
    for j in range(k):
        lam = (base + j * np.pi / k) % np.pi
        best = min(best, (_asym_value(profile, lam, norm), float(lam)))
    return best[1], best[0]


def crest_count(profile: WaveProfile) -> int:
    """Number of + to - sign changes of ``phi'`` around the period."""
    d = derivative(profile, 1).samples
    floor = 1e-10 * np.max(np.abs(d)) if d.size else 0.0
    s = np.sign(d[np.abs(d) > floor])
    if s.size == 0:
        return 0
    return int(np.sum((s > 0) & (np.roll(s, -1) < 0)))


def fourier_decay(profile: WaveProfile, k_min: int = 4, k_max: int | None = None, noise_floor: float = 1e-13) -> float:
    """Log-log slope of ``|phi_hat(k)|`` over ``k_min <= k <= k_max``.

    Coefficients below ``noise_floor * max|phi_hat|`` are skipped.  Returns
    ``-inf`` when nothing beyond ``k_min`` rises above the floor (finite
    bandwidth).  ``k_max`` defaults to n/4, which keeps aliasing of
    non-smooth profiles out of the fit.
    """
    if k_min < 4:
        raise ValueError("k_min must be at least 4")
    n = profile.grid.n
    k_max = n // 4 if k_max is None else min(k_max, n // 2 - 1)
    mag = np.abs(profile.rcoeffs)
    k = np.arange(len(mag))
    sel = (k >= k_min) & (k <= k_max) & (mag > noise_floor * np.max(mag[1:]))
    if not np.any(sel):
        return -math.inf
    if np.count_nonzero(sel) < 3:
        raise ValueError("too few Fourier coefficients above the noise floor")
    slope, _ = np.polyfit(np.log(k[sel]), np.log(mag[sel]), 1)
    return float(slope)


def amplitude_check(params: ModelParams, c: float, profile: WaveProfile) -> AmplitudeCheck:
    """Check ``phi`` against the singular levels and, for alpha > 0, the spread bound."""
    lev = singular_levels(params, c)
    hi, lo = float(np.max(profile.samples)), float(np.min(profile.samples))
    ok = True
    upper = lower = spread = None
    if lev.phi_plus is not None:
        upper = lev.phi_plus - hi
        ok &= upper >= -AMPLITUDE_SLACK
    if lev.phi_minus is not None:
        lower = lo - lev.phi_minus
        ok &= lower >= -AMPLITUDE_SLACK
    if params.degree == 3 and params.alpha > 0:
        s, a = params.sigma, params.alpha
        spread = 2 * math.sqrt(s**2 / (4 * a**2) + c / a) - (hi - lo)
        ok &= spread >= -AMPLITUDE_SLACK
    return AmplitudeCheck(bool(ok), upper, lower, spread)


def _nearest_level(params, c, profile):
    """Extremum closest to a singular level: (x_star, phi_bar) or None."""
    lev = singular_levels(params, c)
    cands = []
    if lev.phi_plus is not None:
        i = int(np.argmax(profile.samples))
        cands.append((abs(lev.phi_plus - profile.samples[i]), profile.grid.nodes[i], lev.phi_plus))
    if lev.phi_minus is not None:
        i = int(np.argmin(profile.samples))
        cands.append((abs(profile.samples[i] - lev.phi_minus), profile.grid.nodes[i], lev.phi_minus))
    if not cands:
        return None
    _, x, level = min(cands)
    return x, level


def classify(params: ModelParams, slack_value: float) -> str:
    """'smooth' or 'near-singular'; every beta > 0 wave is smooth."""
    if params.beta > 0 or slack_value > SMOOTH_SLACK:
        return "smooth"
    return "near-singular"


def diagnose(params: ModelParams, c: float, profile: WaveProfile) -> DiagnosticsReport:
    """All diagnostics for one profile.

    The Holder fit runs only in the near-singular regime.  The amplitude
    bounds hold for beta = 0 only, so ``amplitude_ok`` is always True when
    beta > 0.
    """
    s = slack(params, c, profile)
    regime = classify(params, s)
    near = _nearest_level(params, c, profile)
    pred_exp = pred_const = math.nan
    if near is not None:
        _, pred_exp, pred_const = predicted_holder(params, c, near[1])
    hexp = hconst = None
    if regime == "near-singular" and near is not None:
        try:
            hexp, hconst = holder_fit(profile, near[0])
        except ValueError:
            pass
    try:
        decay = fourier_decay(profile)
    except ValueError:
        decay = math.nan
    nontrivial = profile.sup() > 0
    return DiagnosticsReport(
        slack=s,
        holder_exponent=hexp,
        holder_constant=hconst,
        predicted_exponent=pred_exp,
        predicted_constant=pred_const,
        asymmetry=asymmetry(profile)[1] if nontrivial else 0.0,
        crest_count=crest_count(profile),
        fourier_decay_rate=decay,
        amplitude_ok=params.beta > 0 or amplitude_check(params, c, profile).ok,
        regime=regime,
    )
