"""Gardner-Ostrovsky steady problem in nonlocal form.

A wave ``u(t, x) = phi(x - c t)`` of ``(u_t + n(u)_x + beta u_xxx)_x = u``
solves

    -phi + D^{-2} L phi + L n(phi) = B,     L = 1/(c + beta D^2),

with ``D^{-2}`` of symbol ``1/k^2`` and the constant ``B`` fixed by the zero
mean of ``phi``.  All residuals below are projected onto zero-mean functions,
so ``B`` never appears as an unknown.

The spectral residual acts on the modes ``1 <= |k| < n/2``; the Nyquist mode
of the input is ignored and that of the output is zero.  Nonlinear terms are
evaluated on a padded grid large enough to make the truncated polynomial
products exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial

from .fourier import (
    TorusGrid,
    WaveProfile,
    convolve_quadrature,
    kernel_K,
    pad_rcoeffs,
    rcoeffs_to_samples,
    samples_to_rcoeffs,
)

MAX_DEGREE = 6


@dataclass(frozen=True)
class ModelParams:
    """Dispersion and nonlinearity ``n(u) = sum_j a_j u^j`` (j = 2..d).

    ``nonlin_coeffs`` holds ``(a_2, ..., a_d)``.  The Coriolis coefficient is
    fixed to one.
    """

    beta: float = 0.0
    nonlin_coeffs: tuple[float, ...] = (0.5,)
    gamma: float = field(default=1.0)

    def __post_init__(self):
        coeffs = tuple(float(a) for a in self.nonlin_coeffs)
        object.__setattr__(self, "nonlin_coeffs", coeffs)
        if self.beta < 0 or not np.isfinite(self.beta):
            raise ValueError(f"beta must be a finite nonnegative number, got {self.beta}")
        if self.gamma != 1.0:
            raise ValueError("only gamma = 1 is supported")
        if not coeffs or len(coeffs) > MAX_DEGREE - 1:
            raise ValueError(f"need between 1 and {MAX_DEGREE - 1} nonlinear coefficients")
        if not any(coeffs):
            raise ValueError("nonlinearity must be nontrivial")

    @classmethod
    def gardner(cls, beta: float = 0.0, sigma: float = 1.0, alpha: float = 0.0) -> "ModelParams":
        """``n(u) = sigma/2 u^2 + alpha/3 u^3``."""
        coeffs = (sigma / 2, alpha / 3) if alpha != 0 else (sigma / 2,)
        return cls(beta=beta, nonlin_coeffs=coeffs)

    @property
    def degree(self) -> int:
        return len(self.nonlin_coeffs) + 1

    @property
    def sigma(self) -> float:
        return 2 * self.nonlin_coeffs[0]

    @property
    def alpha(self) -> float:
        return 3 * self.nonlin_coeffs[1] if len(self.nonlin_coeffs) > 1 else 0.0

    @property
    def poly(self) -> Polynomial:
        return Polynomial((0.0, 0.0) + self.nonlin_coeffs)

    def at_speed(self, c: float) -> "ModelParams":
        return self

    def speed_sensitivity(self, c: float) -> Polynomial | None:
        """d n / d c at fixed u, or None when n does not depend on c."""
        return None


@dataclass(frozen=True)
class CriticalGardner:
    """Gardner nonlinearity with ``alpha = -sigma^2/(4c)`` tied to the speed.

    At every speed the two roots of ``F'(u) = 0`` merge into the double root
    ``u = 2c/sigma``, so the limiting wave of a branch has a cusp there.
    """

    beta: float = 0.0
    sigma: float = 1.0

    def at_speed(self, c: float) -> ModelParams:
        return ModelParams.gardner(self.beta, self.sigma, -self.sigma**2 / (4 * c))

    def speed_sensitivity(self, c: float) -> Polynomial:
        # d/dc of (alpha/3) u^3 with alpha = -sigma^2/(4c)
        return Polynomial((0.0, 0.0, 0.0, self.sigma**2 / (12 * c**2)))


@dataclass(frozen=True, eq=False)
class SteadyState:
    c: float
    profile: WaveProfile
    b_const: float
    residual_norm: float


def nonlin(params: ModelParams, u, order: int = 0):
    if order < 0:
        raise ValueError("derivative order must be >= 0")
    p = params.poly.deriv(order) if order else params.poly
    return p(u)


def F_eval(params: ModelParams, c: float, u, order: int = 0):
    """Derivatives of ``F(u) = -c u + n(u)``."""
    if c <= 0:
        raise ValueError("wave speed must be positive")
    p = Polynomial((0.0, -c)) + params.poly
    return p.deriv(order)(u) if order else p(u)


def dispersion(params: ModelParams, k) -> tuple[float, float, float]:
    """Frequency, phase velocity and group velocity of the linear mode ``k``."""
    if np.any(np.asarray(k) == 0):
        raise ValueError("dispersion relation undefined at k = 0")
    k = np.asarray(k, dtype=float)
    g, b = params.gamma, params.beta
    omega = g / k - b * k**3
    cp = g / k**2 - b * k**2
    cg = -g / k**2 - 3 * b * k**2
    if omega.ndim == 0:
        return float(omega), float(cp), float(cg)
    return omega, cp, cg


def bifurcation_speed(params: ModelParams, k: int) -> float | None:
    """``c_k = 1/k^2 - beta k^2`` when positive, otherwise None."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    ck = 1.0 / k**2 - params.beta * k**2
    return ck if ck > 0 else None


def padded_size(n: int, degree: int) -> int:
    """Grid size at which degree-``degree`` products are alias-free up to |k| <= n.

    Up to |k| <= n (not just n/2) so the same samples also give the
    Toeplitz entries needed by :func:`jacobian_matrix`.
    """
    p = max(2 * n, math.ceil((degree + 1) * n / 2))
    return p + (p % 2)


def _poly_rcoeffs(poly: Polynomial, rc: np.ndarray, n: int, kmax: int) -> np.ndarray:
    """Exact Fourier coefficients 0..kmax of ``poly(phi)`` for band-limited ``phi``."""
    deg = max(poly.degree(), 1)
    p = padded_size(n, deg)
    u = rcoeffs_to_samples(pad_rcoeffs(rc, n, p), p)
    out = samples_to_rcoeffs(poly(u))
    return out[: kmax + 1]


def _truncate(rc: np.ndarray) -> np.ndarray:
    rc = rc.copy()
    rc[0] = 0.0
    rc[-1] = 0.0
    return rc


def _symbols(grid: TorusGrid, beta: float, c: float):
    k = grid.rwavenumbers.astype(float)
    lsym = 1.0 / (c + beta * k**2)
    dinv = np.zeros_like(k)
    dinv[1:] = 1.0 / k[1:] ** 2
    return lsym, dinv


def _check_speed(c):
    if not c > 0:
        raise ValueError(f"wave speed must be positive, got c={c}")


def residual_rcoeffs(params: ModelParams, c: float, rc: np.ndarray, n: int) -> np.ndarray:
    """Residual coefficients for profile coefficients ``rc`` (length n/2+1)."""
    grid = TorusGrid(n)
    lsym, dinv = _symbols(grid, params.beta, c)
    rc = _truncate(rc)
    nl = _poly_rcoeffs(params.poly, rc, n, n // 2)
    res = -rc + dinv * lsym * rc + lsym * nl
    return _truncate(res)


def residual(params: ModelParams, c: float, profile: WaveProfile, method: str = "spectral") -> WaveProfile:
    """Zero-mean projection of ``-phi + D^-2 L phi + L n(phi)``.

    ``method="quadrature"`` (beta = 0 only) evaluates ``D^-2`` by trapezoid
    convolution with the closed-form kernel and ``n`` pointwise.  It is
    meant for non-smooth profiles where spectral truncation converges slowly.
    """
    _check_speed(c)
    if method == "spectral":
        return WaveProfile.from_rcoeffs(profile.grid, residual_rcoeffs(params, c, profile.rcoeffs, profile.grid.n))
    if method == "quadrature":
        if params.beta != 0:
            raise ValueError("quadrature residual is only available for beta = 0")
        phi = profile.samples
        conv = convolve_quadrature(kernel_K, profile).samples
        r = -phi + (conv + nonlin(params, phi)) / c
        return WaveProfile(profile.grid, r - r.mean())
    raise ValueError(f"unknown method {method!r}")


def integration_constant(params: ModelParams, c: float, profile: WaveProfile) -> float:
    """Mean of ``L n(phi)``, i.e. ``(1/(2 pi c)) int n(phi) dx``."""
    _check_speed(c)
    nl0 = _poly_rcoeffs(params.poly, profile.rcoeffs, profile.grid.n, 0)[0]
    return float(nl0.real / c)


def steady_state(params: ModelParams, c: float, profile: WaveProfile) -> SteadyState:
    r = residual(params, c, profile)
    return SteadyState(c, profile, integration_constant(params, c, profile), r.sup())


def jacobian_apply(params: ModelParams, c: float, profile: WaveProfile, psi: WaveProfile) -> WaveProfile:
    """Linearization ``-psi + D^-2 L psi + L (n'(phi) psi)`` (zero-mean part)."""
    _check_speed(c)
    n = profile.grid.n
    if psi.grid.n != n:
        raise ValueError("profile and psi must share a grid")
    lsym, dinv = _symbols(profile.grid, params.beta, c)
    prc = _truncate(profile.rcoeffs)
    qrc = _truncate(psi.rcoeffs)
    p = padded_size(n, params.degree)
    u = rcoeffs_to_samples(pad_rcoeffs(prc, n, p), p)
    v = rcoeffs_to_samples(pad_rcoeffs(qrc, n, p), p)
    prod = samples_to_rcoeffs(nonlin(params, u, 1) * v)[: n // 2 + 1]
    out = -qrc + dinv * lsym * qrc + lsym * prod
    return WaveProfile.from_rcoeffs(profile.grid, _truncate(out))


def _toeplitz_hankel(ghat: np.ndarray, m: int, even_only: bool) -> np.ndarray:
    """Matrix of multiplication by ``g`` in the cosine (or cosine+sine) basis.

    ``ghat`` holds the coefficients of ``g`` for k = 0..2m.
    """
    idx = np.arange(1, m + 1)
    diff = idx[:, None] - idx[None, :]
    summ = idx[:, None] + idx[None, :]

    def g_at(k):
        return np.where(k >= 0, ghat[np.abs(k)], np.conj(ghat[np.abs(k)]))

    gd = g_at(diff)
    gs = g_at(summ)
    # h_m for psi = cos(jx) and sin(jx); rows give a_m = 2 Re h_m, b_m = -2 Im h_m
    h_cos = 0.5 * (gd + gs)
    if even_only:
        return 2 * h_cos.real
    h_sin = 0.5 * (-1j * gd + 1j * gs)
    top = np.hstack([2 * h_cos.real, 2 * h_sin.real])
    bottom = np.hstack([-2 * h_cos.imag, -2 * h_sin.imag])
    return np.vstack([top, bottom])


def jacobian_matrix(params: ModelParams, c: float, profile: WaveProfile, even_only: bool = True) -> np.ndarray:
    """Dense matrix of :func:`jacobian_apply` in a real trigonometric basis.

    The basis is ``cos(jx)``, j = 1..n/2-1 when ``even_only``; otherwise the
    cosines followed by ``sin(jx)`` over the same range.  Entry ``[i, j]``
    is coefficient ``i`` of the image of basis function ``j``.
    """
    _check_speed(c)
    n = profile.grid.n
    m = n // 2 - 1
    prc = _truncate(profile.rcoeffs)
    ghat = _poly_rcoeffs(params.poly.deriv(1), prc, n, 2 * m)
    mult = _toeplitz_hankel(ghat, m, even_only)
    lsym, dinv = _symbols(profile.grid, params.beta, c)
    lrow = lsym[1 : m + 1]
    diag = -1 + dinv[1 : m + 1] * lrow
    if not even_only:
        lrow = np.concatenate([lrow, lrow])
        diag = np.concatenate([diag, diag])
    return lrow[:, None] * mult + np.diag(diag)


def basis_coefficients(profile: WaveProfile, even_only: bool = True) -> np.ndarray:
    """Coordinates of ``profile`` in the basis used by :func:`jacobian_matrix`."""
    m = profile.grid.n // 2 - 1
    rc = profile.rcoeffs[1 : m + 1]
    if even_only:
        return 2 * rc.real
    return np.concatenate([2 * rc.real, -2 * rc.imag])


def from_basis_coefficients(grid: TorusGrid, coef: np.ndarray, even_only: bool = True) -> WaveProfile:
    m = grid.n // 2 - 1
    rc = np.zeros(grid.n // 2 + 1, dtype=complex)
    if even_only:
        rc[1 : m + 1] = 0.5 * coef
    else:
        rc[1 : m + 1] = 0.5 * (coef[:m] - 1j * coef[m:])
    return WaveProfile.from_rcoeffs(grid, rc)


def speed_derivative_rcoeffs(family, c: float, rc: np.ndarray, n: int) -> np.ndarray:
    """d/dc of the residual at fixed profile: ``-D^-2 L^2 phi - L^2 n(phi) + L dn/dc(phi)``."""
    params = family.at_speed(c)
    grid = TorusGrid(n)
    lsym, dinv = _symbols(grid, params.beta, c)
    rc = _truncate(rc)
    nl = _poly_rcoeffs(params.poly, rc, n, n // 2)
    out = -dinv * lsym**2 * rc - lsym**2 * nl
    sens = family.speed_sensitivity(c)
    if sens is not None:
        out = out + lsym * _poly_rcoeffs(sens, rc, n, n // 2)
    return _truncate(out)


def transversality_value(params: ModelParams, k: int) -> float:
    """Coefficient of cos(kx) in ``-D^-2 L^2 cos(kx)`` at ``c = c_k``."""
    ck = bifurcation_speed(params, k)
    if ck is None:
        raise ValueError(f"no positive bifurcation speed for k={k} at beta={params.beta}")
    grid = TorusGrid(max(8, 4 * k + 4))
    psi = WaveProfile.from_function(grid, lambda x: np.cos(k * x))
    lsym, dinv = _symbols(grid, params.beta, ck)
    out = -dinv * lsym**2 * psi.rcoeffs
    return float(2 * out[k].real)
