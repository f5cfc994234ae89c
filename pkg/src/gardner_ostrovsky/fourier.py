"""Fourier representation of zero-mean functions on the 2*pi torus.

Coefficients follow ``f_hat(k) = (1/2pi) * int f(x) exp(-ikx) dx`` on the
collocation grid ``x_j = -pi + 2*pi*j/n``.  Because the grid starts at
``-pi`` the discrete coefficients differ from ``numpy.fft`` output by a
factor ``(-1)**k``; the helpers below take care of that.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

MEAN_TOL = 1e-12


@dataclass(frozen=True)
class TorusGrid:
    """Uniform grid with ``n`` nodes on [-pi, pi)."""

    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 8 or self.n % 2:
            raise ValueError(f"grid size must be an even integer >= 8, got {self.n!r}")

    @cached_property
    def nodes(self) -> np.ndarray:
        return -np.pi + 2 * np.pi * np.arange(self.n) / self.n

    @property
    def spacing(self) -> float:
        return 2 * np.pi / self.n

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Integer wavenumbers in numpy FFT order."""
        return np.fft.fftfreq(self.n, 1.0 / self.n).round().astype(int)

    @cached_property
    def rwavenumbers(self) -> np.ndarray:
        """Nonnegative wavenumbers 0..n/2 (real-FFT layout)."""
        return np.arange(self.n // 2 + 1)


def make_grid(n: int) -> TorusGrid:
    return TorusGrid(n)


def _sign(k):
    return np.where(np.asarray(k) % 2 == 0, 1.0, -1.0)


def samples_to_rcoeffs(samples: np.ndarray) -> np.ndarray:
    """Coefficients ``f_hat(k)`` for k = 0..n/2 from samples on the torus grid."""
    n = samples.shape[-1]
    return np.fft.rfft(samples, axis=-1) / n * _sign(np.arange(n // 2 + 1))


def rcoeffs_to_samples(rc: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`samples_to_rcoeffs` on a grid of ``n`` nodes.

    ``rc`` may be shorter than ``n/2 + 1`` (zero padding) but not longer.
    """
    m = rc.shape[-1]
    if m > n // 2 + 1:
        raise ValueError("coefficient array longer than the target grid supports")
    full = np.zeros(rc.shape[:-1] + (n // 2 + 1,), dtype=complex)
    full[..., :m] = rc * _sign(np.arange(m))
    return np.fft.irfft(full * n, n=n, axis=-1)


def pad_rcoeffs(rc: np.ndarray, n_from: int, n_to: int) -> np.ndarray:
    """Embed the coefficients of an ``n_from`` grid into a finer ``n_to`` grid.

    The Nyquist coefficient of the coarse grid stands for both +-n/2 and is
    split evenly so that the padded function stays real and unchanged at the
    coarse nodes.
    """
    out = np.zeros(rc.shape[:-1] + (n_to // 2 + 1,), dtype=complex)
    out[..., : n_from // 2 + 1] = rc
    if n_to > n_from:
        out[..., n_from // 2] *= 0.5
    return out


@dataclass(frozen=True, eq=False)
class WaveProfile:
    """Real periodic function sampled on a :class:`TorusGrid`."""

    grid: TorusGrid
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} samples, got shape {s.shape}")
        s = s.copy()
        s.flags.writeable = False
        object.__setattr__(self, "samples", s)

    @classmethod
    def from_function(cls, grid: TorusGrid, func: Callable[[np.ndarray], np.ndarray]) -> "WaveProfile":
        return cls(grid, func(grid.nodes))

    @classmethod
    def from_rcoeffs(cls, grid: TorusGrid, rc: np.ndarray) -> "WaveProfile":
        return cls(grid, rcoeffs_to_samples(rc, grid.n))

    @classmethod
    def from_cosines(cls, grid: TorusGrid, a: np.ndarray) -> "WaveProfile":
        """Profile ``sum_j a[j-1] cos(j x)``."""
        rc = np.zeros(len(a) + 1, dtype=complex)
        rc[1:] = 0.5 * np.asarray(a)
        return cls.from_rcoeffs(grid, rc)

    @cached_property
    def rcoeffs(self) -> np.ndarray:
        return samples_to_rcoeffs(self.samples)

    @cached_property
    def coeffs(self) -> np.ndarray:
        """All coefficients in numpy FFT order (see ``grid.wavenumbers``)."""
        return np.fft.fft(self.samples) / self.grid.n * _sign(self.grid.wavenumbers)

    @property
    def mean(self) -> float:
        return float(self.rcoeffs[0].real)

    def cosines(self, m: int | None = None) -> np.ndarray:
        """Cosine coefficients ``a_j = 2 Re f_hat(j)`` for j = 1..m."""
        m = self.grid.n // 2 - 1 if m is None else m
        return 2 * self.rcoeffs[1 : m + 1].real

    def sup(self) -> float:
        return float(np.max(np.abs(self.samples))) if self.grid.n else 0.0

    def __call__(self, x) -> np.ndarray:
        """Trigonometric interpolant evaluated at arbitrary points."""
        x = np.asarray(x, dtype=float)
        rc = self.rcoeffs.copy()
        rc[-1] *= 0.5
        k = self.grid.rwavenumbers
        vals = np.exp(1j * np.multiply.outer(x, k)) @ rc
        return 2 * vals.real - rc[0].real

    def __add__(self, other):
        if isinstance(other, WaveProfile):
            _check_same_grid(self, other)
            return WaveProfile(self.grid, self.samples + other.samples)
        return WaveProfile(self.grid, self.samples + other)

    def __sub__(self, other):
        if isinstance(other, WaveProfile):
            _check_same_grid(self, other)
            return WaveProfile(self.grid, self.samples - other.samples)
        return WaveProfile(self.grid, self.samples - other)

    def __mul__(self, scalar):
        return WaveProfile(self.grid, self.samples * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return WaveProfile(self.grid, -self.samples)


def _check_same_grid(f: WaveProfile, g: WaveProfile):
    if f.grid.n != g.grid.n:
        raise ValueError(f"grid mismatch: {f.grid.n} vs {g.grid.n}")


def mean_tolerance(f: WaveProfile) -> float:
    return MEAN_TOL * max(1.0, f.sup())


def _require_zero_mean(f: WaveProfile, what: str):
    if abs(f.rcoeffs[0]) > mean_tolerance(f):
        raise ValueError(f"{what} requires zero-mean input (mean = {f.mean:.3e})")


def apply_multiplier(f: WaveProfile, m: Callable[[np.ndarray], np.ndarray]) -> WaveProfile:
    """Apply the Fourier multiplier with real, even symbol ``m(k)``.

    ``m`` is called on an integer array of wavenumbers.  A non-finite value
    at k = 0 is allowed for zero-mean input; the mean of the output is then 0.
    """
    k = f.grid.rwavenumbers
    with np.errstate(divide="ignore", invalid="ignore"):
        mk = np.asarray(m(k), dtype=complex) * np.ones(k.shape)
        mneg = np.asarray(m(-k), dtype=complex) * np.ones(k.shape)
    if np.any(np.abs(mk.imag) > 0):
        raise ValueError("multiplier symbol must be real")
    mk = mk.real
    mneg = mneg.real
    both = np.isfinite(mk) & np.isfinite(mneg)
    if not np.allclose(mk[both], mneg[both], rtol=1e-14, atol=0) or np.any(np.isfinite(mk) != np.isfinite(mneg)):
        raise ValueError("multiplier symbol must be even in k")

    rc = f.rcoeffs
    bad = ~np.isfinite(mk)
    if bad[0]:
        _require_zero_mean(f, "multiplier undefined at k=0")
    nonzero = np.abs(rc) > 0
    nonzero[0] = False
    if np.any(bad & nonzero):
        kbad = k[bad & nonzero]
        raise ValueError(f"multiplier not finite at wavenumbers {kbad[:5].tolist()}")
    out = np.where(bad, 0.0, mk) * rc
    out[0] = out[0].real if not bad[0] else 0.0
    return WaveProfile.from_rcoeffs(f.grid, out)


def d2_inverse(f: WaveProfile) -> WaveProfile:
    """Inverse of -d^2/dx^2 on zero-mean functions (symbol 1/k^2)."""
    _require_zero_mean(f, "d2_inverse")
    k = f.grid.rwavenumbers.astype(float)
    rc = f.rcoeffs.copy()
    rc[0] = 0.0
    rc[1:] /= k[1:] ** 2
    return WaveProfile.from_rcoeffs(f.grid, rc)


def smoothing_symbol(k, beta: float, c: float):
    return 1.0 / (c + beta * np.asarray(k, dtype=float) ** 2)


def smoothing_op(f: WaveProfile, beta: float, c: float) -> WaveProfile:
    """Apply ``1/(c + beta D^2)``, symbol ``1/(c + beta k^2)``."""
    if c <= 0:
        raise ValueError(f"wave speed must be positive, got c={c}")
    if beta < 0:
        raise ValueError(f"beta must be nonnegative, got {beta}")
    rc = f.rcoeffs * smoothing_symbol(f.grid.rwavenumbers, beta, c)
    return WaveProfile.from_rcoeffs(f.grid, rc)


def derivative(f: WaveProfile, order: int = 1) -> WaveProfile:
    """Spectral derivative; the Nyquist mode is dropped for odd orders."""
    if order < 1:
        raise ValueError("derivative order must be positive")
    k = f.grid.rwavenumbers
    rc = f.rcoeffs * (1j * k) ** order
    if order % 2:
        rc[-1] = 0.0
    return WaveProfile.from_rcoeffs(f.grid, rc)


def project_zero_mean(f: WaveProfile) -> WaveProfile:
    rc = f.rcoeffs.copy()
    rc[0] = 0.0
    return WaveProfile.from_rcoeffs(f.grid, rc)


def shift(f: WaveProfile, s: float) -> WaveProfile:
    """Translate: returns ``f(x - s)`` evaluated spectrally."""
    k = f.grid.rwavenumbers
    rc = f.rcoeffs * np.exp(-1j * k * s)
    rc[-1] = f.rcoeffs[-1] * np.cos(k[-1] * s)
    return WaveProfile.from_rcoeffs(f.grid, rc)


def reflect(f: WaveProfile, lam: float) -> WaveProfile:
    """Reflection about ``lam``: returns ``f(2 lam - x)``."""
    k = f.grid.rwavenumbers
    rc = np.conj(f.rcoeffs) * np.exp(-2j * k * lam)
    rc[-1] = f.rcoeffs[-1] * np.cos(2 * k[-1] * lam)
    return WaveProfile.from_rcoeffs(f.grid, rc)


def resample(f: WaveProfile, n: int) -> WaveProfile:
    """Spectral interpolation (or truncation) onto a grid of ``n`` nodes."""
    grid = TorusGrid(n)
    if n >= f.grid.n:
        rc = pad_rcoeffs(f.rcoeffs, f.grid.n, n)
    else:
        rc = f.rcoeffs[: n // 2 + 1].copy()
        rc[-1] = 2 * rc[-1].real
    return WaveProfile.from_rcoeffs(grid, rc)


def _reduce(x):
    x = np.asarray(x, dtype=float)
    return (x + np.pi) % (2 * np.pi) - np.pi


def kernel_K(x):
    """Closed-form kernel of D^{-2}: ``(|x| - pi)^2/(4 pi) - pi/12``."""
    ax = np.abs(_reduce(x))
    return (ax - np.pi) ** 2 / (4 * np.pi) - np.pi / 12


def _cosine_series(x, weights, chunk=2**16):
    """``sum_k weights[k-1] cos(k x)``; ``x`` may be an array or a TorusGrid.

    On grid nodes ``cos(k x_j) = (-1)^k cos(2 pi k j/n)`` depends on k only
    through k mod n, so the terms are folded into n bins and summed with a
    single FFT.  Arbitrary points use direct summation in chunks.
    """
    if isinstance(x, TorusGrid):
        n = x.n
        s = np.zeros(-(-(len(weights) + 1) // n) * n)
        s[1 : len(weights) + 1] = weights * _sign(np.arange(1, len(weights) + 1))
        bins = s.reshape(-1, n).sum(axis=0)
        return np.fft.fft(bins).real
    x = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    total = np.zeros_like(x)
    for start in range(0, len(weights), chunk):
        w = weights[start : start + chunk]
        k = np.arange(start + 1, start + 1 + len(w), dtype=float)
        total += np.cos(np.multiply.outer(x, k)) @ w
    return total


def kernel_K_series(x, m_terms: int):
    """Partial sum ``(1/pi) sum_{k<=m} cos(kx)/k^2`` at points or at the nodes of a grid."""
    if m_terms < 1:
        raise ValueError("m_terms must be >= 1")
    k = np.arange(1, m_terms + 1, dtype=float)
    vals = _cosine_series(x, 1.0 / k**2) / np.pi
    return vals if isinstance(x, TorusGrid) or np.ndim(x) else float(vals[0])


def kernel_G_series(x, beta: float, c: float, m_terms: int):
    """Truncated Fourier series of the kernel of ``1/(c + beta D^2)``."""
    if beta <= 0 or c <= 0:
        raise ValueError("kernel_G_series needs beta > 0 and c > 0")
    k = np.arange(1, m_terms + 1, dtype=float)
    vals = 1 / (2 * np.pi * c) + _cosine_series(x, 1.0 / (c + beta * k**2)) / np.pi
    return vals if isinstance(x, TorusGrid) or np.ndim(x) else float(vals[0])


def kernel_G(x, beta: float, c: float):
    """Closed form ``cosh(r(pi-|x|)) / (2 sqrt(beta c) sinh(pi r))`` with r = sqrt(c/beta)."""
    if beta <= 0 or c <= 0:
        raise ValueError("kernel_G needs beta > 0 and c > 0")
    r = np.sqrt(c / beta)
    ax = np.abs(_reduce(x))
    # exp form avoids overflow of cosh/sinh when pi*r is large
    num = np.exp(-r * ax) + np.exp(-r * (2 * np.pi - ax))
    den = 2 * np.sqrt(beta * c) * (1 - np.exp(-2 * np.pi * r))
    return num / den


def kernel_G_printed(x, beta: float, c: float):
    """The variant with argument c/beta in place of sqrt(c/beta); does not match the series."""
    ax = np.abs(_reduce(x))
    q = c / beta
    return (
        1 / (2 * np.pi * c)
        + beta * np.pi / (4 * np.pi * c * np.sinh(np.pi * q)) * np.cosh((np.pi - ax) * q)
        - beta**2 / (4 * np.pi * c**2)
    )


def convolve_quadrature(kernel: Callable[[np.ndarray], np.ndarray], f: WaveProfile) -> WaveProfile:
    """Trapezoid rule for ``int_T kernel(x - y) f(y) dy`` at every node.

    The periodic trapezoid sum is a circular convolution of the sampled
    kernel with the samples, evaluated here through the FFT.
    """
    grid = f.grid
    h = grid.spacing
    offsets = h * np.arange(grid.n)
    ksamp = np.asarray(kernel(_reduce(offsets)), dtype=float)
    conv = np.fft.irfft(np.fft.rfft(ksamp) * np.fft.rfft(f.samples), n=grid.n) * h
    return WaveProfile(grid, conv)
