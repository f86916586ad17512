"""Fourier analysis on the unit circle.

Equispaced power-of-two grids, finite Laurent series, contractive
boundary data, the Szego integrability check, outer factorization via
the circular Hilbert transform, and harmonic extension into the disk.

All integrals over the circle use normalized Lebesgue measure, so the
trapezoidal rule on an equispaced grid is a plain mean over the nodes.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError, InputError, ResolutionError


def _is_power_of_two(n):
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class CircleGrid:
    """Equispaced grid of the M-th roots of unity.

    Parameters
    ----------
    size : int
        Number of nodes M. Must be a power of two, at least 8, so FFT
        round trips are exact and aliasing arithmetic stays simple.
    """

    size: int

    def __post_init__(self):
        if self.size < 8 or not _is_power_of_two(self.size):
            raise InputError(
                f"grid size must be a power of two >= 8, got {self.size}"
            )

    @cached_property
    def theta(self):
        return 2.0 * np.pi * np.arange(self.size) / self.size

    @cached_property
    def nodes(self):
        return np.exp(1j * self.theta)

    @property
    def coeff_lo(self):
        return -self.size // 2 + 1

    @property
    def coeff_hi(self):
        return self.size // 2


@dataclass
class LaurentSeries:
    """Finite Laurent series c_lo t^lo + ... + c_hi t^hi."""

    lo: int
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if self.coeffs.ndim != 1 or self.coeffs.size == 0:
            raise InputError("coefficient list must be nonempty and one-dimensional")

    @property
    def hi(self):
        return self.lo + len(self.coeffs) - 1

    def coefficient(self, j):
        """Coefficient at index j, zero outside the stored window."""
        if self.lo <= j <= self.hi:
            return complex(self.coeffs[j - self.lo])
        return 0j

    def indices(self):
        return np.arange(self.lo, self.hi + 1)


def analyze(samples, grid):
    """Fourier coefficients of grid samples on the symmetric index window.

    Parameters
    ----------
    samples : array_like
        Complex samples, one per grid node.
    grid : CircleGrid

    Returns
    -------
    LaurentSeries
        Coefficients c_j = (1/M) sum_k samples_k exp(-2 pi i j k / M)
        for j in [-M/2 + 1, M/2]; `synthesize` inverts this exactly.
    """
    samples = np.asarray(samples, dtype=complex)
    if samples.shape != (grid.size,):
        raise InputError(
            f"sample count {samples.shape} does not match grid size {grid.size}"
        )
    bins = np.fft.fft(samples) / grid.size
    window = np.arange(grid.coeff_lo, grid.coeff_hi + 1)
    return LaurentSeries(grid.coeff_lo, bins[window % grid.size])


def synthesize(series, grid):
    """Evaluate a Laurent series on the grid. Inverse of `analyze`.

    The window must satisfy hi - lo < M, otherwise distinct indices
    alias onto the same FFT bin.
    """
    if series.hi - series.lo >= grid.size:
        raise ResolutionError(
            f"Laurent window [{series.lo}, {series.hi}] does not fit a grid of "
            f"size {grid.size}; increase M"
        )
    bins = np.zeros(grid.size, dtype=complex)
    bins[series.indices() % grid.size] = series.coeffs
    return np.fft.ifft(bins) * grid.size


@dataclass
class ScatteringFunction:
    """Contractive boundary function R with samples and coefficients in sync.

    `exact_coeffs` records whether R was defined by a finite coefficient
    list (so coefficients outside the stored window are exactly zero)
    or sampled (so they are unresolved at this grid size).
    """

    grid: CircleGrid
    samples: np.ndarray
    coeffs: LaurentSeries
    margin: float
    exact_coeffs: bool = False

    @classmethod
    def from_samples(cls, samples, grid):
        samples = np.asarray(samples, dtype=complex)
        if samples.shape != (grid.size,):
            raise InputError(
                f"sample count {samples.shape} does not match grid size {grid.size}"
            )
        sup = float(np.max(np.abs(samples)))
        if sup > 1.0 + 1e-12:
            raise InputError(f"|R| must not exceed 1; got sup |R| = {sup:.6g}")
        return cls(grid, samples, analyze(samples, grid), 1.0 - sup)

    @classmethod
    def from_coeffs(cls, series, grid):
        samples = synthesize(series, grid)
        sup = float(np.max(np.abs(samples)))
        if sup > 1.0 + 1e-12:
            raise InputError(
                f"coefficients synthesize to sup |R| = {sup:.6g} > 1 on the grid"
            )
        return cls(grid, samples, series, 1.0 - sup, exact_coeffs=True)

    def coefficient(self, j):
        if self.coeffs.lo <= j <= self.coeffs.hi:
            return complex(self.coeffs.coeffs[j - self.coeffs.lo])
        if self.exact_coeffs:
            return 0j
        raise ResolutionError(
            f"coefficient index {j} outside the resolved window "
            f"[{self.coeffs.lo}, {self.coeffs.hi}]; increase the grid size M"
        )

    def coeff_range(self, lo, hi):
        """Coefficients for the contiguous index range lo..hi as an array."""
        if lo > hi:
            raise InputError("empty coefficient range")
        if not self.exact_coeffs and (lo < self.coeffs.lo or hi > self.coeffs.hi):
            raise ResolutionError(
                f"coefficient range [{lo}, {hi}] outside the resolved window "
                f"[{self.coeffs.lo}, {self.coeffs.hi}]; increase the grid size M"
            )
        out = np.zeros(hi - lo + 1, dtype=complex)
        a = max(lo, self.coeffs.lo)
        b = min(hi, self.coeffs.hi)
        if a <= b:
            out[a - lo : b - lo + 1] = self.coeffs.coeffs[
                a - self.coeffs.lo : b - self.coeffs.lo + 1
            ]
        return out

    def on_grid(self, grid):
        """Samples of R on another grid (band-limited resynthesis)."""
        if grid.size == self.grid.size:
            return self.samples
        return synthesize(self.coeffs, grid)


@dataclass
class SzegoReport:
    sup_modulus: float
    log_integral: float
    passes: bool
    margin: float


def szego_check(R):
    """Check integrability of log(1 - |R|) at grid resolution.

    Always returns a report; `passes` is False exactly when some sample
    has |R| = 1 (the log diverges at a node) or the contraction bound
    fails.
    """
    a = np.abs(R.samples)
    sup = float(np.max(a))
    with np.errstate(divide="ignore"):
        log_integral = float(np.mean(np.log1p(-np.minimum(a, 1.0))))
    passes = bool(sup <= 1.0 and np.isfinite(log_integral))
    return SzegoReport(sup, log_integral, passes, 1.0 - sup)


def hilbert_conjugate(u, grid):
    """Circular conjugate function of real grid data.

    Fourier multiplier -i sign(j), zero at j = 0 and at the Nyquist
    index, so the result is real with zero mean.
    """
    u = np.asarray(u, dtype=float)
    if u.shape != (grid.size,):
        raise InputError("sample count does not match grid size")
    bins = np.fft.fft(u)
    j = np.fft.fftfreq(grid.size, d=1.0 / grid.size)
    mult = -1j * np.sign(j)
    mult[grid.size // 2] = 0.0
    return np.real(np.fft.ifft(bins * mult))


@dataclass
class OuterFunction:
    """Boundary values of an outer function, normalized positive at 0."""

    grid: CircleGrid
    boundary_samples: np.ndarray
    value_at_zero: float


def outer_factor(w, grid):
    """Outer function T with |T|^2 = w on the grid and T(0) > 0.

    Parameters
    ----------
    w : array_like
        Strictly positive density samples.
    grid : CircleGrid

    Returns
    -------
    OuterFunction
        T = exp((log w + i H[log w]) / 2) where H is the zero-mean
        circular Hilbert transform; T(0) = exp(mean(log w) / 2).
    """
    w = np.asarray(w, dtype=float)
    if w.shape != (grid.size,):
        raise InputError("density sample count does not match grid size")
    bad = np.flatnonzero(w <= 0.0)
    if bad.size:
        k = int(bad[0])
        raise DomainError(
            f"density must be strictly positive; w = {w[k]:.6g} at node "
            f"{k} (theta = {grid.theta[k]:.6g})"
        )
    logw = np.log(w)
    phase = hilbert_conjugate(logw, grid)
    boundary = np.exp(0.5 * (logw + 1j * phase))
    return OuterFunction(grid, boundary, float(np.exp(0.5 * np.mean(logw))))


def harmonic_extension(f, z):
    """Harmonic extension of a Laurent series at a point of the open disk.

    Analytic indices contribute c_j z^j, anti-analytic ones c_j zbar^{-j}.
    """
    z = complex(z)
    if abs(z) >= 1.0:
        raise DomainError(f"|z| must be < 1, got |z| = {abs(z):.6g}")
    idx = f.indices()
    pos = idx >= 0
    val = np.sum(f.coeffs[pos] * z ** idx[pos])
    val += np.sum(f.coeffs[~pos] * np.conj(z) ** (-idx[~pos]))
    return complex(val)
