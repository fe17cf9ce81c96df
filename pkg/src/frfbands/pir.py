"""FRF <-> pseudo-impulse response (PIR) transform.

A PIR is the real periodic signal

    x(t_j) = sum_k Re(H_k) cos(2 pi F_k t_j) + Im(H_k) sin(2 pi F_k t_j)

sampled at ``t_j = j / sample_rate`` over one period, the period being the
inverse of the gcd of the grid frequencies. Going back uses a direct DFT at
the grid bins only. With the forward kernel ``exp(-2j pi k j / N)`` the bin
value of such a signal is ``(N / 2) * conj(H_k)``, so the inverse is
``H_k = (2 / N) * conj(X_k)``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .core import FrequencyGrid, Frf, FrfSet, Pir, ValidationError, to_fraction

__all__ = [
    "fundamental_period",
    "default_sample_rate",
    "samples_per_period",
    "grid_bins",
    "pir_from_frf",
    "pirs_from_frfs",
    "evaluate_pir",
    "dft_bins",
    "frf_from_pir",
    "frfs_from_pirs",
    "Spectrum",
    "full_spectrum",
]


def fundamental_period(grid: FrequencyGrid) -> Fraction:
    """Exact period in seconds: ``1 / gcd(freqs)``.

    >>> from frfbands.core import STANDARD_GRID
    >>> fundamental_period(STANDARD_GRID)
    Fraction(20, 1)
    """
    common = math.lcm(*(f.denominator for f in grid.rational))
    numerators = [f.numerator * (common // f.denominator) for f in grid.rational]
    return Fraction(common, math.gcd(*numerators))


def default_sample_rate(grid: FrequencyGrid) -> Fraction:
    """Ten times the highest grid frequency."""
    return 10 * grid.rational[-1]


def samples_per_period(grid: FrequencyGrid, sample_rate) -> int:
    rate = to_fraction(sample_rate)
    if rate <= 2 * grid.rational[-1]:
        raise ValidationError(
            f"sample rate {float(rate)} Hz must exceed twice the highest "
            f"frequency ({float(grid.rational[-1])} Hz)"
        )
    n_t = fundamental_period(grid) * rate
    if n_t.denominator != 1:
        raise ValidationError(
            f"sample rate {float(rate)} Hz is not commensurate with the "
            f"{float(fundamental_period(grid))} s period"
        )
    return int(n_t)


def grid_bins(grid: FrequencyGrid, period=None) -> np.ndarray:
    """DFT bin index of every grid frequency for a signal of the given period."""
    period = fundamental_period(grid) if period is None else to_fraction(period)
    bins = [f * period for f in grid.rational]
    if any(b.denominator != 1 for b in bins):
        raise ValidationError("grid frequency does not fall on a DFT bin of the period")
    return np.array([int(b) for b in bins])


def _phase_table(bins: np.ndarray, n_t: int) -> np.ndarray:
    # exact integer reduction keeps the phases accurate for long periods
    j = np.arange(n_t)
    return 2 * np.pi * (np.outer(bins, j) % n_t) / n_t


def _rate_or_default(grid, sample_rate):
    return default_sample_rate(grid) if sample_rate is None else to_fraction(sample_rate)


def pirs_from_frfs(frfs: FrfSet, sample_rate=None) -> np.ndarray:
    """PIRs of every member as an ``(n, N_t)`` real matrix."""
    rate = _rate_or_default(frfs.grid, sample_rate)
    n_t = samples_per_period(frfs.grid, rate)
    phase = _phase_table(grid_bins(frfs.grid), n_t)
    values = frfs.values
    return values.real @ np.cos(phase) + values.imag @ np.sin(phase)


def pir_from_frf(frf: Frf, sample_rate=None) -> Pir:
    rate = _rate_or_default(frf.grid, sample_rate)
    samples = pirs_from_frfs(FrfSet(frf.grid, frf.values), rate)[0]
    return Pir(samples, float(rate), float(fundamental_period(frf.grid)))


def evaluate_pir(frf: Frf, times) -> np.ndarray:
    """Evaluate the PIR sum analytically at arbitrary times (seconds)."""
    times = np.asarray(times, dtype=float)
    arg = 2 * np.pi * np.multiply.outer(times, frf.grid.freqs)
    return np.cos(arg) @ frf.values.real + np.sin(arg) @ frf.values.imag


def dft_bins(x, bins) -> np.ndarray:
    """Direct DFT of ``x`` (last axis) at the requested integer bins."""
    x = np.asarray(x, dtype=float)
    n_t = x.shape[-1]
    phase = _phase_table(np.asarray(bins, dtype=np.int64) % n_t, n_t)
    return x @ (np.cos(phase) - 1j * np.sin(phase)).T


def frfs_from_pirs(pirs, sample_rate, grid: FrequencyGrid) -> FrfSet:
    """Inverse of :func:`pirs_from_frfs` for an ``(n, N_t)`` matrix."""
    pirs = np.atleast_2d(np.asarray(pirs, dtype=float))
    n_t = pirs.shape[-1]
    period = Fraction(n_t) / to_fraction(sample_rate)
    bins = grid_bins(grid, period)
    if np.any(2 * bins >= n_t):
        raise ValidationError("grid frequency at or above the Nyquist bin")
    return FrfSet(grid, (2.0 / n_t) * np.conj(dft_bins(pirs, bins)))


def frf_from_pir(pir: Pir, grid: FrequencyGrid) -> Frf:
    return frfs_from_pirs(pir.samples, to_fraction(pir.sample_rate), grid)[0]


class Spectrum(NamedTuple):
    freqs: np.ndarray
    values: np.ndarray

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)

    @property
    def phase(self) -> np.ndarray:
        return np.angle(self.values)


def full_spectrum(pir: Pir) -> Spectrum:
    """One-sided spectrum over bins ``0 .. N_t // 2``, scaled like the FRF.

    At a grid frequency the value equals the FRF component; between grid
    frequencies it is zero up to rounding.
    """
    n_t = len(pir)
    bins = np.arange(n_t // 2 + 1)
    scale = np.full(bins.shape, 2.0 / n_t)
    scale[0] = 1.0 / n_t
    if n_t % 2 == 0:
        scale[-1] = 1.0 / n_t
    values = scale * np.conj(dft_bins(pir.samples, bins))
    return Spectrum(bins * pir.sample_rate / n_t, values)
