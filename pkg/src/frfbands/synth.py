"""Synthetic FRF populations: low-pass templates with minimal phase plus noise."""

from __future__ import annotations

import math

import numpy as np

from .core import FrequencyGrid, Frf, FrfSet, ValidationError, to_fraction
from .pir import default_sample_rate, grid_bins, samples_per_period

__all__ = [
    "STOPBAND_FLOOR",
    "lowpass_magnitude",
    "dense_log_magnitude",
    "minimum_phase",
    "lowpass_frf",
    "sample_population",
]

STOPBAND_FLOOR = 0.01


def lowpass_magnitude(cutoff: float, grid: FrequencyGrid,
                      floor: float = STOPBAND_FLOOR) -> np.ndarray:
    """1 at grid frequencies up to ``cutoff`` (inclusive), ``floor`` above."""
    cutoff = to_fraction(cutoff)
    return np.array([1.0 if f <= cutoff else floor for f in grid.rational])


def _dense_layout(grid: FrequencyGrid, sample_rate, dense_points: int):
    rate = default_sample_rate(grid) if sample_rate is None else to_fraction(sample_rate)
    n_t = samples_per_period(grid, rate)
    # a multiple of the PIR length keeps every grid frequency on a dense bin
    n_dense = n_t * math.ceil(2 * dense_points / n_t)
    return float(rate), n_dense, grid_bins(grid) * (n_dense // n_t)


def dense_log_magnitude(magnitude, grid: FrequencyGrid, sample_rate=None,
                        dense_points: int = 512):
    """Log-magnitude interpolated onto a full two-sided dense DFT grid.

    Linear in frequency between grid points, held constant outside the grid
    range. Returns ``(log_magnitude, grid_bin_indices)``.
    """
    magnitude = np.asarray(magnitude, dtype=float)
    if magnitude.shape != (len(grid),):
        raise ValidationError("one magnitude per grid frequency required")
    if np.any(magnitude <= 0):
        raise ValidationError("minimal phase needs strictly positive magnitudes")
    rate, n_dense, bins = _dense_layout(grid, sample_rate, dense_points)
    half = np.arange(n_dense // 2 + 1) * rate / n_dense
    log_half = np.interp(half, grid.freqs, np.log(magnitude))
    full = np.concatenate([log_half, log_half[1:(n_dense + 1) // 2][::-1]])
    return full, bins


def minimum_phase(magnitude, grid: FrequencyGrid, sample_rate=None,
                  dense_points: int = 512) -> np.ndarray:
    """Minimal phase (radians) at the grid frequencies via the real cepstrum.

    The magnitude is extended to a dense grid of at least ``dense_points``
    bins up to the Nyquist frequency of the PIR sample rate; the folded
    cepstrum gives the log spectrum of the causal minimum-phase system,
    whose imaginary part is the phase (``exp(-i w t)`` convention).
    """
    log_mag, bins = dense_log_magnitude(magnitude, grid, sample_rate, dense_points)
    n = log_mag.shape[0]
    cep = np.fft.ifft(log_mag).real
    folded = np.zeros(n)
    folded[0] = cep[0]
    folded[1:(n + 1) // 2] = 2 * cep[1:(n + 1) // 2]
    if n % 2 == 0:
        folded[n // 2] = cep[n // 2]
    return np.fft.fft(folded).imag[bins]


def lowpass_frf(cutoff: float, grid: FrequencyGrid, floor: float = STOPBAND_FLOOR,
                sample_rate=None, dense_points: int = 512) -> Frf:
    """Noise-free low-pass template: magnitude profile with minimal phase."""
    mag = lowpass_magnitude(cutoff, grid, floor)
    phase = minimum_phase(mag, grid, sample_rate, dense_points)
    return Frf(mag * np.exp(1j * phase), grid)


def sample_population(template: Frf, noise_sigma: float, n: int, seed: int,
                      per_component: bool = True, min_phase_after_noise: bool = False,
                      sample_rate=None) -> FrfSet:
    """Draw ``n`` noisy copies of ``template``.

    With ``per_component`` the real and imaginary parts each get Gaussian
    noise of standard deviation ``noise_sigma``; otherwise ``noise_sigma`` is
    the RMS modulus of the complex noise. ``min_phase_after_noise`` replaces
    each sample's phase by the minimal phase of its noisy magnitude.
    Member ``i`` uses the ``i``-th child of ``SeedSequence(seed)``.
    """
    if n < 1:
        raise ValidationError("population size must be positive")
    if noise_sigma < 0:
        raise ValidationError("noise sigma must be non-negative")
    scale = noise_sigma if per_component else noise_sigma / math.sqrt(2)
    m = len(template)
    rows = []
    for child in np.random.SeedSequence(seed).spawn(n):
        noise = np.random.default_rng(child).normal(size=(2, m))
        rows.append(template.values + scale * (noise[0] + 1j * noise[1]))
    values = np.array(rows)
    if min_phase_after_noise:
        mags = np.maximum(np.abs(values), np.finfo(float).tiny)
        values = np.array([
            mag * np.exp(1j * minimum_phase(mag, template.grid, sample_rate))
            for mag in mags
        ])
    return FrfSet(template.grid, values)
