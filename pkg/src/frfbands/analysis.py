"""Mapping band results back to the frequency domain, and band validation."""

from __future__ import annotations

import numpy as np

from .bootstrap import (
    DEFAULT_REPLICATES,
    MIN_MEMBERS,
    band_contains,
    prediction_band,
    random_seed,
)
from .core import BandEstimate, FrequencyGrid, Frf, FrfSet, Pir, ValidationError, to_fraction
from .pir import default_sample_rate, frfs_from_pirs, pirs_from_frfs

__all__ = [
    "residual",
    "residual_spectrum",
    "mean_difference_spectrum",
    "fold_seed",
    "loo_membership",
    "loo_coverage",
]


def residual(x, band: BandEstimate) -> np.ndarray:
    """Signed excursion of ``x`` outside the band; zero where it is inside.

    ``x - upper`` above the band, ``x - lower`` below it.
    """
    x = x.samples if isinstance(x, Pir) else np.asarray(x, dtype=float)
    if x.shape != band.avg.shape:
        raise ValidationError(f"PIR length {x.shape} does not match band {band.avg.shape}")
    r = np.zeros_like(x)
    above = x > band.upper
    below = x < band.lower
    r[above] = x[above] - band.upper[above]
    r[below] = x[below] - band.lower[below]
    return r


def residual_spectrum(r, sample_rate, grid: FrequencyGrid,
                      complex_values: bool = False) -> np.ndarray:
    """Spectrum of a residual signal at the grid frequencies.

    Scaled like the FRF (the inverse of the PIR transform). Magnitudes by
    default. Clipping is nonlinear, so the residual also carries power at
    frequencies off the grid; only the grid bins are reported here.
    """
    values = frfs_from_pirs(np.asarray(r, dtype=float), to_fraction(sample_rate), grid).values[0]
    return values if complex_values else np.abs(values)


def mean_difference_spectrum(set_a: FrfSet, set_b: FrfSet) -> Frf:
    """``mean(A) - mean(B)`` in the complex domain."""
    if set_a.grid != set_b.grid:
        raise ValidationError("groups are on different frequency grids")
    return Frf(set_a.values.mean(axis=0) - set_b.values.mean(axis=0), set_a.grid)


def fold_seed(seed: int, member: int) -> int:
    """Seed of the leave-one-out fold holding out ``member``."""
    state = np.random.SeedSequence([int(seed), int(member)]).generate_state(1, np.uint64)[0]
    return int(state >> np.uint64(1))


def loo_membership(frfs: FrfSet, alpha: float = 95, replicates: int = DEFAULT_REPLICATES,
                   seed: int | None = None, sample_rate=None,
                   threads: int | None = None) -> np.ndarray:
    """Whether each member lies in the prediction band of the other members."""
    n = len(frfs)
    if n < MIN_MEMBERS + 1:
        raise ValidationError(f"leave-one-out needs at least {MIN_MEMBERS + 1} members, got {n}")
    rate = default_sample_rate(frfs.grid) if sample_rate is None else to_fraction(sample_rate)
    seed = random_seed() if seed is None else int(seed)
    x = pirs_from_frfs(frfs, rate)
    inside = np.empty(n, dtype=bool)
    for i in range(n):
        others = np.delete(x, i, axis=0)
        band = prediction_band(others, alpha, replicates, fold_seed(seed, i), rate, threads)
        inside[i] = band_contains(band, x[i])
    return inside


def loo_coverage(frfs: FrfSet, alpha: float = 95, replicates: int = DEFAULT_REPLICATES,
                 seed: int | None = None, sample_rate=None,
                 threads: int | None = None) -> float:
    """Fraction of held-out members covered by the prediction band of the rest."""
    return float(loo_membership(frfs, alpha, replicates, seed, sample_rate, threads).mean())
