"""Bootstrap prediction and confidence bands on PIRs.

Both bands have the form ``mean +/- C * sigma`` where ``mean`` and ``sigma``
are the pointwise sample mean and standard deviation of the PIRs. The
constant C comes from a pivoted bootstrap: every replicate recomputes its own
mean and sigma from the resampled curves, and C is the alpha-quantile of the
collected maximum standardized deviations.

* prediction: statistics ``max_t |x_i - mean_b| / sigma_b`` for each original
  curve ``x_i`` (n values per replicate);
* confidence: statistic ``max_t |mean - mean_b| / sigma_b`` (one per replicate).
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass
from typing import NamedTuple

import numba
import numpy as np

from . import _kernels
from .core import BandEstimate, BandKind, FrfSet, Pir, ValidationError, to_fraction
from .pir import default_sample_rate, pirs_from_frfs

__all__ = [
    "DEFAULT_REPLICATES",
    "MIN_MEMBERS",
    "ResamplePlan",
    "random_seed",
    "pointwise_mean",
    "pointwise_sigma",
    "max_standardized_deviation",
    "sigma_floor",
    "select_constant",
    "BootstrapConstant",
    "prediction_constant",
    "confidence_constant",
    "make_band",
    "prediction_band",
    "confidence_band",
    "band_contains",
    "PairedTest",
    "paired_h0_test",
]

DEFAULT_REPLICATES = 10000
MIN_MEMBERS = 3
_EPS_RELATIVE = 1e-12


def random_seed() -> int:
    """A fresh 63-bit seed from OS entropy."""
    return int(np.random.SeedSequence().generate_state(1, np.uint64)[0] >> np.uint64(1))


@dataclass(frozen=True)
class ResamplePlan:
    """Deterministic bootstrap resampling of ``n`` items.

    Row ``r`` of :meth:`indices` is drawn from a single PCG64 stream seeded
    by ``seed``; it depends only on ``(seed, n, r)``, never on ``replicates``
    or on how the replicates are later evaluated.
    """

    seed: int
    replicates: int
    n: int

    def __post_init__(self):
        if self.replicates < 1:
            raise ValidationError("replicates must be positive")
        if self.n < 1:
            raise ValidationError("sample size must be positive")

    def indices(self) -> np.ndarray:
        rng = np.random.default_rng(self.seed)
        return rng.integers(0, self.n, size=(self.replicates, self.n), dtype=np.int64)

    def replicate(self, r: int) -> np.ndarray:
        rng = np.random.default_rng(self.seed)
        return rng.integers(0, self.n, size=(r + 1, self.n), dtype=np.int64)[r]


def _as_matrix(pirs) -> np.ndarray:
    if isinstance(pirs, np.ndarray):
        return np.atleast_2d(pirs.astype(float, copy=False))
    pirs = list(pirs)
    if not pirs:
        raise ValidationError("no PIRs given")
    if isinstance(pirs[0], Pir):
        first = pirs[0]
        for p in pirs[1:]:
            if len(p) != len(first) or p.sample_rate != first.sample_rate:
                raise ValidationError("PIRs differ in length or sample rate")
        return np.stack([p.samples for p in pirs])
    return np.atleast_2d(np.asarray(pirs, dtype=float))


def pointwise_mean(pirs) -> np.ndarray:
    x = _as_matrix(pirs)
    if x.shape[0] == 0:
        raise ValidationError("no PIRs given")
    # shifting by a member makes the mean of identical values exact
    return x[0] + (x - x[0]).mean(axis=0)


def pointwise_sigma(pirs, mean=None) -> np.ndarray:
    """Sample standard deviation at each time point (``n - 1`` denominator)."""
    x = _as_matrix(pirs)
    if x.shape[0] < 2:
        raise ValidationError("sigma needs at least 2 PIRs")
    mean = pointwise_mean(x) if mean is None else np.asarray(mean, dtype=float)
    return np.sqrt(((x - mean) ** 2).sum(axis=0) / (x.shape[0] - 1))


def max_standardized_deviation(x, mean, sigma, epsilon: float = 0.0) -> float:
    x = x.samples if isinstance(x, Pir) else np.asarray(x, dtype=float)
    mean = np.asarray(mean, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    if not (x.shape == mean.shape == sigma.shape):
        raise ValidationError("length mismatch")
    return float(np.max(np.abs(x - mean) / np.maximum(sigma, epsilon)))


def sigma_floor(pirs) -> float:
    """Guard value for zero replicate sigma: 1e-12 of the largest |x|."""
    peak = float(np.max(np.abs(_as_matrix(pirs))))
    return _EPS_RELATIVE * peak if peak > 0 else np.finfo(float).tiny


def select_constant(sorted_values: np.ndarray, alpha: float) -> float:
    """Smallest collected value whose cumulative fraction reaches alpha %.

    This is the ``ceil(alpha / 100 * K)``-th order statistic; the fraction is
    evaluated exactly so ``alpha = 95`` with ``K = 20`` picks the 19th value.
    """
    k = sorted_values.shape[0]
    if k == 0:
        raise ValidationError("no bootstrap statistics")
    rank = math.ceil(to_fraction(alpha) * k / 100)
    return float(sorted_values[max(rank, 1) - 1])


def _check_alpha(alpha: float) -> None:
    if not 50 < alpha < 100:
        raise ValidationError(f"alpha must lie in (50, 100), got {alpha}")


@contextlib.contextmanager
def _thread_limit(threads: int | None):
    if threads is None:
        yield
        return
    previous = numba.get_num_threads()
    numba.set_num_threads(max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS)))
    try:
        yield
    finally:
        numba.set_num_threads(previous)


@dataclass(frozen=True)
class BootstrapConstant:
    """Selected constant and the sorted statistics it came from.

    Unpacks as ``(constant, histogram_values)``.
    """

    constant: float
    histogram_values: np.ndarray
    degenerate_replicates: int = 0

    def __iter__(self):
        return iter((self.constant, self.histogram_values))


def _bootstrap(x: np.ndarray, kind: BandKind, alpha, plan: ResamplePlan, threads=None):
    _check_alpha(alpha)
    n = x.shape[0]
    if n < MIN_MEMBERS:
        raise ValidationError(f"band estimation needs at least {MIN_MEMBERS} members, got {n}")
    if plan.n != n:
        raise ValidationError(f"resample plan is for {plan.n} items, data has {n}")
    xt = np.ascontiguousarray(x.T, dtype=float)
    eps = sigma_floor(x)
    indices = plan.indices()
    with _thread_limit(threads):
        if kind is BandKind.PREDICTION:
            stats, degenerate = _kernels.prediction_statistics(xt, indices, eps)
        else:
            stats, degenerate = _kernels.confidence_statistics(
                xt, indices, pointwise_mean(x), eps)
    values = np.sort(stats, axis=None)
    return BootstrapConstant(select_constant(values, alpha), values, int(degenerate.sum()))


def _pirs(frfs: FrfSet, sample_rate):
    if isinstance(frfs, FrfSet):
        return pirs_from_frfs(frfs, sample_rate)
    return _as_matrix(frfs)


def prediction_constant(frfs: FrfSet, alpha: float, plan: ResamplePlan,
                        sample_rate=None, threads: int | None = None) -> BootstrapConstant:
    """Bootstrap constant of the prediction band (n * B statistics)."""
    return _bootstrap(_pirs(frfs, sample_rate), BandKind.PREDICTION, alpha, plan, threads)


def confidence_constant(frfs: FrfSet, alpha: float, plan: ResamplePlan,
                        sample_rate=None, threads: int | None = None) -> BootstrapConstant:
    """Bootstrap constant of the confidence band for the mean (B statistics)."""
    return _bootstrap(_pirs(frfs, sample_rate), BandKind.CONFIDENCE, alpha, plan, threads)


def make_band(kind, mean, sigma, constant: float, alpha: float, replicates: int,
              sample_rate: float, histogram_values=(), seed=None,
              degenerate_replicates: int = 0) -> BandEstimate:
    if constant < 0 or not math.isfinite(constant):
        raise ValidationError(f"band constant must be finite and non-negative, got {constant}")
    mean = np.asarray(mean, dtype=float)
    half = constant * np.asarray(sigma, dtype=float)
    return BandEstimate(
        kind=BandKind(kind),
        avg=mean,
        sigma=sigma,
        constant=float(constant),
        lower=mean - half,
        upper=mean + half,
        alpha=float(alpha),
        replicates=int(replicates),
        histogram_values=np.asarray(histogram_values, dtype=float),
        sample_rate=float(sample_rate),
        seed=seed,
        degenerate_replicates=degenerate_replicates,
    )


def _band(kind: BandKind, frfs, alpha, replicates, seed, sample_rate, threads):
    if isinstance(frfs, FrfSet):
        rate = default_sample_rate(frfs.grid) if sample_rate is None else to_fraction(sample_rate)
    elif sample_rate is None:
        raise ValidationError("sample_rate is required when passing PIR samples")
    else:
        rate = to_fraction(sample_rate)
    x = _pirs(frfs, rate)
    seed = random_seed() if seed is None else int(seed)
    plan = ResamplePlan(seed, replicates, x.shape[0])
    const = _bootstrap(x, kind, alpha, plan, threads)
    mean = pointwise_mean(x)
    return make_band(kind, mean, pointwise_sigma(x, mean), const.constant, alpha,
                     replicates, float(rate), const.histogram_values, seed,
                     const.degenerate_replicates)


def prediction_band(frfs, alpha: float = 95, replicates: int = DEFAULT_REPLICATES,
                    seed: int | None = None, sample_rate=None,
                    threads: int | None = None) -> BandEstimate:
    """Prediction band for a new PIR drawn from the population of ``frfs``.

    ``frfs`` is an :class:`FrfSet` or an ``(n, N_t)`` PIR matrix (then
    ``sample_rate`` is required). ``seed=None`` draws a fresh seed, recorded
    on the result.
    """
    return _band(BandKind.PREDICTION, frfs, alpha, replicates, seed, sample_rate, threads)


def confidence_band(frfs, alpha: float = 95, replicates: int = DEFAULT_REPLICATES,
                    seed: int | None = None, sample_rate=None,
                    threads: int | None = None) -> BandEstimate:
    """Confidence band for the population mean PIR; see :func:`prediction_band`."""
    return _band(BandKind.CONFIDENCE, frfs, alpha, replicates, seed, sample_rate, threads)


def band_contains(band: BandEstimate, x) -> bool:
    """Closed-band membership: ``lower <= x <= upper`` at every sample."""
    x = x.samples if isinstance(x, Pir) else np.asarray(x, dtype=float)
    if x.shape != band.avg.shape:
        raise ValidationError(f"PIR length {x.shape} does not match band {band.avg.shape}")
    return bool(np.all((band.lower <= x) & (x <= band.upper)))


class PairedTest(NamedTuple):
    reject: bool
    band: BandEstimate
    diffs: FrfSet


def paired_h0_test(set_a: FrfSet, set_b: FrfSet, alpha: float = 95,
                   replicates: int = DEFAULT_REPLICATES, seed: int | None = None,
                   sample_rate=None, threads: int | None = None) -> PairedTest:
    """Test whether matched pairs have zero mean difference.

    The confidence band is computed on the PIRs of ``A_i - B_i``; the null
    hypothesis is rejected when the zero function leaves the band anywhere.
    """
    if len(set_a) != len(set_b):
        raise ValidationError(f"unmatched groups: {len(set_a)} vs {len(set_b)} members")
    if set_a.grid != set_b.grid:
        raise ValidationError("groups are on different frequency grids")
    diffs = FrfSet(set_a.grid, set_a.values - set_b.values)
    band = confidence_band(diffs, alpha, replicates, seed, sample_rate, threads)
    reject = bool(np.any((band.lower > 0) | (band.upper < 0)))
    return PairedTest(reject, band, diffs)
