"""From stimulus and response recordings to an FRF.

The stimulus is a pseudo-random ternary sequence (PRTS): a velocity profile
taking the values 0, +s and -s, built from a maximal-length linear recurrence
over GF(3). The transfer function is estimated per stimulus cycle as
cross-power over stimulus power, averaged over cycles, kept only at excited
frequencies, then averaged over frequency bands.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    BandSpec,
    DegenerateError,
    FrequencyGrid,
    Frf,
    ValidationError,
    to_fraction,
)

__all__ = [
    "PrtsConfig",
    "TimeSeries",
    "RawTransfer",
    "primitive_taps",
    "prts_sequence",
    "generate_prts",
    "estimate_raw_transfer",
    "band_average",
    "default_band_spec",
    "POWER_THRESHOLD",
]

POWER_THRESHOLD = 1e-6
_SYMBOL_VELOCITY = np.array([0.0, 1.0, -1.0])


def _period(taps: tuple[int, ...], state: tuple[int, ...]) -> int:
    """Length of the cycle the recurrence runs from ``state`` (0 if it never returns)."""
    n = len(taps)
    limit = 3**n - 1
    s = list(state)
    for step in range(1, limit + 1):
        s.append(sum(c * v for c, v in zip(taps, s[-n:])) % 3)
        if tuple(s[-n:]) == state:
            return step
    return 0


@functools.lru_cache(maxsize=None)
def primitive_taps(stages: int) -> tuple[int, ...]:
    """First (lexicographic) tap set giving a maximal-length GF(3) sequence.

    The recurrence is ``s[k + n] = sum_i taps[i] * s[k + i] (mod 3)``.
    """
    if stages < 2:
        raise ValidationError("a PRTS needs at least 2 stages")
    seed = (1,) + (0,) * (stages - 1)
    for taps in itertools.product(range(3), repeat=stages):
        if taps[0] and _period(taps, seed) == 3**stages - 1:
            return taps
    raise AssertionError("no primitive polynomial found")  # cannot happen over GF(3)


@dataclass(frozen=True)
class PrtsConfig:
    """Stimulus settings. ``velocity`` in deg/s, ``dt`` (state duration) in s.

    When ``amplitude_target`` (peak-to-peak degrees) is set it overrides
    ``velocity``.
    """

    stages: int = 5
    seed_state: tuple[int, ...] | None = None
    velocity: float = 1.0
    dt: float = 0.25
    amplitude_target: float | None = None
    taps: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.stages < 2:
            raise ValidationError("a PRTS needs at least 2 stages")
        if self.dt <= 0:
            raise ValidationError("state duration must be positive")
        if self.seed_state is not None:
            if len(self.seed_state) != self.stages or any(v not in (0, 1, 2) for v in self.seed_state):
                raise ValidationError("seed state must hold `stages` symbols in {0, 1, 2}")
        if self.taps is not None and (len(self.taps) != self.stages or not self.taps[0] % 3):
            raise ValidationError("taps must have `stages` entries with a nonzero first tap")

    @property
    def states_per_cycle(self) -> int:
        return 3**self.stages - 1

    @property
    def cycle_duration(self) -> float:
        return self.states_per_cycle * self.dt


def prts_sequence(config: PrtsConfig) -> np.ndarray:
    """One cycle of symbols in {0, 1, 2}; symbol 1 maps to +s and 2 to -s."""
    state = config.seed_state if config.seed_state is not None else (1,) * config.stages
    if not any(state):
        raise ValidationError("the all-zero seed state generates a constant sequence")
    taps = config.taps if config.taps is not None else primitive_taps(config.stages)
    n = config.stages
    limit = 3**n - 1
    s = list(state)
    while len(s) < limit:
        s.append(sum(c * v for c, v in zip(taps, s[-n:])) % 3)
    seq = np.array(s[:limit])
    if _period(tuple(taps), tuple(state)) != limit:
        raise ValidationError("taps do not give a maximal-length sequence")
    return seq


@dataclass(frozen=True)
class TimeSeries:
    samples: np.ndarray
    sample_rate: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or not np.all(np.isfinite(samples)):
            raise ValidationError("time series must be a finite 1-D vector")
        if self.sample_rate <= 0:
            raise ValidationError("sample rate must be positive")
        samples = samples.copy()
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.shape[0]


def _unit_profile(config: PrtsConfig):
    velocity = _SYMBOL_VELOCITY[prts_sequence(config)]
    knots = np.concatenate([[0.0], np.cumsum(velocity) * config.dt])
    return velocity, knots


def generate_prts(config: PrtsConfig, cycles: int, sample_rate: float,
                  kind: str = "position") -> TimeSeries:
    """Sampled PRTS stimulus over ``cycles`` repetitions.

    ``kind="position"`` (default) gives the exact integral of the ternary
    velocity at each sample time; ``kind="velocity"`` the velocity itself.
    One cycle must span an integer number of samples.
    """
    if cycles < 1:
        raise ValidationError("at least one cycle is required")
    cycle_samples = config.cycle_duration * sample_rate
    if abs(cycle_samples - round(cycle_samples)) > 1e-9 * cycle_samples:
        raise ValidationError(
            f"a {config.cycle_duration} s cycle is not a whole number of samples at {sample_rate} Hz"
        )
    cycle_samples = int(round(cycle_samples))
    velocity, knots = _unit_profile(config)
    speed = config.velocity
    if config.amplitude_target is not None:
        speed = config.amplitude_target / (knots.max() - knots.min())
    t = np.arange(cycle_samples) / sample_rate
    if kind == "position":
        one = speed * np.interp(t, np.arange(knots.shape[0]) * config.dt, knots)
    elif kind == "velocity":
        state = np.minimum((t / config.dt).astype(int), velocity.shape[0] - 1)
        one = speed * velocity[state]
    else:
        raise ValidationError(f"unknown PRTS signal kind {kind!r}")
    return TimeSeries(np.tile(one, cycles), sample_rate)


@dataclass(frozen=True, init=False)
class RawTransfer:
    """Empirical transfer function at the excited frequencies."""

    rational: tuple[Fraction, ...]
    values: np.ndarray

    def __init__(self, freqs, values):
        object.__setattr__(self, "rational", tuple(to_fraction(f) for f in freqs))
        values = np.array(values, dtype=complex)
        values.setflags(write=False)
        if values.shape != (len(self.rational),):
            raise ValidationError("one transfer value per frequency required")
        object.__setattr__(self, "values", values)

    @property
    def freqs(self) -> np.ndarray:
        return np.array([float(f) for f in self.rational])

    def __len__(self) -> int:
        return len(self.rational)


def estimate_raw_transfer(stimulus: TimeSeries, response: TimeSeries, cycle_length: int,
                          discard_first: bool = True,
                          threshold: float = POWER_THRESHOLD) -> RawTransfer:
    """Cycle-averaged ``G_xy / G_yy`` at frequencies the stimulus excites.

    ``y`` is the stimulus and ``x`` the response; cross- and auto-power are
    each averaged over cycles before dividing. A bin counts as excited when
    its stimulus power is at least ``threshold`` times the largest one. DC
    and the Nyquist bin are never reported.
    """
    if stimulus.sample_rate != response.sample_rate:
        raise ValidationError("stimulus and response sample rates differ")
    if len(stimulus) != len(response):
        raise ValidationError("stimulus and response lengths differ")
    if cycle_length < 2 or len(stimulus) % cycle_length:
        raise ValidationError(f"length {len(stimulus)} is not a multiple of cycle length {cycle_length}")
    cycles = len(stimulus) // cycle_length
    if discard_first:
        if cycles < 2:
            raise ValidationError("discarding the first cycle needs at least 2 cycles")
        skip = cycle_length
    else:
        skip = 0
    y = np.fft.rfft(stimulus.samples[skip:].reshape(-1, cycle_length), axis=1)
    x = np.fft.rfft(response.samples[skip:].reshape(-1, cycle_length), axis=1)
    g_xy = (x * np.conj(y)).mean(axis=0)
    g_yy = (np.abs(y) ** 2).mean(axis=0)
    k = np.arange(g_yy.shape[0])
    usable = (k > 0) & (2 * k < cycle_length)
    peak = g_yy[usable].max() if usable.any() else 0.0
    excited = usable & (g_yy >= threshold * peak) & (g_yy > 0)
    if not excited.any():
        raise DegenerateError("no frequency exceeds the stimulus power threshold")
    rate = to_fraction(stimulus.sample_rate)
    freqs = [Fraction(int(i)) * rate / cycle_length for i in k[excited]]
    return RawTransfer(freqs, g_xy[excited] / g_yy[excited])


def band_average(raw: RawTransfer, spec: BandSpec, grid: FrequencyGrid | None = None) -> Frf:
    """Complex mean of the raw transfer over each band.

    The result sits on the band centres unless ``grid`` supplies nominal
    frequencies (one per band) to label it with.
    """
    if spec.raw_freqs != raw.rational:
        raise ValidationError("band spec was built for different raw frequencies")
    values = np.array([raw.values[list(band)].mean() for band in spec.bands])
    if grid is None:
        grid = spec.center_grid()
    elif len(grid) != len(spec):
        raise ValidationError(f"{len(grid)} labels for {len(spec)} bands")
    return Frf(values, grid)


def default_band_spec(raw_freqs, target_grid: FrequencyGrid) -> BandSpec:
    """Greedy contiguous partition whose band means approach the targets.

    Bands are filled from the lowest raw frequency up. Each band keeps
    absorbing the next frequency while that moves its mean closer to its
    target and enough frequencies remain for the later bands. Raw
    frequencies beyond the last band are left out.
    """
    if isinstance(raw_freqs, RawTransfer):
        raw_freqs = raw_freqs.rational
    raw = [to_fraction(f) for f in raw_freqs]
    targets = target_grid.rational
    if len(raw) < len(targets):
        raise ValidationError(f"{len(raw)} raw frequencies cannot fill {len(targets)} bands")
    if any(b <= a for a, b in zip(raw, raw[1:])):
        raise ValidationError("raw frequencies must be strictly increasing")
    bands = []
    start = 0
    for b, target in enumerate(targets):
        remaining = len(targets) - b - 1
        stop = start + 1
        total = raw[start]
        while stop < len(raw) - remaining:
            current = abs(total / (stop - start) - target)
            extended = abs((total + raw[stop]) / (stop - start + 1) - target)
            if extended >= current:
                break
            total += raw[stop]
            stop += 1
        bands.append(range(start, stop))
        start = stop
    return BandSpec(bands, raw)
