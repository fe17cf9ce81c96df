"""Domain types shared by every other module.

All containers are immutable once built; their arrays are flagged read-only.
Frequencies are kept as exact rationals next to their float values, so the
period of a grid (the inverse of the frequencies' gcd) is computed exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "FrfError",
    "ValidationError",
    "DegenerateError",
    "to_fraction",
    "format_frequency",
    "FrequencyGrid",
    "STANDARD_GRID",
    "Frf",
    "FrfSet",
    "Pir",
    "BandKind",
    "BandEstimate",
    "BandSpec",
    "Violation",
    "Validation",
    "validate_frf_set",
]


class FrfError(ValueError):
    """Base class for errors raised by this package."""


class ValidationError(FrfError):
    """Input data violates a documented invariant."""


class DegenerateError(FrfError):
    """The computation is numerically degenerate for the given data."""


def to_fraction(value) -> Fraction:
    """Convert decimal text, an integer, a Fraction or a float to a Fraction.

    Floats go through their shortest repr, so ``0.05`` becomes exactly 1/20
    rather than the binary approximation.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("booleans are not frequencies")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise ValidationError(f"non-finite value {value!r}")
        return Fraction(repr(float(value)))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"cannot parse {value!r} as a number") from exc
    raise TypeError(f"unsupported numeric type {type(value).__name__}")


def format_frequency(value: Fraction) -> str:
    """Exact text for a rational: terminating decimal when possible, else ``p/q``."""
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    digits = max(twos, fives)
    scaled = value * 10**digits
    assert scaled.denominator == 1
    sign = "-" if scaled < 0 else ""
    text = str(abs(scaled.numerator)).rjust(digits + 1, "0")
    if digits == 0:
        return sign + text
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


@dataclass(frozen=True, init=False)
class FrequencyGrid:
    """Strictly increasing positive analysis frequencies in Hz."""

    rational: tuple[Fraction, ...]
    freqs: np.ndarray = field(repr=False, compare=False)

    def __init__(self, freqs: Iterable):
        rational = tuple(to_fraction(f) for f in freqs)
        if not rational:
            raise ValidationError("frequency grid is empty")
        if rational[0] <= 0:
            raise ValidationError("frequencies must be positive")
        for a, b in zip(rational, rational[1:]):
            if b <= a:
                raise ValidationError("frequencies must be strictly increasing")
        arr = np.array([float(f) for f in rational])
        arr.setflags(write=False)
        object.__setattr__(self, "rational", rational)
        object.__setattr__(self, "freqs", arr)

    def __len__(self) -> int:
        return len(self.rational)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FrequencyGrid):
            return NotImplemented
        return self.rational == other.rational

    def __hash__(self) -> int:
        return hash(self.rational)

    def as_text(self) -> list[str]:
        return [format_frequency(f) for f in self.rational]


STANDARD_GRID = FrequencyGrid(
    ["0.05", "0.15", "0.3", "0.4", "0.55", "0.7", "0.9", "1.1", "1.35", "1.75", "2.2"]
)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Frf:
    """One frequency response: complex gains on a grid."""

    values: np.ndarray
    grid: FrequencyGrid

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.ndim != 1 or values.shape[0] != len(self.grid):
            raise ValidationError(
                f"FRF has {values.size} values for a grid of {len(self.grid)}"
            )
        if not np.all(np.isfinite(values)):
            raise ValidationError("FRF contains non-finite values")
        object.__setattr__(self, "values", _frozen(values))

    def __len__(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    member: int | None = None


@dataclass(frozen=True)
class Validation:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def raise_if_failed(self) -> None:
        if self.violations:
            raise ValidationError("; ".join(v.message for v in self.violations))


def validate_frf_set(members, min_members: int = 2) -> Validation:
    """Check a candidate FRF collection without raising.

    ``members`` is a sequence whose items are :class:`Frf` objects or
    ``(grid, values)`` pairs; an :class:`FrfSet` is accepted as well.
    Reports grid mismatches, non-finite values and too few members.
    """
    if isinstance(members, FrfSet):
        members = list(members)
    violations: list[Violation] = []
    grid0 = None
    count = 0
    for i, member in enumerate(members):
        count += 1
        if isinstance(member, Frf):
            grid, values = member.grid, member.values
        else:
            grid, values = member
        values = np.asarray(values, dtype=complex)
        if grid0 is None:
            grid0 = grid
        elif grid != grid0:
            violations.append(
                Violation(
                    "grid-mismatch",
                    f"member {i} grid ({len(grid)} freqs) differs from member 0 "
                    f"({len(grid0)} freqs)",
                    i,
                )
            )
        if values.ndim != 1 or values.shape[0] != len(grid):
            violations.append(
                Violation("shape", f"member {i} has {values.size} values for "
                          f"{len(grid)} frequencies", i)
            )
        if not np.all(np.isfinite(values)):
            violations.append(Violation("non-finite", f"member {i} has non-finite values", i))
    if count < min_members:
        violations.append(
            Violation("too-few-members", f"{count} members, at least {min_members} required")
        )
    return Validation(tuple(violations))


@dataclass(frozen=True, init=False)
class FrfSet:
    """n FRFs on one shared grid, stored as an ``(n, M)`` complex matrix."""

    grid: FrequencyGrid
    values: np.ndarray

    def __init__(self, grid: FrequencyGrid, values):
        values = np.asarray(values, dtype=complex)
        if values.ndim == 1:
            values = values[np.newaxis, :]
        if values.ndim != 2:
            raise ValidationError("FRF set values must be a 2-D (members x freqs) array")
        validate_frf_set([(grid, row) for row in values], min_members=1).raise_if_failed()
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", _frozen(values))

    @classmethod
    def from_frfs(cls, frfs: Sequence[Frf]) -> "FrfSet":
        validate_frf_set(frfs, min_members=1).raise_if_failed()
        return cls(frfs[0].grid, np.stack([f.values for f in frfs]))

    def __len__(self) -> int:
        return self.values.shape[0]

    def __iter__(self) -> Iterator[Frf]:
        for row in self.values:
            yield Frf(row, self.grid)

    def __getitem__(self, i: int) -> Frf:
        return Frf(self.values[i], self.grid)

    def subset(self, indices) -> "FrfSet":
        return FrfSet(self.grid, self.values[np.asarray(indices)])

    def scaled(self, factor: float) -> "FrfSet":
        return FrfSet(self.grid, self.values * factor)


@dataclass(frozen=True)
class Pir:
    """Real periodic time series equivalent to one FRF."""

    samples: np.ndarray
    sample_rate: float
    period: float

    def __post_init__(self):
        samples = np.asarray(self.samples)
        if np.iscomplexobj(samples):
            raise ValidationError("PIR samples must be real")
        samples = samples.astype(float)
        if samples.ndim != 1:
            raise ValidationError("PIR samples must be 1-D")
        if not np.all(np.isfinite(samples)):
            raise ValidationError("PIR contains non-finite samples")
        n_t = self.period * self.sample_rate
        if abs(n_t - round(n_t)) > 1e-9 * max(1.0, n_t) or round(n_t) != samples.shape[0]:
            raise ValidationError(
                f"{samples.shape[0]} samples do not match period {self.period} s "
                f"at {self.sample_rate} Hz"
            )
        object.__setattr__(self, "samples", _frozen(samples))
        object.__setattr__(self, "sample_rate", float(self.sample_rate))
        object.__setattr__(self, "period", float(self.period))

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def time(self) -> np.ndarray:
        return np.arange(len(self)) / self.sample_rate


class BandKind(str, enum.Enum):
    CONFIDENCE = "confidence"
    PREDICTION = "prediction"


@dataclass(frozen=True)
class BandEstimate:
    """A simultaneous band ``avg +/- constant * sigma`` on the PIR time axis.

    ``histogram_values`` holds the sorted bootstrap statistics the constant
    was selected from; ``chist`` is their cumulative fraction.
    """

    kind: BandKind
    avg: np.ndarray
    sigma: np.ndarray
    constant: float
    lower: np.ndarray
    upper: np.ndarray
    alpha: float
    replicates: int
    histogram_values: np.ndarray
    sample_rate: float
    seed: int | None = None
    degenerate_replicates: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", BandKind(self.kind))
        for name in ("avg", "sigma", "lower", "upper", "histogram_values"):
            object.__setattr__(self, name, _frozen(np.asarray(getattr(self, name), dtype=float)))
        if not (self.avg.shape == self.sigma.shape == self.lower.shape == self.upper.shape):
            raise ValidationError("band vectors must share one length")
        if np.any(self.sigma < 0):
            raise ValidationError("sigma must be non-negative")
        if not (np.all(self.lower <= self.avg) and np.all(self.avg <= self.upper)):
            raise ValidationError("band bounds must enclose the mean")
        if np.any(np.diff(self.histogram_values) < 0):
            raise ValidationError("histogram values must be sorted ascending")
        if not 0 < self.alpha < 100:
            raise ValidationError("alpha must be a percentage in (0, 100)")

    def __len__(self) -> int:
        return self.avg.shape[0]

    @property
    def time(self) -> np.ndarray:
        return np.arange(len(self)) / self.sample_rate

    @property
    def chist(self) -> np.ndarray:
        k = self.histogram_values.shape[0]
        return np.arange(1, k + 1) / k


@dataclass(frozen=True, init=False)
class BandSpec:
    """Disjoint index groups into a raw frequency vector.

    ``center_freqs[i]`` is the exact mean of the raw frequencies in group i.
    """

    bands: tuple[tuple[int, ...], ...]
    raw_freqs: tuple[Fraction, ...]

    def __init__(self, bands: Iterable[Iterable[int]], raw_freqs: Iterable):
        bands = tuple(tuple(int(i) for i in band) for band in bands)
        raw = tuple(to_fraction(f) for f in raw_freqs)
        seen: set[int] = set()
        for b, band in enumerate(bands):
            if not band:
                raise ValidationError(f"band {b} is empty")
            for i in band:
                if not 0 <= i < len(raw):
                    raise ValidationError(f"band {b} index {i} out of range")
                if i in seen:
                    raise ValidationError(f"index {i} appears in more than one band")
                seen.add(i)
        if not bands:
            raise ValidationError("band spec has no bands")
        object.__setattr__(self, "bands", bands)
        object.__setattr__(self, "raw_freqs", raw)

    def __len__(self) -> int:
        return len(self.bands)

    @property
    def center_freqs(self) -> tuple[Fraction, ...]:
        return tuple(
            sum((self.raw_freqs[i] for i in band), Fraction(0)) / len(band)
            for band in self.bands
        )

    def center_grid(self) -> FrequencyGrid:
        return FrequencyGrid(self.center_freqs)
