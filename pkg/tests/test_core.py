from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from frfbands import (
    STANDARD_GRID,
    BandEstimate,
    BandSpec,
    FrequencyGrid,
    Frf,
    FrfSet,
    Pir,
    ValidationError,
    validate_frf_set,
)
from frfbands.core import format_frequency, to_fraction


def test_standard_grid_is_exact():
    assert len(STANDARD_GRID) == 11
    assert STANDARD_GRID.rational[0] == Fraction(1, 20)
    assert STANDARD_GRID.rational[-1] == Fraction(11, 5)
    assert STANDARD_GRID.freqs[2] == 0.3


def test_float_input_goes_through_repr():
    assert FrequencyGrid([0.05, 0.15]) == FrequencyGrid(["0.05", "0.15"])
    assert to_fraction(0.1) == Fraction(1, 10)


@pytest.mark.parametrize("freqs", [[], [0.0, 1.0], [-0.5], [0.3, 0.2], [0.1, 0.1]])
def test_grid_invariants(freqs):
    with pytest.raises(ValidationError):
        FrequencyGrid(freqs)


@given(st.fractions(min_value=Fraction(-10**6), max_value=Fraction(10**6), max_denominator=10**6))
def test_format_frequency_round_trip(value):
    assert Fraction(format_frequency(value)) == value


def test_format_frequency_decimal_text():
    assert format_frequency(Fraction(1, 20)) == "0.05"
    assert format_frequency(Fraction(11, 5)) == "2.2"
    assert format_frequency(Fraction(3)) == "3"
    assert format_frequency(Fraction(2, 121)) == "2/121"


def test_frf_rejects_bad_data(grid):
    with pytest.raises(ValidationError):
        Frf(np.zeros(10), grid)
    bad = np.zeros(11, complex)
    bad[3] = np.nan
    with pytest.raises(ValidationError):
        Frf(bad, grid)


def test_frf_is_immutable(grid):
    frf = Frf(np.ones(11), grid)
    with pytest.raises(ValueError):
        frf.values[0] = 2


def test_validate_ok(grid):
    members = [Frf(np.ones(11), grid), Frf(np.zeros(11), grid)]
    assert validate_frf_set(members).ok


def test_validate_grid_mismatch(grid):
    other = FrequencyGrid(np.arange(1, 23) / 10)
    result = validate_frf_set([(grid, np.ones(11)), (other, np.ones(22))])
    assert not result.ok
    assert [v.kind for v in result.violations] == ["grid-mismatch"]


def test_validate_non_finite(grid):
    bad = np.ones(11, complex)
    bad[0] = np.inf
    result = validate_frf_set([(grid, np.ones(11)), (grid, bad)])
    assert [v.kind for v in result.violations] == ["non-finite"]
    assert result.violations[0].member == 1


def test_validate_too_few(grid):
    result = validate_frf_set([(grid, np.ones(11))])
    assert [v.kind for v in result.violations] == ["too-few-members"]


def test_frf_set_access(grid, make_set):
    s = make_set(4, 0)
    assert len(s) == 4
    assert np.array_equal(s[2].values, s.values[2])
    assert [f.grid for f in s] == [grid] * 4
    assert len(s.subset([0, 3])) == 2
    assert FrfSet.from_frfs(list(s)).values.tolist() == s.values.tolist()


def test_pir_invariants():
    Pir(np.zeros(440), 22, 20)
    with pytest.raises(ValidationError):
        Pir(np.zeros(439), 22, 20)
    with pytest.raises(ValidationError):
        Pir(np.zeros(440, complex), 22, 20)


def test_band_estimate_invariants():
    kwargs = dict(kind="prediction", avg=[0, 0], sigma=[1, 1], constant=1.0, lower=[-1, -1],
                  upper=[1, 1], alpha=95, replicates=10, histogram_values=[0.1, 0.5],
                  sample_rate=1.0)
    band = BandEstimate(**kwargs)
    assert band.chist.tolist() == [0.5, 1.0]
    with pytest.raises(ValidationError):
        BandEstimate(**{**kwargs, "histogram_values": [0.5, 0.1]})
    with pytest.raises(ValidationError):
        BandEstimate(**{**kwargs, "lower": [1, -1]})
    with pytest.raises(ValidationError):
        BandEstimate(**{**kwargs, "sigma": [-1, 1]})


def test_band_spec():
    spec = BandSpec([[0], [1, 2]], ["0.05", "0.1", "0.2"])
    assert spec.center_freqs == (Fraction(1, 20), Fraction(3, 20))
    for bands in ([[0], []], [[0, 1], [1]], [[3]]):
        with pytest.raises(ValidationError):
            BandSpec(bands, ["0.05", "0.1", "0.2"])
