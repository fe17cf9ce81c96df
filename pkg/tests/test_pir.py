from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from frfbands import (
    STANDARD_GRID,
    FrequencyGrid,
    Frf,
    FrfSet,
    Pir,
    ValidationError,
    default_sample_rate,
    frf_from_pir,
    frfs_from_pirs,
    full_spectrum,
    fundamental_period,
    pir_from_frf,
    pirs_from_frfs,
)
from frfbands.pir import evaluate_pir, grid_bins

from oracles import decimal_gcd_period, eq1_direct

STANDARD_TEXT = STANDARD_GRID.as_text()


@pytest.mark.parametrize("freqs, period", [
    (STANDARD_TEXT, 20),
    (["1.0"], 1),
    (["0.5", "1.5"], 2),
    (["0.25", "0.3"], 20),
])
def test_fundamental_period(freqs, period):
    assert decimal_gcd_period(freqs) == period
    assert fundamental_period(FrequencyGrid(freqs)) == period


def test_period_times_every_frequency_is_integer():
    p = fundamental_period(STANDARD_GRID)
    assert all((f * p).denominator == 1 for f in STANDARD_GRID.rational)


@pytest.mark.parametrize("freqs, rate", [(STANDARD_TEXT, 22), (["1.0"], 10), (["0.5", "1.5"], 15)])
def test_default_sample_rate(freqs, rate):
    assert default_sample_rate(FrequencyGrid(freqs)) == rate


def test_standard_grid_bins():
    assert grid_bins(STANDARD_GRID).tolist() == [1, 3, 6, 8, 11, 14, 18, 22, 27, 35, 44]


def unit(k, value, m=11):
    v = np.zeros(m, complex)
    v[k] = value
    return Frf(v, STANDARD_GRID)


def test_single_cosine():
    pir = pir_from_frf(unit(0, 1.0), 22)
    t = np.arange(440) / 22
    assert len(pir) == 440 and pir.period == 20
    assert np.allclose(pir.samples, np.cos(2 * np.pi * 0.05 * t), atol=1e-12)


def test_single_sine():
    pir = pir_from_frf(unit(0, 1j), 22)
    t = np.arange(440) / 22
    assert np.allclose(pir.samples, np.sin(2 * np.pi * 0.05 * t), atol=1e-12)


def test_zero_frf():
    pir = pir_from_frf(Frf(np.zeros(11), STANDARD_GRID))
    assert not pir.samples.any()
    assert not frf_from_pir(pir, STANDARD_GRID).values.any()


def test_matches_loop_form(make_set):
    frf = make_set(1, 3)[0]
    t = np.arange(440) / 22
    assert np.allclose(pir_from_frf(frf).samples, eq1_direct(frf.values, STANDARD_GRID.freqs, t),
                       atol=1e-11)


def test_inverse_of_cosine():
    t = np.arange(440) / 22
    pir = Pir(np.cos(2 * np.pi * 0.05 * t), 22, 20)
    expected = np.zeros(11, complex)
    expected[0] = 1
    assert np.allclose(frf_from_pir(pir, STANDARD_GRID).values, expected, atol=1e-12)


def test_non_commensurate_rate():
    with pytest.raises(ValidationError):
        pir_from_frf(unit(0, 1.0), 22.01)


def test_rate_below_nyquist():
    with pytest.raises(ValidationError):
        pir_from_frf(unit(0, 1.0), 4.4)


def test_off_bin_grid_frequency():
    pir = pir_from_frf(unit(0, 1.0), 22)
    with pytest.raises(ValidationError):
        frf_from_pir(pir, FrequencyGrid(["0.05", "0.125"]))


complex_vectors = arrays(np.complex128, 11, elements=st.complex_numbers(
    max_magnitude=1e3, allow_nan=False, allow_infinity=False))


@settings(max_examples=60, deadline=None)
@given(complex_vectors, st.sampled_from([22, 23, 44, 50, 22.5]))
def test_round_trip(values, rate):
    frf = Frf(values, STANDARD_GRID)
    back = frf_from_pir(pir_from_frf(frf, rate), STANDARD_GRID)
    assert np.max(np.abs(back.values - values)) < 1e-9 * max(1.0, np.abs(values).max())


@settings(max_examples=40, deadline=None)
@given(complex_vectors, complex_vectors,
       st.floats(-10, 10, allow_nan=False), st.floats(-10, 10, allow_nan=False))
def test_linearity(h1, h2, a, b):
    x1 = pir_from_frf(Frf(h1, STANDARD_GRID)).samples
    x2 = pir_from_frf(Frf(h2, STANDARD_GRID)).samples
    x12 = pir_from_frf(Frf(a * h1 + b * h2, STANDARD_GRID)).samples
    scale = max(1.0, np.abs(a * x1).max(), np.abs(b * x2).max())
    assert np.max(np.abs(x12 - (a * x1 + b * x2))) <= 1e-12 * scale


def test_periodicity(make_set):
    frf = make_set(1, 5)[0]
    t = np.linspace(0, 20, 97)
    assert np.allclose(evaluate_pir(frf, t), evaluate_pir(frf, t + 20), atol=1e-9)


def test_samples_are_real(make_set):
    x = pirs_from_frfs(make_set(5, 1))
    assert x.dtype == np.float64


def test_batch_round_trip(make_set):
    s = make_set(20, 2)
    back = frfs_from_pirs(pirs_from_frfs(s), 22, STANDARD_GRID)
    assert np.max(np.abs(back.values - s.values)) < 1e-12


class TestFullSpectrum:
    def test_matches_fft_and_is_pure(self, make_set):
        pir = pir_from_frf(make_set(1, 7)[0])
        spec = full_spectrum(pir)
        ref = np.fft.rfft(pir.samples)
        on_grid = np.zeros(ref.shape, bool)
        on_grid[grid_bins(STANDARD_GRID)] = True
        assert np.abs(ref[~on_grid]).max() <= 1e-9 * np.abs(ref).max()
        assert np.abs(spec.values[~on_grid]).max() <= 1e-9 * spec.magnitude.max()
        assert np.allclose(spec.values[on_grid], (2 / 440) * np.conj(ref[on_grid]))

    def test_frequency_axis(self):
        spec = full_spectrum(pir_from_frf(unit(0, 1.0)))
        assert spec.freqs[1] == pytest.approx(0.05)
        assert spec.freqs[-1] == pytest.approx(11.0)

    def test_zero(self):
        spec = full_spectrum(Pir(np.zeros(440), 22, 20))
        assert not spec.magnitude.any()

    def test_single_cosine_one_bin(self):
        spec = full_spectrum(pir_from_frf(unit(3, 1.0)))
        nz = np.flatnonzero(spec.magnitude > 1e-9)
        assert nz.tolist() == [8]
        assert spec.freqs[8] == pytest.approx(0.4)
        assert spec.values[8] == pytest.approx(1.0)


def test_accepts_exact_rate_types():
    frf = unit(1, 2 - 1j)
    a = pir_from_frf(frf, Fraction(22)).samples
    b = pir_from_frf(frf, "22").samples
    assert np.array_equal(a, b)


def test_set_wrapper_grid_mismatch():
    with pytest.raises(ValidationError):
        FrfSet(STANDARD_GRID, np.zeros((2, 10)))
