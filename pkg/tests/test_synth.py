import numpy as np
import pytest
from scipy.signal import hilbert

from frfbands import STANDARD_GRID, FrequencyGrid, ValidationError, lowpass_frf, sample_population
from frfbands.synth import lowpass_magnitude, minimum_phase


def hilbert_phase(magnitude, grid_freqs, rate, n_dense):
    """Minimal phase as minus the Hilbert transform of the log-magnitude."""
    half = np.arange(n_dense // 2 + 1) * rate / n_dense
    log_half = np.interp(half, grid_freqs, np.log(magnitude))
    full = np.concatenate([log_half, log_half[1:n_dense // 2][::-1]])
    phase = -np.imag(hilbert(full))
    return full, phase


def test_lowpass_magnitude_profile():
    mag = lowpass_magnitude(0.4, STANDARD_GRID)
    assert mag.tolist() == [1.0] * 4 + [0.01] * 7


def test_all_pass_has_zero_phase():
    frf = lowpass_frf(5.0, STANDARD_GRID)
    assert np.allclose(frf.values, 1.0, atol=1e-12)


@pytest.mark.parametrize("cutoff", [0.4, 0.75, 1.5])
def test_minimum_phase_matches_hilbert_oracle(cutoff):
    mag = lowpass_magnitude(cutoff, STANDARD_GRID)
    _, phase = hilbert_phase(mag, STANDARD_GRID.freqs, 22, 1320)
    bins = np.round(STANDARD_GRID.freqs * 1320 / 22).astype(int)
    assert np.max(np.abs(minimum_phase(mag, STANDARD_GRID) - phase[bins])) < 0.05


def test_oracle_sign_gives_causal_response():
    mag = lowpass_magnitude(0.4, STANDARD_GRID)
    log_mag, phase = hilbert_phase(mag, STANDARD_GRID.freqs, 22, 1320)
    h = np.fft.ifft(np.exp(log_mag + 1j * phase))
    # energy sits at small positive lags, none just before t = 0
    assert np.abs(h[-20:]).max() < 1e-3 * np.abs(h[:20]).max()


def test_lowpass_frf_magnitude():
    frf = lowpass_frf(0.4, STANDARD_GRID)
    assert np.allclose(np.abs(frf.values), [1.0] * 4 + [0.01] * 7)


def test_minimum_phase_needs_positive_magnitude():
    with pytest.raises(ValidationError):
        minimum_phase(np.zeros(11), STANDARD_GRID)


def test_zero_noise():
    template = lowpass_frf(0.4, STANDARD_GRID)
    pop = sample_population(template, 0.0, 5, seed=1)
    assert np.array_equal(pop.values, np.repeat(template.values[None], 5, axis=0))


def test_dataset_shape():
    groups = [sample_population(lowpass_frf(c, STANDARD_GRID), 0.5, 50, seed=s)
              for s, c in enumerate((0.4, 0.75))]
    assert [g.values.shape for g in groups] == [(50, 11)] * 2


def test_law_of_large_numbers():
    template = lowpass_frf(0.4, STANDARD_GRID)
    pop = sample_population(template, 0.5, 10_000, seed=3)
    err = pop.values.mean(axis=0) - template.values
    bound = 3 * 0.5 / np.sqrt(10_000)
    assert np.all(np.abs(err.real) < bound) and np.all(np.abs(err.imag) < bound)


def test_noise_scale_per_component():
    template = lowpass_frf(0.4, STANDARD_GRID)
    pop = sample_population(template, 0.5, 4000, seed=4)
    std = (pop.values - template.values).real.std()
    assert std == pytest.approx(0.5, rel=0.05)
    pop = sample_population(template, 0.5, 4000, seed=4, per_component=False)
    assert np.sqrt(np.mean(np.abs(pop.values - template.values) ** 2)) == pytest.approx(0.5, rel=0.05)


def test_members_prefix_stable():
    template = lowpass_frf(0.4, STANDARD_GRID)
    a = sample_population(template, 0.5, 3, seed=9)
    b = sample_population(template, 0.5, 6, seed=9)
    assert np.array_equal(a.values, b.values[:3])


def test_phase_after_noise():
    template = lowpass_frf(0.4, STANDARD_GRID)
    pop = sample_population(template, 0.5, 3, seed=1, min_phase_after_noise=True)
    for row in pop.values:
        assert np.allclose(np.angle(row), minimum_phase(np.abs(row), STANDARD_GRID))


def test_other_grid():
    grid = FrequencyGrid(["0.5", "1", "1.5"])
    frf = lowpass_frf(1.0, grid)
    assert np.allclose(np.abs(frf.values), [1, 1, 0.01])
