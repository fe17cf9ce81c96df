"""
Estimating an FRF from a PRTS experiment
========================================

A pseudo-random ternary stimulus excites only odd harmonics of its cycle.
The cross-power ratio per cycle gives raw transfer values at those
frequencies, which are then averaged into a few bands.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from frfbands import (
    STANDARD_GRID,
    PrtsConfig,
    TimeSeries,
    band_average,
    default_band_spec,
    estimate_raw_transfer,
    generate_prts,
)

rate = 50.0
config = PrtsConfig(stages=5, dt=0.25, amplitude_target=1.0)
stimulus = generate_prts(config, cycles=4, sample_rate=rate)
cycle = round(config.cycle_duration * rate)

# a toy sway response: delayed, scaled stimulus plus sensor noise
rng = np.random.default_rng(3)
response = TimeSeries(0.8 * np.roll(stimulus.samples, 10) + 0.02 * rng.normal(size=len(stimulus)), rate)

raw = estimate_raw_transfer(stimulus, response, cycle, discard_first=True)
spec = default_band_spec(raw, STANDARD_GRID)
frf = band_average(raw, spec)
print(f"{len(raw)} excited frequencies averaged into {len(spec)} bands")
for f, h in zip(frf.grid.freqs, frf.values):
    print(f"{f:7.3f} Hz  gain {abs(h):.3f}  phase {np.angle(h):+.3f} rad")

fig, ax = plt.subplots(figsize=(7, 4))
ax.plot(raw.freqs, np.abs(raw.values), ".", ms=3, label="raw")
ax.plot(frf.grid.freqs, np.abs(frf.values), "o-", label="band averaged")
ax.set_xlim(0, 2.6)
ax.set_xlabel("frequency (Hz)")
ax.set_ylabel("gain")
ax.legend()
fig.tight_layout()
fig.savefig("prts_estimation.svg")
