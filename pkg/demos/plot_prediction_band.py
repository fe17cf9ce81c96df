"""
Prediction band and leave-one-out coverage
==========================================

A prediction band should contain a new member of the population with the
chosen probability. Leaving each member out in turn and testing it against
the band of the others gives an empirical check of that claim.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from frfbands import STANDARD_GRID, loo_coverage, lowpass_frf, pirs_from_frfs, prediction_band, sample_population

population = sample_population(lowpass_frf(0.4, STANDARD_GRID), noise_sigma=0.5, n=40, seed=11)
band = prediction_band(population, alpha=95, replicates=2000, seed=1)
print(f"C_p = {band.constant:.3f}")

# each held-out member against the band of the rest; B is kept small for speed
print(f"leave-one-out coverage: {loo_coverage(population, 95, replicates=1000, seed=2):.3f}")

fig, (ax_band, ax_hist) = plt.subplots(1, 2, figsize=(11, 4))
for x in pirs_from_frfs(population):
    ax_band.plot(band.time, x, color="0.8", lw=0.5)
ax_band.plot(band.time, band.avg, "k")
ax_band.fill_between(band.time, band.lower, band.upper, alpha=0.3)
ax_band.set_xlabel("time (s)")

# the constant is read off the cumulative histogram of the statistics
ax_hist.plot(band.histogram_values, band.chist)
ax_hist.axvline(band.constant, ls="--")
ax_hist.axhline(0.95, ls=":")
ax_hist.set_xlabel("max standardized deviation")
fig.tight_layout()
fig.savefig("prediction_band.svg")
