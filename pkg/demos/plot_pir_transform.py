"""
From an FRF to its pseudo-impulse response and back
====================================================

A frequency response function sampled on a handful of frequencies maps to a
real periodic signal, the pseudo-impulse response (PIR). The DFT of that
signal at the same frequencies returns the FRF unchanged.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from frfbands import STANDARD_GRID, frf_from_pir, full_spectrum, lowpass_frf, pir_from_frf

# a low-pass FRF with minimal phase on the standard 11-frequency grid
frf = lowpass_frf(0.4, STANDARD_GRID)

# the grid period is 20 s; the default sample rate is ten times the top frequency
pir = pir_from_frf(frf)
print(f"{len(pir)} samples at {pir.sample_rate} Hz over {pir.period} s")

# the DFT at the grid bins recovers the FRF
back = frf_from_pir(pir, STANDARD_GRID)
print("round-trip error:", np.max(np.abs(back.values - frf.values)))

# every other bin of the full spectrum is empty
spec = full_spectrum(pir)

fig, (ax_t, ax_f) = plt.subplots(2, 1, figsize=(7, 6))
ax_t.plot(pir.time, pir.samples)
ax_t.set_xlabel("time (s)")
ax_t.set_ylabel("PIR")
ax_f.semilogy(spec.freqs, np.maximum(spec.magnitude, 1e-18), ".", ms=3)
ax_f.semilogy(STANDARD_GRID.freqs, np.abs(frf.values), "o", mfc="none", label="FRF gain")
ax_f.set_xlim(0, 3)
ax_f.set_xlabel("frequency (Hz)")
ax_f.legend()
fig.tight_layout()
fig.savefig("pir_transform.svg")
