"""Wavelet energy spectrum of fractional Brownian motion.

For fBm with Hurst exponent H the per-coefficient energy at level j grows
like 2^{j(2H+1)}, so a straight-line fit of log2 energy against level
estimates 2H + 1. White noise has a flat spectrum.
"""
import numpy as np

from qndwt import energy_spectrum, fbm, ndwt_atrous, prepare_qndwt, spectrum_energies, fit_spectrum

H, N, L = 1 / 3, 512, 7

# %% Classical route, averaged over seeds
slopes = [energy_spectrum(ndwt_atrous(fbm(N, H, s).samples, "db2", L)).slope for s in range(20)]
print(f"fBm H={H:.3f}: mean slope {np.mean(slopes):.3f} (2H+1 = {2 * H + 1:.3f}), sd {np.std(slopes):.3f}")

noise = [energy_spectrum(ndwt_atrous(np.random.default_rng(s).standard_normal(N), "db2", L)).slope
         for s in range(20)]
print(f"white noise: mean slope {np.mean(noise):.3f}")

# %% Quantum route: the same spectrum from projector expectations on the register
x = fbm(N, H, 0).samples
quantum = fit_spectrum(spectrum_energies(prepare_qndwt(x, "db2", L)))
print("quantum-route slope for seed 0:", round(quantum.slope, 6), " classical:", round(slopes[0], 6))
print("log2 energies per level:", np.round(np.log2(quantum.energies), 3))
