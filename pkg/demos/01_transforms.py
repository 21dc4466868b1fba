"""Decimated, shifted and stationary wavelet transforms side by side.

A periodic orthogonal DWT depends on where the signal starts: shifting the
input by one sample changes the coefficients. Collecting the DWT of every
circular shift (the "epsilon library") and re-indexing it gives the
undecimated, shift-invariant a trous transform.
"""
import numpy as np

from qndwt import align_epsilon_to_ndwt, circular_shift, dwt_forward, epsilon_library, ndwt_atrous

np.set_printoptions(precision=4, suppress=True, linewidth=110)

x = np.array([1.0, 3.0, 2.0, 5.0, 4.0, 4.0, 0.0, 1.0])
L = 2

# %% The decimated transform is not shift invariant
print("DWT of x           :", dwt_forward(x, "haar", L).flat())
print("DWT of x shifted 1 :", dwt_forward(circular_shift(x, 1), "haar", L).flat())

# %% One DWT per shift: rows of the epsilon library
lib = epsilon_library(x, "haar", L)
print("\nepsilon library (one row per shift):")
print(lib.rows)

# %% Re-indexing the library reproduces the a trous table exactly
table = ndwt_atrous(x, "haar", L)
aligned = align_epsilon_to_ndwt(lib)
print("\na trous table (d1, d2, a2):")
print(table.as_array())
print("max |aligned - a trous| =", np.abs(aligned.as_array() - table.as_array()).max())

# %% Shift invariance of the stationary transform
shifted = ndwt_atrous(circular_shift(x, 3), "haar", L)
print("a trous of shifted x equals shifted table:",
      np.allclose(shifted.as_array(), np.roll(table.as_array(), 3, axis=1)))
