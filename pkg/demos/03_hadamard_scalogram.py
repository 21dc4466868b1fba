"""Reading wavelet information with Hadamard tests.

A Hadamard test estimates Re<y|U|y> from +/-1 outcomes of one control
qubit. With U a small phase rotation along a wavelet atom the result is
close to 1 - theta^2 E / 2, where E is the atom's weighted energy; with U a
reflection about one DWT basis vector it gives 1 - 2 w_k^2 exactly.
"""
import warnings

import numpy as np

from qndwt import (
    build_W_matrix,
    coefficient_energy,
    doppler,
    dwt_forward,
    energy_from_expectation,
    hadamard_exact,
    hadamard_shots,
    make_atom,
    phase_unitary,
    scalogram,
)

np.set_printoptions(precision=4, suppress=True, linewidth=110)

v = doppler(64).samples
y = v / np.linalg.norm(v)

# %% Phase probe: exact value, shot estimate, and small-angle energy
atom = make_atom("db2", 64, 1, 5)
for theta in (0.05, 0.2, 1.0):
    U = phase_unitary(atom, theta)
    exact = hadamard_exact(y, U)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # theta=1 is outside the small-angle regime on purpose
        energy = energy_from_expectation(exact, theta, atom)
    est = hadamard_shots(y, U, 4000, seed=0)
    print(f"theta={theta:4}: exact {exact:.6f}  shots {est.mean:.4f} +/- {est.stderr:.4f}  "
          f"energy estimate {energy:.5f}")
print("true atom energy:", np.sum(y ** 2 * atom.values ** 2))

# %% Reflection probe recovers squared DWT coefficients exactly
Wm = build_W_matrix(64, "haar", 3)
w = dwt_forward(y, "haar", 3).flat()
for k in (0, 10, 40, 63):
    print(f"k={k:2d}: Hadamard energy {coefficient_energy(y, Wm, k):.6f}  w_k^2 {w[k] ** 2:.6f}")

# %% Scalogram: one reflection energy per (scale, position)
S = scalogram(v, "haar", [1, 2, 3], probe="reflection")
# undecimated rows hold every shift, so a level row sums to 2^j times its shift-averaged share
print("\nshift-averaged level shares:", S.sum(axis=1) / 2.0 ** np.arange(1, 4))
print("finest-scale energy peaks at position", int(np.argmax(S[0])), "of 64")
