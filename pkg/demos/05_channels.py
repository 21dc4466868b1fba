"""Quantum channels on the transform register.

Attenuating wavelet levels is not unitary, so it is carried out as a quantum
channel: a unitary on the data plus an environment, after which the
environment is discarded. Dephasing the shift ancilla destroys coherence
between shifted copies but leaves the level energies untouched.
"""
import numpy as np

from qndwt import (
    AttenuationSpec,
    apply_kraus,
    amplitude_damping_to_sink,
    dilation_kraus,
    index_gains,
    level_energies,
    partial_trace_ancilla,
    phase_damping_channel,
    prepare_qndwt,
    rotation_dilation,
    to_density,
)

np.set_printoptions(precision=4, suppress=True, linewidth=110)

x = np.random.default_rng(3).standard_normal(16)
st = prepare_qndwt(x, "haar", 2)
rho = to_density(st)

# %% Ancilla dephasing keeps the level energies
deph = apply_kraus(rho, phase_damping_channel(1.0, 4), target=0)
print("level energies before:", level_energies(rho))
print("level energies after :", level_energies(deph))

# %% Reduced data state and a level attenuation channel
rho_d = partial_trace_ancilla(rho)
spec = AttenuationSpec((0.2, 0.6))
print("\ngains per DWT index:", index_gains(spec, 16, 2))
g = index_gains(spec, 16, 2)
channels = {
    "rotation": dilation_kraus(rotation_dilation(g), 16, 2),
    "sink": amplitude_damping_to_sink(spec, 16, 2),
    "dephase": phase_damping_channel(1 - g ** 2),
}
for mode, ch in channels.items():
    out = apply_kraus(rho_d, ch)
    print(f"{mode:8s}: trace {out.trace:.12f}  completeness error {ch.completeness_error():.1e}  "
          f"min eigenvalue {out.eigenvalues().min():.1e}")
