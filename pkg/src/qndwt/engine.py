"""Epsilon-decimated quantum NDWT: preparation, readout, and shift-averaged summaries."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sim import (
    EncodedState,
    amplitude_encode,
    attach_ancilla,
    controlled_shift,
    expect_observable,
    hadamard_layer,
    partial_trace_ancilla,
    wavelet_unitary,
)
from .wavelets import (
    EpsilonLibrary,
    NdwtTable,
    WaveletMatrix,
    as_filter,
    align_epsilon_to_ndwt,
    block_slice,
    build_W_matrix,
    check_size,
)

__all__ = [
    "QndwtResult",
    "prepare_qndwt",
    "run_qndwt",
    "extract_branch",
    "extract_library",
    "sample_branch",
    "sample_shifts",
    "assemble_table",
    "level_projector",
    "level_energy",
    "level_energies",
    "cross_scale_correlation",
    "spectrum_energies",
]


def prepare_qndwt(x, f, L: int, Wm: WaveletMatrix | None = None) -> EncodedState:
    """``2^{-L/2} sum_eps |eps> (x) W S^eps |y>`` from raw samples `x`.

    The circuit is H^{(x)L} on the shift register, the controlled shift, then
    a single application of ``I (x) W``. A prebuilt `Wm` may be supplied.
    """
    f = as_filter(f)
    x = np.asarray(x, dtype=float)
    check_size(len(x), L)
    st = attach_ancilla(amplitude_encode(x), L)
    if Wm is None:
        Wm = build_W_matrix(len(x), f, L)
    st = hadamard_layer(st)
    st = controlled_shift(st)
    return wavelet_unitary(st, Wm)


def extract_branch(state: EncodedState, eps: int, norm: float | None = None) -> np.ndarray:
    """Sector `eps` in rescaled-signal units (amplitudes times 2^{L/2} * norm)."""
    L = state.n_ancilla
    if not 0 <= eps < (1 << L):
        raise ValueError(f"shift {eps} out of range 0..{(1 << L) - 1}")
    norm = state.norm if norm is None else norm
    return np.real(state.sectors[eps]) * np.sqrt(1 << L) * norm


def extract_library(state: EncodedState, norm: float | None = None) -> EpsilonLibrary:
    rows = np.array([extract_branch(state, e, norm) for e in range(1 << state.n_ancilla)])
    return EpsilonLibrary(rows, state.n_ancilla)


def sample_shifts(state: EncodedState, shots: int, seed=None) -> np.ndarray:
    """Computational-basis outcomes of the shift register."""
    p = state.ancilla_marginal()
    rng = np.random.default_rng(seed)
    return rng.choice(len(p), size=shots, p=p / p.sum())


def sample_branch(state: EncodedState, seed=None):
    """Measure the shift register once; return (eps, collapsed branch)."""
    eps = int(sample_shifts(state, 1, seed)[0])
    return eps, extract_branch(state, eps)


def assemble_table(state: EncodedState, norm: float | None = None) -> NdwtTable:
    """Undo the shifts sector by sector and interleave into d_1..d_L, a_L."""
    return align_epsilon_to_ndwt(extract_library(state, norm))


def level_projector(N: int, L: int, j: int) -> np.ndarray:
    P = np.zeros((N, N))
    idx = np.arange(N)[block_slice(N, L, j)]
    P[idx, idx] = 1.0
    return P


def _reduced(obj, levels):
    if isinstance(obj, EncodedState):
        return partial_trace_ancilla(obj), obj.n_ancilla
    if len(obj.dims) == 2:
        L = obj.dims[0].bit_length() - 1
        return partial_trace_ancilla(obj), L
    if levels is None:
        raise ValueError("levels must be given for a data-only density operator")
    return obj, levels


def level_energy(obj, j: int, levels: int | None = None) -> float:
    """Tr(P_j rho_D): the shift-averaged energy fraction of level j.

    `obj` is a QNDWT state, a joint density operator, or a reduced data-register
    density operator (then `levels` is required). ``j = L + 1`` selects the
    scaling block.
    """
    rho_d, L = _reduced(obj, levels)
    N = rho_d.dims[0]
    if not 1 <= j <= L + 1:
        raise ValueError(f"level {j} out of range 1..{L + 1}")
    return expect_observable(rho_d, level_projector(N, L, j))


def level_energies(obj, levels: int | None = None) -> np.ndarray:
    rho_d, L = _reduced(obj, levels)
    return np.array([level_energy(rho_d, j, L) for j in range(1, L + 2)])


def spectrum_energies(state: EncodedState) -> np.ndarray:
    """Per-level mean squared stationary coefficient, read from rho_D.

    Each stationary coefficient of level j appears in 2^(L-j) of the 2^L
    sectors, so ``E_j = 2^j * Tr(P_j rho_D) * norm^2 / N`` (rescaled units).
    """
    L, N = state.n_ancilla, state.N
    lev = level_energies(state)[:L]
    return (2.0 ** np.arange(1, L + 1)) * lev * state.norm ** 2 / N


def cross_scale_correlation(table: NdwtTable, j: int, k: int, j2: int, k2: int, aggregate: bool = False) -> float:
    """``d_j[k] d_j2[k2]``, or its mean over common circular offsets.

    Level ``L + 1`` refers to the scaling sequence a_L.
    """
    a, b = table.level(j), table.level(j2)
    N = table.N
    if not (0 <= k < N and 0 <= k2 < N):
        raise IndexError(f"positions must lie in 0..{N - 1}")
    if not aggregate:
        return float(a[k] * b[k2])
    return float(np.mean(np.roll(a, -k) * np.roll(b, -k2)))


@dataclass(frozen=True)
class QndwtResult:
    state: EncodedState
    per_shift: EpsilonLibrary
    table: NdwtTable
    norm: float
    wavelet: str = ""

    @property
    def level_energies(self) -> np.ndarray:
        return level_energies(self.state)

    def to_json_dict(self) -> dict:
        return {
            "N": self.table.N,
            "L": self.table.L,
            "wavelet": self.wavelet,
            "per_shift": self.per_shift.rows.tolist(),
            "d": [d.tolist() for d in self.table.d],
            "a": self.table.a.tolist(),
            "level_energies": self.level_energies.tolist(),
        }


def run_qndwt(x, f, L: int) -> QndwtResult:
    f = as_filter(f)
    st = prepare_qndwt(x, f, L)
    lib = extract_library(st)
    return QndwtResult(st, lib, align_epsilon_to_ndwt(lib), st.norm, f.name)
