"""Wavelet-domain attenuation as CPTP maps and their dilations.

Gains are per detail level, ``gains[j-1]`` for level j; the scaling block is
never attenuated. Three modes:

``dephase``
    phase damping with per-index strength ``1 - g^2`` (diagonal untouched).
``damp-to-sink``
    amplitude damping that moves the removed mass into one scaling-block index.
``dilation-postselect``
    one-qubit rotation dilation, keep-branch postselected: linear shrinkage.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import prepare_qndwt
from .sim import (
    DensityOperator,
    EncodedState,
    KrausChannel,
    _uncompute_hadamard,
    inverse_controlled_shift,
    inverse_wavelet_unitary,
)
from .wavelets import (
    DwtCoeffs,
    as_filter,
    block_slice,
    build_W_matrix,
    check_size,
    circular_shift,
    dwt_forward,
    dwt_inverse,
)

__all__ = [
    "MODES",
    "AttenuationSpec",
    "ShrinkResult",
    "index_gains",
    "phase_damping_channel",
    "amplitude_damping_to_sink",
    "attenuation_channel",
    "rotation_dilation",
    "sink_dilation",
    "dephasing_dilation",
    "dilation_kraus",
    "dilation_shrink",
    "shrink_denoise",
    "cycle_spin_shrink",
]

MODES = ("dephase", "damp-to-sink", "dilation-postselect")
_MIN_POSTSELECT = 1e-12


@dataclass(frozen=True)
class AttenuationSpec:
    """Per-level gains, or an explicit per-index schedule in `per_index`."""

    gains: tuple = ()
    mode: str = "dilation-postselect"
    per_index: tuple | None = None

    def __post_init__(self):
        g = tuple(float(x) for x in self.gains)
        if any(not 0.0 <= x <= 1.0 for x in g):
            raise ValueError(f"gains must lie in [0, 1], got {g}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; choose from {', '.join(MODES)}")
        object.__setattr__(self, "gains", g)
        if self.per_index is not None:
            p = tuple(float(x) for x in self.per_index)
            if any(not 0.0 <= x <= 1.0 for x in p):
                raise ValueError("per-index gains must lie in [0, 1]")
            object.__setattr__(self, "per_index", p)

    def to_json_dict(self) -> dict:
        return {"gains": list(self.gains), "mode": self.mode}


def index_gains(spec, N: int, L: int) -> np.ndarray:
    """Per-basis-index gain vector in the ``[s_L | w_L | ... | w_1]`` layout.

    `spec` is an :class:`AttenuationSpec` or a sequence of per-level gains.
    Gains listed beyond level L must be 1.
    """
    check_size(N, L)
    if isinstance(spec, AttenuationSpec) and spec.per_index is not None:
        if len(spec.per_index) != N:
            raise ValueError(f"per-index schedule has length {len(spec.per_index)}, expected {N}")
        return np.array(spec.per_index)
    gains = spec.gains if isinstance(spec, AttenuationSpec) else spec
    gains = np.asarray(gains, dtype=float)
    if len(gains) > L:
        if np.any(gains[L:] != 1.0):
            raise ValueError(f"{len(gains)} gains given for a depth-{L} transform")
        gains = gains[:L]
    out = np.ones(N)
    for j, g in enumerate(gains, start=1):
        out[block_slice(N, L, j)] = g
    return out


def _basis(basis, d):
    return np.eye(d) if basis is None else np.asarray(basis)


def phase_damping_channel(lam, dim: int | None = None, basis=None) -> KrausChannel:
    """Phase damping in an orthonormal basis (columns of `basis`).

    Kraus set ``{diag(sqrt(1 - lam_i)), sqrt(lam_i) |b_i><b_i|}``. Populations in
    the basis are unchanged; coherence (i, l) is scaled by
    ``sqrt((1 - lam_i)(1 - lam_l))``. A scalar `lam` damps every coherence by
    ``1 - lam``.
    """
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=float))
    if dim is None:
        dim = len(lam_arr) if lam_arr.size > 1 else (None if basis is None else np.asarray(basis).shape[0])
        if dim is None:
            raise ValueError("dimension required for a scalar damping strength")
    lam_arr = np.broadcast_to(lam_arr, (dim,))
    if np.any(lam_arr < 0) or np.any(lam_arr > 1):
        raise ValueError("damping strength must lie in [0, 1]")
    B = _basis(basis, dim)
    ops = [B @ np.diag(np.sqrt(1 - lam_arr)) @ B.conj().T]
    for i in np.flatnonzero(lam_arr > 0):
        b = B[:, i]
        ops.append(np.sqrt(lam_arr[i]) * np.outer(b, b.conj()))
    return KrausChannel(tuple(ops))


def amplitude_damping_to_sink(spec, N: int, L: int, sink: int = 0) -> KrausChannel:
    """``{diag(g), sqrt(1 - g_k^2) |sink><k|}``; the sink must keep gain 1."""
    g = index_gains(spec, N, L)
    if not 0 <= sink < N:
        raise ValueError(f"sink index {sink} out of range")
    if g[sink] != 1.0:
        raise ValueError(f"sink index {sink} lies inside an attenuated block")
    ops = [np.diag(g).astype(complex)]
    for k in np.flatnonzero(g < 1.0):
        E = np.zeros((N, N), dtype=complex)
        E[sink, k] = np.sqrt(1 - g[k] ** 2)
        ops.append(E)
    return KrausChannel(tuple(ops))


def attenuation_channel(spec: AttenuationSpec, N: int, L: int, sink: int = 0) -> KrausChannel:
    g = index_gains(spec, N, L)
    if spec.mode == "dephase":
        return phase_damping_channel(1 - g ** 2)
    if spec.mode == "damp-to-sink":
        return amplitude_damping_to_sink(spec, N, L, sink)
    raise ValueError("postselected dilation is not trace preserving; use dilation_shrink")


# --- dilations: joint unitaries on data (x) environment, environment starts in |0>

def _dilation_from_isometry(cols: np.ndarray, d: int, e: int) -> np.ndarray:
    # cols[:, i] is U(|i>|0>); the remaining columns span the orthogonal complement
    D = d * e
    u, _, _ = np.linalg.svd(cols, full_matrices=True)
    U = np.zeros((D, D), dtype=complex)
    first = np.arange(d) * e
    U[:, first] = cols
    U[:, np.setdiff1d(np.arange(D), first)] = u[:, d:]
    return U


def rotation_dilation(gains) -> np.ndarray:
    """``|i>|0> -> |i>(g_i|0> + sqrt(1-g_i^2)|1>)`` on data (x) one qubit."""
    g = np.asarray(gains, dtype=float)
    d = len(g)
    U = np.zeros((2 * d, 2 * d))
    c, s = g, np.sqrt(1 - g ** 2)
    for i in range(d):
        U[2 * i, 2 * i], U[2 * i + 1, 2 * i] = c[i], s[i]
        U[2 * i, 2 * i + 1], U[2 * i + 1, 2 * i + 1] = -s[i], c[i]
    return U


def sink_dilation(gains, sink: int = 0) -> np.ndarray:
    """``|i>|0> -> g_i|i>|0> + sqrt(1-g_i^2)|sink>|i+1>``; environment has d+1 levels."""
    g = np.asarray(gains, dtype=float)
    d, e = len(g), len(g) + 1
    cols = np.zeros((d * e, d), dtype=complex)
    for i in range(d):
        cols[i * e, i] = g[i]
        cols[sink * e + i + 1, i] += np.sqrt(1 - g[i] ** 2)
    return _dilation_from_isometry(cols, d, e)


def dephasing_dilation(lam) -> np.ndarray:
    """``|i>|0> -> |i>(sqrt(1-lam_i)|0> + sqrt(lam_i)|i+1>)``; environment has d+1 levels."""
    lam = np.asarray(lam, dtype=float)
    d, e = len(lam), len(lam) + 1
    cols = np.zeros((d * e, d), dtype=complex)
    for i in range(d):
        cols[i * e, i] = np.sqrt(1 - lam[i])
        cols[i * e + i + 1, i] = np.sqrt(lam[i])
    return _dilation_from_isometry(cols, d, e)


def dilation_kraus(U: np.ndarray, d: int, e: int) -> KrausChannel:
    """``E_b = (I (x) <b|) U (I (x) |0>)`` for a joint unitary on data (x) environment."""
    T = np.asarray(U).reshape(d, e, d, e)
    return KrausChannel(tuple(T[:, b, :, 0] for b in range(e)))


@dataclass(frozen=True)
class ShrinkResult:
    """Output of :func:`dilation_shrink`.

    `state` is the renormalized pure state when postselected, otherwise
    `density` holds the mixed state with the shrink qubit traced out.
    """

    state: EncodedState | None
    density: DensityOperator | None
    postselect_prob: float
    attempts: int | None = None


def dilation_shrink(state: EncodedState, spec, postselect: bool = True, seed=None,
                    levels: int | None = None) -> ShrinkResult:
    """Attenuate a wavelet-domain state through a one-qubit rotation dilation.

    The same rotation acts in every shift sector. With `postselect`, the keep
    branch is projected out and renormalized; `seed` additionally simulates
    repeat-until-success and reports the number of attempts.
    """
    L = state.n_ancilla if levels is None else levels
    g = index_gains(spec, state.N, L)
    sec = state.sectors
    keep = sec * g[None, :]
    drop = sec * np.sqrt(1 - g ** 2)[None, :]
    p = float(np.sum(np.abs(keep) ** 2))
    if not postselect:
        a = keep.reshape(-1)
        b = drop.reshape(-1)
        dims = (sec.shape[0], state.N) if state.n_ancilla else (state.N,)
        rho = np.outer(a, a.conj()) + np.outer(b, b.conj())
        return ShrinkResult(None, DensityOperator(rho, dims), p)
    if p < _MIN_POSTSELECT:
        raise ValueError(f"postselection probability {p:.3e} is too small")
    attempts = None
    if seed is not None:
        attempts = int(np.random.default_rng(seed).geometric(p))
    return ShrinkResult(state.with_sectors(keep / np.sqrt(p)), None, p, attempts)


def shrink_denoise(x, f, L: int, spec, full_output: bool = False):
    """Forward QNDWT, postselected shrinkage, inverse QNDWT, shift average.

    The shift average is the data branch left when the shift register is
    returned to |0...0> by a second Hadamard layer. Amplitude bookkeeping
    (stored norm, postselection probability, affine rescale) maps the result
    back to the units of `x`.
    """
    if isinstance(spec, AttenuationSpec) and spec.mode != "dilation-postselect":
        raise ValueError("signal reconstruction needs the postselected linear mode")
    f = as_filter(f)
    x = np.asarray(x, dtype=float)
    Wm = build_W_matrix(len(x), f, L)
    st = prepare_qndwt(x, f, L, Wm)
    res = dilation_shrink(st, spec, postselect=True)
    back = inverse_controlled_shift(inverse_wavelet_unitary(res.state, Wm))
    branch = _uncompute_hadamard(back)
    v = np.real(branch) * st.norm * np.sqrt(res.postselect_prob)
    out = st.unscale(v)
    if full_output:
        return out, {"postselect_prob": res.postselect_prob, "norm": st.norm}
    return out


def cycle_spin_shrink(x, f, L: int, spec) -> np.ndarray:
    """Classical translation-invariant linear shrinkage: shift, DWT, scale, invert, unshift, average."""
    f = as_filter(f)
    x = np.asarray(x, dtype=float)
    g = index_gains(spec, len(x), L)
    acc = np.zeros_like(x)
    for e in range(1 << L):
        c = dwt_forward(circular_shift(x, e), f, L).flat() * g
        acc += circular_shift(dwt_inverse(DwtCoeffs.from_flat(c, L), f), -e)
    return acc / (1 << L)
