"""Dense statevector / density-matrix simulator for ancilla (x) data registers.

Global basis index is ``eps * 2**n_data + k``: the ancilla occupies the high
bits. States and operators are treated as immutable values; every operation
returns a new object.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .wavelets import WaveletMatrix

__all__ = [
    "EncodedState",
    "DensityOperator",
    "KrausChannel",
    "amplitude_encode",
    "attach_ancilla",
    "hadamard_layer",
    "controlled_shift",
    "wavelet_unitary",
    "inverse_wavelet_unitary",
    "inverse_controlled_shift",
    "to_density",
    "partial_trace_ancilla",
    "partial_trace",
    "apply_kraus",
    "expect_observable",
    "embed_operator",
]

_ATOL_NORM = 1e-12


@dataclass(frozen=True)
class EncodedState:
    """Amplitude-encoded signal, optionally with an L-qubit shift register.

    `norm` is the Euclidean norm of the rescaled signal ``v`` and `affine`
    the pair (scale, offset) with ``v = scale * x + offset``.
    """

    amplitudes: np.ndarray
    n_ancilla: int
    n_data: int
    norm: float = 1.0
    affine: tuple = (1.0, 0.0)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (1 << (self.n_ancilla + self.n_data),):
            raise ValueError(
                f"expected {1 << (self.n_ancilla + self.n_data)} amplitudes, got shape {amps.shape}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def N(self) -> int:
        return 1 << self.n_data

    @property
    def sectors(self) -> np.ndarray:
        """Amplitudes as a (2**n_ancilla, N) array, one row per shift sector."""
        return self.amplitudes.reshape(1 << self.n_ancilla, self.N)

    def with_sectors(self, sectors: np.ndarray) -> "EncodedState":
        return replace(self, amplitudes=np.asarray(sectors).reshape(-1))

    def ancilla_marginal(self) -> np.ndarray:
        return np.sum(np.abs(self.sectors) ** 2, axis=1)

    def unscale(self, v) -> np.ndarray:
        """Map rescaled values back to the original signal units."""
        scale, offset = self.affine
        return (np.asarray(v) - offset) / scale


def amplitude_encode(x) -> EncodedState:
    """Rescale `x` affinely onto [-1, 1] and normalize to a unit vector."""
    x = np.asarray(x, dtype=float)
    N = len(x)
    n = N.bit_length() - 1
    if N < 1 or (1 << n) != N:
        raise ValueError(f"signal length {N} is not a power of two")
    lo, hi = x.min(), x.max()
    if hi == lo:
        raise ValueError("cannot rescale a constant signal to [-1, 1]")
    scale = 2.0 / (hi - lo)
    offset = -1.0 - scale * lo
    v = scale * x + offset
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ValueError("rescaled signal has zero norm")
    return EncodedState(v / norm, 0, n, norm, (scale, offset))


def attach_ancilla(st: EncodedState, L: int) -> EncodedState:
    """Tensor an L-qubit register in |0...0> onto the high bits."""
    sec = np.zeros(((1 << L) << st.n_ancilla, st.N), dtype=complex)
    sec[: 1 << st.n_ancilla] = st.sectors
    return replace(st, amplitudes=sec.reshape(-1), n_ancilla=st.n_ancilla + L)


def hadamard_layer(st: EncodedState) -> EncodedState:
    """H on every ancilla qubit; the ancilla must start in |0...0>."""
    sec = st.sectors
    if st.n_ancilla and np.max(np.abs(sec[1:])) > _ATOL_NORM:
        raise ValueError("ancilla register is not in the ground state")
    out = np.repeat(sec[:1], sec.shape[0], axis=0) / np.sqrt(sec.shape[0])
    return st.with_sectors(out)


def _uncompute_hadamard(st: EncodedState) -> np.ndarray:
    # <0...0| H^{(x)L} on the ancilla: data amplitudes of the |0> ancilla branch
    return st.sectors.sum(axis=0) / np.sqrt(st.sectors.shape[0])


def controlled_shift(st: EncodedState, sign: int = 1) -> EncodedState:
    """Sector eps gets ``a[k] <- a[(k - sign*eps) mod N]``."""
    sec = st.sectors
    out = np.empty_like(sec)
    for e in range(sec.shape[0]):
        out[e] = np.roll(sec[e], sign * e)
    return st.with_sectors(out)


def inverse_controlled_shift(st: EncodedState) -> EncodedState:
    return controlled_shift(st, sign=-1)


def wavelet_unitary(st: EncodedState, Wm: WaveletMatrix) -> EncodedState:
    """``I (x) W``: one application of W across all sectors."""
    if Wm.N != st.N:
        raise ValueError(f"wavelet matrix is {Wm.N}x{Wm.N} but data register has dimension {st.N}")
    return st.with_sectors(Wm.apply(st.sectors))


def inverse_wavelet_unitary(st: EncodedState, Wm: WaveletMatrix) -> EncodedState:
    if Wm.N != st.N:
        raise ValueError(f"wavelet matrix is {Wm.N}x{Wm.N} but data register has dimension {st.N}")
    return st.with_sectors(Wm.apply_inverse(st.sectors))


@dataclass(frozen=True)
class DensityOperator:
    """Density matrix with its register split, e.g. ``dims=(2**L, N)``."""

    matrix: np.ndarray
    dims: tuple

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        d = int(np.prod(self.dims))
        if m.shape != (d, d):
            raise ValueError(f"matrix shape {m.shape} does not match dims {self.dims}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", tuple(int(x) for x in self.dims))

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def diagonal(self) -> np.ndarray:
        return np.real(np.diag(self.matrix)).copy()

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


def to_density(st: EncodedState) -> DensityOperator:
    a = st.amplitudes
    dims = (1 << st.n_ancilla, st.N) if st.n_ancilla else (st.N,)
    return DensityOperator(np.outer(a, a.conj()), dims)


def partial_trace(rho: DensityOperator, keep: Sequence[int]) -> DensityOperator:
    """Trace out every subsystem not listed in `keep`."""
    dims = rho.dims
    k = len(dims)
    keep = sorted(keep)
    t = rho.matrix.reshape(dims + dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:k])
    col = [row[i] if i not in keep else letters[k + i] for i in range(k)]
    out = [row[i] for i in keep] + [col[i] for i in keep]
    res = np.einsum("".join(row) + "".join(col) + "->" + "".join(out), t)
    kd = tuple(dims[i] for i in keep)
    d = int(np.prod(kd))
    return DensityOperator(res.reshape(d, d), kd)


def partial_trace_ancilla(rho) -> DensityOperator:
    """Reduced data-register state; averages coherently over shift sectors."""
    if isinstance(rho, EncodedState):
        sec = rho.sectors
        return DensityOperator(sec.T @ sec.conj(), (rho.N,))
    if len(rho.dims) != 2:
        raise ValueError(f"expected an (ancilla, data) split, got dims {rho.dims}")
    return partial_trace(rho, [1])


@dataclass(frozen=True)
class KrausChannel:
    """Trace-preserving set of Kraus operators; checked on construction."""

    operators: tuple
    atol: float = 1e-10

    def __post_init__(self):
        ops = tuple(np.asarray(E, dtype=complex) for E in self.operators)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        d = ops[0].shape[1]
        s = sum(E.conj().T @ E for E in ops)
        err = np.max(np.abs(s - np.eye(d)))
        if err > self.atol:
            raise ValueError(f"Kraus operators are not trace preserving (max deviation {err:.3e})")
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[1]

    def completeness_error(self) -> float:
        s = sum(E.conj().T @ E for E in self.operators)
        return float(np.max(np.abs(s - np.eye(self.dim))))


def apply_kraus(rho: DensityOperator, ch: KrausChannel, target: int | None = None) -> DensityOperator:
    """``rho -> sum_k E_k rho E_k^dagger``, optionally on one subsystem."""
    if target is None:
        if ch.dim != rho.matrix.shape[0]:
            raise ValueError(f"channel acts on dimension {ch.dim}, state has {rho.matrix.shape[0]}")
        out = sum(E @ rho.matrix @ E.conj().T for E in ch.operators)
        return DensityOperator(out, rho.dims)
    dims = rho.dims
    if ch.dim != dims[target]:
        raise ValueError(f"channel acts on dimension {ch.dim}, subsystem {target} has {dims[target]}")
    t = rho.matrix.reshape(dims + dims)
    k = len(dims)
    out = np.zeros_like(t)
    for E in ch.operators:
        x = np.moveaxis(np.tensordot(E, t, axes=([1], [target])), 0, target)
        x = np.moveaxis(np.tensordot(x, E.conj(), axes=([k + target], [1])), -1, k + target)
        out += x
    d = rho.matrix.shape[0]
    return DensityOperator(out.reshape(d, d), dims)


def embed_operator(op: np.ndarray, dims: Sequence[int], target: int) -> np.ndarray:
    """Kronecker-embed `op` on subsystem `target` with identities elsewhere."""
    out = np.ones((1, 1))
    for i, d in enumerate(dims):
        out = np.kron(out, op if i == target else np.eye(d))
    return out


def expect_observable(rho: DensityOperator, O) -> float:
    """Tr(O rho) for Hermitian O."""
    O = np.asarray(O)
    if O.shape != rho.matrix.shape:
        raise ValueError(f"observable shape {O.shape} does not match state {rho.matrix.shape}")
    if np.max(np.abs(O - O.conj().T)) > 1e-12:
        raise ValueError("observable is not Hermitian")
    return float(np.real(np.sum(O.T * rho.matrix)))
