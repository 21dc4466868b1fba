"""Hadamard-test probes of wavelet energy.

Phase probes encode an atom as ``diag(exp(i theta psi[n]))``; reflection
probes use ``I - 2|u><u|`` for a unit wavelet vector ``u``. Both are read out
through the single-ancilla interference circuit ``H - controlled U - H``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .sim import EncodedState
from .wavelets import NdwtTable, WaveletMatrix, as_filter, build_W_matrix, check_size

__all__ = [
    "WaveletAtom",
    "PhaseUnitary",
    "ReflectionUnitary",
    "HadamardEstimate",
    "SpectrumFit",
    "make_atom",
    "phase_unitary",
    "reflection_unitary",
    "atom_reflection",
    "hadamard_exact",
    "hadamard_circuit",
    "hadamard_shots",
    "energy_from_expectation",
    "coefficient_energy",
    "scalogram",
    "energy_spectrum",
    "fit_spectrum",
    "DEFAULT_THETA",
]

DEFAULT_THETA = 0.05
SMALL_ANGLE_LIMIT = 0.3


@dataclass(frozen=True)
class WaveletAtom:
    j: int
    k: int
    values: np.ndarray


def make_atom(f, N: int, j: int, k: int) -> WaveletAtom:
    """Level-j analysis row of the periodic DWT, circularly shifted by k.

    ``<atom(j, k), v>`` equals the stationary coefficient ``d_j[k]``.
    """
    f = as_filter(f)
    n = check_size(N, 0)
    if not 1 <= j <= n:
        raise ValueError(f"scale {j} out of range 1..{n}")
    if not 0 <= k < N:
        raise ValueError(f"shift {k} out of range 0..{N - 1}")
    W = build_W_matrix(N, f, j).entries
    mother = W[N >> j]
    return WaveletAtom(j, k, np.roll(mother, k))


@dataclass(frozen=True)
class PhaseUnitary:
    phases: np.ndarray
    theta: float

    def diagonal(self) -> np.ndarray:
        return np.exp(1j * self.phases)

    def apply(self, y: np.ndarray) -> np.ndarray:
        return self.diagonal() * y

    @property
    def dim(self) -> int:
        return len(self.phases)


def phase_unitary(atom: WaveletAtom, theta: float = DEFAULT_THETA) -> PhaseUnitary:
    return PhaseUnitary(theta * np.asarray(atom.values), theta)


@dataclass(frozen=True)
class ReflectionUnitary:
    """``I - 2 |u><u|``; `matrix` is kept when built from an explicit product."""

    vector: np.ndarray
    matrix: np.ndarray | None = None

    def apply(self, y: np.ndarray) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix @ y
        u = self.vector
        return y - 2 * u * np.vdot(u, y)

    @property
    def dim(self) -> int:
        return len(self.vector)


def reflection_unitary(Wm: WaveletMatrix, k: int) -> ReflectionUnitary:
    """``W^T (I - 2|k><k|) W`` built as the dense matrix product."""
    N = Wm.N
    if not 0 <= k < N:
        raise ValueError(f"coefficient index {k} out of range 0..{N - 1}")
    flip = np.eye(N)
    flip[k, k] = -1.0
    W = Wm.entries
    return ReflectionUnitary(W[k].copy(), W.T @ flip @ W)


def atom_reflection(atom: WaveletAtom) -> ReflectionUnitary:
    """Reflection about a stationary atom; its Hadamard energy is ``d_j[k]^2 / ||v||^2``."""
    return ReflectionUnitary(np.asarray(atom.values, dtype=float))


def _vector(y) -> np.ndarray:
    if isinstance(y, EncodedState):
        if y.n_ancilla:
            raise ValueError("Hadamard probes act on a data-only state")
        return y.amplitudes
    v = np.asarray(y, dtype=complex)
    return v / np.linalg.norm(v)


def _overlap(y, U) -> complex:
    v = _vector(y)
    if U.dim != len(v):
        raise ValueError(f"unitary has dimension {U.dim}, state has {len(v)}")
    return complex(np.vdot(v, U.apply(v)))


def hadamard_exact(y, U, part: str = "real") -> float:
    """Ancilla <Z> of the Hadamard test, computed from amplitudes.

    ``part="real"`` gives ``Re<y|U|y>``. ``part="imag"`` inserts S on the
    ancilla before the final H, which yields ``-Im<y|U|y>``.
    """
    z = _overlap(y, U)
    if part == "real":
        return z.real
    if part == "imag":
        return -z.imag
    raise ValueError(f"part must be 'real' or 'imag', got {part!r}")


def hadamard_circuit(y, U, part: str = "real") -> float:
    """Same quantity by simulating the ancilla + data statevector gate by gate."""
    v = _vector(y)
    N = len(v)
    if U.dim != N:
        raise ValueError(f"unitary has dimension {U.dim}, state has {N}")
    psi = np.zeros((2, N), dtype=complex)
    psi[0] = v
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    psi = h @ psi
    psi[1] = U.apply(psi[1])
    if part == "imag":
        psi[1] *= 1j
    elif part != "real":
        raise ValueError(f"part must be 'real' or 'imag', got {part!r}")
    psi = h @ psi
    p0, p1 = np.sum(np.abs(psi) ** 2, axis=1)
    return float(p0 - p1)


@dataclass(frozen=True)
class HadamardEstimate:
    mean: float
    shots: int
    stderr: float
    part: str = "real"

    def to_json_dict(self) -> dict:
        return {"mean": self.mean, "shots": self.shots, "stderr": self.stderr, "part": self.part}


def _stream(seed, key) -> np.random.Generator:
    entropy = [int(seed)] + [int(x) for x in key]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def hadamard_shots(y, U, shots: int, seed: int = 0, part: str = "real", key=()) -> HadamardEstimate:
    """Sample ``shots`` +/-1 ancilla outcomes with ``P(+1) = (1 + <Z>) / 2``.

    The random stream is derived from ``(seed, *key)`` so cells of a
    scalogram can be evaluated in any order with identical results.
    """
    if shots < 1:
        raise ValueError("need at least one shot")
    target = hadamard_exact(y, U, part)
    p_plus = min(max((1.0 + target) / 2.0, 0.0), 1.0)
    n_plus = _stream(seed, key).binomial(shots, p_plus)
    mean = 2.0 * n_plus / shots - 1.0
    stderr = float(np.sqrt(max(1.0 - mean ** 2, 0.0) / shots))
    return HadamardEstimate(mean, shots, stderr, part)


def energy_from_expectation(mean_z: float, theta: float, atom: WaveletAtom | None = None) -> float:
    """Small-angle inversion ``2 (1 - <Z>) / theta^2`` of the phase probe."""
    if theta == 0:
        raise ValueError("theta must be nonzero")
    if atom is not None and abs(theta) * np.max(np.abs(atom.values)) > SMALL_ANGLE_LIMIT:
        warnings.warn(
            f"theta * max|psi| = {abs(theta) * np.max(np.abs(atom.values)):.3f} exceeds "
            f"{SMALL_ANGLE_LIMIT}; the quadratic approximation is poor",
            stacklevel=2,
        )
    return 2.0 * (1.0 - mean_z) / theta ** 2


def coefficient_energy(y, Wm: WaveletMatrix, k: int) -> float:
    """``|(W y)_k|^2`` via the reflection probe: ``(1 - <y|U_k|y>) / 2``."""
    return (1.0 - hadamard_exact(y, reflection_unitary(Wm, k))) / 2.0


def scalogram(y, f, scales, theta: float = DEFAULT_THETA, shots: int | None = None,
              seed: int = 0, probe: str = "phase") -> np.ndarray:
    """Scale-by-shift energy map, one row per entry of `scales`.

    ``probe="phase"`` returns the small-angle estimate of
    ``sum_n |y_n|^2 psi_{j,k}[n]^2``; ``probe="reflection"`` returns
    ``|<psi_{j,k}|y>|^2``, the normalized stationary coefficient energy.
    ``shots=None`` evaluates expectations exactly.
    """
    if probe not in ("phase", "reflection"):
        raise ValueError(f"unknown probe {probe!r}")
    v = _vector(y)
    N = len(v)
    f = as_filter(f)
    out = np.zeros((len(scales), N))
    for r, j in enumerate(scales):
        base = make_atom(f, N, j, 0)
        for k in range(N):
            atom = WaveletAtom(j, k, np.roll(base.values, k))
            U = phase_unitary(atom, theta) if probe == "phase" else atom_reflection(atom)
            if shots is None:
                mz = hadamard_exact(v, U)
            else:
                mz = hadamard_shots(v, U, shots, seed, key=(j, k)).mean
            if probe == "phase":
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    out[r, k] = energy_from_expectation(mz, theta, atom)
            else:
                out[r, k] = (1.0 - mz) / 2.0
    return out


@dataclass(frozen=True)
class SpectrumFit:
    energies: np.ndarray
    slope: float
    intercept: float
    fit_range: tuple

    def to_json_dict(self) -> dict:
        return {
            "E": self.energies.tolist(),
            "slope": self.slope,
            "intercept": self.intercept,
            "fit_range": list(self.fit_range),
        }


def fit_spectrum(energies, fit_range: tuple | None = None) -> SpectrumFit:
    """Least-squares line through ``(j, log2 E_j)``, j counted from 1.

    `fit_range` is an inclusive (j_min, j_max); by default all detail levels
    except the two coarsest, whose support wraps around the whole record.
    """
    E = np.asarray(energies, dtype=float)
    L = len(E)
    if fit_range is None:
        fit_range = (1, L - 2) if L >= 4 else (1, L)
    lo, hi = fit_range
    if not 1 <= lo < hi <= L:
        raise ValueError(f"fit range {fit_range} must span at least two levels within 1..{L}")
    sel = E[lo - 1:hi]
    if np.any(sel <= 0):
        raise ValueError("zero level energy inside the fit range")
    j = np.arange(lo, hi + 1)
    slope, intercept = np.polyfit(j, np.log2(sel), 1)
    return SpectrumFit(E, float(slope), float(intercept), (lo, hi))


def energy_spectrum(table: NdwtTable, fit_range: tuple | None = None) -> SpectrumFit:
    """Level energies ``E_j = mean(d_j^2)`` of a stationary table, with the log2 fit."""
    return fit_spectrum([np.mean(np.abs(d) ** 2) for d in table.d], fit_range)
