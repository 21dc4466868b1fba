"""Classical periodic wavelet machinery.

Orthogonal DWT with circular boundary handling, the epsilon-decimated library
of shifted transforms, the a trous (stationary) transform, and the position
map that turns the library into the stationary table.

Coefficient layout used throughout is coarse-to-fine::

    [ s_L | w_L | w_{L-1} | ... | w_1 ]

so the level-j detail block of a length-N vector occupies ``[N/2^j, N/2^(j-1))``
and the scaling block occupies ``[0, N/2^L)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

__all__ = [
    "WaveletFilter",
    "WaveletMatrix",
    "DwtCoeffs",
    "EpsilonLibrary",
    "NdwtTable",
    "FILTER_NAMES",
    "make_filter",
    "as_filter",
    "daubechies_lowpass",
    "dwt_forward",
    "dwt_inverse",
    "build_W_matrix",
    "circular_shift",
    "epsilon_library",
    "ndwt_atrous",
    "align_epsilon_to_ndwt",
    "library_from_ndwt",
    "ndwt_inverse_average",
    "block_slice",
    "check_size",
]

# Minimum-phase Daubechies low-pass taps, generated once by daubechies_lowpass()
# and frozen here (tests re-derive them).
_LOWPASS = {
    "haar": (0.7071067811865476, 0.7071067811865476),
    "db2": (
        0.48296291314453416, 0.8365163037378079, 0.2241438680420134,
        -0.1294095225512604,
    ),
    "db3": (
        0.33267055295008285, 0.8068915093110931, 0.45987750211849154,
        -0.13501102001025506, -0.08544127388202688, 0.035226291885709554,
    ),
    "db4": (
        0.2303778133088961, 0.7148465705529146, 0.6308807679298587,
        -0.02798376941685878, -0.18703481171909234, 0.03084138183556067,
        0.032883011666885106, -0.010597401785068999,
    ),
}
FILTER_NAMES = tuple(_LOWPASS)


@dataclass(frozen=True)
class WaveletFilter:
    """Orthogonal two-channel filter pair.

    ``g[i] = (-1)**i * h[support - 1 - i]``; analysis is by correlation,
    ``s[k] = sum_i h[i] y[2k + i]`` and ``w[k] = sum_i g[i] y[2k + i]``.
    """

    name: str
    h: np.ndarray
    g: np.ndarray

    @property
    def support(self) -> int:
        return len(self.h)


def daubechies_lowpass(p: int) -> np.ndarray:
    """Solve for the minimum-phase Daubechies filter with `p` vanishing moments.

    Spectral factorization of ``P(y) = sum_k C(p-1+k, k) y^k`` with
    ``y = (2 - z - 1/z) / 4``; roots inside the unit circle are kept.
    """
    if p < 1:
        raise ValueError("need at least one vanishing moment")
    quad = np.zeros(2 * p - 1)
    for k in range(p):
        term = np.array([1.0])
        for _ in range(k):
            term = np.convolve(term, np.array([-1.0, 2.0, -1.0]) / 4)
        term = np.concatenate([term, np.zeros(p - 1 - k)])
        quad[-len(term):] += comb(p - 1 + k, k) * term
    roots = np.roots(quad) if p > 1 else np.array([])
    roots = roots[np.abs(roots) < 1]
    h = np.real(np.poly(roots)) if len(roots) else np.array([1.0])
    for _ in range(p):
        h = np.convolve(h, [1.0, 1.0])
    return h * np.sqrt(2) / h.sum()


def make_filter(name: str) -> WaveletFilter:
    key = name.lower()
    if key == "db1":
        key = "haar"
    if key not in _LOWPASS:
        raise ValueError(f"unknown wavelet {name!r}; choose from {', '.join(FILTER_NAMES)}")
    h = np.array(_LOWPASS[key])
    g = h[::-1] * (-1.0) ** np.arange(len(h))
    h.setflags(write=False)
    g.setflags(write=False)
    return WaveletFilter(key, h, g)


def as_filter(f) -> WaveletFilter:
    return make_filter(f) if isinstance(f, str) else f


def check_size(N: int, L: int) -> int:
    """Validate a dyadic length and depth; return log2(N)."""
    n = int(N).bit_length() - 1
    if N < 1 or (1 << n) != N:
        raise ValueError(f"signal length {N} is not a power of two")
    if L < 0 or L > n:
        raise ValueError(f"depth L={L} must satisfy 0 <= L <= log2(N) = {n}")
    return n


def block_slice(N: int, L: int, j: int) -> slice:
    """Positions of detail level ``j`` (or the scaling block when j == L+1)."""
    if j == L + 1:
        return slice(0, N >> L)
    if not 1 <= j <= L:
        raise ValueError(f"level {j} out of range 1..{L + 1}")
    return slice(N >> j, N >> (j - 1))


@dataclass(frozen=True)
class DwtCoeffs:
    """Decimated coefficients; ``w[0]`` is the coarsest detail w_L."""

    s: np.ndarray
    w: list

    @property
    def L(self) -> int:
        return len(self.w)

    @property
    def N(self) -> int:
        return len(self.s) + sum(len(b) for b in self.w)

    def detail(self, j: int) -> np.ndarray:
        return self.w[self.L - j]

    def flat(self) -> np.ndarray:
        return np.concatenate([self.s, *self.w])

    @classmethod
    def from_flat(cls, c, L: int) -> "DwtCoeffs":
        c = np.asarray(c)
        N = len(c)
        check_size(N, L)
        s = c[: N >> L]
        w = [c[block_slice(N, L, j)] for j in range(L, 0, -1)]
        return cls(s, w)


def _analysis_step(a: np.ndarray, f: WaveletFilter):
    M = len(a)
    idx = (2 * np.arange(M // 2)[:, None] + np.arange(f.support)[None, :]) % M
    return a[idx] @ f.h, a[idx] @ f.g


def _synthesis_step(s: np.ndarray, w: np.ndarray, f: WaveletFilter) -> np.ndarray:
    M = 2 * len(s)
    out = np.zeros(M, dtype=np.result_type(s, w, float))
    idx = (2 * np.arange(M // 2)[:, None] + np.arange(f.support)[None, :]) % M
    np.add.at(out, idx, s[:, None] * f.h[None, :] + w[:, None] * f.g[None, :])
    return out


def dwt_forward(y, f, L: int) -> DwtCoeffs:
    """Periodic orthogonal DWT of depth `L` (filter-bank path)."""
    f = as_filter(f)
    a = np.asarray(y)
    check_size(len(a), L)
    details = []
    for _ in range(L):
        a, d = _analysis_step(a, f)
        details.append(d)
    return DwtCoeffs(a, details[::-1])


def dwt_inverse(c: DwtCoeffs, f) -> np.ndarray:
    f = as_filter(f)
    a = np.asarray(c.s)
    for d in c.w:
        d = np.asarray(d)
        if len(d) != len(a):
            raise ValueError(f"detail block of length {len(d)} does not match scaling length {len(a)}")
        a = _synthesis_step(a, d, f)
    return a


@dataclass(frozen=True)
class WaveletMatrix:
    """Dense N x N orthogonal analysis matrix of depth L."""

    entries: np.ndarray
    L: int
    wavelet: str = ""

    @property
    def N(self) -> int:
        return self.entries.shape[0]

    def apply(self, rows: np.ndarray) -> np.ndarray:
        """Transform each row of `rows` (shape (..., N))."""
        return rows @ self.entries.T

    def apply_inverse(self, rows: np.ndarray) -> np.ndarray:
        return rows @ self.entries


def _level_matrix(M: int, f: WaveletFilter) -> np.ndarray:
    A = np.zeros((M, M))
    for k in range(M // 2):
        for i in range(f.support):
            A[k, (2 * k + i) % M] += f.h[i]
            A[M // 2 + k, (2 * k + i) % M] += f.g[i]
    return A


def build_W_matrix(N: int, f, L: int) -> WaveletMatrix:
    """Compose per-level analysis matrices into the full transform.

    Independent of :func:`dwt_forward`, which makes it usable as its oracle.
    Rows come out in the ``[s_L | w_L | ... | w_1]`` layout.
    """
    f = as_filter(f)
    check_size(N, L)
    W = np.eye(N)
    for j in range(1, L + 1):
        M = N >> (j - 1)
        step = np.eye(N)
        step[:M, :M] = _level_matrix(M, f)
        W = step @ W
    W.setflags(write=False)
    return WaveletMatrix(W, L, f.name)


def circular_shift(y, eps: int) -> np.ndarray:
    """``out[k] = y[(k - eps) mod N]``."""
    return np.roll(np.asarray(y), int(eps))


@dataclass(frozen=True)
class EpsilonLibrary:
    """Row ``eps`` holds ``W S^eps y`` in flat layout."""

    rows: np.ndarray
    L: int

    @property
    def N(self) -> int:
        return self.rows.shape[1]


def epsilon_library(y, f, L: int) -> EpsilonLibrary:
    f = as_filter(f)
    y = np.asarray(y)
    rows = np.array([dwt_forward(circular_shift(y, e), f, L).flat() for e in range(1 << L)])
    return EpsilonLibrary(rows, L)


@dataclass(frozen=True)
class NdwtTable:
    """Stationary coefficients; ``d[j-1]`` is level j, ``a`` the level-L scaling."""

    d: list
    a: np.ndarray

    @property
    def L(self) -> int:
        return len(self.d)

    @property
    def N(self) -> int:
        return len(self.a)

    def level(self, j: int) -> np.ndarray:
        """Detail level j, or the scaling sequence for j == L + 1."""
        if j == self.L + 1:
            return self.a
        if not 1 <= j <= self.L:
            raise IndexError(f"level {j} out of range 1..{self.L + 1}")
        return self.d[j - 1]

    def as_array(self) -> np.ndarray:
        return np.vstack([*self.d, self.a])

    def labels(self) -> list[str]:
        return [f"d{j}" for j in range(1, self.L + 1)] + [f"a{self.L}"]


def ndwt_atrous(y, f, L: int) -> NdwtTable:
    """Undecimated filter bank with dilated filters, circular boundary.

    ``d_j[n] = sum_i g[i] a_{j-1}[n + 2^(j-1) i]``, same for ``a_j`` with h.
    """
    f = as_filter(f)
    a = np.asarray(y)
    N = len(a)
    check_size(N, L)
    taps = np.arange(f.support)
    details = []
    for j in range(1, L + 1):
        idx = (np.arange(N)[:, None] + (1 << (j - 1)) * taps[None, :]) % N
        details.append(a[idx] @ f.g)
        a = a[idx] @ f.h
    return NdwtTable(details, a)


def _position_map(N: int, L: int, j: int, eps: int) -> np.ndarray:
    # coefficient k of block j in the eps-shifted transform sits at 2^j k - eps
    return ((np.arange(N >> j) << j) - eps) % N


def align_epsilon_to_ndwt(lib: EpsilonLibrary) -> NdwtTable:
    """Select and reorder library entries into the stationary table.

    Level-j coefficients only depend on ``eps mod 2^j``; the representative
    ``eps < 2^j`` is used, which covers every position exactly once.
    """
    rows = np.asarray(lib.rows)
    if rows.ndim != 2 or rows.shape[0] != (1 << lib.L):
        raise ValueError(f"library must have 2^L = {1 << lib.L} rows of equal length")
    N, L = rows.shape[1], lib.L
    check_size(N, L)
    out = {}
    for j in range(1, L + 2):
        lev = min(j, L)
        blk = block_slice(N, L, j)
        seq = np.zeros(N, dtype=rows.dtype)
        for e in range(1 << lev):
            seq[_position_map(N, L, lev, e)] = rows[e, blk]
        out[j] = seq
    return NdwtTable([out[j] for j in range(1, L + 1)], out[L + 1])


def library_from_ndwt(t: NdwtTable) -> EpsilonLibrary:
    """Inverse of the position map: rebuild all 2^L shifted transforms."""
    N, L = t.N, t.L
    check_size(N, L)
    rows = np.zeros((1 << L, N), dtype=np.result_type(t.a, *t.d))
    for e in range(1 << L):
        for j in range(1, L + 2):
            lev = min(j, L)
            seq = np.asarray(t.level(j))
            if len(seq) != N:
                raise ValueError("table sequences must all have length N")
            rows[e, block_slice(N, L, j)] = seq[_position_map(N, L, lev, e)]
    return EpsilonLibrary(rows, L)


def ndwt_inverse_average(t: NdwtTable, f, L: int | None = None) -> np.ndarray:
    """Average of the 2^L shifted inverse transforms (cycle-spinning inverse)."""
    f = as_filter(f)
    if L is not None and L != t.L:
        raise ValueError(f"table has {t.L} levels, got L={L}")
    lib = library_from_ndwt(t)
    acc = np.zeros(t.N, dtype=lib.rows.dtype)
    for e, row in enumerate(lib.rows):
        acc += circular_shift(dwt_inverse(DwtCoeffs.from_flat(row, t.L), f), -e)
    return acc / len(lib.rows)
