"""Classical transforms: filters, periodic DWT, epsilon library, a trous NDWT."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qndwt import (
    FILTER_NAMES,
    DwtCoeffs,
    NdwtTable,
    align_epsilon_to_ndwt,
    build_W_matrix,
    circular_shift,
    daubechies_lowpass,
    doppler,
    dwt_forward,
    dwt_inverse,
    epsilon_library,
    library_from_ndwt,
    make_filter,
    ndwt_atrous,
    ndwt_inverse_average,
)
from qndwt._golden import PER_SHIFT_REF, STATIONARY_REF, TABLE_TOL

S2 = 1 / np.sqrt(2)
V1 = np.array([5, 3, 19, 1, 7, -19, 5, 9]) / 19.0  # Example-1 signal on [-1, 1]


def atrous_fft(y, f, L):
    """Stationary transform via frequency-domain products of dilated filters."""
    N = len(y)
    Y = np.fft.fft(y)
    omega = 2 * np.pi * np.arange(N) / N

    def response(taps, j):
        # correlation with taps spaced 2^(j-1) apart
        step = 1 << (j - 1)
        return sum(c * np.exp(1j * omega * i * step) for i, c in enumerate(taps))

    lo = np.ones(N, dtype=complex)
    d = []
    for j in range(1, L + 1):
        d.append(np.fft.ifft(Y * lo * response(f.g, j)).real)
        lo = lo * response(f.h, j)
    return d, np.fft.ifft(Y * lo).real


# --- filters


def test_haar_pair():
    f = make_filter("haar")
    np.testing.assert_allclose(f.h, [S2, S2], atol=1e-15)
    np.testing.assert_allclose(f.g, [S2, -S2], atol=1e-15)


def test_db2_closed_form():
    r3 = np.sqrt(3)
    expected = np.array([1 + r3, 3 + r3, 3 - r3, 1 - r3]) / (4 * np.sqrt(2))
    np.testing.assert_allclose(make_filter("db2").h, expected, atol=1e-14)


@pytest.mark.parametrize("name", FILTER_NAMES)
def test_filter_invariants(name):
    f = make_filter(name)
    M = f.support
    assert len(f.h) == len(f.g) == M
    assert abs(np.sum(f.h ** 2) - 1) < 1e-12
    assert abs(np.sum(f.g ** 2) - 1) < 1e-12
    assert abs(np.sum(f.h) - np.sqrt(2)) < 1e-12
    for m in range(M // 2):
        assert abs(np.dot(f.h[: M - 2 * m], f.h[2 * m:]) - (m == 0)) < 1e-10
    np.testing.assert_allclose(f.g, [(-1) ** i * f.h[M - 1 - i] for i in range(M)], atol=0)


@pytest.mark.parametrize("p", [2, 3, 4])
def test_daubechies_vanishing_moments(p):
    g = make_filter(f"db{p}").g
    i = np.arange(2 * p, dtype=float)
    for m in range(p):
        assert abs(np.sum(g * i ** m)) < 1e-9 * max(1.0, (2 * p) ** m)


@pytest.mark.parametrize("p", [2, 3, 4])
def test_stored_taps_match_factorization(p):
    np.testing.assert_allclose(make_filter(f"db{p}").h, daubechies_lowpass(p), atol=1e-12)


def test_db1_alias_and_unknown_name():
    np.testing.assert_array_equal(make_filter("db1").h, make_filter("haar").h)
    with pytest.raises(ValueError, match="meyer"):
        make_filter("meyer")


# --- decimated DWT


def test_table1_row0_from_dwt():
    c = dwt_forward(V1, "haar", 2)
    np.testing.assert_allclose(c.s, [0.736842, 0.052632], atol=TABLE_TOL)
    np.testing.assert_allclose(c.detail(2), [-0.315789, -0.684211], atol=TABLE_TOL)
    np.testing.assert_allclose(c.detail(1), [0.074432, 0.669891, 0.967620, -0.148865], atol=TABLE_TOL)


def test_haar_convention_even_minus_odd():
    y = np.array([3.0, 1.0, 4.0, 1.0])
    c = dwt_forward(y, "haar", 1)
    np.testing.assert_allclose(c.s, [(3 + 1) * S2, (4 + 1) * S2])
    np.testing.assert_allclose(c.detail(1), [(3 - 1) * S2, (4 - 1) * S2])


@pytest.mark.parametrize("L", [1, 2, 3])
def test_constant_signal_dwt(L):
    c = dwt_forward(np.full(16, 2.5), "haar", L)
    for j in range(1, L + 1):
        np.testing.assert_allclose(c.detail(j), 0, atol=1e-14)
    np.testing.assert_allclose(c.s, 2.5 * 2 ** (L / 2), atol=1e-13)


@pytest.mark.parametrize("name", FILTER_NAMES)
def test_dwt_matches_matrix(name):
    rng = np.random.default_rng(3)
    y = rng.standard_normal(32)
    W = build_W_matrix(32, name, 3)
    np.testing.assert_allclose(dwt_forward(y, name, 3).flat(), W.entries @ y, atol=1e-10)


def test_inverse_of_table1_row0():
    c = DwtCoeffs.from_flat(PER_SHIFT_REF[0], 2)
    np.testing.assert_allclose(dwt_inverse(c, "haar"), V1, atol=TABLE_TOL)


def test_inverse_of_zero():
    assert np.all(dwt_inverse(DwtCoeffs.from_flat(np.zeros(16), 3), "db2") == 0)


@pytest.mark.parametrize("name", FILTER_NAMES)
def test_round_trip_many(name):
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(3, 8))
        L = int(rng.integers(0, n + 1))
        y = rng.standard_normal(1 << n)
        worst = max(worst, np.abs(dwt_inverse(dwt_forward(y, name, L), name) - y).max())
    assert worst < 1e-10


@pytest.mark.parametrize("N, L", [(6, 1), (8, 4), (1, 0)])
def test_bad_sizes(N, L):
    if N == 1:
        # a single sample with L=0 is the trivial transform
        np.testing.assert_array_equal(dwt_forward(np.ones(1), "haar", 0).flat(), [1.0])
        return
    with pytest.raises(ValueError):
        dwt_forward(np.ones(N), "haar", L)


# --- wavelet matrix


def test_two_point_haar_matrix():
    np.testing.assert_allclose(build_W_matrix(2, "haar", 1).entries, [[S2, S2], [S2, -S2]], atol=1e-15)


@pytest.mark.parametrize("name", FILTER_NAMES)
@pytest.mark.parametrize("N", [16, 64, 256])
def test_orthogonality(name, N):
    n = N.bit_length() - 1
    for L in {1, n // 2, n}:
        if make_filter(name).support > N and L == n:
            continue
        W = build_W_matrix(N, name, L).entries
        assert np.abs(W @ W.T - np.eye(N)).max() < 1e-10


def test_matrix_rows_are_basis_images():
    W = build_W_matrix(16, "db3", 2).entries
    images = np.array([dwt_forward(e, "db3", 2).flat() for e in np.eye(16)]).T
    np.testing.assert_allclose(W, images, atol=1e-12)


def test_block_sizes():
    W = build_W_matrix(32, "haar", 3)
    assert W.L == 3 and W.N == 32
    c = DwtCoeffs.from_flat(np.arange(32.0), 3)
    assert [len(c.s)] + [len(c.detail(j)) for j in (3, 2, 1)] == [4, 4, 8, 16]


# --- shifts and the epsilon library


def test_circular_shift():
    np.testing.assert_array_equal(circular_shift([1, 2, 3, 4], 1), [4, 1, 2, 3])
    np.testing.assert_array_equal(circular_shift([1, 2, 3, 4], 0), [1, 2, 3, 4])
    np.testing.assert_array_equal(circular_shift([1, 2, 3, 4], -1), [2, 3, 4, 1])
    np.testing.assert_array_equal(circular_shift([1, 2, 3, 4], 5), [4, 1, 2, 3])


def test_table1_row1_from_shift():
    c = dwt_forward(circular_shift(V1, 1), "haar", 2)
    np.testing.assert_allclose(c.detail(1), [0.148865, -0.595458, -0.223297, -0.893188], atol=TABLE_TOL)


def test_table1_library():
    lib = epsilon_library(V1, "haar", 2)
    assert lib.rows.shape == (4, 8)
    np.testing.assert_allclose(lib.rows, PER_SHIFT_REF, atol=TABLE_TOL)


def test_constant_library_rows_identical():
    rows = epsilon_library(np.full(16, -0.7), "db2", 3).rows
    np.testing.assert_allclose(rows, np.broadcast_to(rows[0], rows.shape), atol=1e-14)


def test_library_row_norms():
    y = np.random.default_rng(5).standard_normal(32)
    rows = epsilon_library(y, "db2", 3).rows
    np.testing.assert_allclose(np.linalg.norm(rows, axis=1), np.linalg.norm(y), atol=1e-12)


# --- stationary transform


def test_table2_atrous():
    np.testing.assert_allclose(ndwt_atrous(V1, "haar", 2).as_array(), STATIONARY_REF, atol=TABLE_TOL)


def test_table1_to_table2_alignment():
    from qndwt import EpsilonLibrary

    np.testing.assert_allclose(align_epsilon_to_ndwt(EpsilonLibrary(PER_SHIFT_REF, 2)).as_array(), STATIONARY_REF, atol=TABLE_TOL)


def test_constant_atrous_details_vanish():
    t = ndwt_atrous(np.full(32, 4.0), "db3", 4)
    for d in t.d:
        np.testing.assert_allclose(d, 0, atol=1e-13)


def test_doppler_alignment_equivalence():
    v = doppler(64).samples
    t = ndwt_atrous(v, "haar", 3)
    a = align_epsilon_to_ndwt(epsilon_library(v, "haar", 3))
    np.testing.assert_allclose(a.as_array(), t.as_array(), atol=1e-10)


def test_smallest_alignment_interleaves():
    y = np.array([3.0, -1.0])
    t = align_epsilon_to_ndwt(epsilon_library(y, "haar", 1))
    np.testing.assert_allclose(t.d[0], [(3 + 1) * S2, (-1 - 3) * S2])
    np.testing.assert_allclose(t.a, [2 * S2, 2 * S2])


@pytest.mark.parametrize("name", FILTER_NAMES)
def test_atrous_matches_fft_oracle(name):
    y = np.random.default_rng(8).standard_normal(64)
    t = ndwt_atrous(y, name, 4)
    d, a = atrous_fft(y, make_filter(name), 4)
    for got, want in zip(t.d, d):
        np.testing.assert_allclose(got, want, atol=1e-10)
    np.testing.assert_allclose(t.a, a, atol=1e-10)


def test_alignment_random_n64():
    rng = np.random.default_rng(21)
    for _ in range(50):
        L = int(rng.integers(1, 4))
        y = rng.standard_normal(64)
        a = align_epsilon_to_ndwt(epsilon_library(y, "db2", L)).as_array()
        np.testing.assert_allclose(a, ndwt_atrous(y, "db2", L).as_array(), atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(1, 7),
    depth=st.integers(0, 5),
    name=st.sampled_from(FILTER_NAMES),
    seed=st.integers(0, 2 ** 32 - 1),
)
def test_alignment_property(n, depth, name, seed):
    L = min(depth, n)
    if L == 0:
        return
    y = np.random.default_rng(seed).standard_normal(1 << n)
    a = align_epsilon_to_ndwt(epsilon_library(y, name, L)).as_array()
    np.testing.assert_allclose(a, ndwt_atrous(y, name, L).as_array(), atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 7), name=st.sampled_from(FILTER_NAMES), seed=st.integers(0, 2 ** 32 - 1))
def test_shift_equivariance(n, name, seed):
    y = np.random.default_rng(seed).standard_normal(1 << n)
    L = min(n, 4)
    t0 = ndwt_atrous(y, name, L)
    t1 = ndwt_atrous(circular_shift(y, 1), name, L)
    for a, b in zip(t0.as_array(), t1.as_array()):
        np.testing.assert_allclose(b, circular_shift(a, 1), atol=1e-10)


@pytest.mark.parametrize("name", ["haar", "db2"])
def test_energy_identity(name):
    """Shift-averaged decimated block energy equals 2^-j times the stationary level energy."""
    y = np.random.default_rng(2).standard_normal(64)
    L = 4
    lib = epsilon_library(y, name, L)
    t = ndwt_atrous(y, name, L)
    for j in range(1, L + 1):
        lo, hi = 64 >> j, 64 >> (j - 1)
        avg = np.mean(np.sum(lib.rows[:, lo:hi] ** 2, axis=1))
        assert abs(avg - np.sum(t.d[j - 1] ** 2) / 2 ** j) < 1e-10


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 7), seed=st.integers(0, 2 ** 32 - 1), name=st.sampled_from(FILTER_NAMES))
def test_parseval_per_branch(n, seed, name):
    y = np.random.default_rng(seed).standard_normal(1 << n)
    rows = epsilon_library(y, name, n).rows
    np.testing.assert_allclose(np.linalg.norm(rows, axis=1), np.linalg.norm(y), atol=1e-12)


# --- inverse average


@pytest.mark.parametrize("name", FILTER_NAMES)
def test_inverse_average_round_trip(name):
    y = np.random.default_rng(4).standard_normal(64)
    for L in (1, 3, 5):
        np.testing.assert_allclose(ndwt_inverse_average(ndwt_atrous(y, name, L), name), y, atol=1e-10)


def test_inverse_average_zero_table():
    t = NdwtTable([np.zeros(16)] * 2, np.zeros(16))
    assert np.all(ndwt_inverse_average(t, "haar") == 0)


def test_inverse_average_after_killing_fine_level():
    y = 1.5 + np.array([1.0, -1.0] * 8)
    t = ndwt_atrous(y, "haar", 2)
    killed = NdwtTable([np.zeros(16), t.d[1]], t.a)
    # brute force: invert every shifted decimated transform with w_1 zeroed
    acc = np.zeros(16)
    for e in range(4):
        c = dwt_forward(circular_shift(y, e), "haar", 2).flat()
        c[8:] = 0
        acc += circular_shift(dwt_inverse(DwtCoeffs.from_flat(c, 2), "haar"), -e)
    out = ndwt_inverse_average(killed, "haar")
    np.testing.assert_allclose(out, acc / 4, atol=1e-12)
    np.testing.assert_allclose(out, 1.5, atol=1e-12)


def test_library_round_trip_through_table():
    y = np.random.default_rng(6).standard_normal(32)
    lib = epsilon_library(y, "db2", 3)
    np.testing.assert_allclose(library_from_ndwt(align_epsilon_to_ndwt(lib)).rows, lib.rows, atol=1e-12)


def test_inverse_average_rejects_ragged_table():
    with pytest.raises(ValueError):
        ndwt_inverse_average(NdwtTable([np.zeros(16), np.zeros(8)], np.zeros(16)), "haar")
