import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symte.core import EmbeddingConfig, TimeSeries, embed
from symte.exceptions import InvalidParameters, TooFewWindows
from symte.symbolize import (
    SymbolizerSpec,
    SymbolSequence,
    binning_symbol,
    binning_symbols,
    kmeans_fit,
    kmeans_symbolize,
    ordinal_symbol,
    ordinal_symbols,
    principal_symbol,
    principal_symbols,
    symbolize,
)

from conftest import binning_oracle, ordinal_oracle, principal_oracle


def test_ordinal_examples():
    assert ordinal_symbol([1.0, 2.0, 3.0]) == 0
    assert ordinal_symbol([3.0, 2.0, 1.0]) == 5


def test_ordinal_tie_rule(perm_index):
    # earlier index ranks lower among equals: sorting permutation is (2, 0, 1)
    assert ordinal_symbol([2.0, 2.0, 1.0]) == perm_index(3)[(2, 0, 1)] == 4
    assert ordinal_symbol([2.0, 2.0, 1.0]) == ordinal_oracle([2.0, 2.0, 1.0], perm_index)


def test_ordinal_fig1_permutations_cover_alphabet():
    windows = np.array(list(itertools.permutations(range(4))), dtype=float)
    symbols = ordinal_symbols(windows)
    assert sorted(symbols.tolist()) == list(range(24))


@pytest.mark.parametrize("m", range(2, 8))
def test_ordinal_bijection(m, perm_index):
    perms = np.array(list(itertools.permutations(range(m))), dtype=float)
    symbols = ordinal_symbols(perms)
    assert sorted(symbols.tolist()) == list(range(math.factorial(m)))
    if m <= 5:
        assert symbols.tolist() == [ordinal_oracle(p, perm_index) for p in perms.tolist()]


def test_ordinal_matches_oracle_on_random_windows_with_ties(perm_index):
    rng = np.random.default_rng(3)
    windows = rng.integers(0, 3, size=(500, 5)).astype(float)
    assert ordinal_symbols(windows).tolist() == [ordinal_oracle(w, perm_index) for w in windows.tolist()]


def test_binning_examples():
    assert binning_symbol([5, 5, 5, 5], 3) == 0
    assert binning_symbol([0.0, 1.0], 2) == 2


def test_binning_range_and_oracle():
    rng = np.random.default_rng(11)
    windows = rng.normal(size=(100_000, 3))
    symbols = binning_symbols(windows, 4)
    assert symbols.min() >= 0 and symbols.max() < 64
    sample = windows[:2000].tolist()
    assert symbols[:2000].tolist() == [binning_oracle(w, 4) for w in sample]


def test_binning_vidybida_preset():
    spec = SymbolizerSpec.vidybida(5)
    assert (spec.kind, spec.b, spec.alphabet(5)) == ("binning", 5, 5**5)


def test_principal_example(perm_index):
    # argmax 3, argmin 0
    assert principal_symbol([1.0, 2.0, 3.0, 4.0], 1) == perm_index(4, 2)[(3, 0)]
    assert 0 <= principal_symbol([1.0, 2.0, 3.0, 4.0], 1) < 12


def test_principal_constant_window_has_distinct_indices():
    # one total order: smallest are indices 0, 1 and largest 3, 2
    from symte.symbolize import principal_tuples

    assert principal_tuples(np.zeros((1, 4)), 2).tolist() == [[3, 0, 2, 1]]


@pytest.mark.parametrize("m", range(2, 8))
def test_principal_bijection(m, perm_index):
    for t in range(1, m // 2 + 1):
        size = math.perm(m, 2 * t)
        # every ordered tuple of distinct indices is reachable; build a window for each
        tuples = list(itertools.permutations(range(m), 2 * t))
        windows = np.empty((len(tuples), m))
        for row, tup in enumerate(tuples):
            w = np.full(m, 0.5 * m)  # middle values, above every min and below every max
            for r in range(t):
                w[tup[2 * r]] = m + 10 - r
                w[tup[2 * r + 1]] = -10 + r
            windows[row] = w
        symbols = principal_symbols(windows, t)
        assert sorted(symbols.tolist()) == list(range(size))
        if m <= 5:
            assert symbols.tolist() == [principal_oracle(w, t, perm_index) for w in windows.tolist()]


def test_principal_m4_t2_permutations_distinct():
    windows = np.array(list(itertools.permutations(range(4))), dtype=float)
    assert len(set(principal_symbols(windows, 2).tolist())) == 24


def test_principal_invalid_t():
    with pytest.raises(InvalidParameters):
        principal_symbol([1.0, 2.0, 3.0], 2)


def test_principal_matches_oracle_random(perm_index):
    rng = np.random.default_rng(5)
    windows = rng.integers(0, 4, size=(400, 6)).astype(float)
    for t in (1, 2, 3):
        got = principal_symbols(windows, t).tolist()
        assert got == [principal_oracle(w, t, perm_index) for w in windows.tolist()]


@pytest.mark.parametrize("m", [3, 4, 5, 6, 7])
def test_range_fuzz_all_codecs(m):
    rng = np.random.default_rng(m)
    windows = rng.standard_normal((100_000, m))
    for symbols, alphabet in [
        (ordinal_symbols(windows), math.factorial(m)),
        (binning_symbols(windows, 3), 3**m),
        (principal_symbols(windows, 1), m * (m - 1)),
        (principal_symbols(windows, m // 2), math.perm(m, 2 * (m // 2))),
    ]:
        assert symbols.min() >= 0 and symbols.max() < alphabet


tie_free = st.integers(min_value=2, max_value=7).flatmap(
    lambda m: st.permutations(list(range(m)))
)


@given(tie_free, st.floats(0.1, 10.0), st.floats(-5.0, 5.0))
def test_monotone_invariance(perm, scale, shift):
    w = np.array(perm, dtype=float) * scale + shift
    for g in (np.exp, np.arctan, lambda v: v**3 + v):
        gw = g(w)
        assert ordinal_symbol(gw) == ordinal_symbol(w)
        for t in range(1, len(w) // 2 + 1):
            assert principal_symbol(gw, t) == principal_symbol(w, t)


def test_binning_affine_invariance():
    rng = np.random.default_rng(21)
    windows = rng.standard_normal((20_000, 5))
    for alpha, beta in [(2.0, 0.0), (0.37, 12.5), (1e3, -4.0)]:
        assert np.array_equal(binning_symbols(alpha * windows + beta, 4), binning_symbols(windows, 4))


def test_binning_not_invariant_under_general_monotone():
    w = np.array([0.0, 4.0, 10.0])
    assert binning_symbol(w, 2) != binning_symbol(np.sqrt(w), 2)
    assert ordinal_symbol(w) == ordinal_symbol(np.sqrt(w))


@pytest.mark.parametrize("m", [2, 4, 6])
def test_principal_ordinal_fixed_bijection(m):
    t = m // 2
    patterns = np.array(list(itertools.permutations(range(m))), dtype=float)
    phi = np.empty(math.factorial(m), dtype=np.int64)
    phi[ordinal_symbols(patterns)] = principal_symbols(patterns, t)
    assert sorted(phi.tolist()) == list(range(math.factorial(m)))
    data = np.random.default_rng(m).standard_normal((5000, m))
    assert np.array_equal(principal_symbols(data, t), phi[ordinal_symbols(data)])


def test_symbolize_ordinal_ascending():
    seq = symbolize(TimeSeries("a", [1, 2, 3, 4, 5]), EmbeddingConfig(3, 1), SymbolizerSpec("ordinal"))
    assert seq.symbols.tolist() == [0, 0, 0]
    assert seq.alphabet == 6
    assert seq.method == "ordinal"


def test_symbolize_binning_slope_signs():
    # windows (1,3) (3,2) (2,4) (4,3) (3,5): rising -> digits (0,1) = 2, falling -> (1,0) = 1
    seq = symbolize(
        TimeSeries("a", [1, 3, 2, 4, 3, 5]), EmbeddingConfig(2, 1), SymbolizerSpec("binning", b=2)
    )
    assert seq.symbols.tolist() == [2, 1, 2, 1, 2]
    assert seq.alphabet == 4


def test_symbolize_m_mismatch():
    with pytest.raises(InvalidParameters):
        symbolize(np.arange(10.0), EmbeddingConfig(3), SymbolizerSpec("ordinal", m=4))


def test_symbol_sequence_range_check():
    with pytest.raises(InvalidParameters):
        SymbolSequence([0, 3], 3)
    seq = SymbolSequence([0, 1, 1, 2], 6)
    assert seq.histogram().tolist() == [1, 2, 1, 0, 0, 0]
    assert seq.occupancy() == 0.5


@pytest.mark.parametrize(
    "kwargs",
    [dict(kind="binning", b=1), dict(kind="principal"), dict(kind="kmeans", k=1), dict(kind="dwt")],
)
def test_spec_validation(kwargs):
    with pytest.raises(InvalidParameters):
        SymbolizerSpec(**kwargs)


def test_kmeans_identical_windows():
    windows = np.ones((50, 3))
    seq = kmeans_symbolize(windows, 2, seed=4)
    assert len(set(seq.symbols.tolist())) == 1


def test_kmeans_separates_blobs():
    rng = np.random.default_rng(8)
    a = rng.normal(0.0, 0.1, size=(200, 2))
    b = rng.normal(50.0, 0.1, size=(200, 2))
    points = np.vstack([a, b])
    labels, centers, _ = kmeans_fit(points, 2, seed=1)
    # brute-force nearest centroid oracle
    oracle = [min(range(2), key=lambda j: ((p - centers[j]) ** 2).sum()) for p in points]
    assert labels.tolist() == oracle
    assert set(labels[:200].tolist()) == {0} and set(labels[200:].tolist()) == {1}


def test_kmeans_deterministic_and_canonical():
    windows = embed(np.random.default_rng(2).standard_normal(3000), EmbeddingConfig(3))
    a = kmeans_symbolize(windows, 5, seed=9, max_iter=50)
    b = kmeans_symbolize(windows, 5, seed=9, max_iter=50)
    assert np.array_equal(a.symbols, b.symbols)
    _, centers, _ = kmeans_fit(windows, 5, seed=9, max_iter=50)
    assert [tuple(c) for c in centers] == sorted(tuple(c) for c in centers)


def test_kmeans_too_few_windows():
    with pytest.raises(TooFewWindows):
        kmeans_symbolize(np.zeros((2, 3)), 3)


def test_kmeans_repairs_empty_cluster():
    # two distinct points, three clusters: a cluster must empty and be reseeded
    points = np.array([[0.0, 0.0]] * 10 + [[1.0, 1.0]] * 10 + [[1.0, 1.0]])
    labels, centers, _ = kmeans_fit(points, 3, seed=0)
    assert labels.max() < 3
    assert np.isfinite(centers).all()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_kmeans_determinism_property(seed):
    windows = embed(np.random.default_rng(seed).standard_normal(200), EmbeddingConfig(3))
    a = kmeans_fit(windows, 3, seed=seed, max_iter=20)[0]
    b = kmeans_fit(windows, 3, seed=seed, max_iter=20)[0]
    assert np.array_equal(a, b)
