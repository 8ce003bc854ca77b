import math

import numpy as np
import pytest

from symte.core import INT64_MAX, EmbeddingConfig, TimeSeries, advise_max_m, alphabet_size, embed
from symte.exceptions import AlphabetOverflow, InvalidParameters, NoValidM, SeriesTooShort

from conftest import lex_perms


def enumerate_windows(x, m, tau):
    out = []
    i = 0
    while i + (m - 1) * tau < len(x):
        out.append(tuple(x[i + j * tau] for j in range(m)))
        i += 1
    return out


def test_timeseries_rejects_non_finite():
    with pytest.raises(InvalidParameters):
        TimeSeries("a", [1.0, np.nan])
    with pytest.raises(InvalidParameters):
        TimeSeries("a", [np.inf])
    with pytest.raises(InvalidParameters):
        TimeSeries("a", [])


def test_timeseries_is_read_only():
    ts = TimeSeries("a", [1, 2, 3])
    assert len(ts) == 3
    with pytest.raises(ValueError):
        ts.values[0] = 5.0


@pytest.mark.parametrize("m, tau, delta", [(1, 1, 1), (2, 0, 1), (2, 1, 0), (2.5, 1, 1)])
def test_embedding_config_validation(m, tau, delta):
    with pytest.raises(InvalidParameters):
        EmbeddingConfig(m, tau, delta)


def test_embedding_pair_count():
    cfg = EmbeddingConfig(4, 3, 2)
    assert cfg.n_pairs(100) == 100 - 9 - 2
    assert cfg.n_pairs(5) == 0


def test_embed_small_examples():
    w = embed(TimeSeries("a", [1, 2, 3, 4]), EmbeddingConfig(2, 1))
    assert w.tolist() == [[1, 2], [2, 3], [3, 4]]
    w = embed(TimeSeries("a", [1, 2, 3, 4, 5]), EmbeddingConfig(3, 2))
    assert w.tolist() == [[1, 3, 5]]


def test_embed_length_100():
    x = np.arange(100.0)
    w = embed(x, EmbeddingConfig(4, 3))
    expected = enumerate_windows(list(x), 4, 3)
    assert len(expected) == 91
    assert [tuple(r) for r in w.tolist()] == expected


def test_embed_too_short_reports_minimum():
    with pytest.raises(SeriesTooShort) as info:
        embed(TimeSeries("a", [1.0, 2.0]), EmbeddingConfig(3, 2))
    assert info.value.required == 5


def test_embed_count_law_exhaustive():
    for n in range(1, 51):
        x = np.arange(float(n))
        for m in range(2, 7):
            for tau in range(1, 5):
                cfg = EmbeddingConfig(m, tau)
                expected = enumerate_windows(list(x), m, tau)
                if n < (m - 1) * tau + 1:
                    with pytest.raises(SeriesTooShort):
                        embed(x, cfg)
                    continue
                w = embed(x, cfg)
                assert w.shape[0] == n - (m - 1) * tau == len(expected)
                assert [tuple(r) for r in w.tolist()] == expected


def test_alphabet_examples():
    assert alphabet_size("ordinal", 4) == 24
    assert alphabet_size("principal", 4, t=1) == 12
    assert alphabet_size("binning", 4, b=5) == 625
    assert alphabet_size("kmeans", 4, k=7) == 7


def test_principal_alphabet_by_enumeration():
    assert alphabet_size("principal", 6, t=2) == len(lex_perms(6, 4)) == 360


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(method="principal", m=4, t=3),
        dict(method="principal", m=4, t=0),
        dict(method="binning", m=4, b=1),
        dict(method="binning", m=4),
        dict(method="kmeans", m=4, k=1),
        dict(method="ordinal", m=1),
        dict(method="wavelet", m=4),
    ],
)
def test_alphabet_invalid(kwargs):
    with pytest.raises(InvalidParameters):
        alphabet_size(**kwargs)


def test_alphabet_overflow_is_reported():
    assert alphabet_size("ordinal", 20) == math.factorial(20)
    with pytest.raises(AlphabetOverflow):
        alphabet_size("ordinal", 21)
    with pytest.raises(AlphabetOverflow):
        alphabet_size("binning", 64, b=2)
    assert alphabet_size("binning", 62, b=2) == 2**62 <= INT64_MAX


def test_alphabet_monotone_in_m():
    for m in range(2, 20):
        assert alphabet_size("ordinal", m + 1) > alphabet_size("ordinal", m)
        for b in (2, 3, 4):
            if b ** (m + 1) <= INT64_MAX:
                assert alphabet_size("binning", m + 1, b=b) > alphabet_size("binning", m, b=b)
        for t in range(1, m // 2 + 1):
            assert alphabet_size("principal", m + 1, t=t) > alphabet_size("principal", m, t=t)


def test_principal_equals_ordinal_at_boundary():
    for t in range(1, 10):
        assert alphabet_size("principal", 2 * t, t=t) == alphabet_size("ordinal", 2 * t)


def brute_advise(n):
    best = None
    m = 1
    while True:
        m += 1
        if n > 5 * math.factorial(m):
            best = m
        else:
            return best


@pytest.mark.parametrize("n, expected", [(21_600_000, 10), (11, 2), (601, 5), (600, 4), (31, 3)])
def test_advise_max_m_examples(n, expected):
    assert brute_advise(n) == expected
    assert advise_max_m(n) == expected


def test_advise_max_m_rejects_small_n():
    for n in (0, 5, 10):
        with pytest.raises(NoValidM):
            advise_max_m(n)


def test_advise_max_m_consistency_sweep():
    grid = set(np.unique(np.logspace(np.log10(11), 8, 3000).astype(np.int64)).tolist())
    for m in range(2, 12):
        edge = 5 * math.factorial(m)
        grid.update({edge - 1, edge, edge + 1})
    for n in sorted(v for v in grid if 11 <= v <= 10**8):
        m = advise_max_m(n)
        assert 5 * math.factorial(m) < n <= 5 * math.factorial(m + 1)
