"""Plug-in entropy and transfer-entropy estimators over symbol sequences.

All quantities are in bits. The past state of each series is a single
symbol; the future of the target is the symbol of the window ``delta``
samples later.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import EmbeddingConfig, TimeSeries, embed
from .exceptions import (
    EmptyCounts,
    InvalidParameters,
    LengthMismatch,
    ScheduleMismatch,
    SeriesTooShort,
    TooShort,
    WindowTooSmall,
)
from .symbolize import SymbolSequence, SymbolizerSpec, symbolize, symbols_for_windows
from .synth import shuffle

__all__ = [
    "EPS_NUM",
    "JointCounts",
    "TeTrace",
    "accumulate",
    "transfer_entropy",
    "symbolic_transfer_entropy",
    "permutation_entropy",
    "sliding_te",
    "mse",
    "surrogate_null",
    "surrogate_pvalue",
]

EPS_NUM = 1e-9

# dense bincount is used when the joint key space is at most this large
_DENSE_LIMIT = 1 << 22


def _group(cols):
    """Lexicographic grouping of equal rows across integer columns.

    Returns ``(order, starts)``: the sorting permutation and the start
    offsets of each run of equal rows in sorted order.
    """
    order = np.lexsort(cols[::-1])
    n = order.size
    change = np.zeros(n, dtype=bool)
    if n:
        change[0] = True
    for col in cols:
        s = col[order]
        change[1:] |= s[1:] != s[:-1]
    return order, np.flatnonzero(change)


def _group_totals(cols, weights):
    """Sum of ``weights`` over each row's group, broadcast back to rows."""
    order, starts = _group(cols)
    sums = np.add.reduceat(weights[order], starts)
    ids = np.empty(order.size, dtype=np.int64)
    run = np.zeros(order.size, dtype=np.int64)
    run[starts[1:]] = 1
    ids[order] = np.cumsum(run)
    return sums[ids]


@dataclass(frozen=True)
class JointCounts:
    """Sparse occurrence counts of ``(future_x, past_x, past_y)`` triples.

    ``keys`` holds one unique triple per row, sorted lexicographically, with
    matching ``counts``. Built by :func:`accumulate`; supports TE from y to x.
    """

    keys: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)
    alphabets: tuple

    @property
    def total(self):
        return int(self.counts.sum())

    @property
    def triples(self):
        return {tuple(int(v) for v in k): int(c) for k, c in zip(self.keys, self.counts)}

    def marginal(self, axes):
        """Counts over a subset of the triple's axes, as ``{tuple: count}``."""
        sub = self.keys[:, list(axes)]
        out = {}
        for k, c in zip(map(tuple, sub.tolist()), self.counts.tolist()):
            out[k] = out.get(k, 0) + c
        return out


def _symbols(seq):
    if isinstance(seq, SymbolSequence):
        return seq.symbols, seq.alphabet
    arr = np.asarray(seq, dtype=np.int64).reshape(-1)
    return arr, int(arr.max()) + 1 if arr.size else 1


def accumulate(sym_x, sym_y, delta=1):
    """Count ``(x[i+delta], x[i], y[i])`` for ``i`` in ``0 .. L-delta-1``.

    ``sym_x`` and ``sym_y`` may be :class:`SymbolSequence` objects or plain
    integer arrays (alphabet then inferred as ``max + 1``).
    """
    x, ax = _symbols(sym_x)
    y, ay = _symbols(sym_y)
    if x.shape != y.shape:
        raise LengthMismatch(f"symbol sequences differ in length: {x.size} vs {y.size}")
    if delta < 1:
        raise InvalidParameters(f"delta must be >= 1, got {delta}")
    if x.size <= delta:
        raise TooShort(f"need more than delta={delta} symbols, got {x.size}")
    f, px, py = x[delta:], x[:-delta], y[:-delta]
    if ax * ax * ay <= max(_DENSE_LIMIT, 4 * f.size):
        key = (f * ax + px) * ay + py
        hist = np.bincount(key, minlength=1)
        nz = np.flatnonzero(hist)
        keys = np.stack([nz // (ax * ay), (nz // ay) % ax, nz % ay], axis=1)
        counts = hist[nz]
    else:
        cols = (f, px, py)
        order, starts = _group(cols)
        keys = np.stack([c[order][starts] for c in cols], axis=1)
        counts = np.diff(np.append(starts, order.size))
    return JointCounts(keys.astype(np.int64), counts.astype(np.int64), (ax, ay))


def transfer_entropy(counts):
    """Plug-in TE (bits) from the third axis to the first, given the second.

    Computes ``sum p(f,x,y) log2[p(f|x,y) / p(f|x)]`` over observed triples.
    Results within ``EPS_NUM`` below zero are clamped to 0; anything more
    negative indicates an inconsistent table and raises ``RuntimeError``.
    """
    c = counts.counts
    if c.size == 0 or c.sum() < 1:
        raise EmptyCounts("joint count table is empty")
    f, x, y = counts.keys.T
    n_fx = _group_totals((f, x), c)
    n_xy = _group_totals((x, y), c)
    n_x = _group_totals((x,), c)
    ratio = (c * n_x).astype(np.float64) / (n_xy * n_fx).astype(np.float64)
    total = float(c.sum())
    te = math.fsum((c * np.log2(ratio)).tolist()) / total
    if te < 0:
        if te < -EPS_NUM:
            raise RuntimeError(f"plug-in transfer entropy is negative ({te}); count table is inconsistent")
        te = 0.0
    return te


def _pair_te(sx, sy, delta):
    """Return ``(te_yx, te_xy)`` for two symbol sequences."""
    return (
        transfer_entropy(accumulate(sx, sy, delta)),
        transfer_entropy(accumulate(sy, sx, delta)),
    )


def _as_series(s, name):
    return s if isinstance(s, TimeSeries) else TimeSeries(name, s)


def _check_pair(x, y):
    x, y = _as_series(x, "x"), _as_series(y, "y")
    if len(x) != len(y):
        raise LengthMismatch(f"series differ in length: {len(x)} vs {len(y)}")
    return x, y


def _check_enough(n, config):
    required = config.span + config.delta
    if n < required:
        raise SeriesTooShort(n, required)


def symbolic_transfer_entropy(x, y, config, spec):
    """Symbolize both series the same way and estimate both directions.

    Returns
    -------
    te_yx, te_xy : float
        Transfer entropy from y to x and from x to y, in bits.
    """
    x, y = _check_pair(x, y)
    _check_enough(len(x), config)
    sx = symbolize(x, config, spec)
    sy = symbolize(y, config, spec)
    return _pair_te(sx, sy, config.delta)


def permutation_entropy(sym, normalize=False):
    """Shannon entropy (bits) of the symbol histogram.

    With ``normalize=True`` the value is divided by ``log2(alphabet)``.
    """
    symbols, alphabet = _symbols(sym)
    if symbols.size == 0:
        raise TooShort("permutation entropy needs at least one symbol")
    _, counts = np.unique(symbols, return_counts=True)
    p = counts / symbols.size
    h = -math.fsum((p * np.log2(p)).tolist())
    h = max(h, 0.0)
    if normalize:
        return h / math.log2(alphabet) if alphabet > 1 else 0.0
    return h


@dataclass(frozen=True)
class TeTrace:
    """Directed TE along a sliding window schedule."""

    window_starts: np.ndarray
    te_xy: np.ndarray
    te_yx: np.ndarray
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (len(self.window_starts) == len(self.te_xy) == len(self.te_yx)):
            raise InvalidParameters("trace arrays must share the schedule length")

    def __len__(self):
        return len(self.window_starts)

    @property
    def window_len(self):
        return self.config.get("window_len")

    def schedule_id(self):
        """Digest of ``(window_len, starts)``; equal ids mean identical schedules."""
        h = hashlib.sha256()
        h.update(str(self.window_len).encode())
        h.update(np.asarray(self.window_starts, dtype="<i8").tobytes())
        return h.hexdigest()[:16]

    def values(self, direction):
        if direction == "xy":
            return self.te_xy
        if direction == "yx":
            return self.te_yx
        raise InvalidParameters(f"direction must be 'xy' or 'yx', got {direction!r}")


def _slice_seed(seed, start):
    return int(np.random.SeedSequence([int(seed), int(start)]).generate_state(1)[0])


def sliding_te(x, y, config, spec, window_len=1000, stride=None, n_jobs=None):
    """Both directed TEs on consecutive slices ``[s, s + window_len)``.

    Slices start at ``0, stride, 2*stride, ...`` while they fit in the series;
    ``stride`` defaults to ``window_len``. For k-means each slice is clustered
    afresh with a seed derived from ``(spec.seed, s)``. ``n_jobs`` sets the
    number of worker threads; results are ordered by start regardless.
    """
    x, y = _check_pair(x, y)
    stride = window_len if stride is None else stride
    if stride < 1:
        raise InvalidParameters(f"stride must be >= 1, got {stride}")
    need = config.span + config.delta
    if window_len < need:
        raise WindowTooSmall(
            f"window_len={window_len} leaves no (past, future) pair; need at least {need}"
        )
    n = len(x)
    if n < window_len:
        raise SeriesTooShort(n, window_len)
    m = spec.resolve_m(config)
    alphabet = spec.alphabet(m)
    starts = np.arange(0, n - window_len + 1, stride, dtype=np.int64)
    n_sym = window_len - (config.m - 1) * config.tau

    if spec.kind == "kmeans":
        wx, wy = embed(x, config), embed(y, config)

        def one(s):
            local = spec.with_seed(_slice_seed(spec.seed, s))
            sx = SymbolSequence(symbols_for_windows(wx[s : s + n_sym], local), alphabet)
            sy = SymbolSequence(symbols_for_windows(wy[s : s + n_sym], local), alphabet)
            return _pair_te(sx, sy, config.delta)

    else:
        # per-window codecs: symbolize once, slice the symbols
        gx = symbolize(x, config, spec).symbols
        gy = symbolize(y, config, spec).symbols

        def one(s):
            sx = SymbolSequence(gx[s : s + n_sym], alphabet)
            sy = SymbolSequence(gy[s : s + n_sym], alphabet)
            return _pair_te(sx, sy, config.delta)

    if n_jobs and n_jobs > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(one, starts.tolist()))
    else:
        results = [one(s) for s in starts.tolist()]
    te_yx = np.array([r[0] for r in results], dtype=np.float64)
    te_xy = np.array([r[1] for r in results], dtype=np.float64)
    meta = {
        "m": config.m,
        "tau": config.tau,
        "delta": config.delta,
        "method": spec.label(),
        "alphabet": alphabet,
        "window_len": int(window_len),
        "stride": int(stride),
    }
    return TeTrace(starts, te_xy, te_yx, meta)


def mse(trace_a, trace_b, direction="xy"):
    """Mean squared difference between two traces on the same schedule."""
    if trace_a.window_len != trace_b.window_len or not np.array_equal(
        trace_a.window_starts, trace_b.window_starts
    ):
        raise ScheduleMismatch("traces were computed on different window schedules")
    a, b = trace_a.values(direction), trace_b.values(direction)
    if len(a) == 0:
        raise ScheduleMismatch("traces are empty")
    return float(np.mean((np.asarray(a) - np.asarray(b)) ** 2))


def surrogate_null(x, y, config, spec, n_surrogates=99, seed=0, direction="xy"):
    """Observed TE and its null distribution under source shuffling.

    For ``direction="xy"`` the source is ``x`` and the statistic is TE x -> y;
    each surrogate shuffles the source symbol sequence as a whole.

    Returns
    -------
    observed : float
    null : ndarray of shape (n_surrogates,)
    """
    if n_surrogates < 1:
        raise InvalidParameters(f"n_surrogates must be >= 1, got {n_surrogates}")
    if direction not in ("xy", "yx"):
        raise InvalidParameters(f"direction must be 'xy' or 'yx', got {direction!r}")
    x, y = _check_pair(x, y)
    _check_enough(len(x), config)
    sx = symbolize(x, config, spec)
    sy = symbolize(y, config, spec)
    source, target = (sx, sy) if direction == "xy" else (sy, sx)
    observed = transfer_entropy(accumulate(target, source, config.delta))
    children = np.random.SeedSequence(seed).spawn(n_surrogates)
    null = np.array(
        [
            transfer_entropy(accumulate(target, shuffle(source, child), config.delta))
            for child in children
        ]
    )
    return observed, null


def surrogate_pvalue(x, y, config, spec, n_surrogates=99, seed=0, direction="xy"):
    """Shuffle-surrogate p-value ``(1 + #{null >= observed}) / (1 + n_surrogates)``.

    At least 19 surrogates are required so that ``p = 0.05`` is attainable.
    """
    if n_surrogates < 19:
        raise InvalidParameters(f"n_surrogates must be >= 19, got {n_surrogates}")
    observed, null = surrogate_null(x, y, config, spec, n_surrogates, seed, direction)
    return pvalue_from_null(observed, null)


def pvalue_from_null(observed, null):
    null = np.asarray(null)
    return (1 + int(np.count_nonzero(null >= observed))) / (1 + null.size)
