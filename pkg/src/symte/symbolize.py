"""Window-to-symbol codecs.

Four codecs map an embedded window to an integer symbol in a dense alphabet
``[0, A)``:

* ``ordinal``   - Lehmer rank of the window's sorting permutation, ``A = m!``.
* ``binning``   - per-window equal-width bins written as a base-``b`` number, ``A = b**m``.
* ``principal`` - ranked positions of the ``t`` largest and ``t`` smallest
  elements, ``A = m!/(m-2t)!``.
* ``kmeans``    - nearest-centroid label after k-means on the raw windows, ``A = k``.

Ties are always broken by position: of two equal elements, the earlier one
ranks lower.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import METHODS, EmbeddingConfig, TimeSeries, alphabet_size, embed
from .exceptions import InvalidParameters, TooFewWindows

__all__ = [
    "SymbolizerSpec",
    "SymbolSequence",
    "ordinal_symbol",
    "ordinal_symbols",
    "binning_symbol",
    "binning_symbols",
    "principal_symbol",
    "principal_symbols",
    "kmeans_fit",
    "kmeans_assign",
    "kmeans_symbolize",
    "symbolize",
]


@dataclass(frozen=True)
class SymbolizerSpec:
    """Which codec to use, with its parameters.

    ``m`` is optional; when omitted the embedding dimension of the
    :class:`EmbeddingConfig` passed alongside is used.
    """

    kind: str = "ordinal"
    b: int | None = None
    t: int | None = None
    k: int | None = None
    seed: int = 0
    max_iter: int = 100
    m: int | None = None

    def __post_init__(self):
        if self.kind not in METHODS:
            raise InvalidParameters(f"unknown method {self.kind!r}; expected one of {METHODS}")
        if self.kind == "binning" and (self.b is None or self.b < 2):
            raise InvalidParameters(f"binning needs b >= 2, got {self.b!r}")
        if self.kind == "principal" and (self.t is None or self.t < 1):
            raise InvalidParameters(f"principal needs t >= 1, got {self.t!r}")
        if self.kind == "kmeans":
            if self.k is None or self.k < 2:
                raise InvalidParameters(f"kmeans needs k >= 2, got {self.k!r}")
            if self.max_iter < 1:
                raise InvalidParameters(f"max_iter must be >= 1, got {self.max_iter!r}")
        if self.m is not None:
            self.alphabet(self.m)

    @classmethod
    def vidybida(cls, m):
        """Binning preset with one bin per window element (``b = m``)."""
        return cls(kind="binning", b=m, m=m)

    def resolve_m(self, config):
        if self.m is not None and self.m != config.m:
            raise InvalidParameters(
                f"symbolizer m={self.m} disagrees with embedding m={config.m}"
            )
        return config.m

    def alphabet(self, m):
        return alphabet_size(self.kind, m, b=self.b, t=self.t, k=self.k)

    def label(self):
        """Short human-readable tag, e.g. ``binning(b=4)``."""
        if self.kind == "binning":
            return f"binning(b={self.b})"
        if self.kind == "principal":
            return f"principal(t={self.t})"
        if self.kind == "kmeans":
            return f"kmeans(k={self.k},seed={self.seed})"
        return "ordinal"

    def with_seed(self, seed):
        return SymbolizerSpec(self.kind, self.b, self.t, self.k, int(seed), self.max_iter, self.m)


@dataclass(frozen=True)
class SymbolSequence:
    """Integer symbols in ``[0, alphabet)`` together with their provenance."""

    symbols: np.ndarray = field(repr=False)
    alphabet: int
    spec: SymbolizerSpec | None = None

    def __post_init__(self):
        symbols = np.array(self.symbols, dtype=np.int64).reshape(-1)
        if self.alphabet < 1:
            raise InvalidParameters(f"alphabet must be >= 1, got {self.alphabet}")
        if symbols.size and (symbols.min() < 0 or symbols.max() >= self.alphabet):
            raise InvalidParameters(f"symbols fall outside [0, {self.alphabet})")
        symbols.flags.writeable = False
        object.__setattr__(self, "symbols", symbols)

    def __len__(self):
        return self.symbols.shape[0]

    @property
    def method(self):
        return self.spec.label() if self.spec is not None else "custom"

    def histogram(self):
        """Dense symbol counts of length ``alphabet`` (only for modest alphabets)."""
        return np.bincount(self.symbols, minlength=self.alphabet)

    def n_distinct(self):
        return int(np.unique(self.symbols).size)

    def occupancy(self):
        """Fraction of the alphabet actually observed."""
        return self.n_distinct() / self.alphabet


def _as_windows(windows):
    arr = np.asarray(windows, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] < 2:
        raise InvalidParameters(f"windows must have shape (n, m) with m >= 2, got {arr.shape}")
    return arr


def _falling_rank(tuples, m):
    """Rank tuples of distinct indices from ``range(m)`` lexicographically.

    Each entry is replaced by its rank among the indices not used earlier in
    the tuple; the digits are then read in the falling-factorial radix
    ``m, m-1, ..., m-k+1``. For ``k == m`` this is the Lehmer rank of a
    permutation.
    """
    n, k = tuples.shape
    rank = np.zeros(n, dtype=np.int64)
    for p in range(k):
        digit = tuples[:, p].astype(np.int64)
        for q in range(p):
            digit -= tuples[:, q] < tuples[:, p]
        rank = rank * (m - p) + digit
    return rank


def _sort_order(windows):
    # stable: equal values keep position order
    return np.argsort(windows, axis=1, kind="stable")


def ordinal_symbols(windows):
    """Ordinal-pattern symbols for a batch of windows, each in ``[0, m!)``."""
    windows = _as_windows(windows)
    m = windows.shape[1]
    alphabet_size("ordinal", m)
    return _falling_rank(_sort_order(windows), m)


def ordinal_symbol(window):
    """Lehmer rank of the permutation that sorts ``window``.

    >>> ordinal_symbol([1.0, 2.0, 3.0]), ordinal_symbol([3.0, 2.0, 1.0])
    (0, 5)
    """
    return int(ordinal_symbols(window)[0])


def binning_symbols(windows, b):
    """Per-window equal-width binning, digits read little-endian in base ``b``."""
    windows = _as_windows(windows)
    m = windows.shape[1]
    alphabet_size("binning", m, b=b)
    lo = windows.min(axis=1, keepdims=True)
    span = windows.max(axis=1, keepdims=True) - lo
    flat = span[:, 0] == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = b * ((windows - lo) / span)
    scaled[flat] = 0.0
    digits = np.minimum(b - 1, np.floor(scaled)).astype(np.int64)
    weights = np.int64(b) ** np.arange(m, dtype=np.int64)
    return digits @ weights


def binning_symbol(window, b):
    return int(binning_symbols(window, b)[0])


def principal_tuples(windows, t):
    """Index tuples ``(argmax_1, argmin_1, ..., argmax_t, argmin_t)`` per window.

    Largest and smallest are read from one tie-broken total order, so the
    ``2t`` indices are always distinct.
    """
    windows = _as_windows(windows)
    m = windows.shape[1]
    if t < 1 or 2 * t > m:
        raise InvalidParameters(f"principal symbolization needs 1 <= t and 2t <= m, got t={t}, m={m}")
    order = _sort_order(windows)
    cols = []
    for r in range(t):
        cols.append(order[:, m - 1 - r])
        cols.append(order[:, r])
    return np.stack(cols, axis=1)


def principal_symbols(windows, t):
    windows = _as_windows(windows)
    m = windows.shape[1]
    alphabet_size("principal", m, t=t)
    return _falling_rank(principal_tuples(windows, t), m)


def principal_symbol(window, t):
    return int(principal_symbols(window, t)[0])


def _sq_dist(points, centers):
    out = np.empty((points.shape[0], centers.shape[0]))
    for j, c in enumerate(centers):
        diff = points - c
        out[:, j] = np.einsum("ij,ij->i", diff, diff)
    return out


def _kmeans_pp(points, k, rng):
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    closest = _sq_dist(points, centers[:1])[:, 0]
    for j in range(1, k):
        total = closest.sum()
        if total > 0:
            idx = rng.choice(n, p=closest / total)
        else:
            idx = rng.integers(n)
        centers[j] = points[idx]
        closest = np.minimum(closest, _sq_dist(points, centers[j : j + 1])[:, 0])
    return centers


def kmeans_fit(windows, k, seed=0, max_iter=100):
    """k-means++ seeding followed by Lloyd iterations.

    Returns ``(labels, centers, n_iter)``. Clusters are relabelled so the
    centroids are in lexicographic order, which makes labels reproducible.
    A cluster that loses all its points is reseeded with the point farthest
    from its current centroid.
    """
    points = _as_windows(windows)
    n = points.shape[0]
    if n < k:
        raise TooFewWindows(f"k-means with k={k} needs at least {k} windows, got {n}")
    if max_iter < 1:
        raise InvalidParameters(f"max_iter must be >= 1, got {max_iter}")
    rng = np.random.default_rng(seed)
    centers = _kmeans_pp(points, k, rng)
    labels = np.argmin(_sq_dist(points, centers), axis=1)
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        counts = np.bincount(labels, minlength=k)
        sums = np.zeros_like(centers)
        np.add.at(sums, labels, points)
        nonempty = counts > 0
        centers[nonempty] = sums[nonempty] / counts[nonempty, None]
        if not nonempty.all():
            resid = np.einsum("ij,ij->i", points - centers[labels], points - centers[labels])
            for j in np.flatnonzero(~nonempty):
                far = int(np.argmax(resid))
                centers[j] = points[far]
                resid[far] = -1.0
        new_labels = np.argmin(_sq_dist(points, centers), axis=1)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    order = np.lexsort(centers.T[::-1])
    relabel = np.empty(k, dtype=np.int64)
    relabel[order] = np.arange(k)
    return relabel[labels], centers[order], n_iter


def kmeans_assign(windows, centers):
    """Label each window with its nearest centroid (first one on ties)."""
    return np.argmin(_sq_dist(_as_windows(windows), np.asarray(centers, dtype=np.float64)), axis=1)


def kmeans_symbolize(windows, k, seed=0, max_iter=100):
    labels, _, _ = kmeans_fit(windows, k, seed=seed, max_iter=max_iter)
    m = _as_windows(windows).shape[1]
    spec = SymbolizerSpec("kmeans", k=k, seed=seed, max_iter=max_iter, m=m)
    return SymbolSequence(labels, k, spec)


def symbols_for_windows(windows, spec):
    """Apply the codec named by ``spec`` to pre-embedded windows."""
    if spec.kind == "ordinal":
        return ordinal_symbols(windows)
    if spec.kind == "binning":
        return binning_symbols(windows, spec.b)
    if spec.kind == "principal":
        return principal_symbols(windows, spec.t)
    return kmeans_fit(windows, spec.k, seed=spec.seed, max_iter=spec.max_iter)[0]


def symbolize(series, config, spec):
    """Embed ``series`` and map every window to a symbol.

    Parameters
    ----------
    series : TimeSeries or array-like
    config : EmbeddingConfig
    spec : SymbolizerSpec

    Returns
    -------
    SymbolSequence
        One symbol per window; ``alphabet`` equals ``alphabet_size`` for the spec.
    """
    if not isinstance(series, TimeSeries):
        series = TimeSeries("series", series)
    if not isinstance(config, EmbeddingConfig):
        raise InvalidParameters("config must be an EmbeddingConfig")
    m = spec.resolve_m(config)
    alphabet = spec.alphabet(m)
    windows = embed(series, config)
    return SymbolSequence(symbols_for_windows(windows, spec), alphabet, spec)
