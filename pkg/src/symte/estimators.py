"""scikit-learn compatible wrappers around the symbolizers and the STE estimator.

The transformers take a single 1-D series and return one integer symbol per
embedded window, so they slot into pipelines and ``get_params``/``set_params``
tooling. :class:`SymbolicTransferEntropy` is fitted on a pair of series.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .core import EmbeddingConfig, TimeSeries, embed
from .entropy import _pair_te, surrogate_null, pvalue_from_null
from .exceptions import InvalidParameters, LengthMismatch
from .symbolize import (
    SymbolizerSpec,
    kmeans_assign,
    kmeans_fit,
    symbolize,
)

__all__ = [
    "check_series",
    "check_series_pair",
    "OrdinalSymbolizer",
    "BinningSymbolizer",
    "PrincipalSymbolizer",
    "KMeansSymbolizer",
    "SymbolicTransferEntropy",
]


def check_series(X, name="X"):
    """Validate a single series; accepts shape ``(n,)`` or ``(n, 1)``."""
    arr = check_array(X, ensure_2d=False, dtype=np.float64, ensure_all_finite=True, input_name=name)
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise ValueError(f"{name} must be a single series, got shape {arr.shape}")
        arr = arr[:, 0]
    return arr


def check_series_pair(X, y=None):
    """Return two equal-length 1-D arrays.

    Either ``X`` has exactly two columns (x then y), or ``X`` and ``y`` are
    each a single series.
    """
    if y is None:
        arr = check_array(X, dtype=np.float64, ensure_all_finite=True)
        if arr.shape[1] != 2:
            raise ValueError(f"X must have two columns (x, y) when y is omitted, got {arr.shape}")
        return arr[:, 0].copy(), arr[:, 1].copy()
    x = check_series(X, "X")
    y = check_series(y, "y")
    if x.shape != y.shape:
        raise LengthMismatch(f"series differ in length: {x.size} vs {y.size}")
    return x, y


class _BaseSymbolizer(TransformerMixin, BaseEstimator):
    def _config(self):
        return EmbeddingConfig(self.m, self.tau)

    def _spec(self):
        raise NotImplementedError

    def fit(self, X, y=None):
        x = check_series(X)
        spec = self._spec()
        self.alphabet_size_ = spec.alphabet(self.m)
        self.n_windows_ = self._config().n_windows(x.size)
        return self

    def transform(self, X):
        check_is_fitted(self, "alphabet_size_")
        x = check_series(X)
        return symbolize(TimeSeries("X", x), self._config(), self._spec()).symbols.copy()


class OrdinalSymbolizer(_BaseSymbolizer):
    """Ordinal-pattern (permutation) symbols, alphabet ``m!``.

    Parameters
    ----------
    m : int, default=3
        Embedding dimension.
    tau : int, default=1
        Delay between window elements, in samples.
    """

    def __init__(self, m=3, tau=1):
        self.m = m
        self.tau = tau

    def _spec(self):
        return SymbolizerSpec("ordinal")


class BinningSymbolizer(_BaseSymbolizer):
    """Per-window equal-width binning, alphabet ``n_bins ** m``.

    Setting ``n_bins = m`` gives one bin per element.
    """

    def __init__(self, m=3, tau=1, n_bins=4):
        self.m = m
        self.tau = tau
        self.n_bins = n_bins

    def _spec(self):
        return SymbolizerSpec("binning", b=self.n_bins)


class PrincipalSymbolizer(_BaseSymbolizer):
    """Positions of the ``n_extremes`` largest and smallest window elements.

    Alphabet size is ``m! / (m - 2*n_extremes)!``.
    """

    def __init__(self, m=4, tau=1, n_extremes=1):
        self.m = m
        self.tau = tau
        self.n_extremes = n_extremes

    def _spec(self):
        return SymbolizerSpec("principal", t=self.n_extremes)


class KMeansSymbolizer(_BaseSymbolizer):
    """Nearest-centroid labels after k-means on the raw embedded windows.

    Attributes
    ----------
    cluster_centers_ : ndarray of shape (n_clusters, m)
        Centroids in lexicographic order; label ``j`` is row ``j``.
    labels_ : ndarray
        Labels of the training windows.
    n_iter_ : int
    """

    def __init__(self, m=3, tau=1, n_clusters=8, seed=0, max_iter=100):
        self.m = m
        self.tau = tau
        self.n_clusters = n_clusters
        self.seed = seed
        self.max_iter = max_iter

    def _spec(self):
        return SymbolizerSpec("kmeans", k=self.n_clusters, seed=self.seed, max_iter=self.max_iter)

    def fit(self, X, y=None):
        super().fit(X)
        windows = embed(check_series(X), self._config())
        self.labels_, self.cluster_centers_, self.n_iter_ = kmeans_fit(
            windows, self.n_clusters, seed=self.seed, max_iter=self.max_iter
        )
        return self

    def transform(self, X):
        check_is_fitted(self, "cluster_centers_")
        windows = embed(check_series(X), self._config())
        return kmeans_assign(windows, self.cluster_centers_)

    def fit_transform(self, X, y=None, **fit_params):
        return self.fit(X).labels_.copy()


class SymbolicTransferEntropy(BaseEstimator):
    """Directed symbolic transfer entropy between two series.

    Parameters
    ----------
    method : {"ordinal", "binning", "principal", "kmeans"}, default="ordinal"
    m, tau, delta : int
        Embedding dimension, delay and prediction horizon.
    n_bins : int, optional
        Bins per window for ``method="binning"``.
    n_extremes : int, optional
        Extreme-value groups for ``method="principal"``.
    n_clusters, seed, max_iter
        k-means settings. ``seed`` also seeds the surrogates.
    n_surrogates : int, default=0
        When positive, shuffle-surrogate p-values are computed in both
        directions.

    Attributes
    ----------
    te_xy_, te_yx_ : float
        TE from x to y and from y to x, in bits.
    net_te_ : float
        ``te_xy_ - te_yx_``.
    alphabet_size_ : int
    occupancy_ : tuple of float
        Distinct symbols observed divided by alphabet size, for x and y.
    pvalue_xy_, pvalue_yx_ : float
        Only set when ``n_surrogates > 0``.
    """

    def __init__(
        self,
        method="ordinal",
        m=3,
        tau=1,
        delta=1,
        n_bins=None,
        n_extremes=None,
        n_clusters=None,
        seed=0,
        max_iter=100,
        n_surrogates=0,
    ):
        self.method = method
        self.m = m
        self.tau = tau
        self.delta = delta
        self.n_bins = n_bins
        self.n_extremes = n_extremes
        self.n_clusters = n_clusters
        self.seed = seed
        self.max_iter = max_iter
        self.n_surrogates = n_surrogates

    def _spec(self):
        return SymbolizerSpec(
            self.method,
            b=self.n_bins,
            t=self.n_extremes,
            k=self.n_clusters,
            seed=self.seed,
            max_iter=self.max_iter,
        )

    def fit(self, X, y=None):
        x, y = check_series_pair(X, y)
        if self.n_surrogates and self.n_surrogates < 19:
            raise InvalidParameters(f"n_surrogates must be 0 or >= 19, got {self.n_surrogates}")
        config = EmbeddingConfig(self.m, self.tau, self.delta)
        spec = self._spec()
        sx = symbolize(TimeSeries("x", x), config, spec)
        sy = symbolize(TimeSeries("y", y), config, spec)
        self.te_yx_, self.te_xy_ = _pair_te(sx, sy, config.delta)
        self.net_te_ = self.te_xy_ - self.te_yx_
        self.alphabet_size_ = sx.alphabet
        self.occupancy_ = (sx.occupancy(), sy.occupancy())
        self.symbols_ = (sx, sy)
        if self.n_surrogates:
            for direction in ("xy", "yx"):
                obs, null = surrogate_null(x, y, config, spec, self.n_surrogates, self.seed, direction)
                setattr(self, f"pvalue_{direction}_", pvalue_from_null(obs, null))
        return self
