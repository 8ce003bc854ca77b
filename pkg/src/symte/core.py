"""Time-series containers, delay embedding and alphabet-size arithmetic."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import AlphabetOverflow, InvalidParameters, NoValidM, SeriesTooShort

__all__ = [
    "METHODS",
    "INT64_MAX",
    "TimeSeries",
    "EmbeddingConfig",
    "embed",
    "alphabet_size",
    "advise_max_m",
]

METHODS = ("ordinal", "binning", "principal", "kmeans")

# Symbols are stored as int64; anything above this cannot be represented.
INT64_MAX = int(np.iinfo(np.int64).max)


@dataclass(frozen=True)
class TimeSeries:
    """A named, uniformly sampled sequence of finite reals.

    ``values`` is converted to a read-only float64 array on construction.
    """

    name: str
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64).reshape(-1)
        if values.size < 1:
            raise InvalidParameters(f"time series {self.name!r} is empty")
        if not np.all(np.isfinite(values)):
            raise InvalidParameters(f"time series {self.name!r} contains NaN or infinite values")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.shape[0]

    def slice(self, start, stop):
        return TimeSeries(self.name, self.values[start:stop])


@dataclass(frozen=True)
class EmbeddingConfig:
    """Embedding dimension ``m``, delay ``tau`` and prediction horizon ``delta``."""

    m: int = 3
    tau: int = 1
    delta: int = 1

    def __post_init__(self):
        for name, low in (("m", 2), ("tau", 1), ("delta", 1)):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < low:
                raise InvalidParameters(f"{name} must be an integer >= {low}, got {value!r}")
            object.__setattr__(self, name, int(value))

    @property
    def span(self):
        """Number of samples covered by one window."""
        return (self.m - 1) * self.tau + 1

    def n_windows(self, n):
        return max(0, n - (self.m - 1) * self.tau)

    def n_pairs(self, n):
        """Usable (past, future) symbol pairs for a series of length ``n``."""
        return max(0, n - (self.m - 1) * self.tau - self.delta)


def embed(series, config):
    """Delay-embed a series into overlapping windows.

    Parameters
    ----------
    series : TimeSeries or array-like
        Input samples.
    config : EmbeddingConfig
        Only ``m`` and ``tau`` are used here.

    Returns
    -------
    windows : ndarray of shape (N - (m-1)*tau, m)
        Row ``i`` holds ``x[i], x[i+tau], ..., x[i+(m-1)*tau]``. The result is a
        read-only strided view, so no data is copied.
    """
    values = series.values if isinstance(series, TimeSeries) else np.asarray(series, dtype=np.float64)
    n = values.shape[0]
    if n < config.span:
        raise SeriesTooShort(n, config.span)
    n_windows = n - (config.m - 1) * config.tau
    stride = values.strides[0]
    return np.lib.stride_tricks.as_strided(
        values,
        shape=(n_windows, config.m),
        strides=(stride, stride * config.tau),
        writeable=False,
    )


def _check_int(name, value, low):
    if value is None:
        raise InvalidParameters(f"{name} is required")
    if isinstance(value, bool) or int(value) != value or value < low:
        raise InvalidParameters(f"{name} must be an integer >= {low}, got {value!r}")
    return int(value)


def alphabet_size(method, m, b=None, t=None, k=None):
    """Exact number of symbols a method can emit.

    ``ordinal`` gives ``m!``, ``binning`` gives ``b**m``, ``principal`` gives
    ``m!/(m-2t)!`` and ``kmeans`` gives ``k``. Raises :class:`AlphabetOverflow`
    when the count does not fit in a signed 64-bit integer, since symbols are
    stored as int64.
    """
    m = _check_int("m", m, 2)
    if method == "ordinal":
        size = math.factorial(m)
    elif method == "binning":
        size = _check_int("b", b, 2) ** m
    elif method == "principal":
        t = _check_int("t", t, 1)
        if 2 * t > m:
            raise InvalidParameters(f"principal symbolization needs 2t <= m, got t={t}, m={m}")
        size = math.perm(m, 2 * t)
    elif method == "kmeans":
        size = _check_int("k", k, 2)
    else:
        raise InvalidParameters(f"unknown method {method!r}; expected one of {METHODS}")
    if size > INT64_MAX:
        raise AlphabetOverflow(f"{method} alphabet for m={m} has {size} symbols, exceeding int64")
    return size


def advise_max_m(n):
    """Largest embedding dimension ``m`` with ``n > 5 * m!``."""
    n = int(n)
    if n <= 10:
        raise NoValidM(f"no embedding dimension satisfies n > 5*m! for n={n} (need n >= 11)")
    m = 2
    while 5 * math.factorial(m + 1) < n:
        m += 1
    return m
