"""Synthetic coupled systems and shuffle surrogates.

All randomness comes from :func:`numpy.random.default_rng`, i.e. the PCG64
bit generator; Gaussian variates use numpy's ziggurat ``standard_normal``.
Both are stable across platforms for a given seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import TimeSeries
from .exceptions import DegenerateDynamics, InvalidParameters, TooShort
from .symbolize import SymbolSequence

__all__ = ["SYSTEMS", "CoupledSystemSpec", "generate", "shuffle"]

SYSTEMS = ("logistic_unidir", "ar_unidir", "independent_noise")


@dataclass(frozen=True)
class CoupledSystemSpec:
    """Parameters for a two-series system in which ``x`` drives ``y``."""

    kind: str = "logistic_unidir"
    n: int = 10_000
    coupling: float = 0.5
    noise_std: float = 1.0
    seed: int = 0
    burn_in: int = 1000

    def __post_init__(self):
        if self.kind not in SYSTEMS:
            raise InvalidParameters(f"unknown system {self.kind!r}; expected one of {SYSTEMS}")
        if self.n < 1:
            raise InvalidParameters(f"n must be >= 1, got {self.n}")
        if not 0.0 <= self.coupling <= 1.0:
            raise InvalidParameters(f"coupling must lie in [0, 1], got {self.coupling}")
        if self.noise_std < 0:
            raise InvalidParameters(f"noise_std must be >= 0, got {self.noise_std}")
        if self.burn_in < 0:
            raise InvalidParameters(f"burn_in must be >= 0, got {self.burn_in}")


def _open_unit(rng):
    value = 0.0
    while not 0.0 < value < 1.0:
        value = rng.random()
    return value


def _logistic(spec, rng):
    total = spec.n + spec.burn_in
    c = spec.coupling
    x = np.empty(total)
    y = np.empty(total)
    x[0] = _open_unit(rng)
    y[0] = _open_unit(rng)
    for i in range(total - 1):
        xi, yi = x[i], y[i]
        u = (1.0 - c) * yi + c * xi
        x[i + 1] = 4.0 * xi * (1.0 - xi)
        y[i + 1] = 4.0 * u * (1.0 - u)
    # the exact map never leaves (0, 1); rounding at x = 0.5 can
    bad = (x <= 0.0) | (x >= 1.0) | (y <= 0.0) | (y >= 1.0)
    if bad.any():
        raise DegenerateDynamics(
            f"logistic state left (0, 1) at step {int(np.argmax(bad))}; try another seed"
        )
    return x[spec.burn_in :], y[spec.burn_in :]


def _ar(spec, rng):
    total = spec.n + spec.burn_in
    eps = rng.standard_normal(total) * spec.noise_std
    eta = rng.standard_normal(total) * spec.noise_std
    x = np.zeros(total)
    y = np.zeros(total)
    x[0], y[0] = eps[0], eta[0]
    for i in range(1, total):
        x[i] = 0.5 * x[i - 1] + eps[i]
        y[i] = 0.5 * y[i - 1] + spec.coupling * x[i - 1] + eta[i]
    return x[spec.burn_in :], y[spec.burn_in :]


def generate(spec):
    """Simulate a driver ``x`` and response ``y``.

    ``logistic_unidir`` couples two fully chaotic logistic maps through
    ``u = (1-c)*y + c*x``; ``ar_unidir`` is a pair of AR(1) processes with a
    lag-one cross term ``c * x[t-1]``; ``independent_noise`` is two unrelated
    Gaussian white-noise series. Deterministic for a given seed.

    Returns
    -------
    x, y : TimeSeries
    """
    rng = np.random.default_rng(spec.seed)
    if spec.kind == "logistic_unidir":
        x, y = _logistic(spec, rng)
    elif spec.kind == "ar_unidir":
        x, y = _ar(spec, rng)
    else:
        x = rng.standard_normal(spec.n) * spec.noise_std
        y = rng.standard_normal(spec.n) * spec.noise_std
    return TimeSeries("x", x), TimeSeries("y", y)


def shuffle(sym, seed):
    """Randomly permute the positions of a symbol sequence.

    ``seed`` is anything :func:`numpy.random.default_rng` accepts. The
    alphabet and histogram are preserved.
    """
    if len(sym) < 2:
        raise TooShort(f"need at least 2 symbols to shuffle, got {len(sym)}")
    symbols = np.array(sym.symbols)
    np.random.default_rng(seed).shuffle(symbols)
    return SymbolSequence(symbols, sym.alphabet, sym.spec)
