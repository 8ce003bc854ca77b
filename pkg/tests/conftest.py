"""Independent brute-force oracles shared across the test modules.

None of these call into the package's vectorized code paths.
"""

import itertools
import math
from collections import Counter

import numpy as np
import pytest


def stable_order(window):
    return tuple(sorted(range(len(window)), key=lambda i: (window[i], i)))


def lex_perms(m, k=None):
    return sorted(itertools.permutations(range(m), m if k is None else k))


@pytest.fixture(scope="session")
def perm_index():
    """``perm_index(m, k)`` maps each ordered k-tuple from range(m) to its lex rank."""
    cache = {}

    def get(m, k=None):
        key = (m, k)
        if key not in cache:
            cache[key] = {p: i for i, p in enumerate(lex_perms(m, k))}
        return cache[key]

    return get


def ordinal_oracle(window, perm_index):
    return perm_index(len(window))[stable_order(window)]


def principal_oracle(window, t, perm_index):
    order = stable_order(window)
    m = len(window)
    tup = []
    for r in range(t):
        tup += [order[m - 1 - r], order[r]]
    return perm_index(m, 2 * t)[tuple(tup)]


def binning_oracle(window, b):
    lo, hi = min(window), max(window)
    total = 0
    for j, e in enumerate(window):
        d = 0 if hi == lo else min(b - 1, math.floor(b * ((e - lo) / (hi - lo))))
        total += d * b**j
    return total


def dense_te_oracle(sx, sy, delta, ax, ay):
    """TE from y to x by a triple loop over a dense probability table."""
    sx, sy = list(sx), list(sy)
    n = len(sx) - delta
    table = np.zeros((ax, ax, ay))
    for i in range(n):
        table[sx[i + delta], sx[i], sy[i]] += 1
    p = table / n
    te = 0.0
    for f in range(ax):
        for x in range(ax):
            for y in range(ay):
                if p[f, x, y] == 0:
                    continue
                p_xy = p[:, x, y].sum()
                p_fx = p[f, x, :].sum()
                p_x = p[:, x, :].sum()
                te += p[f, x, y] * math.log2((p[f, x, y] / p_xy) / (p_fx / p_x))
    return te


def shannon_oracle(symbols):
    counts = Counter(symbols)
    n = len(symbols)
    return -sum(c / n * math.log2(c / n) for c in counts.values())


ACCEPTANCE_LINES = []


def record_criterion(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
