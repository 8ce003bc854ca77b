"""CSV ingestion and writing of series pairs."""

from __future__ import annotations

import csv
import logging
import math
import os

import numpy as np

from .core import TimeSeries
from .exceptions import ColumnNotFound, NoUsableRows

__all__ = ["ingest_csv", "write_pair_csv", "format_float"]

log = logging.getLogger(__name__)


def format_float(value):
    """17 significant digits: enough for an exact float64 round trip."""
    return f"{float(value):.17g}"


def _resolve(header, selector):
    selector = str(selector)
    if selector in header:
        return header.index(selector)
    try:
        idx = int(selector)
    except ValueError:
        raise ColumnNotFound(f"column {selector!r} not found; available: {', '.join(header)}") from None
    if not 0 <= idx < len(header):
        raise ColumnNotFound(f"column index {idx} out of range for {len(header)} columns")
    return idx


def _parse(cell):
    try:
        value = float(cell)
    except (TypeError, ValueError):
        return None
    return value if math.isfinite(value) else None


def ingest_csv(path, x_col=0, y_col=1):
    """Read two columns of a headed CSV file as aligned series.

    Columns are selected by header name or 0-based index. Rows where either
    selected cell is missing or not a finite number are dropped.

    Returns
    -------
    x, y : TimeSeries
    n_dropped : int
        Number of rows discarded.
    """
    if not os.path.isfile(path):
        raise FileNotFoundError(f"input file not found: {path}")
    xs, ys = [], []
    dropped = 0
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise NoUsableRows(f"{path} is empty") from None
        ix, iy = _resolve(header, x_col), _resolve(header, y_col)
        for row in reader:
            if not row:
                continue
            a = _parse(row[ix]) if ix < len(row) else None
            b = _parse(row[iy]) if iy < len(row) else None
            if a is None or b is None:
                dropped += 1
                continue
            xs.append(a)
            ys.append(b)
    if not xs:
        raise NoUsableRows(f"{path} has no rows with numeric values in both selected columns")
    if dropped:
        log.warning("dropped %d row(s) with missing or non-numeric values", dropped)
    return (
        TimeSeries(header[ix], np.array(xs)),
        TimeSeries(header[iy], np.array(ys)),
        dropped,
    )


def write_pair_csv(x, y, fh):
    """Write two equal-length series to an open text stream with header ``x,y``."""
    fh.write("x,y\n")
    xv = x.values if isinstance(x, TimeSeries) else np.asarray(x)
    yv = y.values if isinstance(y, TimeSeries) else np.asarray(y)
    fh.writelines(f"{a:.17g},{b:.17g}\n" for a, b in zip(xv.tolist(), yv.tolist()))
