"""Command-line front end.

Subcommands: ``compute``, ``trace``, ``compare``, ``alphabet`` and ``synth``.
Data goes to stdout (or ``--output``), diagnostics to stderr. Exit status is
0 on success, 1 on runtime failures and 2 on invalid flags.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import logging
import os
import sys

from .core import EmbeddingConfig, alphabet_size
from .entropy import mse, sliding_te, surrogate_pvalue, _pair_te
from .exceptions import AlphabetOverflow, InvalidParameters, SymteError
from .io import format_float, ingest_csv, write_pair_csv
from .symbolize import SymbolizerSpec, symbolize
from .synth import SYSTEMS, CoupledSystemSpec, generate


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _threads():
    cap = os.environ.get("SYMTE_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise UsageError(f"SYMTE_THREADS must be an integer, got {cap!r}") from None
    return n


def _common(p):
    p.add_argument("--input", required=True, help="CSV file with a header row")
    p.add_argument("--x-col", default="0", help="x column: header name or 0-based index")
    p.add_argument("--y-col", default="1", help="y column: header name or 0-based index")
    p.add_argument("--m", type=int, default=3, help="embedding dimension")
    p.add_argument("--tau", type=int, default=1, help="delay in samples")
    p.add_argument("--delta", type=int, default=1, help="prediction horizon in samples")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iter", type=int, default=100, help="k-means iteration cap")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", help="output path (default: stdout)")


def _window(p):
    p.add_argument("--window", type=int, default=1000, help="slice length in samples")
    p.add_argument("--stride", type=int, help="slice step (default: --window)")


def _single_method(p):
    p.add_argument("--method", choices=("ordinal", "binning", "principal", "kmeans"), default="ordinal")
    p.add_argument("--bins", type=int, help="bins per window (binning)")
    p.add_argument("--t-extremes", type=int, help="extreme-value groups (principal)")
    p.add_argument("--k", type=int, help="clusters (kmeans)")


def build_parser():
    parser = _Parser(prog="symte", description="Symbolic transfer entropy between two series.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", help="directed TE over the whole series")
    _common(p)
    _single_method(p)
    p.add_argument("--surrogates", type=int, default=0, help="shuffle surrogates for p-values (>= 19)")

    p = sub.add_parser("trace", help="TE on sliding windows")
    _common(p)
    _single_method(p)
    _window(p)

    p = sub.add_parser("compare", help="MSE of reduced symbolizers against ordinal STE")
    _common(p)
    _window(p)
    p.add_argument("--method", nargs="+", choices=("binning", "principal", "kmeans"), required=True)
    p.add_argument("--bins", type=int, nargs="+", default=[])
    p.add_argument("--t-extremes", type=int, nargs="+", default=[])
    p.add_argument("--k", type=int, nargs="+", default=[])

    p = sub.add_parser("alphabet", help="alphabet sizes per method")
    p.add_argument("--m", type=int, nargs="+", required=True, help="M or MIN MAX (inclusive)")
    p.add_argument("--bins", type=int, nargs="*", default=[])
    p.add_argument("--t-extremes", type=int, nargs="*", default=[])
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output")

    p = sub.add_parser("synth", help="write a synthetic coupled pair as CSV")
    p.add_argument("--kind", choices=SYSTEMS, default="logistic_unidir")
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--coupling", type=float, default=0.5)
    p.add_argument("--noise-std", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--output")
    return parser


def _make_spec(args, kind, b=None, t=None, k=None):
    given = {"binning": ("--bins", b), "principal": ("--t-extremes", t), "kmeans": ("--k", k)}
    for other, (flag, value) in given.items():
        if other != kind and value is not None:
            raise UsageError(f"{flag} is only valid with --method {other}")
    if kind in given and given[kind][1] is None:
        raise UsageError(f"--method {kind} requires {given[kind][0]}")
    try:
        spec = SymbolizerSpec(kind, b=b, t=t, k=k, seed=args.seed, max_iter=args.max_iter)
        spec.alphabet(args.m)
    except InvalidParameters as exc:
        raise UsageError(str(exc)) from None
    return spec


def _embedding(args):
    try:
        return EmbeddingConfig(args.m, args.tau, args.delta)
    except InvalidParameters as exc:
        raise UsageError(str(exc)) from None


def _base_config(args, config, n, dropped):
    return {
        "input": args.input,
        "x_col": args.x_col,
        "y_col": args.y_col,
        "n_samples": n,
        "dropped_rows": dropped,
        "m": config.m,
        "tau": config.tau,
        "delta": config.delta,
    }


def _dump_json(obj):
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _csv_rows(rows):
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def cmd_compute(args):
    config = _embedding(args)
    spec = _make_spec(args, args.method, args.bins, args.t_extremes, args.k)
    if args.surrogates and args.surrogates < 19:
        raise UsageError("--surrogates must be 0 or at least 19")
    x, y, dropped = ingest_csv(args.input, args.x_col, args.y_col)
    sx, sy = symbolize(x, config, spec), symbolize(y, config, spec)
    te_yx, te_xy = _pair_te(sx, sy, config.delta)
    summary = {
        "te_xy": te_xy,
        "te_yx": te_yx,
        "net_te": te_xy - te_yx,
        "alphabet": sx.alphabet,
        "distinct_x": sx.n_distinct(),
        "distinct_y": sy.n_distinct(),
        "occupancy_x": sx.occupancy(),
        "occupancy_y": sy.occupancy(),
    }
    if args.surrogates:
        for direction in ("xy", "yx"):
            summary[f"pvalue_{direction}"] = surrogate_pvalue(
                x, y, config, spec, args.surrogates, args.seed, direction
            )
    cfg = _base_config(args, config, len(x), dropped)
    cfg.update(method=spec.label(), surrogates=args.surrogates)
    if args.format == "json":
        return _dump_json(
            {
                "config": cfg,
                "schedule": [0],
                "series": [
                    {"name": "te_xy", "values": [te_xy]},
                    {"name": "te_yx", "values": [te_yx]},
                ],
                "summary": summary,
            }
        )
    rows = [("quantity", "value")]
    rows += [(k, v) for k, v in cfg.items()]
    rows += [(k, format_float(v) if isinstance(v, float) else v) for k, v in summary.items()]
    return _csv_rows(rows)


def _trace(args, x, y, config, spec):
    stride = args.stride if args.stride is not None else args.window
    return sliding_te(x, y, config, spec, args.window, stride, n_jobs=_threads())


def _check_window(args):
    if args.window < 1 or (args.stride is not None and args.stride < 1):
        raise UsageError("--window and --stride must be positive")


def cmd_trace(args):
    config = _embedding(args)
    spec = _make_spec(args, args.method, args.bins, args.t_extremes, args.k)
    _check_window(args)
    x, y, dropped = ingest_csv(args.input, args.x_col, args.y_col)
    trace = _trace(args, x, y, config, spec)
    cfg = _base_config(args, config, len(x), dropped)
    cfg.update(trace.config)
    cfg["schedule_id"] = trace.schedule_id()
    if args.format == "json":
        return _dump_json(
            {
                "config": cfg,
                "schedule": trace.window_starts.tolist(),
                "series": [
                    {"name": "te_xy", "values": trace.te_xy.tolist()},
                    {"name": "te_yx", "values": trace.te_yx.tolist()},
                ],
            }
        )
    rows = [("window_start", "te_xy", "te_yx")]
    rows += [
        (int(s), format_float(a), format_float(b))
        for s, a, b in zip(trace.window_starts, trace.te_xy, trace.te_yx)
    ]
    return _csv_rows(rows)


def cmd_compare(args):
    config = _embedding(args)
    _check_window(args)
    options = {
        "binning": ("--bins", "b", args.bins),
        "principal": ("--t-extremes", "t", args.t_extremes),
        "kmeans": ("--k", "k", args.k),
    }
    specs = []
    for kind in dict.fromkeys(args.method):
        flag, param, values = options[kind]
        if not values:
            raise UsageError(f"compare with {kind} requires {flag}")
        specs += [_make_spec(args, kind, **{param: v}) for v in values]
    x, y, dropped = ingest_csv(args.input, args.x_col, args.y_col)
    reference = _trace(args, x, y, config, SymbolizerSpec("ordinal"))
    traces = [(s, _trace(args, x, y, config, s)) for s in specs]
    schedule_id = reference.schedule_id()
    for _, tr in traces:
        # every method must share the reference schedule byte for byte
        if tr.schedule_id() != schedule_id:
            raise SymteError("window schedules diverged between methods")
    results = [("ordinal", reference.config["alphabet"], 0.0, 0.0)]
    for spec, tr in traces:
        results.append((spec.label(), tr.config["alphabet"], mse(tr, reference, "xy"), mse(tr, reference, "yx")))
    cfg = _base_config(args, config, len(x), dropped)
    cfg.update(
        reference="ordinal",
        window_len=reference.config["window_len"],
        stride=reference.config["stride"],
        schedule_id=schedule_id,
    )
    if args.format == "json":
        series = [
            {"name": label, "te_xy": tr.te_xy.tolist(), "te_yx": tr.te_yx.tolist()}
            for label, tr in [("ordinal", reference)] + [(s.label(), t) for s, t in traces]
        ]
        return _dump_json(
            {
                "config": cfg,
                "schedule": reference.window_starts.tolist(),
                "series": series,
                "mse": [
                    {"method": label, "alphabet": a, "mse_xy": mxy, "mse_yx": myx}
                    for label, a, mxy, myx in results
                ],
            }
        )
    rows = [("method", "alphabet", "mse_xy", "mse_yx", "schedule_id")]
    rows += [
        (label, a, format_float(mxy), format_float(myx), schedule_id)
        for label, a, mxy, myx in results
    ]
    return _csv_rows(rows)


def _cell(kind, m, **kw):
    try:
        return alphabet_size(kind, m, **kw)
    except AlphabetOverflow:
        return "overflow"
    except InvalidParameters:
        return ""


def cmd_alphabet(args):
    if len(args.m) > 2:
        raise UsageError("--m takes M or MIN MAX")
    lo, hi = args.m[0], args.m[-1]
    if lo < 2 or hi < lo:
        raise UsageError("--m range must satisfy 2 <= MIN <= MAX")
    if any(b < 2 for b in args.bins) or any(t < 1 for t in args.t_extremes):
        raise UsageError("--bins must be >= 2 and --t-extremes >= 1")
    columns = ["ordinal"] + [f"binning_b{b}" for b in args.bins] + [f"principal_t{t}" for t in args.t_extremes]
    table = []
    for m in range(lo, hi + 1):
        row = [_cell("ordinal", m)]
        row += [_cell("binning", m, b=b) for b in args.bins]
        row += [_cell("principal", m, t=t) for t in args.t_extremes]
        table.append((m, row))
    if args.format == "json":
        return _dump_json(
            {
                "config": {"m_min": lo, "m_max": hi, "bins": args.bins, "t_extremes": args.t_extremes},
                "schedule": [m for m, _ in table],
                "series": [
                    {"name": name, "values": [row[j] if row[j] != "" else None for _, row in table]}
                    for j, name in enumerate(columns)
                ],
            }
        )
    return _csv_rows([["m"] + columns] + [[m] + row for m, row in table])


def cmd_synth(args):
    try:
        spec = CoupledSystemSpec(
            kind=args.kind,
            n=args.n,
            coupling=args.coupling,
            noise_std=args.noise_std,
            seed=args.seed,
            burn_in=args.burn_in,
        )
    except InvalidParameters as exc:
        raise UsageError(str(exc)) from None
    x, y = generate(spec)
    buf = io.StringIO()
    write_pair_csv(x, y, buf)
    return buf.getvalue()


COMMANDS = {
    "compute": cmd_compute,
    "trace": cmd_trace,
    "compare": cmd_compare,
    "alphabet": cmd_alphabet,
    "synth": cmd_synth,
}


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="symte: %(levelname)s: %(message)s", stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        text = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"symte: error: {exc}", file=sys.stderr)
        return 2
    except (SymteError, OSError, ValueError) as exc:
        print(f"symte: error: {exc}", file=sys.stderr)
        return 1
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        with contextlib.suppress(BrokenPipeError):
            sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
