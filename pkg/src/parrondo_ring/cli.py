"""Command-line front end.

Subcommands: classes, matrix, stationary, mu, interval, volume, table,
surface, simulate.  Output goes to stdout (or --out) as CSV with a
header row, or as a JSON envelope with --format json.  Floats print
with 6 significant digits; --exact switches the numeric pipeline to
rational arithmetic and prints full fractions.  Identical invocations
produce byte-identical output, seeds included.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

import numpy as np

from . import reports
from .chain import Params, build_reduced_chain
from .means import mean_rate, mean_report
from .region import (
    parrondo_interval,
    surface_grid,
    volume_monte_carlo,
    volume_riemann,
)
from .simulate import coupled_simulate, simulate
from .states import Symmetry, count_classes, enumerate_classes
from .stationary import solve_stationary


def _prob(text: str) -> Fraction:
    """Parse a probability as an exact rational ('0.7', '7/10', '1')."""
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from e
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError(f"probability {text} outside [0, 1]")
    return value


def _param_list(text: str) -> list[Fraction]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("expected four comma-separated values p0,p1,p2,p3")
    return [_prob(p) for p in parts]


def _symmetry(text: str) -> Symmetry:
    try:
        return Symmetry(text.lower())
    except ValueError as e:
        raise argparse.ArgumentTypeError("symmetry must be 'cyclic' or 'dihedral'") from e


def _emit(args, command: str, config: dict, columns: list[str], rows: list[list]) -> None:
    exact = bool(getattr(args, "exact", False))
    if args.format == "json":
        text = reports.json_text(command, config, columns, rows, exact)
    else:
        text = reports.csv_text(columns, rows, exact)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _threads_default() -> int:
    return int(os.environ.get("PARRONDO_THREADS", "1"))


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--out", help="write the delimited output to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parrondo",
        description="Cooperative Parrondo games on a ring of players",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classes", help="count or list the symmetry classes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--symmetry", type=_symmetry, default=Symmetry.CYCLIC)
    p.add_argument("--list", action="store_true", help="one line per class")
    _add_common(p)

    p = sub.add_parser("matrix", help="reduced transition matrix entries")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--symmetry", type=_symmetry, default=Symmetry.CYCLIC)
    p.add_argument("--params", type=_param_list, help="p0,p1,p2,p3; omit for symbolic entries")
    p.add_argument("--exact", action="store_true")
    _add_common(p)

    p = sub.add_parser("stationary", help="stationary distribution of a reduced chain")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--symmetry", type=_symmetry, default=None)
    p.add_argument("--params", type=_param_list, required=True)
    p.add_argument("--exact", action="store_true")
    _add_common(p)

    p = sub.add_parser("mu", help="profit rates of games A, B, and C")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--symmetry", type=_symmetry, default=None)
    p.add_argument("--p0", type=_prob, required=True)
    p.add_argument("--p1", type=_prob, required=True)
    p.add_argument("--p2", type=_prob, default=None, help="defaults to p1")
    p.add_argument("--p3", type=_prob, required=True)
    p.add_argument("--gamma", type=_prob, default=Fraction(1, 2))
    p.add_argument("--p", type=_prob, default=Fraction(1, 2))
    p.add_argument("--exact", action="store_true")
    _add_common(p)

    p = sub.add_parser("interval", help="Parrondo p1-interval at fixed (p0, p3)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p0", type=_prob, required=True)
    p.add_argument("--p3", type=_prob, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    _add_common(p)

    p = sub.add_parser("volume", help="Parrondo-region volume estimate")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("riemann", "mc"), required=True)
    p.add_argument("--grid", type=int, default=100)
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("table", help="interval and rate sweep at a named parameter point")
    p.add_argument("--name", choices=sorted(reports.TABLE_PRESETS), required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--nmin", type=int, default=3)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--plot", help="also render the rates to this image file")
    _add_common(p)

    p = sub.add_parser("surface", help="profit-rate samples over the parameter cube")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--which", choices=("muB", "muC"), required=True)
    p.add_argument("--plot", help="also render heatmap slices to this image file")
    _add_common(p)

    p = sub.add_parser("simulate", help="Monte Carlo play of one game")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--game", choices=("a", "b", "c"), required=True)
    p.add_argument("--params", type=_param_list, required=True)
    p.add_argument("--gamma", type=_prob, default=Fraction(1, 2))
    p.add_argument("--p", type=_prob, default=Fraction(1, 2))
    p.add_argument("--turns", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--initial", type=lambda s: int(s, 0), default=None,
                   help="initial configuration as an integer (e.g. 0b0101)")
    p.add_argument("--coupled", action="store_true",
                   help="also run the reversed-role coupled process")
    p.add_argument("--trace-out", help="write turn,increment,sum CSV to this file")
    p.add_argument("--plot", help="also render the profit path to this image file")
    _add_common(p)

    return parser


def _cmd_classes(args) -> None:
    if args.list:
        rows = [
            [c.canonical, c.orbit_size, c.ones_count]
            for c in enumerate_classes(args.n, args.symmetry)
        ]
        columns = ["canonical", "orbit_size", "ones_count"]
    else:
        rows = [[args.n, args.symmetry.value, count_classes(args.n, args.symmetry)]]
        columns = ["n", "symmetry", "count"]
    _emit(args, "classes", {"n": args.n, "symmetry": args.symmetry.value, "list": args.list},
          columns, rows)


def _symbolic_entry(counts: tuple[int, ...], n: int) -> str:
    from .chain import SYMBOLS

    terms = [
        (f"{c}*{s}" if c > 1 else s)
        for c, s in zip(counts, SYMBOLS)
        if c
    ]
    return f"({'+'.join(terms)})/{n}" if terms else "0"


def _cmd_matrix(args) -> None:
    chain = build_reduced_chain(args.n, args.symmetry)
    columns = ["row", "col", "entry"]
    rows = []
    if args.params is None:
        for i, row in enumerate(chain.rows):
            for j in sorted(row):
                rows.append([chain.classes[i].canonical, chain.classes[j].canonical,
                             _symbolic_entry(row[j], args.n)])
    else:
        params = Params(*args.params)
        mat = chain.transition_matrix(params, exact=args.exact)
        if args.exact:
            for i, row in enumerate(mat):
                for j in sorted(row):
                    rows.append([chain.classes[i].canonical, chain.classes[j].canonical, row[j]])
        else:
            for i, row in enumerate(chain.rows):
                for j in sorted(row):
                    rows.append([chain.classes[i].canonical, chain.classes[j].canonical,
                                 float(mat[i, j])])
    config = {"n": args.n, "symmetry": args.symmetry.value}
    if args.params is not None:
        config["params"] = ",".join(str(v) for v in args.params)
    _emit(args, "matrix", config, columns, rows)


def _cmd_stationary(args) -> None:
    params = Params(*args.params)
    symmetry = args.symmetry or (
        Symmetry.DIHEDRAL if params.p1 == params.p2 else Symmetry.CYCLIC
    )
    chain = build_reduced_chain(args.n, symmetry)
    dist = solve_stationary(chain.transition_matrix(params, exact=args.exact), exact=args.exact)
    rows = [[c.canonical, w] for c, w in zip(chain.classes, dist.weights)]
    _emit(args, "stationary",
          {"n": args.n, "symmetry": symmetry.value,
           "params": ",".join(str(v) for v in args.params)},
          ["class", "weight"], rows)


def _cmd_mu(args) -> None:
    p2 = args.p1 if args.p2 is None else args.p2
    params = Params(args.p0, args.p1, p2, args.p3, p=args.p, gamma=args.gamma)
    report = mean_report(args.n, params, symmetry=args.symmetry, exact=args.exact)
    rows = [[report.mu_a, report.mu_b, report.mu_c]]
    _emit(args, "mu",
          {"n": args.n, "p0": args.p0, "p1": args.p1, "p2": p2, "p3": args.p3,
           "p": args.p, "gamma": args.gamma},
          ["mu_a", "mu_b", "mu_c"], rows)


def _cmd_interval(args) -> None:
    iv = parrondo_interval(args.n, args.p0, args.p3, tol=args.tol)
    rows = [[None if iv.empty else iv.lower, None if iv.empty else iv.upper, iv.empty]]
    _emit(args, "interval", {"n": args.n, "p0": args.p0, "p3": args.p3, "tol": args.tol},
          ["p1_lower", "p1_upper", "empty"], rows)


def _cmd_volume(args) -> None:
    threads = args.threads if args.threads is not None else _threads_default()
    if args.method == "riemann":
        est = volume_riemann(args.n, grid=args.grid, threads=threads)
    else:
        est = volume_monte_carlo(args.n, samples=args.samples, seed=args.seed, threads=threads)
    rows = [[est.n, est.method, est.volume, est.points, est.stderr, est.seed]]
    _emit(args, "volume",
          {"n": args.n, "method": args.method, "grid": args.grid,
           "samples": args.samples, "seed": args.seed},
          ["n", "method", "volume", "points", "stderr", "seed"], rows)


def _cmd_table(args) -> None:
    rows = reports.table_rows(args.name, args.nmax, nmin=args.nmin,
                              exact=args.exact, tol=args.tol)
    if args.plot:
        reports.plot_table(rows, args.plot, f"{args.name} point, rings {args.nmin}..{args.nmax}")
    _emit(args, "table", {"name": args.name, "nmin": args.nmin, "nmax": args.nmax},
          reports.TABLE_COLUMNS, rows)


def _cmd_surface(args) -> None:
    values = surface_grid(args.n, args.grid, args.which)
    if args.plot:
        reports.plot_surface(values, args.grid, args.plot, args.which, args.n)
    rows = [[float(a), float(b), float(c), float(v)] for a, b, c, v in values]
    _emit(args, "surface", {"n": args.n, "grid": args.grid, "which": args.which},
          ["p0", "p3", "p1", "value"], rows)


def _write_trace(trace, path: str) -> None:
    with open(path, "w", newline="") as fh:
        reports.write_csv(
            fh,
            ["turn", "increment", "sum"],
            [[t + 1, int(inc), int(s)] for t, (inc, s) in enumerate(zip(trace.increments, trace.sums))],
        )


def _cmd_simulate(args) -> None:
    params = Params(*args.params, p=args.p, gamma=args.gamma)
    columns = ["role", "game", "turns", "seed", "final_sum", "mean_rate", "stderr"]
    if args.coupled and args.game != "b":
        raise ValueError("--coupled runs the reversed-role construction of game b only")
    if args.coupled:
        first, second = coupled_simulate(args.n, params, turns=args.turns,
                                         seed=args.seed, initial=args.initial)
        rows = [
            ["primary", first.game, first.turns, first.seed, first.total,
             first.mean, first.increment_stderr],
            ["coupled", second.game, second.turns, second.seed, second.total,
             second.mean, second.increment_stderr],
        ]
        trace = first
    else:
        trace = simulate(args.n, params, game=args.game, turns=args.turns,
                         seed=args.seed, initial=args.initial, gamma=args.gamma)
        rows = [["primary", trace.game, trace.turns, trace.seed, trace.total,
                 trace.mean, trace.increment_stderr]]
    if args.trace_out:
        _write_trace(trace, args.trace_out)
    if args.plot:
        reports.plot_trace(
            np.arange(1, trace.turns + 1), trace.sums, args.plot,
            f"game {trace.game.upper()} on a ring of {args.n}, seed {trace.seed}",
        )
    _emit(args, "simulate",
          {"n": args.n, "game": args.game, "turns": args.turns, "seed": args.seed,
           "params": ",".join(str(v) for v in args.params), "coupled": args.coupled},
          columns, rows)


_HANDLERS = {
    "classes": _cmd_classes,
    "matrix": _cmd_matrix,
    "stationary": _cmd_stationary,
    "mu": _cmd_mu,
    "interval": _cmd_interval,
    "volume": _cmd_volume,
    "table": _cmd_table,
    "surface": _cmd_surface,
    "simulate": _cmd_simulate,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _HANDLERS[args.command](args)
    except (ValueError, NotImplementedError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
