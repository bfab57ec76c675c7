"""Command line interface.

Four commands:

* bound   one left-tail bound evaluation, printed as text or JSON
* sweep   delimited (lambda, n, alpha, z) datasets on stdout or a file
* verify  the oracle suite, one PASS/FAIL line per invariant
* figure  the curated comparison datasets, optionally rendered to PNGs

Exit codes: 0 on success, 1 when a constraint or configuration is
violated (the message names the constraint), 2 on numeric failure.
Identical configurations and seeds produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import IO

from . import bounds, laws, oracle, report
from .errors import ConstraintError, NumericError

EXIT_OK = 0
EXIT_CONSTRAINT = 1
EXIT_NUMERIC = 2

_FAMILIES = ("binomial", "poisson", "normal")


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as constraint violations."""

    def error(self, message: str):
        raise ConstraintError(message)


def _add_law_arguments(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument("--family", required=True, choices=_FAMILIES)
    cmd.add_argument("--m", required=True, type=float, help="total mean budget")
    cmd.add_argument("--s", required=True, type=float, help="total second moment budget")
    cmd.add_argument("--n", type=int, default=None, help="summand count (binomial only)")
    spot = cmd.add_mutually_exclusive_group(required=True)
    spot.add_argument("--x", type=float, help="threshold on the original scale")
    spot.add_argument("--z", type=float, help="standardized threshold; x = m + z*sqrt(s)")


def _make_law(args: argparse.Namespace) -> laws.ReferenceLaw:
    if args.family == "binomial":
        if args.n is None:
            raise ConstraintError("the binomial family requires --n")
        return laws.scaled_binomial(args.m, args.s, args.n)
    if args.n is not None:
        raise ConstraintError(f"--n applies to the binomial family, not {args.family}")
    if args.family == "poisson":
        return laws.scaled_poisson(args.m, args.s)
    return laws.shifted_normal(args.m, args.s)


def _resolve_x(args: argparse.Namespace, law: laws.ReferenceLaw) -> float:
    if args.x is not None:
        return args.x
    return law.budget.x_of_z(args.z)


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part != ""]
    except ValueError as exc:
        raise ConstraintError(f"could not parse float list {text!r}") from exc


def _parse_ns(text: str) -> list[int | None]:
    out: list[int | None] = []
    for part in text.split(","):
        if part == "":
            continue
        if part == "inf":
            out.append(None)
        else:
            try:
                out.append(int(part))
            except ValueError as exc:
                raise ConstraintError(f"could not parse summand count {part!r}") from exc
    return out


def cmd_bound(args: argparse.Namespace) -> int:
    law = _make_law(args)
    x = _resolve_x(args, law)
    alpha = args.alpha
    if alpha is None:
        alpha = "3" if law.is_lattice else "2"
    if alpha == "inf":
        value = bounds.exponential_bound(law, x)
        result = bounds.BoundResult(value, bounds.regime_of(law, x))
    else:
        result = bounds.left_tail_bound(law, int(alpha), x)
    if args.format == "json":
        payload = {
            "family": law.family.value,
            "alpha": alpha,
            "x": x,
            "value": result.value,
            "regime": result.regime.value,
            "w_root": result.w_root,
            "cell": result.cell,
        }
        print(json.dumps(payload))
    else:
        line = f"value={result.value!r} regime={result.regime.value} alpha={alpha}"
        if result.w_root is not None:
            line += f" w_root={result.w_root!r}"
        if result.cell is not None:
            line += f" cell={result.cell}"
        print(line)
    return EXIT_OK


def _open_out(path: str | None) -> IO[str]:
    if path is None or path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8")


def _emit_rows(rows, args) -> None:
    fh = _open_out(args.out)
    try:
        if args.format == "json":
            report.write_jsonl(rows, fh)
        else:
            report.write_csv(rows, fh)
    finally:
        if fh is not sys.stdout:
            fh.close()


def cmd_sweep(args: argparse.Namespace) -> int:
    lambdas = _parse_floats(args.lambdas)
    ns = _parse_ns(args.ns)
    if not lambdas or not ns:
        raise ConstraintError("sweep needs at least one lambda and one n")
    alphas = [part for part in args.alphas.split(",") if part != ""]
    grids = {lam: report.uniform_z_grid(lam, args.grid) for lam in lambdas}
    rows = report.sweep(lambdas, ns, alphas, grids)
    _emit_rows(rows, args)
    return EXIT_OK


def cmd_figure(args: argparse.Namespace) -> int:
    if args.fig == 2:
        rows = report.figure_dataset(points=args.grid)
    else:
        lo, hi = 1.1, 8.0
        count = max(2, args.grid)
        lambdas = [lo + (hi - lo) * i / (count - 1) for i in range(count)]
        rows = report.comparison_curve(lambdas, x=1.0)
    _emit_rows(rows, args)
    if args.plot_dir is not None:
        if args.fig == 2:
            paths = report.render_panels(rows, args.plot_dir)
        else:
            paths = [report.render_comparison(rows, args.plot_dir)]
        for path in paths:
            print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    results = oracle.run_verification(
        seed=args.seed,
        grid_steps=args.grid,
        grid_rel_tol=args.tol,
    )
    failed = 0
    for res in results:
        tag = "PASS" if res.ok else "FAIL"
        failed += not res.ok
        print(
            f"{tag} {res.name}: checked={res.checked} violations={res.violations} "
            f"worst={res.worst:.3e}"
        )
    total = len(results)
    print(f"{total - failed}/{total} checks passed")
    return EXIT_OK if failed == 0 else EXIT_CONSTRAINT


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lefttail", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    cmd = sub.add_parser("bound", help="evaluate one left-tail bound")
    _add_law_arguments(cmd)
    cmd.add_argument("--alpha", choices=("2", "3", "inf"), default=None,
                     help="moment order (default: 3 for lattice, 2 for normal)")
    cmd.add_argument("--format", choices=("text", "json"), default="text")
    cmd.set_defaults(func=cmd_bound)

    cmd = sub.add_parser("sweep", help="tabulate bounds over a (lambda, n, z) grid")
    cmd.add_argument("--lambdas", required=True, help="comma-separated lambda values")
    cmd.add_argument("--ns", required=True, help="comma-separated n values; inf for the Poisson family")
    cmd.add_argument("--alphas", default="0,2,3,inf", help="comma-separated alpha tags")
    cmd.add_argument("--grid", type=int, default=200, help="z points per lambda")
    cmd.add_argument("--format", choices=("csv", "json"), default="csv")
    cmd.add_argument("--out", default=None, help="output path (default stdout)")
    cmd.set_defaults(func=cmd_sweep)

    cmd = sub.add_parser("verify", help="run the oracle suite")
    cmd.add_argument("--seed", type=int, default=20260816)
    cmd.add_argument("--grid", type=int, default=20000,
                     help="w-grid steps for the brute-force agreement check")
    cmd.add_argument("--tol", type=float, default=1e-4,
                     help="relative tolerance for grid-vs-tangency agreement")
    cmd.set_defaults(func=cmd_verify)

    cmd = sub.add_parser("figure", help="emit the curated comparison datasets")
    cmd.add_argument("--fig", type=int, choices=(1, 2), default=2)
    cmd.add_argument("--grid", type=int, default=200, help="points per curve")
    cmd.add_argument("--format", choices=("csv", "json"), default="csv")
    cmd.add_argument("--out", default=None, help="output path (default stdout)")
    cmd.add_argument("--plot-dir", default=None, help="also render PNGs into this directory")
    cmd.set_defaults(func=cmd_figure)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConstraintError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
