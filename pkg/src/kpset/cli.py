"""``kpset`` command line.

Exit codes: 0 success, 1 usage or input error, 2 invariant violation,
3 statistical flag raised by an experiment.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import gf2poly as gf
from .bounds import BoundParams, report as bound_report
from .budget import BudgetExceededError
from .discrepancy import grid_discrepancy, star_discrepancy_exact
from .experiments import ExperimentConfig, records_to_csv, run_experiment, summary_to_json
from .lattice import (UnionRecipe, build_union, draw_recipe, korobov_set, point_set_text,
                      read_point_set, shift_set)
from .oracle import SUITE_ALIASES, SUITES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT, EXIT_FLAG = 0, 1, 2, 3

DELTA_HELP = ("success probability: the bounds hold with probability AT LEAST delta "
              "(not the usual failure probability), so larger delta gives larger bounds")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _modulus(text: str | None, m: int) -> int:
    if text is None or text == "auto":
        return gf.smallest_irreducible(m)
    p = gf.from_hex(text)
    if gf.degree(p) != m or not gf.is_irreducible(p):
        raise UsageError(f"{text} is not an irreducible polynomial of degree {m}")
    return p


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def cmd_gen_poly(args) -> int:
    if not 1 <= args.m <= 24:
        raise UsageError("--m must be in 1..24")
    for p in gf.irreducibles(args.m):
        print(gf.to_hex(p))
    return EXIT_OK


def cmd_gen(args) -> int:
    gf.check_m(args.m)
    p = _modulus(args.p, args.m)
    P = korobov_set(gf.from_hex(args.q), p, args.s)
    if args.shift:
        P = shift_set(P, [int(t, 16) for t in args.shift.split(",")])
    _write(point_set_text(P), args.out)
    return EXIT_OK


def cmd_union(args) -> int:
    if args.from_recipe:
        recipe = UnionRecipe.from_text(Path(args.from_recipe).read_text(encoding="utf-8"))
    else:
        missing = [f for f in ("mode", "m", "s", "seed") if getattr(args, f) is None]
        if missing:
            raise UsageError("union needs --" + ", --".join(missing) + " (or --from-recipe)")
        gf.check_m(args.m)
        p = _modulus(args.p, args.m)
        recipe = draw_recipe(args.mode, args.m, args.s, p, args.seed, args.trial, zero_shifts=args.zero_shifts)
    union = build_union(recipe)
    _write(point_set_text(union), args.out)
    recipe_path = args.recipe or (None if args.out in (None, "-") else args.out + ".recipe")
    if recipe_path is None:
        raise UsageError("writing the point set to stdout needs an explicit --recipe FILE")
    Path(recipe_path).write_text(recipe.to_text(), encoding="utf-8", newline="\n")
    return EXIT_OK


def cmd_disc(args) -> int:
    P = read_point_set(args.input)
    rep = grid_discrepancy(P)
    if args.exact:
        rep.exact = star_discrepancy_exact(P)
        if not rep.grid_max <= rep.exact + 1e-12 or not rep.exact <= rep.upper_bound + 1e-12:
            sys.stdout.write(rep.to_text())
            print("invariant violation: exact value outside [grid_max, upper_bound]", file=sys.stderr)
            return EXIT_INVARIANT
    sys.stdout.write(rep.to_text())
    return EXIT_OK


def cmd_bound(args) -> int:
    rep = bound_report(BoundParams(args.m, args.s, args.delta, B=args.B))
    for key, value in rep.to_dict().items():
        print(f"{key} {format(value, '.17g')}")
    return EXIT_OK


def cmd_verify(args) -> int:
    names = SUITES if args.suite == "all" else (args.suite,)
    p = None if args.p is None else _modulus(args.p, args.m)
    results = []
    for name in names:
        if name not in SUITES and name not in SUITE_ALIASES:
            raise UsageError(f"unknown suite {name!r}; choose from all, {', '.join(SUITES)}")
        res = run_suite(name, args.m, args.s, p=p, seed=args.seed, samples=args.samples)
        results.append(res)
        print(res.line())
        for w in res.witnesses:
            print(f"  witness {w}")
    if args.report:
        payload = [{"suite": r.suite, "instances_checked": r.instances_checked,
                    "max_violation": str(r.max_violation), "pass": r.passed,
                    "witnesses": [str(w) for w in r.witnesses],
                    "details": {k: str(v) if not isinstance(v, (int, bool)) else v for k, v in r.details.items()}}
                   for r in results]
        Path(args.report).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK if all(r.passed for r in results) else EXIT_INVARIANT


def cmd_experiment(args) -> int:
    if args.config:
        cfg = ExperimentConfig.from_json(Path(args.config).read_text(encoding="utf-8"))
    else:
        if args.m is None or args.s is None:
            raise UsageError("experiment needs --config FILE or at least --m and --s")
        cfg = ExperimentConfig(m=args.m, s=args.s, delta=args.delta, mode=args.mode, trials=args.trials,
                               seed=args.seed, p=args.p or "auto", zero_shifts=args.zero_shifts)
    result = run_experiment(cfg, workers=args.workers)
    csv_text = records_to_csv(result.records)
    if args.csv:
        Path(args.csv).write_text(csv_text, encoding="utf-8", newline="\n")
    summary = summary_to_json(result.summary)
    if args.summary:
        Path(args.summary).write_text(summary, encoding="utf-8", newline="\n")
    if not args.csv:
        sys.stdout.write(csv_text)
    sys.stderr.write(summary)
    if result.violated:
        return EXIT_INVARIANT
    if result.flagged:
        return EXIT_FLAG
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kpset", description="Shifted Korobov polynomial lattice unions over GF(2).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("gen-poly", help="list irreducible polynomials of degree m (hex)")
    sp.add_argument("--m", type=int, required=True)
    sp.set_defaults(func=cmd_gen_poly)

    sp = sub.add_parser("gen", help="write one Korobov lattice P_p(q), optionally shifted")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--q", required=True, help="generator polynomial, hex")
    sp.add_argument("--p", help="modulus, hex, or 'auto' (smallest irreducible)")
    sp.add_argument("--shift", help="comma-separated hex numerators of a digital shift")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("union", help="draw and write a union plus its recipe")
    sp.add_argument("--mode", choices=["thm1", "thm2", "theorem1", "theorem2"])
    sp.add_argument("--m", type=int)
    sp.add_argument("--s", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--trial", type=int, default=0)
    sp.add_argument("--p", help="modulus, hex, or 'auto'")
    sp.add_argument("--out", default="union.pts")
    sp.add_argument("--recipe", help="recipe path (default: OUT.recipe)")
    sp.add_argument("--from-recipe", help="rebuild from an existing recipe file")
    sp.add_argument("--zero-shifts", action="store_true", help="debug: use the zero shift everywhere")
    sp.set_defaults(func=cmd_union)

    sp = sub.add_parser("disc", help="dyadic-grid (and optionally exact) star discrepancy")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--exact", action="store_true")
    sp.set_defaults(func=cmd_disc)

    sp = sub.add_parser("bound", help="t0 and the discrepancy bounds", description=DELTA_HELP)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--delta", type=float, required=True, help=DELTA_HELP)
    sp.add_argument("--B", type=float, help="character-sum budget (default: s)")
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("verify", help="exhaustive identity checks")
    sp.add_argument("--suite", required=True, help="all, " + ", ".join(SUITES))
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--s", type=int, default=1)
    sp.add_argument("--p", help="modulus, hex (default: every irreducible of degree m)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--report", help="write a JSON report here")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("experiment", help="seeded Monte Carlo trials", description=DELTA_HELP)
    sp.add_argument("--config", help="JSON file with ExperimentConfig fields")
    sp.add_argument("--mode", default="theorem1", choices=["thm1", "thm2", "theorem1", "theorem2"])
    sp.add_argument("--m", type=int)
    sp.add_argument("--s", type=int)
    sp.add_argument("--delta", type=float, default=0.5, help=DELTA_HELP)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--p")
    sp.add_argument("--zero-shifts", action="store_true")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--csv")
    sp.add_argument("--summary")
    sp.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, BudgetExceededError, OSError) as exc:
        print(f"kpset {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
