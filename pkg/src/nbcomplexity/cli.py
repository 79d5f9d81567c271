"""Command-line entry point: analyze, verify, gen and bench.

Reports are JSON Lines. Every line has a ``kind``; the last line has kind
``timestamp`` and carries the wall-clock time and phase timings, which are
the only non-reproducible values and are left out of the report digest.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
import time
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from . import centred, complexity, expansion, wcol
from .errors import ContractViolation, GraphParseError, GuardExceeded
from .graph import FAMILIES, Graph, format_graph, generate, parse_graph
from .verdict import _plain
from .verify import SUITES, exhaustive_corpus, random_corpus, run_suite, CorpusItem

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2, 3

ANALYZE_PARAMS = ("nu", "wcol", "chi", "grad0", "gradr", "treedepth")
DEFAULT_PARAMS = ("nu", "wcol", "chi", "grad0")


def tool_version() -> str:
    try:
        from importlib.metadata import version

        return version("artifact")
    except Exception:  # not installed
        return "0+unknown"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# -- report plumbing -------------------------------------------------------


class Report:
    def __init__(self, command: str):
        self.lines: list[dict] = []
        self.timings: dict[str, float] = {}
        self.command = command

    def add(self, kind: str, **fields):
        self.lines.append({"kind": kind, **_plain(fields)})

    def phase(self, name: str):
        report = self

        class _Timer:
            def __enter__(self):
                self.start = time.perf_counter()

            def __exit__(self, *exc):
                report.timings[name] = round((time.perf_counter() - self.start) * 1000, 3)

        return _Timer()

    def render(self) -> str:
        body = [json.dumps(line, sort_keys=True) for line in self.lines]
        digest = hashlib.sha256("\n".join(body).encode()).hexdigest()
        body.append(json.dumps({"kind": "digest", "report_sha256": digest}, sort_keys=True))
        stamp = {"kind": "timestamp",
                 "utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
                 "timings_ms": self.timings}
        body.append(json.dumps(stamp, sort_keys=True))
        return "\n".join(body) + "\n"


def _emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def parse_depth(text: str) -> Fraction:
    try:
        return expansion.half_integer(text)
    except ContractViolation as exc:
        raise UsageError(str(exc)) from None


def _read_graph(path: str, fmt: str) -> tuple[Graph, str]:
    data = Path(path).read_bytes()
    return parse_graph(data.decode("utf-8"), fmt), hashlib.sha256(data).hexdigest()


# -- analyze ---------------------------------------------------------------


def _magnitude(estimate) -> str:
    """Rough size of a possibly enormous integer or float, e.g. "1.2e+15"."""
    if isinstance(estimate, int) and estimate.bit_length() > 1000:
        return f"10^{int(estimate.bit_length() * math.log10(2))}"
    return f"{float(estimate):.3g}"


def _guard_note(name, default_n, guard_n, estimate):
    if guard_n > default_n:
        sys.stderr.write(f"note: {name} guard raised from n<={default_n} to n<={guard_n}; "
                         f"estimated work ~{_magnitude(estimate)} steps\n")


def analyze_graph(g: Graph, depth: Fraction, params, policy: str, seed: int,
                  guard_n: int | None = None, guard_m: int | None = None) -> list[dict]:
    """Compute the requested parameters; returns report records (kind, fields).

    ``policy`` is ``exact`` (refuse when a guard blocks an exact value),
    ``auto`` (exact when allowed, bounds otherwise) or ``heuristic``.
    """
    records = []
    integral = depth.denominator == 1
    r = int(depth) if integral else None
    for name in params:
        if name in ("nu", "wcol", "chi") and not integral:
            raise UsageError(f"parameter {name} needs an integer --r")
    values = {}

    def guarded(name, default_n, estimate, exact_fn, bound_fn, extra_ok=True):
        limit = guard_n if guard_n is not None else default_n
        allowed = g.n <= limit and extra_ok and policy != "heuristic"
        if allowed:
            _guard_note(name, default_n, limit, estimate)
            return exact_fn(limit)
        if policy == "exact":
            raise GuardExceeded(f"exact {name} refused for n={g.n}, m={g.m}; "
                                "rerun without --exact-all or raise the guard", estimate)
        return bound_fn()

    for name in params:
        if name == "nu":
            m_limit = guard_m if guard_m is not None else complexity.NU_GUARD_M
            rep = guarded(
                "nu", complexity.NU_GUARD_N, 2 ** (2 * g.n + g.m),
                lambda lim: complexity.nu_exact(g, r, max_n=lim, max_m=m_limit),
                lambda: complexity.nu_lower_bound(g, r, seed=seed),
                extra_ok=g.m <= m_limit)
            values["nu"] = rep
            records.append({"kind": "parameter", "name": f"nu_{r}", "value": str(rep.value),
                            "mode": rep.mode, "witness": rep.to_dict()["witness"]})
        elif name == "wcol":
            def wcol_exact_fn(lim):
                val, order = wcol.wcol_exact(g, 2 * r, max_n=lim)
                return val, order, "exact"

            def wcol_bound_fn():
                best = None
                for strategy in ("smallest-degree-last", "descending-degree", "local-search"):
                    val, order = wcol.wcol_heuristic(g, 2 * r, strategy, seed=seed)
                    if best is None or val < best[0]:
                        best = (val, order, "upper-bound")
                return best

            val, order, mode = guarded("wcol", wcol.WCOL_GUARD_N, math.factorial(g.n),
                                       wcol_exact_fn, wcol_bound_fn)
            values["wcol"] = (val, mode)
            records.append({"kind": "parameter", "name": f"wcol_{2 * r}", "value": val,
                            "mode": mode, "witness": {"order": order.to_line()}})
        elif name == "chi":
            def chi_exact_fn(lim):
                val, col = centred.chi_r_exact(g, 2 * r + 2, max_n=lim)
                return val, col, "exact"

            def chi_bound_fn():
                _, forest = centred.treedepth_exact(g, heuristic_fallback=True)
                col = centred.centred_colouring_from_forest(forest, g)
                return col.palette, col, "upper-bound"

            val, col, mode = guarded("chi", centred.CHI_GUARD_N, g.n ** g.n,
                                     chi_exact_fn, chi_bound_fn)
            values["chi"] = (val, mode)
            records.append({"kind": "parameter", "name": f"chi_{2 * r + 2}", "value": val,
                            "mode": mode, "witness": {"colouring": list(col.colours)}})
        elif name == "grad0":
            rep = expansion.grad0_exact(g)
            records.append({"kind": "parameter", "name": "grad_0", "value": str(rep.value),
                            "mode": rep.mode, "witness": rep.witness.to_lines()})
        elif name == "gradr":
            def grad_exact_fn(lim):
                return expansion.gradr_bruteforce(g, depth, max_n=lim)

            def grad_bound_fn():
                rep = expansion.grad0_exact(g)
                return expansion.GradReport(rep.value, depth, "lower-bound", rep.witness)

            rep = guarded("gradr", expansion.GRAD_GUARD_N, 2 ** g.n * g.n ** 2,
                          grad_exact_fn, grad_bound_fn)
            records.append({"kind": "parameter", "name": f"grad_{depth}", "value": str(rep.value),
                            "mode": rep.mode, "witness": rep.witness.to_lines()})
        elif name == "treedepth":
            def td_exact_fn(lim):
                val, forest = centred.treedepth_exact(g, max_n=lim)
                return val, forest, "exact"

            def td_bound_fn():
                val, forest = centred.treedepth_heuristic(g)
                return val, forest, "upper-bound"

            val, forest, mode = guarded("treedepth", centred.TREEDEPTH_GUARD_N, 2 ** g.n,
                                        td_exact_fn, td_bound_fn)
            records.append({"kind": "parameter", "name": "treedepth", "value": val,
                            "mode": mode, "witness": {"parent": list(forest.parent)}})
        else:
            raise UsageError(f"unknown parameter {name!r}; choose from {', '.join(ANALYZE_PARAMS)}")

    if "nu" in values and ("chi" in values or "wcol" in values):
        chi = values.get("chi", (None, None))
        wc = values.get("wcol", (None, None))
        bounds = complexity.theorem_bounds(g, r, chi=chi[0], wcol=wc[0], nu=values["nu"],
                                           chi_mode=chi[1], wcol_mode=wc[1])
        informational = bounds.informational or values["nu"].mode != "exact"
        if bounds.centred_bound is not None:
            records.append({"kind": "verdict", "name": "centred-colouring-bound",
                            "holds": bounds.centred_holds, "informational": informational,
                            "rhs": str(bounds.centred_bound),
                            "rhs_exponent": bounds.centred_bound.exponent})
        if bounds.weak_bound is not None:
            records.append({"kind": "verdict", "name": "weak-colouring-bound",
                            "holds": bounds.weak_holds, "informational": informational,
                            "rhs": str(bounds.weak_bound)})
    return records


def cmd_analyze(args) -> int:
    depth = parse_depth(args.r)
    params = [p.strip() for p in args.params.split(",") if p.strip()]
    if args.exact_all and args.heuristics:
        raise UsageError("--exact-all and --heuristics are mutually exclusive")
    policy = "exact" if args.exact_all else "heuristic" if args.heuristics else "auto"
    report = Report("analyze")
    with report.phase("parse"):
        g, digest = _read_graph(args.graph, args.format)
    report.add("header", tool="nbcomplexity", version=tool_version(), command="analyze",
               input_digest=digest, n=g.n, m=g.m, r=str(depth), seed=args.seed, policy=policy,
               params=params)
    with report.phase("compute"):
        records = analyze_graph(g, depth, params, policy, args.seed, args.guard_n, args.guard_m)
    for rec in records:
        kind = rec.pop("kind")
        report.add(kind, **rec)
    _emit(report.render(), args.out)
    violated = any(rec.get("holds") is False and not rec.get("informational") for rec in records)
    return EXIT_VIOLATION if violated else EXIT_OK


# -- verify ----------------------------------------------------------------


def _corpus_from_args(args):
    if args.graphs:
        items = []
        for path in args.graphs:
            g, _ = _read_graph(path, args.format)
            items.append(CorpusItem(Path(path).name, g))
        return items, {"kind": "files", "files": [Path(p).name for p in args.graphs]}
    n = args.n if args.n is not None else args.exhaustive
    if n is None:
        raise UsageError("give --exhaustive N, --n N with --random K, or graph files")
    if args.random:
        items = random_corpus(args.random, n, args.p, args.seed, connected=not args.all_graphs)
        spec = {"kind": "random", "count": args.random, "n": n, "p": args.p}
    else:
        items = exhaustive_corpus(n, connected=not args.all_graphs, labelled=args.labelled)
        spec = {"kind": "exhaustive", "max_n": n, "labelled": args.labelled}
    spec["connected_only"] = not args.all_graphs
    if args.max_m is not None:
        items = [it for it in items if it.graph.m <= args.max_m]
        spec["max_m"] = args.max_m
    return items, spec


def cmd_verify(args) -> int:
    report = Report("verify")
    x_samples = args.x_samples
    if x_samples is None:
        x_samples = 20 if args.suite == "wcol-witness" else 100
    params = {"x_all_n": args.x_all_n, "x_samples": x_samples, "colouring": args.colouring}
    if args.suite == "theorem15":
        params["depths"] = [parse_depth(d) for d in (args.depths or args.r or "1/2,1").split(",")]
    else:
        depth = parse_depth(args.r or "1")
        if depth.denominator != 1:
            raise UsageError(f"suite {args.suite} needs an integer --r")
        params["r"] = int(depth)
    if args.suite == "wcol-witness":
        params["orders"] = args.orders
    with report.phase("corpus"):
        corpus, spec = _corpus_from_args(args)
    report.add("header", tool="nbcomplexity", version=tool_version(), command="verify",
               suite=args.suite, corpus=spec, seed=args.seed)
    with report.phase("suite"):
        result = run_suite(args.suite, corpus, seed=args.seed, **params)
    report.add("suite", **result.to_dict())
    _emit(report.render(), args.out)
    if not result.holds:
        path = args.counterexample or f"counterexample-{args.suite}.json"
        Path(path).write_text(json.dumps(result.counterexample, sort_keys=True, indent=1) + "\n")
        sys.stderr.write(f"{args.suite}: {result.violations} violation(s); "
                         f"first counterexample written to {path}\n")
        return EXIT_VIOLATION
    return EXIT_OK


# -- gen -------------------------------------------------------------------

GEN_ARGS = {
    "path": ("n",), "cycle": ("n",), "complete": ("n",), "grid": ("rows", "cols"),
    "complete-bipartite": ("a", "b"), "random-bounded-degree": ("n", "d"),
    "erdos-renyi": ("n", "p"),
}


def _family_params(family, values):
    names = GEN_ARGS[family]
    if len(values) != len(names):
        raise UsageError(f"{family} takes {len(names)} argument(s): {' '.join(names)}")
    out = {}
    for name, text in zip(names, values):
        try:
            out[name] = float(text) if name == "p" else int(text)
        except ValueError:
            raise UsageError(f"bad value {text!r} for {name}") from None
    return out


def cmd_gen(args) -> int:
    params = _family_params(args.family, args.values)
    seeded = args.family in ("random-bounded-degree", "erdos-renyi")
    if args.count == 1:
        g = generate(args.family, seed=args.seed if seeded else None, **params)
        _emit(format_graph(g, args.format), args.out)
        return EXIT_OK
    if not args.out:
        raise UsageError("--count > 1 needs --out DIRECTORY")
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        g = generate(args.family, seed=args.seed + i if seeded else None, **params)
        (outdir / f"{args.family}-{i:03d}.txt").write_text(format_graph(g, args.format))
    return EXIT_OK


# -- bench -----------------------------------------------------------------


def _bench_runs(name: str, g: Graph, r: int, seed: int):
    """(mode label, callable returning a value) pairs for one parameter."""
    if name == "wcol":
        runs = [("exact", lambda: wcol.wcol_exact(g, 2 * r)[0])] if g.n <= wcol.WCOL_GUARD_N else []
        for strategy in ("smallest-degree-last", "descending-degree", "local-search"):
            runs.append((f"upper-bound:{strategy}",
                         lambda s=strategy: wcol.wcol_heuristic(g, 2 * r, s, seed=seed)[0]))
        return runs
    if name == "nu":
        runs = []
        if g.n <= complexity.NU_GUARD_N and g.m <= complexity.NU_GUARD_M:
            runs.append(("exact", lambda: complexity.nu_exact(g, r).value))
        runs.append(("lower-bound", lambda: complexity.nu_lower_bound(g, r, seed=seed).value))
        return runs
    if name == "chi":
        runs = [("exact", lambda: centred.chi_r_exact(g, 2 * r + 2)[0])] if g.n <= centred.CHI_GUARD_N else []
        runs.append(("upper-bound:treedepth-heuristic", lambda: centred.treedepth_heuristic(g)[0]))
        return runs
    if name == "treedepth":
        runs = [("exact", lambda: centred.treedepth_exact(g)[0])] if g.n <= centred.TREEDEPTH_GUARD_N else []
        runs.append(("upper-bound", lambda: centred.treedepth_heuristic(g)[0]))
        return runs
    if name == "grad0":
        return [("exact", lambda: expansion.grad0_exact(g).value)]
    raise UsageError(f"unknown bench parameter {name!r}")


def cmd_bench(args) -> int:
    depth = parse_depth(args.r)
    if depth.denominator != 1:
        raise UsageError("bench needs an integer --r")
    r = int(depth)
    graphs = []
    for path in args.graphs:
        g, _ = _read_graph(path, args.format)
        graphs.append((Path(path).name, g))
    if args.family:
        params = _family_params(args.family, args.values or [])
        seeded = args.family in ("random-bounded-degree", "erdos-renyi")
        for i in range(args.count):
            g = generate(args.family, seed=args.seed + i if seeded else None, **params)
            graphs.append((f"{args.family}-{i:03d}", g))
    if not graphs:
        raise UsageError("bench needs graph files or --family")
    handle = sys.stdout if not args.out or args.out == "-" else open(args.out, "w", newline="")
    try:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["graph_id", "n", "m", "parameter", "mode", "value", "millis"])
        for ident, g in graphs:
            for mode, fn in _bench_runs(args.parameter, g, r, args.seed):
                start = time.perf_counter()
                value = fn()
                millis = (time.perf_counter() - start) * 1000
                writer.writerow([ident, g.n, g.m, args.parameter, mode, str(value), f"{millis:.3f}"])
    finally:
        if handle is not sys.stdout:
            handle.close()
    return EXIT_OK


# -- argument parsing ------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nbcomplexity",
                     description="Neighbourhood complexity and sparsity parameters of small graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("edge-list", "dimacs"), default="edge-list")
        p.add_argument("--out", default=None, help="output file (default: stdout)")

    p = sub.add_parser("analyze", help="compute parameters of one graph")
    p.add_argument("graph")
    p.add_argument("--r", default="1", help='radius; half-integers as "k/2"')
    p.add_argument("--params", default=",".join(DEFAULT_PARAMS),
                   help=f"comma list from {', '.join(ANALYZE_PARAMS)}")
    p.add_argument("--exact-all", action="store_true", help="fail rather than fall back to bounds")
    p.add_argument("--heuristics", action="store_true", help="bounds only, no exhaustive search")
    p.add_argument("--guard-n", type=int, default=None)
    p.add_argument("--guard-m", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="run a property suite over a corpus")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("graphs", nargs="*", help="graph files (instead of a generated corpus)")
    p.add_argument("--exhaustive", type=int, default=None, metavar="N",
                   help="every graph with at most N vertices")
    p.add_argument("--n", type=int, default=None, help="vertex count (same as --exhaustive)")
    p.add_argument("--random", type=int, default=None, metavar="K",
                   help="K Erdos-Renyi graphs on --n vertices instead")
    p.add_argument("--p", type=float, default=0.4)
    p.add_argument("--labelled", action="store_true", help="labelled graphs, not isomorphism classes")
    p.add_argument("--all-graphs", action="store_true", help="include disconnected graphs")
    p.add_argument("--max-m", type=int, default=None, help="drop corpus graphs with more edges")
    p.add_argument("--r", default=None)
    p.add_argument("--depths", default=None, help='theorem15 depths, e.g. "1/2,1"')
    p.add_argument("--colouring", choices=("forest", "chi"), default="forest")
    p.add_argument("--x-all-n", type=int, default=5)
    p.add_argument("--x-samples", type=int, default=None,
                   help="random X per graph (default 100; 20 for wcol-witness)")
    p.add_argument("--orders", type=int, default=20)
    p.add_argument("--counterexample", default=None)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="write a generated graph")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("values", nargs="*")
    p.add_argument("--count", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="time parameter computations, CSV output")
    p.add_argument("parameter", choices=("wcol", "nu", "chi", "treedepth", "grad0"))
    p.add_argument("graphs", nargs="*")
    p.add_argument("--r", default="1")
    p.add_argument("--family", choices=FAMILIES, default=None)
    p.add_argument("--values", nargs="*", default=None, help="family parameters")
    p.add_argument("--count", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except GuardExceeded as exc:
        est = f" (estimated work ~{_magnitude(exc.estimate)})" if exc.estimate else ""
        sys.stderr.write(f"guard: {exc}{est}\n")
        return EXIT_USAGE
    except ContractViolation as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (GraphParseError, UnicodeDecodeError) as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_IO
    except OSError as exc:
        sys.stderr.write(f"i/o error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
