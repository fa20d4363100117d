"""Command line entry point: generate / encode / solve / verify / oracle /
bench-encoding, with machine-readable outputs and a stable exit-code
taxonomy (0 certified, 2 uncertified-but-usable, 64 usage, 65 bad data,
70 integrity violation, 75 backend failure).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import bounds as bounds_mod
from .backends import get_backend
from .cnf import CnfFormula, VarAllocator, write_dimacs
from .errors import BackendError, InputError, IntegrityError, ParseError
from .graphs import (
    Graph,
    cab_of_labeling,
    format_edge_list,
    from_generator_spec,
    load_graph,
    validate_labeling,
)
from .ladder import (
    encode_ring_window_amo,
    encode_ring_windows_pairwise,
    encode_ring_windows_seq,
    ladder_size_formulas,
)
from .model import build_instance
from .oracle import brute_force_cab, oracle_sweep
from .search import (
    ORDERS,
    SearchOptions,
    iterative_search,
    parallel_search,
    verify_result,
)

EXIT_OK = 0
EXIT_UNCERTIFIED = 2
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_INTEGRITY = 70
EXIT_BACKEND = 75


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _add_input_args(sub):
    sub.add_argument("--gen", help="generator spec, e.g. caterpillar:5,4 or random:100,200,7")
    sub.add_argument("--graph", help="path to an edge-list or Matrix Market file")


def _resolve_input(args) -> tuple[str, str | None, tuple[int, ...], Graph]:
    if bool(args.gen) == bool(args.graph):
        raise _UsageError("exactly one of --gen or --graph is required")
    if args.gen:
        family, params, g = from_generator_spec(args.gen)
        return args.gen, family, params, g
    g = load_graph(args.graph)
    return Path(args.graph).name, None, (), g


def build_parser() -> _Parser:
    parser = _Parser(prog="cabsat", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="write a generated instance as an edge list")
    p_gen.add_argument("--gen", required=True)
    p_gen.add_argument("-o", "--output", help="output path (default: stdout)")

    p_enc = sub.add_parser("encode", help="emit one decision instance as DIMACS CNF")
    _add_input_args(p_enc)
    p_enc.add_argument("--k", type=int, required=True, help="candidate objective value")
    p_enc.add_argument("-o", "--output", help="CNF path (default: stdout)")
    p_enc.add_argument("--map-out", help="also write the variable map as JSON")
    p_enc.add_argument("--no-map-comments", action="store_true",
                       help="skip the 'c x v l var' comment lines")
    p_enc.add_argument("--no-symmetry", action="store_true")

    p_solve = sub.add_parser("solve", help="search for the certified optimum")
    _add_input_args(p_solve)
    p_solve.add_argument("--lb", type=int, help="override lower bound")
    p_solve.add_argument("--ub", type=int, help="override upper bound")
    p_solve.add_argument("--bounds-name", help="look bounds up by instance name")
    p_solve.add_argument("--bounds-table", help="bounds file (default: packaged table)")
    p_solve.add_argument("--time-limit", type=float, help="wall seconds for the whole search")
    p_solve.add_argument("--mem-limit", type=int, help="per-worker memory cap in MB")
    p_solve.add_argument("--processes", type=int, default=1)
    p_solve.add_argument("--order", choices=ORDERS, default="linear")
    p_solve.add_argument("--no-symmetry", action="store_true")
    p_solve.add_argument("--no-verify-lb", action="store_true",
                         help="assume the lower bound is feasible instead of solving it")
    p_solve.add_argument("--solver", help="pysat[:name] or an external solver command")
    p_solve.add_argument("--verify-oracle", action="store_true",
                         help="cross-check against exhaustive enumeration (small graphs)")
    p_solve.add_argument("-o", "--output", help="result JSON path (default: stdout)")

    p_ver = sub.add_parser("verify", help="re-check a solve result JSON")
    _add_input_args(p_ver)
    p_ver.add_argument("--result", required=True, help="result JSON from 'solve'")
    p_ver.add_argument("--oracle", action="store_true",
                       help="also compare with exhaustive enumeration")

    p_orc = sub.add_parser("oracle", help="exact small-instance values by enumeration (TSV)")
    p_orc.add_argument("--gen", action="append", default=[],
                       help="generator spec; repeat for a sweep")
    p_orc.add_argument("--sweep", action="append", default=[],
                       help="size sweep 'family:lo..hi' for one-parameter families")
    p_orc.add_argument("--graph", help="path to a graph file")
    p_orc.add_argument("--witness", action="store_true", help="include an optimal labeling")

    p_bench = sub.add_parser(
        "bench-encoding",
        help="size table for the ring-window AMO encodings at one (n, w)",
    )
    p_bench.add_argument("--n", type=int, required=True)
    p_bench.add_argument("--w", type=int, required=True)
    return parser


# ---------------------------------------------------------------------------
# Subcommand bodies
# ---------------------------------------------------------------------------


def cmd_generate(args) -> int:
    _, _, g = from_generator_spec(args.gen)
    text = format_edge_list(g)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_encode(args) -> int:
    name, _, _, g = _resolve_input(args)
    from .model import BuildOptions

    instance = build_instance(g, args.k, BuildOptions(symmetry=not args.no_symmetry))
    comments = [f"instance {name} n={g.n} m={g.m} k={args.k}"]
    if not args.no_map_comments:
        comments.extend(instance.map_comment_lines())
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            write_dimacs(instance.formula, fh, comments)
    else:
        write_dimacs(instance.formula, sys.stdout, comments)
    if args.map_out:
        Path(args.map_out).write_text(instance.map_json(), encoding="utf-8")
    return EXIT_OK


def _solve_bounds(args, family, params, g) -> bounds_mod.BoundRange:
    if args.bounds_name:
        window = bounds_mod.table_bounds(args.bounds_name, args.bounds_table)
    elif family is not None:
        window = bounds_mod.bounds_for_family(family, params, g)
    else:
        window = bounds_mod.default_bounds(g)
    lb = args.lb if args.lb is not None else window.lb
    ub = args.ub if args.ub is not None else window.ub
    return bounds_mod.BoundRange(lb, ub).clamped(g.n)


def cmd_solve(args) -> int:
    name, family, params, g = _resolve_input(args)
    window = _solve_bounds(args, family, params, g)
    options = SearchOptions(
        symmetry=not args.no_symmetry,
        verify_lb=not args.no_verify_lb,
        processes=args.processes,
        order=args.order,
        time_limit=args.time_limit,
        mem_limit_mb=args.mem_limit,
        backend=args.solver,
    )
    if options.processes == 1 and options.order == "linear":
        state = iterative_search(g, window, options)
    else:
        state = parallel_search(g, window, options)
    report = verify_result(g, state, oracle_check=args.verify_oracle)
    payload = state.to_dict(name, g)
    payload["backend"] = get_backend(options.backend).describe()
    text = json.dumps(payload, indent=2)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    for line in report.lines():
        print(line, file=sys.stderr)
    return EXIT_OK if state.certified else EXIT_UNCERTIFIED


def cmd_verify(args) -> int:
    name, _, _, g = _resolve_input(args)
    payload = json.loads(Path(args.result).read_text(encoding="utf-8"))
    k_opt = payload["k_opt"]
    certified = payload["certified"]
    labeling = payload.get("labeling")
    if labeling is None:
        if k_opt > 1 and certified and not payload.get("lb_assumed"):
            raise IntegrityError(f"result claims k_opt={k_opt} without a labeling")
        print(f"{name}: no labeling to check; claimed k_opt={k_opt}")
        return EXIT_OK
    validate_labeling(g.n, labeling)
    achieved = cab_of_labeling(g, labeling)
    if achieved < k_opt:
        raise IntegrityError(f"labeling achieves {achieved}, claimed k_opt={k_opt}")
    if certified and achieved != k_opt:
        raise IntegrityError(
            f"labeling achieves {achieved} but {k_opt} was certified optimal"
        )
    print(f"{name}: labeling ok, achieves {achieved}, claimed k_opt={k_opt}"
          f"{' (certified)' if certified else ''}")
    if args.oracle:
        exact = brute_force_cab(g).cab
        if certified and exact != k_opt:
            raise IntegrityError(f"oracle value {exact} != certified {k_opt}")
        print(f"{name}: oracle value {exact}")
    return EXIT_OK


def _expand_sweep(spec: str) -> list[str]:
    family, sep, span = spec.partition(":")
    lo, dots, hi = span.partition("..")
    if not sep or not dots:
        raise _UsageError(f"sweep spec must look like family:lo..hi, got {spec!r}")
    try:
        return [f"{family}:{size}" for size in range(int(lo), int(hi) + 1)]
    except ValueError:
        raise _UsageError(f"non-integer sweep range in {spec!r}") from None


def cmd_oracle(args) -> int:
    instances: list[tuple[str, Graph]] = []
    if args.graph:
        instances.append((Path(args.graph).name, load_graph(args.graph)))
    specs = list(args.gen)
    for sweep in args.sweep:
        specs.extend(_expand_sweep(sweep))
    for spec in specs:
        _, _, g = from_generator_spec(spec)
        instances.append((spec, g))
    if not instances:
        raise _UsageError("oracle needs --graph, --gen, or --sweep")
    rows = oracle_sweep(instances)
    print("instance\tn\tm\tcab" + ("\twitness" if args.witness else ""))
    for (label, n, m, cab), (_, g) in zip(rows, instances):
        line = f"{label}\t{n}\t{m}\t{cab}"
        if args.witness:
            line += "\t" + ",".join(str(x) for x in brute_force_cab(g).witness)
        print(line)
    return EXIT_OK


def cmd_bench_encoding(args) -> int:
    n, w = args.n, args.w
    if not (1 < w <= n):
        raise _UsageError(f"need 1 < w <= n, got n={n} w={w}")

    def emitted(encoder):
        formula = CnfFormula()
        alloc = VarAllocator()
        ring = [alloc.new_var() for _ in range(n)]
        before = alloc.num_vars
        encoder(ring, formula, alloc)
        return alloc.num_vars - before, len(formula.clauses)

    ladder_aux, ladder_clauses = emitted(
        lambda ring, f, a: encode_ring_window_amo(ring, w, f, a)
    )
    pair_aux, pair_clauses = emitted(
        lambda ring, f, a: encode_ring_windows_pairwise(ring, w, f)
    )
    seq_aux, seq_clauses = emitted(
        lambda ring, f, a: encode_ring_windows_seq(ring, w, f, a)
    )
    ideal_aux, ideal_clauses = ladder_size_formulas(n, w)
    sqw = math.isqrt(w)

    rows = [
        ("ladder", "emitted", ladder_aux, ladder_clauses),
        ("ladder", "analytic", ideal_aux, ideal_clauses),
        ("pairwise", "emitted", pair_aux, pair_clauses),
        ("pairwise", "analytic", 0, (w - 1) * w // 2 + (n - 1) * (w - 1)),
        ("seq-per-window", "emitted", seq_aux, seq_clauses),
        ("seq-per-window", "analytic", n * (w - 2), n * (4 * w - 7)),
        ("bdd", "analytic", 2 * n * (w - 1), 4 * n * (w - 1)),
        ("card", "analytic", "O(n^2)", "O(n^2)"),
        ("product", "analytic", f"~{n * 2 * sqw}", f"~{n * (2 * w + 4 * sqw)}"),
    ]
    print("encoding\tkind\tn\tw\taux_vars\tclauses")
    for encoding, kind, aux, clauses in rows:
        print(f"{encoding}\t{kind}\t{n}\t{w}\t{aux}\t{clauses}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {
            "generate": cmd_generate,
            "encode": cmd_encode,
            "solve": cmd_solve,
            "verify": cmd_verify,
            "oracle": cmd_oracle,
            "bench-encoding": cmd_bench_encoding,
        }[args.command]
        return handler(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, json.JSONDecodeError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except InputError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IntegrityError as exc:
        print(f"integrity error: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except BackendError as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
