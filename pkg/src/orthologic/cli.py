"""Command-line front end.

Global flags (before the subcommand): ``--solver`` names an external SAT
solver executable, ``--timeout-ms`` bounds solver and prover runs, ``--jobs``
bounds worker parallelism, ``--seed`` is reserved for randomized workflows.

``prove`` exit codes: 0 proved, 1 not provable, 2 limit exceeded, 3 input
error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench as bench_mod
from . import report as report_mod
from .aig import AigError, cone_formula, emit_aag, formulas_to_circuit, parse_aag
from .cnf import CnfError, emit_dimacs, miter_cnf, tseitin
from .formula import FormulaError, FormulaStore
from .normalform import Normalizer
from .oracle import DepthLimitExceeded, naive_prove
from .prover import Verdict, check_derivations, prepare_goal, prove
from .solver import DEFAULT_TIMEOUT_MS, SolverConfig, run_external_solver

EXIT_PROVED = 0
EXIT_NOT_PROVABLE = 1
EXIT_LIMIT = 2
EXIT_INPUT_ERROR = 3


class InputError(Exception):
    pass


def _strip_comments(text: str) -> str:
    return "\n".join(line.split(";", 1)[0] for line in text.splitlines())


def read_goal_file(store: FormulaStore, path: str) -> tuple[int, int]:
    """Goal file: two formula s-expressions separated by the token ``|-``."""
    text = _strip_comments(Path(path).read_text())
    parts = text.split("|-")
    if len(parts) != 2:
        raise InputError(f"goal file must contain exactly one '|-', found {len(parts) - 1}")
    return store.parse(parts[0]), store.parse(parts[1])


def read_axioms_file(store: FormulaStore, path: str) -> list[tuple[int, int]]:
    """Axiom file: one ``lhs |- rhs`` inequality per line."""
    axioms = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split(";", 1)[0].strip()
        if not line:
            continue
        parts = line.split("|-")
        if len(parts) != 2:
            raise InputError(f"axiom line {lineno} must contain exactly one '|-'")
        axioms.append((store.parse(parts[0]), store.parse(parts[1])))
    return axioms


def load_formula_file(store: FormulaStore, path: str) -> int:
    """Formula text, or a single-output .aag circuit read as its cone."""
    text = Path(path).read_text()
    if path.endswith(".aag"):
        circuit = parse_aag(text)
        if len(circuit.outputs) != 1:
            raise InputError(
                f"{path}: expected a single-output circuit, found {len(circuit.outputs)} outputs"
            )
        return cone_formula(store, circuit, 0)
    return store.parse(_strip_comments(text))


def _solver_config(args) -> SolverConfig | None:
    if not args.solver:
        return None
    return SolverConfig(args.solver, timeout_ms=args.timeout_ms)


def cmd_prove(args) -> int:
    store = FormulaStore()
    lhs, rhs = read_goal_file(store, args.goal)
    axioms = read_axioms_file(store, args.axioms) if args.axioms else []
    if args.oracle:
        goal, axiom_set, _state = prepare_goal(store, lhs, rhs, axioms)
        try:
            ok = naive_prove(store, goal, axiom_set)
        except DepthLimitExceeded as err:
            print(f"limit exceeded: {err}")
            return EXIT_LIMIT
        print("proved" if ok else "not provable")
        return EXIT_PROVED if ok else EXIT_NOT_PROVABLE
    result = prove(
        store, lhs, rhs, axioms,
        max_sequents=args.max_sequents,
        timeout_ms=args.timeout_ms,
        fifo=args.fifo,
    )
    if args.stats:
        s = result.stats
        print(
            f"proven sequents: {s.proven_count}  deduction attempts: {s.attempts}  "
            f"wall ms: {s.elapsed_ms:.2f}"
        )
    if args.check_proof:
        if result.verdict is Verdict.PROVED and not check_derivations(result):
            print(f"derivation replay FAILED at {result.state.derivation_error}")
            return EXIT_INPUT_ERROR
        if result.verdict is Verdict.PROVED:
            print("derivations check out")
    if result.verdict is Verdict.PROVED:
        print("proved")
        return EXIT_PROVED
    if result.verdict is Verdict.NOT_PROVABLE:
        print("not provable")
        return EXIT_NOT_PROVABLE
    print("limit exceeded")
    return EXIT_LIMIT


def cmd_normalize(args) -> int:
    store = FormulaStore()
    if args.infile.endswith(".aag"):
        circuit = parse_aag(Path(args.infile).read_text())
        normalizer = Normalizer(store)
        cones = [cone_formula(store, circuit, k) for k in range(len(circuit.outputs))]
        normalized = [normalizer.normalize(f) for f in cones]
        order = [circuit.input_name(k) for k in range(circuit.num_inputs)]
        out = formulas_to_circuit(store, normalized, input_order=order)
        Path(args.outfile).write_text(emit_aag(out))
    else:
        f = load_formula_file(store, args.infile)
        nf = Normalizer(store).normalize(f)
        Path(args.outfile).write_text(store.format(nf) + "\n")
    return 0


def cmd_cone(args) -> int:
    store = FormulaStore()
    circuit = parse_aag(Path(args.aig).read_text())
    f = cone_formula(store, circuit, args.bit)
    names = store.variables(f)
    order = [circuit.input_name(k) for k in range(circuit.num_inputs)
             if circuit.input_name(k) in names]
    Path(args.out).write_text(emit_aag(formulas_to_circuit(store, [f], input_order=order)))
    return 0


def cmd_tseitin(args) -> int:
    store = FormulaStore()
    f = load_formula_file(store, args.infile)
    cnf = tseitin(store, f, assert_root=not args.no_assert_root)
    Path(args.out).write_text(emit_dimacs(cnf))
    return 0


def cmd_miter(args) -> int:
    store = FormulaStore()
    f = load_formula_file(store, args.left)
    g = load_formula_file(store, args.right)
    cnf = miter_cnf(store, f, g, share_subterms=args.share_subterms)
    Path(args.out).write_text(emit_dimacs(cnf))
    return 0


def cmd_genbench(args) -> int:
    if args.bits == "all":
        bits = None
    else:
        try:
            bits = [int(b) for b in args.bits.split(",") if b != ""]
        except ValueError:
            raise InputError(f"--bits expects 'all' or a comma-separated list, got {args.bits!r}")
    records = bench_mod.gen_bench(
        args.aig, bits, args.out_dir, solver=_solver_config(args), jobs=args.jobs
    )
    for record in records:
        status = record.error or "ok"
        print(f"bit {record.bit}: {status}")
    print(f"wrote {len(records)} records to {Path(args.out_dir) / 'records.csv'}")
    return 0


def cmd_preprocess(args) -> int:
    size_orig, size_nf, norm_ms = bench_mod.preprocess(args.aig, args.out)
    print(f"size_orig={size_orig} size_nf={size_nf} ol_norm_ms={norm_ms:.2f}")
    return 0


def cmd_solve_ext(args) -> int:
    config = _solver_config(args)
    if config is None:
        raise InputError("solve-ext requires --solver")
    outcome = run_external_solver(args.cnf, config)
    print(f"{outcome.verdict} {outcome.wall_ms:.2f} ms")
    if outcome.detail:
        print(outcome.detail, file=sys.stderr)
    if outcome.verdict in ("SAT", "UNSAT"):
        return 0
    return EXIT_LIMIT if outcome.verdict == "TIMEOUT" else EXIT_INPUT_ERROR


def cmd_report(args) -> int:
    rows = report_mod.load_rows(args.csv)
    report = report_mod.build_report(rows)
    print(report_mod.format_table(report))
    out_dir = None
    if args.out:
        report_mod.write_report_csv(report, args.out)
        out_dir = Path(args.out).parent
    if args.fig_dir:
        out_dir = Path(args.fig_dir)
    if out_dir is not None and not args.no_figures:
        written = report_mod.render_figures(report, out_dir)
        for path in written:
            print(f"figure: {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orthologic",
        description="Orthologic entailment, normalization, and SAT benchmark tooling.",
    )
    parser.add_argument("--solver", help="external SAT solver executable")
    parser.add_argument(
        "--timeout-ms", type=int, default=DEFAULT_TIMEOUT_MS,
        help="time budget for solver calls and prover runs (default 300000)",
    )
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers for genbench")
    parser.add_argument("--seed", type=int, default=0, help="reserved for randomized workflows")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prove", help="decide an entailment goal")
    p.add_argument("--goal", required=True, help="file with 'lhs |- rhs'")
    p.add_argument("--axioms", help="file with one 'lhs |- rhs' per line")
    p.add_argument("--stats", action="store_true")
    p.add_argument("--check-proof", action="store_true")
    p.add_argument("--max-sequents", type=int)
    p.add_argument(
        "--timeout-ms", type=int, default=argparse.SUPPRESS,
        help="override the global time budget for this proof",
    )
    p.add_argument("--oracle", action="store_true", help="use the exhaustive backward search")
    p.add_argument("--fifo", action="store_true", help="breadth-first worklist order")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("normalize", help="normalize a formula or every circuit output")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", dest="outfile", required=True)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("cone", help="extract one output bit as a circuit")
    p.add_argument("--aig", required=True)
    p.add_argument("--bit", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_cone)

    p = sub.add_parser("tseitin", help="clausify a formula to DIMACS")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--no-assert-root", action="store_true")
    p.set_defaults(func=cmd_tseitin)

    p = sub.add_parser("miter", help="equivalence miter of two formulas as DIMACS")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--share-subterms", action="store_true")
    p.set_defaults(func=cmd_miter)

    p = sub.add_parser("genbench", help="per-bit cone/normal-form/miter artifacts + records")
    p.add_argument("--aig", required=True)
    p.add_argument("--bits", default="all", help="'all' or comma-separated indices")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_genbench)

    p = sub.add_parser("preprocess", help="clausify a circuit and its normalized form")
    p.add_argument("--aig", required=True)
    p.add_argument("--out", required=True, help="path for the normalized CNF")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("solve-ext", help="run the external solver on a DIMACS file")
    p.add_argument("--cnf", required=True)
    p.set_defaults(func=cmd_solve_ext)

    p = sub.add_parser("report", help="derived speed-up table, CSV, and figures")
    p.add_argument("--csv", required=True)
    p.add_argument("--out", help="write the augmented CSV here")
    p.add_argument("--fig-dir", help="directory for rendered figures")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, FormulaError, AigError, CnfError, report_mod.ReportError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
