"""Benchmark generation and normalization preprocessing over AIGER circuits.

``gen_bench`` turns every selected output bit of a circuit into three
artifacts (the extracted cone, its normalized form, and the miter CNF of the
two), proves the cone entails its normal form with the saturation engine, and
optionally times an external solver on the miter.  ``preprocess`` writes the
clausified circuit next to its clausified normalized form for A/B solver
runs.  Artifact bytes are deterministic; only the timing columns vary.
"""

from __future__ import annotations

import csv
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .aig import AigCircuit, cone_formula, emit_aag, formulas_to_circuit, parse_aag
from .cnf import emit_dimacs, miter_cnf, tseitin
from .formula import FormulaStore
from .normalform import Normalizer
from .prover import Verdict, prove
from .solver import SolverConfig, run_external_solver

CSV_HEADER = [
    "problem",
    "bit",
    "size_orig",
    "size_nf",
    "ol_norm_ms",
    "ol_prove_ms",
    "solver_verdict",
    "solver_ms_orig",
    "solver_ms_nf",
    "speed_up",
    "speed_up_with_norm",
]


@dataclass
class BenchRecord:
    problem: str
    bit: int
    size_orig: int | None = None
    size_nf: int | None = None
    ol_norm_ms: float | None = None
    ol_prove_ms: float | None = None
    solver_verdict: str | None = None
    solver_ms_orig: float | None = None
    solver_ms_nf: float | None = None
    error: str | None = None


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def record_row(record: BenchRecord) -> list[str]:
    from .report import speed_up, speed_up_with_norm  # local to avoid a cycle

    su = suwn = None
    if record.solver_ms_orig is not None and record.solver_ms_nf is not None:
        if record.solver_ms_nf > 0:
            su = speed_up(record.solver_ms_orig, record.solver_ms_nf)
            if record.ol_norm_ms is not None:
                suwn = speed_up_with_norm(
                    record.solver_ms_orig, record.solver_ms_nf, record.ol_norm_ms
                )
    return [
        record.problem,
        _fmt(record.bit),
        _fmt(record.size_orig),
        _fmt(record.size_nf),
        _fmt(record.ol_norm_ms),
        _fmt(record.ol_prove_ms),
        _fmt(record.solver_verdict),
        _fmt(record.solver_ms_orig),
        _fmt(record.solver_ms_nf),
        _fmt(su),
        _fmt(suwn),
    ]


def write_records_csv(records: list[BenchRecord], path: str | Path) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_HEADER)
        for record in records:
            writer.writerow(record_row(record))


def _numeric_input_order(circuit: AigCircuit) -> list[str]:
    return [circuit.input_name(k) for k in range(circuit.num_inputs)]


def _cone_input_order(circuit: AigCircuit, names: set[str]) -> list[str]:
    return [n for n in _numeric_input_order(circuit) if n in names]


def bench_one_bit(
    aig_path: str,
    bit: int,
    out_dir: str,
    solver: SolverConfig | None,
) -> BenchRecord:
    """Process a single output bit; failures land in the record, not raised."""
    name = Path(aig_path).stem
    record = BenchRecord(problem=name, bit=bit)
    try:
        circuit = parse_aag(Path(aig_path).read_text())
        store = FormulaStore()
        phi = cone_formula(store, circuit, bit)
        record.size_orig = store.connective_count(phi)

        start = time.perf_counter()
        nf = Normalizer(store).normalize(phi)
        record.ol_norm_ms = (time.perf_counter() - start) * 1000.0
        record.size_nf = store.connective_count(nf)

        order = _cone_input_order(circuit, store.variables(phi) | store.variables(nf))
        base = Path(out_dir) / f"{name}_bit{bit}"
        cone_aag = formulas_to_circuit(store, [phi], input_order=order)
        Path(f"{base}.aag").write_text(emit_aag(cone_aag))
        nf_aag = formulas_to_circuit(store, [nf], input_order=order)
        Path(f"{base}.nf.aag").write_text(emit_aag(nf_aag))

        result = prove(store, phi, nf, record_derivations=False)
        record.ol_prove_ms = result.stats.elapsed_ms
        if result.verdict is not Verdict.PROVED:
            record.error = f"engine verdict {result.verdict.value} on cone vs normal form"

        miter = miter_cnf(store, phi, nf)
        miter_path = f"{base}.miter.cnf"
        Path(miter_path).write_text(emit_dimacs(miter))

        if solver is not None:
            outcome = run_external_solver(miter_path, solver)
            record.solver_verdict = outcome.verdict
            record.solver_ms_orig = outcome.wall_ms
    except Exception as err:  # per-bit isolation: generation continues
        record.error = str(err)
        record.solver_verdict = "ERROR"
    return record


def gen_bench(
    aig_path: str | Path,
    bits: list[int] | None,
    out_dir: str | Path,
    solver: SolverConfig | None = None,
    jobs: int = 1,
) -> list[BenchRecord]:
    """Generate cone/normal-form/miter artifacts and records for each bit.

    ``bits=None`` selects every output.  Records are written to
    ``records.csv`` in the output directory, merged in bit order.
    """
    aig_path = str(aig_path)
    out_dir = str(out_dir)
    os.makedirs(out_dir, exist_ok=True)
    circuit = parse_aag(Path(aig_path).read_text())
    selected = list(range(len(circuit.outputs))) if bits is None else list(bits)

    if jobs > 1 and len(selected) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(bench_one_bit, aig_path, bit, out_dir, solver)
                for bit in selected
            ]
            records = [f.result() for f in futures]
    else:
        records = [bench_one_bit(aig_path, bit, out_dir, solver) for bit in selected]

    records.sort(key=lambda r: r.bit)
    write_records_csv(records, Path(out_dir) / "records.csv")
    return records


def preprocess(aig_path: str | Path, out_cnf_path: str | Path) -> tuple[int, int, float]:
    """Normalize every output cone and clausify both circuit variants.

    The normalized CNF goes to ``out_cnf_path``; the unnormalized one is
    written beside it with an ``.orig.cnf`` suffix.  Single-output circuits
    assert the output, multi-output circuits the conjunction of all outputs.
    Returns (size_orig, size_nf, norm_ms) where sizes count And/Or connectives
    of the asserted formula with sharing.
    """
    circuit = parse_aag(Path(aig_path).read_text())
    if not circuit.outputs:
        raise ValueError("circuit has no outputs to assert")
    store = FormulaStore()
    cones = [cone_formula(store, circuit, k) for k in range(len(circuit.outputs))]

    start = time.perf_counter()
    normalizer = Normalizer(store)
    normalized = [normalizer.normalize(f) for f in cones]
    norm_ms = (time.perf_counter() - start) * 1000.0

    def conjunction(formulas: list[int]) -> int:
        result = formulas[0]
        for f in formulas[1:]:
            result = store.conj(result, f)
        return result

    orig_root = conjunction(cones)
    nf_root = conjunction(normalized)
    size_orig = store.connective_count(orig_root)
    size_nf = store.connective_count(nf_root)

    out_cnf_path = Path(out_cnf_path)
    out_cnf_path.write_text(emit_dimacs(tseitin(store, nf_root)))
    orig_path = out_cnf_path.with_suffix(".orig.cnf") if out_cnf_path.suffix == ".cnf" \
        else Path(str(out_cnf_path) + ".orig.cnf")
    orig_path.write_text(emit_dimacs(tseitin(store, orig_root)))
    return size_orig, size_nf, norm_ms
