"""Benchmark reporting: derived speed-up columns, tables, CSV, and figures.

``speed_up`` is the solver-time ratio minus one; ``speed_up_with_norm``
additionally charges the normalization time to the normalized side.  Means
are arithmetic means of the per-row ratios over rows free of TIMEOUT/ERROR
verdicts (mean-of-ratios; the ratio-of-means alternative is deliberately not
used).  Figures are rendered to files next to the delimited output.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .bench import CSV_HEADER

_SKIP_VERDICTS = {"TIMEOUT", "ERROR"}


class ReportError(Exception):
    pass


def speed_up(solver_ms_orig: float, solver_ms_nf: float) -> float:
    return solver_ms_orig / solver_ms_nf - 1.0


def speed_up_with_norm(solver_ms_orig: float, solver_ms_nf: float, norm_ms: float) -> float:
    return solver_ms_orig / (solver_ms_nf + norm_ms) - 1.0


@dataclass
class ReportRow:
    problem: str
    bit: int | None
    size_orig: int | None
    size_nf: int | None
    ol_norm_ms: float | None
    ol_prove_ms: float | None
    solver_verdict: str | None
    solver_ms_orig: float | None
    solver_ms_nf: float | None
    speed_up: float | None = None
    speed_up_with_norm: float | None = None


@dataclass
class Report:
    rows: list[ReportRow]
    mean_speed_up: float | None
    mean_speed_up_with_norm: float | None
    skipped: int


def _parse_float(text: str, row: int, column: str) -> float | None:
    if text == "":
        return None
    try:
        return float(text)
    except ValueError:
        raise ReportError(f"row {row}: bad {column} value {text!r}") from None


def _parse_int(text: str, row: int, column: str) -> int | None:
    if text == "":
        return None
    try:
        return int(float(text))
    except ValueError:
        raise ReportError(f"row {row}: bad {column} value {text!r}") from None


def load_rows(csv_path: str | Path) -> list[ReportRow]:
    """Read a benchmark CSV; malformed cells report their row number."""
    rows: list[ReportRow] = []
    with open(csv_path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ReportError("empty CSV") from None
        missing = [c for c in CSV_HEADER[:9] if c not in header]
        if missing:
            raise ReportError(f"missing columns: {missing}")
        index = {name: header.index(name) for name in header}
        for lineno, raw in enumerate(reader, start=2):
            if not raw or all(cell == "" for cell in raw):
                continue
            if len(raw) < len(header):
                raise ReportError(f"row {lineno}: expected {len(header)} cells, got {len(raw)}")

            def cell(name: str) -> str:
                pos = index.get(name)
                return raw[pos] if pos is not None and pos < len(raw) else ""

            rows.append(
                ReportRow(
                    problem=cell("problem"),
                    bit=_parse_int(cell("bit"), lineno, "bit"),
                    size_orig=_parse_int(cell("size_orig"), lineno, "size_orig"),
                    size_nf=_parse_int(cell("size_nf"), lineno, "size_nf"),
                    ol_norm_ms=_parse_float(cell("ol_norm_ms"), lineno, "ol_norm_ms"),
                    ol_prove_ms=_parse_float(cell("ol_prove_ms"), lineno, "ol_prove_ms"),
                    solver_verdict=cell("solver_verdict") or None,
                    solver_ms_orig=_parse_float(cell("solver_ms_orig"), lineno, "solver_ms_orig"),
                    solver_ms_nf=_parse_float(cell("solver_ms_nf"), lineno, "solver_ms_nf"),
                )
            )
    return rows


def build_report(rows: list[ReportRow]) -> Report:
    ups: list[float] = []
    ups_norm: list[float] = []
    skipped = 0
    for row in rows:
        usable = (
            row.solver_ms_orig is not None
            and row.solver_ms_nf is not None
            and row.solver_ms_nf > 0
            and (row.solver_verdict or "") not in _SKIP_VERDICTS
        )
        if not usable:
            if (row.solver_verdict or "") in _SKIP_VERDICTS:
                skipped += 1
            continue
        row.speed_up = speed_up(row.solver_ms_orig, row.solver_ms_nf)
        ups.append(row.speed_up)
        if row.ol_norm_ms is not None:
            row.speed_up_with_norm = speed_up_with_norm(
                row.solver_ms_orig, row.solver_ms_nf, row.ol_norm_ms
            )
            ups_norm.append(row.speed_up_with_norm)
    return Report(
        rows=rows,
        mean_speed_up=sum(ups) / len(ups) if ups else None,
        mean_speed_up_with_norm=sum(ups_norm) / len(ups_norm) if ups_norm else None,
        skipped=skipped,
    )


def format_table(report: Report) -> str:
    columns = [
        "problem", "bit", "size_orig", "size_nf", "ol_norm_ms", "ol_prove_ms",
        "solver_verdict", "solver_ms_orig", "solver_ms_nf",
        "speed_up", "speed_up_with_norm",
    ]

    def render(row: ReportRow) -> list[str]:
        out = []
        for name in columns:
            value = getattr(row, name)
            if value is None:
                out.append("-")
            elif isinstance(value, float):
                out.append(f"{value:.4f}")
            else:
                out.append(str(value))
        return out

    table = [columns] + [render(row) for row in report.rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(columns))]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(line)) for line in table]
    summary = ["", f"rows: {len(report.rows)}  skipped (timeout/error): {report.skipped}"]
    if report.mean_speed_up is not None:
        summary.append(f"mean speed-up: {report.mean_speed_up:.4f}")
    if report.mean_speed_up_with_norm is not None:
        summary.append(f"mean speed-up with norm: {report.mean_speed_up_with_norm:.4f}")
    return "\n".join(lines + summary)


def write_report_csv(report: Report, path: str | Path) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_HEADER)
        for row in report.rows:
            writer.writerow(
                [
                    row.problem,
                    "" if row.bit is None else row.bit,
                    "" if row.size_orig is None else row.size_orig,
                    "" if row.size_nf is None else row.size_nf,
                    "" if row.ol_norm_ms is None else f"{row.ol_norm_ms:.4f}",
                    "" if row.ol_prove_ms is None else f"{row.ol_prove_ms:.4f}",
                    row.solver_verdict or "",
                    "" if row.solver_ms_orig is None else f"{row.solver_ms_orig:.4f}",
                    "" if row.solver_ms_nf is None else f"{row.solver_ms_nf:.4f}",
                    "" if row.speed_up is None else f"{row.speed_up:.4f}",
                    "" if row.speed_up_with_norm is None else f"{row.speed_up_with_norm:.4f}",
                ]
            )


def render_figures(report: Report, out_dir: str | Path) -> list[Path]:
    """Write summary figures (PNG) for the report; returns the file paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    labeled = [
        (f"{r.problem}" + (f"#{r.bit}" if r.bit is not None else ""), r)
        for r in report.rows
        if r.speed_up is not None
    ]
    if labeled:
        fig, ax = plt.subplots(figsize=(max(6.0, 0.45 * len(labeled)), 4.0))
        labels = [name for name, _ in labeled]
        xs = range(len(labeled))
        ax.bar(xs, [r.speed_up for _, r in labeled], width=0.4, label="speed-up")
        with_norm = [r.speed_up_with_norm for _, r in labeled]
        if any(v is not None for v in with_norm):
            ax.bar(
                [x + 0.4 for x in xs],
                [v if v is not None else 0.0 for v in with_norm],
                width=0.4,
                label="speed-up with norm",
            )
        ax.axhline(0.0, color="black", linewidth=0.8)
        ax.set_xticks([x + 0.2 for x in xs])
        ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=7)
        ax.set_ylabel("speed-up (ratio - 1)")
        ax.legend(fontsize=8)
        fig.tight_layout()
        path = out_dir / "speedups.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

    timed = [
        r for r in report.rows
        if r.solver_ms_orig is not None and r.solver_ms_nf is not None
        and r.solver_ms_orig > 0 and r.solver_ms_nf > 0
    ]
    if timed:
        fig, ax = plt.subplots(figsize=(5.0, 5.0))
        ax.scatter(
            [r.solver_ms_orig for r in timed],
            [r.solver_ms_nf for r in timed],
            s=18,
            alpha=0.75,
        )
        lo = min(min(r.solver_ms_orig, r.solver_ms_nf) for r in timed)
        hi = max(max(r.solver_ms_orig, r.solver_ms_nf) for r in timed)
        ax.plot([lo, hi], [lo, hi], color="gray", linewidth=0.8, linestyle="--")
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("solver time, original (ms)")
        ax.set_ylabel("solver time, normalized (ms)")
        fig.tight_layout()
        path = out_dir / "solver_times.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

    return written
