"""External SAT solver subprocess harness."""

from __future__ import annotations

import subprocess
import time
from dataclasses import dataclass

SAT = "SAT"
UNSAT = "UNSAT"
TIMEOUT = "TIMEOUT"
ERROR = "ERROR"

DEFAULT_TIMEOUT_MS = 300_000


@dataclass(frozen=True)
class SolverConfig:
    executable: str
    timeout_ms: int = DEFAULT_TIMEOUT_MS
    extra_args: tuple[str, ...] = ()


@dataclass
class SolverOutcome:
    verdict: str
    wall_ms: float
    detail: str = ""


def run_external_solver(cnf_path: str, config: SolverConfig) -> SolverOutcome:
    """Run the solver on a DIMACS file and classify its answer.

    The verdict comes from the ``s SATISFIABLE`` / ``s UNSATISFIABLE`` status
    line, with exit codes 10/20 as a fallback.  The process is killed at the
    timeout and TIMEOUT recorded; a missing executable or unparsable output
    yields ERROR with the captured stderr in ``detail``.
    """
    cmd = [config.executable, *config.extra_args, str(cnf_path)]
    start = time.perf_counter()
    try:
        proc = subprocess.run(
            cmd,
            capture_output=True,
            text=True,
            timeout=config.timeout_ms / 1000.0,
        )
    except subprocess.TimeoutExpired:
        return SolverOutcome(TIMEOUT, (time.perf_counter() - start) * 1000.0)
    except OSError as err:
        return SolverOutcome(ERROR, (time.perf_counter() - start) * 1000.0, str(err))
    wall_ms = (time.perf_counter() - start) * 1000.0
    for line in proc.stdout.splitlines():
        if line.startswith("s "):
            status = line[2:].strip()
            if status == "SATISFIABLE":
                return SolverOutcome(SAT, wall_ms)
            if status == "UNSATISFIABLE":
                return SolverOutcome(UNSAT, wall_ms)
    if proc.returncode == 10:
        return SolverOutcome(SAT, wall_ms)
    if proc.returncode == 20:
        return SolverOutcome(UNSAT, wall_ms)
    detail = (proc.stderr or proc.stdout or "").strip()[-500:]
    return SolverOutcome(ERROR, wall_ms, f"unrecognized solver output: {detail}")
