import re
import sys
from pathlib import Path

import pytest

# make the test-support modules importable regardless of invocation directory
sys.path.insert(0, str(Path(__file__).parent))

from orthologic.formula import FormulaStore

_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    """One uncaptured PASS/FAIL line per acceptance criterion."""
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    match = _CRITERION.search(report.nodeid)
    if match:
        number, slug = match.groups()
        label = slug.replace("_", " ")
        outcome = "PASS" if report.passed else "FAIL"
        sys.stderr.write(f"criterion {number} ({label}): {outcome}\n")


@pytest.fixture
def store():
    return FormulaStore()


@pytest.fixture(scope="session")
def mini_solver_cmd():
    """(executable, extra_args) pair invoking the stub DIMACS solver."""
    script = Path(__file__).parent / "mini_solver.py"
    return sys.executable, (str(script),)


@pytest.fixture(scope="session")
def mini_solver_exe():
    """The stub solver as a directly executable path (for --solver flags)."""
    import os
    import stat

    script = Path(__file__).parent / "mini_solver.py"
    os.chmod(script, os.stat(script).st_mode | stat.S_IXUSR | stat.S_IXGRP)
    return str(script)
