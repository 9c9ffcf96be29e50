import re

import pytest

from dfskit.algebra import generate_basis, structure_constants
from dfskit.encoding import octet_states


@pytest.fixture(scope="session")
def bases():
    return {d: generate_basis(d) for d in range(2, 7)}


@pytest.fixture(scope="session")
def basis3(bases):
    return bases[3]


@pytest.fixture(scope="session")
def tensors3(basis3):
    return structure_constants(basis3)


@pytest.fixture(scope="session")
def enc():
    return octet_states()


# --- acceptance summary -----------------------------------------------------------

_CRITERIA = {
    1: "algebra identity suite, d = 2..6, residual < 1e-11",
    2: "commutant search d=3 n=3: dim 6 and known-span residuals < 1e-9",
    3: "commutation table and product identities, d = 3, 4, 5, < 1e-11",
    4: "logical X/Z action on the octet qubit, 20 times",
    5: "analytic exponentials vs generic Hermitian exponential",
    6: "SWAP phase and xi coefficients, d = 3, 4, 5",
    7: "DFS block structure and collective-noise trajectories",
    8: "n-qudit compatibility sweep (3,3) (3,4) (3,5) (4,3)",
    9: "su(2) closure and Casimir block dimensions",
}
_outcomes: dict[int, list[tuple[str, str]]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    m = re.search(r"test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _outcomes.setdefault(int(m.group(1)), []).append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        results = _outcomes.get(num)
        if not results:
            continue
        ok = all(outcome == "passed" for _, outcome in results)
        failed = [name for name, outcome in results if outcome != "passed"]
        line = f"criterion {num}: {'PASS' if ok else 'FAIL'}  {_CRITERIA[num]}"
        if failed:
            line += f"  (failed: {', '.join(failed)})"
        tr.write_line(line)
