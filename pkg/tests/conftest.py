import json
from collections import defaultdict

import pytest

from flowsym import cli

CRITERIA = {
    1: "determining tables reproduced",
    2: "generators and families verified",
    3: "commutator table and Jacobi identity",
    4: "adjoint table",
    5: "optimal-system classification",
    6: "transformed-solution adjudication",
    7: "reduction adjudication",
    8: "warped geometry",
    9: "warped numerics",
    10: "surface numerics and equivariance",
    11: "warped claim adjudication",
}

_outcomes = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion checked by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or rep.outcome != "passed":
        ok = rep.passed and not hasattr(rep, "wasxfail")
        _outcomes[marker.args[0]].append((item.name, ok))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n, title in CRITERIA.items():
        results = _outcomes.get(n)
        if not results:
            terminalreporter.write_line(f"criterion {n:2d}: NOT RUN  {title}")
            continue
        failed = [name for name, ok in results if not ok]
        status = "FAIL" if failed else "PASS"
        detail = f" (failing: {', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {title}{detail}")


class CliResult:
    def __init__(self, code, out, err):
        self.code, self.out, self.err = code, out, err

    def json(self):
        return json.loads(self.out)


@pytest.fixture
def run_cli(capsys):
    """Invoke the command-line entry point in-process."""

    def run(*argv):
        try:
            code = cli.main([str(a) for a in argv])
        except SystemExit as exc:
            code = exc.code
        captured = capsys.readouterr()
        return CliResult(code, captured.out, captured.err)

    return run
