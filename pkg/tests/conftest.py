import os
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"

_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_ac" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.outcome != "passed":
        if report.skipped:
            _acceptance[name] = ("SKIP", report.longrepr[-1] if isinstance(report.longrepr, tuple) else "")
        else:
            _acceptance.setdefault(name, ("PASS" if report.passed else "FAIL", f"{report.duration:.3f} s"))
            if report.failed:
                _acceptance[name] = ("FAIL", f"{report.duration:.3f} s")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        status, detail = _acceptance[name]
        terminalreporter.write_line(f"{status:4}  {name}  ({detail})")


@pytest.fixture(scope="session")
def zeros_1e5_path():
    """Path to a table of at least the first 10^5 zero ordinates, if one is available."""
    env = os.environ.get("ZETAMAP_ZEROS_1E5")
    for candidate in ([Path(env)] if env else []) + [DATA / "zeros_1e5.txt", DATA / "zeros1"]:
        if candidate.is_file():
            return candidate
    return None
