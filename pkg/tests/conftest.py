import json
import pathlib

import pytest

GOLDEN_DIR = pathlib.Path(__file__).parent / "golden"

# filled by test_acceptance, printed after the run so the per-criterion
# verdicts survive pytest's output capture
ACCEPTANCE_RESULTS = []


def load_golden(name: str) -> dict:
    with open(GOLDEN_DIR / name) as handle:
        return json.load(handle)


@pytest.fixture(scope="session")
def white_golden():
    return load_golden("white_noise.json")


@pytest.fixture(scope="session")
def craig_brown_golden():
    return load_golden("craig_brown_run.json")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, label, ok in sorted(ACCEPTANCE_RESULTS):
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} {label}: {verdict}")
