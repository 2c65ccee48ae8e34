import json
import sys
from pathlib import Path

import pytest

TESTS = Path(__file__).resolve().parent
sys.path.insert(0, str(TESTS))

GOLDEN = TESTS / "data" / "golden_bessel.json"


@pytest.fixture(scope="session")
def golden():
    with open(GOLDEN, encoding="utf-8") as fh:
        return json.load(fh)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
