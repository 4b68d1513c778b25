import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from liebialg.cli import load_instance  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def instances():
    names = ["sl2_plane", "sl2_plane_b2", "felder_rational", "matched_pair_line", "point_sl2_bialgebra", "broken"]
    return {name: load_instance(name)[0] for name in names}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
