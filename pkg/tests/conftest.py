import os
from pathlib import Path

import pytest

from vpart import load

REPO = Path(__file__).resolve().parent.parent
DATA_DIR = Path(os.environ.get("VPART_DATA_DIR", REPO / "data"))


def data_file(name):
    return DATA_DIR / name


def require_data(name):
    """Path of a benchmark file; fails the calling test if it is absent."""
    path = data_file(name)
    if not path.exists():
        pytest.fail(
            f"{name} not found in {DATA_DIR}; download it from the FIMI repository "
            f"and point VPART_DATA_DIR at its directory"
        )
    return path


@pytest.fixture(scope="session")
def chess():
    return load(require_data("chess.dat"))


@pytest.fixture(scope="session")
def mushroom_keel():
    return load(data_file("mushroom_keel.dat"))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":").split(".")[0])):
            terminalreporter.write_line(line)
