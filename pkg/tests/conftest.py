from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from tope_committees import paper_example, parse_topes, triangle

DATA = Path(__file__).parent / "data"

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

PAPER_KAPPA = (0, 0, 3, 0, 144, 1, 1942, 22, 11872, 136, 37775, 386, 66454, 542)
PAPER_FREE = (0, 0, 3, 0, 111, 1, 778, 14, 1935, 24, 1448, 24, 158, 0)


@pytest.fixture(scope="session")
def c3():
    return triangle()


@pytest.fixture(scope="session")
def paper():
    return paper_example()


@pytest.fixture(scope="session")
def paper_report(paper):
    from tope_committees import kappa_sweep
    return kappa_sweep(paper, variants=("free", "min", "maxplus"))


@pytest.fixture
def data_dir():
    return DATA


def load(name):
    return parse_topes((DATA / name).read_text())


# acceptance bookkeeping: criterion number -> [description, failures, checks]
ACCEPTANCE = {}


def record(number: int, description: str, ok: bool):
    row = ACCEPTANCE.setdefault(number, [description, 0, 0])
    row[2] += 1
    if not ok:
        row[1] += 1


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        description, failures, checks = ACCEPTANCE[number]
        status = "PASS" if failures == 0 else "FAIL"
        terminalreporter.write_line(
            f"criterion {number}: {status}  {description}  ({checks - failures}/{checks} checks)")
