from pathlib import Path

import pytest

from bcnident import O1Test, bcn, bn

NETWORKS = Path(__file__).resolve().parent.parent / "networks"

LAC_F = [8] * 32 + [1, 1, 1, 5, 3, 3, 3, 7] * 2 + [3, 3, 3, 7, 4, 4, 4, 8, 4, 4, 4, 8, 4, 4, 4, 8]
LAC_H = [8, 6, 3, 6, 5, 6, 7, 6]
# slots of the lac O1-test that apply input 5 instead of input 1
LAC_S = {9, 10, 11, 12, 13, 20, 21, 22, 27}

# eight-state BN sampled twice
EX1_Y1 = (2, 1, 1, 2, 2, 2, 1, 2, 2, 2, 1, 2, 2, 2, 1)
EX1_Y2 = (1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1)
EX1_SIGNATURES = [
    (2, 1, 1, 2, 2, 2, 1, 2),
    (1, 1, 2, 2, 2, 1, 2, 2),
    (1, 2, 2, 2, 1, 2, 2, 2),
    (2, 2, 2, 1, 2, 2, 2, 1),
    (2, 2, 1, 2, 2, 2, 1, 2),
    (2, 1, 2, 2, 2, 1, 2, 2),
    (1, 2, 1, 2, 1, 2, 1, 2),
    (2, 1, 2, 1, 2, 1, 2, 1),
]
EX1_F = [2, 3, 4, 5, 6, 3, 8, 7]
EX1_H = [2, 1, 1, 2, 2, 2, 1, 2]
EX1_RELABEL = (3, 4, 5, 6, 7, 8, 1, 2)
EX1_F_RELABELED = [2, 1, 4, 5, 6, 7, 8, 5]
EX1_H_RELABELED = [1, 2, 2, 1, 1, 2, 2, 2]

EX2_F = [2, 4, 1, 1, 2, 3, 2, 2]
EX2_H = [2, 1, 1, 2]
EX2_COVER = (1, 1, 1, 2, 2, 1, 1, 1, 2, 2, 2)
EX2_MEMBERS = [
    (2, 1, 2),
    (2, 1, 2, 2),
    (2, 1, 2, 2, 1),
    (2, 1, 2, 2, 1, 2),
    (2, 1, 2, 2, 1, 2, 2),
    (2, 1, 2, 2, 1, 1, 2, 1),
    (2, 1, 2, 2, 1, 1, 2, 1, 2),
    (2, 1, 2, 2, 1, 1, 2, 1, 2, 2),
    (2, 1, 2, 2, 1, 1, 2, 1, 2, 2, 1),
    (2, 1, 2, 2, 1, 1, 2, 1, 2, 1, 2, 2),
    (2, 1, 2, 2, 1, 1, 2, 1, 2, 1, 1, 2, 1),
    (2, 1, 2, 2, 1, 1, 2, 1, 2, 1, 1, 1, 2, 2),
]
EX2_SIGNATURES = [(2, 1, 2), (1, 2, 2), (2, 2, 1), (1, 2, 1)]
EX2_STATES = (1, 2, 3, 1, 2, 4, 1, 2, 3, 2, 4, 2)
EX2_F_IDENT = [2, 3, 1, 1, 2, 4, 2, 2]
EX2_H_IDENT = [2, 1, 2, 1]


@pytest.fixture
def lac():
    return bcn(LAC_F, LAC_H, n=3)


@pytest.fixture
def lac_test():
    return O1Test(3, 3, tuple((5,) if s in LAC_S else (1,) for s in range(1, 29)))


@pytest.fixture
def ex1():
    return bn(EX1_F, EX1_H)


@pytest.fixture
def ex2():
    return bcn(EX2_F, EX2_H, n=2)


@pytest.fixture
def unobservable():
    return bn([3, 3, 4, 4], [1, 1, 2, 1])


_criteria = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    if report.when == "call" or report.failed:
        _criteria[name.removeprefix("test_")] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        terminalreporter.write_line(f"{name}: {_criteria[name]}")
