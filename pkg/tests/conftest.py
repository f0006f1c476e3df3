import pytest
from hypothesis import strategies as st

from lawvere.ops import OpTable

JOIN = OpTable(2, 2, (0, 1, 1, 1))
MEET = OpTable(2, 2, (0, 0, 0, 1))
XOR = OpTable(2, 2, (0, 1, 1, 0))
NEG = OpTable(1, 2, (1, 0))
ID2 = OpTable(1, 2, (0, 1))
ZERO = OpTable(0, 2, (0,))
ONE = OpTable(0, 2, (1,))
MAJ = OpTable(3, 2, (0, 0, 0, 1, 0, 1, 1, 1))


@st.composite
def op_tables(draw, s=None, max_s=3, min_arity=0, max_arity=2):
    if s is None:
        s = draw(st.integers(1, max_s))
    n = draw(st.integers(min_arity, max_arity))
    table = draw(st.lists(st.integers(0, s - 1), min_size=s**n, max_size=s**n))
    return OpTable(n, s, tuple(table))


@st.composite
def op_pairs(draw, max_s=3, max_arity=2):
    s = draw(st.integers(1, max_s))
    return draw(op_tables(s=s, max_arity=max_arity)), draw(op_tables(s=s, max_arity=max_arity))


@pytest.fixture
def tmp_json(tmp_path):
    import json

    def write(name, doc):
        p = tmp_path / name
        p.write_text(json.dumps(doc))
        return str(p)

    return write


# --- acceptance report ------------------------------------------------------------------------

_criteria: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): the acceptance criterion a test decides")


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria.setdefault(marker, []).append(report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = mark.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        ok = all(o == "passed" for o in _criteria[n])
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}")
