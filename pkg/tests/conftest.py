from fractions import Fraction

from hypothesis import strategies as st

from coopcache.model import CacheBudget, check_feasible


@st.composite
def rationals(draw, max_den=60):
    q = draw(st.integers(1, max_den))
    return Fraction(draw(st.integers(0, q)), q)


@st.composite
def feasible_budgets(draw, max_den=60):
    b = CacheBudget(draw(rationals(max_den)), draw(rationals(max_den)))
    if not check_feasible(b):
        # lift mu_t onto the feasible boundary
        b = CacheBudget(b.mu_r, (1 - b.mu_r) / 3)
    return b


_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    n, text = mark.args
    _, ok = _criteria.get(n, (text, True))
    _criteria[n] = (text, ok and call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        text, ok = _criteria[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {text}")
