from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from coopcache.lp import (
    FDT_WEIGHTS,
    LpProblem,
    NoFeasibleBasis,
    Status,
    basic_feasible_solutions,
    brute_force_optimum,
    build_lp,
    evaluate_fdt,
    solve_simplex,
)
from coopcache.model import (
    RATIO_NAMES,
    CacheBudget,
    InfeasibleBudget,
    Region,
    SplitRatios,
    classify_region,
    rx_usage,
    tx_usage,
)
from coopcache.theorem import closed_form_fdt, closed_form_ratios

from conftest import feasible_budgets

IDX = {n: k for k, n in enumerate(RATIO_NAMES)}
B = CacheBudget(F(2, 5), F(2, 5))


def test_build_lp_coefficients():
    lp = build_lp(B)
    assert lp.objective[IDX["a11"]] == F(7, 3)
    assert lp.objective[IDX["a02"]] == F(7, 6)
    assert [lp.objective[IDX[n]] for n in ("a30", "a31", "a32", "a33")] == [0] * 4
    assert len(lp.eq_constraints) == 1 and lp.eq_constraints[0][1] == 1
    (rx_row, rx_rhs), (tx_row, tx_rhs) = lp.le_constraints
    assert rx_row[IDX["a21"]] == 6 and rx_rhs == F(2, 5)
    assert tx_row[IDX["a02"]] == 2 and tx_rhs == F(2, 5)


def test_build_lp_rejects_infeasible():
    with pytest.raises(InfeasibleBudget):
        build_lp(CacheBudget(0, F(1, 4)))


@pytest.mark.parametrize("ratios, tau", [
    ({"a03": 1}, F(1, 3)),
    ({"a30": 1}, 0),
    ({"a11": F(1, 9)}, F(7, 27)),
])
def test_evaluate_fdt(ratios, tau):
    assert evaluate_fdt(SplitRatios(**ratios)) == tau


def test_fdt_weights_by_group():
    # multicast: C(3,i) a_2i / 3; hybrid X: 9 a11 * 7/9 / 3 and 9 a1n * 2/3 / 3 ...
    expected = {
        "a21": F(3), "a22": F(3), "a23": F(1),
        "a11": 9 / F(9, 7), "a12": 9 / F(3, 2), "a13": 3 / F(3, 2),
        "a01": 9 / F(9, 5), "a02": 9 / F(18, 7), "a03": 3 / F(3),
    }
    for name, w in zip(RATIO_NAMES, FDT_WEIGHTS):
        assert w == expected.get(name, 0), name


@pytest.mark.parametrize("mu_r, mu_t, tau", [
    (F(2, 5), F(2, 5), F(2, 9)),
    (0, F(1, 2), F(17, 36)),
    (1, 1, 0),
    (0, 1, F(1, 3)),
    (F(1, 3), F(1, 3), F(7, 27)),
])
def test_simplex_and_oracle(mu_r, mu_t, tau):
    lp = build_lp(CacheBudget(mu_r, mu_t))
    sol = solve_simplex(lp)
    assert sol.status is Status.OPTIMAL
    assert sol.tau == tau == brute_force_optimum(lp)
    assert evaluate_fdt(sol.ratios) == tau
    assert rx_usage(sol.ratios) <= mu_r and tx_usage(sol.ratios) <= mu_t


def test_brute_force_enumerates_455_bases():
    lp = build_lp(B)
    bases = [cols for cols, _ in basic_feasible_solutions(lp)]
    assert 0 < len(bases) <= 455
    assert all(len(c) == 3 for c in bases)


def _toy(eq_rhs, le_rhs):
    one = (F(1), F(1))
    return LpProblem((F(1), F(2)), ((one, F(eq_rhs)),), ((one, F(le_rhs)),))


def test_infeasible_problem():
    lp = _toy(2, 1)   # x + y = 2 and x + y <= 1
    assert solve_simplex(lp).status is Status.INFEASIBLE
    with pytest.raises(NoFeasibleBasis):
        brute_force_optimum(lp)


def test_negative_rhs_row():
    lp = LpProblem((F(1), F(1)), (((F(-1), F(-1)), F(-1)),), ())
    sol = solve_simplex(lp)
    assert sol.status is Status.OPTIMAL and sol.tau == 1 and sol.x == (1, 0)
    assert sol.ratios is None


def test_simplex_is_deterministic():
    lp = build_lp(B)
    assert solve_simplex(lp) == solve_simplex(lp)


@settings(max_examples=60, deadline=None)
@given(feasible_budgets())
def test_simplex_matches_oracle_and_theorem(b):
    lp = build_lp(b)
    tau = solve_simplex(lp).tau
    assert tau == brute_force_optimum(lp) == closed_form_fdt(b)
    assert evaluate_fdt(closed_form_ratios(b)) == tau


@pytest.mark.parametrize("b", [
    CacheBudget(F(1, 5), F(1, 2)),
    CacheBudget(F(1, 6), F(7, 12)),
    CacheBudget(F(1, 10), F(1, 2)),
    CacheBudget(F(1, 20), F(2, 5)),
    CacheBudget(F(1, 3), F(3, 10)),
    CacheBudget(F(1, 2), F(1, 5)),
])
def test_unique_optimum_regions(b):
    # in R3-R5 the optimum is unique, so simplex must land exactly on it
    assert classify_region(b) in (Region.R3, Region.R4, Region.R5)
    sol = solve_simplex(build_lp(b))
    assert sol.ratios == closed_form_ratios(b)
    assert rx_usage(sol.ratios) == b.mu_r and tx_usage(sol.ratios) == b.mu_t
