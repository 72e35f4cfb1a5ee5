from fractions import Fraction as F

import pytest
from hypothesis import given

from coopcache.lp import evaluate_fdt
from coopcache.model import (
    CacheBudget,
    InfeasibleBudget,
    OutOfDomain,
    Region,
    SplitRatios,
    feasible_grid,
    rx_usage,
    satisfies_budget,
    tx_usage,
)
from coopcache.theorem import (
    REGION_FDT,
    broadcast_baseline_fdt,
    closed_form_fdt,
    closed_form_ratios,
    region_fdt,
    tx_only_fdt,
)

from conftest import feasible_budgets


@pytest.mark.parametrize("mu_r, mu_t, tau", [
    (0, 1, F(1, 3)),
    (1, 1, 0),
    (0, F(1, 3), F(5, 9)),
    (F(2, 5), F(2, 5), F(2, 9)),
    (F(1, 3), F(1, 3), F(7, 27)),
    (0, F(1, 2), F(17, 36)),
])
def test_closed_form_fdt(mu_r, mu_t, tau):
    assert closed_form_fdt(CacheBudget(mu_r, mu_t)) == tau


def test_closed_form_rejects_infeasible():
    with pytest.raises(InfeasibleBudget):
        closed_form_fdt(CacheBudget(0, F(1, 4)))


@pytest.mark.parametrize("mu_r, mu_t, expected", [
    (F(2, 5), F(2, 5), {"a11": F(1, 15), "a30": F(1, 5), "a03": F(1, 5)}),
    (0, F(1, 2), {"a01": F(1, 6), "a02": F(1, 6)}),
    (F(1, 3), F(1, 3), {"a11": F(1, 9)}),
])
def test_closed_form_ratios(mu_r, mu_t, expected):
    got = closed_form_ratios(CacheBudget(mu_r, mu_t))
    assert got == SplitRatios(**expected)


@pytest.mark.parametrize("mu_t, tau", [(F(1, 3), F(5, 9)), (F(2, 3), F(7, 18)), (1, F(1, 3))])
def test_tx_only_fdt(mu_t, tau):
    assert tx_only_fdt(mu_t) == tau


def test_tx_only_domain():
    with pytest.raises(OutOfDomain):
        tx_only_fdt(F(1, 4))


def test_tx_only_matches_closed_form_on_grid():
    mu_t = F(1, 3)
    while mu_t <= 1:
        assert tx_only_fdt(mu_t) == closed_form_fdt(CacheBudget(0, mu_t))
        mu_t += F(1, 120)


@pytest.mark.parametrize("mu_r, tau", [(0, 1), (F(1, 3), F(1, 3)), (F(2, 3), F(1, 9)), (1, 0)])
def test_broadcast_baseline(mu_r, tau):
    assert broadcast_baseline_fdt(mu_r) == tau


def test_baseline_only_at_four_points():
    with pytest.raises(OutOfDomain):
        broadcast_baseline_fdt(F(1, 2))


def test_monotone_and_in_range_on_grid():
    step = F(1, 120)
    tau = {(b.mu_r, b.mu_t): closed_form_fdt(b) for b in feasible_grid(step)}
    for (r, t), v in tau.items():
        assert 0 <= v <= F(5, 9)
        for nb in ((r + step, t), (r, t + step)):
            if nb in tau:
                assert tau[nb] <= v, (r, t)


@pytest.mark.parametrize("a, b, pts", [
    (Region.R1, Region.R2, [(0, 1), (F(1, 2), F(1, 2)), (1, 0)]),
    (Region.R2, Region.R3, [(0, 1), (F(1, 3), F(1, 3))]),
    (Region.R2, Region.R5, [(1, 0), (F(1, 3), F(1, 3))]),
    (Region.R3, Region.R4, [(0, F(2, 3)), (F(1, 3), F(1, 3))]),
    (Region.R4, Region.R5, [(0, F(1, 3)), (F(1, 3), F(1, 3))]),
])
def test_adjacent_formulas_agree_on_shared_edges(a, b, pts):
    # linear on a segment: equality at both endpoints implies equality on it
    for r, t in pts:
        p = CacheBudget(r, t)
        assert region_fdt(a, p) == region_fdt(b, p)


def test_r1_r2_edge_value():
    for k in range(13):
        p = CacheBudget(F(k, 12), 1 - F(k, 12))
        assert region_fdt(Region.R2, p) == region_fdt(Region.R1, p) == F(1, 3) - p.mu_r / 3


@given(feasible_budgets())
def test_closed_form_ratios_are_consistent(b):
    ratios = closed_form_ratios(b)   # constructor enforces the file-size identity
    assert satisfies_budget(ratios, b)
    assert evaluate_fdt(ratios) == closed_form_fdt(b)


@pytest.mark.parametrize("b", [CacheBudget(F(1, 5), F(1, 2)), CacheBudget(F(1, 10), F(1, 2)),
                               CacheBudget(F(2, 5), F(3, 10))])
def test_unique_regions_use_both_caches_fully(b):
    ratios = closed_form_ratios(b)
    assert rx_usage(ratios) == b.mu_r and tx_usage(ratios) == b.mu_t


def test_region_table_complete():
    assert set(REGION_FDT) == set(Region)
