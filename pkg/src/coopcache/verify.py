"""Regression harness tying the closed form, the simplex and the oracle together."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from .lp import brute_force_optimum, build_lp, solve_simplex
from .model import (
    CacheBudget,
    Region,
    check_feasible,
    feasible_grid,
    grid,
    matching_regions,
)
from .theorem import region_fdt

F = Fraction

# Shared edges between adjacent regions: (A, B, point on edge as a function
# of a parameter s, parameter interval).
BOUNDARIES = (
    (Region.R1, Region.R2, lambda s: (s, 1 - s), (F(0), F(1))),
    (Region.R2, Region.R3, lambda s: (s, 1 - 2 * s), (F(0), F(1, 3))),
    (Region.R2, Region.R5, lambda s: (1 - 2 * s, s), (F(0), F(1, 3))),
    (Region.R3, Region.R4, lambda s: (s, F(2, 3) - s), (F(0), F(1, 3))),
    (Region.R4, Region.R5, lambda s: (s, F(1, 3)), (F(0), F(1, 3))),
    (Region.R3, Region.R5, lambda s: (F(1, 3), F(1, 3)), (F(0), F(0))),
)


@dataclass
class CheckResult:
    name: str
    passed: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, ok: bool, what: str) -> None:
        if ok:
            self.passed += 1
        else:
            self.failures.append(what)


def _pt(b: CacheBudget) -> str:
    return f"({b.mu_r}, {b.mu_t})"


def check_partition(step, predicates=None) -> CheckResult:
    res = CheckResult("region partition")
    for b in feasible_grid(step):
        found = matching_regions(b, predicates)
        res.record(len(found) == 1, f"{_pt(b)} matches {[str(r) for r in found]}")
    return res


def check_theorem(step, predicates=None) -> CheckResult:
    """LP optimum against the closed form of the region each point falls in."""
    res = CheckResult("LP vs closed form")
    for b in feasible_grid(step):
        found = matching_regions(b, predicates)
        if len(found) != 1:
            res.record(False, f"{_pt(b)} has no unique region")
            continue
        lp_tau = solve_simplex(build_lp(b)).tau
        cf = region_fdt(found[0], b)
        res.record(lp_tau == cf, f"{_pt(b)}: LP {lp_tau} != closed form {cf} ({found[0]})")
    return res


def random_budgets(count: int, max_den: int = 60, seed: int = 0) -> List[CacheBudget]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        qr, qt = rng.randint(1, max_den), rng.randint(1, max_den)
        b = CacheBudget(F(rng.randint(0, qr), qr), F(rng.randint(0, qt), qt))
        if check_feasible(b):
            out.append(b)
    return out


def check_oracle(samples: int, seed: int = 0) -> CheckResult:
    res = CheckResult("simplex vs vertex enumeration")
    for b in random_budgets(samples, seed=seed):
        lp = build_lp(b)
        simplex, brute = solve_simplex(lp).tau, brute_force_optimum(lp)
        res.record(simplex == brute, f"{_pt(b)}: simplex {simplex} != oracle {brute}")
    return res


def check_continuity(step, predicates=None) -> CheckResult:
    """Adjacent region formulas agree on shared edges, and agree with the
    formula of the region each edge point is assigned to."""
    res = CheckResult("boundary continuity")
    for a, b, edge, (lo, hi) in BOUNDARIES:
        params = {lo, hi} | {s for s in grid(step) if lo <= s <= hi}
        for s in sorted(params):
            pt = CacheBudget(*edge(s))
            fa, fb = region_fdt(a, pt), region_fdt(b, pt)
            res.record(fa == fb, f"{_pt(pt)}: {a}={fa} but {b}={fb}")
            found = matching_regions(pt, predicates)
            own = region_fdt(found[0], pt) if len(found) == 1 else None
            res.record(own == fa, f"{_pt(pt)} on {a}/{b} edge assigned to {found}")
    return res


def run_checks(
    step=F(1, 60),
    oracle_samples: int = 200,
    seed: int = 0,
    predicates: Optional[Dict] = None,
) -> List[CheckResult]:
    step = F(step)
    return [
        check_partition(step, predicates),
        check_theorem(step, predicates),
        check_oracle(oracle_samples, seed),
        check_continuity(step, predicates),
    ]
