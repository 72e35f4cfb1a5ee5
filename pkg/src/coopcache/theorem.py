"""Closed-form piecewise storage-latency tradeoff and its optimal splittings."""

from __future__ import annotations

from fractions import Fraction as F

from .model import (
    CacheBudget,
    OutOfDomain,
    Region,
    SplitRatios,
    classify_region,
    to_fraction,
)

# tau = const - coef_r * mu_r - coef_t * mu_t on each region
REGION_FDT = {
    Region.R1: (F(1, 3), F(1, 3), F(0)),
    Region.R2: (F(4, 9), F(4, 9), F(1, 9)),
    Region.R3: (F(1, 2), F(5, 9), F(1, 6)),
    Region.R4: (F(13, 18), F(8, 9), F(1, 2)),
    Region.R5: (F(8, 9), F(8, 9), F(1)),
}

BASELINE_POINTS = (F(0), F(1, 3), F(2, 3), F(1))


def region_fdt(region: Region, budget: CacheBudget) -> F:
    """Evaluate one region's linear expression at ``budget`` (no membership check)."""
    const, cr, ct = REGION_FDT[region]
    return const - cr * budget.mu_r - ct * budget.mu_t


def closed_form_fdt(budget: CacheBudget) -> F:
    return region_fdt(classify_region(budget), budget)


def region_ratios(region: Region, budget: CacheBudget) -> SplitRatios:
    r, t = budget.mu_r, budget.mu_t
    if region is Region.R1:
        return SplitRatios(a30=r, a03=1 - r)
    if region is Region.R2:
        return SplitRatios(a11=F(1, 3) - r / 3 - t / 3, a30=2 * r + t - 1, a03=r + 2 * t - 1)
    if region is Region.R3:
        return SplitRatios(a11=r / 3, a02=1 - 2 * r - t, a03=3 * r + 3 * t - 2)
    if region is Region.R4:
        return SplitRatios(a11=r / 3, a01=F(2, 3) - r - t, a02=t - F(1, 3))
    return SplitRatios(a11=r / 3 + t - F(1, 3), a01=1 - r - 2 * t, a30=1 - 3 * t)


def closed_form_ratios(budget: CacheBudget) -> SplitRatios:
    """Optimal splitting for ``budget``.

    R3 to R5 have a unique optimum.  In R1 and R2 the optimal face is larger
    and one representative vertex is returned.
    """
    return region_ratios(classify_region(budget), budget)


def tx_only_fdt(mu_t) -> F:
    """Tradeoff with no receiver cache (mu_r = 0), defined on [1/3, 1]."""
    mu_t = to_fraction(mu_t)
    if not F(1, 3) <= mu_t <= 1:
        raise OutOfDomain(f"mu_t={mu_t} outside [1/3, 1]")
    if mu_t <= F(2, 3):
        return F(13, 18) - mu_t / 2
    return F(1, 2) - mu_t / 6


def broadcast_baseline_fdt(mu_r) -> F:
    """Shared-link coded caching with one transmit antenna: (1 - mu_r)/(1 + 3 mu_r).

    Only defined at the four points where the comparison is made.
    """
    mu_r = to_fraction(mu_r)
    if mu_r not in BASELINE_POINTS:
        raise OutOfDomain(f"baseline only defined at {[str(p) for p in BASELINE_POINTS]}")
    return (1 - mu_r) / (1 + 3 * mu_r)
