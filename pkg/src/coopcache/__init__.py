"""Exact storage-latency tradeoff for the 3x3 cache-aided interference channel."""

from .model import CacheBudget, CacheState, Region, SplitRatios, check_feasible, classify_region
from .theorem import closed_form_fdt, closed_form_ratios
from .lp import build_lp, evaluate_fdt, solve, solve_simplex

__version__ = "0.1.0"
