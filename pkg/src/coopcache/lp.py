"""The file-splitting linear program and two exact ways of solving it.

``solve_simplex`` runs a two-phase tableau simplex with Bland's rule over
Fractions.  ``brute_force_optimum`` enumerates every basis of the
slack-augmented system and is used as an independent check.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .model import (
    FILE_SIZE_ROW,
    RATIO_NAMES,
    RX_CACHE_ROW,
    TX_CACHE_ROW,
    CacheBudget,
    SplitRatios,
    require_feasible,
)

# Delivery cost of each ratio, times 3 (same order as RATIO_NAMES).
FDT_WEIGHTS = tuple(
    Fraction(w)
    for w in (0, 0, 0, 0, 3, 3, 1, 7, 6, 2, 5, Fraction(7, 2), 1)
)

Row = Tuple[Fraction, ...]


class Status(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"


class NoFeasibleBasis(RuntimeError):
    pass


class Unbounded(RuntimeError):
    pass


@dataclass(frozen=True)
class LpProblem:
    """min objective . x  s.t. eq rows == rhs, le rows <= rhs, x >= 0."""

    objective: Row
    eq_constraints: Tuple[Tuple[Row, Fraction], ...]
    le_constraints: Tuple[Tuple[Row, Fraction], ...]

    @property
    def num_vars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LpSolution:
    status: Status
    ratios: Optional[SplitRatios] = None
    tau: Optional[Fraction] = None
    x: Tuple[Fraction, ...] = ()
    basis: Tuple[int, ...] = ()


def _row(values) -> Row:
    return tuple(Fraction(v) for v in values)


def build_lp(budget: CacheBudget) -> LpProblem:
    require_feasible(budget)
    return LpProblem(
        objective=tuple(w / 3 for w in FDT_WEIGHTS),
        eq_constraints=((_row(FILE_SIZE_ROW), Fraction(1)),),
        le_constraints=(
            (_row(RX_CACHE_ROW), budget.mu_r),
            (_row(TX_CACHE_ROW), budget.mu_t),
        ),
    )


def evaluate_fdt(ratios: SplitRatios) -> Fraction:
    return sum((w * v for w, v in zip(FDT_WEIGHTS, ratios.as_vector())), Fraction(0)) / 3


def _standard_form(problem: LpProblem):
    """Equality form A x = b with slack columns appended after the originals."""
    n = problem.num_vars
    n_le = len(problem.le_constraints)
    A, b = [], []
    for coeffs, rhs in problem.eq_constraints:
        A.append(list(coeffs) + [Fraction(0)] * n_le)
        b.append(Fraction(rhs))
    for k, (coeffs, rhs) in enumerate(problem.le_constraints):
        slack = [Fraction(0)] * n_le
        slack[k] = Fraction(1)
        A.append(list(coeffs) + slack)
        b.append(Fraction(rhs))
    c = list(problem.objective) + [Fraction(0)] * n_le
    return A, b, c


class _Tableau:
    def __init__(self, A: List[List[Fraction]], b: List[Fraction], basis: List[int]):
        self.A = A
        self.b = b
        self.basis = basis

    def pivot(self, row: int, col: int) -> None:
        A, b = self.A, self.b
        piv = A[row][col]
        A[row] = [v / piv for v in A[row]]
        b[row] /= piv
        for i in range(len(A)):
            f = A[i][col]
            if i != row and f != 0:
                A[i] = [x - f * y for x, y in zip(A[i], A[row])]
                b[i] -= f * b[row]
        self.basis[row] = col

    def reduced_costs(self, c: Sequence[Fraction]) -> List[Fraction]:
        rc = list(c)
        for i, j in enumerate(self.basis):
            cb = c[j]
            if cb:
                rc = [r - cb * a for r, a in zip(rc, self.A[i])]
        return rc

    def optimize(self, c: Sequence[Fraction], allowed: Sequence[int]) -> None:
        """Bland's rule: lowest-index entering column, lowest-index leaving tie-break."""
        while True:
            rc = self.reduced_costs(c)
            entering = next((j for j in allowed if rc[j] < 0), None)
            if entering is None:
                return
            best = None
            for i, row in enumerate(self.A):
                if row[entering] > 0:
                    key = (self.b[i] / row[entering], self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise Unbounded(f"column {entering} is unbounded")
            self.pivot(best[1], entering)

    def value(self, c: Sequence[Fraction]) -> Fraction:
        return sum((c[j] * self.b[i] for i, j in enumerate(self.basis)), Fraction(0))


def _is_unit_column(rows, j, i) -> bool:
    return all(row[j] == (1 if k == i else 0) for k, row in enumerate(rows))


def _solve_standard(A, b, c):
    """Two-phase simplex on A x = b, x >= 0. Returns (x, basis) or None if infeasible."""
    m, n = len(A), len(A[0])
    rows, rhs, basis = [], [], []
    n_art = 0
    for i in range(m):
        sign = -1 if b[i] < 0 else 1
        rows.append([sign * v for v in A[i]])
        rhs.append(sign * b[i])
    for i in range(m):
        unit = next((j for j in range(n) if _is_unit_column(rows, j, i)), None)
        if unit is None:
            unit = n + n_art
            n_art += 1
        basis.append(unit)
    for i in range(m):
        # artificial columns, one per row lacking a unit column
        rows[i] += [Fraction(int(basis[i] == n + k)) for k in range(n_art)]
    tab = _Tableau(rows, rhs, basis)

    phase1 = [Fraction(0)] * n + [Fraction(1)] * n_art
    tab.optimize(phase1, range(n + n_art))
    if tab.value(phase1) > 0:
        return None

    # Pivot zero-valued artificials out; drop rows that are redundant.
    i = 0
    while i < len(tab.A):
        if tab.basis[i] >= n:
            col = next((j for j in range(n) if tab.A[i][j] != 0), None)
            if col is None:
                del tab.A[i], tab.b[i], tab.basis[i]
                continue
            tab.pivot(i, col)
        i += 1
    tab.A = [row[:n] for row in tab.A]

    tab.optimize(list(c), range(n))
    x = [Fraction(0)] * n
    for i, j in enumerate(tab.basis):
        x[j] = tab.b[i]
    return x, tuple(tab.basis)


def solve_simplex(problem: LpProblem) -> LpSolution:
    A, b, c = _standard_form(problem)
    result = _solve_standard(A, b, c)
    if result is None:
        return LpSolution(Status.INFEASIBLE)
    x, basis = result
    x = tuple(x[: problem.num_vars])
    ratios = SplitRatios.from_vector(x) if len(x) == len(RATIO_NAMES) else None
    tau = sum((ci * xi for ci, xi in zip(problem.objective, x)), Fraction(0))
    return LpSolution(Status.OPTIMAL, ratios, tau, x, basis)


def _solve_square(M: List[List[Fraction]], rhs: List[Fraction]) -> Optional[List[Fraction]]:
    """Gauss-Jordan elimination; None if M is singular."""
    k = len(M)
    aug = [list(M[i]) + [rhs[i]] for i in range(k)]
    for col in range(k):
        piv = next((r for r in range(col, k) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(k):
            f = aug[r][col]
            if r != col and f != 0:
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[r][k] for r in range(k)]


def basic_feasible_solutions(problem: LpProblem):
    """Yield (basis, x) for every feasible basic solution of the standard form."""
    A, b, _ = _standard_form(problem)
    m, n = len(A), len(A[0])
    for cols in itertools.combinations(range(n), m):
        sub = [[A[i][j] for j in cols] for i in range(m)]
        xb = _solve_square(sub, b)
        if xb is None or any(v < 0 for v in xb):
            continue
        x = [Fraction(0)] * n
        for j, v in zip(cols, xb):
            x[j] = v
        yield cols, x


def brute_force_optimum(problem: LpProblem) -> Fraction:
    _, _, c = _standard_form(problem)
    best = None
    for _, x in basic_feasible_solutions(problem):
        val = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
        if best is None or val < best:
            best = val
    if best is None:
        raise NoFeasibleBasis("no candidate basis is feasible")
    return best


def solve(budget: CacheBudget) -> LpSolution:
    """Build and solve the program for ``budget``."""
    return solve_simplex(build_lp(budget))

