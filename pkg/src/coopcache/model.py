"""Core domain types for the 3x3 cache-aided interference network.

All quantities are exact :class:`fractions.Fraction` values.  Nodes are
labelled 1, 2, 3 on both the transmitter and the receiver side.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, fields
from fractions import Fraction
from math import comb
from typing import Callable, Dict, Iterator, Tuple, Union

NODES = (1, 2, 3)
Rational = Fraction
Number = Union[int, str, Fraction]


class InfeasibleBudget(ValueError):
    """Raised when mu_r + 3 mu_t < 1, i.e. the library does not fit."""

    def __init__(self, budget: "CacheBudget"):
        self.budget = budget
        super().__init__(
            f"infeasible cache budget (mu_r={budget.mu_r}, mu_t={budget.mu_t}): "
            f"requires mu_r + 3*mu_t >= 1, got {budget.mu_r + 3 * budget.mu_t}"
        )


class OutOfDomain(ValueError):
    pass


def to_fraction(value: Number) -> Fraction:
    """Exact conversion; ``"0.4"`` becomes ``2/5``. Floats are rejected."""
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a string or Fraction")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {value!r}") from exc


def format_fraction(value: Fraction) -> str:
    """Render as ``p/q`` (or ``p`` for integers)."""
    return str(Fraction(value))


@dataclass(frozen=True)
class CacheBudget:
    mu_r: Fraction
    mu_t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "mu_r", to_fraction(self.mu_r))
        object.__setattr__(self, "mu_t", to_fraction(self.mu_t))
        for name in ("mu_r", "mu_t"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise OutOfDomain(f"{name}={v} outside [0, 1]")


def check_feasible(budget: CacheBudget) -> bool:
    return budget.mu_r + 3 * budget.mu_t >= 1


def require_feasible(budget: CacheBudget) -> None:
    if not check_feasible(budget):
        raise InfeasibleBudget(budget)


class Region(enum.Enum):
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"
    R4 = "R4"
    R5 = "R5"

    def __str__(self):
        return self.value


RegionPredicate = Callable[[Fraction, Fraction], bool]


def _in_r1(r, t):
    return r + t >= 1 and r <= 1 and t <= 1


def _in_r2(r, t):
    return r + t < 1 and 2 * r + t >= 1 and r + 2 * t > 1


def _in_r3(r, t):
    return r + t >= Fraction(2, 3) and 2 * r + t < 1 and r >= 0


def _in_r4(r, t):
    return r + t < Fraction(2, 3) and r >= 0 and t > Fraction(1, 3)


def _in_r5(r, t):
    # The printed R5 also contains the corner (1, 0), which already belongs
    # to R1; both regions give tau = 0 and ratios a30 = 1 there.
    return (
        t <= Fraction(1, 3)
        and r + 2 * t <= 1
        and r + 3 * t >= 1
        and not (r == 1 and t == 0)
    )


REGION_PREDICATES: Dict[Region, RegionPredicate] = {
    Region.R1: _in_r1,
    Region.R2: _in_r2,
    Region.R3: _in_r3,
    Region.R4: _in_r4,
    Region.R5: _in_r5,
}


def matching_regions(budget: CacheBudget, predicates=None) -> list:
    """All regions whose predicate accepts ``budget`` (exactly one when sound)."""
    predicates = REGION_PREDICATES if predicates is None else predicates
    return [reg for reg, pred in predicates.items() if pred(budget.mu_r, budget.mu_t)]


def classify_region(budget: CacheBudget) -> Region:
    require_feasible(budget)
    found = matching_regions(budget)
    if len(found) != 1:
        raise RuntimeError(f"region predicates matched {found} at {budget}")
    return found[0]


def _mask(nodes) -> int:
    return sum(1 << (i - 1) for i in nodes)


@dataclass(frozen=True)
class CacheState:
    """Where a bit lives: the receivers and transmitters that cache it."""

    rx_set: frozenset
    tx_set: frozenset

    def __post_init__(self):
        rx, tx = frozenset(self.rx_set), frozenset(self.tx_set)
        object.__setattr__(self, "rx_set", rx)
        object.__setattr__(self, "tx_set", tx)
        if not (rx <= set(NODES) and tx <= set(NODES)):
            raise ValueError(f"node labels must be in {NODES}")
        if not tx and len(rx) != len(NODES):
            raise ValueError("a bit not cached at every receiver needs a transmitter copy")

    @property
    def size_class(self) -> Tuple[int, int]:
        return len(self.rx_set), len(self.tx_set)

    def sort_key(self):
        return (len(self.rx_set), _mask(self.rx_set), len(self.tx_set), _mask(self.tx_set))

    def __str__(self):
        rx = "".join(map(str, sorted(self.rx_set))) or "-"
        tx = "".join(map(str, sorted(self.tx_set))) or "-"
        return f"r{rx}t{tx}"


def subsets(nodes=NODES, size=None) -> Iterator[frozenset]:
    sizes = range(len(nodes) + 1) if size is None else (size,)
    for k in sizes:
        for combo in itertools.combinations(nodes, k):
            yield frozenset(combo)


def _is_valid_state(rx, tx) -> bool:
    return bool(tx) or len(rx) == len(NODES)


def enumerate_cache_states() -> list:
    states = [
        CacheState(rx, tx)
        for rx in subsets()
        for tx in subsets()
        if _is_valid_state(rx, tx)
    ]
    return sorted(states, key=CacheState.sort_key)


def state_size_class(state: CacheState) -> Tuple[int, int]:
    return state.size_class


# Field order used for every 13-vector in the package.
RATIO_NAMES = (
    "a30", "a31", "a32", "a33",
    "a21", "a22", "a23",
    "a11", "a12", "a13",
    "a01", "a02", "a03",
)
SIZE_CLASSES = tuple((int(n[1]), int(n[2])) for n in RATIO_NAMES)

# Row coefficients of the file-size identity and the two cache limits.
FILE_SIZE_ROW = (1, 3, 3, 1, 9, 9, 3, 9, 9, 3, 3, 3, 1)
RX_CACHE_ROW = (1, 3, 3, 1, 6, 6, 2, 3, 3, 1, 0, 0, 0)
TX_CACHE_ROW = (0, 1, 2, 1, 3, 6, 3, 3, 6, 3, 1, 2, 1)


def class_multiplicity(m: int, n: int) -> int:
    """Number of cache states with |rx_set| = m and |tx_set| = n."""
    return comb(3, m) * comb(3, n)


class InvalidRatios(ValueError):
    pass


@dataclass(frozen=True)
class SplitRatios:
    """File-splitting ratios; ``aMN`` is the length fraction of every subfile
    cached at M receivers and N transmitters."""

    a30: Fraction = Fraction(0)
    a31: Fraction = Fraction(0)
    a32: Fraction = Fraction(0)
    a33: Fraction = Fraction(0)
    a21: Fraction = Fraction(0)
    a22: Fraction = Fraction(0)
    a23: Fraction = Fraction(0)
    a11: Fraction = Fraction(0)
    a12: Fraction = Fraction(0)
    a13: Fraction = Fraction(0)
    a01: Fraction = Fraction(0)
    a02: Fraction = Fraction(0)
    a03: Fraction = Fraction(0)

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, to_fraction(getattr(self, f.name)))
        negative = [n for n, v in self.items() if v < 0]
        if negative:
            raise InvalidRatios(f"negative ratios: {negative}")
        total = row_value(FILE_SIZE_ROW, self)
        if total != 1:
            raise InvalidRatios(f"file-size identity violated: weighted sum is {total}, not 1")

    @classmethod
    def from_vector(cls, values) -> "SplitRatios":
        values = tuple(values)
        if len(values) != len(RATIO_NAMES):
            raise ValueError(f"expected {len(RATIO_NAMES)} values, got {len(values)}")
        return cls(**dict(zip(RATIO_NAMES, values)))

    def as_vector(self) -> Tuple[Fraction, ...]:
        return tuple(getattr(self, n) for n in RATIO_NAMES)

    def items(self):
        return [(n, getattr(self, n)) for n in RATIO_NAMES]

    def for_class(self, m: int, n: int) -> Fraction:
        """Ratio of size class (m, n); zero for classes that cannot occur."""
        name = f"a{m}{n}"
        return getattr(self, name) if name in RATIO_NAMES else Fraction(0)

    def for_state(self, state: CacheState) -> Fraction:
        return self.for_class(*state.size_class)


def row_value(row, ratios: SplitRatios) -> Fraction:
    return sum((c * v for c, v in zip(row, ratios.as_vector())), Fraction(0))


def rx_usage(ratios: SplitRatios) -> Fraction:
    """Per-receiver cache usage as a fraction of the library."""
    return row_value(RX_CACHE_ROW, ratios)


def tx_usage(ratios: SplitRatios) -> Fraction:
    return row_value(TX_CACHE_ROW, ratios)


def satisfies_budget(ratios: SplitRatios, budget: CacheBudget) -> bool:
    return rx_usage(ratios) <= budget.mu_r and tx_usage(ratios) <= budget.mu_t


def grid(step: Fraction):
    """Points 0, step, 2*step, ... not exceeding 1."""
    step = to_fraction(step)
    if step <= 0:
        raise ValueError("step must be positive")
    k = 0
    while k * step <= 1:
        yield k * step
        k += 1


def feasible_grid(step: Fraction) -> Iterator[CacheBudget]:
    pts = list(grid(step))
    for r in pts:
        for t in pts:
            b = CacheBudget(r, t)
            if check_feasible(b):
                yield b
