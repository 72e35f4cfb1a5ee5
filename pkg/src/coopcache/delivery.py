"""Delivery phase: coded-message planning, scheduling and decoding.

Receivers still miss three groups of subfiles of their demanded file:

* cached at the two other receivers -- one triple XOR per transmitter
  subset, sent over a multicast channel, TDMA across subsets;
* cached at exactly one other receiver -- pairwise XORs, sent over the
  (cooperative) hybrid X-multicast channel;
* cached at no receiver -- plain subfiles over MISO broadcast, partially
  cooperative X or X channels depending on how many transmitters hold them.

The physical layer is reduced to its sum DoF: ``B`` bits on a channel of
DoF ``d`` take normalized time ``B / d`` (time * log P).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .model import NODES, CacheBudget, CacheState, SplitRatios, subsets
from .placement import (
    CacheContents,
    Library,
    SplitLayout,
    SubfileKey,
    minimal_file_size,
    place_caches,
    split_files,
)


class ChannelKind(enum.Enum):
    MULTICAST = ("Multicast", Fraction(1))
    HYBRID_X_MULTICAST = ("HybridXMulticast", Fraction(9, 7))
    COOP_HYBRID_X_MULTICAST = ("CoopHybridXMulticast", Fraction(3, 2))
    MISO_BROADCAST = ("MisoBroadcast", Fraction(3))
    PARTIAL_COOP_X = ("PartialCoopX", Fraction(18, 7))
    X_CHANNEL = ("XChannel", Fraction(9, 5))

    def __init__(self, label, dof):
        self.label = label
        self.dof = dof

    def __str__(self):
        return self.label


# Receiver-uncached subfiles: channel used for each transmitter-set size.
_UNCACHED_CHANNEL = {
    3: ChannelKind.MISO_BROADCAST,
    2: ChannelKind.PARTIAL_COOP_X,
    1: ChannelKind.X_CHANNEL,
}


class NonDistinctDemand(ValueError):
    pass


class DecodeFailure(RuntimeError):
    def __init__(self, receiver: int, missing: Tuple[int, int]):
        self.receiver = receiver
        self.missing = missing
        super().__init__(f"receiver {receiver} is missing bits [{missing[0]}, {missing[1]})")


@dataclass(frozen=True)
class CodedMessage:
    constituents: Tuple[SubfileKey, ...]
    intended_receivers: frozenset
    serving_transmitters: frozenset
    length: int
    payload: Optional[np.ndarray] = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class DeliveryPhase:
    kind: ChannelKind
    group: int
    messages: Tuple[CodedMessage, ...]

    @property
    def total_bits(self) -> int:
        return sum(m.length for m in self.messages)

    @property
    def normalized_duration(self) -> Fraction:
        return Fraction(self.total_bits) / self.kind.dof

    def summary(self) -> dict:
        return {
            "kind": self.kind.label,
            "group": self.group,
            "dof": str(self.kind.dof),
            "messages": len(self.messages),
            "bits": self.total_bits,
            "duration": str(self.normalized_duration),
        }


@dataclass
class SimReport:
    phases: List[dict]
    measured_fdt: Fraction
    decode_ok: Dict[int, bool]
    tx_occupancy: Dict[int, int]
    rx_occupancy: Dict[int, int]
    num_files: int
    file_size: int
    demand: Tuple[int, ...]

    @property
    def all_decoded(self) -> bool:
        return all(self.decode_ok.values())

    def to_dict(self) -> dict:
        return {
            "num_files": self.num_files,
            "file_size": self.file_size,
            "demand": list(self.demand),
            "phases": self.phases,
            "measured_fdt": str(self.measured_fdt),
            "decode_ok": {str(j): ok for j, ok in self.decode_ok.items()},
            "tx_occupancy": {str(p): b for p, b in self.tx_occupancy.items()},
            "rx_occupancy": {str(j): b for j, b in self.rx_occupancy.items()},
        }


def _ordered_subsets(size):
    return sorted(subsets(size=size), key=lambda s: sum(1 << (i - 1) for i in s))


def _check_demand(demand: Sequence[int]) -> Tuple[int, int, int]:
    demand = tuple(demand)
    if len(demand) != len(NODES):
        raise ValueError(f"need one demand per receiver, got {demand}")
    if len(set(demand)) != len(demand):
        raise NonDistinctDemand(f"demands must be distinct, got {demand}")
    return demand


def _message(constituents, receivers, servers, layout, caches):
    length = layout.length(constituents[0][1])
    payload = None
    if caches is not None:
        holder = caches.tx_cache[min(servers)]
        for p in servers:
            missing = [k for k in constituents if k not in caches.tx_cache[p]]
            if missing:
                raise AssertionError(f"transmitter {p} cannot build message from {missing}")
        payload = np.zeros(length, dtype=np.uint8)
        for key in constituents:
            payload ^= holder[key]
    return CodedMessage(
        tuple(constituents), frozenset(receivers), frozenset(servers), length, payload
    )


def plan_delivery(
    ratios: SplitRatios,
    layout: SplitLayout,
    demand: Sequence[int],
    caches: Optional[CacheContents] = None,
) -> List[DeliveryPhase]:
    """Schedule every coded message needed to serve ``demand``.

    ``demand[j-1]`` is the file wanted by receiver j.  Payloads are only
    computed when ``caches`` is given; they are built from the transmitter
    caches alone.
    """
    d = dict(zip(NODES, _check_demand(demand)))
    for state, (start, end) in layout.ranges.items():
        if end - start != ratios.for_state(state) * layout.file_size:
            raise ValueError(f"layout does not match ratios at {state}")
    everyone = frozenset(NODES)
    phases: List[DeliveryPhase] = []

    def add(kind, group, messages):
        phase = DeliveryPhase(kind, group, tuple(messages))
        if phase.total_bits:
            phases.append(phase)

    # Cached at both other receivers: W_{1,r23} ^ W_{2,r13} ^ W_{3,r12}.
    for n in (1, 2, 3):
        for psi in _ordered_subsets(n):
            keys = [(d[j], CacheState(everyone - {j}, psi)) for j in NODES]
            add(ChannelKind.MULTICAST, 1, [_message(keys, everyone, psi, layout, caches)])

    # Cached at one other receiver: W_{j,rk} ^ W_{k,rj} for each pair j < k.
    for n in (1, 2, 3):
        msgs = []
        for j, k in ((1, 2), (1, 3), (2, 3)):
            for psi in _ordered_subsets(n):
                keys = [(d[j], CacheState({k}, psi)), (d[k], CacheState({j}, psi))]
                msgs.append(_message(keys, {j, k}, psi, layout, caches))
        kind = ChannelKind.HYBRID_X_MULTICAST if n == 1 else ChannelKind.COOP_HYBRID_X_MULTICAST
        add(kind, 2, msgs)

    # Cached at no receiver: sent uncoded.
    for n in (3, 2, 1):
        msgs = [
            _message([(d[j], CacheState(set(), psi))], {j}, psi, layout, caches)
            for j in NODES
            for psi in _ordered_subsets(n)
        ]
        add(_UNCACHED_CHANNEL[n], 3, msgs)
    return phases


def measured_fdt(plan: Sequence[DeliveryPhase], file_size: int) -> Fraction:
    total = sum((ph.normalized_duration for ph in plan), Fraction(0))
    return total / (len(NODES) * file_size)


def group_fdt(plan: Sequence[DeliveryPhase], file_size: int, group: int) -> Fraction:
    return measured_fdt([ph for ph in plan if ph.group == group], file_size)


def execute(
    plan: Sequence[DeliveryPhase],
    caches: CacheContents,
    library: Library,
    demand: Sequence[int],
) -> SimReport:
    """Deliver every message and let each receiver decode its file."""
    layout = caches.layout
    d = dict(zip(NODES, _check_demand(demand)))
    F = library.file_size
    recovered = {j: np.zeros(F, dtype=np.uint8) for j in NODES}
    have = {j: np.zeros(F, dtype=bool) for j in NODES}

    for j in NODES:
        for (i, state), bits in caches.rx_cache[j].items():
            if i == d[j]:
                start, end = layout.range_of(state)
                recovered[j][start:end] = bits
                have[j][start:end] = True

    for phase in plan:
        for msg in phase.messages:
            if msg.payload is None:
                raise ValueError("plan has no payloads; build it with caches")
            for j in msg.intended_receivers:
                _decode(j, d[j], msg, caches.rx_cache[j], layout, recovered[j], have[j])

    decode_ok = {}
    for j in NODES:
        if not have[j].all():
            gap = np.flatnonzero(~have[j])
            raise DecodeFailure(j, (int(gap[0]), int(gap[-1]) + 1))
        decode_ok[j] = bool(np.array_equal(recovered[j], library.file(d[j])))

    return SimReport(
        phases=[ph.summary() for ph in plan],
        measured_fdt=measured_fdt(plan, F),
        decode_ok=decode_ok,
        tx_occupancy=caches.tx_occupancy,
        rx_occupancy=caches.rx_occupancy,
        num_files=library.num_files,
        file_size=F,
        demand=tuple(d[j] for j in NODES),
    )


def _decode(receiver, wanted_file, msg, rx_cache, layout, out, have):
    wanted = [k for k in msg.constituents if k[0] == wanted_file and receiver not in k[1].rx_set]
    if len(wanted) != 1:
        raise AssertionError(f"message {msg.constituents} is not addressed to receiver {receiver}")
    bits = msg.payload.copy()
    for key in msg.constituents:
        if key == wanted[0]:
            continue
        if key not in rx_cache:
            raise DecodeFailure(receiver, layout.range_of(key[1]))
        bits ^= rx_cache[key]
    start, end = layout.range_of(wanted[0][1])
    out[start:end] = bits
    have[start:end] = True


@dataclass
class Scenario:
    """Everything built for one simulation run."""

    budget: CacheBudget
    ratios: SplitRatios
    library: Library
    layout: SplitLayout
    caches: CacheContents
    plan: List[DeliveryPhase]
    report: SimReport


def simulate(
    budget: CacheBudget,
    ratios: SplitRatios,
    num_files: int = 3,
    file_size: Optional[int] = None,
    seed: int = 0,
    demand: Sequence[int] = (1, 2, 3),
) -> Scenario:
    """Placement plus delivery for one demand vector.  ``file_size=None``
    picks the smallest size that makes every subfile integral."""
    if file_size is None:
        file_size = minimal_file_size(ratios)
    library = Library.random(num_files, file_size, seed)
    layout = split_files(ratios, library)
    caches = place_caches(layout, library, budget)
    plan = plan_delivery(ratios, layout, demand, caches)
    report = execute(plan, caches, library, demand)
    return Scenario(budget, ratios, library, layout, caches, plan, report)
