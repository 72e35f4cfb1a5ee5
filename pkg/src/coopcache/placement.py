"""Bit-level cache placement.

Every file is cut into 57 subfiles, one per cache state, using the same
layout for every file.  Files are numbered from 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Dict, Tuple

import numpy as np

from .model import NODES, CacheState, SplitRatios, enumerate_cache_states

BitRange = Tuple[int, int]
SubfileKey = Tuple[int, CacheState]


class IndivisibleFileSize(ValueError):
    def __init__(self, file_size: int, required_multiple: int):
        self.file_size = file_size
        self.required_multiple = required_multiple
        super().__init__(
            f"file size {file_size} is not a multiple of {required_multiple}; "
            "subfile lengths would not be integral"
        )


@dataclass(frozen=True)
class Library:
    num_files: int
    file_size: int
    files: Tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        if self.num_files < 3:
            raise ValueError("need at least 3 files for three distinct demands")
        if len(self.files) != self.num_files:
            raise ValueError("files does not match num_files")
        for f in self.files:
            if f.shape != (self.file_size,):
                raise ValueError("every file must have file_size bits")
            f.setflags(write=False)

    @classmethod
    def random(cls, num_files: int = 3, file_size: int = 1, seed: int = 0) -> "Library":
        rng = np.random.default_rng(seed)
        files = tuple(
            rng.integers(0, 2, size=file_size, dtype=np.uint8) for _ in range(num_files)
        )
        return cls(num_files, file_size, files)

    def file(self, index: int) -> np.ndarray:
        if not 1 <= index <= self.num_files:
            raise IndexError(f"file index {index} outside 1..{self.num_files}")
        return self.files[index - 1]


@dataclass(frozen=True)
class SplitLayout:
    """State -> [start, end) bit range, shared by all files."""

    file_size: int
    ranges: Dict[CacheState, BitRange]

    def range_of(self, state: CacheState) -> BitRange:
        return self.ranges[state]

    def length(self, state: CacheState) -> int:
        start, end = self.ranges[state]
        return end - start

    def subfile(self, library: Library, file_index: int, state: CacheState) -> np.ndarray:
        start, end = self.ranges[state]
        return library.file(file_index)[start:end]


@dataclass
class CacheContents:
    """Subfile bits held by each transmitter and receiver.

    Keys are ``(file, state)``; zero-length subfiles are kept so that
    membership mirrors the state's node sets exactly.
    """

    layout: SplitLayout
    tx_cache: Dict[int, Dict[SubfileKey, np.ndarray]]
    rx_cache: Dict[int, Dict[SubfileKey, np.ndarray]]

    @property
    def tx_occupancy(self) -> Dict[int, int]:
        return {p: sum(len(v) for v in c.values()) for p, c in self.tx_cache.items()}

    @property
    def rx_occupancy(self) -> Dict[int, int]:
        return {j: sum(len(v) for v in c.values()) for j, c in self.rx_cache.items()}


def minimal_file_size(ratios: SplitRatios) -> int:
    dens = [v.denominator for v in ratios.as_vector() if v != 0]
    return lcm(*dens) if dens else 1


def split_files(ratios: SplitRatios, library: Library) -> SplitLayout:
    F = library.file_size
    need = minimal_file_size(ratios)
    if F <= 0 or F % need:
        raise IndivisibleFileSize(F, need)
    ranges = {}
    start = 0
    for state in enumerate_cache_states():
        length = ratios.for_state(state) * F
        assert length.denominator == 1
        ranges[state] = (start, start + int(length))
        start += int(length)
    if start != F:
        raise AssertionError(f"layout covers {start} bits, expected {F}")
    return SplitLayout(F, ranges)


def place_caches(layout: SplitLayout, library: Library, budget=None) -> CacheContents:
    """Fill every node's cache.  With ``budget`` given, occupancy is checked
    against mu * L * F."""
    tx = {p: {} for p in NODES}
    rx = {j: {} for j in NODES}
    for i in range(1, library.num_files + 1):
        for state in layout.ranges:
            bits = layout.subfile(library, i, state)
            for p in state.tx_set:
                tx[p][(i, state)] = bits
            for j in state.rx_set:
                rx[j][(i, state)] = bits
    contents = CacheContents(layout, tx, rx)
    if budget is not None:
        LF = library.num_files * library.file_size
        for p, used in contents.tx_occupancy.items():
            assert used <= budget.mu_t * LF, f"transmitter {p} over budget"
        for j, used in contents.rx_occupancy.items():
            assert used <= budget.mu_r * LF, f"receiver {j} over budget"
    return contents


def reconstruct(layout: SplitLayout, library: Library, file_index: int) -> np.ndarray:
    """Concatenate a file's subfiles in layout order."""
    order = sorted(layout.ranges, key=lambda s: layout.ranges[s][0])
    parts = [layout.subfile(library, file_index, s) for s in order]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.uint8)


def occupancy_fraction(bits: int, library: Library) -> Fraction:
    return Fraction(bits, library.num_files * library.file_size)
