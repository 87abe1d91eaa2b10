"""Noncrossing partitions of ``{1, ..., k}``.

Order convention: ``refinement_leq(t, s)`` holds when every block of ``s``
sits inside a block of ``t``.  The one-block partition is therefore the
bottom and the all-singletons partition the top, the reverse of the more
common refinement order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Iterable, Iterator, Mapping

from .errors import BudgetExceededError, CrossingPartitionError, InvalidInputError, NotAPartitionError

DEFAULT_MAX_K = 10


def _canonical(blocks: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


def _check_partition(k: int, blocks: tuple[tuple[int, ...], ...]) -> None:
    if k < 1:
        raise InvalidInputError(f"k must be positive, got {k}")
    seen: set[int] = set()
    for block in blocks:
        if not block:
            raise NotAPartitionError("empty block")
        for x in block:
            if not 1 <= x <= k:
                raise NotAPartitionError(f"{x} is outside 1..{k}")
            if x in seen:
                raise NotAPartitionError(f"{x} appears in two blocks")
            seen.add(x)
    if len(seen) != k:
        missing = sorted(set(range(1, k + 1)) - seen)
        raise NotAPartitionError(f"elements {missing} are not covered")


def _labels(k: int, blocks) -> list[int]:
    label = [0] * (k + 1)
    for i, block in enumerate(blocks):
        for x in block:
            label[x] = i
    return label


def _first_crossing(k: int, blocks) -> tuple[int, int, int, int] | None:
    label = _labels(k, blocks)
    # a<b<c<d with a~c, b~d in distinct blocks; quadratic in k per pair of blocks
    for a in range(1, k + 1):
        for c in range(a + 2, k + 1):
            if label[a] != label[c]:
                continue
            for b in range(a + 1, c):
                if label[b] == label[a]:
                    continue
                for d in range(c + 1, k + 1):
                    if label[d] == label[b]:
                        return a, b, c, d
    return None


def is_noncrossing(blocks: Iterable[Iterable[int]], k: int) -> bool:
    canon = _canonical(blocks)
    _check_partition(k, canon)
    return _first_crossing(k, canon) is None


@dataclass(frozen=True, order=True)
class NoncrossingPartition:
    """Canonical form: blocks sorted by minimum, each block ascending."""

    k: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        canon = _canonical(self.blocks)
        if canon != self.blocks:
            object.__setattr__(self, "blocks", canon)
        _check_partition(self.k, canon)
        crossing = _first_crossing(self.k, canon)
        if crossing is not None:
            raise CrossingPartitionError(f"blocks cross at {crossing}")

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], k: int | None = None) -> NoncrossingPartition:
        canon = _canonical(blocks)
        if k is None:
            k = max((max(b) for b in canon if b), default=0)
        return cls(k, canon)

    @classmethod
    def singletons(cls, k: int) -> NoncrossingPartition:
        return cls(k, tuple((x,) for x in range(1, k + 1)))

    @classmethod
    def one_block(cls, k: int) -> NoncrossingPartition:
        return cls(k, (tuple(range(1, k + 1)),))

    @cached_property
    def _label(self) -> list[int]:
        return _labels(self.k, self.blocks)

    def same_block(self, x: int, y: int) -> bool:
        return self._label[x] == self._label[y]

    def block_of(self, x: int) -> tuple[int, ...]:
        return self.blocks[self._label[x]]

    def to_json(self) -> dict:
        return {"k": self.k, "blocks": [list(b) for b in self.blocks]}

    @classmethod
    def from_json(cls, data: Mapping) -> NoncrossingPartition:
        return cls(int(data["k"]), _canonical(data["blocks"]))

    def rotate(self, shift: int = 1) -> NoncrossingPartition:
        """Relabel ``x -> x + shift`` modulo ``k`` (labels stay in 1..k)."""
        k = self.k
        return NoncrossingPartition(k, _canonical(((x - 1 + shift) % k + 1 for x in b) for b in self.blocks))

    def __str__(self) -> str:
        return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


def refinement_leq(t: NoncrossingPartition, s: NoncrossingPartition) -> bool:
    """``t <= s``: every block of ``s`` lies inside some block of ``t``."""
    if t.k != s.k:
        raise InvalidInputError(f"partitions of {t.k} and {s.k} points are not comparable")
    return all(len({t._label[x] for x in block}) == 1 for block in s.blocks)


def restricted_growth_strings(k: int) -> Iterator[list[int]]:
    """All RGS ``r`` of length ``k``: ``r[0] = 0``, ``r[i] <= 1 + max(r[:i])``."""
    r = [0] * k

    def extend(i: int, top: int) -> Iterator[list[int]]:
        if i == k:
            yield r
            return
        for v in range(top + 2):
            r[i] = v
            yield from extend(i + 1, max(top, v))

    if k == 0:
        yield []
        return
    yield from extend(1, 0)


def set_partitions(k: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    for r in restricted_growth_strings(k):
        blocks: list[list[int]] = [[] for _ in range(max(r) + 1)]
        for x, label in enumerate(r, start=1):
            blocks[label].append(x)
        yield tuple(tuple(b) for b in blocks)


def enumerate_ncp(k: int, max_k: int = DEFAULT_MAX_K) -> list[NoncrossingPartition]:
    if k < 1:
        raise InvalidInputError(f"k must be positive, got {k}")
    if k > max_k:
        raise BudgetExceededError(f"k={k} exceeds the enumeration limit {max_k}")
    out = [NoncrossingPartition(k, _canonical(b)) for b in set_partitions(k) if _first_crossing(k, b) is None]
    out.sort()
    return out


def catalan(k: int) -> int:
    if k < 0:
        raise InvalidInputError(f"k must be non-negative, got {k}")
    return comb(2 * k, k) // (k + 1)


def _crosses(chord: tuple[int, int], blocks_pos: list[list[int]]) -> bool:
    """Whether the chord between two positions crosses any block's hull."""
    lo, hi = chord
    for pos in blocks_pos:
        inside = any(lo < p < hi for p in pos)
        outside = any(p < lo or p > hi for p in pos)
        if inside and outside:
            return True
    return False


def kreweras_complement(s: NoncrossingPartition) -> NoncrossingPartition:
    """Coarsest partition of the primed labels compatible with ``s``.

    Points are interleaved ``1 < 1' < 2 < 2' < ... < k < k'`` (unprimed ``x``
    at position ``2x - 1``, primed ``x'`` at ``2x``).  Two primed points share
    a block exactly when the chord joining them crosses no block of ``s``;
    for noncrossing ``s`` that relation is already an equivalence.
    """
    k = s.k
    blocks_pos = [[2 * x - 1 for x in b] for b in s.blocks]
    parent = list(range(k + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            if not _crosses((2 * i, 2 * j), blocks_pos):
                parent[find(j)] = find(i)
    groups: dict[int, list[int]] = {}
    for x in range(1, k + 1):
        groups.setdefault(find(x), []).append(x)
    return NoncrossingPartition(k, _canonical(groups.values()))
