"""Intervals of the n-point totally ordered space and their maximal boxes.

The space ``X = {1, ..., n}`` carries the Alexandrov topology of its total
order, so its non-empty locally closed subsets are exactly the intervals
``[a, b]`` with ``1 <= a <= b <= n``.  Intervals are kept in lexicographic
``(a, b)`` order and that order fixes the bit positions used by every bitset
encoding in the package: interval number ``i`` in :meth:`Space.intervals`
is bit ``1 << i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property, lru_cache
from typing import Iterable

from .errors import InvalidInputError, SpaceMismatchError


class Parity(IntEnum):
    EVEN = 0
    ODD = 1


@dataclass(frozen=True)
class Space:
    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise InvalidInputError(f"space size must be a positive integer, got {self.n!r}")

    @cached_property
    def intervals(self) -> tuple[Interval, ...]:
        return tuple(Interval(a, b, self.n) for a in range(1, self.n + 1) for b in range(a, self.n + 1))

    @property
    def m(self) -> int:
        """Number of intervals, ``n(n+1)/2``."""
        return self.n * (self.n + 1) // 2

    @property
    def full_mask(self) -> int:
        return (1 << self.m) - 1

    def interval(self, a: int, b: int) -> Interval:
        return Interval(a, b, self.n)

    def index(self, y: Interval) -> int:
        self.check(y)
        # intervals starting before a contribute n, n-1, ..., n-a+2 entries
        before = (a := y.a) - 1
        return before * self.n - before * (before - 1) // 2 + (y.b - a)

    def check(self, y: Interval) -> None:
        if y.n != self.n:
            raise SpaceMismatchError(f"interval {y} lives in a space of size {y.n}, not {self.n}")

    def mask(self, intervals: Iterable[Interval]) -> int:
        bits = 0
        for y in intervals:
            bits |= 1 << self.index(y)
        return bits

    def unmask(self, bits: int) -> list[Interval]:
        return [y for i, y in enumerate(self.intervals) if bits >> i & 1]


@dataclass(frozen=True, order=True)
class Interval:
    a: int
    b: int
    n: int

    def __post_init__(self) -> None:
        if not (1 <= self.a <= self.b <= self.n):
            raise InvalidInputError(f"[{self.a},{self.b}] is not an interval of {{1..{self.n}}}")

    @property
    def space(self) -> Space:
        return Space(self.n)

    def points(self) -> range:
        return range(self.a, self.b + 1)

    def to_json(self) -> list[int]:
        return [self.a, self.b]

    @classmethod
    def from_json(cls, data, n: int) -> Interval:
        a, b = data
        return cls(int(a), int(b), n)

    def key(self) -> str:
        return f"{self.a}-{self.b}"

    def __str__(self) -> str:
        return f"[{self.a},{self.b}]"


def enumerate_intervals(space: Space) -> list[Interval]:
    return list(space.intervals)


def box_parity(y: Interval, z: Interval) -> Parity | None:
    """Degree of the nonzero K-group of ``R_y`` evaluated at ``z``.

    With ``y = [a, b]`` and ``z = [c, d]``: even when ``c <= a <= d <= b``,
    odd when ``a < c``, ``b < d`` and ``c - 1 <= b``, otherwise the group
    vanishes and ``None`` is returned.
    """
    if y.n != z.n:
        raise SpaceMismatchError(f"{y} and {z} belong to different spaces")
    a, b, c, d = y.a, y.b, z.a, z.b
    if c <= a <= d <= b:
        return Parity.EVEN
    if a < c and b < d and c - 1 <= b:
        return Parity.ODD
    return None


@dataclass(frozen=True)
class Box:
    base: Interval
    members: tuple[tuple[Interval, Parity], ...]

    @property
    def intervals(self) -> list[Interval]:
        return [z for z, _ in self.members]

    def __contains__(self, z: Interval) -> bool:
        return any(z == w for w, _ in self.members)

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "members": [[z.to_json(), int(p)] for z, p in self.members],
        }

    @classmethod
    def from_json(cls, data: dict, n: int) -> Box:
        return cls(
            Interval.from_json(data["base"], n),
            tuple((Interval.from_json(z, n), Parity(p)) for z, p in data["members"]),
        )


def maximal_box(y: Interval) -> Box:
    members = []
    for z in y.space.intervals:
        p = box_parity(y, z)
        if p is not None:
            members.append((z, p))
    return Box(y, tuple(members))


@lru_cache(maxsize=None)
def box_masks(space: Space) -> tuple[int, ...]:
    """Bitset of ``B_y`` for every interval ``y`` in canonical order."""
    return tuple(space.mask(maximal_box(y).intervals) for y in space.intervals)


@lru_cache(maxsize=None)
def boxes_containing(space: Space) -> tuple[tuple[int, ...], ...]:
    """For each interval index ``i``, indices ``j`` with interval ``i`` in ``B_j``."""
    masks = box_masks(space)
    return tuple(
        tuple(j for j, mask in enumerate(masks) if mask >> i & 1) for i in range(space.m)
    )
