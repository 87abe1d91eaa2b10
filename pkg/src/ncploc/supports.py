"""Support tuples and the closure equation they must satisfy.

A localizing subcategory assigns to every interval ``Y`` the set ``U_Y`` of
primes at which it has nonvanishing K-theory.  A tuple of such sets is
realized by a localizing subcategory exactly when every slice satisfies

    U_Y = union over {Z : Y in B_Z} of intersection over {V in B_Z} of U_V

and for a single prime the valid boolean tuples are exactly the unions of
maximal boxes.  Primes are labelled by integers with ``0`` standing for the
generic point.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping

import numpy as np

from .core import Interval, Space, box_masks, boxes_containing
from .errors import BudgetExceededError, InvalidInputError, SpaceMismatchError

DEFAULT_MAX_N = 8
DEFAULT_BRUTEFORCE_BITS = 22
BUDGET_ENV = "NCPLOC_BUDGET_BITS"


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


def check_prime_label(p) -> int:
    if isinstance(p, bool) or not isinstance(p, int) or not (p == 0 or is_prime(p)):
        raise InvalidInputError(f"{p!r} is neither 0 nor a prime")
    return p


@dataclass(frozen=True)
class PLocalTuple:
    """Boolean assignment interval -> {supported, empty} for one prime."""

    space: Space
    bits: int

    def __post_init__(self) -> None:
        if not 0 <= self.bits <= self.space.full_mask:
            raise InvalidInputError(f"bitset {self.bits:#x} does not fit {self.space.m} intervals")

    @classmethod
    def from_intervals(cls, space: Space, intervals: Iterable[Interval]) -> PLocalTuple:
        return cls(space, space.mask(intervals))

    @classmethod
    def empty(cls, space: Space) -> PLocalTuple:
        return cls(space, 0)

    @classmethod
    def full(cls, space: Space) -> PLocalTuple:
        return cls(space, space.full_mask)

    @property
    def support(self) -> list[Interval]:
        return self.space.unmask(self.bits)

    def __getitem__(self, y: Interval) -> bool:
        return bool(self.bits >> self.space.index(y) & 1)

    def issubset(self, other: PLocalTuple) -> bool:
        _same_space(self.space, other.space)
        return self.bits & ~other.bits == 0

    def __or__(self, other: PLocalTuple) -> PLocalTuple:
        _same_space(self.space, other.space)
        return PLocalTuple(self.space, self.bits | other.bits)

    def __and__(self, other: PLocalTuple) -> PLocalTuple:
        _same_space(self.space, other.space)
        return PLocalTuple(self.space, self.bits & other.bits)

    def to_json(self) -> dict:
        return {"n": self.space.n, "support": [y.to_json() for y in self.support]}

    @classmethod
    def from_json(cls, data: Mapping) -> PLocalTuple:
        space = Space(int(data["n"]))
        return cls.from_intervals(space, (Interval.from_json(y, space.n) for y in data["support"]))

    def __str__(self) -> str:
        return "{" + ",".join(str(y) for y in self.support) + "}"


def _same_space(s1: Space, s2: Space) -> None:
    if s1 != s2:
        raise SpaceMismatchError(f"spaces of size {s1.n} and {s2.n} differ")


@dataclass(frozen=True)
class SupportTuple:
    """Assignment interval -> finite set of prime labels from ``universe``."""

    space: Space
    universe: tuple[int, ...]
    sets: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        for p in self.universe:
            check_prime_label(p)
        if list(self.universe) != sorted(set(self.universe)):
            raise InvalidInputError("universe must be strictly increasing")
        if len(self.sets) != self.space.m:
            raise InvalidInputError(f"expected {self.space.m} sets, got {len(self.sets)}")
        allowed = set(self.universe)
        for s in self.sets:
            if not s <= allowed:
                raise InvalidInputError(f"primes {sorted(s - allowed)} are outside the universe")

    @classmethod
    def from_mapping(
        cls, space: Space, universe: Iterable[int], sets: Mapping[Interval, Iterable[int]]
    ) -> SupportTuple:
        for y in sets:
            space.check(y)
        return cls(
            space,
            tuple(sorted(set(universe))),
            tuple(frozenset(sets.get(y, ())) for y in space.intervals),
        )

    @classmethod
    def from_slices(cls, space: Space, slices: Mapping[int, PLocalTuple]) -> SupportTuple:
        universe = tuple(sorted(slices))
        sets = []
        for i in range(space.m):
            sets.append(frozenset(q for q in universe if slices[q].bits >> i & 1))
        return cls(space, universe, tuple(sets))

    def __getitem__(self, y: Interval) -> frozenset[int]:
        return self.sets[self.space.index(y)]

    def slice(self, q: int) -> PLocalTuple:
        bits = 0
        for i, s in enumerate(self.sets):
            if q in s:
                bits |= 1 << i
        return PLocalTuple(self.space, bits)

    def issubset(self, other: SupportTuple) -> bool:
        return all(s <= t for s, t in zip(self.sets, other.sets))

    def to_json(self) -> dict:
        return {
            "n": self.space.n,
            "universe": list(self.universe),
            "sets": {y.key(): sorted(s) for y, s in zip(self.space.intervals, self.sets)},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> SupportTuple:
        space = Space(int(data["n"]))
        sets: dict[Interval, list[int]] = {}
        for key, primes in data["sets"].items():
            a, b = key.split("-")
            sets[Interval(int(a), int(b), space.n)] = [int(p) for p in primes]
        return cls.from_mapping(space, (int(p) for p in data["universe"]), sets)


def _closure_holds(space: Space, bits: int, skip_self: bool) -> bool:
    masks = box_masks(space)
    containing = boxes_containing(space)
    for y in range(space.m):
        rhs = False
        for z in containing[y]:
            need = masks[z] & ~(1 << y) if skip_self else masks[z]
            if bits & need == need:
                rhs = True
                break
        if skip_self:
            if bits >> y & 1 and not rhs:
                return False
        elif bool(bits >> y & 1) != rhs:
            return False
    return True


def is_valid_plocal(t: PLocalTuple) -> bool:
    return _closure_holds(t.space, t.bits, skip_self=False)


def is_valid_plocal_reduced(t: PLocalTuple) -> bool:
    """Equivalent inclusion form of the closure equation.

    Only requires ``U_Y`` to be covered by some box through ``Y`` whose other
    members are all supported.
    """
    return _closure_holds(t.space, t.bits, skip_self=True)


def is_valid(t: SupportTuple) -> bool:
    return all(is_valid_plocal(t.slice(q)) for q in t.universe)


def tuple_from_generators(space: Space, gens: Iterable[Interval]) -> PLocalTuple:
    masks = box_masks(space)
    bits = 0
    for w in gens:
        bits |= masks[space.index(w)]
    return PLocalTuple(space, bits)


def v_from_u(t: PLocalTuple) -> list[Interval]:
    """Intervals ``Y`` whose whole box ``B_Y`` is supported."""
    masks = box_masks(t.space)
    return [y for y, mask in zip(t.space.intervals, masks) if t.bits & mask == mask]


def u_from_v(space: Space, v: Iterable[Interval]) -> PLocalTuple:
    return tuple_from_generators(space, v)


def box_union_within(space: Space, bits: int) -> int:
    """Largest union of maximal boxes contained in ``bits``."""
    out = 0
    for mask in box_masks(space):
        if bits & mask == mask:
            out |= mask
    return out


def enumerate_valid_plocal(space: Space, max_n: int = DEFAULT_MAX_N) -> list[PLocalTuple]:
    """All distinct unions of maximal boxes, ascending by bitset value."""
    if space.n > max_n:
        raise BudgetExceededError(f"n={space.n} exceeds the enumeration limit {max_n}")
    masks = sorted(set(box_masks(space)))
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for bits in frontier:
            for mask in masks:
                u = bits | mask
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return [PLocalTuple(space, bits) for bits in sorted(seen)]


def bruteforce_budget_bits() -> int:
    value = os.environ.get(BUDGET_ENV)
    if value is None:
        return DEFAULT_BRUTEFORCE_BITS
    try:
        return int(value)
    except ValueError:
        raise InvalidInputError(f"{BUDGET_ENV} must be an integer, got {value!r}") from None


def brute_force_valid_plocal(space: Space, max_bits: int | None = None) -> list[PLocalTuple]:
    """Filter every boolean tuple through the closure equation.

    Independent of :func:`enumerate_valid_plocal`; vectorized over all
    ``2**m`` candidates at once.
    """
    if max_bits is None:
        max_bits = bruteforce_budget_bits()
    m = space.m
    if m > max_bits:
        raise BudgetExceededError(f"2^{m} tuples exceed the brute-force budget 2^{max_bits}")
    dtype = np.uint32 if m <= 32 else np.uint64
    cand = np.arange(1 << m, dtype=dtype)
    masks = [dtype(mask) for mask in box_masks(space)]
    full_box = [(cand & mask) == mask for mask in masks]
    ok = np.ones(cand.shape, dtype=bool)
    for y, zs in enumerate(boxes_containing(space)):
        rhs = np.zeros(cand.shape, dtype=bool)
        for z in zs:
            rhs |= full_box[z]
        lhs = ((cand >> dtype(y)) & dtype(1)).astype(bool)
        ok &= lhs == rhs
    return [PLocalTuple(space, int(bits)) for bits in cand[ok]]


def valid_support_tuples(space: Space, universe: Iterable[int], max_n: int = DEFAULT_MAX_N) -> list[SupportTuple]:
    """All valid tuples over a finite universe, one valid slice per prime."""
    universe = tuple(sorted(set(check_prime_label(p) for p in universe)))
    slices = enumerate_valid_plocal(space, max_n=max_n)
    out = []
    for combo in product(slices, repeat=len(universe)):
        out.append(SupportTuple.from_slices(space, dict(zip(universe, combo))))
    return out


def triangle_triples(space: Space) -> list[tuple[Interval, Interval, Interval]]:
    """Interval triples ``([x1,x2-1], [x2,x3-1], [x1,x3-1])`` for ``x1 < x2 < x3 <= n+1``."""
    n = space.n
    out = []
    for x1 in range(1, n + 2):
        for x2 in range(x1 + 1, n + 2):
            for x3 in range(x2 + 1, n + 2):
                out.append((space.interval(x1, x2 - 1), space.interval(x2, x3 - 1), space.interval(x1, x3 - 1)))
    return out


def triangle_inclusions_hold(t: SupportTuple) -> bool:
    """Each set of every triangle triple lies in the union of the other two."""
    for y1, y2, y3 in triangle_triples(t.space):
        s1, s2, s3 = t[y1], t[y2], t[y3]
        if not (s1 <= s2 | s3 and s2 <= s1 | s3 and s3 <= s1 | s2):
            return False
    return True


# --- abelian groups and their Z-support ------------------------------------


@dataclass(frozen=True)
class SpectrumSet:
    """Either all of Spec Z or a finite set of prime labels."""

    is_all: bool
    primes: frozenset[int] = frozenset()

    @classmethod
    def all(cls) -> SpectrumSet:
        return cls(True)

    @classmethod
    def finite(cls, primes: Iterable[int]) -> SpectrumSet:
        return cls(False, frozenset(check_prime_label(p) for p in primes))

    def __contains__(self, p: int) -> bool:
        return self.is_all or p in self.primes

    def to_json(self):
        return "all" if self.is_all else sorted(self.primes)


def _prime_power_base(q: int) -> int:
    if q < 2:
        raise InvalidInputError(f"{q} is not a prime power")
    p = 2
    while q % p:
        p += 1
    r = q
    while r % p == 0:
        r //= p
    if r != 1:
        raise InvalidInputError(f"{q} is not a prime power")
    return p


@dataclass(frozen=True)
class FgGroup:
    """``Z^free_rank + Q^rational_rank + sum of Z/q`` over prime powers ``q``."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()
    rational_rank: int = 0

    def __post_init__(self) -> None:
        if self.free_rank < 0 or self.rational_rank < 0:
            raise InvalidInputError("ranks must be non-negative")
        for q in self.torsion:
            _prime_power_base(q)


def supp_of_group(g: FgGroup) -> SpectrumSet:
    """Primes appearing in a minimal injective resolution of ``g``.

    A free summand has resolution ``Z -> Q -> Q/Z``, which already meets
    every prime and the generic point.
    """
    if g.free_rank > 0:
        return SpectrumSet.all()
    primes = {_prime_power_base(q) for q in g.torsion}
    if g.rational_rank > 0:
        primes.add(0)
    return SpectrumSet.finite(primes)
