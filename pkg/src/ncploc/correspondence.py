"""Valid p-local tuples versus noncrossing partitions of ``n + 1`` points.

A valid tuple ``t`` on the n-point space maps to the partition of
``{1, ..., n+1}`` in which ``a ~ b+1`` exactly when ``t([a, b])`` is empty.
Larger tuples map to finer partitions, i.e. *higher* in the
:func:`~ncploc.ncp.refinement_leq` order, so the map is an order
isomorphism with no reversal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import Interval, Space, box_masks
from .errors import (
    BudgetExceededError,
    CrossingPartitionError,
    InvalidInputError,
    InvalidTupleError,
    InvariantViolation,
)
from .lattice import FiniteLattice
from .ncp import NoncrossingPartition, catalan, enumerate_ncp, refinement_leq
from .supports import (
    DEFAULT_MAX_N,
    PLocalTuple,
    box_union_within,
    enumerate_valid_plocal,
    is_valid_plocal,
    valid_support_tuples,
)

DEFAULT_PRODUCT_BUDGET = 2000


def psi(t: PLocalTuple) -> NoncrossingPartition:
    """Partition generated by ``a ~ b+1`` whenever ``t([a, b])`` is empty.

    The relation is checked, not closed: for a valid tuple it is already an
    equivalence and noncrossing, so a failure here is a bug.
    """
    if not is_valid_plocal(t):
        raise InvalidTupleError(f"{t} does not satisfy the closure equation")
    k = t.space.n + 1
    related = [1 << x for x in range(k + 1)]
    for y in t.space.intervals:
        if not t[y]:
            related[y.a] |= 1 << (y.b + 1)
            related[y.b + 1] |= 1 << y.a
    blocks = []
    for x in range(1, k + 1):
        cls = related[x]
        members = [z for z in range(1, k + 1) if cls >> z & 1]
        if any(related[z] != cls for z in members):
            raise InvariantViolation(f"relation from {t} is not transitive at {x}")
        if members[0] == x:
            blocks.append(tuple(members))
    try:
        return NoncrossingPartition(k, tuple(blocks))
    except CrossingPartitionError as exc:
        raise InvariantViolation(f"partition from {t} is crossing: {exc}") from exc


def psi_inverse(s: NoncrossingPartition | Iterable[Iterable[int]], k: int | None = None) -> PLocalTuple:
    if not isinstance(s, NoncrossingPartition):
        s = NoncrossingPartition.from_blocks(s, k)
    if s.k < 2:
        raise InvalidInputError("need at least two points to describe a nonempty space")
    space = Space(s.k - 1)
    bits = 0
    for i, y in enumerate(space.intervals):
        if not s.same_block(y.a, y.b + 1):
            bits |= 1 << i
    t = PLocalTuple(space, bits)
    if not is_valid_plocal(t):
        raise InvariantViolation(f"{s} maps to an invalid tuple")
    return t


@dataclass(frozen=True)
class TwoBlockDecomposition:
    """Split of the k-gon into a linear arc ``inner`` (avoiding 1) and the rest."""

    k: int
    inner: tuple[int, ...]
    outer: tuple[int, ...]

    def __post_init__(self) -> None:
        inner, outer = self.inner, self.outer
        if not inner or not outer:
            raise InvalidInputError("both blocks must be nonempty")
        if sorted(inner + outer) != list(range(1, self.k + 1)):
            raise InvalidInputError("blocks must partition 1..k")
        if 1 in inner or list(inner) != list(range(inner[0], inner[-1] + 1)):
            raise InvalidInputError(f"inner block {inner} is not an interval avoiding 1")

    def as_partition(self) -> NoncrossingPartition:
        return NoncrossingPartition(self.k, (self.inner, self.outer))

    def to_interval(self) -> Interval:
        return Interval(self.inner[0] - 1, self.inner[-1] - 1, self.k - 1)

    def coarsens(self, s: NoncrossingPartition) -> bool:
        """Every block of ``s`` lies inside one of the two blocks."""
        return refinement_leq(self.as_partition(), s)


def interval_to_two_block(y: Interval) -> TwoBlockDecomposition:
    k = y.n + 1
    inner = tuple(range(y.a + 1, y.b + 2))
    outer = tuple(x for x in range(1, k + 1) if x not in inner)
    return TwoBlockDecomposition(k, inner, outer)


def two_block_from_arc(k: int, arc: Iterable[int]) -> TwoBlockDecomposition:
    """Decomposition whose blocks are a cyclic arc and its complement."""
    arc = set(arc)
    rest = set(range(1, k + 1)) - arc
    inner, outer = (rest, arc) if 1 in arc else (arc, rest)
    return TwoBlockDecomposition(k, tuple(sorted(inner)), tuple(sorted(outer)))


def separating_decomposition(s: NoncrossingPartition, a: int, b: int) -> Interval:
    """Interval whose two-block decomposition coarsens ``s`` and separates ``a`` from ``b+1``.

    Grows an arc around vertex ``a`` of the (n+1)-gon, alternating clockwise
    then counterclockwise steps; each direction stops independently at the
    first vertex of the block containing ``b + 1``.
    """
    k = s.k
    Interval(a, b, k - 1)  # range check
    if s.same_block(a, b + 1):
        raise InvalidInputError(f"{a} and {b + 1} lie in the same block of {s}")
    arc = [a]
    cw = ccw = a
    cw_open = ccw_open = True
    while cw_open or ccw_open:
        if cw_open:
            nxt = cw % k + 1
            if s.same_block(nxt, b + 1):
                cw_open = False
            else:
                cw = nxt
                arc.append(nxt)
        if ccw_open:
            nxt = (ccw - 2) % k + 1
            if s.same_block(nxt, b + 1):
                ccw_open = False
            else:
                ccw = nxt
                arc.append(nxt)
    return two_block_from_arc(k, arc).to_interval()


def plocal_lattice(space: Space, max_n: int = DEFAULT_MAX_N) -> FiniteLattice:
    """Valid p-local tuples ordered by containment."""
    return FiniteLattice.from_order(enumerate_valid_plocal(space, max_n=max_n), PLocalTuple.issubset)


def ncp_lattice(k: int) -> FiniteLattice:
    return FiniteLattice.from_order(enumerate_ncp(k), refinement_leq)


def box_union_meet(t1: PLocalTuple, t2: PLocalTuple) -> PLocalTuple:
    """Union of all maximal boxes inside the pointwise intersection."""
    return PLocalTuple(t1.space, box_union_within(t1.space, (t1 & t2).bits))


def box_union_join(t1: PLocalTuple, t2: PLocalTuple) -> PLocalTuple:
    return t1 | t2


def product_lattice(
    space: Space, universe: Iterable[int], budget: int = DEFAULT_PRODUCT_BUDGET
) -> FiniteLattice:
    """Valid support tuples over a finite prime universe, ordered pointwise."""
    universe = sorted(set(universe))
    size = catalan(space.n + 1) ** len(universe)
    if size > budget:
        raise BudgetExceededError(f"{size} elements exceed the product budget {budget}")
    # slices vary independently, so the pointwise order is the product order
    factor = plocal_lattice(space)
    return FiniteLattice.product_of([factor] * len(universe), valid_support_tuples(space, universe))


def single_box(y: Interval) -> PLocalTuple:
    return PLocalTuple(y.space, box_masks(y.space)[y.space.index(y)])
