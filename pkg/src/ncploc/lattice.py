"""Finite lattices given by an explicit element list and order relation.

Elements are arbitrary hashable keys; internally everything runs on element
indices, with the down-set and up-set of each element stored as an integer
bitset.  Meets and joins are derived from the order, never supplied by the
caller.
"""

from __future__ import annotations

import json
import sys
from functools import cached_property
from itertools import product
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import BudgetExceededError, NotALatticeError, NotAPartialOrderError

DEFAULT_ISO_BUDGET = 5000


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FiniteLattice:
    def __init__(self, elements: Sequence[Hashable], down: Sequence[int]) -> None:
        # use from_order; this constructor trusts its input
        self.elements = tuple(elements)
        self.down = tuple(down)
        self._index = {e: i for i, e in enumerate(self.elements)}
        n = len(self.elements)
        up = [0] * n
        for j, mask in enumerate(self.down):
            for i in _bits(mask):
                up[i] |= 1 << j
        self.up = tuple(up)

    # -- construction -------------------------------------------------------

    @classmethod
    def from_order(
        cls,
        elements: Sequence[Hashable],
        leq: Callable[[Hashable, Hashable], bool] | Sequence[Sequence[bool]],
    ) -> FiniteLattice:
        """Validate ``leq`` as a lattice order on ``elements``.

        ``leq`` is either a predicate ``leq(x, y)`` or an index matrix.
        Raises :class:`NotAPartialOrderError` or :class:`NotALatticeError`
        (the latter carries a pair with no meet or join).
        """
        elements = tuple(elements)
        n = len(elements)
        if n == 0:
            raise NotALatticeError("a lattice needs at least one element", ())
        if len(set(elements)) != n:
            raise NotAPartialOrderError("duplicate elements")
        if callable(leq):
            rel = [[bool(leq(x, y)) for y in elements] for x in elements]
        else:
            rel = [[bool(v) for v in row] for row in leq]
        down = [0] * n
        for i in range(n):
            if not rel[i][i]:
                raise NotAPartialOrderError(f"not reflexive at {elements[i]!r}")
            for j in range(n):
                if rel[i][j]:
                    down[j] |= 1 << i
        for i in range(n):
            for j in range(i + 1, n):
                if rel[i][j] and rel[j][i]:
                    raise NotAPartialOrderError(f"not antisymmetric: {elements[i]!r}, {elements[j]!r}")
        for j in range(n):
            for i in _bits(down[j]):
                if down[i] & ~down[j]:
                    raise NotAPartialOrderError(f"not transitive below {elements[j]!r}")
        lat = cls(elements, down)
        lat._build_tables()
        return lat

    def _build_tables(self) -> None:
        # Work in a linear extension: a set of common lower bounds has a
        # maximum only if its highest-ranked member is that maximum.
        n = self.size
        order = sorted(range(n), key=lambda i: self.down[i].bit_count())
        pos = [0] * n
        for r, i in enumerate(order):
            pos[i] = r

        def remap(mask: int) -> int:
            out = 0
            for i in _bits(mask):
                out |= 1 << pos[i]
            return out

        down = [remap(self.down[i]) for i in order]
        up = [remap(self.up[i]) for i in order]
        meet_rows, join_rows = [], []
        for x in range(n):
            dx, ux = down[x], up[x]
            mrow, jrow = [0] * n, [0] * n
            for y in range(x, n):
                common = dx & down[y]
                m = common.bit_length() - 1
                if m < 0 or down[m] != common:
                    self._no_bound(order[x], order[y], "meet")
                common = ux & up[y]
                j = (common & -common).bit_length() - 1
                if j < 0 or up[j] != common:
                    self._no_bound(order[x], order[y], "join")
                mrow[y] = m
                jrow[y] = j
            meet_rows.append(mrow)
            join_rows.append(jrow)
        meet = np.array(meet_rows, dtype=np.int64)
        join = np.array(join_rows, dtype=np.int64)
        meet += np.triu(meet, 1).T
        join += np.triu(join, 1).T
        back = np.array(order, dtype=np.int64)
        ix = np.ix_(pos, pos)
        self._meet = back[meet[ix]]
        self._join = back[join[ix]]

    def _no_bound(self, x: int, y: int, kind: str):
        a, b = self.elements[x], self.elements[y]
        raise NotALatticeError(f"{a!r} and {b!r} have no {kind}", (a, b, kind))

    @classmethod
    def product_of(cls, factors: Sequence[FiniteLattice], elements: Sequence[Hashable] | None = None) -> FiniteLattice:
        """Componentwise order on ``itertools.product`` of the factors' elements.

        ``elements`` relabels the product, which must list it in the same order.
        """
        sizes = [f.size for f in factors]
        coords = list(product(*(range(s) for s in sizes)))
        if elements is None:
            elements = [tuple(f.elements[c] for f, c in zip(factors, cs)) for cs in coords]
        elif len(elements) != len(coords):
            raise NotAPartialOrderError("relabelling has the wrong length")
        # below[i][v]: product indices whose i-th coordinate lies under v
        below = []
        for i, f in enumerate(factors):
            exact = [0] * f.size
            for j, cs in enumerate(coords):
                exact[cs[i]] |= 1 << j
            masks = []
            for v in range(f.size):
                mask = 0
                for u in _bits(f.down[v]):
                    mask |= exact[u]
                masks.append(mask)
            below.append(masks)
        full = (1 << len(coords)) - 1
        down = []
        for cs in coords:
            mask = full
            for i, c in enumerate(cs):
                mask &= below[i][c]
            down.append(mask)
        lat = cls(elements, down)
        lat._build_tables()
        return lat

    # -- queries ------------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return self.size

    def index(self, x: Hashable) -> int:
        return self._index[x]

    def leq(self, x: Hashable, y: Hashable) -> bool:
        return bool(self.down[self._index[y]] >> self._index[x] & 1)

    def leq_idx(self, i: int, j: int) -> bool:
        return bool(self.down[j] >> i & 1)

    def meet(self, x: Hashable, y: Hashable) -> Hashable:
        return self.elements[self._meet[self._index[x], self._index[y]]]

    def join(self, x: Hashable, y: Hashable) -> Hashable:
        return self.elements[self._join[self._index[x], self._index[y]]]

    @property
    def meet_table(self) -> np.ndarray:
        return self._meet

    @property
    def join_table(self) -> np.ndarray:
        return self._join

    @cached_property
    def bottom(self) -> Hashable:
        return self.elements[min(range(self.size), key=lambda i: self.down[i].bit_count())]

    @cached_property
    def top(self) -> Hashable:
        return self.elements[min(range(self.size), key=lambda i: self.up[i].bit_count())]

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        """Index pairs ``(i, j)`` with ``j`` covering ``i``."""
        out = []
        for j in range(self.size):
            for i in _bits(self.down[j]):
                if i != j and self.up[i] & self.down[j] == (1 << i) | (1 << j):
                    out.append((i, j))
        out.sort()
        return tuple(out)

    def hasse_edges(self) -> list[tuple[Hashable, Hashable]]:
        return [(self.elements[i], self.elements[j]) for i, j in self.covers]

    @cached_property
    def rank(self) -> tuple[int, ...]:
        """Length of the longest chain from the bottom to each element."""
        order = sorted(range(self.size), key=lambda i: self.down[i].bit_count())
        below: list[list[int]] = [[] for _ in range(self.size)]
        for i, j in self.covers:
            below[j].append(i)
        rank = [0] * self.size
        for j in order:
            rank[j] = max((rank[i] + 1 for i in below[j]), default=0)
        return tuple(rank)

    def dual(self) -> FiniteLattice:
        lat = FiniteLattice(self.elements, self.up)
        lat._meet, lat._join = self._join, self._meet
        return lat

    # -- export ---------------------------------------------------------------

    def to_json(self, label: Callable[[Hashable], object] = str) -> dict:
        return {"elements": [label(e) for e in self.elements], "covers": [list(c) for c in self.covers]}

    def to_dot(self, label: Callable[[Hashable], object] = str, name: str = "lattice") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for i, e in enumerate(self.elements):
            text = label(e)
            if not isinstance(text, str):
                text = json.dumps(text, separators=(",", ":"))
            escaped = text.replace("\\", "\\\\").replace('"', '\\"')
            lines.append(f'  n{i} [label="{escaped}"];')
        levels: dict[int, list[int]] = {}
        for i, r in enumerate(self.rank):
            levels.setdefault(r, []).append(i)
        for r in sorted(levels):
            lines.append(f"  {{ rank=same; {' '.join(f'n{i};' for i in levels[r])} }}")
        for i, j in self.covers:
            lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def chain(k: int) -> FiniteLattice:
    return FiniteLattice.from_order(range(k), lambda x, y: x <= y)


def direct_product(*factors: FiniteLattice) -> FiniteLattice:
    return FiniteLattice.product_of(factors)


def is_distributive(lat: FiniteLattice) -> tuple[bool, tuple[Hashable, Hashable, Hashable] | None]:
    """Check ``x ^ (y v z) == (x ^ y) v (x ^ z)`` for every triple.

    Returns ``(True, None)`` or ``(False, (x, y, z))`` with the first failing
    triple in index-lexicographic order.
    """
    meet, join = lat.meet_table, lat.join_table
    for x in range(lat.size):
        lhs = meet[x][join]
        mx = meet[x]
        rhs = join[mx[:, None], mx[None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            y, z = bad[0]
            e = lat.elements
            return False, (e[x], e[int(y)], e[int(z)])
    return True, None


def _cover_lists(lat: FiniteLattice) -> tuple[list[list[int]], list[list[int]]]:
    lower: list[list[int]] = [[] for _ in range(lat.size)]
    upper: list[list[int]] = [[] for _ in range(lat.size)]
    for i, j in lat.covers:
        upper[i].append(j)
        lower[j].append(i)
    return lower, upper


def _refined_classes(lat: FiniteLattice, palette: dict) -> list[int]:
    """Colour refinement of Hasse-diagram vertices, starting from rank and degrees.

    ``palette`` is shared between the two lattices being compared so that
    colours mean the same thing on both sides.
    """
    n = lat.size
    lower, upper = _cover_lists(lat)
    dsize = [m.bit_count() for m in lat.down]
    usize = [m.bit_count() for m in lat.up]
    colour = [palette.setdefault(("init", lat.rank[i], len(lower[i]), len(upper[i]), dsize[i], usize[i]), len(palette)) for i in range(n)]
    for _ in range(n):
        sig = [
            (colour[i], tuple(sorted(colour[j] for j in lower[i])), tuple(sorted(colour[j] for j in upper[i])))
            for i in range(n)
        ]
        new = [palette.setdefault(("ref", s), len(palette)) for s in sig]
        if len(set(new)) == len(set(colour)):
            colour = new
            break
        colour = new
    return colour


def are_isomorphic(
    l1: FiniteLattice, l2: FiniteLattice, budget: int = DEFAULT_ISO_BUDGET
) -> dict[Hashable, Hashable] | None:
    """Order isomorphism ``l1 -> l2`` as an element mapping, or ``None``.

    Backtracking with forward checking: every unmapped element keeps a bitset
    of admissible images (equal refined colour, consistent order relations
    with everything mapped so far) and the element with the fewest options
    is mapped next.  Ties break by index, so the result is deterministic.
    """
    if max(l1.size, l2.size) > budget:
        raise BudgetExceededError(f"lattices of size {max(l1.size, l2.size)} exceed the isomorphism budget {budget}")
    if l1.size != l2.size or len(l1.covers) != len(l2.covers):
        return None
    palette: dict = {}
    # isomorphic inputs refine identically, so differing colour histograms rule one out
    c1 = _refined_classes(l1, palette)
    c2 = _refined_classes(l2, palette)
    if sorted(c1) != sorted(c2):
        return None
    n = l1.size
    full = (1 << n) - 1
    domain = [0] * n
    for i in range(n):
        for j in range(n):
            if c1[i] == c2[j]:
                domain[i] |= 1 << j
    f = [-1] * n

    def assign(dom: list[int], i: int, j: int) -> list[int] | None:
        """Domains after mapping ``i -> j``, or ``None`` if one empties."""
        out = dom[:]
        below2, above2 = l2.down[j], l2.up[j]
        clear = ~(1 << j) & full
        for k in range(n):
            if f[k] >= 0 or k == i:
                continue
            d = out[k] & clear
            d &= below2 if l1.leq_idx(k, i) else ~below2
            d &= above2 if l1.leq_idx(i, k) else ~above2
            if not d:
                return None
            out[k] = d
        return out

    def search(dom: list[int], depth: int) -> bool:
        if depth == n:
            return True
        # most constrained unmapped element first, ties by index
        i = min((k for k in range(n) if f[k] < 0), key=lambda k: (dom[k].bit_count(), k))
        for j in _bits(dom[i]):
            nxt = assign(dom, i, j)
            if nxt is None:
                continue
            f[i] = j
            if search(nxt, depth + 1):
                return True
            f[i] = -1
        return False

    limit = sys.getrecursionlimit()
    if limit < n + 100:
        sys.setrecursionlimit(n + 100)
    try:
        found = search(domain, 0)
    finally:
        sys.setrecursionlimit(limit)
    if not found:
        return None
    return {l1.elements[i]: l2.elements[f[i]] for i in range(n)}


def is_self_dual(lat: FiniteLattice, budget: int = DEFAULT_ISO_BUDGET) -> bool:
    return are_isomorphic(lat, lat.dual(), budget=budget) is not None
