"""Invariant suite behind ``ncploc verify``.

Each check takes the space size ``n`` and returns a bool, or ``None``
when the brute-force budget rules it out.  Checks that
would be exhaustive beyond a few million cases fall back to seeded random
sampling so the suite stays deterministic.
"""

from __future__ import annotations

import random
from itertools import combinations
from typing import Callable

from .core import Interval, Space, box_masks, box_parity, maximal_box
from .correspondence import (
    box_union_meet,
    interval_to_two_block,
    ncp_lattice,
    plocal_lattice,
    psi,
    psi_inverse,
    separating_decomposition,
)
from .errors import BudgetExceededError
from .lattice import are_isomorphic
from .ncp import catalan, enumerate_ncp, kreweras_complement, refinement_leq
from .supports import (
    PLocalTuple,
    SupportTuple,
    brute_force_valid_plocal,
    enumerate_valid_plocal,
    is_valid_plocal,
    is_valid_plocal_reduced,
    triangle_inclusions_hold,
    tuple_from_generators,
    u_from_v,
    v_from_u,
)

EXHAUSTIVE_BITS = 16
SAMPLES = 2000


def _tuples(space: Space, seed: int = 0):
    """All tuples when small, else a seeded sample."""
    if space.m <= EXHAUSTIVE_BITS:
        return range(1 << space.m)
    rng = random.Random(seed)
    return [rng.getrandbits(space.m) for _ in range(SAMPLES)]


def check_interval_count(n: int) -> bool:
    return len(Space(n).intervals) == n * (n + 1) // 2


def check_box_contains_base(n: int) -> bool:
    return all(y in maximal_box(y) for y in Space(n).intervals)


def check_box_exclusivity(n: int) -> bool:
    ivs = Space(n).intervals
    for y in ivs:
        for z in ivs:
            even = z.a <= y.a <= z.b <= y.b
            odd = y.a < z.a and y.b < z.b and z.a - 1 <= y.b
            if even and odd:
                return False
            p = box_parity(y, z)
            if (p == 0) != even or (p == 1) != odd:
                return False
    return True


def check_box_double_counting(n: int) -> bool:
    space = Space(n)
    masks = box_masks(space)
    lhs = sum(len(maximal_box(y).members) for y in space.intervals)
    rhs = sum(sum(1 for mask in masks if mask >> i & 1) for i in range(space.m))
    return lhs == rhs


def check_fixpoint(n: int) -> bool:
    space = Space(n)
    for gens in _tuples(space, seed=1):
        if not is_valid_plocal(tuple_from_generators(space, space.unmask(gens))):
            return False
    return True


def check_oracle_equivalence(n: int) -> bool | None:
    space = Space(n)
    try:
        oracle = brute_force_valid_plocal(space)
    except BudgetExceededError:
        return None
    return oracle == enumerate_valid_plocal(space)


def check_catalan_count(n: int) -> bool:
    return len(enumerate_valid_plocal(Space(n))) == catalan(n + 1)


def check_reduced_closure(n: int) -> bool:
    space = Space(n)
    return all(
        is_valid_plocal(PLocalTuple(space, b)) == is_valid_plocal_reduced(PLocalTuple(space, b))
        for b in _tuples(space, seed=2)
    )


def check_duality_roundtrip(n: int) -> bool:
    space = Space(n)
    for t in enumerate_valid_plocal(space):
        if u_from_v(space, v_from_u(t)) != t:
            return False
    for gens in _tuples(space, seed=3):
        g = space.unmask(gens)
        if not set(g) <= set(v_from_u(u_from_v(space, g))):
            return False
    return True


def _as_interval(points: set[int], n: int) -> Interval | None:
    if not points or max(points) - min(points) + 1 != len(points):
        return None
    return Interval(min(points), max(points), n)


def check_interval_closure(n: int) -> bool:
    space = Space(n)
    for t in enumerate_valid_plocal(space):
        v = set(v_from_u(t))
        for y, z in combinations(sorted(v), 2):
            p, q = set(y.points()), set(z.points())
            for pts in (p & q, p | q, p - q, q - p):
                r = _as_interval(pts, n)
                if r is not None and r not in v:
                    return False
    return True


def check_triangle_inclusions(n: int) -> bool:
    space = Space(n)
    valid = enumerate_valid_plocal(space)
    if len(valid) ** 2 <= 20000:
        pairs = [(s, t) for s in valid for t in valid]
    else:
        rng = random.Random(4)
        pairs = [(rng.choice(valid), rng.choice(valid)) for _ in range(SAMPLES)]
    return all(triangle_inclusions_hold(SupportTuple.from_slices(space, {2: s, 3: t})) for s, t in pairs)


def check_psi_bijection(n: int) -> bool:
    images = [psi(t) for t in enumerate_valid_plocal(Space(n))]
    return len(set(images)) == len(images) and sorted(images) == enumerate_ncp(n + 1)


def check_psi_order(n: int) -> bool:
    valid = enumerate_valid_plocal(Space(n))
    images = [psi(t) for t in valid]
    for s, ps in zip(valid, images):
        for t, pt in zip(valid, images):
            if s.issubset(t) != refinement_leq(ps, pt):
                return False
    return True


def check_psi_roundtrip(n: int) -> bool:
    return all(psi_inverse(psi(t)) == t for t in enumerate_valid_plocal(Space(n))) and all(
        psi(psi_inverse(s)) == s for s in enumerate_ncp(n + 1)
    )


def check_single_generator(n: int) -> bool:
    for y in Space(n).intervals:
        if psi(tuple_from_generators(y.space, [y])) != interval_to_two_block(y).as_partition():
            return False
    return True


def separating_ok(s, a: int, b: int) -> bool:
    """Postconditions of :func:`separating_decomposition` for one input."""
    cd = separating_decomposition(s, a, b)
    n = s.k - 1
    if box_parity(cd, Interval(a, b, n)) is None:
        return False
    if not interval_to_two_block(cd).coarsens(s):
        return False
    return all(not s.same_block(z.a, z.b + 1) for z in maximal_box(cd).intervals)


def check_separating(n: int) -> bool:
    space = Space(n)
    for s in enumerate_ncp(n + 1):
        for y in space.intervals:
            if not s.same_block(y.a, y.b + 1) and not separating_ok(s, y.a, y.b):
                return False
    return True


def check_meet_formula(n: int) -> bool:
    lat = plocal_lattice(Space(n))
    return all(lat.meet(s, t) == box_union_meet(s, t) for s in lat.elements for t in lat.elements)


def check_isomorphic_to_ncp(n: int) -> bool:
    return are_isomorphic(plocal_lattice(Space(n)), ncp_lattice(n + 1)) is not None


def check_kreweras(n: int) -> bool:
    parts = enumerate_ncp(n + 1)
    comp = {s: kreweras_complement(s) for s in parts}
    if sorted(comp.values()) != parts:
        return False
    for s in parts:
        for t in parts:
            if refinement_leq(t, s) != refinement_leq(comp[s], comp[t]):
                return False
    return True


CHECKS: dict[str, Callable[[int], bool | None]] = {
    "interval_count": check_interval_count,
    "box_contains_base": check_box_contains_base,
    "box_exclusivity": check_box_exclusivity,
    "box_double_counting": check_box_double_counting,
    "fixpoint": check_fixpoint,
    "oracle_equivalence": check_oracle_equivalence,
    "catalan_count": check_catalan_count,
    "reduced_closure": check_reduced_closure,
    "duality_roundtrip": check_duality_roundtrip,
    "interval_closure": check_interval_closure,
    "triangle_inclusions": check_triangle_inclusions,
    "psi_bijection": check_psi_bijection,
    "psi_order_isomorphism": check_psi_order,
    "psi_roundtrip": check_psi_roundtrip,
    "single_generator_dictionary": check_single_generator,
    "separating_decomposition": check_separating,
    "meet_formula": check_meet_formula,
    "isomorphic_to_ncp": check_isomorphic_to_ncp,
    "kreweras_order_reversing": check_kreweras,
}


def run_suite(n: int) -> list[tuple[str, bool | None]]:
    """``(name, outcome)`` per check; ``None`` marks a check skipped for budget."""
    return [(name, check(n)) for name, check in CHECKS.items()]
