import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from ncploc.core import Interval, Space, box_parity
from ncploc.errors import BudgetExceededError, InvalidInputError
from ncploc.ncp import catalan
from ncploc.supports import (
    FgGroup,
    PLocalTuple,
    SpectrumSet,
    SupportTuple,
    brute_force_valid_plocal,
    enumerate_valid_plocal,
    is_valid,
    is_valid_plocal,
    is_valid_plocal_reduced,
    supp_of_group,
    triangle_inclusions_hold,
    triangle_triples,
    tuple_from_generators,
    u_from_v,
    v_from_u,
)

S2 = Space(2)
I11, I12, I22 = S2.intervals


def pt(space, *ivs):
    return PLocalTuple.from_intervals(space, ivs)


def literal_closure(space, support):
    """Set-valued closure equation evaluated straight from the box conditions."""
    ivs = space.intervals
    box = {z: {v for v in ivs if box_parity(z, v) is not None} for z in ivs}
    for y in ivs:
        rhs = any(box[z] <= support for z in ivs if y in box[z])
        if (y in support) != rhs:
            return False
    return True


def catalan_by_recurrence(k):
    c = [1]
    for i in range(k):
        c.append(sum(c[j] * c[i - j] for j in range(i + 1)))
    return c[k]


# -- validity ------------------------------------------------------------------


def test_is_valid_plocal_examples():
    assert is_valid_plocal(PLocalTuple.empty(S2))
    assert is_valid_plocal(pt(S2, I11, I22))
    assert not is_valid_plocal(pt(S2, I11))
    assert sum(is_valid_plocal(PLocalTuple(S2, b)) for b in range(8)) == 5


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_is_valid_plocal_matches_literal_closure(n):
    space = Space(n)
    for bits in range(1 << space.m):
        t = PLocalTuple(space, bits)
        assert is_valid_plocal(t) == literal_closure(space, set(t.support))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_reduced_closure_equivalent(n):
    space = Space(n)
    for bits in range(1 << space.m):
        t = PLocalTuple(space, bits)
        assert is_valid_plocal(t) == is_valid_plocal_reduced(t)


def test_is_valid_support_tuple_examples():
    assert is_valid(SupportTuple.from_mapping(Space(3), [0, 2], {}))
    slices = {2: tuple_from_generators(S2, [I11]), 3: tuple_from_generators(S2, [I22])}
    assert is_valid(SupportTuple.from_slices(S2, slices))
    assert not is_valid(SupportTuple.from_mapping(S2, [2], {I11: [2]}))


def test_support_tuple_rejects_primes_outside_universe():
    with pytest.raises(InvalidInputError):
        SupportTuple.from_mapping(S2, [2], {I11: [3]})
    with pytest.raises(InvalidInputError):
        SupportTuple.from_mapping(S2, [4], {})


def test_sierpinski_characterization():
    # coordinates follow the extension picture: ideal {2}, whole {1,2}, quotient {1}
    valid = 0
    for u2, u12, u1 in product([False, True], repeat=3):
        sets = {I22: [7] if u2 else [], I12: [7] if u12 else [], I11: [7] if u1 else []}
        t = SupportTuple.from_mapping(S2, [7], sets)
        each_in_union = (not u2 or u12 or u1) and (not u12 or u2 or u1) and (not u1 or u2 or u12)
        assert is_valid(t) == each_in_union
        valid += each_in_union
    assert valid == 5


# -- generators and duality ----------------------------------------------------


def test_tuple_from_generators_examples():
    assert tuple_from_generators(S2, []) == PLocalTuple.empty(S2)
    assert tuple_from_generators(S2, [I12]) == pt(S2, I11, I12)
    assert tuple_from_generators(S2, [I11, I12]) == PLocalTuple.full(S2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_fixpoint_exhaustive(n):
    space = Space(n)
    for gens in range(1 << space.m):
        assert is_valid_plocal(tuple_from_generators(space, space.unmask(gens)))


@pytest.mark.parametrize("n", [5, 6])
def test_fixpoint_random(n):
    space = Space(n)
    rng = random.Random(n)
    for _ in range(500):
        gens = space.unmask(rng.getrandbits(space.m))
        assert is_valid_plocal(tuple_from_generators(space, gens))


def test_v_from_u_examples():
    assert v_from_u(PLocalTuple.full(S2)) == [I11, I12, I22]
    assert v_from_u(pt(S2, I11, I22)) == [I11]
    assert v_from_u(PLocalTuple.empty(S2)) == []


def test_u_from_v_examples():
    assert u_from_v(S2, []) == PLocalTuple.empty(S2)
    assert u_from_v(S2, [I11]) == pt(S2, I11, I22)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_duality_roundtrips(n):
    space = Space(n)
    for t in brute_force_valid_plocal(space):
        assert u_from_v(space, v_from_u(t)) == t
    for gens in range(1 << space.m):
        g = space.unmask(gens)
        assert set(g) <= set(v_from_u(u_from_v(space, g)))


def _points_to_interval(points, n):
    if points and max(points) - min(points) + 1 == len(points):
        return Interval(min(points), max(points), n)
    return None


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_generated_intervals_closed_under_set_operations(n):
    space = Space(n)
    for t in enumerate_valid_plocal(space):
        v = set(v_from_u(t))
        for y in v:
            for z in v:
                p, q = set(y.points()), set(z.points())
                for pts in (p & q, p | q, p - q):
                    r = _points_to_interval(pts, n)
                    assert r is None or r in v


# -- enumeration ---------------------------------------------------------------


def test_enumerate_examples():
    assert len(enumerate_valid_plocal(Space(1))) == 2
    assert enumerate_valid_plocal(S2) == sorted(
        [
            PLocalTuple.empty(S2),
            pt(S2, I11, I22),
            pt(S2, I22, I12),
            pt(S2, I11, I12),
            PLocalTuple.full(S2),
        ],
        key=lambda t: t.bits,
    )
    assert len(enumerate_valid_plocal(Space(3))) == 14


def test_enumerate_limit():
    with pytest.raises(BudgetExceededError):
        enumerate_valid_plocal(Space(9))
    assert len(enumerate_valid_plocal(Space(3), max_n=3)) == 14


@pytest.mark.parametrize("n", range(1, 7))
def test_catalan_count(n):
    count = len(enumerate_valid_plocal(Space(n)))
    assert count == catalan_by_recurrence(n + 1) == catalan(n + 1)


def test_brute_force_examples():
    assert len(brute_force_valid_plocal(Space(1))) == 2
    assert brute_force_valid_plocal(S2) == enumerate_valid_plocal(S2)
    assert len(brute_force_valid_plocal(Space(4))) == 42


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_oracle_equivalence(n):
    space = Space(n)
    assert brute_force_valid_plocal(space) == enumerate_valid_plocal(space)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_brute_force_agrees_with_scalar_predicate(n):
    space = Space(n)
    scalar = [PLocalTuple(space, b) for b in range(1 << space.m) if is_valid_plocal(PLocalTuple(space, b))]
    assert brute_force_valid_plocal(space) == scalar


def test_brute_force_budget(monkeypatch):
    with pytest.raises(BudgetExceededError):
        brute_force_valid_plocal(Space(4), max_bits=9)
    monkeypatch.setenv("NCPLOC_BUDGET_BITS", "5")
    with pytest.raises(BudgetExceededError):
        brute_force_valid_plocal(Space(3))
    monkeypatch.setenv("NCPLOC_BUDGET_BITS", "6")
    assert len(brute_force_valid_plocal(Space(3))) == 14


# -- triangle inclusions -------------------------------------------------------


def test_triangle_triples_shape():
    assert [tuple(str(y) for y in tri) for tri in triangle_triples(S2)] == [("[1,1]", "[2,2]", "[1,2]")]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_triangle_inclusions_on_valid_tuples(n):
    space = Space(n)
    valid = enumerate_valid_plocal(space)
    rng = random.Random(0)
    for _ in range(300):
        slices = {q: rng.choice(valid) for q in (0, 2, 3)}
        assert triangle_inclusions_hold(SupportTuple.from_slices(space, slices))


def test_triangle_inclusions_detect_violation():
    t = SupportTuple.from_mapping(S2, [2], {I11: [2]})
    assert not triangle_inclusions_hold(t)


# -- JSON ----------------------------------------------------------------------


def test_plocal_json():
    t = pt(Space(3), Interval(1, 1, 3), Interval(2, 2, 3))
    assert t.to_json() == {"n": 3, "support": [[1, 1], [2, 2]]}
    assert PLocalTuple.from_json(t.to_json()) == t


def test_support_tuple_json():
    space = Space(3)
    t = SupportTuple.from_mapping(space, [0, 2, 3], {Interval(1, 1, 3): [2], Interval(2, 3, 3): [0, 3]})
    doc = t.to_json()
    assert doc["universe"] == [0, 2, 3]
    assert doc["sets"]["1-1"] == [2] and doc["sets"]["1-2"] == [] and doc["sets"]["2-3"] == [0, 3]
    assert SupportTuple.from_json(doc) == t


@settings(max_examples=50)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << (n * (n + 1) // 2)) - 1))))
def test_plocal_json_roundtrip(args):
    n, bits = args
    t = PLocalTuple(Space(n), bits)
    assert PLocalTuple.from_json(t.to_json()) == t


# -- group supports ------------------------------------------------------------


def test_supp_of_group_examples():
    assert supp_of_group(FgGroup(torsion=(4,))) == SpectrumSet.finite({2})
    assert supp_of_group(FgGroup(free_rank=1)) == SpectrumSet.all()
    assert supp_of_group(FgGroup()) == SpectrumSet.finite(())
    assert supp_of_group(FgGroup(rational_rank=1)) == SpectrumSet.finite({0})


def test_supp_of_group_mixed():
    g = FgGroup(torsion=(8, 9, 3, 25), rational_rank=2)
    assert supp_of_group(g) == SpectrumSet.finite({0, 2, 3, 5})
    everything = supp_of_group(FgGroup(free_rank=2, torsion=(7,)))
    assert 11 in everything and 0 in everything


def test_fg_group_rejects_non_prime_powers():
    with pytest.raises(InvalidInputError):
        FgGroup(torsion=(6,))
    with pytest.raises(InvalidInputError):
        FgGroup(torsion=(1,))
    with pytest.raises(InvalidInputError):
        FgGroup(free_rank=-1)
