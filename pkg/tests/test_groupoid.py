from __future__ import annotations

import itertools
import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from steinberg import families as fm
from steinberg import groupoid as gp
from steinberg.groupoid import AlgebraElement, FiniteGroupoid, GroupoidError
from steinberg.linalg import Subspace
from steinberg.scalars import INTEGERS, RATIONALS, RingError, integers_mod

F2, F5 = integers_mod(2), integers_mod(5)
FAMILY = fm.theorem_family()
SMALL = [(n, g) for n, g in FAMILY if len(g) <= 8]


def ind(g: FiniteGroupoid, ring, *names: str) -> AlgebraElement:
    return AlgebraElement.indicator(g, ring, [g.index[n] for n in names])


def ids(g: FiniteGroupoid, *names: str) -> list[int]:
    return [g.index[n] for n in names]


@pytest.fixture
def pair2() -> FiniteGroupoid:
    return fm.pair_groupoid(2)


@pytest.fixture
def z2() -> FiniteGroupoid:
    return fm.cyclic_group(2)


@pytest.fixture
def pair2_z2() -> FiniteGroupoid:
    return fm.disjoint_union(fm.pair_groupoid(2), fm.cyclic_group(2))


# -- tables and validation -----------------------------------------------------------------


def test_family_is_large_and_valid() -> None:
    assert len(FAMILY) >= 100
    for name, g in FAMILY:
        assert gp.validate_groupoid(g).ok, name


def test_pair_groupoid_validates(pair2: FiniteGroupoid) -> None:
    assert len(pair2) == 4
    assert gp.validate_groupoid(pair2).ok


def test_group_z2_validates(z2: FiniteGroupoid) -> None:
    assert len(z2) == 2 and len(z2.units) == 1
    assert gp.validate_groupoid(z2).ok


def test_composition_with_wrong_endpoints_is_reported(pair2: FiniteGroupoid) -> None:
    data = pair2.to_json()
    data["compose"].append(["g12", "g12", "u1"])
    bad = FiniteGroupoid.from_json(data)
    rep = gp.validate_groupoid(bad)
    assert not rep.ok
    assert rep.to_json(bad)["witness"] == ["g12", "g12"]
    assert "r(g2) = s(g1)" in rep.axiom


def test_missing_composition_is_reported(pair2: FiniteGroupoid) -> None:
    data = pair2.to_json()
    data["compose"] = [c for c in data["compose"] if c[:2] != ["g12", "g21"]]
    bad = FiniteGroupoid.from_json(data)
    rep = gp.validate_groupoid(bad)
    assert not rep.ok and rep.to_json(bad)["witness"] == ["g12", "g21"]


def test_non_involutive_inverse_is_reported() -> None:
    g = fm.cyclic_group(3)
    data = g.to_json()
    data["morphisms"][0]["inv"] = data["morphisms"][0]["name"]
    rep = gp.validate_groupoid(FiniteGroupoid.from_json(data))
    assert not rep.ok


def test_non_associative_table_is_reported() -> None:
    # a one-unit "group" {e, a, b} whose table is a Latin square but not associative
    names = ["e", "a", "b"]
    table = {(0, x): x for x in range(3)} | {(x, 0): x for x in range(3)}
    table |= {(1, 1): 1, (1, 2): 0, (2, 1): 0, (2, 2): 2}
    g = FiniteGroupoid.from_tables(names, [0], [0, 0, 0], [0, 0, 0], [0, 2, 1], table)
    rep = gp.validate_groupoid(g)
    assert not rep.ok


def test_out_of_range_indices_are_malformed() -> None:
    with pytest.raises(GroupoidError, match="malformed table"):
        FiniteGroupoid.from_tables(["u"], [0], [0], [3], [0], {(0, 0): 0})
    with pytest.raises(GroupoidError, match="malformed table"):
        FiniteGroupoid.from_json({"units": ["u"], "morphisms": [{"name": "g", "src": "u", "dst": "x", "inv": "g"}]})


def test_json_round_trip() -> None:
    for _, g in FAMILY[::17]:
        h = FiniteGroupoid.from_json(json.loads(json.dumps(g.to_json())))
        assert h.to_json() == g.to_json()
        assert sorted(h.names) == sorted(g.names) and gp.validate_groupoid(h).ok


# -- isotropy, invariance, restriction ---------------------------------------------------------


def test_isotropy_examples(pair2, z2, pair2_z2) -> None:
    assert gp.isotropy(pair2) == sorted(pair2.units)
    assert gp.isotropy(z2) == [0, 1]
    assert [pair2_z2.names[x] for x in gp.isotropy(pair2_z2)] == ["A_u1", "A_u2", "B_e", "B_t"]


def test_invariance_examples(pair2, pair2_z2) -> None:
    assert gp.is_invariant(pair2, pair2.units)
    assert not gp.is_invariant(pair2, ids(pair2, "u1"))
    assert gp.is_invariant(pair2_z2, ids(pair2_z2, "B_e"))


def test_restriction_examples(pair2, pair2_z2) -> None:
    assert len(gp.restrict_to_complement(pair2, pair2.units)) == 0
    assert gp.restrict_to_complement(pair2, []) == pair2
    rest = gp.restrict_to_complement(pair2_z2, ids(pair2_z2, "B_e"))
    assert rest.names == ("A_u1", "A_g12", "A_g21", "A_u2")
    assert gp.validate_groupoid(rest).ok
    with pytest.raises(GroupoidError, match="subset not invariant"):
        gp.restrict_to_complement(pair2, ids(pair2, "u1"))


def test_set_product_examples(pair2) -> None:
    every = set(range(len(pair2)))
    assert gp.set_product(pair2, pair2.units, every) == every
    assert gp.set_product(pair2, ids(pair2, "g12"), ids(pair2, "g21")) == set(ids(pair2, "u1"))
    assert gp.set_product(pair2, ids(pair2, "g12"), ids(pair2, "g12")) == frozenset()


def test_invariant_subsets_are_unions_of_orbits() -> None:
    for _, g in FAMILY[::7]:
        subsets = gp.invariant_subsets(g)
        assert len(subsets) == 2 ** len(gp.orbits(g))
        everything = [frozenset(s) for r in range(len(g.units) + 1)
                      for s in itertools.combinations(g.sorted_units, r)]
        assert set(subsets) == {s for s in everything if gp.is_invariant(g, s)}


def test_iso_abelian_examples() -> None:
    assert gp.check_iso_abelian(fm.pair_groupoid(2))
    assert not gp.check_iso_abelian(fm.symmetric_group_s3())
    assert gp.check_iso_abelian(fm.cyclic_group(4))


# -- convolution ---------------------------------------------------------------------------------


def test_convolution_examples(pair2, z2) -> None:
    assert ind(pair2, RATIONALS, "g12") * ind(pair2, RATIONALS, "g21") == ind(pair2, RATIONALS, "u1")
    assert (ind(pair2, RATIONALS, "g12") * ind(pair2, RATIONALS, "g12")).is_zero()
    assert ind(z2, RATIONALS, "t") * ind(z2, RATIONALS, "t") == ind(z2, RATIONALS, "e")


def test_convolution_against_definition() -> None:
    rng = random.Random(3)
    for _, g in FAMILY[::9]:
        f1 = AlgebraElement(g, RATIONALS, [RATIONALS.coerce(rng.randint(-3, 3)) for _ in range(len(g))])
        f2 = AlgebraElement(g, RATIONALS, [RATIONALS.coerce(rng.randint(-3, 3)) for _ in range(len(g))])
        expected = [0] * len(g)
        for a in range(len(g)):
            for b in range(len(g)):
                if g.range[b] == g.source[a]:
                    expected[g.compose(a, b)] += f1.coeffs[a] * f2.coeffs[b]
        assert list((f1 * f2).coeffs) == expected


def test_mismatched_operands_rejected(pair2, z2) -> None:
    with pytest.raises(RingError, match="ring mismatch"):
        ind(pair2, RATIONALS, "u1") * ind(pair2, F5, "u1")
    with pytest.raises(GroupoidError):
        ind(pair2, RATIONALS, "u1") * ind(z2, RATIONALS, "e")


@st.composite
def family_elements(draw, ring=RATIONALS, count=3):
    name, g = draw(st.sampled_from(FAMILY))
    coeff = st.integers(-3, 3).map(ring.coerce)
    elems = [AlgebraElement(g, ring, draw(st.lists(coeff, min_size=len(g), max_size=len(g))))
             for _ in range(count)]
    return g, elems


@settings(max_examples=150)
@given(family_elements())
def test_convolution_algebra_laws(case) -> None:
    g, (x, y, z) = case
    one = AlgebraElement.identity(g, RATIONALS)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x + y) * z == x * z + y * z
    assert one * x == x == x * one


# -- centralisers --------------------------------------------------------------------------------


def brute_centraliser(g: FiniteGroupoid, p: int, spanning: list[AlgebraElement]) -> set[tuple[int, ...]]:
    ring = integers_mod(p)
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(g)):
        a = AlgebraElement(g, ring, list(coeffs))
        if all(a * b == b * a for b in spanning):
            out.add(coeffs)
    return out


def span_elements(p: int, basis: list[AlgebraElement]) -> set[tuple[int, ...]]:
    out = set()
    for cs in itertools.product(range(p), repeat=len(basis)):
        total = [0] * (len(basis[0].coeffs) if basis else 0)
        for c, b in zip(cs, basis):
            total = [(t + c * v) % p for t, v in zip(total, b.coeffs)]
        out.add(tuple(total))
    return out or set()


def test_centraliser_of_pair_diagonal_by_enumeration(pair2) -> None:
    diag = gp.unit_indicators(pair2, F2, pair2.units)
    commutant = brute_centraliser(pair2, 2, diag)
    assert len(commutant) == 4  # 16 candidates, the diagonal 2x2 matrices survive
    basis = gp.centraliser_of_span(pair2, F2, diag)
    assert [b.support() for b in basis] == [ids(pair2, "u1"), ids(pair2, "u2")]
    assert span_elements(2, basis) == commutant


@pytest.mark.parametrize("name, g", SMALL[:40], ids=[n for n, _ in SMALL[:40]])
def test_centraliser_matches_enumeration_over_f2(name: str, g: FiniteGroupoid) -> None:
    for u in gp.invariant_subsets(g):
        spanning = gp.unit_indicators(g, F2, u)
        basis = gp.centraliser_of_span(g, F2, spanning)
        expected = brute_centraliser(g, 2, spanning)
        got = span_elements(2, basis) if basis else {tuple([0] * len(g))}
        assert got == expected


def test_centraliser_examples(pair2, z2) -> None:
    one = AlgebraElement.identity(pair2, RATIONALS)
    assert len(gp.centraliser_of_span(pair2, RATIONALS, [one])) == len(pair2)
    whole = [ind(z2, RATIONALS, "e"), ind(z2, RATIONALS, "t")]
    assert len(gp.centraliser_of_span(z2, RATIONALS, whole)) == 2


def test_centraliser_requires_field(pair2) -> None:
    with pytest.raises(RingError, match="centraliser solver requires a field"):
        gp.centraliser_of_span(pair2, INTEGERS, [])
    with pytest.raises(RingError, match="centraliser solver requires a field"):
        gp.centraliser_of_span(pair2, integers_mod(6), [])


@settings(max_examples=80)
@given(family_elements(count=3), st.sampled_from([RATIONALS, F5]))
def test_centraliser_invariants(case, ring) -> None:
    g, elems = case
    elems = [AlgebraElement(g, ring, [ring.coerce(c) for c in e.coeffs]) for e in elems]
    c1 = gp.centraliser_subspace(g, ring, elems)
    # subalgebra
    assert gp.is_subalgebra(g, ring, c1)
    # triple centraliser
    cc = gp.centraliser_subspace(g, ring, [AlgebraElement.from_sparse(g, ring, v) for v in c1.basis()])
    ccc = gp.centraliser_subspace(g, ring, [AlgebraElement.from_sparse(g, ring, v) for v in cc.basis()])
    assert ccc == c1
    # the input lies in its double centraliser
    for e in elems:
        assert e.sparse() in cc
    # monotonicity
    c_less = gp.centraliser_subspace(g, ring, elems[:1])
    assert c1.issubspace(c_less) and c1.dim <= c_less.dim


# -- the centraliser identity -----------------------------------------------------------------


def test_theorem_examples(pair2, pair2_z2) -> None:
    for _, g in FAMILY[::11]:
        rep = gp.verify_centraliser_theorem(g, [], RATIONALS)
        assert rep.holds and rep.lhs_dim == rep.rhs_dim == len(g)
    rep = gp.verify_centraliser_theorem(pair2, pair2.units, RATIONALS)
    assert rep.to_json() == {"holds": True, "lhs_dim": 2, "rhs_dim": 2}
    rep = gp.verify_centraliser_theorem(pair2_z2, ids(pair2_z2, "B_e"), RATIONALS)
    assert (rep.holds, rep.lhs_dim, rep.rhs_dim) == (True, 6, 6)


def test_theorem_dimension_by_hand(pair2_z2) -> None:
    # Iso-span (4) + component-span (4) - overlap of the pair units (2)
    iso = gp.coordinate_span(pair2_z2, RATIONALS, gp.isotropy(pair2_z2))
    comp = gp.coordinate_span(pair2_z2, RATIONALS, ids(pair2_z2, "A_u1", "A_g12", "A_g21", "A_u2"))
    assert (iso.dim, comp.dim, iso.intersection_dim(comp), (iso + comp).dim) == (4, 4, 2, 6)


def test_theorem_rejects_non_invariant_and_non_field(pair2) -> None:
    with pytest.raises(GroupoidError, match="subset not invariant"):
        gp.verify_centraliser_theorem(pair2, ids(pair2, "u1"), RATIONALS)
    with pytest.raises(RingError):
        gp.verify_centraliser_theorem(pair2, pair2.units, INTEGERS)


def test_forced_mode_reports_without_asserting() -> None:
    g = fm.pair_groupoid(3)
    rep = gp.verify_centraliser_theorem(g, ids(g, "u1"), RATIONALS, force=True)
    assert rep.holds is None and not rep.invariant
    assert rep.lhs_dim == 5 and rep.rhs_dim == 7
    assert rep.witness is not None


@pytest.mark.parametrize("ring", [RATIONALS, F5], ids=str)
def test_containment_direction(ring) -> None:
    for _, g in FAMILY[::5]:
        for u in gp.invariant_subsets(g):
            us = gp.unit_indicators(g, ring, u)
            for x in set(gp.isotropy(g)) | set(gp.complement_morphisms(g, u)):
                f = AlgebraElement.indicator(g, ring, [x])
                assert all(f * e == e * f for e in us)


# -- maximal commutativity ----------------------------------------------------------------------


def test_maximal_examples(pair2, z2) -> None:
    diag = gp.unit_indicators(pair2, RATIONALS, pair2.units)
    assert gp.is_maximal_commutative(pair2, RATIONALS, diag)
    assert not gp.is_maximal_commutative(pair2, RATIONALS, [ind(pair2, RATIONALS, "u1")])
    assert gp.is_maximal_commutative(z2, RATIONALS, [ind(z2, RATIONALS, "e"), ind(z2, RATIONALS, "t")])


def test_maximal_refuses_noncommutative_input() -> None:
    s3 = fm.symmetric_group_s3()
    iso = [AlgebraElement.indicator(s3, RATIONALS, [x]) for x in gp.isotropy(s3)]
    with pytest.raises(GroupoidError, match="input not commutative"):
        gp.is_maximal_commutative(s3, RATIONALS, iso)


def test_maximal_refuses_non_subalgebra(pair2) -> None:
    x = ind(pair2, RATIONALS, "u1") + ind(pair2, RATIONALS, "u2").scale(RATIONALS.coerce(2))
    # x commutes with itself but its span does not contain x*x
    with pytest.raises(GroupoidError, match="not a subalgebra"):
        gp.is_maximal_commutative(pair2, RATIONALS, [x])


# -- ideals and the core ----------------------------------------------------------------------------


def test_core_injectivity_examples(pair2) -> None:
    rep = gp.core_injectivity_check(pair2, RATIONALS, [])
    assert rep.injective and rep.core_injective
    rep = gp.core_injectivity_check(pair2, RATIONALS, [AlgebraElement.identity(pair2, RATIONALS)])
    assert not rep.injective and not rep.core_injective
    rep = gp.core_injectivity_check(pair2, RATIONALS, [ind(pair2, RATIONALS, "g12")])
    assert rep.ideal_dim == 4 and not rep.core_injective


def test_ideal_closure_is_two_sided() -> None:
    rng = random.Random(11)
    for _, g in FAMILY[::13]:
        gen = AlgebraElement(g, RATIONALS, [RATIONALS.coerce(rng.choice([0, 0, 1, -2])) for _ in range(len(g))])
        ideal = gp.ideal_closure(g, RATIONALS, [gen])
        for v in ideal.basis():
            f = AlgebraElement.from_sparse(g, RATIONALS, v)
            for x in range(len(g)):
                e = AlgebraElement.indicator(g, RATIONALS, [x])
                assert (e * f).sparse() in ideal and (f * e).sparse() in ideal


@pytest.mark.parametrize("name, g", [("pair2", fm.pair_groupoid(2)), ("Z4", fm.cyclic_group(4)),
                                     ("P2xZ2", fm.block(2, 2)), ("S3", fm.symmetric_group_s3())])
def test_core_injectivity_agrees_on_random_generators(name: str, g: FiniteGroupoid) -> None:
    rng = random.Random(name)
    for i in range(100):
        ring = (RATIONALS, F5)[i % 2]
        gens = []
        for _ in range(rng.randint(0, 2)):
            coeffs = [ring.zero] * len(g)
            for x in rng.sample(range(len(g)), rng.randint(1, min(3, len(g)))):
                coeffs[x] = ring.coerce(rng.randint(-2, 2))
            gens.append(AlgebraElement(g, ring, coeffs))
        rep = gp.core_injectivity_check(g, ring, gens)
        assert rep.agree, (name, i, rep)
