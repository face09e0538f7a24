from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from steinberg.scalars import (
    INTEGERS,
    RATIONALS,
    RingError,
    RingSpec,
    Scalar,
    integers_mod,
    ring_add,
    ring_inverse,
    ring_mul,
    ring_neg,
)

RINGS = [INTEGERS, RATIONALS, integers_mod(2), integers_mod(5), integers_mod(6), integers_mod(7)]


def values(ring: RingSpec):
    if ring.kind == "rat":
        return st.fractions(max_denominator=50).filter(lambda f: abs(f) < 10**6)
    return st.integers(min_value=-(10**9), max_value=10**9)


def triples(ring: RingSpec):
    return st.tuples(values(ring), values(ring), values(ring)).map(lambda t: tuple(ring(v) for v in t))


# -- examples --------------------------------------------------------------------------


def test_mod5_addition_wraps() -> None:
    r = integers_mod(5)
    assert ring_add(r(3), r(4)) == r(2)
    assert ring_add(r(3), r(4)).value == 2


def test_rational_product_in_lowest_terms() -> None:
    x = ring_mul(RATIONALS(Fraction(1, 2)), RATIONALS(Fraction(2, 3)))
    assert x.value == Fraction(1, 3)
    assert (x.value.numerator, x.value.denominator) == (1, 3)


def test_integer_additive_inverse() -> None:
    assert ring_add(INTEGERS(7), INTEGERS(-7)) == INTEGERS(0)
    assert ring_neg(INTEGERS(7)) == INTEGERS(-7)


def test_inverses_in_fields() -> None:
    assert ring_inverse(RATIONALS(Fraction(2, 3))) == RATIONALS(Fraction(3, 2))
    assert ring_inverse(integers_mod(5)(2)) == integers_mod(5)(3)


def test_inverse_requires_field() -> None:
    with pytest.raises(RingError, match="inverse requires a field"):
        ring_inverse(integers_mod(6)(2))
    with pytest.raises(RingError, match="inverse requires a field"):
        ring_inverse(INTEGERS(1))


def test_inverse_of_zero() -> None:
    with pytest.raises(ZeroDivisionError, match="division by zero"):
        ring_inverse(RATIONALS(0))
    with pytest.raises(ZeroDivisionError, match="division by zero"):
        ring_inverse(integers_mod(7)(14))


def test_mixed_rings_rejected() -> None:
    with pytest.raises(RingError, match="ring mismatch"):
        ring_add(integers_mod(5)(1), integers_mod(7)(1))
    with pytest.raises(RingError, match="ring mismatch"):
        ring_mul(INTEGERS(1), RATIONALS(1))


@pytest.mark.parametrize(
    "text, kind, modulus, field",
    [("int", "int", None, False), ("rat", "rat", None, True), ("mod:5", "mod", 5, True),
     ("mod:6", "mod", 6, False), ("mod:2", "mod", 2, True), ("mod:97", "mod", 97, True)],
)
def test_parse_ring_spec(text: str, kind: str, modulus, field: bool) -> None:
    r = RingSpec.parse(text)
    assert (r.kind, r.modulus, r.is_field) == (kind, modulus, field)
    assert str(r) == text


@pytest.mark.parametrize("text", ["mod:1", "mod:0", "mod:x", "real", "mod", "mod:-3", ""])
def test_parse_ring_spec_rejects(text: str) -> None:
    with pytest.raises(RingError):
        RingSpec.parse(text)


def test_residues_reduced_on_input() -> None:
    r = integers_mod(5)
    assert r(-1).value == 4
    assert r(12) == r(2)
    assert r.coerce(Fraction(1, 2)) == 3  # 2 * 3 = 6 = 1 mod 5


def test_integers_reject_fractions() -> None:
    with pytest.raises(RingError):
        INTEGERS.coerce(Fraction(1, 2))


def test_fraction_into_composite_modulus_without_inverse() -> None:
    with pytest.raises((RingError, ZeroDivisionError)):
        integers_mod(6).coerce(Fraction(1, 2))


# -- ring axioms -------------------------------------------------------------------------


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_ring_axioms(ring: RingSpec) -> None:
    zero, one = ring(0), ring(1)

    @settings(max_examples=1000)
    @given(triples(ring))
    def check(t: tuple[Scalar, Scalar, Scalar]) -> None:
        a, b, c = t
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a + b == b + a
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert a + zero == a and a * one == a and a * zero == zero
        assert a + (-a) == zero

    check()


@pytest.mark.parametrize("ring", [RATIONALS, integers_mod(2), integers_mod(5), integers_mod(7)], ids=str)
@settings(max_examples=300)
@given(data=st.data())
def test_field_inverse(ring: RingSpec, data) -> None:
    a = ring(data.draw(values(ring)))
    if a.is_zero():
        return
    assert a * a.inverse() == ring(1)


@pytest.mark.parametrize("ring", RINGS, ids=str)
@settings(max_examples=300)
@given(data=st.data())
def test_canonical_representation(ring: RingSpec, data) -> None:
    a = ring(data.draw(values(ring)))
    b = ring(data.draw(values(ring)))
    if a == b:
        assert repr(a.value) == repr(b.value)
    s = a + b - b
    assert s == a and type(s.value) is type(a.value) and s.value == a.value
    if ring.kind == "mod":
        assert 0 <= a.value < ring.modulus
    if ring.kind == "rat":
        assert a.value.denominator > 0
