import random
from fractions import Fraction

import pytest

from relcone.coeffs import (
    INT,
    RAT,
    U1,
    ZMOD,
    CoeffRing,
    Scalar,
    add,
    angle_lift,
    mul,
    neg,
    parse_ring,
    scalar_from_json,
    scalar_to_json,
    value_from_json,
    value_to_json,
)
from relcone.errors import MulOnAngleQ, ParseError, RingMismatch, UnsupportedRing


def test_parse_ring_round_trips():
    for text, ring in [("Z", INT), ("Q", RAT), ("U1", U1), ("Zmod:5", ZMOD(5)), ("Zmod:12", ZMOD(12))]:
        assert parse_ring(text) == ring
        assert parse_ring(str(ring)) == ring


def test_parse_ring_rejects_garbage():
    for bad in ["z", "Zmod:", "Zmod:0", "Zmod:-3", "R", "Zmod:abc", ""]:
        with pytest.raises(ParseError):
            parse_ring(bad)


def test_normalize_per_ring():
    # bools are not integers here: passing True is always a caller bug
    with pytest.raises(RingMismatch):
        INT.normalize(True)
    assert INT.normalize(Fraction(4, 2)) == 2
    assert RAT.normalize(2) == Fraction(2)
    assert ZMOD(7).normalize(-1) == 6
    # circle values live in [0, 1)
    assert U1.normalize(Fraction(7, 3)) == Fraction(1, 3)
    assert U1.normalize(Fraction(-1, 4)) == Fraction(3, 4)
    assert U1.normalize(Fraction(2)) == 0


def test_scalar_arithmetic_int():
    a = Scalar(INT, 5)
    b = Scalar(INT, -3)
    assert add(a, b).value == 2
    assert neg(a).value == -5
    assert mul(a, b).value == -15


def test_scalar_arithmetic_mod():
    r = ZMOD(6)
    a = Scalar(r, 4)
    b = Scalar(r, 5)
    assert add(a, b).value == 3
    assert mul(a, b).value == 2
    assert neg(a).value == 2


def test_circle_group_addition_wraps():
    a = Scalar(U1, Fraction(3, 4))
    b = Scalar(U1, Fraction(1, 2))
    assert add(a, b).value == Fraction(1, 4)
    assert neg(a).value == Fraction(1, 4)
    assert neg(Scalar(U1, 0)).value == 0


def test_circle_group_has_no_multiplication():
    a = Scalar(U1, Fraction(1, 2))
    with pytest.raises(MulOnAngleQ):
        mul(a, a)
    with pytest.raises(MulOnAngleQ):
        U1.mul(Fraction(1, 2), Fraction(1, 2))


def test_integer_action_exists_on_every_ring():
    assert INT.zmul(3, 4) == 12
    assert RAT.zmul(-2, Fraction(1, 3)) == Fraction(-2, 3)
    assert ZMOD(5).zmul(7, 3) == 1
    assert U1.zmul(3, Fraction(1, 2)) == Fraction(1, 2)
    assert U1.zmul(2, Fraction(1, 2)) == 0


def test_mixed_ring_scalar_ops_rejected():
    with pytest.raises(RingMismatch):
        add(Scalar(INT, 1), Scalar(RAT, 1))


def test_field_flags_and_inverses():
    assert RAT.is_field and ZMOD(7).is_field
    assert not INT.is_field and not U1.is_field and not ZMOD(6).is_field
    assert RAT.inv(Fraction(2, 3)) == Fraction(3, 2)
    assert ZMOD(7).inv(3) == 5
    with pytest.raises(UnsupportedRing):
        INT.inv(2)


def test_angle_lift_is_canonical():
    # the lift picks the rational representative in [0, 1)
    s = Scalar(U1, Fraction(5, 3))
    lifted = angle_lift(s)
    assert lifted.ring == RAT
    assert lifted.value == Fraction(2, 3)
    assert angle_lift(Scalar(U1, 0)).value == 0
    with pytest.raises(RingMismatch):
        angle_lift(Scalar(RAT, Fraction(1, 2)))


def test_angle_lift_additivity_defect_is_integral():
    # lift(a + b) - lift(a) - lift(b) is always 0 or -1
    rng = random.Random(20260823)
    for _ in range(200):
        a = Scalar(U1, Fraction(rng.randrange(-40, 40), rng.randrange(1, 12)))
        b = Scalar(U1, Fraction(rng.randrange(-40, 40), rng.randrange(1, 12)))
        defect = angle_lift(add(a, b)).value - angle_lift(a).value - angle_lift(b).value
        assert defect in (0, -1)


def test_value_json_round_trip():
    cases = [
        (INT, 5),
        (INT, -(10**20)),
        (RAT, Fraction(-7, 3)),
        (U1, Fraction(1, 2)),
        (ZMOD(9), 7),
    ]
    for ring, v in cases:
        v = ring.normalize(v)
        assert value_from_json(ring, value_to_json(ring, v)) == v


def test_scalar_json_round_trip():
    s = Scalar(ZMOD(11), -3)
    assert scalar_from_json(ZMOD(11), scalar_to_json(s)) == s


def test_big_int_json_uses_strings():
    big = 2**80
    enc = value_to_json(INT, big)
    assert isinstance(enc, str)
    assert value_from_json(INT, enc) == big


def test_ring_equality_and_hash():
    assert ZMOD(5) == ZMOD(5)
    assert ZMOD(5) != ZMOD(7)
    assert len({INT, RAT, U1, ZMOD(5), ZMOD(5)}) == 4
    assert isinstance(INT, CoeffRing)
