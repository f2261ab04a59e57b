from fractions import Fraction
import random

import pytest

from gfcech import QQ, PrimeField, PolyRing, field_from_string


def test_rationals_lowest_terms():
    a = QQ(Fraction(6, -4))
    assert a == Fraction(-3, 2) and a.denominator == 2
    assert QQ.div(QQ(1), QQ(3)) == Fraction(1, 3)
    with pytest.raises(ZeroDivisionError):
        QQ.inv(QQ.zero)


def test_prime_field_residues():
    F = PrimeField(7)
    assert F(10) == 3 and F(-1) == 6
    assert all(0 <= F(k) < 7 for k in range(-20, 20))
    for a in range(1, 7):
        assert F.mul(a, F.inv(a)) == 1
    assert F.render(6) == "-1"


def test_prime_checked():
    with pytest.raises(ValueError):
        PrimeField(9)
    with pytest.raises(ValueError):
        PrimeField(1)


def test_field_from_string():
    assert field_from_string("q") is QQ and field_from_string("QQ") is QQ
    assert field_from_string("fp:101").p == 101
    assert field_from_string("GF(5)").p == 5
    with pytest.raises(ValueError):
        field_from_string("R")


def test_frobenius_in_characteristic_two():
    R = PolyRing("xy", field=PrimeField(2))
    x, y = R.gens()
    assert (x + y) * (x + y) == x ** 2 + y ** 2


def test_random_elements_are_in_field():
    rng = random.Random(3)
    F = PrimeField(13)
    assert all(0 <= F.random_element(rng) < 13 for _ in range(50))
    assert all(F.random_element(rng, nonzero=True) != 0 for _ in range(50))
