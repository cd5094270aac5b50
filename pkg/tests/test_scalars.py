from fractions import Fraction

import pytest

from wallcross.scalars import (INF, QQ, LaurentSeriesRing, ValuedScalar, rational,
                               ring_axiom_suite)

R = LaurentSeriesRing(16)


def test_val_examples():
    s = ValuedScalar({2: 1, 3: 3}, 16)       # t^2 + 3 t^3
    assert s.val() == 2
    assert ValuedScalar({}, 16).val() == INF
    assert ValuedScalar.constant(5, 16).val() == 0
    assert QQ.val(5) == 0
    assert QQ.val(0) == INF


def test_val_ultrametric_equality_when_distinct():
    a = R.t(1)
    b = R.t(2)
    assert (a + b).val() == 1
    assert (a - a).val() == INF


def test_invert_t():
    assert R.t(1).invert().terms == {-1: 1}


def test_invert_geometric_series():
    s = R.one - R.t(1)
    inv = s.invert()
    assert inv.terms == {e: 1 for e in range(16)}
    assert s * inv == R.one


def test_invert_constant():
    assert ValuedScalar.constant(2, 16).invert().terms == {0: Fraction(1, 2)}


def test_invert_zero_raises():
    with pytest.raises(ZeroDivisionError):
        R.zero.invert()


def test_invert_tracks_truncation_loss():
    s = R.t(2) * (R.one + R.t(1))
    inv = s.invert()
    assert inv.trunc == 16 - 4
    assert (s * inv).terms == {0: 1}


def test_mixed_truncation_takes_minimum():
    a = ValuedScalar({0: 1}, 16)
    b = ValuedScalar({0: 1, 9: 5}, 10)
    assert (a * b).trunc == 10
    assert (a + b).trunc == 10


def test_pow_and_neg():
    s = R.one + R.t(1)
    assert s ** 0 == R.one
    assert s ** 3 == s * s * s
    assert (-s) + s == R.zero


def test_serialization_roundtrip():
    s = ValuedScalar({-1: Fraction(3, 4), 2: -2}, 12)
    assert ValuedScalar.from_json(s.to_json()) == s
    assert rational("3/4") == Fraction(3, 4)
    assert rational("-5") == -5


def test_ring_axiom_suite_rationals():
    report = ring_axiom_suite(QQ, [0, 1, -2, Fraction(3, 4)])
    assert report.passed, report.to_json()


def test_ring_axiom_suite_laurent():
    report = ring_axiom_suite(R, [R.t(1), R.one + R.t(1), R.zero])
    assert report.passed, report.to_json()


def test_ring_axiom_suite_flags_broken_valuation():
    class BrokenRing(type(QQ)):
        name = "broken"

        @staticmethod
        def val(a):
            return INF if a == 0 else 1  # val(xy) != val(x) + val(y)

    report = ring_axiom_suite(BrokenRing(), [1, 2])
    assert not report.passed
    assert report.first_failure.law == "val(xy) = val(x) + val(y)"
