from fractions import Fraction

import mpmath
import pytest

from fadzeta import numeric as nm
from fadzeta.errors import FadError
from fadzeta.sequences import GcdSeq, mult_type_build, u_n, u_n_enclosure, u_n_trig

from conftest import F_A, F_C


def test_gcd_sequence_evaluation_and_divisor_sums():
    g = GcdSeq.from_map(4, {1: 1, 2: 2, 4: 4})
    assert [g(n) for n in (1, 2, 3, 4, 6, 8)] == [1, 2, 1, 4, 2, 4]
    assert g.divisor_sums() == {1: 1, 2: 1, 4: 2}
    assert GcdSeq.from_divisor_sums(g.divisor_sums()) == g


def test_gcd_sequence_reduces_to_minimal_period():
    g = GcdSeq.from_map(6, {1: 3, 2: 3, 3: 3, 6: 3})
    assert g.period == 1 and g(17) == 3


def test_gcd_sequence_arithmetic():
    a = GcdSeq.from_map(2, {1: 1, 2: 3})
    b = GcdSeq.from_map(3, {1: Fraction(1, 2), 3: 2})
    s, p = a + b, a * b
    for n in range(1, 13):
        assert s(n) == a(n) + b(n)
        assert p(n) == a(n) * b(n)
    assert GcdSeq.constant(0).is_zero()
    assert not b.is_integral() and a.is_integral()


def test_gcd_sequence_rejects_bad_period():
    with pytest.raises(FadError):
        GcdSeq.from_map(0, {1: 1})


def test_salem_quartic_determinants():
    h = mult_type_build(F_C)
    assert [h.d(n) for n in range(1, 8)] == [-1, -11, -25, -11, -16, -275, -841]
    assert all(h.sign(n) == -1 for n in range(1, 8))


def test_salem_quartic_dominant_data():
    h = mult_type_build(F_C)
    dom = h.dominant
    assert dom.k_out == 1 and dom.delta == 3 and not dom.hyperbolic
    assert abs(dom.Lambda_approx() - mpmath.mpf("2.15372137554")) < 1e-10


def test_scalar_frobenius_dominant_root():
    h = mult_type_build(F_A)
    assert h.dominant.hyperbolic
    assert h.dominant.Lambda_fraction() == 625
    assert h.d(1) == 256


def test_oscillatory_factor_of_salem_quartic():
    h = mult_type_build(F_C)
    expected = {1: [1, -1, -1], 2: [1, -1, -11], 3: [1, 5, -25]}
    for n, poly in expected.items():
        a = u_n(h, n)
        assert [int(c) for c in a.poly.all_coeffs()] == poly
        lo, hi = u_n_enclosure(h, n)
        assert lo <= Fraction(str(mpmath.nstr(u_n_trig(h, n), 30))) <= hi or hi - lo < Fraction(1, 10**20)
        assert abs(a.approx().real - u_n_trig(h, n)) < 1e-20


def test_oscillatory_factor_is_one_when_hyperbolic():
    h = mult_type_build(((2, 1), (1, 1)))
    assert u_n_enclosure(h, 5) == (1, 1)
    assert u_n(h, 5).as_fraction() == 1


def test_sign_for_negative_scalar():
    h = mult_type_build(((-2,),))
    assert [h.d(n) for n in (1, 2, 3)] == [-3, 3, -9]
    assert [h.sign(n) for n in (1, 2, 3)] == [-1, 1, -1]
    assert nm.det_power_minus_one(((-2,),), 3) == -9
