from fractions import Fraction

import pytest

from fadzeta import numeric as nm
from fadzeta.errors import ArgumentError, InfiniteValuation, NotConfined

from conftest import F_B, F_C


def test_padic_valuation_and_absolute_value():
    assert nm.padic_ord(96, 2) == 5
    assert nm.padic_ord(Fraction(50, 3), 5) == 2
    assert nm.padic_ord(Fraction(2, 9), 3) == -2
    assert nm.padic_abs(50, 5) == Fraction(1, 25)
    assert nm.strip_prime(96, 2) == 3
    with pytest.raises(InfiniteValuation):
        nm.padic_ord(0, 3)
    with pytest.raises(ArgumentError):
        nm.padic_ord(4, 6)


def test_smith_form_and_determinants():
    s = nm.smith_form_Z(((2, 4), (6, 8)))
    assert s.diag == (2, 4)
    assert nm.det(((2, 4), (6, 8))) == -8
    assert nm.det_power_minus_one(((2,),), 5) == 31
    assert nm.det_power_minus_one((), 3) == 1


def test_smith_transforms_are_unimodular():
    m = ((3, 1, 4), (1, 5, 9), (2, 6, 5))
    s = nm.smith_form_Z(m)
    assert abs(nm.det(s.u)) == 1 and abs(nm.det(s.v)) == 1
    prod = nm.matmul(nm.matmul(s.u, m), s.v)
    assert all(prod[i][j] == (s.diag[i] if i == j else 0) for i in range(3) for j in range(3))
    assert s.diag[0] * s.diag[1] * s.diag[2] == abs(nm.det(m))


def test_charpoly_and_exterior_power():
    assert nm.charpoly_coeffs(((1, 2), (3, 4))) == [1, -5, -2]
    assert nm.exterior_power(((1, 2), (3, 4)), 2) == ((-2,),)
    assert nm.exterior_power(((1, 2), (3, 4)), 0) == ((1,),)
    assert len(nm.exterior_power(F_B, 2)) == 6


def test_root_classification_of_salem_quartic():
    r = nm.classify_roots(nm.charpoly(F_C))
    assert r.counts == (1, 2, 1)
    assert (r.eps1, r.eps2) == (1, 0)


def test_hyperbolic_cat_map():
    r = nm.classify_roots(nm.charpoly(((2, 1), (1, 1))))
    assert r.counts == (1, 0, 1)


def test_confinement_rejects_roots_of_unity():
    with pytest.raises(NotConfined):
        nm.check_confined(((0, -1), (1, 0)))
    with pytest.raises(NotConfined):
        nm.check_confined(((1,),))
    nm.check_confined(((2, 1), (1, 1)))


def test_residue_period():
    assert nm.residue_period(F_B, 5) == 124
    assert nm.residue_period(((2,),), 3) == 2
    assert nm.residue_period(((2,),), 7) == 3


def test_algebraic_number_basics():
    (a,) = [r for r in nm.real_roots(nm.int_poly([1, -1, -1])) if r.approx().real > 0]
    assert a.degree == 2
    assert a.as_fraction() is None
    lo, hi = a.abs2_bounds()
    assert Fraction(26180339887, 10**10) < lo <= hi < Fraction(26180339888, 10**10)
    assert nm.AlgebraicNumber.rational(Fraction(3, 2)).as_fraction() == Fraction(3, 2)


def test_number_theory_helpers():
    assert nm.mobius(30) == -1 and nm.mobius(12) == 0 and nm.mobius(1) == 1
    assert nm.divisors(12) == [1, 2, 3, 4, 6, 12]
    assert nm.lcm_all([4, 6, 10]) == 60
    assert nm.rational_str(Fraction(-3, 4)) == "-3/4"
    assert nm.rational_str(Fraction(5)) == "5"
    assert nm.parse_rational("6/8") == Fraction(3, 4)


def test_trace_polynomial_of_self_reciprocal_quartic():
    r = nm.trace_polynomial(nm.charpoly(F_C))
    # x^4 - 3x^3 + 3x^2 - 3x + 1 = x^2 (y^2 - 3y + 1) with y = x + 1/x
    assert [int(c) for c in r.all_coeffs()] == [1, -3, 1]
