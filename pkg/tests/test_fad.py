from fractions import Fraction

import pytest

from fadzeta.fad import (
    FadParams,
    PowerSequence,
    PrimeData,
    fad_eval,
    fad_product,
    fad_values,
    orbit_numbers_times_length,
    realizable_check,
)
from fadzeta.sequences import GcdSeq
from fadzeta.errors import FadError


def test_plain_multiplicative_type():
    fp = FadParams.build([[2]])
    assert fad_values(fp, 6) == [1, 3, 7, 15, 31, 63]


def test_scalar_and_distortion():
    fp = FadParams.build([[5]], 1, GcdSeq.constant(Fraction(1, 2)))
    assert [fp(n) for n in (1, 2, 3)] == [2, 12, 62]
    # x -> x^p + x on G_a
    ga = FadParams.build([], 5, 1, [PrimeData(5, GcdSeq.constant(0), GcdSeq.constant(1))])
    assert [fad_eval(ga, n) for n in (1, 4, 5, 10)] == [1, 125, 1, 5**5]


def test_trivial_primes_are_dropped():
    fp = FadParams.build([[2]], 1, 1, [PrimeData(3, GcdSeq.constant(0), GcdSeq.constant(0))])
    assert fp.S == ()
    assert fp.all_s_t_zero


def test_prime_data_exponent():
    d = PrimeData(2, GcdSeq.constant(3), GcdSeq.constant(0))
    # log_2 of |4|_2^3
    assert d.exponent(4) == -6
    assert d.exponent(3) == 0


def test_product_is_pointwise():
    a = FadParams.build([[2]])
    b = FadParams.build([[3]], 2)
    ab = fad_product(a, b)
    for n in range(1, 9):
        assert ab(n) == a(n) * b(n)


def test_orbit_numbers():
    # full 2-shift: 2 points of period one, one orbit of length two, two of length three
    assert orbit_numbers_times_length(lambda n: 2**n, 1) == 2
    assert orbit_numbers_times_length(lambda n: 2**n, 2) == 2
    assert orbit_numbers_times_length(lambda n: 2**n, 3) == 6


def test_realizable_passes_on_half_of_five_power():
    v = realizable_check(lambda n: (5**n - 1) // 2, 50)
    assert v.passed and v.witness is None


def test_identity_sequence_witness():
    v = realizable_check(lambda n: n, 20)
    assert not v.passed
    assert v.witness.ell == 2 and v.witness.reason == "integrality"
    assert any(f.ell == 4 for f in v.failures)


def test_constant_minus_one_witness():
    v = realizable_check(lambda n: -1, 10)
    assert not v.passed
    assert v.witness.ell == 1 and v.witness.reason == "nonnegativity"


def test_double_exponential_has_ell_five_witness():
    v = realizable_check(PowerSequence(2, lambda n: 2**n), 50)
    assert not v.passed
    assert v.witness.ell == 5 and v.witness.reason == "integrality"


def test_bad_prime_rejected():
    with pytest.raises(FadError):
        PrimeData(6, GcdSeq.constant(1), GcdSeq.constant(0))
