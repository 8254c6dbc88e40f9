import pytest

from fadzeta import twisted as tw
from fadzeta.errors import FadError

from conftest import SIGMA_F5


@pytest.fixture(scope="module")
def sigma():
    return tw.make_matrix(5, SIGMA_F5)


def test_finite_field_arithmetic():
    F = tw.field(5, 2)
    assert F.modulus[-1] == 1 and len(F.modulus) == 3
    x = tw.FqElem.of(F, [0, 1])
    # the Frobenius of a generator of F_25 has order two
    assert x ** 25 == x and x ** 5 != x


def test_coefficient_polynomial_helpers():
    F = tw.field(3, 1)
    g = tw.cp_gcd(F, [2, 0, 1], [1, 1])  # x^2 - 1 and x + 1
    assert tw.cp_monic(F, g) == tw.cp_monic(F, [1, 1])
    # order of x modulo x^2 + x + 2 over F_3 (primitive)
    assert tw.x_order_mod(F, [2, 1, 1], 100) == 8


def test_twisted_multiplication_is_skew():
    F = tw.field(5, 2)
    g = tw.FqElem.of(F, [0, 1])
    a = tw.TwistedPoly.const(F, g.value)
    phi = tw.TwistedPoly.phi(F)
    # phi * a = a^p * phi
    assert phi * a == tw.TwistedPoly.const(F, (g**5).value) * phi
    assert phi * a != a * phi


def test_degree_profile_of_pair(sigma):
    prof = tw.deg_profile(sigma, 5)
    assert prof.a == 1
    assert [prof.t(n) for n in (1, 2, 3, 4)] == [0, 1, 0, 1]


def test_inseparable_profile_of_pair(sigma):
    t = tw.insep_profile(sigma, 5)
    assert t.period == 1 and t(1) == 1


def test_dieudonne_profile_agrees_with_profiles(sigma):
    prof = tw.deg_profile(sigma, 5)
    t = tw.insep_profile(sigma, 5)
    for n in range(1, 11):
        dd = tw.ddet_profile((sigma**n).minus_one())
        assert dd.degphi == prof.exponent(n, 5)
        assert dd.vphi == t(n) * 5 ** (1 if n % 5 == 0 else 0)


def test_cyclotomic_route(sigma):
    for n in (1, 2, 3, 4, 6):
        assert tw.insep_by_cyclotomic(sigma, n) == tw.insep_profile(sigma, 5)(n)


def test_separable_exponent_matches_kernel(sigma):
    # fixed points of sigma^3 live in F_{5^24}
    assert tw.separable_exponent(sigma, 3) == 2
    assert tw.kernel_exponent(sigma, 1, 1) == 0
    assert tw.kernel_exponent(sigma, 3, 24) == 2


def test_frobenius_minus_one_is_separable():
    s = tw.make_matrix(5, [[[0, 1]]])
    assert tw.insep_profile(s, 5).is_zero()
    assert tw.separable_exponent(s, 2) == 2


def test_frobenius_plus_identity_is_inseparable_at_p():
    s = tw.make_matrix(5, [[[1, 1]]])
    assert tw.insep_profile(s, 5)(1) == 1
    # (phi + 1)^5 - 1 = phi^5
    assert tw.separable_exponent(s, 5) == 0


def test_singular_matrix_rejected():
    s = tw.make_matrix(5, [[[1]]])
    with pytest.raises(FadError):
        tw.separable_exponent(s, 1)
