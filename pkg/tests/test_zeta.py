from fractions import Fraction

import pytest

from fadzeta import catalog
from fadzeta import systems as sy
from fadzeta import zeta as zt
from fadzeta.errors import ArgumentError, FadError, NotRealizable
from fadzeta.fad import FadParams

from conftest import F_A, F_B, F_C


def _fp(M):
    return sy.build(sy.Torus(5, M)).params


def _cat(name):
    return sy.build(catalog.load(name)).params


def test_series_helpers():
    one_minus_z = (Fraction(1), Fraction(-1))
    assert zt.series_mul(one_minus_z, one_minus_z, 3) == (1, -2, 1, 0)
    assert zt.series_pow(one_minus_z, Fraction(-1), 4) == (1, 1, 1, 1, 1)
    assert zt.series_pow((1, -4), Fraction(1, 2), 3) == (1, -2, -2, -4)
    assert zt.series_from_counts([2] * 4, 4) == (1, 2, 3, 4, 5)
    assert zt.counts_from_series((1, 2, 3, 4, 5), 4) == [2, 2, 2, 2]
    assert zt.poly_str((Fraction(1), Fraction(-2))) == "1 - 2*z"


@pytest.mark.parametrize(
    "name, closed",
    [
        ("doubling_map", "(1 - z)/(1 - 2*z)"),
        ("s_integer_minus2", "(1 + z)/(1 - 2*z)"),
        ("full_shift_2", "1/(1 - 2*z)"),
        ("ca_f2_symmetric", "1/(1 - 4*z)"),
        ("sl2_f5", "(1 - 5*z)/(1 - 125*z)"),
        ("gl2_f3", "(1 - 36*z + 243*z^2)/(1 - 84*z + 243*z^2)"),
        ("half_five_power", "((1 - z)/(1 - 5*z))^(1/2)"),
        ("finite_two_fixed_one_3cycle", "1/(1 - 2*z + z^2 - z^3 + 2*z^4 - z^5)"),
    ],
)
def test_closed_forms(name, closed):
    assert str(zt.zeta_build(_cat(name))) == closed


@pytest.mark.parametrize("name", sorted(catalog.EXAMPLES))
def test_forms_expand_to_the_counting_series(name):
    fp = _cat(name)
    form = zt.zeta_build(fp)
    N = 8
    assert form.series(N) == zt.zeta_series(fp, N)
    assert zt.log_derivative_counts(form, N) == [fp(n) for n in range(1, N + 1)]


def test_zeta_series_length_and_guard():
    fp = _cat("full_shift_2")
    assert zt.zeta_series(fp, 5) == (1, 2, 4, 8, 16, 32)
    with pytest.raises(ArgumentError):
        zt.zeta_series(fp, 0)


def test_rational_same_function():
    a = zt.Rational((Fraction(1), Fraction(-1)), (Fraction(1), Fraction(-2)))
    b = zt.Rational((Fraction(2), Fraction(-4), Fraction(2)), (Fraction(2), Fraction(-6), Fraction(4)))
    assert a.same_function(b)


def test_dichotomy_on_tori():
    assert isinstance(zt.zeta_build(_fp(F_A)), zt.Rational)
    nb = zt.zeta_build(_fp(F_B))
    assert isinstance(nb, zt.NonHolonomic) and nb.natural_boundary
    nc = zt.zeta_build(_fp(F_C))
    assert isinstance(nc, zt.NonHolonomic) and not nc.natural_boundary


def test_non_holonomic_prefix_is_bounded():
    form = zt.zeta_build(_fp(F_B))
    assert form.series(4) == (1, 24, 792, 33864, 822168)
    with pytest.raises(ArgumentError):
        form.series(zt.NON_HOLONOMIC_PREFIX + 5)


def test_steinberg_zeta_cross_check():
    assert zt.coh_zeta_check(sy.ree_descriptor(0))
    assert zt.coh_zeta_check(sy.frobenius_descriptor(4, (2,)))
    assert zt.coh_zeta_check(sy.frobenius_descriptor(3, sy.gl_degrees(2)))


def test_prime_orbits_of_full_shift():
    assert zt.prime_orbit_counts(_cat("full_shift_2"), 6) == {1: 2, 2: 1, 3: 2, 4: 3, 5: 6, 6: 9}


def test_prime_orbits_reject_non_realizable():
    fp = FadParams.build([[5]], 1, Fraction(1, 3))
    with pytest.raises(NotRealizable):
        zt.prime_orbit_counts(fp, 3)


def test_orbit_asymptotics_for_scalar_frobenius():
    rep = zt.orbit_counts(_fp(F_A), 400)
    target = Fraction(625, 624)
    for N in (20, 100, 400):
        e = rep.Pi[N]
        assert e.width < Fraction(1, 10**20)
        assert abs(e.mid - target) < Fraction(1, 1000)
    assert abs(rep.Pi[20].mid - Fraction(10016871, 10**7)) < Fraction(1, 10**7)


def test_enclosure_rendering_is_outward():
    e = zt.Enclosure(Fraction(1, 3), Fraction(2, 3))
    assert e.render(5) == ("0.33333", "0.66667")
    assert zt.Enclosure.exact(Fraction(625, 624)).render(10) == ("1.001602564", "1.001602565")
    assert e.contains(Fraction(1, 2)) and not e.contains(1)


def test_accumulation_classes():
    a = zt.classify_accumulation(_fp(F_A))
    assert a.kind == "Finite" and a.distinct == (Fraction(625, 624),)
    assert zt.classify_accumulation(_fp(F_B)).kind == "FiniteUnionCantor"
    assert zt.classify_accumulation(_fp(F_C)).kind == "ContainsInterval"


def test_theta_values():
    assert zt.theta(_fp(F_A)) == zt.ThetaResult(Fraction(3, 4), Fraction(3, 4))
    tc = zt.theta(_fp(F_C))
    assert tc.exact and (tc.theta_prime, tc.theta) == (0, Fraction(1, 2))
    tb = zt.theta(_fp(F_B))
    assert not tb.exact and tb.theta.width < Fraction(1, 10**20)
    assert Fraction(88, 100) < tb.theta.lo and tb.theta.hi < Fraction(89, 100)
    assert zt.theta(_cat("elliptic_f3_m2_ordinary")).theta == Fraction(1, 2)
    assert zt.theta(_cat("elliptic_square_f3_m2")).theta == Fraction(3, 4)


def test_detector_groups():
    da = zt.detector_structure(_fp(F_A))
    assert da.trivial and str(da) == "0"
    db = zt.detector_structure(_fp(F_B))
    assert (db.varpi, db.t, db.s, db.S, db.t_exact) == (124, 0, 124, (5,), True)
    assert str(db) == "Z/124Z x Z_5"
    dc = zt.detector_structure(_fp(F_C))
    assert (dc.varpi, dc.delta, dc.t, dc.s, dc.S, dc.t_exact) == (3, 3, 1, 3, (5,), True)
    assert str(dc) == "Z/3Z x T x Z_5"


def test_pnt_limit():
    assert zt.pnt_limit(_fp(F_A)) == Fraction(625, 624)


def test_main_term_needs_entropy():
    with pytest.raises(FadError):
        zt.pnt_main_term(FadParams.build([], 1, 1), 5)


def test_theta_for_weil_polynomial_companion():
    # eigenvalues of modulus sqrt(2): an elliptic curve over F_2
    fp = FadParams.build([[0, -2], [1, 1]])
    assert [fp(n) for n in range(1, 5)] == [2, 8, 14, 16]
    assert zt.theta(fp) == zt.ThetaResult(Fraction(1, 2), Fraction(1, 2))


@pytest.mark.parametrize("name, lam", [("full_shift_2", 2), ("doubling_map", 2), ("torus_f5_frobenius", 625)])
def test_main_term_residual_is_within_theta_bound(name, lam):
    fp = _cat(name)
    th = zt.theta(fp).theta
    for N in (10, 20, 40, 60):
        m = zt.pnt_main_term(fp, N)
        bound = Fraction(lam) ** N
        # |residual| <= Lambda^(Theta N), both sides raised to the denominator of Theta
        worst = max(abs(m.residual.lo), abs(m.residual.hi))
        assert worst ** th.denominator <= bound ** th.numerator


@pytest.mark.parametrize("name", ["doubling_map", "gl2_f3", "g2_ree_a0", "half_five_power", "finite_two_fixed_one_3cycle"])
def test_log_derivative_identity_to_order_25(name):
    fp = _cat(name)
    assert zt.log_derivative_counts(zt.zeta_build(fp), 25) == [fp(n) for n in range(1, 26)]
