"""Zeta functions, orbit counts, error exponents, accumulation sets and detector groups of FAD parameters."""

from __future__ import annotations

import decimal
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import sympy
from sympy import Poly

from . import numeric as nm
from .errors import ArgumentError, IrrationalValue, NotRealizable, TrivialDynamics
from .fad import FadParams, fad_eval
from .numeric import AlgebraicNumber
from .sequences import DominantData, dominant_data, mult_type_build, u_n_enclosure

Series = tuple[Fraction, ...]  # constant term first

Z = sympy.Symbol("z")


# ---------------------------------------------------------------------------
# exact power series


def _trim(a: Sequence[Fraction]) -> Series:
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return tuple(Fraction(x) for x in a) or (Fraction(0),)


def series_mul(a: Sequence[Fraction], b: Sequence[Fraction], N: int) -> Series:
    out = [Fraction(0)] * (N + 1)
    for i, x in enumerate(a[: N + 1]):
        if x:
            for j, y in enumerate(b[: N + 1 - i]):
                out[i + j] += x * y
    return tuple(out)


def series_pow(q: Sequence[Fraction], e: Fraction, N: int) -> Series:
    """q^e to order N for q(0) = 1, by the recurrence k q0 g_k = sum ((e+1) i - k) q_i g_(k-i)."""
    q = [Fraction(x) for x in q] + [Fraction(0)] * (N + 1)
    if q[0] != 1:
        raise ArgumentError("series_pow needs constant term 1")
    e = Fraction(e)
    g = [Fraction(1)] + [Fraction(0)] * N
    for k in range(1, N + 1):
        g[k] = sum(((e + 1) * i - k) * q[i] * g[k - i] for i in range(1, k + 1)) / k
    return tuple(g)


def series_from_counts(f: Sequence[Fraction | int], N: int) -> Series:
    """exp(sum_{n<=N} f_n z^n / n) to order N; f[0] is f_1."""
    a = [Fraction(1)] + [Fraction(0)] * N
    for k in range(1, N + 1):
        a[k] = sum(Fraction(f[n - 1]) * a[k - n] for n in range(1, k + 1)) / k
    return tuple(a)


def counts_from_series(a: Sequence[Fraction], N: int) -> list[Fraction]:
    """Inverse of series_from_counts: the coefficients of z zeta'/zeta."""
    f: list[Fraction] = []
    for k in range(1, N + 1):
        f.append(k * Fraction(a[k]) - sum(f[n - 1] * a[k - n] for n in range(1, k)))
    return f


def poly_str(coeffs: Sequence[Fraction], var: str = "z") -> str:
    terms = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        mono = "" if i == 0 else var if i == 1 else f"{var}^{i}"
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{nm.rational_str(mag)}*{mono}"
        else:
            body = nm.rational_str(mag)
        if not terms:
            terms.append(body if c > 0 else f"-{body}")
        else:
            terms.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(terms) or "0"


def _to_sympy(coeffs: Sequence[Fraction]) -> Poly:
    return Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in coeffs])), Z, domain="QQ")


def _from_sympy(p: Poly) -> Series:
    return _trim(Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs()))


# ---------------------------------------------------------------------------
# zeta forms


@dataclass(frozen=True)
class ProductForm:
    """prod_j Q_j(z)^(e_j) with Q_j(0) = 1."""

    factors: tuple[tuple[Series, Fraction], ...]
    kind = "product"

    def series(self, N: int) -> Series:
        out: Series = (Fraction(1),) + (Fraction(0),) * N
        for q, e in self.factors:
            out = series_mul(out, series_pow(q, e, N), N)
        return out

    def __str__(self) -> str:
        parts = []
        for q, e in self.factors:
            parts.append(f"({poly_str(q)})^({nm.rational_str(e)})")
        return " * ".join(parts) or "1"


@dataclass(frozen=True)
class Rational:
    numerator: Series
    denominator: Series
    product: ProductForm | None = field(default=None, compare=False)
    kind = "rational"

    def series(self, N: int) -> Series:
        inv = series_pow(self.denominator, Fraction(-1), N)
        return series_mul(self.numerator, inv, N)

    def __str__(self) -> str:
        num = poly_str(self.numerator)
        if self.denominator == (1,):
            return num
        num = num if len([c for c in self.numerator if c]) == 1 else f"({num})"
        return f"{num}/({poly_str(self.denominator)})"

    def same_function(self, other: "Rational") -> bool:
        a = _to_sympy(self.numerator) * _to_sympy(other.denominator)
        b = _to_sympy(other.numerator) * _to_sympy(self.denominator)
        return a == b


@dataclass(frozen=True)
class RootRational:
    """zeta with zeta^m = base."""

    base: Rational
    root_index: int
    product: ProductForm | None = field(default=None, compare=False)
    kind = "root_rational"

    def series(self, N: int) -> Series:
        return series_pow(self.base.series(N), Fraction(1, self.root_index), N)

    def __str__(self) -> str:
        return f"({self.base})^(1/{self.root_index})"


@dataclass(frozen=True)
class NonHolonomic:
    prefix: Series
    natural_boundary: bool
    kind = "non_holonomic"

    def series(self, N: int) -> Series:
        if N >= len(self.prefix):
            raise ArgumentError(f"only {len(self.prefix) - 1} coefficients are stored")
        return self.prefix[: N + 1]

    def __str__(self) -> str:
        tag = "natural boundary" if self.natural_boundary else "not holonomic"
        return f"non-holonomic ({tag}): {poly_str(self.prefix)} + ..."


ZetaForm = Rational | RootRational | ProductForm | NonHolonomic

NON_HOLONOMIC_PREFIX = 20


def zeta_series(fp: FadParams, N: int) -> Series:
    """Coefficients of exp(sum f_n z^n / n) in degrees 0..N."""
    if N < 1:
        raise ArgumentError("N must be positive")
    return series_from_counts([fad_eval(fp, n) for n in range(1, N + 1)], N)


def _sign_exponents(B: nm.IntMatrix) -> tuple[int, int]:
    """(eps1, eps2) with sign det(B^n - 1) = (-1)^(eps1 + eps2 n), read off from n = 1, 2."""
    if not B:
        return 0, 0
    d1 = nm.det_power_minus_one(B, 1)
    d2 = nm.det_power_minus_one(B, 2)
    e1 = int(d2 < 0)
    e2 = int(d1 < 0) ^ e1
    return e1, e2


def _det_one_minus(M: nm.IntMatrix, w: Fraction, j: int) -> Series:
    """det(1 - w z^j M) as a series in z."""
    if not M:
        return (Fraction(1),)
    coeffs = nm.charpoly_coeffs(M)  # highest degree first: [1, a1, ..., as]
    out = [Fraction(0)] * (j * (len(coeffs) - 1) + 1)
    for i, a in enumerate(coeffs):
        out[j * i] = Fraction(a) * w**i
    return _trim(out)


def abs_det_zeta_factors(A: nm.IntMatrix, c: Fraction, j: int = 1) -> list[tuple[Series, Fraction]]:
    """zeta of |det(B^m - 1)| C^m evaluated at z^j, with B = A^j and C = c^j, as factors."""
    B = nm.matpow(A, j) if A else ()
    s = len(A)
    e1, e2 = _sign_exponents(B)
    w = (-1) ** e2 * Fraction(c) ** j
    out = []
    for k in range(s + 1):
        block = nm.exterior_power(B, k) if k else ((1,),)
        sign = -((-1) ** (s - k)) * (-1) ** e1
        out.append((_det_one_minus(block, w, j), Fraction(sign)))
    return out


def _collect(factors: list[tuple[Series, Fraction]]) -> tuple[tuple[Series, Fraction], ...]:
    acc: dict[Series, Fraction] = {}
    for q, e in factors:
        if q == (1,) or e == 0:
            continue
        acc[q] = acc.get(q, Fraction(0)) + e
    return tuple(sorted(((q, e) for q, e in acc.items() if e), key=lambda t: (len(t[0]), t[0])))


def _rational_from(factors: Sequence[tuple[Series, Fraction]], scale: int = 1) -> Rational:
    num = _to_sympy((Fraction(1),))
    den = _to_sympy((Fraction(1),))
    for q, e in factors:
        k = e * scale
        if k.denominator != 1:
            raise ArgumentError("non-integral exponent")
        if k > 0:
            num *= _to_sympy(q) ** int(k)
        elif k < 0:
            den *= _to_sympy(q) ** int(-k)
    g = sympy.gcd(num, den)
    num = num.quo(g)
    den = den.quo(g)
    c0 = den.eval(0)
    return Rational(_from_sympy(num * (1 / c0)), _from_sympy(den * (1 / c0)))


def product_form(fp: FadParams) -> ProductForm:
    """zeta = prod_j Z_j(z^j)^(d_j / j) where r_n = sum_{j | gcd(n, period)} d_j."""
    if not fp.all_s_t_zero:
        raise ArgumentError("a product form exists only when every s and t vanishes")
    factors: list[tuple[Series, Fraction]] = []
    for j, dj in sorted(fp.r.divisor_sums().items()):
        if dj == 0:
            continue
        for q, e in abs_det_zeta_factors(fp.A, fp.c, j):
            factors.append((q, e * dj / j))
    return ProductForm(_collect(factors))


def zeta_build(fp: FadParams) -> ZetaForm:
    """Closed form of the zeta function, or a certified non-holonomic verdict with a series prefix."""
    if not fp.all_s_t_zero:
        dom = dominant_data(fp.handle, fp.c)
        integral_t = all(d.t.is_integral() for d in fp.primes)
        return NonHolonomic(zeta_series(fp, NON_HOLONOMIC_PREFIX), dom.hyperbolic and integral_t)
    prod = product_form(fp)
    m = nm.lcm_all([e.denominator for _, e in prod.factors]) if prod.factors else 1
    if m == 1:
        r = _rational_from(prod.factors)
        return Rational(r.numerator, r.denominator, prod)
    return RootRational(_rational_from(prod.factors, m), m, prod)


def log_derivative_counts(form: ZetaForm, N: int) -> list[Fraction]:
    """Coefficients of z zeta'/zeta from a closed form; these should be f_1..f_N."""
    return counts_from_series(form.series(N), N)


# ---------------------------------------------------------------------------
# cohomological zeta of reductive data


def coh_signs(A: nm.IntMatrix) -> tuple[int, int]:
    r = nm.classify_roots(nm.charpoly(A)) if A else None
    return (r.eps1, r.eps2) if r else (0, 0)


def coh_zeta_check(desc, order: int = 20) -> bool:
    """Compare the count-side zeta with the alternating exterior-algebra product, and check Lambda = c sp(sigma)."""
    from .systems import ReductiveSteinberg
    from .errors import InvariantViolation

    if not isinstance(desc, ReductiveSteinberg):
        raise ArgumentError("expected reductive data")
    A = nm.block_diag(desc.J, desc.Z)
    s = len(A)
    c = Fraction(desc.c)
    counts = [abs(nm.det_power_minus_one(A, n)) * c**n for n in range(1, order + 1)]
    lhs = series_from_counts(counts, order)
    e1, e2 = coh_signs(A)
    w = (-1) ** e2 * c
    rhs: Series = (Fraction(1),) + (Fraction(0),) * order
    for k in range(s + 1):
        block = nm.exterior_power(A, k) if k else ((1,),)
        q = _det_one_minus(block, w, 1)
        rhs = series_mul(rhs, series_pow(q, Fraction((-1) ** (k + 1) * (-1) ** (s + e1)), order), order)
    if lhs != rhs:
        bad = next(i for i in range(order + 1) if lhs[i] != rhs[i])
        raise InvariantViolation(f"cohomological zeta differs at z^{bad}: {lhs[bad]} vs {rhs[bad]}")
    _check_shub(A, c)
    return True


def _check_shub(A: nm.IntMatrix, c: Fraction) -> None:
    """Lambda = c * (product of |lambda| over eigenvalues outside the unit circle)."""
    from .errors import InvariantViolation

    h = mult_type_build(A)
    lam = dominant_data(h, c).Lambda
    sp = Fraction(1)
    exact = True
    for f, _mult in nm.factor_int_poly(nm.charpoly(A)) if A else []:
        roots = AlgebraicNumber.roots_of(f)
        outside = [a for a in roots if a in h.roots.outside]
        if not outside:
            continue
        if len(outside) == len(roots):
            coeffs = f.all_coeffs()
            sp *= abs(Fraction(int(coeffs[-1]), int(coeffs[0]))) ** _mult
        else:
            exact = False
    if exact and lam.as_fraction() is not None:
        if lam.as_fraction() != c * sp:
            raise InvariantViolation(f"Lambda = {lam.as_fraction()} but c sp = {c * sp}")
        return
    lo, hi = lam.enclosure(nm.START_BITS).re_lo, lam.enclosure(nm.START_BITS).re_hi
    prod_lo = prod_hi = c
    for a in h.roots.outside:
        a2lo, a2hi = a.abs2_bounds()
        prod_lo *= Fraction(math.isqrt(a2lo.numerator * a2lo.denominator), a2lo.denominator) if a2lo > 0 else 0
        prod_hi *= Fraction(math.isqrt(a2hi.numerator * a2hi.denominator) + 1, a2hi.denominator)
    if prod_hi < lo or prod_lo > hi:
        raise InvariantViolation("Lambda and c sp(sigma) enclosures are disjoint")


# ---------------------------------------------------------------------------
# enclosures


@dataclass(frozen=True)
class Enclosure:
    """A certified real interval [lo, hi] with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    @classmethod
    def of_iv(cls, v) -> "Enclosure":
        return cls(nm._raw_to_fraction(v._mpi_[0]), nm._raw_to_fraction(v._mpi_[1]))

    @classmethod
    def exact(cls, q: Fraction | int) -> "Enclosure":
        return cls(Fraction(q), Fraction(q))

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: Fraction | int) -> bool:
        return self.lo <= x <= self.hi

    def render(self, digits: int = 20) -> tuple[str, str]:
        """Decimal strings rounded outward, so the printed interval still contains the value."""
        return _decimal(self.lo, digits, decimal.ROUND_FLOOR), _decimal(self.hi, digits, decimal.ROUND_CEILING)

    def __str__(self) -> str:
        lo, hi = self.render()
        return f"[{lo}, {hi}]"


def _decimal(q: Fraction, digits: int, rounding: str) -> str:
    ctx = decimal.Context(prec=digits, rounding=rounding)
    v = ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator))
    return format(v, "f") if v.adjusted() < digits else str(v)


def _iv(q: Fraction):
    return mpmath.iv.mpf(q.numerator) / q.denominator


def _lambda_iv(lam: AlgebraicNumber, bits: int):
    r = lam.enclosure(bits)
    lo, hi = _iv(r.re_lo), _iv(r.re_hi)
    return mpmath.iv.mpf([lo.a, hi.b])


class _IvPrecision:
    def __init__(self, bits: int) -> None:
        self.bits = bits

    def __enter__(self) -> None:
        self.saved = mpmath.iv.prec
        mpmath.iv.prec = self.bits

    def __exit__(self, *exc) -> None:
        mpmath.iv.prec = self.saved


# ---------------------------------------------------------------------------
# orbit counts


def prime_orbit_counts(fp: FadParams, N_max: int) -> dict[int, int]:
    """P_ell = (1/ell) sum_{n | ell} mu(ell/n) f_n, checked to be a nonnegative integer."""
    f = {n: fad_eval(fp, n) for n in range(1, N_max + 1)}
    out = {}
    for ell in range(1, N_max + 1):
        total = sum(nm.mobius(ell // n) * f[n] for n in nm.divisors(ell))
        P = total / ell
        if P.denominator != 1 or P < 0:
            raise NotRealizable(f"P_{ell} = {nm.rational_str(P)} is not a nonnegative integer")
        out[ell] = int(P)
    return out


@dataclass(frozen=True)
class OrbitReport:
    P: dict[int, int]
    pi: dict[int, int]
    Pi: dict[int, Enclosure]
    Lambda: AlgebraicNumber
    bits: int

    @property
    def N_max(self) -> int:
        return max(self.P)


def orbit_counts(fp: FadParams, N_max: int, bits: int = nm.START_BITS) -> OrbitReport:
    """Prime orbit counts, their partial sums pi_f(N), and enclosures of Pi_f(N) = N pi_f(N) / Lambda^N."""
    if N_max < 1:
        raise ArgumentError("N_max must be positive")
    P = prime_orbit_counts(fp, N_max)
    pi: dict[int, int] = {}
    total = 0
    for ell in range(1, N_max + 1):
        total += P[ell]
        pi[ell] = total
    lam = dominant_data(fp.handle, fp.c).Lambda
    Pi: dict[int, Enclosure] = {}
    with _IvPrecision(bits + 32):
        L = _lambda_iv(lam, bits)
        power = mpmath.iv.mpf(1)
        for N in range(1, N_max + 1):
            power = power * L
            Pi[N] = Enclosure.of_iv(mpmath.iv.mpf(N * pi[N]) / power)
    return OrbitReport(P, pi, Pi, lam, bits)


# ---------------------------------------------------------------------------
# error exponent


@dataclass(frozen=True)
class ThetaResult:
    theta_prime: Fraction | Enclosure
    theta: Fraction | Enclosure

    @property
    def exact(self) -> bool:
        return isinstance(self.theta_prime, Fraction) and isinstance(self.theta, Fraction)


def aggregated_expansion(fp: FadParams) -> list[tuple[Poly, int]]:
    """Eigenvalue classes of |d_n| c^n = sum m_j lambda_j^n, as (irreducible factor, total multiplicity).

    Each root of a listed factor is a lambda_j (up to the common factor
    (-1)^eps2 c) carrying the stated multiplicity; equal roots are merged
    exactly because they share an irreducible factor.
    """
    A = fp.A
    s = len(A)
    e1, _ = _sign_exponents(A)
    acc: dict[tuple[int, ...], int] = {}
    polys: dict[tuple[int, ...], Poly] = {}
    for k in range(s + 1):
        block = nm.exterior_power(A, k) if k else ((1,),)
        sign = (-1) ** (e1 + s - k)
        for g, mult in nm.factor_int_poly(nm.charpoly(block)):
            g = nm.normalize_poly(g)
            key = tuple(int(x) for x in g.all_coeffs())
            acc[key] = acc.get(key, 0) + sign * mult
            polys[key] = g
    return [(polys[k], m) for k, m in acc.items() if m]


def _abs2_exact(mu: AlgebraicNumber) -> Fraction | None:
    """|mu|^2 when it is rational."""
    q = mu.as_fraction()
    if q is not None:
        return q * q
    if mu.degree == 2 and not mu.is_real:
        a, _, c = mu.minpoly
        return Fraction(c, a)
    return None


def _log_ratio_exact(x: Fraction, L: Fraction) -> Fraction | None:
    """a/b with x^b = L^a for positive rationals, if it exists."""
    if x == 1:
        return Fraction(0)
    fx = sympy.factorrat(sympy.Rational(x.numerator, x.denominator))
    fl = sympy.factorrat(sympy.Rational(L.numerator, L.denominator))
    if set(fx) != set(fl):
        return None
    ratios = {Fraction(int(fx[p]), int(fl[p])) for p in fl}
    return ratios.pop() if len(ratios) == 1 else None


def theta(fp: FadParams, bits: int = nm.START_BITS) -> ThetaResult:
    """Theta' from aggregated negative-multiplicity terms strictly below Lambda, and Theta = max(1/2, Theta')."""
    dom = dominant_data(fp.handle, fp.c)
    lam = dom.Lambda
    L2_exact = lam.as_fraction() ** 2 if lam.as_fraction() is not None else None
    if L2_exact == 1 or (L2_exact is None and lam.approx().real <= 1):
        raise TrivialDynamics("zero entropy")
    c2 = fp.c * fp.c
    candidates: list[Fraction | Enclosure] = []
    with _IvPrecision(bits + 32):
        L = _lambda_iv(lam, bits)
        logL = mpmath.iv.log(L)
        for g, m in aggregated_expansion(fp):
            if m >= 0:
                continue
            for mu in AlgebraicNumber.roots_of(g):
                lo, hi = mu.abs2_bounds(bits)
                x_lo, x_hi = c2 * lo, c2 * hi
                Llo = Fraction(lam.enclosure(bits).re_lo)
                Lhi = Fraction(lam.enclosure(bits).re_hi)
                if x_lo >= Lhi * Lhi:
                    continue  # at or above Lambda
                if x_hi >= Llo * Llo:
                    # not separated from Lambda: decide exactly when possible, else treat as dominant
                    a2 = _abs2_exact(mu)
                    if a2 is None or L2_exact is None or c2 * a2 >= L2_exact:
                        continue
                a2 = _abs2_exact(mu)
                if a2 is not None and L2_exact is not None:
                    r = _log_ratio_exact(c2 * a2, L2_exact)
                    if r is not None:
                        candidates.append(r)
                        continue
                if a2 is not None and c2 * a2 == 1:
                    candidates.append(Fraction(0))
                    continue
                if fp.c == 1 and mu in fp.handle.roots.on:
                    candidates.append(Fraction(0))
                    continue
                xv = mpmath.iv.mpf([_iv(x_lo).a, _iv(x_hi).b])
                candidates.append(Enclosure.of_iv(mpmath.iv.log(xv) / (2 * logL)))
    if not candidates:
        tp: Fraction | Enclosure = Fraction(0)
    else:
        tp = max(candidates, key=lambda v: v if isinstance(v, Fraction) else v.hi)
    if isinstance(tp, Fraction):
        th: Fraction | Enclosure = max(Fraction(1, 2), tp)
    elif tp.hi < Fraction(1, 2):
        th = Fraction(1, 2)
    else:
        th = tp
    return ThetaResult(tp, th)


# ---------------------------------------------------------------------------
# main term of the orbit counting asymptotics


def _distortion(fp: FadParams, ell: int) -> Fraction:
    value = fp.r(ell)
    for d in fp.primes:
        e = d.exponent(ell)
        if e.denominator != 1:
            raise IrrationalValue(f"p-power exponent {e} at p={d.p}")
        value *= Fraction(d.p) ** int(e)
    return value


@dataclass(frozen=True)
class MainTerm:
    N: int
    pi: int
    main: Enclosure
    residual: Enclosure


def pnt_main_term(fp: FadParams, N: int, bits: int = nm.START_BITS) -> MainTerm:
    """M_f(N) = sum_{ell <= N} u_ell r_ell prod_p(...) Lambda^ell / ell, and pi_f(N) - M_f(N)."""
    dom = dominant_data(fp.handle, fp.c)
    _require_entropy(dom)
    P = prime_orbit_counts(fp, N)
    pi = sum(P.values())
    with _IvPrecision(bits + 2 * N + 32):
        L = _lambda_iv(dom.Lambda, bits + N)
        total = mpmath.iv.mpf(0)
        power = mpmath.iv.mpf(1)
        for ell in range(1, N + 1):
            power = power * L
            if dom.hyperbolic:
                u = mpmath.iv.mpf(1)
            else:
                lo, hi = u_n_enclosure(fp.handle, ell, bits)
                u = mpmath.iv.mpf([_iv(lo).a, _iv(hi).b])
            total += u * _iv(_distortion(fp, ell)) * power / ell
        main = Enclosure.of_iv(total)
        resid = Enclosure.of_iv(mpmath.iv.mpf(pi) - total)
    return MainTerm(N, pi, main, resid)


def _require_entropy(dom: DominantData) -> None:
    q = dom.Lambda.as_fraction()
    if (q is not None and q <= 1) or (q is None and dom.Lambda.approx().real <= 1):
        raise TrivialDynamics("zero entropy: Lambda = 1")


# ---------------------------------------------------------------------------
# accumulation set of Pi_f(N)


@dataclass(frozen=True)
class AccumulationClass:
    kind: str  # Finite, FiniteUnionCantor, ContainsInterval, UnknownMixedCase
    limits: tuple[Fraction | Enclosure, ...] = ()  # L_j for N = j mod period, j = 0..period-1, when Finite

    @property
    def distinct(self) -> tuple[Fraction | Enclosure, ...]:
        out: list = []
        for v in self.limits:
            if v not in out:
                out.append(v)
        return tuple(out)


def limit_points(fp: FadParams, dom: DominantData, bits: int = nm.START_BITS) -> tuple[Fraction | Enclosure, ...]:
    """L_j = (1 - Lambda^-w)^-1 sum_{i<w} r_{j-i} Lambda^-i for j = 0..w-1, w the period of r."""
    w = fp.r.period
    lam = dom.Lambda.as_fraction()
    out: list[Fraction | Enclosure] = []
    for j in range(w):
        if lam is not None:
            val = sum((fp.r((j - i) % w or w) * lam**-i for i in range(w)), Fraction(0))
            out.append(val / (1 - lam**-w))
        else:
            with _IvPrecision(bits + 32):
                L = _lambda_iv(dom.Lambda, bits)
                acc = mpmath.iv.mpf(0)
                for i in range(w):
                    acc += _iv(fp.r((j - i) % w or w)) / L**i
                out.append(Enclosure.of_iv(acc / (1 - 1 / L**w)))
    return tuple(out)


def classify_accumulation(fp: FadParams) -> AccumulationClass:
    dom = dominant_data(fp.handle, fp.c)
    _require_entropy(dom)
    if not dom.hyperbolic:
        return AccumulationClass("ContainsInterval")
    if fp.all_s_t_zero:
        return AccumulationClass("Finite", limit_points(fp, dom))
    if len(fp.primes) == 1 and fp.primes[0].t.is_zero() and not fp.primes[0].s.is_zero():
        return AccumulationClass("FiniteUnionCantor")
    return AccumulationClass("UnknownMixedCase")


# ---------------------------------------------------------------------------
# detector group


@dataclass(frozen=True)
class DetectorDescriptor:
    """T^t x Z/sZ fibred over Z/s0Z with prod_{p in S} Z_p."""

    varpi: int
    delta: int
    t: int
    t_exact: bool
    s: int
    s0: int
    S: tuple[int, ...]

    @property
    def trivial(self) -> bool:
        return self.t == 0 and self.s == 1 and not self.S

    def __str__(self) -> str:
        parts = []
        if self.s > 1:
            parts.append(f"Z/{self.s}Z")
        if self.t:
            parts.append("T" if self.t == 1 else f"T^{self.t}")
        parts += [f"Z_{p}" for p in self.S]
        body = " x ".join(parts) or "0"
        if self.s0 > 1:
            body += f" (fibred over Z/{self.s0}Z)"
        return body if self.t_exact else body + " (torus rank is an upper bound)"


RELATION_HEIGHT = 6
RELATION_DPS = 60


def _rank(vectors: Sequence[Sequence[int]]) -> int:
    if not vectors:
        return 0
    return sympy.Matrix([list(v) for v in vectors]).rank()


def _verify_torsion(dom: DominantData, v: Sequence[int], order: int) -> bool:
    """Exact check that prod xi_j^(order * v_j) = 1."""
    expr = sympy.Integer(1)
    for g, e in zip(dom.generators, v):
        if e:
            expr *= sympy.CRootOf(nm.int_poly(g.root.minpoly).as_expr(), g.root.index) ** (order * e)
    try:
        mp = sympy.minimal_polynomial(expr, nm.X)
    except (NotImplementedError, ValueError):
        return False
    return sympy.expand(mp - (nm.X - 1)) == 0


def _relations(dom: DominantData, height: int) -> list[tuple[tuple[int, ...], int]]:
    """Verified (v, K) with prod xi^v a primitive K-th root of unity, v up to sign and height."""
    G = len(dom.generators)
    if G < 2:
        return []  # a single unit-circle eigenvalue is never torsion for confined A
    with mpmath.workdps(RELATION_DPS):
        angles = [g.angle(RELATION_DPS) / (2 * mpmath.pi) for g in dom.generators]
        found = []
        for v in itertools.product(range(-height, height + 1), repeat=G):
            if not any(v) or next(x for x in v if x) < 0:
                continue
            x = sum(e * a for e, a in zip(v, angles))
            frac = Fraction(str(mpmath.nstr(x - mpmath.floor(x), 50))).limit_denominator(1000)
            if abs(x - mpmath.floor(x) - mpmath.mpf(frac.numerator) / frac.denominator) > mpmath.mpf(10) ** -40:
                continue
            K = frac.denominator
            if _verify_torsion(dom, v, K):
                found.append((tuple(v), K))
    return found


def detector_structure(fp: FadParams, height: int = RELATION_HEIGHT) -> DetectorDescriptor:
    dom = dominant_data(fp.handle, fp.c)
    _require_entropy(dom)
    varpi = fp.period
    S = fp.S
    G = len(dom.generators)
    rels = _relations(dom, height)
    R = [v for v, _ in rels]
    lattice = [e.exponents for e in dom.etas if any(e.exponents)]
    rank_L = _rank(lattice)
    t_upper = _rank(lattice + R) - _rank(R)
    # each xi_j alone is not torsion, so R has rank at most G - 1; L contains every unit vector
    t_lower = max(rank_L - max(G - 1, 0), 1 if G else 0)
    s = varpi
    for _, K in rels:
        s = math.lcm(s, K)
    s0 = 1
    for p in S:
        s0 *= p ** nm.padic_ord(s, p)
    return DetectorDescriptor(varpi, dom.delta, t_upper, t_upper == t_lower, s, s0, S)


def pnt_limit(fp: FadParams) -> Fraction | AlgebraicNumber | None:
    """r_1 Lambda / (Lambda - 1) when the detector group is trivial, else None."""
    det = detector_structure(fp)
    if not det.trivial:
        return None
    dom = dominant_data(fp.handle, fp.c)
    r1 = fp.r(1)
    lam = dom.Lambda.as_fraction()
    if lam is not None:
        return r1 * lam / (lam - 1)
    # x = r1 L / (L - 1)  <=>  L = x / (x - r1)
    g = dom.Lambda.poly
    d = g.degree()
    x = nm.X
    expr = sum(
        sympy.Integer(int(a)) * x ** (d - i) * (x - sympy.Rational(r1.numerator, r1.denominator)) ** i
        for i, a in enumerate(g.all_coeffs())
    )
    P = Poly(sympy.expand(expr * r1.denominator**d), x, domain="QQ")
    P = Poly(P.clear_denoms()[1], x, domain="ZZ")
    enc = dom.Lambda.enclosure(nm.START_BITS)
    lo = r1 * enc.re_hi / (enc.re_hi - 1)
    hi = r1 * enc.re_lo / (enc.re_lo - 1)
    for f, _ in nm.factor_int_poly(P):
        for root in nm.real_roots(f):
            e = root.enclosure(nm.START_BITS)
            if e.re_hi >= lo and e.re_lo <= hi:
                return root
    raise ArgumentError("could not locate the limit")
