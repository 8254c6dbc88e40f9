"""Gcd sequences, sequences of multiplicative type and their dominant roots."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Mapping

import mpmath
import sympy
from sympy import Poly

from . import numeric as nm
from .errors import ArgumentError, PrecisionExhausted
from .numeric import AlgebraicNumber, IntMatrix, X

# ---------------------------------------------------------------------------
# gcd sequences


def _minimal_period(period: int, vals: Mapping[int, Fraction]) -> int:
    divs = nm.divisors(period)
    for e in divs:
        if all(vals[d] == vals[math.gcd(d, e)] for d in divs):
            return e
    return period


@dataclass(frozen=True)
class GcdSeq:
    """A sequence with a_n = a_{gcd(n, period)}, stored on the divisors of the period.

    Construction always reduces to the minimal period.
    """

    period: int
    values: tuple[tuple[int, Fraction], ...]

    def __post_init__(self) -> None:
        if self.period < 1:
            raise ArgumentError("period must be positive")
        vals = {int(d): Fraction(v) for d, v in self.values}
        if sorted(vals) != nm.divisors(self.period):
            raise ArgumentError(f"values must be given on exactly the divisors of {self.period}")
        period = _minimal_period(self.period, vals)
        object.__setattr__(self, "period", period)
        object.__setattr__(
            self, "values", tuple((d, vals[d]) for d in nm.divisors(period))
        )

    @classmethod
    def from_map(cls, period: int, values: Mapping[int, Fraction | int]) -> "GcdSeq":
        return cls(period, tuple(values.items()))

    @classmethod
    def constant(cls, v: Fraction | int) -> "GcdSeq":
        return cls(1, ((1, Fraction(v)),))

    @classmethod
    def from_function(cls, period: int, f: Callable[[int], Fraction | int]) -> "GcdSeq":
        return cls(period, tuple((d, Fraction(f(d))) for d in nm.divisors(period)))

    @classmethod
    def from_divisor_sums(cls, d: Mapping[int, Fraction | int]) -> "GcdSeq":
        """a_n = sum of d_j over j in the support with j | n."""
        period = nm.lcm_all(d) if d else 1
        return cls.from_function(
            period, lambda n: sum((Fraction(v) for j, v in d.items() if n % j == 0), Fraction(0))
        )

    @property
    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.values)

    def __call__(self, n: int) -> Fraction:
        if n < 1:
            raise ArgumentError("gcd sequences are indexed by n >= 1")
        return self.as_dict[math.gcd(n, self.period)]

    def divisor_sums(self) -> dict[int, Fraction]:
        """Inverse of :meth:`from_divisor_sums`, zero entries omitted."""
        vals = self.as_dict
        out = {}
        for j in nm.divisors(self.period):
            s = sum((nm.mobius(j // k) * vals[k] for k in nm.divisors(j)), Fraction(0))
            if s:
                out[j] = s
        return out

    def _combine(self, other: "GcdSeq", op: Callable[[Fraction, Fraction], Fraction]) -> "GcdSeq":
        period = nm.lcm_all([self.period, other.period])
        return GcdSeq.from_function(period, lambda n: op(self(n), other(n)))

    def __add__(self, other: "GcdSeq") -> "GcdSeq":
        return self._combine(other, lambda a, b: a + b)

    def __mul__(self, other: "GcdSeq") -> "GcdSeq":
        return self._combine(other, lambda a, b: a * b)

    def map(self, f: Callable[[Fraction], Fraction]) -> "GcdSeq":
        return GcdSeq.from_function(self.period, lambda n: f(self(n)))

    def is_zero(self) -> bool:
        return all(v == 0 for _, v in self.values)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for _, v in self.values)

    def __str__(self) -> str:
        body = ", ".join(f"{d}: {nm.rational_str(v)}" for d, v in self.values)
        return f"GcdSeq(period={self.period}, {{{body}}})"


def gcd_seq_eval(seq: GcdSeq, n: int) -> Fraction:
    return seq(n)


def gcd_seq_from_divisor_sums(support: Iterable[int], d: Mapping[int, Fraction | int]) -> GcdSeq:
    return GcdSeq.from_divisor_sums({j: d[j] for j in support})


# ---------------------------------------------------------------------------
# multiplicative type


@dataclass(frozen=True)
class ExpansionBlock:
    k: int
    matrix: IntMatrix
    sign: int


@dataclass(frozen=True)
class MultTypeHandle:
    """d_n = det(A^n - 1) = sum_k (-1)^(s-k) tr((wedge^k A)^n)."""

    A: IntMatrix
    blocks: tuple[ExpansionBlock, ...]

    @property
    def size(self) -> int:
        return len(self.A)

    @cached_property
    def charpoly(self) -> Poly:
        return nm.charpoly(self.A)

    @cached_property
    def roots(self) -> nm.RootClassification:
        return nm.classify_roots(self.charpoly)

    @cached_property
    def dominant(self) -> "DominantData":
        return dominant_data(self, Fraction(1))

    def d(self, n: int) -> int:
        """det(A^n - 1) by direct evaluation."""
        return nm.det_power_minus_one(self.A, n)

    def d_expansion(self, n: int) -> int:
        return sum(b.sign * nm.trace(nm.matpow(b.matrix, n)) for b in self.blocks)

    def sign(self, n: int) -> int:
        return mult_type_sign(self, n)

    def abs_d(self, n: int) -> int:
        return abs(self.d(n))


def mult_type_build(A: Iterable[Iterable[int]]) -> MultTypeHandle:
    A = nm.as_matrix(A)
    s = nm._square_size(A)
    nm.check_confined(A)
    blocks = tuple(
        ExpansionBlock(k, nm.exterior_power(A, k), (-1) ** (s - k)) for k in range(s + 1)
    )
    return MultTypeHandle(A, blocks)


def mult_type_sign(h: MultTypeHandle, n: int) -> int:
    r = h.roots
    return (-1) ** (r.eps1 + r.eps2 * n)


# ---------------------------------------------------------------------------
# dominant roots


@dataclass(frozen=True)
class Eta:
    """A dominant root divided by Lambda, as an exponent vector over the unit-circle generators."""

    exponents: tuple[int, ...]
    multiplicity: int


@dataclass(frozen=True)
class UnitCircleGenerator:
    """One eigenvalue from each conjugate pair on the unit circle (positive imaginary part)."""

    root: AlgebraicNumber
    trace: AlgebraicNumber  # xi + 1/xi, a real number in (-2, 2)
    multiplicity: int

    def angle(self, dps: int = 50) -> mpmath.mpf:
        with mpmath.workdps(dps + 10):
            y = self.trace.approx(dps + 10).real
            return mpmath.acos(y / 2)


@dataclass(frozen=True)
class DominantData:
    c: Fraction
    Lambda: AlgebraicNumber
    k_out: int
    generators: tuple[UnitCircleGenerator, ...]
    etas: tuple[Eta, ...]
    eps1: int
    eps2: int
    unit_circle_factor: Poly

    @property
    def delta(self) -> int:
        return len(self.etas)

    @property
    def hyperbolic(self) -> bool:
        return not self.generators

    @property
    def m(self) -> int:
        return sum(g.multiplicity for g in self.generators)

    def thetas(self, dps: int = 50) -> list[mpmath.mpf]:
        out = []
        for g in self.generators:
            out += [g.angle(dps)] * g.multiplicity
        return out

    def Lambda_approx(self, dps: int = 50) -> mpmath.mpf:
        return self.Lambda.approx(dps).real

    def entropy(self, bits: int = nm.START_BITS) -> mpmath.mpi:
        r = self.Lambda.enclosure(bits)
        iv = mpmath.iv
        iv.prec = bits + 16
        lo = iv.mpf(r.re_lo.numerator) / r.re_lo.denominator
        hi = iv.mpf(r.re_hi.numerator) / r.re_hi.denominator
        return iv.log(iv.mpf([lo.a, hi.b]))

    def Lambda_fraction(self) -> Fraction | None:
        return self.Lambda.as_fraction()

    def eta_value(self, eta: Eta, dps: int = 50) -> mpmath.mpc:
        with mpmath.workdps(dps):
            z = mpmath.mpc(1)
            for g, e in zip(self.generators, eta.exponents):
                z *= g.root.approx(dps) ** e
            return z


def _unit_generators(roots: nm.RootClassification) -> tuple[UnitCircleGenerator, ...]:
    counts: dict[AlgebraicNumber, int] = {}
    for a in roots.on:
        if a.approx().imag > 0:
            counts[a] = counts.get(a, 0) + 1
    gens = []
    for a, mult in sorted(counts.items()):
        trace = _trace_value(a)
        gens.append(UnitCircleGenerator(a, trace, mult))
    return tuple(gens)


def _trace_value(a: AlgebraicNumber) -> AlgebraicNumber:
    """xi + 1/xi for xi on the unit circle, designated as a real root of the trace polynomial."""
    f = a.poly
    if nm.reciprocal(f) != f:
        f = -f
    r = nm.trace_polynomial(f)
    z = a.enclosure(nm.START_BITS)
    lo = 2 * z.re_lo
    hi = 2 * z.re_hi
    return nm.locate_real_root(r, lo - Fraction(1, 2**100), hi + Fraction(1, 2**100))


def _eta_expansion(gens: tuple[UnitCircleGenerator, ...]) -> tuple[Eta, ...]:
    """Expand prod_j (2 - w_j - 1/w_j)^mu_j into monomials.

    The coefficient of w^e in (2 - w - 1/w)^mu is (-1)^e * C(2mu, mu + e).
    """
    ranges = [range(-g.multiplicity, g.multiplicity + 1) for g in gens]
    out = []
    for exps in itertools.product(*ranges):
        mult = 1
        for g, e in zip(gens, exps):
            mult *= (-1) ** abs(e) * math.comb(2 * g.multiplicity, g.multiplicity + e)
        out.append(Eta(tuple(exps), mult))
    out.sort(key=lambda t: (tuple(abs(e) for e in t.exponents), t.exponents))
    return tuple(out)


def _max_abs_real_root(p: Poly, negative: bool) -> AlgebraicNumber:
    roots = nm.real_roots(p)
    if not roots:
        raise ArgumentError("expected a real root")
    return nm.negate(roots[0]) if negative else roots[-1]


def dominant_data(h: MultTypeHandle, c: Fraction | int) -> DominantData:
    """Lambda = c * prod_{|xi|>1} |xi|, the unit-circle structure, and the dominant-term expansion."""
    c = Fraction(c)
    if c <= 0:
        raise ArgumentError("c must be positive")
    r = h.roots
    k_out = len(r.outside)
    if k_out == 0:
        base = AlgebraicNumber.rational(1)
    else:
        block = h.blocks[k_out].matrix
        base = _max_abs_real_root(nm.charpoly(block), negative=bool(r.eps2 % 2))
    Lambda = nm.scale_real(base, c)
    gens = _unit_generators(r)
    ucf = Poly(1, X, domain="ZZ")
    for f, e in r.factors:
        if any(a.minpoly == tuple(int(x) for x in f.all_coeffs()) for a in r.on):
            ucf = ucf * f**e
    return DominantData(c, Lambda, k_out, gens, _eta_expansion(gens), r.eps1, r.eps2, ucf)


# ---------------------------------------------------------------------------
# the oscillating factor u_n


@lru_cache(maxsize=1024)
def _u_factor_poly(trace_minpoly: tuple[int, ...], n: int) -> Poly:
    """Integer polynomial vanishing at 2 - V_n(y) for every root y of the trace polynomial."""
    r = nm.int_poly(trace_minpoly)
    v = nm.dickson_poly(n).rem(r)
    y = sympy.Symbol("y")
    expr = X - 2 + v.as_expr().subs(X, y)
    res = sympy.resultant(r.as_expr().subs(X, y), expr, y)
    return Poly(res, X, domain="ZZ")


def _product_poly(f: Poly, g: Poly) -> Poly:
    """Polynomial whose roots are the products of roots of f and g."""
    y = sympy.Symbol("y")
    dg = g.degree()
    gx = sympy.expand(y**dg * g.as_expr().subs(X, X / y))
    res = sympy.resultant(f.as_expr().subs(X, y), gx, y)
    return Poly(res, X, domain="ZZ")


def u_n_trig(h: MultTypeHandle, n: int, dps: int = 50) -> mpmath.mpf:
    """4^m prod sin^2(n theta_j / 2), the trigonometric route."""
    d = h.dominant
    with mpmath.workdps(dps):
        out = mpmath.mpf(1)
        for theta in d.thetas(dps):
            out *= 4 * mpmath.sin(n * theta / 2) ** 2
        return out


def _iv_from(lo: Fraction, hi: Fraction):
    iv = mpmath.iv
    a = iv.mpf(lo.numerator) / lo.denominator
    b = iv.mpf(hi.numerator) / hi.denominator
    return iv.mpf([a.a, b.b])


def _u_enclosure(h: MultTypeHandle, n: int, bits: int) -> tuple[Fraction, Fraction]:
    """Certified bounds for u_n from the trace values, through the Dickson recurrence."""
    iv = mpmath.iv
    iv.prec = bits + 2 * n + 32
    val = iv.mpf(1)
    for g in h.dominant.generators:
        rect = g.trace.enclosure(bits + 2 * n)
        y = _iv_from(rect.re_lo, rect.re_hi)
        v0, v1 = iv.mpf(2), y
        for _ in range(n - 1):
            v0, v1 = v1, y * v1 - v0
        w = 2 - v1
        val = val * w**g.multiplicity
    lo = nm._raw_to_fraction(val._mpi_[0])
    hi = nm._raw_to_fraction(val._mpi_[1])
    return lo, hi


def u_n_enclosure(h: MultTypeHandle, n: int, bits: int = nm.START_BITS) -> tuple[Fraction, Fraction]:
    """Rational bounds lo <= u_n <= hi."""
    if h.dominant.hyperbolic:
        return Fraction(1), Fraction(1)
    return _u_enclosure(h, abs(n), bits)


def u_n(h: MultTypeHandle, n: int) -> AlgebraicNumber:
    """prod over unit-circle eigenvalues of (xi^n - 1), an exact positive real algebraic integer.

    u_n = prod_j (2 - xi_j^n - xi_j^-n) over conjugate pairs, so u_{-n} = u_n.
    """
    d = h.dominant
    if d.hyperbolic:
        return AlgebraicNumber.rational(1)
    if n == 0:
        return AlgebraicNumber.rational(0)
    n = abs(n)
    poly = Poly(1, X, domain="ZZ")
    first = True
    for g in d.generators:
        f = _u_factor_poly(g.trace.minpoly, n)
        for _ in range(g.multiplicity):
            poly = f if first else _product_poly(poly, f)
            first = False
    poly = Poly(sympy.sqf_part(poly.as_expr()), X, domain="ZZ")
    bits = nm.START_BITS
    while bits <= nm.MAX_BITS:
        try:
            lo, hi = _u_enclosure(h, n, bits)
            return nm.locate_real_root(poly, lo, hi)
        except PrecisionExhausted:
            bits *= 2
    raise PrecisionExhausted("could not pin down u_n")
