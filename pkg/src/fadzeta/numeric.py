"""Exact arithmetic substrate.

Integer matrices are plain tuples of tuples of Python ints. Polynomials are
sympy ``Poly`` objects over ZZ in the symbol :data:`X`. Algebraic numbers are
a thin wrapper around ``sympy.CRootOf``: an irreducible primitive minimal
polynomial together with the canonical root index, which makes equality exact
and lets enclosures be refined on demand.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import mpmath
import sympy
from sympy import Poly

from .errors import ArgumentError, InfiniteValuation, NotConfined, PrecisionExhausted

X = sympy.Symbol("x")

IntMatrix = tuple[tuple[int, ...], ...]

START_BITS = 128
MAX_BITS = 4096


# ---------------------------------------------------------------------------
# p-adic valuations


@lru_cache(maxsize=4096)
def is_prime(p: int) -> bool:
    return bool(sympy.isprime(p))


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ArgumentError(f"{p!r} is not a prime")


def padic_ord(n: int | Fraction, p: int) -> int:
    """Exponent of ``p`` in ``n``. Rationals are allowed (the result may be negative)."""
    _check_prime(p)
    if n == 0:
        raise InfiniteValuation(f"ord_{p}(0) is infinite")
    if isinstance(n, Fraction):
        return padic_ord(n.numerator, p) - padic_ord(n.denominator, p)
    n = abs(int(n))
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def padic_abs(n: int | Fraction, p: int) -> Fraction:
    """|n|_p normalised so that |p|_p = 1/p; |0|_p = 0."""
    if n == 0:
        return Fraction(0)
    return Fraction(p) ** (-padic_ord(n, p))


@dataclass(frozen=True)
class PadicValue:
    prime: int
    ord: int | None  # None encodes +infinity

    @classmethod
    def of(cls, n: int | Fraction, p: int) -> "PadicValue":
        _check_prime(p)
        return cls(p, None if n == 0 else padic_ord(n, p))

    @property
    def abs(self) -> Fraction:
        if self.ord is None:
            return Fraction(0)
        return Fraction(self.prime) ** (-self.ord)


def strip_prime(n: int, p: int) -> int:
    """|n| with every factor p removed."""
    n = abs(n)
    if n == 0:
        raise InfiniteValuation("cannot strip a prime from 0")
    while n % p == 0:
        n //= p
    return n


# ---------------------------------------------------------------------------
# integer matrices


def as_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    m = tuple(tuple(int(v) for v in row) for row in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise ArgumentError("ragged matrix")
    return m


def shape(m: IntMatrix) -> tuple[int, int]:
    return (len(m), len(m[0]) if m else 0)


def _square_size(m: IntMatrix) -> int:
    r, c = shape(m)
    if r != c:
        raise ArgumentError(f"matrix is {r}x{c}, not square")
    return r


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if not a or not b:
        return tuple(() for _ in a)
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def matpow(a: IntMatrix, n: int) -> IntMatrix:
    if n < 0:
        raise ArgumentError("negative matrix power")
    result = identity(len(a))
    base = a
    while n:
        if n & 1:
            result = matmul(result, base)
        n >>= 1
        if n:
            base = matmul(base, base)
    return result


def matsub(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def scalar_matrix(c: int, n: int) -> IntMatrix:
    return tuple(tuple(c if i == j else 0 for j in range(n)) for i in range(n))


def block_diag(*blocks: IntMatrix) -> IntMatrix:
    size = sum(len(b) for b in blocks)
    rows: list[tuple[int, ...]] = []
    offset = 0
    for b in blocks:
        k = len(b)
        for row in b:
            rows.append((0,) * offset + tuple(row) + (0,) * (size - offset - k))
        offset += k
    return tuple(rows)


def trace(a: IntMatrix) -> int:
    return sum(a[i][i] for i in range(len(a)))


def det(m: IntMatrix) -> int:
    """Determinant by Bareiss fraction-free elimination. The 0x0 matrix has determinant 1."""
    n = _square_size(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def det_power_minus_one(m: IntMatrix, n: int) -> int:
    """det(M^n - I) evaluated directly."""
    size = _square_size(m)
    return det(matsub(matpow(m, n), identity(size)))


def charpoly_coeffs(m: IntMatrix) -> list[int]:
    """Coefficients (highest degree first) of det(xI - M), via Berkowitz."""
    n = _square_size(m)
    if n == 0:
        return [1]
    coeffs = [1, -m[0][0]]
    for r in range(1, n):
        row = m[r][:r]
        v = [m[i][r] for i in range(r)]
        toeplitz = [1, -m[r][r]]
        for _ in range(r):
            toeplitz.append(-sum(x * y for x, y in zip(row, v)))
            v = [sum(m[i][j] * v[j] for j in range(r)) for i in range(r)]
        coeffs = [
            sum(toeplitz[i - j] * coeffs[j] for j in range(len(coeffs)) if 0 <= i - j < len(toeplitz))
            for i in range(r + 2)
        ]
    return coeffs


def charpoly(m: IntMatrix) -> Poly:
    return Poly(charpoly_coeffs(m), X, domain="ZZ")


def exterior_power(m: IntMatrix, k: int) -> IntMatrix:
    """Matrix of the k-th exterior power in the lexicographic basis of k-subsets."""
    n = _square_size(m)
    if not 0 <= k <= n:
        raise ArgumentError(f"exterior power {k} out of range 0..{n}")
    subsets = list(itertools.combinations(range(n), k))
    return tuple(
        tuple(det(tuple(tuple(m[i][j] for j in cols) for i in rows)) for cols in subsets)
        for rows in subsets
    )


@dataclass(frozen=True)
class SmithFormZ:
    diag: tuple[int, ...]
    u: IntMatrix
    v: IntMatrix


def smith_form_Z(m: IntMatrix) -> SmithFormZ:
    """Smith normal form with unimodular transforms, u*M*v = diag.

    Pivot: the nonzero entry of least absolute value in the remaining block,
    ties broken by row-major position.
    """
    rows, cols = shape(m)
    a = [list(r) for r in m]
    u = [list(r) for r in identity(rows)]
    v = [list(r) for r in identity(cols)]

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, q: int) -> None:
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst: int, src: int, q: int) -> None:
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            piv = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // piv))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // piv))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < rows and t < cols and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    diag = tuple(a[i][i] for i in range(min(rows, cols)))
    return SmithFormZ(diag, as_matrix(u), as_matrix(v))


# ---------------------------------------------------------------------------
# integer polynomials


def int_poly(coeffs: Sequence[int]) -> Poly:
    return Poly(list(coeffs), X, domain="ZZ")


def normalize_poly(p: Poly) -> Poly:
    """Primitive part with positive leading coefficient."""
    p = Poly(p, X, domain="ZZ").primitive()[1]
    if p.LC() < 0:
        p = -p
    return p


def reciprocal(p: Poly) -> Poly:
    """x^deg * p(1/x)."""
    return int_poly(list(reversed(p.all_coeffs())))


def is_self_reciprocal(p: Poly) -> bool:
    r = reciprocal(p)
    return r == p or r == -p


def trace_polynomial(q: Poly) -> Poly:
    """For palindromic q of even degree 2d, the R of degree d with q(x) = x^d R(x + 1/x)."""
    a = q.all_coeffs()[::-1]  # a[i] is the coefficient of x^i
    deg = len(a) - 1
    if deg % 2 or reciprocal(q) != q:
        raise ArgumentError("trace polynomial needs a palindromic polynomial of even degree")
    d = deg // 2
    y = Poly(X, X, domain="ZZ")
    dickson = [Poly(2, X, domain="ZZ"), y]
    for _ in range(2, d + 1):
        dickson.append(y * dickson[-1] - dickson[-2])
    r = Poly(a[d], X, domain="ZZ")
    for k in range(1, d + 1):
        r += a[d + k] * dickson[k]
    return r


def dickson_poly(n: int) -> Poly:
    """V_n with V_n(x + 1/x) = x^n + x^-n."""
    y = Poly(X, X, domain="ZZ")
    v0, v1 = Poly(2, X, domain="ZZ"), y
    if n == 0:
        return v0
    for _ in range(n - 1):
        v0, v1 = v1, y * v1 - v0
    return v1


def factor_int_poly(p: Poly) -> list[tuple[Poly, int]]:
    """Irreducible factors (normalised) with multiplicities; constants dropped."""
    _, facs = Poly(p, X, domain="ZZ").factor_list()
    return [(normalize_poly(f), e) for f, e in facs if f.degree() > 0]


def totient_bounded_orders(s: int) -> list[int]:
    """All d >= 1 with Euler phi(d) <= s."""
    if s <= 0:
        return []
    bound = 2 * s * s + 6
    return [d for d in range(1, bound + 1) if sympy.totient(d) <= s]


def root_of_unity_orders(p: Poly) -> list[int]:
    """Orders d of roots of unity that are roots of p."""
    deg = p.degree()
    out = []
    for d in totient_bounded_orders(max(deg, 0)):
        phi_d = Poly(sympy.cyclotomic_poly(d, X), X, domain="ZZ")
        if p.gcd(phi_d).degree() > 0:
            out.append(d)
    return out


def check_confined(m: IntMatrix) -> None:
    bad = root_of_unity_orders(charpoly(m))
    if bad:
        raise NotConfined(f"matrix has an eigenvalue that is a root of unity of order {bad[0]}")


def resultant(a: Poly, b: Poly) -> int:
    return int(a.resultant(b))


def poly_compose_root_scale(p: Poly, c: Fraction) -> Poly:
    """Integer polynomial whose roots are c times the roots of p."""
    d = p.degree()
    coeffs = p.all_coeffs()  # high to low
    num, den = c.numerator, c.denominator
    # sum a_i (x/c)^(d-i) scaled by num^d
    out = [a * den ** (d - i) * num**i for i, a in enumerate(coeffs)]
    return normalize_poly(int_poly(out))


# ---------------------------------------------------------------------------
# algebraic numbers


@dataclass(frozen=True)
class Rect:
    re_lo: Fraction
    re_hi: Fraction
    im_lo: Fraction
    im_hi: Fraction

    def abs2_bounds(self) -> tuple[Fraction, Fraction]:
        def sq_range(lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
            if lo <= 0 <= hi:
                return Fraction(0), max(lo * lo, hi * hi)
            return min(lo * lo, hi * hi), max(lo * lo, hi * hi)

        a, b = sq_range(self.re_lo, self.re_hi)
        c, d = sq_range(self.im_lo, self.im_hi)
        return a + c, b + d


def _to_fraction(v) -> Fraction:
    v = sympy.Rational(v)
    return Fraction(int(v.p), int(v.q))


@lru_cache(maxsize=8192)
def _croot(minpoly: tuple[int, ...], index: int) -> tuple[Fraction, sympy.CRootOf]:
    """sympy's root object, which may come back rescaled as coeff * CRootOf(other)."""
    r = sympy.CRootOf(int_poly(minpoly), index, radicals=False)
    if isinstance(r, sympy.CRootOf):
        return Fraction(1), r
    coeff, rest = r.as_coeff_Mul()
    if not isinstance(rest, sympy.CRootOf):
        raise ArgumentError(f"unexpected root object {r}")
    return _to_fraction(coeff), rest


def _mpf_to_fraction(v: mpmath.mpf) -> Fraction:
    return _raw_to_fraction(v._mpf_)


def _raw_to_fraction(raw: tuple) -> Fraction:
    sign, man, exp, _ = raw
    if not man:
        return Fraction(0)
    val = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -val if sign else val


@lru_cache(maxsize=4096)
def _certified_disks(minpoly: tuple[int, ...], bits: int) -> tuple[tuple[mpmath.mpc, Fraction], ...]:
    """Disks that each provably contain exactly one root of a squarefree polynomial.

    Approximations come from mpmath; the radius n*|p(z_i) / (a * prod (z_i - z_j))|
    is bounded with interval arithmetic, and pairwise disjoint disks isolate
    one root each (Smith's inclusion theorem).
    """
    deg = len(minpoly) - 1
    prec = bits + 32
    with mpmath.workprec(prec):
        approx = mpmath.polyroots(list(minpoly), maxsteps=200 + bits, extraprec=2 * prec)
        if deg == 1:
            approx = [approx] if not isinstance(approx, list) else approx
    disks = []
    ctx = mpmath.iv
    ctx.prec = prec
    coeffs = [ctx.mpf(c) for c in minpoly]
    pts = [ctx.mpc(ctx.mpf(z.real), ctx.mpf(z.imag)) for z in approx]
    for i, z in enumerate(pts):
        val = ctx.mpc(0)
        for c in coeffs:
            val = val * z + c
        den = ctx.mpc(coeffs[0])
        for j, w in enumerate(pts):
            if j != i:
                den = den * (z - w)
        num_abs = ctx.sqrt(val.real**2 + val.imag**2)
        den_abs = ctx.sqrt(den.real**2 + den.imag**2)
        if den_abs.a <= 0:
            raise PrecisionExhausted("root approximations collide")
        radius = deg * num_abs / den_abs
        disks.append((approx[i], _raw_to_fraction(radius._mpi_[1])))
    exact = [(_mpf_to_fraction(c.real), _mpf_to_fraction(c.imag), r) for c, r in disks]
    for i in range(deg):
        for j in range(i + 1, deg):
            (xi, yi, ri), (xj, yj, rj) = exact[i], exact[j]
            if (xi - xj) ** 2 + (yi - yj) ** 2 <= (ri + rj) ** 2:
                raise PrecisionExhausted("inclusion disks overlap")
    return tuple(disks)


@lru_cache(maxsize=8192)
def _enclosure(minpoly: tuple[int, ...], index: int, bits: int) -> Rect:
    if len(minpoly) == 2:
        val = Fraction(-minpoly[1], minpoly[0])
        return Rect(val, val, Fraction(0), Fraction(0))
    scale, root = _croot(minpoly, index)
    is_real = bool(root.is_real)
    b = bits
    disks = None
    while disks is None:
        try:
            disks = _certified_disks(minpoly, b)
        except PrecisionExhausted:
            b *= 2
            if b > 4 * MAX_BITS:
                raise
    coarse = 8
    while True:
        tol = sympy.Rational(1, 2**coarse)
        v = root.eval_rational(dx=tol, dy=tol, n=15)
        re, im = (scale * _to_fraction(t) for t in v.as_real_imag())
        t = abs(scale) * Fraction(1, 2**coarse)
        hits = []
        for center, radius in disks:
            cr, ci, rad = _mpf_to_fraction(center.real), _mpf_to_fraction(center.imag), radius
            if cr + rad >= re - t and cr - rad <= re + t and ci + rad >= im - t and ci - rad <= im + t:
                hits.append((cr, ci, rad))
        if len(hits) == 1:
            cr, ci, rad = hits[0]
            if is_real:
                return Rect(cr - rad, cr + rad, Fraction(0), Fraction(0))
            return Rect(cr - rad, cr + rad, ci - rad, ci + rad)
        coarse *= 2
        if coarse > MAX_BITS:
            raise PrecisionExhausted("could not match a certified disk to the root index")


@dataclass(frozen=True, order=True)
class AlgebraicNumber:
    """A root of an irreducible integer polynomial, designated by sympy's root index.

    Indices follow ``CRootOf``: real roots in increasing order first, then the
    non-real ones. Equality is exact: same minimal polynomial and same index.
    """

    minpoly: tuple[int, ...]
    index: int

    @classmethod
    def rational(cls, q: Fraction | int) -> "AlgebraicNumber":
        q = Fraction(q)
        return cls((q.denominator, -q.numerator), 0)

    @classmethod
    def roots_of(cls, p: Poly) -> list["AlgebraicNumber"]:
        """All roots of an irreducible polynomial."""
        p = normalize_poly(p)
        key = tuple(int(c) for c in p.all_coeffs())
        return [cls(key, i) for i in range(p.degree())]

    @property
    def poly(self) -> Poly:
        return int_poly(self.minpoly)

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @cached_property
    def is_real(self) -> bool:
        return self.degree == 1 or bool(_croot(self.minpoly, self.index)[1].is_real)

    def as_fraction(self) -> Fraction | None:
        if self.degree == 1:
            return Fraction(-self.minpoly[1], self.minpoly[0])
        return None

    def enclosure(self, bits: int = START_BITS) -> Rect:
        return _enclosure(self.minpoly, self.index, bits)

    def approx(self, dps: int = 40) -> mpmath.mpc:
        q = self.as_fraction()
        with mpmath.workdps(dps):
            if q is not None:
                return mpmath.mpc(mpmath.mpf(q.numerator) / q.denominator)
            r = self.enclosure(max(START_BITS, int(dps * 3.33) + 8))
            re = (r.re_lo + r.re_hi) / 2
            im = (r.im_lo + r.im_hi) / 2
            return mpmath.mpc(
                mpmath.mpf(re.numerator) / re.denominator, mpmath.mpf(im.numerator) / im.denominator
            )

    def abs2_bounds(self, bits: int = START_BITS) -> tuple[Fraction, Fraction]:
        return self.enclosure(bits).abs2_bounds()

    def conjugate(self) -> "AlgebraicNumber":
        if self.is_real:
            return self
        z = self.approx()
        target = mpmath.conj(z)
        best = min(
            (AlgebraicNumber(self.minpoly, i) for i in range(self.degree)),
            key=lambda a: abs(a.approx() - target),
        )
        return best

    def __str__(self) -> str:
        q = self.as_fraction()
        if q is not None:
            return str(q)
        z = self.approx(20)
        return f"root#{self.index} of {self.poly.as_expr()} ~ {mpmath.nstr(z, 12)}"


def real_roots(p: Poly) -> list[AlgebraicNumber]:
    """Real roots (with multiplicity) of an integer polynomial, sorted increasingly."""
    out: list[tuple[mpmath.mpf, AlgebraicNumber]] = []
    for f, e in factor_int_poly(p):
        n_real = f.count_roots()
        for i in range(n_real):
            a = AlgebraicNumber(tuple(int(c) for c in f.all_coeffs()), i)
            out.extend([(a.approx().real, a)] * e)
    out.sort(key=lambda t: t[0])
    return [a for _, a in out]


def negate(a: AlgebraicNumber) -> AlgebraicNumber:
    """-a, designated exactly (real roots only need index arithmetic)."""
    coeffs = [c * (-1) ** (a.degree - i) for i, c in enumerate(a.minpoly)]
    p = normalize_poly(int_poly(coeffs))
    key = tuple(int(c) for c in p.all_coeffs())
    if a.is_real:
        n_real = p.count_roots()
        return AlgebraicNumber(key, n_real - 1 - a.index)
    target = -a.approx()
    return min(
        (AlgebraicNumber(key, i) for i in range(a.degree)), key=lambda b: abs(b.approx() - target)
    )


def scale_real(a: AlgebraicNumber, c: Fraction) -> AlgebraicNumber:
    """c*a for a real and c a positive rational."""
    if c <= 0 or not a.is_real:
        raise ArgumentError("scale_real needs a real number and a positive factor")
    p = poly_compose_root_scale(a.poly, c)
    return AlgebraicNumber(tuple(int(x) for x in p.all_coeffs()), a.index)


def locate_real_root(p: Poly, lo: Fraction, hi: Fraction) -> AlgebraicNumber:
    """The unique real root of p inside [lo, hi], designated exactly.

    The caller guarantees that a root of p lies in the interval. Candidate
    isolating intervals are refined until only one of them meets [lo, hi].
    """
    cands = []
    for f, _ in factor_int_poly(p):
        key = tuple(int(c) for c in f.all_coeffs())
        for i in range(f.count_roots()):
            cands.append(AlgebraicNumber(key, i))
    bits = START_BITS
    while bits <= MAX_BITS:
        hits = []
        for a in cands:
            r = a.enclosure(bits)
            if r.re_hi >= lo and r.re_lo <= hi:
                hits.append(a)
        distinct = set(hits)
        if len(distinct) == 1:
            return hits[0]
        if not distinct:
            raise ArgumentError("no root of the polynomial lies in the given interval")
        cands = list(distinct)
        bits *= 2
    raise PrecisionExhausted("could not isolate a single real root")


# ---------------------------------------------------------------------------
# root classification


@dataclass(frozen=True)
class RootClassification:
    inside: tuple[AlgebraicNumber, ...]
    on: tuple[AlgebraicNumber, ...]
    outside: tuple[AlgebraicNumber, ...]
    eps1: int
    eps2: int
    factors: tuple[tuple[Poly, int], ...] = field(default=(), compare=False)

    @property
    def counts(self) -> tuple[int, int, int]:
        return len(self.inside), len(self.on), len(self.outside)


def _on_circle_count(f: Poly) -> int:
    """Number of roots of an irreducible f lying on the unit circle."""
    if f.degree() == 1:
        return 1 if abs(f.all_coeffs()[1]) == abs(f.all_coeffs()[0]) else 0
    if not is_self_reciprocal(f) or f.degree() % 2:
        return 0
    r = trace_polynomial(f if reciprocal(f) == f else -f)
    inside = r.count_roots(-2, 2)
    at_ends = int(r.eval(2) == 0) + int(r.eval(-2) == 0)
    return 2 * (inside - at_ends)


def _classify_factor(f: Poly) -> tuple[list[AlgebraicNumber], list[AlgebraicNumber], list[AlgebraicNumber]]:
    roots = AlgebraicNumber.roots_of(f)
    if f.degree() == 1:
        q = roots[0].as_fraction()
        if abs(q) < 1:
            return [roots[0]], [], []
        if abs(q) == 1:
            return [], [roots[0]], []
        return [], [], [roots[0]]
    n_on = _on_circle_count(f)
    inside: list[AlgebraicNumber] = []
    outside: list[AlgebraicNumber] = []
    pending = list(roots)
    bits = START_BITS
    while len(pending) > n_on:
        if bits > MAX_BITS:
            raise PrecisionExhausted(
                f"could not separate roots of {f.as_expr()} from the unit circle at {MAX_BITS} bits"
            )
        still = []
        for a in pending:
            lo, hi = a.abs2_bounds(bits)
            if hi < 1:
                inside.append(a)
            elif lo > 1:
                outside.append(a)
            else:
                still.append(a)
        pending = still
        bits *= 2
    if len(pending) != n_on:
        raise PrecisionExhausted("unit-circle root count is inconsistent with refinement")
    return inside, pending, outside


def classify_roots(p: Poly) -> RootClassification:
    """Split the roots of p by position relative to the unit circle.

    Unit-circle roots can only come from self-reciprocal irreducible factors;
    there they are counted exactly through the trace polynomial and the
    remaining roots are pushed off the circle by refinement.
    """
    p = Poly(p, X, domain="ZZ")
    if p.is_zero:
        raise ArgumentError("zero polynomial")
    ins: list[AlgebraicNumber] = []
    on: list[AlgebraicNumber] = []
    out: list[AlgebraicNumber] = []
    eps1 = eps2 = 0
    facs = factor_int_poly(p)
    for f, e in facs:
        a, b, c = _classify_factor(f)
        ins += a * e
        on += b * e
        out += c * e
        if f.degree() == 1:
            q = Fraction(-int(f.all_coeffs()[1]), int(f.all_coeffs()[0]))
            eps1 += e * int(-1 < q < 1)
            eps2 += e * int(q < -1)
        else:
            eps1 += e * f.count_roots(-1, 1)
            eps2 += e * (f.count_roots(None, -1))
    return RootClassification(tuple(ins), tuple(on), tuple(out), eps1, eps2, tuple(facs))


# ---------------------------------------------------------------------------
# small number theory helpers


def divisors(n: int) -> list[int]:
    return sorted(int(d) for d in sympy.divisors(n))


def mobius(n: int) -> int:
    return int(sympy.mobius(n))


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def multiplicative_order_mod_poly(g: Poly, p: int) -> int:
    """Order of x in (F_p[x]/g)^* for g irreducible over F_p with g(0) != 0."""
    gp = Poly(g.as_expr(), X, modulus=p)
    q = p ** gp.degree() - 1
    xp = Poly(X, X, modulus=p)
    order = q
    for prime, mult in sympy.factorint(q).items():
        for _ in range(mult):
            cand = order // prime
            if _powmod(xp, cand, gp) == Poly(1, X, modulus=p):
                order = cand
            else:
                break
    return order


def _powmod(base: Poly, e: int, mod: Poly) -> Poly:
    result = Poly(1, X, modulus=mod.get_modulus())
    b = base.rem(mod)
    while e:
        if e & 1:
            result = (result * b).rem(mod)
        e >>= 1
        if e:
            b = (b * b).rem(mod)
    return result


def residue_period(m: IntMatrix, p: int) -> int:
    """lcm of the orders of the nonzero eigenvalues of M reduced mod p."""
    cp = charpoly(m)
    if cp.degree() <= 0:
        return 1
    red = Poly(cp.as_expr(), X, modulus=p)
    orders = []
    for g, _ in red.factor_list()[1]:
        if g.degree() == 1 and g.eval(0) == 0:
            continue
        orders.append(multiplicative_order_mod_poly(Poly(g.as_expr(), X, domain="ZZ"), p))
    return lcm_all(orders)


def rational_str(q: Fraction | int) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(s: str | int) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(str(s))
