"""Twisted polynomials F_q<phi> with phi a = a^p phi, matrices over them, and degree profiles.

Field elements are small integers 0..q-1 whose base-p digits are the coordinates
relative to the field's modulus (digit i is the coefficient of x^i). All
arithmetic goes through lookup tables built once per field.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Callable, Iterable, Sequence

from . import numeric as nm
from .errors import ArgumentError, BudgetExceeded, InvariantViolation, NotConfined
from .sequences import GcdSeq

ORDER_BUDGET = 10**6

# Conway polynomials, coefficients from the constant term up.
DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
    (11, 2): (2, 7, 1),
    (13, 2): (2, 12, 1),
}


def _is_irreducible_mod_p(coeffs: Sequence[int], p: int) -> bool:
    poly = nm.sympy.Poly(list(reversed(coeffs)), nm.X, modulus=p)
    return poly.degree() >= 1 and poly.is_irreducible


def default_modulus(p: int, nu: int) -> tuple[int, ...]:
    """A fixed monic irreducible of degree nu over F_p (Conway where tabulated)."""
    nm._check_prime(p)
    if nu < 1:
        raise ArgumentError("field degree must be positive")
    if nu == 1:
        return (0, 1)
    if (p, nu) in DEFAULT_MODULI:
        return DEFAULT_MODULI[(p, nu)]
    # smallest monic irreducible, lower coefficients read as a base-p number
    for code in range(p**nu):
        low = [(code // p**i) % p for i in range(nu)]
        if low[0] and _is_irreducible_mod_p(low + [1], p):
            return tuple(low + [1])
    raise AssertionError("an irreducible polynomial always exists")


class GF:
    """The field F_{p^nu} = F_p[x]/(modulus) with table arithmetic."""

    def __init__(self, p: int, nu: int = 1, modulus: Sequence[int] | None = None) -> None:
        nm._check_prime(p)
        if nu < 1:
            raise ArgumentError("field degree must be positive")
        modulus = tuple(int(c) % p for c in (modulus or default_modulus(p, nu)))
        if len(modulus) != nu + 1 or modulus[-1] != 1:
            raise ArgumentError(f"modulus must be monic of degree {nu}")
        if nu > 1 and not _is_irreducible_mod_p(modulus, p):
            raise ArgumentError(f"modulus {modulus} is reducible mod {p}")
        q = p**nu
        if q > 1 << 16:
            raise ArgumentError("field too large for table arithmetic")
        self.p, self.nu, self.q, self.modulus = p, nu, q, modulus
        self._build_tables()

    # digits <-> integers
    def coords(self, a: int) -> tuple[int, ...]:
        return tuple((a // self.p**i) % self.p for i in range(self.nu))

    def from_coords(self, coords: Sequence[int]) -> int:
        if len(coords) > self.nu:
            raise ArgumentError(f"at most {self.nu} coordinates expected")
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coords))

    def _mul_digits(self, a: int, b: int) -> int:
        p, nu, m = self.p, self.nu, self.modulus
        x, y = self.coords(a), self.coords(b)
        prod = [0] * (2 * nu - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    prod[i + j] = (prod[i + j] + xi * yj) % p
        for k in range(len(prod) - 1, nu - 1, -1):
            c = prod[k]
            if c:
                for i in range(nu + 1):
                    prod[k - nu + i] = (prod[k - nu + i] - c * m[i]) % p
        return self.from_coords(prod[:nu])

    def _build_tables(self) -> None:
        q, p = self.q, self.p
        exp: list[int] = []
        for g in range(2 if q > 2 else 1, q):
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = self._mul_digits(x, g)
            if len(exp) == q - 1:
                break
        self.generator = exp[1] if q > 2 else 1
        self._exp = exp + exp
        self._log = [0] * q
        for i, v in enumerate(exp):
            self._log[v] = i
        self._neg = [self.from_coords([(-c) % p for c in self.coords(a)]) for a in range(q)]
        if q <= 1024:
            self._add_table = [[self._add_digits(a, b) for b in range(q)] for a in range(q)]
        else:
            self._add_table = None
        self._frob = [self.pow(a, p) for a in range(q)]
        self._frob_inv = [0] * q
        for a, b in enumerate(self._frob):
            self._frob_inv[b] = a

    def _add_digits(self, a: int, b: int) -> int:
        return self.from_coords([(x + y) % self.p for x, y in zip(self.coords(a), self.coords(b))])

    def add(self, a: int, b: int) -> int:
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._add_digits(a, b)

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e > 0 else 1
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def frob(self, a: int, k: int = 1) -> int:
        """a^(p^k) for any integer k (negative k inverts)."""
        k %= self.nu
        for _ in range(k):
            a = self._frob[a]
        return a

    def scalar(self, n: int) -> int:
        return n % self.p

    def order(self, a: int) -> int:
        if a == 0:
            raise ArgumentError("zero has no multiplicative order")
        return (self.q - 1) // gcd(self._log[a], self.q - 1)

    def key(self) -> tuple:
        return (self.p, self.nu, self.modulus)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GF) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"GF({self.p}, {self.nu}, {self.modulus})"


@lru_cache(maxsize=64)
def field(p: int, nu: int = 1, modulus: tuple[int, ...] | None = None) -> GF:
    return GF(p, nu, modulus)


@dataclass(frozen=True)
class FqElem:
    """An element of F_q; the integer value packs the coordinates in base p."""

    F: GF
    value: int

    @classmethod
    def of(cls, F: GF, v: int | Sequence[int]) -> "FqElem":
        return cls(F, F.from_coords(v) if isinstance(v, (list, tuple)) else F.scalar(v))

    @property
    def coords(self) -> tuple[int, ...]:
        return self.F.coords(self.value)

    def __add__(self, o: "FqElem") -> "FqElem":
        return FqElem(self.F, self.F.add(self.value, o.value))

    def __sub__(self, o: "FqElem") -> "FqElem":
        return FqElem(self.F, self.F.sub(self.value, o.value))

    def __neg__(self) -> "FqElem":
        return FqElem(self.F, self.F.neg(self.value))

    def __mul__(self, o: "FqElem") -> "FqElem":
        return FqElem(self.F, self.F.mul(self.value, o.value))

    def __truediv__(self, o: "FqElem") -> "FqElem":
        return FqElem(self.F, self.F.div(self.value, o.value))

    def __pow__(self, e: int) -> "FqElem":
        return FqElem(self.F, self.F.pow(self.value, e))

    def frob(self, k: int = 1) -> "FqElem":
        return FqElem(self.F, self.F.frob(self.value, k))

    def is_zero(self) -> bool:
        return self.value == 0


# ---------------------------------------------------------------------------
# commutative polynomials over F_q: tuples of field ints, constant term first

CPoly = tuple[int, ...]


def cp_norm(a: Sequence[int]) -> CPoly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def cp_deg(a: CPoly) -> int:
    """Degree; -1 for the zero polynomial."""
    return len(a) - 1


def cp_add(F: GF, a: CPoly, b: CPoly) -> CPoly:
    n = max(len(a), len(b))
    return cp_norm(F.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n))


def cp_neg(F: GF, a: CPoly) -> CPoly:
    return tuple(F.neg(c) for c in a)


def cp_sub(F: GF, a: CPoly, b: CPoly) -> CPoly:
    return cp_add(F, a, cp_neg(F, b))


def cp_mul(F: GF, a: CPoly, b: CPoly) -> CPoly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return cp_norm(out)


def cp_divmod(F: GF, a: CPoly, b: CPoly) -> tuple[CPoly, CPoly]:
    if not b:
        raise ArgumentError("division by the zero polynomial")
    r = list(a)
    db = len(b) - 1
    inv = F.inv(b[-1])
    q = [0] * max(len(a) - db, 0)
    for k in range(len(a) - 1, db - 1, -1):
        c = r[k]
        if c:
            f = F.mul(c, inv)
            q[k - db] = f
            for i, bi in enumerate(b):
                r[k - db + i] = F.sub(r[k - db + i], F.mul(f, bi))
    return cp_norm(q), cp_norm(r[:db])


def cp_mod(F: GF, a: CPoly, b: CPoly) -> CPoly:
    return cp_divmod(F, a, b)[1]


def cp_monic(F: GF, a: CPoly) -> CPoly:
    inv = F.inv(a[-1])
    return tuple(F.mul(c, inv) for c in a)


def cp_gcd(F: GF, a: CPoly, b: CPoly) -> CPoly:
    while b:
        a, b = b, cp_mod(F, a, b)
    return cp_monic(F, a) if a else ()


def cp_derivative(F: GF, a: CPoly) -> CPoly:
    return cp_norm(F.mul(F.scalar(i), c) for i, c in enumerate(a) if i > 0)


def cp_powmod(F: GF, base: CPoly, e: int, mod: CPoly) -> CPoly:
    result: CPoly = (1,)
    base = cp_mod(F, base, mod)
    while e:
        if e & 1:
            result = cp_mod(F, cp_mul(F, result, base), mod)
        base = cp_mod(F, cp_mul(F, base, base), mod)
        e >>= 1
    return cp_mod(F, result, mod)


def cp_radical(F: GF, a: CPoly) -> CPoly:
    """Product of the distinct monic irreducible factors."""
    if cp_deg(a) <= 0:
        return (1,)
    d = cp_derivative(F, a)
    if not d:
        # a(x) = b(x^p) = (b^(1/p) applied coefficientwise)(x)^p
        root = tuple(F.frob(a[i], -1) for i in range(0, len(a), F.p))
        return cp_radical(F, cp_norm(root))
    g = cp_gcd(F, a, d)
    head = cp_divmod(F, cp_monic(F, a), g)[0]
    tail = cp_radical(F, g)
    common = cp_gcd(F, head, tail)
    return cp_monic(F, cp_divmod(F, cp_mul(F, head, tail), common)[0])


def x_order_mod(F: GF, h: CPoly, budget: int = ORDER_BUDGET) -> int:
    """Least m >= 1 with x^m = 1 mod h, for squarefree h with h(0) != 0."""
    if cp_deg(h) <= 0:
        return 1
    if h[0] == 0:
        raise ArgumentError("x is not a unit modulo a polynomial divisible by x")
    x: CPoly = cp_mod(F, (0, 1), h)
    cur = x
    for m in range(1, budget + 1):
        if cur == (1,):
            return m
        cur = cp_mod(F, cp_mul(F, cur, x), h)
    raise BudgetExceeded(f"multiplicative order exceeds {budget}")


class PolyRing:
    """F_q[T] as a commutative ring for generic matrix routines."""

    def __init__(self, F: GF) -> None:
        self.F = F
        self.zero: CPoly = ()
        self.one: CPoly = (1,)

    def add(self, a: CPoly, b: CPoly) -> CPoly:
        return cp_add(self.F, a, b)

    def neg(self, a: CPoly) -> CPoly:
        return cp_neg(self.F, a)

    def mul(self, a: CPoly, b: CPoly) -> CPoly:
        return cp_mul(self.F, a, b)


class FieldRing:
    """F_q itself, with the same interface as PolyRing."""

    def __init__(self, F: GF) -> None:
        self.F = F
        self.zero = 0
        self.one = 1

    def add(self, a: int, b: int) -> int:
        return self.F.add(a, b)

    def neg(self, a: int) -> int:
        return self.F.neg(a)

    def mul(self, a: int, b: int) -> int:
        return self.F.mul(a, b)


def berkowitz(ring, m: Sequence[Sequence]) -> list:
    """Coefficients c_0 = 1, c_1, ..., c_n of det(xI - M) = sum c_k x^(n-k), division free."""
    n = len(m)
    if n == 0:
        return [ring.one]
    add, mul, neg = ring.add, ring.mul, ring.neg
    coeffs = [ring.one, neg(m[0][0])]
    for r in range(1, n):
        row = m[r][:r]
        v = [m[i][r] for i in range(r)]
        toeplitz = [ring.one, neg(m[r][r])]
        for _ in range(r):
            acc = ring.zero
            for x, y in zip(row, v):
                acc = add(acc, mul(x, y))
            toeplitz.append(neg(acc))
            nv = []
            for i in range(r):
                acc = ring.zero
                for j in range(r):
                    acc = add(acc, mul(m[i][j], v[j]))
                nv.append(acc)
            v = nv
        new = []
        for i in range(r + 2):
            acc = ring.zero
            for j in range(len(coeffs)):
                if 0 <= i - j < len(toeplitz):
                    acc = add(acc, mul(toeplitz[i - j], coeffs[j]))
            new.append(acc)
        coeffs = new
    return coeffs


def ring_det(ring, m: Sequence[Sequence]):
    c = berkowitz(ring, m)
    return c[-1] if len(m) % 2 == 0 else ring.neg(c[-1])


# ---------------------------------------------------------------------------
# twisted polynomials


@dataclass(frozen=True)
class TwistedPoly:
    """sum_i c_i phi^i with coefficients on the left; phi a = a^p phi."""

    F: GF
    coeffs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", cp_norm(self.coeffs))

    @classmethod
    def const(cls, F: GF, c: int) -> "TwistedPoly":
        return cls(F, (c,))

    @classmethod
    def phi(cls, F: GF, k: int = 1) -> "TwistedPoly":
        return cls(F, (0,) * k + (1,))

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def deg(self) -> int:
        """deg_phi; -1 for zero."""
        return len(self.coeffs) - 1

    @property
    def vphi(self) -> int:
        """Index of the lowest nonzero coefficient."""
        if not self.coeffs:
            raise ArgumentError("v_phi of zero is infinite")
        return next(i for i, c in enumerate(self.coeffs) if c)

    def coeff(self, i: int) -> FqElem:
        return FqElem(self.F, self.coeffs[i] if i < len(self.coeffs) else 0)

    def lead(self) -> int:
        return self.coeffs[-1]

    def __add__(self, o: "TwistedPoly") -> "TwistedPoly":
        return TwistedPoly(self.F, cp_add(self.F, self.coeffs, o.coeffs))

    def __neg__(self) -> "TwistedPoly":
        return TwistedPoly(self.F, cp_neg(self.F, self.coeffs))

    def __sub__(self, o: "TwistedPoly") -> "TwistedPoly":
        return TwistedPoly(self.F, cp_sub(self.F, self.coeffs, o.coeffs))

    def __mul__(self, o: "TwistedPoly") -> "TwistedPoly":
        F = self.F
        if not self.coeffs or not o.coeffs:
            return TwistedPoly(F)
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        out[i + j] = F.add(out[i + j], F.mul(a, F.frob(b, i)))
        return TwistedPoly(F, tuple(out))

    def __pow__(self, n: int) -> "TwistedPoly":
        out = TwistedPoly.const(self.F, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def reduce(self) -> int:
        """Constant coefficient, i.e. the image modulo phi."""
        return self.coeffs[0] if self.coeffs else 0

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                cs = str(c) if self.F.nu == 1 else "[" + ",".join(map(str, self.F.coords(c))) + "]"
                terms.append(cs if i == 0 else f"{cs}*phi^{i}")
        return " + ".join(terms)


def tp_right_divmod(a: TwistedPoly, b: TwistedPoly) -> tuple[TwistedPoly, TwistedPoly]:
    """a = q*b + r with deg r < deg b."""
    if b.is_zero():
        raise ArgumentError("division by zero")
    F = a.F
    q = [0] * max(a.deg - b.deg + 1, 0)
    r = a
    while not r.is_zero() and r.deg >= b.deg:
        k = r.deg - b.deg
        c = F.div(r.lead(), F.frob(b.lead(), k))
        q[k] = c
        r = r - TwistedPoly(F, (0,) * k + (c,)) * b
    return TwistedPoly(F, tuple(q)), r


def tp_left_divmod(a: TwistedPoly, b: TwistedPoly) -> tuple[TwistedPoly, TwistedPoly]:
    """a = b*q + r with deg r < deg b."""
    if b.is_zero():
        raise ArgumentError("division by zero")
    F = a.F
    q = [0] * max(a.deg - b.deg + 1, 0)
    r = a
    while not r.is_zero() and r.deg >= b.deg:
        k = r.deg - b.deg
        c = F.frob(F.div(r.lead(), b.lead()), -b.deg)
        q[k] = c
        r = r - b * TwistedPoly(F, (0,) * k + (c,))
    return TwistedPoly(F, tuple(q)), r


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class TwistedMatrix:
    F: GF
    rows: tuple[tuple[TwistedPoly, ...], ...]

    def __post_init__(self) -> None:
        r = len(self.rows)
        if any(len(row) != r for row in self.rows):
            raise ArgumentError("twisted matrices must be square")

    @classmethod
    def from_data(cls, F: GF, data: Sequence[Sequence[Sequence]]) -> "TwistedMatrix":
        """Entries are coefficient lists by phi-degree; a coefficient is an int (in F_p) or a coordinate list."""
        rows = []
        for row in data:
            rows.append(tuple(TwistedPoly(F, tuple(FqElem.of(F, c).value for c in entry)) for entry in row))
        return cls(F, tuple(rows))

    def to_data(self) -> list[list[list]]:
        F = self.F
        enc = (lambda c: c) if F.nu == 1 else (lambda c: list(F.coords(c)))
        return [[[enc(c) for c in e.coeffs] for e in row] for row in self.rows]

    @classmethod
    def identity(cls, F: GF, r: int) -> "TwistedMatrix":
        one, zero = TwistedPoly.const(F, 1), TwistedPoly(F)
        return cls(F, tuple(tuple(one if i == j else zero for j in range(r)) for i in range(r)))

    @classmethod
    def diag(cls, F: GF, entries: Sequence[TwistedPoly]) -> "TwistedMatrix":
        zero = TwistedPoly(F)
        r = len(entries)
        return cls(F, tuple(tuple(entries[i] if i == j else zero for j in range(r)) for i in range(r)))

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> TwistedPoly:
        return self.rows[ij[0]][ij[1]]

    def __add__(self, o: "TwistedMatrix") -> "TwistedMatrix":
        return TwistedMatrix(self.F, tuple(tuple(a + b for a, b in zip(x, y)) for x, y in zip(self.rows, o.rows)))

    def __sub__(self, o: "TwistedMatrix") -> "TwistedMatrix":
        return TwistedMatrix(self.F, tuple(tuple(a - b for a, b in zip(x, y)) for x, y in zip(self.rows, o.rows)))

    def __mul__(self, o: "TwistedMatrix") -> "TwistedMatrix":
        r = self.size
        out = []
        for i in range(r):
            row = []
            for j in range(r):
                acc = TwistedPoly(self.F)
                for k in range(r):
                    acc = acc + self.rows[i][k] * o.rows[k][j]
                row.append(acc)
            out.append(tuple(row))
        return TwistedMatrix(self.F, tuple(out))

    def __pow__(self, n: int) -> "TwistedMatrix":
        if n < 0:
            raise ArgumentError("negative powers are not defined")
        out = TwistedMatrix.identity(self.F, self.size)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def minus_one(self) -> "TwistedMatrix":
        return self - TwistedMatrix.identity(self.F, self.size)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.rows for e in row)

    def deg(self) -> int:
        return max((e.deg for row in self.rows for e in row), default=-1)

    def coefficient_matrix(self, k: int) -> list[list[int]]:
        """The matrix m_k over F_q with self = sum_k m_k phi^k."""
        return [[e.coeffs[k] if k < len(e.coeffs) else 0 for e in row] for row in self.rows]

    def reduction(self) -> list[list[int]]:
        """Image modulo phi."""
        return self.coefficient_matrix(0)

    def apply_poly(self, coeffs: Sequence[int]) -> "TwistedMatrix":
        """P(self) for an integer polynomial P (coefficients from the constant term up)."""
        F, r = self.F, self.size
        out = TwistedMatrix(F, tuple(tuple(TwistedPoly(F) for _ in range(r)) for _ in range(r)))
        power = TwistedMatrix.identity(F, r)
        for c in coeffs:
            if c % F.p:
                scal = TwistedMatrix.diag(F, [TwistedPoly.const(F, F.scalar(c))] * r)
                out = out + scal * power
            power = power * self
        return out


def _field_det(F: GF, m: Sequence[Sequence[int]]) -> int:
    return ring_det(FieldRing(F), m)


def leading_matrix(sigma: TwistedMatrix) -> list[list[int]]:
    return sigma.coefficient_matrix(sigma.deg())


def is_nonsingular(sigma: TwistedMatrix) -> bool:
    """True iff the coefficient matrix of the top phi-degree is invertible."""
    if sigma.is_zero():
        raise ArgumentError("the zero matrix has no leading matrix")
    return _field_det(sigma.F, leading_matrix(sigma)) != 0


# ---------------------------------------------------------------------------
# Smith normal form over F_q<phi>


@dataclass(frozen=True)
class TwistedSmith:
    u: TwistedMatrix
    d: TwistedMatrix
    v: TwistedMatrix
    u_inv: TwistedMatrix
    v_inv: TwistedMatrix

    @property
    def diagonal(self) -> tuple[TwistedPoly, ...]:
        return tuple(self.d.rows[i][i] for i in range(self.d.size))


def _ident_rows(F: GF, r: int) -> list[list[TwistedPoly]]:
    return [list(row) for row in TwistedMatrix.identity(F, r).rows]


def tm_smith(tau: TwistedMatrix) -> TwistedSmith:
    """u tau v = d diagonal, with u, v invertible (inverses returned too).

    Pivot: an entry of least phi-degree in the remaining block, first in
    row-major order. Rows are reduced with quotients on the left, columns
    with quotients on the right.
    """
    F, r = tau.F, tau.size
    a = [list(row) for row in tau.rows]
    u, u_inv = _ident_rows(F, r), _ident_rows(F, r)
    v, v_inv = _ident_rows(F, r), _ident_rows(F, r)

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        for row in u_inv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]
        v_inv[i], v_inv[j] = v_inv[j], v_inv[i]

    def row_op(i: int, t: int, q: TwistedPoly) -> None:
        # row_i <- row_i - q row_t ; inverse adds it back (a column op on u_inv)
        a[i] = [x - q * y for x, y in zip(a[i], a[t])]
        u[i] = [x - q * y for x, y in zip(u[i], u[t])]
        for row in u_inv:
            row[t] = row[t] + row[i] * q

    def col_op(j: int, t: int, q: TwistedPoly) -> None:
        # col_j <- col_j - col_t q ; inverse is a row op on v_inv
        for row in a:
            row[j] = row[j] - row[t] * q
        for row in v:
            row[j] = row[j] - row[t] * q
        v_inv[t] = [x + q * y for x, y in zip(v_inv[t], v_inv[j])]

    for t in range(r):
        while True:
            best = None
            for i in range(t, r):
                for j in range(t, r):
                    e = a[i][j]
                    if not e.is_zero() and (best is None or e.deg < best[0]):
                        best = (e.deg, i, j)
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            piv = a[t][t]
            for i in range(t + 1, r):
                if not a[i][t].is_zero():
                    q, _ = tp_right_divmod(a[i][t], piv)
                    row_op(i, t, q)
            for j in range(t + 1, r):
                if not a[t][j].is_zero():
                    q, _ = tp_left_divmod(a[t][j], piv)
                    col_op(j, t, q)
            if all(a[i][t].is_zero() for i in range(t + 1, r)) and all(a[t][j].is_zero() for j in range(t + 1, r)):
                break

    mk = lambda rows: TwistedMatrix(F, tuple(tuple(row) for row in rows))  # noqa: E731
    return TwistedSmith(mk(u), mk(a), mk(v), mk(u_inv), mk(v_inv))


@dataclass(frozen=True)
class DdetProfile:
    """deg_phi and v_phi of the Dieudonne determinant; None marks a singular matrix."""

    degphi: int | None
    vphi: int | None

    @property
    def singular(self) -> bool:
        return self.degphi is None


def ddet_profile(tau: TwistedMatrix) -> DdetProfile:
    diag = tm_smith(tau).diagonal
    if any(e.is_zero() for e in diag):
        return DdetProfile(None, None)
    return DdetProfile(sum(e.deg for e in diag), sum(e.vphi for e in diag))


# ---------------------------------------------------------------------------
# embedding into matrices over the commutative ring F_q[T], T = phi^nu


def _split_components(delta: TwistedPoly) -> list[CPoly]:
    """delta = sum_i phi^i delta_i with delta_i in F_q[T]."""
    F, nu = delta.F, delta.F.nu
    comps: list[list[int]] = [[] for _ in range(nu)]
    for m, a in enumerate(delta.coeffs):
        i, k = m % nu, m // nu
        comp = comps[i]
        while len(comp) <= k:
            comp.append(0)
        # a phi^m = phi^i F^{-i}(a) T^k
        comp[k] = F.frob(a, -i)
    return [cp_norm(c) for c in comps]


def _frob_poly(F: GF, a: CPoly, k: int) -> CPoly:
    return tuple(F.frob(c, k) for c in a)


def iota_scalar(delta: TwistedPoly) -> list[list[CPoly]]:
    """Matrix of left multiplication by delta on the basis 1, phi, ..., phi^(nu-1)."""
    F, nu = delta.F, delta.F.nu
    comps = _split_components(delta)
    T: CPoly = (0, 1)
    out = [[() for _ in range(nu)] for _ in range(nu)]
    for i in range(nu):
        for j in range(nu):
            if i >= j:
                out[i][j] = _frob_poly(F, comps[i - j], -j)
            else:
                out[i][j] = cp_mul(F, T, _frob_poly(F, comps[nu + i - j], -j))
    return out


def iota_embed(tau: TwistedMatrix) -> list[list[CPoly]]:
    """The r*nu square matrix over F_q[T] obtained blockwise from iota_scalar."""
    r, nu = tau.size, tau.F.nu
    out = [[() for _ in range(r * nu)] for _ in range(r * nu)]
    for bi in range(r):
        for bj in range(r):
            block = iota_scalar(tau.rows[bi][bj])
            for i in range(nu):
                for j in range(nu):
                    out[bi * nu + i][bj * nu + j] = block[i][j]
    return out


def poly_matrix_det(F: GF, m: Sequence[Sequence[CPoly]]) -> CPoly:
    return ring_det(PolyRing(F), m)


def _poly_matmul(F: GF, a, b):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc: CPoly = ()
            for k in range(n):
                if a[i][k] and b[k][j]:
                    acc = cp_add(F, acc, cp_mul(F, a[i][k], b[k][j]))
            row.append(acc)
        out.append(row)
    return out


def _poly_minus_identity(F: GF, a):
    return [[cp_sub(F, e, (1,)) if i == j else e for j, e in enumerate(row)] for i, row in enumerate(a)]


# ---------------------------------------------------------------------------
# degree and inseparability profiles


@dataclass(frozen=True)
class DegProfile:
    """deg(sigma^n - 1) = p^(a n - t_n |n|_p^-1)."""

    a: int
    t: GcdSeq

    def exponent(self, n: int, p: int) -> int:
        return self.a * n - int(self.t(n)) * p ** nm.padic_ord(n, p)


def _check_field(sigma: TwistedMatrix, p: int) -> None:
    if sigma.F.p != p:
        raise ArgumentError(f"matrix is over characteristic {sigma.F.p}, not {p}")


def _iterate_powers(F: GF, M, upto: int):
    """Yield (n, M^n) for n = 1..upto."""
    cur = M
    for n in range(1, upto + 1):
        yield n, cur
        cur = _poly_matmul(F, cur, M)


def deg_profile(sigma: TwistedMatrix, p: int, verify_upto: int | None = None) -> DegProfile:
    """Degree profile through the embedded commutative matrix and the valuation -deg_T.

    a is the largest T-degree among the characteristic polynomial's
    coefficients; the period is the multiplicative order of the residues of
    the unit eigenvalues; t_m = a m - deg_T det(M^m - 1) on divisors m of the
    period. The closed form is then checked on n <= 2 * period * p, and
    against twisted Smith forms for the first few n.
    """
    _check_field(sigma, p)
    F = sigma.F
    M = iota_embed(sigma)
    coeffs = berkowitz(PolyRing(F), M)
    degs = [cp_deg(c) for c in coeffs]
    a = max(degs)
    top = [k for k, d in enumerate(degs) if d == a]
    s, e = top[0], top[-1]
    residue = cp_norm(coeffs[k][a] if cp_deg(coeffs[k]) == a else 0 for k in range(e, s - 1, -1))
    period = x_order_mod(F, cp_radical(F, residue)) if cp_deg(residue) > 0 else 1

    def exp_at(Mn) -> int:
        d = poly_matrix_det(F, _poly_minus_identity(F, Mn))
        if not d:
            raise NotConfined("sigma^n - 1 is not an isogeny")
        return cp_deg(d)

    upto = verify_upto if verify_upto is not None else 2 * period * p
    upto = max(upto, period)
    observed = {n: exp_at(Mn) for n, Mn in _iterate_powers(F, M, upto)}
    t = GcdSeq.from_map(period, {m: a * m - observed[m] for m in nm.divisors(period)})
    prof = DegProfile(a, t)
    for n, got in observed.items():
        if prof.exponent(n, p) != got:
            raise InvariantViolation(f"degree profile fails at n={n}: {prof.exponent(n, p)} != {got}")
    for n in range(1, min(upto, 4) + 1):
        dd = ddet_profile((sigma**n).minus_one())
        if dd.degphi != observed[n]:
            raise InvariantViolation(f"Dieudonne degree {dd.degphi} != embedded degree {observed[n]} at n={n}")
    return prof


def insep_profile(sigma: TwistedMatrix, p: int, verify_upto: int | None = None) -> GcdSeq:
    """t^ins with deg_i(sigma^n - 1) = p^(t^ins_n |n|_p^-1).

    Nonzero values occur only at multiples of the orders of the nonzero
    eigenvalues of sigma mod phi; t^ins_m = v_phi(ddet(sigma^m - 1)) for m
    dividing the lcm of those orders.
    """
    _check_field(sigma, p)
    F = sigma.F
    chi = list(reversed(berkowitz(FieldRing(F), sigma.reduction())))  # constant term first
    chi = cp_norm(chi)
    while chi and chi[0] == 0:
        chi = chi[1:]
    if cp_deg(chi) <= 0:
        return GcdSeq.constant(0)
    period = x_order_mod(F, cp_radical(F, chi))
    upto = verify_upto if verify_upto is not None else 2 * period * p
    upto = max(upto, period)
    observed = {}
    power = TwistedMatrix.identity(F, sigma.size)
    for n in range(1, upto + 1):
        power = power * sigma
        prof = ddet_profile(power.minus_one())
        if prof.singular:
            raise NotConfined(f"sigma^{n} - 1 is not an isogeny")
        observed[n] = prof.vphi
    t = GcdSeq.from_map(period, {m: observed[m] for m in nm.divisors(period)})
    for n, got in observed.items():
        want = int(t(n)) * p ** nm.padic_ord(n, p)
        if want != got:
            raise InvariantViolation(f"inseparability profile fails at n={n}: {want} != {got}")
    return t


def insep_by_cyclotomic(sigma: TwistedMatrix, n: int) -> int:
    """sum over d | n of v_phi(ddet(Phi_d(sigma))) for n coprime to p; a second route to t^ins_n."""
    total = 0
    for d in nm.divisors(n):
        cyclo = nm.sympy.Poly(nm.sympy.cyclotomic_poly(d, nm.X), nm.X, domain="ZZ").all_coeffs()
        prof = ddet_profile(sigma.apply_poly([int(c) for c in reversed(cyclo)]))
        if prof.singular:
            raise NotConfined(f"Phi_{d}(sigma) is singular")
        total += prof.vphi
    return total


def separable_exponent(sigma: TwistedMatrix, n: int) -> int:
    """log_p of the number of fixed points of sigma^n: deg_phi - v_phi of ddet(sigma^n - 1)."""
    prof = ddet_profile((sigma**n).minus_one())
    if prof.singular:
        raise NotConfined(f"sigma^{n} - 1 is not an isogeny")
    return prof.degphi - prof.vphi


# ---------------------------------------------------------------------------
# F_p-linear model of the action on (F_{q^M})^r, used by the kernel oracle


def _fp_rank(rows: list[list[int]], p: int) -> int:
    rows = [r[:] for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


@lru_cache(maxsize=32)
def _find_irreducible(F: GF, deg: int) -> CPoly:
    """First monic irreducible of the given degree over F, in a fixed enumeration order."""
    if deg == 1:
        return (0, 1)
    for code in range(F.q**deg):
        low = [(code // F.q**i) % F.q for i in range(deg)]
        if low[0] == 0:
            continue
        f = tuple(low + [1])
        if _ben_or_irreducible(F, f):
            return f
    raise AssertionError("an irreducible polynomial always exists")


def _ben_or_irreducible(F: GF, f: CPoly) -> bool:
    """No factor of degree i <= deg/2 divides f, tested with gcd(x^(q^i) - x, f)."""
    x: CPoly = (0, 1)
    h = x
    for _ in range(cp_deg(f) // 2):
        h = cp_powmod(F, h, F.q, f)
        if cp_deg(cp_gcd(F, cp_sub(F, h, x), f)) > 0:
            return False
    return True


class Extension:
    """F_{q^M} = F_q[y]/(g) with an F_p-basis e_i y^j (e_i the digit basis of F_q)."""

    def __init__(self, F: GF, M: int) -> None:
        self.F, self.M = F, M
        self.g = _find_irreducible(F, M)
        self.dim = F.nu * M

    def basis(self) -> list[CPoly]:
        F = self.F
        out = []
        for j in range(self.M):
            for i in range(F.nu):
                e = F.from_coords([1 if k == i else 0 for k in range(F.nu)])
                out.append(cp_norm([0] * j + [e]))
        return out

    def to_fp(self, a: CPoly) -> list[int]:
        F = self.F
        out = []
        for j in range(self.M):
            c = a[j] if j < len(a) else 0
            out.extend(F.coords(c))
        return out

    def frob(self, a: CPoly) -> CPoly:
        return cp_powmod(self.F, a, self.F.p, self.g)

    def scale(self, c: int, a: CPoly) -> CPoly:
        return cp_norm(self.F.mul(c, x) for x in a)


def kernel_exponent(sigma: TwistedMatrix, n: int, M: int) -> int:
    """dim over F_p of the kernel of sigma^n - 1 acting on (F_{q^M})^r."""
    F, r = sigma.F, sigma.size
    ext = Extension(F, M)
    tau = (sigma**n).minus_one()
    top = tau.deg()
    basis = ext.basis()
    # Frobenius powers of every basis vector, up to the top phi-degree
    frob_pows = []
    for b in basis:
        chain = [b]
        for _ in range(top):
            chain.append(ext.frob(chain[-1]))
        frob_pows.append(chain)
    columns = []
    for j in range(r):
        for bi in range(len(basis)):
            image = []
            for i in range(r):
                acc: CPoly = ()
                for k, c in enumerate(tau.rows[i][j].coeffs):
                    if c:
                        acc = cp_add(F, acc, ext.scale(c, frob_pows[bi][k]))
                image.extend(ext.to_fp(acc))
            columns.append(image)
    rank = _fp_rank(columns, F.p)
    return r * ext.dim - rank


def make_matrix(p: int, data: Sequence[Sequence[Sequence]], nu: int = 1, modulus: Sequence[int] | None = None) -> TwistedMatrix:
    F = field(p, nu, tuple(modulus) if modulus else None)
    return TwistedMatrix.from_data(F, data)
