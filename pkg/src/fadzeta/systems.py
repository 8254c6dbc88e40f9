"""Dynamical systems as descriptors: exact fixed-point counts, FAD parameters, and brute-force oracles."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Callable, Sequence

from . import numeric as nm
from . import twisted as tw
from .errors import (
    ArgumentError,
    BudgetExceeded,
    InvariantViolation,
    NotConfined,
    StabilizationError,
    Unsupported,
)
from .fad import FadParams, PrimeData, fad_eval, fad_product
from .sequences import GcdSeq

STABILIZATION_CAP = 8
ENUMERATION_BUDGET = 10**7

# ---------------------------------------------------------------------------
# descriptors


def _tuple_matrix(M) -> nm.IntMatrix:
    return nm.as_matrix(M)


@dataclass(frozen=True)
class Torus:
    """A matrix acting on the torus G_m^s over the algebraic closure of F_p."""

    p: int
    M: nm.IntMatrix
    kind = "torus"

    def __post_init__(self) -> None:
        object.__setattr__(self, "M", _tuple_matrix(self.M))


@dataclass(frozen=True)
class VectorGroup:
    """sigma in M_r(F_q<phi>) acting on G_a^r; entries are coefficient lists by phi-degree."""

    p: int
    nu: int
    modulus: tuple[int, ...] | None
    sigma: tuple
    kind = "vector_group"

    def __post_init__(self) -> None:
        F = tw.field(self.p, self.nu, tuple(self.modulus) if self.modulus else None)
        object.__setattr__(self, "modulus", F.modulus)

        def coeff(c) -> tuple[int, ...]:
            return F.coords(tw.FqElem.of(F, list(c) if isinstance(c, (list, tuple)) else int(c)).value)

        rows = []
        for row in self.sigma:
            entries = []
            for entry in row:
                cs = [coeff(c) for c in entry]
                while cs and not any(cs[-1]):
                    cs.pop()
                entries.append(tuple(cs))
            rows.append(tuple(entries))
        object.__setattr__(self, "sigma", tuple(rows))

    @property
    def field(self) -> tw.GF:
        return tw.field(self.p, self.nu, self.modulus)

    @property
    def matrix(self) -> tw.TwistedMatrix:
        return tw.TwistedMatrix.from_data(self.field, self.sigma)


@dataclass(frozen=True)
class RationalSInteger:
    """Multiplication by an integer xi on the dual of Z[1/S]."""

    xi: int
    S: tuple[int, ...] = ()
    kind = "s_integer"

    def __post_init__(self) -> None:
        object.__setattr__(self, "S", tuple(sorted(set(int(p) for p in self.S))))


@dataclass(frozen=True)
class AdditiveCA:
    """x -> xi.x on F_p^Z, xi = sum coeffs[i] t^(low + i) a Laurent polynomial."""

    p: int
    low: int
    coeffs: tuple[int, ...]
    kind = "additive_ca"

    def __post_init__(self) -> None:
        c = [int(x) % self.p for x in self.coeffs]
        low = int(self.low)
        while c and c[0] == 0:
            c.pop(0)
            low += 1
        while c and c[-1] == 0:
            c.pop()
        if not c:
            raise ArgumentError("the Laurent polynomial is zero")
        object.__setattr__(self, "coeffs", tuple(c))
        object.__setattr__(self, "low", low)

    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1


@dataclass(frozen=True)
class EllipticMult:
    """Multiplication by m on an elliptic curve in characteristic p."""

    p: int
    m: int
    ordinary: bool = True
    kind = "elliptic"


@dataclass(frozen=True)
class ReductiveSteinberg:
    """Data for Steinberg's formula: action J on the invariants, c = prod q_sigma(alpha), central action Z."""

    p: int
    J: nm.IntMatrix
    c: int
    Z: nm.IntMatrix = ()
    kind = "reductive"

    def __post_init__(self) -> None:
        object.__setattr__(self, "J", _tuple_matrix(self.J))
        object.__setattr__(self, "Z", _tuple_matrix(self.Z))


@dataclass(frozen=True)
class Finite:
    """A permutation given by its cycle type: pairs (cycle length, number of cycles)."""

    cycles: tuple[tuple[int, int], ...]
    kind = "finite"

    def __post_init__(self) -> None:
        merged: dict[int, int] = {}
        for length, count in self.cycles:
            if length < 1 or count < 0:
                raise ArgumentError("cycle lengths must be positive and counts nonnegative")
            merged[int(length)] = merged.get(int(length), 0) + int(count)
        object.__setattr__(self, "cycles", tuple(sorted((k, v) for k, v in merged.items() if v)))


@dataclass(frozen=True)
class Product:
    factors: tuple
    kind = "product"

    def __post_init__(self) -> None:
        object.__setattr__(self, "factors", tuple(self.factors))


@dataclass(frozen=True)
class RawFad:
    params: FadParams
    kind = "raw_fad"


Descriptor = Torus | VectorGroup | RationalSInteger | AdditiveCA | EllipticMult | ReductiveSteinberg | Finite | Product | RawFad


@dataclass(frozen=True)
class FixedPointReport:
    """An exact fixed-point counter together with the FAD parameters that reproduce it."""

    descriptor: object
    params: FadParams
    provenance: tuple[str, ...]
    counter: Callable[[int], int] = dc_field(compare=False, repr=False)

    def f(self, n: int) -> int:
        if n < 1:
            raise ArgumentError("n must be positive")
        return self.counter(n)

    def __call__(self, n: int) -> int:
        return self.f(n)

    def check(self, N: int = 30) -> None:
        for n in range(1, N + 1):
            if fad_eval(self.params, n) != self.f(n):
                raise InvariantViolation(f"parameters disagree with the direct count at n={n}")


# ---------------------------------------------------------------------------
# p-adic profile extraction


def _matpow_mod(M: nm.IntMatrix, n: int, mod: int) -> nm.IntMatrix:
    size = len(M)
    result = [[int(i == j) for j in range(size)] for i in range(size)]
    base = [[x % mod for x in row] for row in M]
    while n:
        if n & 1:
            result = [[sum(result[i][k] * base[k][j] for k in range(size)) % mod for j in range(size)] for i in range(size)]
        base = [[sum(base[i][k] * base[k][j] for k in range(size)) % mod for j in range(size)] for i in range(size)]
        n >>= 1
    return tuple(tuple(row) for row in result)


def vp_det_power_minus_one(M: nm.IntMatrix, n: int, p: int) -> int:
    """v_p(det(M^n - 1)), computed modulo growing powers of p."""
    if len(M) == 0:
        return 0
    bits = 32
    while bits <= 1024:
        mod = p**bits
        Mn = _matpow_mod(M, n, mod)
        d = nm.det(nm.matsub(Mn, nm.identity(len(M)))) % mod
        if d:
            return nm.padic_ord(d, p)
        bits *= 2
    d = nm.det_power_minus_one(M, n)
    if d == 0:
        raise NotConfined(f"det(M^{n} - 1) = 0")
    return nm.padic_ord(d, p)


@dataclass(frozen=True)
class PadicProfile:
    """p^(-v(n)) = r_n |n|_p^(s_n); s has period coprime to p, r may carry a p-power in its period."""

    p: int
    r: GcdSeq
    s: GcdSeq
    residue_period: int
    onset: int


def padic_profile(v: Callable[[int], int], p: int, residue_period: int, cap: int = STABILIZATION_CAP) -> PadicProfile:
    """Fit v(n) = -log_p r_n + s_n ord_p(n) from values at m p^k, then check n <= 2 * period * p.

    For each m dividing the residue period, v(m p^k) is evaluated for
    k = 0, 1, ... until two consecutive increments agree; that increment is s_m.
    """
    if residue_period % p == 0:
        raise ArgumentError("the residue period must be coprime to p")
    s_vals: dict[int, int] = {}
    onset = 0
    for m in nm.divisors(residue_period):
        vals = [v(m), v(m * p), v(m * p * p)]
        k = 0
        while vals[k + 1] - vals[k] != vals[k + 2] - vals[k + 1]:
            k += 1
            if k > cap:
                raise StabilizationError(f"v(m p^k) not linear in k by k={cap} for m={m}")
            vals.append(v(m * p ** (k + 2)))
        s_vals[m] = vals[k + 1] - vals[k]
        if s_vals[m] < 0:
            raise InvariantViolation(f"negative slope at m={m}")
        onset = max(onset, k)
    s = GcdSeq.from_map(residue_period, s_vals)
    period = residue_period * p**onset
    r = GcdSeq.from_function(period, lambda d: Fraction(p) ** (-v(d) + int(s(d)) * nm.padic_ord(d, p)))
    for n in range(1, 2 * period * p + 1):
        want = -v(n)
        got = _log_p_exact(r(n), p) - int(s(n)) * nm.padic_ord(n, p)
        if want != got:
            raise InvariantViolation(f"p-adic profile fails at n={n}")
    return PadicProfile(p, r, s, residue_period, onset)


def _log_p_exact(x: Fraction, p: int) -> int:
    if x.numerator == 1 and x.denominator != 1:
        return -nm.padic_ord(x.denominator, p)
    return nm.padic_ord(x.numerator, p)


def _order_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 1
    k, x = 1, a
    while x != 1:
        x = x * a % p
        k += 1
    return k


# ---------------------------------------------------------------------------
# constructors


def torus_system(p: int, M) -> FixedPointReport:
    """f(n) = |det(M^n - 1)| * |det(M^n - 1)|_p."""
    nm._check_prime(p)
    M = nm.as_matrix(M)
    nm.check_confined(M)
    prof = padic_profile(lambda n: vp_det_power_minus_one(M, n, p), p, nm.residue_period(M, p))
    params = FadParams.build(M, 1, prof.r, [PrimeData(p, prof.s)])

    def count(n: int) -> int:
        return nm.strip_prime(abs(nm.det_power_minus_one(M, n)), p)

    return FixedPointReport(Torus(p, M), params, ("torus: det(M^n-1) with p-part removed",), count)


def s_integer_system(xi: int, S: Sequence[int] = ()) -> FixedPointReport:
    """f(n) = |xi^n - 1| prod_{p in S} |xi^n - 1|_p."""
    if xi in (-1, 0, 1):
        raise NotConfined(f"xi = {xi} is not confined")
    S = tuple(sorted(set(S)))
    r = GcdSeq.constant(1)
    primes = []
    for p in S:
        nm._check_prime(p)
        prof = padic_profile(lambda n, p=p: nm.padic_ord(xi**n - 1, p), p, _order_mod(xi, p) if xi % p else 1)
        r = r * prof.r
        primes.append(PrimeData(p, prof.s))
    params = FadParams.build([[xi]], 1, r, primes)

    def count(n: int) -> int:
        v = abs(xi**n - 1)
        for p in S:
            v = nm.strip_prime(v, p)
        return v

    return FixedPointReport(RationalSInteger(xi, S), params, ("S-integer: |xi^n-1| times S-adic absolute values",), count)


def elliptic_system(p: int, m: int, ordinary: bool = True) -> FixedPointReport:
    """f(n) = (m^n - 1)^2 |m^n - 1|_p^e with e = 1 (ordinary) or 2 (supersingular)."""
    nm._check_prime(p)
    if abs(m) < 2:
        raise NotConfined("multiplication by m needs |m| >= 2")
    if m % p == 0:
        raise Unsupported("multiplication by a multiple of p is not covered")
    e = 1 if ordinary else 2
    prof = padic_profile(lambda n: e * nm.padic_ord(m**n - 1, p), p, _order_mod(m, p))
    params = FadParams.build([[m, 0], [0, m]], 1, prof.r, [PrimeData(p, prof.s)])

    def count(n: int) -> int:
        k = m**n - 1
        return k * k // p ** (e * nm.padic_ord(k, p))

    return FixedPointReport(EllipticMult(p, m, ordinary), params, (f"elliptic: [m^n - 1] kernel, p-part exponent {e}",), count)


def vector_group_system(p: int, nu: int, modulus, sigma) -> FixedPointReport:
    """f(n) = p^(a n - t_n |n|_p^-1) with c = p^a and t = t^deg + t^ins."""
    desc = VectorGroup(p, nu, tuple(modulus) if modulus else None, sigma)
    mat = desc.matrix
    if mat.is_zero():
        raise NotConfined("the zero endomorphism is not confined")
    dp = tw.deg_profile(mat, p)
    ip = tw.insep_profile(mat, p)
    t = dp.t + ip
    params = FadParams.build([], p**dp.a, None, [PrimeData(p, t=t)])

    def count(n: int) -> int:
        return p ** tw.separable_exponent(mat, n)

    return FixedPointReport(desc, params, ("vector group: deg_phi - v_phi of ddet(sigma^n - 1)",), count)


def _laurent_pow_minus_one(desc: AdditiveCA, n: int) -> tuple[int, tuple[int, ...]]:
    """(low exponent, coefficients) of xi^n - 1 over F_p."""
    F = tw.field(desc.p)
    base = tuple(desc.coeffs)
    acc: tw.CPoly = (1,)
    b = base
    k = n
    while k:
        if k & 1:
            acc = tw.cp_mul(F, acc, b)
        b = tw.cp_mul(F, b, b)
        k >>= 1
    low = desc.low * n
    coeffs = list(acc)
    # subtract t^0
    idx = -low
    if idx < 0:
        coeffs = [F.neg(1)] + [0] * (-idx - 1) + coeffs
        low = 0
    else:
        while len(coeffs) <= idx:
            coeffs.append(0)
        coeffs[idx] = F.sub(coeffs[idx], 1)
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        low += 1
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return low, tuple(coeffs)


def ca_length(desc: AdditiveCA, n: int) -> int:
    low, coeffs = _laurent_pow_minus_one(desc, n)
    if not coeffs:
        raise NotConfined(f"xi^{n} = 1")
    return len(coeffs) - 1


def ca_system(p: int, low: int, coeffs: Sequence[int]) -> FixedPointReport:
    """f(n) = p^length(xi^n - 1), with c = p^a for a = max(high, 0) + max(-low, 0)."""
    nm._check_prime(p)
    desc = AdditiveCA(p, low, tuple(coeffs))
    if len(desc.coeffs) == 1 and desc.low == 0:
        raise NotConfined("a constant Laurent polynomial is a root of unity")
    a = max(desc.high, 0) + max(-desc.low, 0)
    orders = []
    if desc.low == 0:
        orders.append(_order_mod(desc.coeffs[0], p))
    if desc.high == 0:
        orders.append(_order_mod(desc.coeffs[-1], p))
    period = nm.lcm_all(orders) if orders else 1
    t = GcdSeq.from_function(period, lambda m: a * m - ca_length(desc, m))
    for n in range(1, 2 * period * p + 1):
        if a * n - int(t(n)) * p ** nm.padic_ord(n, p) != ca_length(desc, n):
            raise InvariantViolation(f"cellular automaton profile fails at n={n}")
    params = FadParams.build([], p**a, None, [PrimeData(p, t=t)])
    return FixedPointReport(desc, params, ("cellular automaton: length of xi^n - 1",), lambda n: p ** ca_length(desc, n))


def _is_p_power(c: int, p: int) -> bool:
    return c >= 1 and nm.strip_prime(c, p) == 1


def reductive_system(desc: ReductiveSteinberg) -> FixedPointReport:
    """sigma_n = c^n |det(J^n - 1)| |det(Z^n - 1)| |det(Z^n - 1)|_p."""
    p = desc.p
    nm._check_prime(p)
    if not _is_p_power(desc.c, p):
        raise ArgumentError(f"c = {desc.c} is not a power of {p}")
    nm.check_confined(desc.J)
    if desc.Z:
        nm.check_confined(desc.Z)
    A = nm.block_diag(desc.J, desc.Z)
    if desc.Z:
        prof = padic_profile(lambda n: vp_det_power_minus_one(desc.Z, n, p), p, nm.residue_period(desc.Z, p))
        params = FadParams.build(A, desc.c, prof.r, [PrimeData(p, prof.s)])
    else:
        params = FadParams.build(A, desc.c)

    def count(n: int) -> int:
        return steinberg_count(desc, n)

    return FixedPointReport(desc, params, ("Steinberg: c^n |det(1 - J^n)| with central torus factor",), count)


def steinberg_count(desc: ReductiveSteinberg, n: int) -> int:
    z = abs(nm.det_power_minus_one(desc.Z, n)) if desc.Z else 1
    return desc.c**n * abs(nm.det_power_minus_one(desc.J, n)) * nm.strip_prime(z, desc.p)


def frobenius_descriptor(q: int, degrees: Sequence[int], central_rank: int = 0) -> ReductiveSteinberg:
    """q-Frobenius on a reductive group with the given invariant degrees and central torus rank."""
    p = _prime_of_power(q)
    J = nm.block_diag(*[((q**d,),) for d in degrees]) if degrees else ()
    Z = nm.scalar_matrix(q, central_rank) if central_rank else ()
    return ReductiveSteinberg(p, J, q ** sum(d - 1 for d in degrees), Z)


def chevalley_count(q: int, degrees: Sequence[int], central_rank: int = 0) -> int:
    """q^(sum(d_i - 1)) prod (q^d_i - 1) (q - 1)^z."""
    out = q ** sum(d - 1 for d in degrees) * (q - 1) ** central_rank
    for d in degrees:
        out *= q**d - 1
    return out


def gl_degrees(n: int) -> tuple[int, ...]:
    return tuple(range(1, n + 1))


def ree_descriptor(a: int) -> ReductiveSteinberg:
    """The G_2 endomorphism over F_3 swapping long and short roots, with sigma^2 = F^(2a+1)."""
    if a < 0:
        raise ArgumentError("a must be nonnegative")
    q = 3 ** (2 * a + 1)
    return ReductiveSteinberg(3, ((q, 0), (0, -(q**3))), 3 ** (6 * a + 3))


def _prime_of_power(q: int) -> int:
    for p in range(2, q + 1):
        if q % p == 0:
            if nm.strip_prime(q, p) != 1:
                raise ArgumentError(f"{q} is not a prime power")
            return p
    raise ArgumentError(f"{q} is not a prime power")


def finite_system(cycles: Sequence[tuple[int, int]]) -> FixedPointReport:
    desc = Finite(tuple(tuple(c) for c in cycles))
    counts = dict(desc.cycles)
    if not counts:
        raise ArgumentError("at least one cycle is needed")
    period = nm.lcm_all(counts)

    def count(n: int) -> int:
        return sum(length * k for length, k in counts.items() if n % length == 0)

    r = GcdSeq.from_function(period, count)
    if any(v <= 0 for _, v in r.values):
        raise ArgumentError("some iterate has no fixed point; FAD values must be positive")
    return FixedPointReport(desc, FadParams.build([], 1, r), ("finite permutation",), count)


def product_system(reports: Sequence[FixedPointReport]) -> FixedPointReport:
    if not reports:
        raise ArgumentError("an empty product")
    params = reduce(fad_product, (r.params for r in reports))
    counters = [r.counter for r in reports]

    def count(n: int) -> int:
        out = 1
        for c in counters:
            out *= c(n)
        return out

    prov = tuple(x for r in reports for x in r.provenance)
    return FixedPointReport(Product(tuple(r.descriptor for r in reports)), params, prov, count)


def raw_system(params: FadParams) -> FixedPointReport:
    def count(n: int) -> int:
        v = fad_eval(params, n)
        if v.denominator != 1:
            raise ArgumentError(f"f({n}) = {v} is not an integer")
        return int(v)

    return FixedPointReport(RawFad(params), params, ("raw parameters",), count)


def build(desc) -> FixedPointReport:
    """Dispatch a descriptor to its constructor."""
    if isinstance(desc, Torus):
        return torus_system(desc.p, desc.M)
    if isinstance(desc, VectorGroup):
        return vector_group_system(desc.p, desc.nu, desc.modulus, desc.sigma)
    if isinstance(desc, RationalSInteger):
        return s_integer_system(desc.xi, desc.S)
    if isinstance(desc, AdditiveCA):
        return ca_system(desc.p, desc.low, desc.coeffs)
    if isinstance(desc, EllipticMult):
        return elliptic_system(desc.p, desc.m, desc.ordinary)
    if isinstance(desc, ReductiveSteinberg):
        return reductive_system(desc)
    if isinstance(desc, Finite):
        return finite_system(desc.cycles)
    if isinstance(desc, Product):
        return product_system([build(d) for d in desc.factors])
    if isinstance(desc, RawFad):
        return raw_system(desc.params)
    raise ArgumentError(f"unknown descriptor {desc!r}")


# ---------------------------------------------------------------------------
# oracles


def torus_oracle(p: int, M, n: int, mode: str = "snf", M_field: int | None = None, budget: int = ENUMERATION_BUDGET) -> int:
    """Fixed points of M^n on the torus, by Smith form or by enumeration over F_{p^M_field}^*."""
    M = nm.as_matrix(M)
    B = nm.matsub(nm.matpow(M, n), nm.identity(len(M)))
    if mode == "snf":
        diag = nm.smith_form_Z(B).diag
        if any(a == 0 for a in diag) or len(diag) < len(M):
            raise NotConfined("M^n - 1 is singular")
        out = 1
        for a in diag:
            out *= nm.strip_prime(a, p)
        return out
    if mode != "enumerate":
        raise ArgumentError(f"unknown oracle mode {mode!r}")
    if M_field is None:
        raise ArgumentError("enumeration needs the extension degree")
    N = p**M_field - 1
    s = len(M)
    if N**s > budget:
        raise BudgetExceeded(f"{N}^{s} points exceed the budget {budget}")
    # x = g^e coordinatewise with g a generator of the cyclic group F^*; x^(M^n) = x iff B e = 0 mod N
    count = 0
    for e in itertools.product(range(N), repeat=s):
        if all(sum(B[i][j] * e[j] for j in range(s)) % N == 0 for i in range(s)):
            count += 1
    return count


def vector_group_oracle(desc: VectorGroup, n: int, M_field: int, max_dim: int = 64) -> int:
    """p^(dim ker) of sigma^n - 1 acting F_p-linearly on (F_{q^M_field})^r."""
    mat = desc.matrix
    if M_field * mat.size * desc.nu > max_dim:
        raise BudgetExceeded(f"dimension {M_field * mat.size * desc.nu} exceeds {max_dim}")
    return desc.p ** tw.kernel_exponent(mat, n, M_field)


def vector_group_saturated(desc: VectorGroup, n: int, max_dim: int = 64) -> int:
    """Largest kernel over F_{q^M} for all M within the dimension budget."""
    mat = desc.matrix
    top = max_dim // (mat.size * desc.nu)
    return max(vector_group_oracle(desc, n, M, max_dim) for M in range(1, top + 1))


def _frobenius_poly_matrix(desc: VectorGroup, n: int):
    """sigma(x)^n - 1 over F_p[x], with x standing for the p-Frobenius."""
    import sympy

    if desc.nu != 1:
        raise Unsupported("the Frobenius-module oracle needs coefficients in F_p")
    x = sympy.Symbol("x")
    S = sympy.Matrix([[sum(int(c[0]) * x**i for i, c in enumerate(e)) for e in row] for row in desc.sigma])
    B = S**n - sympy.eye(S.rows)
    return x, B


def _invariant_factors(x, B, p: int) -> list:
    import sympy

    r = B.rows
    zero = sympy.Poly(0, x, modulus=p)
    divs = [sympy.Poly(1, x, modulus=p)]
    for k in range(1, r + 1):
        g = zero
        for rows in itertools.combinations(range(r), k):
            for cols in itertools.combinations(range(r), k):
                g = g.gcd(sympy.Poly(B.extract(list(rows), list(cols)).det(), x, modulus=p))
        divs.append(g)
    out = []
    for k in range(1, r + 1):
        out.append(zero if divs[k].is_zero else sympy.div(divs[k], divs[k - 1])[0])
    return out


def vector_group_module_oracle(desc: VectorGroup, n: int, M: int | None = None) -> int:
    """Kernel size of sigma^n - 1 on (F_{p^M})^r without building the field.

    With coefficients in F_p the Frobenius commutes with sigma, and by the
    normal basis theorem F_{p^M} is F_p[x]/(x^M - 1) as a module over
    F_p[Frobenius]. The kernel has the size of the cokernel, read off the
    invariant factors e_i of sigma(x)^n - 1 as p^(sum deg gcd(e_i, x^M - 1)).
    M=None takes the algebraic closure: every e_i with its x-power removed.
    """
    import sympy

    x, B = _frobenius_poly_matrix(desc, n)
    p = desc.p
    total = 0
    for e in _invariant_factors(x, B, p):
        if M is None:
            if e.is_zero:
                raise NotConfined(f"sigma^{n} - 1 is not an isogeny")
            c = e.all_coeffs()[::-1]
            total += e.degree() - next(i for i, a in enumerate(c) if int(a) % p)
        else:
            total += e.gcd(sympy.Poly(x**M - 1, x, modulus=p)).degree()
    return p**total


def ca_oracle(desc: AdditiveCA, n: int, budget: int = 400) -> int:
    """Fixed points of the n-th iterate among spatially periodic configurations.

    Every fixed point is periodic with period P, the multiplicative order of t
    modulo xi^n - 1 with its t-power stripped; the fixed space is the kernel of
    the P x P circulant of xi^n - 1 over F_p.
    """
    p = desc.p
    F = tw.field(p)
    low, g = _laurent_pow_minus_one(desc, n)
    if not g:
        raise NotConfined(f"xi^{n} = 1")
    P = tw.x_order_mod(F, tw.cp_monic(F, g), budget) if len(g) > 1 else 1
    if P > budget:
        raise BudgetExceeded(f"period {P} exceeds {budget}")
    # (t^k.x)_j = x_{j-k}
    rows = [[0] * P for _ in range(P)]
    for i, c in enumerate(g):
        k = low + i
        for j in range(P):
            rows[(j + k) % P][j] = (rows[(j + k) % P][j] + c) % p
    return p ** (P - tw._fp_rank(rows, p))


# elliptic curves y^2 = x^3 + a2 x^2 + a4 x + a6 in odd characteristic


def _hasse_invariant(p: int, a2: int, a4: int, a6: int) -> int:
    F = tw.field(p)
    f = (a6 % p, a4 % p, a2 % p, 1)
    g: tw.CPoly = (1,)
    for _ in range((p - 1) // 2):
        g = tw.cp_mul(F, g, f)
    return g[p - 1] if len(g) > p - 1 else 0


def default_curve(p: int, ordinary: bool) -> tuple[int, int, int]:
    """(a2, a4, a6) of a fixed curve of the requested type; odd p only."""
    if p == 2:
        raise Unsupported("the point-count oracle needs odd characteristic")
    if p == 3:
        return (1, 0, 1) if ordinary else (0, 2, 0)
    for a2, a4, a6 in itertools.product(range(p), repeat=3):
        disc = -4 * a2**3 * a6 + a2**2 * a4**2 + 18 * a2 * a4 * a6 - 4 * a4**3 - 27 * a6**2
        if disc % p and (_hasse_invariant(p, a2, a4, a6) != 0) == ordinary:
            return (a2, a4, a6)
    raise Unsupported(f"no curve of the requested type found over F_{p}")


def _division_polys(p: int, curve: tuple[int, int, int], N: int) -> tuple[tw.CPoly, tw.CPoly]:
    """(f_N, R) with psi_N = f_N for odd N, psi_N = 2y f_N for even N, and R = (2y)^2."""
    F = tw.field(p)
    a2, a4, a6 = curve
    b2, b4, b6, b8 = 4 * a2, 2 * a4, 4 * a6, 4 * a2 * a6 - a4 * a4
    P = lambda *cs: tw.cp_norm(F.scalar(c) for c in cs)  # noqa: E731
    R = P(b6, 2 * b4, b2, 4)
    R2 = tw.cp_mul(F, R, R)
    memo: dict[int, tw.CPoly] = {
        0: (),
        1: (1,),
        2: (1,),
        3: P(b8, 3 * b6, 3 * b4, b2, 3),
        4: P(b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8, 10 * b6, 5 * b4, b2, 2),
    }
    mul = lambda a, b: tw.cp_mul(F, a, b)  # noqa: E731
    sub = lambda a, b: tw.cp_sub(F, a, b)  # noqa: E731

    def f(k: int) -> tw.CPoly:
        if k in memo:
            return memo[k]
        m = k // 2
        if k % 2:
            a = mul(f(m + 2), mul(f(m), mul(f(m), f(m))))
            b = mul(f(m - 1), mul(f(m + 1), mul(f(m + 1), f(m + 1))))
            if m % 2 == 0:
                a = mul(R2, a)
            else:
                b = mul(R2, b)
            out = sub(a, b)
        else:
            out = mul(f(m), sub(mul(f(m + 2), mul(f(m - 1), f(m - 1))), mul(f(m - 2), mul(f(m + 1), f(m + 1)))))
        memo[k] = out
        return out

    return f(N), R


def torsion_count(p: int, curve: tuple[int, int, int], N: int) -> int:
    """#E[N] over the algebraic closure, from the distinct roots of division polynomials."""
    if N == 1:
        return 1
    F = tw.field(p)
    fN, R = _division_polys(p, curve, N)
    g = fN if N % 2 else tw.cp_mul(F, fN, R)
    rad = tw.cp_radical(F, g)
    on_axis = tw.cp_gcd(F, rad, R)
    return 1 + 2 * tw.cp_deg(rad) - tw.cp_deg(on_axis)


def elliptic_oracle(desc: EllipticMult, n: int, curve: tuple[int, int, int] | None = None) -> int:
    """Fixed points of [m]^n, i.e. points killed by m^n - 1, counted on a concrete curve."""
    curve = curve or default_curve(desc.p, desc.ordinary)
    return torsion_count(desc.p, curve, abs(desc.m**n - 1))


def finite_oracle(desc: Finite, n: int) -> int:
    """Build the permutation and count fixed points of its n-th power."""
    perm: list[int] = []
    for length, k in desc.cycles:
        for _ in range(k):
            base = len(perm)
            perm.extend(base + (i + 1) % length for i in range(length))
    count = 0
    for x in range(len(perm)):
        y = x
        for _ in range(n):
            y = perm[y]
        count += y == x
    return count


def oracle(desc, n: int, budget: int | None = None) -> int:
    """Independent count for the descriptor kinds that have one."""
    if isinstance(desc, Torus):
        return torus_oracle(desc.p, desc.M, n)
    if isinstance(desc, VectorGroup):
        if desc.nu == 1:
            return vector_group_module_oracle(desc, n)
        return vector_group_saturated(desc, n, budget or 64)
    if isinstance(desc, AdditiveCA):
        return ca_oracle(desc, n, budget or 400)
    if isinstance(desc, EllipticMult):
        return elliptic_oracle(desc, n)
    if isinstance(desc, Finite):
        return finite_oracle(desc, n)
    if isinstance(desc, RationalSInteger):
        return torus_oracle_s_integer(desc, n)
    if isinstance(desc, Product):
        out = 1
        for d in desc.factors:
            out *= oracle(d, n, budget)
        return out
    raise Unsupported(f"no oracle for {desc.kind} descriptors")


def torus_oracle_s_integer(desc: RationalSInteger, n: int) -> int:
    """Smith form of xi^n - 1 with every S-part removed."""
    v = nm.smith_form_Z(((desc.xi**n - 1,),)).diag[0]
    for p in desc.S:
        v = nm.strip_prime(v, p)
    return v


# ---------------------------------------------------------------------------
# zeta equivalence of tori


def torus_zeta_equivalence(p: int, M1, M2) -> str:
    """Compare two irreducible toral endomorphisms up to isogeny and time reversal."""
    M1, M2 = nm.as_matrix(M1), nm.as_matrix(M2)
    nm.check_confined(M1)
    nm.check_confined(M2)
    P1, P2 = nm.charpoly(M1), nm.charpoly(M2)
    for P in (P1, P2):
        if not P.is_irreducible:
            raise Unsupported("reducible characteristic polynomial")
    if P1 == P2:
        return "equivariantly_isogenous"
    c0 = P1.eval(0)
    if abs(c0) == 1 and P1.degree() == P2.degree():
        rev = nm.sympy.Poly(list(reversed(P1.all_coeffs())), nm.X, domain="ZZ") * c0
        if rev == P2:
            return "time_reversed_isogenous"
    return "distinct"
