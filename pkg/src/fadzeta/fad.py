"""FAD parameters: evaluation, verification, products and realizability tests."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from . import numeric as nm
from .errors import ArgumentError, IrrationalValue
from .sequences import GcdSeq, MultTypeHandle, mult_type_build

ZERO = GcdSeq.constant(0)
ONE = GcdSeq.constant(1)


@dataclass(frozen=True)
class PrimeData:
    """Distortion data at one prime: the exponents s (on |n|_p) and t (on p^{-|n|_p^{-1}})."""

    p: int
    s: GcdSeq = ZERO
    t: GcdSeq = ZERO

    def __post_init__(self) -> None:
        nm._check_prime(self.p)
        for name, seq in (("s", self.s), ("t", self.t)):
            if seq.period % self.p == 0:
                raise ArgumentError(f"period of {name} at p={self.p} must be coprime to p")
            if any(v < 0 for _, v in seq.values):
                raise ArgumentError(f"{name} at p={self.p} must be nonnegative")

    def is_trivial(self) -> bool:
        return self.s.is_zero() and self.t.is_zero()

    def exponent(self, n: int) -> Fraction:
        """The power of p contributed at n: -s_n ord_p(n) - t_n p^ord_p(n)."""
        k = nm.padic_ord(n, self.p)
        return -self.s(n) * k - self.t(n) * self.p**k


@dataclass(frozen=True)
class FadParams:
    """f_n = |det(A^n - 1)| c^n r_n prod_p |n|_p^{s_p,n} p^{-t_p,n |n|_p^{-1}}."""

    handle: MultTypeHandle
    c: Fraction
    r: GcdSeq = ONE
    primes: tuple[PrimeData, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", Fraction(self.c))
        if self.c <= 0:
            raise ArgumentError("c must be positive")
        if any(v <= 0 for _, v in self.r.values):
            raise ArgumentError("r must take positive values")
        ps = [d.p for d in self.primes]
        if len(set(ps)) != len(ps):
            raise ArgumentError("each prime may appear once")
        object.__setattr__(self, "primes", tuple(sorted(self.primes, key=lambda d: d.p)))

    @classmethod
    def build(
        cls,
        A: Iterable[Iterable[int]] = (),
        c: Fraction | int = 1,
        r: GcdSeq | Fraction | int | None = None,
        primes: Iterable[PrimeData] = (),
    ) -> "FadParams":
        if r is None:
            r = ONE
        elif not isinstance(r, GcdSeq):
            r = GcdSeq.constant(r)
        return cls(mult_type_build(A), Fraction(c), r, tuple(primes)).normalized()

    @property
    def A(self) -> nm.IntMatrix:
        return self.handle.A

    @property
    def S(self) -> tuple[int, ...]:
        return tuple(d.p for d in self.primes)

    def prime(self, p: int) -> PrimeData:
        for d in self.primes:
            if d.p == p:
                return d
        return PrimeData(p)

    def normalized(self) -> "FadParams":
        """Drop primes whose s and t vanish identically."""
        return replace(self, primes=tuple(d for d in self.primes if not d.is_trivial()))

    @property
    def all_s_t_zero(self) -> bool:
        return all(d.is_trivial() for d in self.primes)

    @property
    def period(self) -> int:
        """Common period of r and all s, t."""
        return nm.lcm_all([self.r.period] + [q.period for d in self.primes for q in (d.s, d.t)])

    def __call__(self, n: int) -> Fraction:
        return fad_eval(self, n)


def fad_eval(fp: FadParams, n: int) -> Fraction:
    if n < 1:
        raise ArgumentError("n must be positive")
    value = abs(fp.handle.d(n)) * fp.c**n * fp.r(n)
    for d in fp.primes:
        e = d.exponent(n)
        if e.denominator != 1:
            raise IrrationalValue(f"p-power exponent {e} at p={d.p}, n={n} is not an integer")
        value *= Fraction(d.p) ** int(e)
    return Fraction(value)


def fad_values(fp: FadParams, N: int) -> list[Fraction]:
    return [fad_eval(fp, n) for n in range(1, N + 1)]


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    first_mismatch: int | None = None
    expected: Fraction | None = None
    got: Fraction | None = None


def fad_verify(fp: FadParams, oracle: Callable[[int], Fraction | int], N: int) -> VerifyResult:
    for n in range(1, N + 1):
        want = Fraction(oracle(n))
        got = fad_eval(fp, n)
        if want != got:
            return VerifyResult(False, n, want, got)
    return VerifyResult(True)


def _merge_primes(a: FadParams, b: FadParams) -> tuple[PrimeData, ...]:
    out = []
    for p in sorted(set(a.S) | set(b.S)):
        x, y = a.prime(p), b.prime(p)
        out.append(PrimeData(p, x.s + y.s, x.t + y.t))
    return tuple(out)


def fad_product(a: FadParams, b: FadParams) -> FadParams:
    """Parameters of the pointwise product: det factors multiply through the block sum."""
    handle = mult_type_build(nm.block_diag(a.A, b.A))
    return FadParams(handle, a.c * b.c, a.r * b.r, _merge_primes(a, b)).normalized()


# ---------------------------------------------------------------------------
# realizability

EXACT_BITS_CAP = 1 << 20


class IntSequence:
    """An integer sequence that can also be reduced mod m and sized without expanding it.

    Subclasses override :meth:`mod` and :meth:`log2` when the values are too
    large to write down.
    """

    def __init__(self, f: Callable[[int], int | Fraction] | None = None) -> None:
        self._f = f

    def __call__(self, n: int) -> int:
        v = Fraction(self._f(n))
        if v.denominator != 1:
            raise ArgumentError(f"term {n} = {v} is not an integer")
        return int(v)

    def mod(self, n: int, m: int) -> int:
        return self(n) % m

    def log2(self, n: int) -> float | None:
        """log2 of the (positive) term, or None when the term is small enough to expand."""
        return None


class PowerSequence(IntSequence):
    """base ** exponent(n), with the exponent an exact (possibly huge) integer."""

    def __init__(self, base: int, exponent: Callable[[int], int]) -> None:
        super().__init__()
        if base < 2:
            raise ArgumentError("base must be at least 2")
        self.base = base
        self.exponent = exponent

    def __call__(self, n: int) -> int:
        e = self.exponent(n)
        if e * self.base.bit_length() > EXACT_BITS_CAP:
            raise ArgumentError(f"term {n} is too large to expand")
        return self.base**e

    def mod(self, n: int, m: int) -> int:
        return pow(self.base, self.exponent(n), m)

    def log2(self, n: int) -> float | None:
        e = self.exponent(n)
        if e * self.base.bit_length() <= EXACT_BITS_CAP:
            return None
        return e * math.log2(self.base)


def _as_sequence(f: Callable[[int], int | Fraction] | IntSequence) -> IntSequence:
    return f if isinstance(f, IntSequence) else IntSequence(f)


def orbit_numbers_times_length(f: Callable[[int], int | Fraction], ell: int) -> Fraction:
    """sum over n | ell of mu(ell/n) f(n), i.e. ell times the number of orbits of length ell."""
    return sum((nm.mobius(ell // n) * Fraction(f(n)) for n in nm.divisors(ell)), Fraction(0))


@dataclass(frozen=True)
class Failure:
    ell: int
    reason: str  # "nonnegativity" or "integrality"
    value: Fraction | None  # the Moebius sum when it was expanded, else its residue mod ell


@dataclass(frozen=True)
class RealizabilityVerdict:
    """Bounded necessary-condition test; a pass never claims realizability beyond N."""

    passed: bool
    N: int
    failures: tuple[Failure, ...] = ()
    bound_used: bool = False
    undecided: tuple[int, ...] = ()

    @property
    def witness(self) -> Failure | None:
        return self.failures[0] if self.failures else None


def _nonnegative_by_dominance(seq: IntSequence, ell: int) -> bool | None:
    """True if f(ell) provably exceeds the sum of the other terms, None if undecided."""
    top = seq.log2(ell)
    if top is None:
        return None
    others = [n for n in nm.divisors(ell) if n < ell]
    logs = []
    for n in others:
        v = seq.log2(n)
        logs.append(math.log2(max(seq(n), 1)) if v is None else v)
    if not logs:
        return True
    bound = max(logs) + math.log2(len(logs))
    # generous margin for float rounding of the logarithms
    return True if top > bound + 1e-6 * max(1.0, abs(top)) + 1 else None


def realizable_check(
    f: Callable[[int], int | Fraction] | IntSequence,
    N: int,
    C: int | None = None,
    D: int | None = None,
) -> RealizabilityVerdict:
    """Check nonnegativity and integrality of the Moebius sums for every ell <= N.

    Integrality is decided exactly with residues mod ell. Nonnegativity is
    decided on the expanded sum when the terms are small, and otherwise by
    showing that f(ell) outweighs all the other terms. When C and D are given
    and C^(n+1) D <= f(n) <= C^(2n) D holds on 1..N, nonnegativity follows from
    that bound and is not checked term by term.
    """
    if N < 1:
        raise ArgumentError("N must be positive")
    seq = _as_sequence(f)
    bound_used = False
    if C is not None and D is not None:
        if C < 2 or D <= 0:
            raise ArgumentError("the bound needs C >= 2 and D > 0")
        bound_used = all(C ** (n + 1) * D <= seq(n) <= C ** (2 * n) * D for n in range(1, N + 1))
    failures: list[Failure] = []
    undecided: list[int] = []
    for ell in range(1, N + 1):
        residue = sum(nm.mobius(ell // n) * seq.mod(n, ell) for n in nm.divisors(ell)) % ell
        expandable = all(seq.log2(n) is None for n in nm.divisors(ell))
        total = orbit_numbers_times_length(seq, ell) if expandable else None
        if not bound_used:
            if total is not None:
                if total < 0:
                    failures.append(Failure(ell, "nonnegativity", total))
                    continue
            elif _nonnegative_by_dominance(seq, ell) is None:
                undecided.append(ell)
        if residue:
            failures.append(Failure(ell, "integrality", total if total is not None else Fraction(residue)))
    return RealizabilityVerdict(not failures and not undecided, N, tuple(failures), bound_used, tuple(undecided))


def validate_realizable_params(fp: FadParams) -> list[str]:
    """Necessary conditions on the parameters of a fixed-point count."""
    out = []
    if fp.c.denominator != 1:
        out.append(f"c not an integer: {nm.rational_str(fp.c)}")
    if all(d.t.is_integral() for d in fp.primes):
        for d in fp.primes:
            bad = [v for _, v in d.s.values if v.denominator != 1]
            if bad:
                out.append(f"p^s not rational at p={d.p}: s takes {nm.rational_str(bad[0])}")
    return out
