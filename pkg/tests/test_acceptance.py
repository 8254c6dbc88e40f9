"""Acceptance checks, one per criterion; each prints a PASS/FAIL line.

Run directly (python tests/test_acceptance.py) for just the twelve lines.
"""

from __future__ import annotations

import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import F_A, F_B, F_C, SIGMA_F5, TORUS_P2  # noqa: E402

from fadzeta import catalog  # noqa: E402
from fadzeta import systems as sy  # noqa: E402
from fadzeta import zeta as zt  # noqa: E402
from fadzeta.fad import FadParams, PowerSequence, realizable_check  # noqa: E402
from fadzeta.numeric import padic_ord  # noqa: E402
from fadzeta.sequences import GcdSeq  # noqa: E402


class Check:
    """Collects sub-results of one criterion."""

    def __init__(self) -> None:
        self.failed: list[str] = []
        self.notes: list[str] = []

    def expect(self, cond: bool, what: str) -> None:
        if not cond:
            self.failed.append(what)

    @property
    def ok(self) -> bool:
        return not self.failed

    def detail(self) -> str:
        return "; ".join(self.failed) if self.failed else "; ".join(self.notes)


def _torus(M, p=5):
    return sy.build(sy.Torus(p, M)).params


def _rational(num, den):
    return zt.Rational(tuple(Fraction(c) for c in num), tuple(Fraction(c) for c in den))


# ---------------------------------------------------------------------------


def check_1() -> Check:
    c = Check()
    t0 = time.perf_counter()
    for q in (2, 3, 4, 5):
        for n in range(1, 5):
            want = 1
            for i in range(n):
                want *= q**n - q**i
            got = sy.build(sy.frobenius_descriptor(q, sy.gl_degrees(n)))(1)
            c.expect(got == want, f"GL_{n}(F_{q}): {got} != {want}")
    for p in (3, 5, 7):
        got = sy.build(sy.frobenius_descriptor(p, (2,)))(1)
        c.expect(got == p * (p * p - 1), f"SL_2(F_{p}): {got}")
    elapsed = time.perf_counter() - t0
    c.expect(elapsed < 1.0, f"runtime {elapsed:.2f}s")
    c.notes.append(f"16 GL and 3 SL orders exact in {elapsed:.2f}s")
    return c


def check_2() -> Check:
    c = Check()
    fp = _torus(TORUS_P2, 2)
    d = fp.prime(2)
    c.expect(d.s.period == 1 and d.s(1) == 3, f"s = {d.s}")
    r = [fp.r(n) for n in (4, 1, 2, 3)]
    c.expect(fp.r.period == 4 and r == [4, Fraction(1, 2), 2, Fraction(1, 2)], f"r = {fp.r}")
    c.notes.append("s = 3, r by n mod 4 = (4, 1/2, 2, 1/2)")
    return c


def check_3() -> Check:
    c = Check()
    desc = sy.VectorGroup(5, 1, None, SIGMA_F5)
    rep = sy.build(desc)
    mat = desc.matrix
    from fadzeta import twisted as tw

    deg = tw.deg_profile(mat, 5)
    ins = tw.insep_profile(mat, 5)
    c.expect(deg.a == 1, f"a = {deg.a}")
    c.expect((deg.t(2), deg.t(1)) == (1, 0), f"t_deg = {deg.t}")
    c.expect(ins.period == 1 and ins(1) == 1, f"t_ins = {ins}")
    t = rep.params.prime(5).t
    c.expect((t(2), t(1)) == (2, 1), f"t = {t}")
    for n in range(1, 21):
        want = 5 ** (n - int(t(n)) * 5 ** padic_ord(n, 5))
        c.expect(rep(n) == want, f"sigma_{n} = {rep(n)} != {want}")
    # kernel over F_{5^M}, M <= 32; for n = 7 the fixed points need F_{5^1736}
    for n in range(1, 9):
        if n == 7:
            got = sy.vector_group_module_oracle(desc, n)
        else:
            got = sy.vector_group_saturated(desc, n)
        c.expect(got == rep(n), f"oracle n={n}: {got} != {rep(n)}")
    c.notes.append("a=1, t_deg=(1,0), t_ins=1, (t0,t1)=(2,1); kernel oracle agrees for n<=8 (n=7 by Frobenius-module count)")
    return c


def check_4() -> Check:
    c = Check()
    for p in (2, 3, 5):
        ga = sy.VectorGroup(p, 1, None, (((1, 1),),))
        ca = sy.AdditiveCA(p, 0, (1, 1))
        g, a = sy.build(ga), sy.build(ca)
        for n in range(1, 21):
            want = p ** (n - p ** padic_ord(n, p))
            c.expect(g(n) == want and a(n) == want, f"p={p} n={n}: {g(n)}, {a(n)} vs {want}")
            c.expect(sy.vector_group_module_oracle(ga, n) == want, f"G_a oracle p={p} n={n}")
        for n in range(1, 6):
            c.expect(sy.ca_oracle(ca, n) == a(n), f"CA oracle p={p} n={n}")
    c.notes.append("both systems equal p^(n - |n|_p^-1) for p in {2,3,5}, n <= 20")
    return c


def check_5() -> Check:
    c = Check()
    cases = [
        ("doubling_map", _rational((1, -1), (1, -2))),
        ("s_integer_minus2", _rational((1, 1), (1, -2))),
    ]
    for name, want in cases:
        form = zt.zeta_build(sy.build(catalog.load(name)).params)
        c.expect(isinstance(form, zt.Rational) and form.same_function(want), f"{name}: {form}")
    for m in range(2, 8):
        form = zt.zeta_build(FadParams.build([], m))
        c.expect(isinstance(form, zt.Rational) and form.same_function(_rational((1,), (1, -m))), f"m={m}: {form}")
    half = zt.zeta_build(FadParams.build([[5]], 1, GcdSeq.constant(Fraction(1, 2))))
    c.expect(
        isinstance(half, zt.RootRational) and half.root_index == 2 and half.base.same_function(_rational((1, -1), (1, -5))),
        f"(5^n-1)/2: {half}",
    )
    c.notes.append("(1-z)/(1-2z), (1+z)/(1-2z), 1/(1-mz) for m=2..7, zeta^2=(1-z)/(1-5z)")
    return c


def check_6() -> Check:
    c = Check()
    nonhol = {
        "elliptic p=3 m=2": sy.EllipticMult(3, 2, True),
        "CA 1+t": sy.AdditiveCA(3, 0, (1, 1)),
        "vector group sigma": sy.VectorGroup(5, 1, None, SIGMA_F5),
        "f_b": sy.Torus(5, F_B),
        "f_c": sy.Torus(5, F_C),
    }
    for name, d in nonhol.items():
        form = zt.zeta_build(sy.build(d).params)
        c.expect(isinstance(form, zt.NonHolonomic), f"{name}: {form.kind}")
    for name, d in catalog.EXAMPLES.items():
        fp = sy.build(d).params
        form = zt.zeta_build(fp)
        holonomic = isinstance(form, (zt.Rational, zt.RootRational))
        c.expect(holonomic == fp.all_s_t_zero, f"{name}: {form.kind} with s/t zero = {fp.all_s_t_zero}")
    c.notes.append(f"non-holonomic exactly when some s or t is nonzero ({len(catalog.EXAMPLES) + 5} systems)")
    return c


def check_7() -> Check:
    c = Check()
    t0 = time.perf_counter()
    rep = zt.orbit_counts(_torus(F_A), 400)
    elapsed = time.perf_counter() - t0
    target = Fraction(625, 624)
    bad = [N for N in range(20, 401) if not (rep.Pi[N].lo > target - Fraction(1, 1000) and rep.Pi[N].hi < target + Fraction(1, 1000))]
    c.expect(not bad, f"|Pi(N) - 625/624| >= 1e-3 at N = {bad[:5]}")
    c.expect(elapsed < 10, f"runtime {elapsed:.2f}s")
    kinds = [zt.classify_accumulation(_torus(M)).kind for M in (F_A, F_B, F_C)]
    c.expect(kinds == ["Finite", "FiniteUnionCantor", "ContainsInterval"], f"classes {kinds}")
    c.notes.append(f"Pi(20) in {rep.Pi[20]}, N<=400 in {elapsed:.2f}s, classes {'/'.join(kinds)}")
    return c


def check_8() -> Check:
    c = Check()
    th = zt.theta(_torus(F_C))
    c.expect(th.exact and (th.theta_prime, th.theta) == (0, Fraction(1, 2)), f"f_c: {th}")
    e = sy.EllipticMult(3, 2, True)
    th2 = zt.theta(sy.build(sy.Product((e, e))).params)
    c.expect(th2.theta == Fraction(3, 4), f"elliptic square: {th2}")
    c.notes.append("f_c (0, 1/2); product of two elliptic systems Theta = 3/4")
    return c


def check_9() -> Check:
    c = Check()
    want = {"f_a": (F_A, "0"), "f_b": (F_B, "Z/124Z x Z_5"), "f_c": (F_C, "Z/3Z x T x Z_5")}
    for name, (M, group) in want.items():
        d = zt.detector_structure(_torus(M))
        c.expect(str(d) == group and d.t_exact, f"{name}: {d}")
    c.notes.append("0 / Z/124Z x Z_5 / Z/3Z x T x Z_5, t exact")
    return c


def _realizability_parts() -> dict[str, tuple[bool, str]]:
    out = {}
    v = realizable_check(PowerSequence(2, lambda n: 2**n), 50)
    out["2^(2^n) passes"] = (v.passed, f"witness ell={v.witness.ell} ({v.witness.reason})" if v.witness else "")
    v = realizable_check(lambda n: (5**n - 1) // 2, 50)
    out["(5^n-1)/2 passes"] = (v.passed, "")
    v = realizable_check(lambda n: n, 50)
    out["n fails"] = (not v.passed and v.witness.ell == 2, f"witness ell={v.witness.ell}" if v.witness else "")
    v = realizable_check(lambda n: -1, 50)
    out["-1 fails"] = (not v.passed and v.witness.ell == 1 and v.witness.reason == "nonnegativity", "")
    return out


def check_10() -> Check:
    c = Check()
    for what, (ok, info) in _realizability_parts().items():
        c.expect(ok, f"{what}: no ({info})" if info else f"{what}: no")
    c.notes.append("all four verdicts as stated")
    return c


def check_11() -> Check:
    c = Check()
    t0 = time.perf_counter()
    r = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", str(Path(__file__).with_name("test_properties.py"))],
        capture_output=True,
        text=True,
    )
    elapsed = time.perf_counter() - t0
    tail = r.stdout.strip().splitlines()[-1] if r.stdout.strip() else r.stderr[-200:]
    c.expect(r.returncode == 0, f"property suites: {tail}")
    c.expect(elapsed < 60, f"runtime {elapsed:.1f}s")
    c.notes.append(f"{tail} ({elapsed:.1f}s)")
    return c


def check_12() -> Check:
    c = Check()
    for a in (0, 1):
        rep = sy.build(sy.ree_descriptor(a))
        q = 3 ** (2 * a + 1)
        for n in range(1, 4):
            want = sy.chevalley_count(q**n, (2, 6))
            c.expect(rep(2 * n) == want, f"a={a} n={n}")
    c.notes.append("sigma_(2n) = |G_2(F_(q^n))| for a in {0,1}, n <= 3")
    return c


CHECKS = {i: globals()[f"check_{i}"] for i in range(1, 13)}


def _line(i: int, c: Check) -> str:
    return f"criterion {i:2d}: {'PASS' if c.ok else 'FAIL'} - {c.detail()}"


def _report(i: int, c: Check, capsys) -> None:
    with capsys.disabled():
        print("\n" + _line(i, c))


@pytest.mark.parametrize("i", [i for i in CHECKS if i != 10])
def test_criterion(i, capsys):
    c = CHECKS[i]()
    _report(i, c, capsys)
    assert c.ok, c.detail()


def test_criterion_10_realizability(capsys):
    """Prints the honest line for the whole criterion, then asserts the attainable parts."""
    _report(10, check_10(), capsys)
    parts = _realizability_parts()
    for what in ("(5^n-1)/2 passes", "n fails", "-1 fails"):
        assert parts[what][0], what


def test_double_exponential_witness():
    v = realizable_check(PowerSequence(2, lambda n: 2**n), 50)
    assert v.witness.ell == 5 and v.witness.reason == "integrality"
    # sum over d | 5 of mu(5/d) 2^(2^d) = 2^32 - 4, which is 2 mod 5
    assert (2**32 - 4) % 5 == 2


@pytest.mark.xfail(
    strict=True,
    reason="2^(2^n) is not realizable: the orbit sum at ell=5 is 2^32 - 4, not divisible by 5",
)
def test_double_exponential_passes():
    assert _realizability_parts()["2^(2^n) passes"][0]


if __name__ == "__main__":
    results = {i: CHECKS[i]() for i in CHECKS}
    for i, c in results.items():
        print(_line(i, c))
    sys.exit(0 if all(c.ok for c in results.values()) else 1)
