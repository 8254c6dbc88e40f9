"""Command line front end: fadzeta VERB --input FILE [options].

Exit status is 0 on success, 1 on a domain error reported by the library,
and 2 on a usage or schema error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import catalog, codec
from . import numeric as nm
from . import systems as sy
from . import zeta as zt
from .errors import FadError
from .fad import realizable_check

VERBS = ("fixcount", "fad", "zeta", "orbits", "classify", "detector", "realizable", "oracle", "plot", "equiv")


class UsageError(Exception):
    pass


def _parse_range(text: str) -> range:
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"need 1 <= A <= B, got {text!r}")
    return range(lo, hi + 1)


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fadzeta", description="Fixed points, zeta functions and orbit counts of FAD systems.")
    ap.add_argument("verb", choices=VERBS)
    ap.add_argument("--input", help="descriptor JSON file, '-' for stdin, or @name for a bundled example")
    ap.add_argument("--n", type=_positive)
    ap.add_argument("--range", type=_parse_range, dest="nrange")
    ap.add_argument("--max", type=_positive, dest="nmax")
    ap.add_argument("--precision", type=_positive, default=nm.START_BITS, help="working precision in bits for enclosures")
    ap.add_argument("--budget", type=_positive)
    ap.add_argument("--format", choices=("json", "csv"), default=None)
    ap.add_argument("--output")
    ap.add_argument("--closed", action="store_true", help="zeta: print only the closed form")
    ap.add_argument("--list-examples", action="store_true", help="print the bundled example names and exit")
    return ap


# ---------------------------------------------------------------------------
# input


def _read_input(source: str | None) -> Any:
    if not source:
        raise UsageError("--input is required")
    if source.startswith("@"):
        try:
            return codec.encode(catalog.load(source[1:]))
        except KeyError as e:
            raise UsageError(str(e.args[0])) from None
    try:
        text = sys.stdin.read() if source == "-" else Path(source).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {source}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise codec.SchemaError(f"{source}: line {e.lineno} column {e.colno}", e.msg) from None


def _ns(args) -> list[int]:
    if args.n and args.nrange:
        raise UsageError("give --n or --range, not both")
    if args.n:
        return [args.n]
    if args.nrange:
        return list(args.nrange)
    return list(range(1, 11))


# ---------------------------------------------------------------------------
# rendering


def _enc_value(v) -> Any:
    if isinstance(v, bool):
        return v
    if isinstance(v, int):
        return codec.enc_int(v)
    if isinstance(v, Fraction):
        return codec.enc_rational(v)
    if isinstance(v, zt.Enclosure):
        lo, hi = v.render(_DIGITS[0])
        return {"enclosure": [lo, hi]}
    if isinstance(v, nm.AlgebraicNumber):
        return {"algebraic": str(v), "approx": _approx(v)}
    return v


_DIGITS = [20]


def _approx(a: nm.AlgebraicNumber) -> str:
    import mpmath

    return mpmath.nstr(a.approx(_DIGITS[0] + 5).real, _DIGITS[0])


def _series(s: Sequence[Fraction]) -> list[str]:
    return [codec.enc_rational(x) for x in s]


def _zeta_report(form: zt.ZetaForm, N: int) -> dict:
    out: dict[str, Any] = {"kind": "zeta", "form": form.kind, "closed": str(form) if form.kind != "non_holonomic" else None}
    if isinstance(form, zt.Rational):
        out["numerator"] = _series(form.numerator)
        out["denominator"] = _series(form.denominator)
    elif isinstance(form, zt.RootRational):
        out["root_index"] = form.root_index
        out["numerator"] = _series(form.base.numerator)
        out["denominator"] = _series(form.base.denominator)
    elif isinstance(form, zt.NonHolonomic):
        out["natural_boundary"] = form.natural_boundary
    out["series"] = _series(form.series(min(N, len(form.prefix) - 1) if isinstance(form, zt.NonHolonomic) else N))
    return out


# ---------------------------------------------------------------------------
# verbs


def _report(desc) -> sy.FixedPointReport:
    return sy.build(desc)


def run(args) -> tuple[Any, str]:
    """Returns (payload, format) where payload is a JSON-able object or CSV text."""
    _DIGITS[0] = max(5, int(args.precision * 0.30103) - 2)
    data = _read_input(args.input)
    if args.verb == "equiv":
        return _equiv(data), "json"
    desc = codec.decode(data)
    verb = args.verb
    if verb == "fixcount":
        rep = _report(desc)
        return {"kind": "fixcount", "values": [{"n": n, "f": codec.enc_int(rep(n))} for n in _ns(args)]}, "json"
    if verb == "fad":
        rep = _report(desc)
        rep.check(30)
        return {"kind": "fad", "params": codec.enc_params(rep.params), "provenance": list(rep.provenance)}, "json"
    if verb == "zeta":
        form = zt.zeta_build(_report(desc).params)
        if args.closed:
            return (str(form) + "\n", "text")
        return _zeta_report(form, args.nmax or 10), "json"
    if verb in ("orbits", "plot"):
        N = args.nmax or (20 if verb == "orbits" else 1000)
        rep = zt.orbit_counts(_report(desc).params, N, args.precision)
        fmt = args.format or ("csv" if verb == "plot" else "json")
        if fmt == "csv":
            return _orbit_csv(rep), "text"
        return {
            "kind": "orbits",
            "Lambda": _enc_value(rep.Lambda),
            "rows": [
                {"N": N_, "P": codec.enc_int(rep.P[N_]), "pi": codec.enc_int(rep.pi[N_]), "Pi": _enc_value(rep.Pi[N_])}
                for N_ in sorted(rep.P)
            ],
        }, "json"
    if verb == "classify":
        fp = _report(desc).params
        cls = zt.classify_accumulation(fp)
        th = zt.theta(fp, args.precision)
        return {
            "kind": "classification",
            "class": cls.kind,
            "limits": [_enc_value(v) for v in cls.limits],
            "theta_prime": _enc_value(th.theta_prime),
            "theta": _enc_value(th.theta),
            "zeta_form": zt.zeta_build(fp).kind,
        }, "json"
    if verb == "detector":
        fp = _report(desc).params
        det = zt.detector_structure(fp)
        lim = zt.pnt_limit(fp) if det.trivial else None
        return {
            "kind": "detector",
            "varpi": det.varpi,
            "delta": det.delta,
            "t": det.t,
            "t_flag": "exact" if det.t_exact else "upper_bound",
            "s": det.s,
            "s0": det.s0,
            "S": list(det.S),
            "group": str(det),
            "limit": _enc_value(lim) if lim is not None else None,
        }, "json"
    if verb == "realizable":
        rep = _report(desc)
        N = args.nmax or 50
        v = realizable_check(rep.params, N)
        return {
            "kind": "realizability",
            "N": N,
            "passed": v.passed,
            "failures": [{"ell": f.ell, "reason": f.reason, "value": _enc_value(f.value)} for f in v.failures],
            "undecided": list(v.undecided),
        }, "json"
    if verb == "oracle":
        rep = _report(desc)
        rows = []
        for n in _ns(args):
            o = sy.oracle(desc, n, args.budget)
            f = rep(n)
            rows.append({"n": n, "oracle": codec.enc_int(o), "formula": codec.enc_int(f), "agree": o == f})
        return {"kind": "oracle", "values": rows, "all_agree": all(r["agree"] for r in rows)}, "json"
    raise UsageError(f"unknown verb {verb}")


def _orbit_csv(rep: zt.OrbitReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "pi", "Pi_lo", "Pi_hi"])
    for N in sorted(rep.P):
        lo, hi = rep.Pi[N].render(_DIGITS[0])
        w.writerow([N, rep.pi[N], lo, hi])
    return buf.getvalue()


def _equiv(data: Any) -> dict:
    items = data if isinstance(data, list) else None
    if not items or len(items) != 2:
        raise codec.SchemaError("$", "equiv expects an array of two torus descriptors")
    a, b = (codec.decode(x, f"$[{i}]") for i, x in enumerate(items))
    if not (isinstance(a, sy.Torus) and isinstance(b, sy.Torus)):
        raise codec.SchemaError("$", "both descriptors must be tori")
    if a.p != b.p:
        raise codec.SchemaError("$[1].p", "both tori must live over the same prime")
    return {"kind": "equivalence", "verdict": sy.torus_zeta_equivalence(a.p, a.M, b.M)}


def _emit(payload: Any, fmt: str, output: str | None) -> None:
    if fmt == "json":
        text = json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    else:
        text = payload
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if "--list-examples" in argv:
        sys.stdout.write("\n".join(sorted(catalog.EXAMPLES)) + "\n")
        return 0
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        payload, fmt = run(args)
        if args.format == "csv" and fmt == "json":
            raise UsageError(f"{args.verb} has no CSV output")
        _emit(payload, fmt, args.output)
        return 0
    except (UsageError, codec.SchemaError) as e:
        sys.stderr.write(f"fadzeta: error: {e}\n")
        return 2
    except FadError as e:
        sys.stderr.write(f"fadzeta: {type(e).__name__}: {e}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
