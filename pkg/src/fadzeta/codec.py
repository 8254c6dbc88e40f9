"""Canonical JSON for system descriptors and FAD parameters."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from . import numeric as nm
from . import systems as sy
from .errors import FadError
from .fad import FadParams, PrimeData
from .sequences import GcdSeq

SAFE_INT = 2**53


class SchemaError(FadError):
    """The input does not match the descriptor schema; the message starts with the JSON location."""

    def __init__(self, where: str, message: str) -> None:
        super().__init__(f"{where}: {message}")
        self.where = where


# ---------------------------------------------------------------------------
# scalars


def enc_int(n: int) -> int | str:
    return n if abs(n) < SAFE_INT else str(n)


def enc_rational(q: Fraction | int) -> str:
    return nm.rational_str(Fraction(q))


def dec_int(v: Any, where: str) -> int:
    if isinstance(v, bool):
        raise SchemaError(where, "expected an integer, got a boolean")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v.strip())
        except ValueError:
            pass
    raise SchemaError(where, f"expected an integer, got {v!r}")


def dec_rational(v: Any, where: str) -> Fraction:
    if isinstance(v, bool):
        raise SchemaError(where, "expected a rational, got a boolean")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return nm.parse_rational(v)
        except (ValueError, ZeroDivisionError):
            pass
    raise SchemaError(where, f"expected a rational as an integer or 'num/den', got {v!r}")


def _list(v: Any, where: str) -> list:
    if not isinstance(v, list):
        raise SchemaError(where, f"expected an array, got {type(v).__name__}")
    return v


def _obj(v: Any, where: str) -> dict:
    if not isinstance(v, dict):
        raise SchemaError(where, f"expected an object, got {type(v).__name__}")
    return v


def _field(d: dict, key: str, where: str) -> Any:
    if key not in d:
        raise SchemaError(where, f"missing field '{key}'")
    return d[key]


def enc_matrix(M: nm.IntMatrix) -> list:
    return [[enc_int(x) for x in row] for row in M]


def dec_matrix(v: Any, where: str) -> nm.IntMatrix:
    rows = _list(v, where)
    out = [[dec_int(x, f"{where}[{i}][{j}]") for j, x in enumerate(_list(row, f"{where}[{i}]"))] for i, row in enumerate(rows)]
    if any(len(r) != len(out) for r in out):
        raise SchemaError(where, "matrix must be square")
    return nm.as_matrix(out)


def enc_gcd_seq(seq: GcdSeq) -> dict:
    return {"period": seq.period, "values": [[d, enc_rational(v)] for d, v in seq.values]}


def dec_gcd_seq(v: Any, where: str) -> GcdSeq:
    if isinstance(v, (int, str)) and not isinstance(v, bool):
        return GcdSeq.constant(dec_rational(v, where))
    d = _obj(v, where)
    period = dec_int(_field(d, "period", where), f"{where}.period")
    vals = {}
    for i, pair in enumerate(_list(_field(d, "values", where), f"{where}.values")):
        pair = _list(pair, f"{where}.values[{i}]")
        if len(pair) != 2:
            raise SchemaError(f"{where}.values[{i}]", "expected [divisor, value]")
        vals[dec_int(pair[0], f"{where}.values[{i}][0]")] = dec_rational(pair[1], f"{where}.values[{i}][1]")
    try:
        return GcdSeq.from_map(period, vals)
    except FadError as e:
        raise SchemaError(where, str(e)) from e


def enc_params(fp: FadParams) -> dict:
    return {
        "A": enc_matrix(fp.A),
        "c": enc_rational(fp.c),
        "r": enc_gcd_seq(fp.r),
        "primes": [{"p": d.p, "s": enc_gcd_seq(d.s), "t": enc_gcd_seq(d.t)} for d in fp.primes],
    }


def dec_params(v: Any, where: str) -> FadParams:
    d = _obj(v, where)
    A = dec_matrix(d.get("A", []), f"{where}.A")
    c = dec_rational(d.get("c", 1), f"{where}.c")
    r = dec_gcd_seq(d.get("r", 1), f"{where}.r")
    primes = []
    for i, pd in enumerate(_list(d.get("primes", []), f"{where}.primes")):
        w = f"{where}.primes[{i}]"
        pd = _obj(pd, w)
        p = dec_int(_field(pd, "p", w), f"{w}.p")
        s = dec_gcd_seq(pd.get("s", 0), f"{w}.s")
        t = dec_gcd_seq(pd.get("t", 0), f"{w}.t")
        primes.append(PrimeData(p, s, t))
    return FadParams.build(A, c, r, primes)


# ---------------------------------------------------------------------------
# descriptors


def encode(desc) -> dict:
    if isinstance(desc, sy.Torus):
        return {"kind": "torus", "p": desc.p, "M": enc_matrix(desc.M)}
    if isinstance(desc, sy.VectorGroup):
        sigma = [[[list(c) for c in entry] for entry in row] for row in desc.sigma]
        return {"kind": "vector_group", "p": desc.p, "nu": desc.nu, "modulus": list(desc.modulus), "sigma": sigma}
    if isinstance(desc, sy.RationalSInteger):
        return {"kind": "s_integer", "xi": enc_int(desc.xi), "S": list(desc.S)}
    if isinstance(desc, sy.AdditiveCA):
        return {"kind": "additive_ca", "p": desc.p, "laurent": {"low": desc.low, "coeffs": list(desc.coeffs)}}
    if isinstance(desc, sy.EllipticMult):
        return {"kind": "elliptic", "p": desc.p, "m": enc_int(desc.m), "ordinary": desc.ordinary}
    if isinstance(desc, sy.ReductiveSteinberg):
        return {"kind": "reductive", "p": desc.p, "J": enc_matrix(desc.J), "c": enc_int(desc.c), "Z": enc_matrix(desc.Z)}
    if isinstance(desc, sy.Finite):
        return {"kind": "finite", "cycles": [[a, b] for a, b in desc.cycles]}
    if isinstance(desc, sy.Product):
        return {"kind": "product", "factors": [encode(f) for f in desc.factors]}
    if isinstance(desc, sy.RawFad):
        return {"kind": "raw_fad", "params": enc_params(desc.params)}
    raise TypeError(f"cannot encode {desc!r}")


def decode(v: Any, where: str = "$"):
    d = _obj(v, where)
    kind = _field(d, "kind", where)
    try:
        return _decode_kind(kind, d, where)
    except SchemaError:
        raise
    except FadError as e:
        # invalid values that the constructors reject are schema violations at this location
        if isinstance(e, ValueError):
            raise SchemaError(where, str(e)) from e
        raise


def _decode_kind(kind: str, d: dict, where: str):
    if kind == "torus":
        return sy.Torus(dec_int(_field(d, "p", where), f"{where}.p"), dec_matrix(_field(d, "M", where), f"{where}.M"))
    if kind == "vector_group":
        p = dec_int(_field(d, "p", where), f"{where}.p")
        nu = dec_int(d.get("nu", 1), f"{where}.nu")
        modulus = d.get("modulus")
        if modulus is not None:
            modulus = tuple(dec_int(c, f"{where}.modulus[{i}]") for i, c in enumerate(_list(modulus, f"{where}.modulus")))
        sigma = []
        for i, row in enumerate(_list(_field(d, "sigma", where), f"{where}.sigma")):
            out_row = []
            for j, entry in enumerate(_list(row, f"{where}.sigma[{i}]")):
                w = f"{where}.sigma[{i}][{j}]"
                coeffs = []
                for k, c in enumerate(_list(entry, w)):
                    if isinstance(c, list):
                        coeffs.append([dec_int(x, f"{w}[{k}][{m}]") for m, x in enumerate(c)])
                    else:
                        coeffs.append(dec_int(c, f"{w}[{k}]"))
                out_row.append(coeffs)
            sigma.append(out_row)
        return sy.VectorGroup(p, nu, modulus, sigma)
    if kind == "s_integer":
        S = [dec_int(x, f"{where}.S[{i}]") for i, x in enumerate(_list(d.get("S", []), f"{where}.S"))]
        return sy.RationalSInteger(dec_int(_field(d, "xi", where), f"{where}.xi"), tuple(S))
    if kind == "additive_ca":
        lw = f"{where}.laurent"
        lau = _obj(_field(d, "laurent", where), lw)
        coeffs = [dec_int(x, f"{lw}.coeffs[{i}]") for i, x in enumerate(_list(_field(lau, "coeffs", lw), f"{lw}.coeffs"))]
        return sy.AdditiveCA(dec_int(_field(d, "p", where), f"{where}.p"), dec_int(lau.get("low", 0), f"{lw}.low"), tuple(coeffs))
    if kind == "elliptic":
        ordinary = d.get("ordinary", True)
        if not isinstance(ordinary, bool):
            raise SchemaError(f"{where}.ordinary", "expected a boolean")
        return sy.EllipticMult(dec_int(_field(d, "p", where), f"{where}.p"), dec_int(_field(d, "m", where), f"{where}.m"), ordinary)
    if kind == "reductive":
        return sy.ReductiveSteinberg(
            dec_int(_field(d, "p", where), f"{where}.p"),
            dec_matrix(_field(d, "J", where), f"{where}.J"),
            dec_int(_field(d, "c", where), f"{where}.c"),
            dec_matrix(d.get("Z", []), f"{where}.Z"),
        )
    if kind == "frobenius":
        degrees = [dec_int(x, f"{where}.degrees[{i}]") for i, x in enumerate(_list(_field(d, "degrees", where), f"{where}.degrees"))]
        return sy.frobenius_descriptor(dec_int(_field(d, "q", where), f"{where}.q"), degrees, dec_int(d.get("central_rank", 0), f"{where}.central_rank"))
    if kind == "ree":
        return sy.ree_descriptor(dec_int(_field(d, "a", where), f"{where}.a"))
    if kind == "finite":
        cycles = []
        for i, pair in enumerate(_list(_field(d, "cycles", where), f"{where}.cycles")):
            pair = _list(pair, f"{where}.cycles[{i}]")
            if len(pair) != 2:
                raise SchemaError(f"{where}.cycles[{i}]", "expected [length, count]")
            cycles.append((dec_int(pair[0], f"{where}.cycles[{i}][0]"), dec_int(pair[1], f"{where}.cycles[{i}][1]")))
        return sy.Finite(tuple(cycles))
    if kind == "product":
        facs = _list(_field(d, "factors", where), f"{where}.factors")
        return sy.Product(tuple(decode(f, f"{where}.factors[{i}]") for i, f in enumerate(facs)))
    if kind == "raw_fad":
        return sy.RawFad(dec_params(_field(d, "params", where), f"{where}.params"))
    raise SchemaError(f"{where}.kind", f"unknown kind {kind!r}")


def canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def dumps(desc) -> str:
    return canonical(encode(desc))


def loads(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"line {e.lineno} column {e.colno}", e.msg) from e
    return decode(data)
