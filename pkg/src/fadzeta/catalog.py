"""Bundled example descriptors, addressable on the command line as @name."""

from __future__ import annotations

from fractions import Fraction

from . import systems as sy
from .fad import FadParams
from .sequences import GcdSeq


def _examples() -> dict[str, object]:
    ell_ord = sy.EllipticMult(3, 2, True)
    return {
        # multiplicative groups over the algebraic closure of F_p
        "torus_p2_cubic": sy.Torus(2, ((0, 0, -1), (1, 0, -1), (0, 1, 1))),
        "torus_f5_frobenius": sy.Torus(5, ((5, 0, 0, 0), (0, 5, 0, 0), (0, 0, 5, 0), (0, 0, 0, 5))),
        "torus_f5_b": sy.Torus(5, ((1, 0, 3, 4), (0, 1, 2, 0), (3, 0, 1, 4), (2, 1, 0, 4))),
        "torus_f5_c": sy.Torus(5, ((0, 0, 0, -1), (1, 0, 0, 3), (0, 1, 0, -3), (0, 0, 1, 3))),
        "torus_p3_squaring": sy.Torus(3, ((2,),)),
        # vector groups
        "ga_f5_x5_plus_x": sy.VectorGroup(5, 1, None, (((1, 1),),)),
        "ga2_f5_pair": sy.VectorGroup(5, 1, None, (((1,), (0, 1)), ((2,), (0, 1)))),
        "ga_f2_frobenius": sy.VectorGroup(2, 1, None, (((0, 1),),)),
        # cellular automata
        "ca_f3_one_plus_t": sy.AdditiveCA(3, 0, (1, 1)),
        "ca_f2_shift": sy.AdditiveCA(2, 1, (1,)),
        "ca_f2_symmetric": sy.AdditiveCA(2, -1, (1, 1, 1)),
        # S-integer systems
        "s_integer_2_3": sy.RationalSInteger(2, (3,)),
        "s_integer_minus2": sy.RationalSInteger(-2, ()),
        # elliptic curves
        "elliptic_f3_m2_ordinary": ell_ord,
        "elliptic_f3_m2_supersingular": sy.EllipticMult(3, 2, False),
        "elliptic_f7_m2_ordinary": sy.EllipticMult(7, 2, True),
        "elliptic_square_f3_m2": sy.Product((ell_ord, ell_ord)),
        # reductive groups
        "gl2_f3": sy.frobenius_descriptor(3, sy.gl_degrees(2)),
        "sl2_f5": sy.frobenius_descriptor(5, (2,)),
        "g2_ree_a0": sy.ree_descriptor(0),
        # finite permutations and raw parameters
        "finite_two_fixed_one_3cycle": sy.Finite(((1, 2), (3, 1))),
        "doubling_map": sy.RawFad(FadParams.build([[2]])),
        "full_shift_2": sy.RawFad(FadParams.build([], 2)),
        "half_five_power": sy.RawFad(FadParams.build([[5]], 1, GcdSeq.constant(Fraction(1, 2)))),
    }


EXAMPLES: dict[str, object] = _examples()


def load(name: str):
    try:
        return EXAMPLES[name]
    except KeyError:
        raise KeyError(f"no bundled example named {name!r}; known: {', '.join(sorted(EXAMPLES))}") from None
