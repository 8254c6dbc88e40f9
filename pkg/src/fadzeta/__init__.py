"""Fixed-point counts of algebraic group endomorphisms as finite-adelically distorted sequences.

Submodules: numeric (exact arithmetic), sequences (gcd sequences and
determinant sequences), fad (parameters and realizability), twisted (skew
polynomials over finite fields), systems (constructors and oracles), zeta
(zeta functions and orbit asymptotics), codec and cli.
"""

__version__ = "0.1.0"
