"""Independent sympy renderings used as oracles."""

import sympy as sp

from liebialg.scalar_field import ExpPoly, ScalarFn


def exppoly_to_sympy(p: ExpPoly, syms):
    n = p.dim
    total = sp.Integer(0)
    for key, c in p.terms.items():
        lam, m = key[:n], key[n:]
        term = sp.Rational(c.numerator, c.denominator) if hasattr(c, "numerator") else sp.Rational(c)
        for s, e in zip(syms, m):
            term *= s**e
        total += term * sp.exp(sum(sp.Rational(l) * s for l, s in zip(lam, syms)))
    return total


def to_sympy(f: ScalarFn, syms):
    return exppoly_to_sympy(f.num, syms) / exppoly_to_sympy(f.den, syms)


def same(a, b) -> bool:
    return sp.simplify(sp.expand(a - b)) == 0
