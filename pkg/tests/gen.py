"""Seeded random generators shared by the test modules."""

import random
from fractions import Fraction

from liebialg.lie_algebra import AlgMultivector, Cobracket, sl2, aff2
from liebialg.multivector import Context, Multivector
from liebialg.scalar_field import ScalarFn, ExpPoly
from liebialg.schouten import Theta


def rational(rng: random.Random, span=4) -> Fraction:
    num = rng.randint(-span, span)
    return Fraction(num or 1, rng.choice((1, 1, 2, 3)))


def poly(rng, n, deg=2, terms=3, exp=False, frac=False) -> ScalarFn:
    """Random polynomial of degree <= deg, optionally times an exponential or over a linear denominator."""
    f = ScalarFn.constant(0, n)
    for _ in range(rng.randint(1, terms)):
        m = [0] * n
        for _ in range(rng.randint(0, deg)):
            if n:
                m[rng.randrange(n)] += 1
        lam = [0] * n
        if exp and n and rng.random() < 0.5:
            lam[rng.randrange(n)] = rng.choice((-1, 1, 2))
        f = f + ScalarFn(ExpPoly.term(rational(rng), lam, m))
    if frac and n and rng.random() < 0.3:
        f = f / (ScalarFn.coordinate(rng.randrange(n), n) + rng.randint(1, 3))
    return f


def context(rng, n=None, alg=None) -> Context:
    n = rng.choice((1, 2, 3)) if n is None else n
    L = alg or rng.choice((sl2(), aff2()))
    return Context(n, ["x", "y", "z"][:n], L)


def multivector(rng, ctx: Context, p: int, q: int, terms=3, **kw) -> Multivector:
    """Random section of bigrade (p, q)."""
    out = ctx.zero()
    if p > ctx.n or q > ctx.k:
        return out
    for _ in range(rng.randint(1, terms)):
        I = sorted(rng.sample(range(ctx.n), p))
        J = sorted(rng.sample(range(ctx.k), q))
        out = out + Multivector.from_components(ctx, {(tuple(I), tuple(J)): poly(rng, ctx.n, **kw)})
    return out


def homogeneous(rng, ctx: Context, degree: int, terms=3, **kw) -> Multivector:
    out = ctx.zero()
    for _ in range(rng.randint(1, 2)):
        p = rng.randint(max(0, degree - ctx.k), min(degree, ctx.n))
        out = out + multivector(rng, ctx, p, degree - p, terms, **kw)
    return out


def theta(rng, ctx: Context, density=0.5, **kw) -> Theta:
    mat = [[poly(rng, ctx.n, **kw) if rng.random() < density else 0 for _ in range(ctx.k)] for _ in range(ctx.n)]
    return Theta(ctx, mat)


def alg_bivector(rng, ctx: Context, constant=False, **kw) -> AlgMultivector:
    coeffs = {}
    for a in range(ctx.k):
        for b in range(a + 1, ctx.k):
            if rng.random() < 0.6:
                coeffs[(a, b)] = rational(rng) if constant else poly(rng, ctx.n, **kw)
    return AlgMultivector(ctx.k, ctx.n, coeffs)


def sgn(e: int) -> int:
    """(-1)^e for any integer e."""
    return -1 if e % 2 else 1
