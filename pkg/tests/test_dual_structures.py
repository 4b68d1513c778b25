import itertools
import random

import pytest

import gen
from liebialg.bialgebroid import Quadruple, assemble_lambda, d_star
from liebialg.dual_structures import (
    check_matched_pair,
    delta_bracket,
    dual_anchor,
    dual_bracket,
    dual_generators,
    lambda_bracket,
    phi_map,
    anchor_identity_suite,
    psi_map,
)
from liebialg.lie_algebra import AlgMultivector, Cobracket, coboundary, sl2
from liebialg.multivector import Context, Covector, Multivector, apply_vector, pairing
from liebialg.schouten import Theta
from liebialg.scalar_field import ScalarFn


def cov(rng, ctx, **kw):
    return Covector(ctx, [gen.poly(rng, ctx.n, **kw) for _ in range(ctx.n)], [gen.poly(rng, ctx.n, **kw) for _ in range(ctx.k)])


def rand_q(rng):
    ctx = gen.context(rng, n=rng.choice((1, 2)), alg=sl2())
    delta = coboundary(ctx.L, gen.alg_bivector(rng, ctx, constant=True))
    return Quadruple(ctx, gen.multivector(rng, ctx, 2, 0), gen.theta(rng, ctx), gen.alg_bivector(rng, ctx), delta)


def test_lambda_bracket_examples(instances):
    ctx = Context(2, ["x", "y"], sl2())
    pi = Multivector(ctx, {(0, 1): 1})
    assert lambda_bracket(pi, Covector.dx(ctx, 0), Covector.dx(ctx, 1)).is_zero()
    assert lambda_bracket(ctx.zero(), Covector.dx(ctx, 0), Covector.dx(ctx, 1)).is_zero()
    F = instances["felder_rational"]
    e = lambda a: Covector.dual(F.ctx, a)
    lam = assemble_lambda(F)
    assert dual_bracket(F, e(1), e(2)) - delta_bracket(F, e(1), e(2)) == lambda_bracket(lam, e(1), e(2))


def test_dual_bracket_examples(instances):
    S = instances["sl2_plane"]
    assert dual_bracket(S, Covector.dx(S.ctx, 0), Covector.dx(S.ctx, 1)).is_zero()
    M = instances["matched_pair_line"]
    val = dual_bracket(M, Covector.dx(M.ctx, 0), Covector.dual(M.ctx, 1))
    assert val == Covector(M.ctx, None, [0, -1, 0])  # ad*_H E+* = -E+*
    B = instances["point_sl2_bialgebra"]
    for a, b in itertools.combinations(range(3), 2):
        got = dual_bracket(B, Covector.dual(B.ctx, a), Covector.dual(B.ctx, b))
        for c in range(3):
            img = B.delta.image(c)
            assert got.xi[c] == -img.component((a, b))


def test_dual_anchor_examples(instances):
    S, F = instances["sl2_plane"], instances["felder_rational"]
    assert dual_anchor(S, Covector.dx(S.ctx, 0)) == S.ctx.vector(1)
    assert dual_anchor(F, Covector.dual(F.ctx, 1)).is_zero()
    assert dual_anchor(F, Covector.dual(F.ctx, 0)) == -F.ctx.vector(0)


def test_phi_psi_examples(instances):
    M = instances["matched_pair_line"]
    dl, ep = Covector.dx(M.ctx, 0), Covector.dual(M.ctx, 1)
    assert phi_map(M, Covector(M.ctx), ep).is_zero()
    assert phi_map(M, dl, ep) == Covector(M.ctx, None, [0, -1, 0])
    S = instances["sl2_plane"]
    assert psi_map(S, Covector.dual(S.ctx, 0), Covector.dx(S.ctx, 0)).is_zero()
    assert psi_map(S, Covector(S.ctx), Covector.dx(S.ctx, 0)).is_zero()


def test_phi_is_a_representation():
    # C-infinity linear in alpha, Leibniz along pi#(alpha) in xi
    rng = random.Random(1)
    for _ in range(20):
        q = rand_q(rng).replace(delta=Cobracket.zero(3))
        n = q.ctx.n
        f = gen.poly(rng, n, exp=True)
        alpha = Covector(q.ctx, [gen.poly(rng, n) for _ in range(n)])
        xi = Covector(q.ctx, None, [gen.poly(rng, n) for _ in range(3)])
        assert phi_map(q, alpha.scale(f), xi) == phi_map(q, alpha, xi).scale(f)
        from liebialg.multivector import contract

        X = contract(q.pi, alpha)
        lhs = phi_map(q, alpha, xi.scale(f))
        rhs = phi_map(q, alpha, xi).scale(f) + xi.scale(apply_vector(X, f) if not X.is_zero() else 0)
        assert lhs == rhs


def test_display_phi_minus_psi_randomized():
    rng = random.Random(2)
    for _ in range(30):
        q = rand_q(rng)
        q = q.replace(delta=Cobracket.zero(3))
        alpha = Covector(q.ctx, [gen.poly(rng, q.ctx.n, exp=True) for _ in range(q.ctx.n)])
        xi = Covector(q.ctx, None, [gen.poly(rng, q.ctx.n, exp=True) for _ in range(3)])
        assert dual_bracket(q, alpha, xi) == phi_map(q, alpha, xi) - psi_map(q, xi, alpha)


def test_antisymmetry_and_anchor_leibniz():
    rng = random.Random(3)
    for _ in range(30):
        q = rand_q(rng)
        a, b = cov(rng, q.ctx), cov(rng, q.ctx)
        f = gen.poly(rng, q.ctx.n, exp=True)
        assert dual_bracket(q, a, b) == -dual_bracket(q, b, a)
        lhs = dual_bracket(q, a, b.scale(f))
        rhs = dual_bracket(q, a, b).scale(f) + b.scale(apply_vector(dual_anchor(q, a), f))
        assert lhs == rhs


def test_d_star_is_the_differential_of_the_dual_bracket():
    # <d_* X, phi ^ psi> = rho_*(phi)<X, psi> - rho_*(psi)<X, phi> - <X, [phi, psi]_*>
    rng = random.Random(4)
    for _ in range(10):
        q = rand_q(rng)
        lam = assemble_lambda(q)
        X = gen.homogeneous(rng, q.ctx, 1)
        dX = d_star(q, X, lam)
        for (_, p), (_, s) in itertools.combinations(dual_generators(q.ctx), 2):
            lhs = pairing(dX, [p, s])
            rhs = (
                apply_vector(dual_anchor(q, p), s.pair(X))
                - apply_vector(dual_anchor(q, s), p.pair(X))
                - dual_bracket(q, p, s, lam).pair(X)
            )
            assert lhs == rhs


def test_matched_pair(instances):
    assert check_matched_pair(instances["matched_pair_line"]).passed
    assert check_matched_pair(instances["point_sl2_bialgebra"]).passed
    M = instances["matched_pair_line"]
    bad = M.replace(delta=Cobracket.from_triples(3, [(0, 1, 2, 1)]))
    rep = check_matched_pair(bad)
    assert not rep.get("matched-pair.1").passed
    with pytest.raises(ValueError):
        check_matched_pair(instances["sl2_plane"])


def test_jacobi_on_generators_for_valid_quadruples(instances):
    from liebialg.dual_structures import dual_jacobiator

    for name in ("sl2_plane", "felder_rational", "matched_pair_line", "point_sl2_bialgebra"):
        q = instances[name]
        gens = [c for _, c in dual_generators(q.ctx)]
        for a, b, c in itertools.combinations(gens, 3):
            assert dual_jacobiator(q, a, b, c).is_zero(), name
    q = instances["broken"]
    gens = [c for _, c in dual_generators(q.ctx)]
    assert any(not dual_jacobiator(q, a, b, c).is_zero() for a, b, c in itertools.combinations(gens, 3))


def test_anchor_identities(instances):
    for name in ("sl2_plane", "sl2_plane_b2", "point_sl2_bialgebra", "matched_pair_line"):
        assert anchor_identity_suite(instances[name]).passed, name
    assert anchor_identity_suite(instances["point_sl2_bialgebra"]).conditions == []
