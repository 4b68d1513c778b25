"""The dual algebroid ``A* = T*R^n (+) (R^n x g*)`` induced by a quadruple.

Sections of ``A*`` are :class:`Covector` values.  The bracket is the
``Lambda``-bracket plus the pointwise bracket on ``g*`` dual to ``delta``:

    [phi, psi]_* = L_{Lambda# phi} psi - L_{Lambda# psi} phi - d_A Lambda(phi, psi) + [xi, eta]_delta

with ``Lambda# phi = i_phi Lambda``, ``Lambda(phi, psi) = <Lambda# phi, psi>`` and
``<[xi, eta]_delta, e_a> = -<delta e_a, xi ^ eta>``.  The sign of the last
term is the one for which ``d_* = [Lambda, .] + delta`` is the differential of
this bracket.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .bialgebroid import HALF, Quadruple, Report, _cocycle_residual, assemble_lambda
from .lie_algebra import coad, delta_squared
from .multivector import Context, Covector, Multivector, apply_vector, contract
from .schouten import delta_theta, theta_bracket
from .scalar_field import ScalarFn, as_scalar

__all__ = [
    "DualSection",
    "anchor_action",
    "d_A",
    "d_A_form",
    "lie_derivative_form",
    "lambda_bracket",
    "delta_bracket",
    "dual_bracket",
    "dual_anchor",
    "phi_map",
    "psi_map",
    "dual_jacobiator",
    "check_matched_pair",
    "anchor_identity_suite",
    "prop22_suite",
    "dual_generators",
]

DualSection = Covector


def anchor_action(ctx: Context, u: int, f: ScalarFn) -> ScalarFn:
    """``rho(s_u) f``: a partial derivative for coordinate fields, zero on ``g``."""
    if u < ctx.n:
        return f.diff(u)
    return ScalarFn.constant(0, ctx.n)


def d_A(ctx: Context, f) -> Covector:
    """``d_A f = df`` (no ``g*`` part)."""
    return Covector.differential(ctx, as_scalar(f, ctx.n))


def _bracket_coeff(ctx: Context, t: int, r: int) -> dict:
    n = ctx.n
    if t < n or r < n:
        return {}
    return {n + d: c for d, c in ctx.alg_bracket(t - n, r - n)}


def d_A_form(ctx: Context, phi: Covector) -> dict:
    """``(d_A phi)(s_t, s_r)`` for ``t < r``, as ``{(t, r): ScalarFn}``."""
    size = ctx.n + ctx.k
    ent = phi.entries()
    out = {}
    for t in range(size):
        for r in range(t + 1, size):
            v = anchor_action(ctx, t, ent[r]) - anchor_action(ctx, r, ent[t])
            for u, c in _bracket_coeff(ctx, t, r).items():
                v = v - ent[u] * c
            if not v.is_zero():
                out[(t, r)] = v
    return out


def _form_entry(form: dict, t: int, r: int, zero: ScalarFn) -> ScalarFn:
    if t == r:
        return zero
    if t < r:
        return form.get((t, r), zero)
    v = form.get((r, t))
    return zero if v is None else -v


def lie_derivative_form(V: Multivector, phi: Covector) -> Covector:
    """``L_V phi = i_V d_A phi + d_A <phi, V>`` for a degree-1 section ``V``."""
    ctx = phi.ctx
    n = ctx.n
    size = n + ctx.k
    zero = ScalarFn.constant(0, n)
    comps = [zero] * size
    for key, v in V.terms.items():
        if len(key) != 1:
            raise ValueError("expected a degree-1 section")
        comps[key[0]] = v
    dphi = d_A_form(ctx, phi)
    pv = phi.pair(V)
    out = []
    for r in range(size):
        total = anchor_action(ctx, r, pv)
        for t in range(size):
            if comps[t].is_zero():
                continue
            e = _form_entry(dphi, t, r, zero)
            if not e.is_zero():
                total = total + comps[t] * e
        out.append(total)
    return Covector(ctx, out[:n], out[n:])


def lambda_bracket(lam: Multivector, phi: Covector, psi: Covector) -> Covector:
    if lam.degrees() - {2}:
        raise ValueError("Lambda must have total degree 2")
    ctx = phi.ctx
    a = contract(lam, phi)
    b = contract(lam, psi)
    pairing = psi.pair(a)
    return lie_derivative_form(a, psi) - lie_derivative_form(b, phi) - d_A(ctx, pairing)


def delta_bracket(q: Quadruple, phi: Covector, psi: Covector) -> Covector:
    """Pointwise ``g*`` bracket ``<[xi, eta], e_a> = -<delta e_a, xi ^ eta>``."""
    ctx = q.ctx
    zero = ScalarFn.constant(0, ctx.n)
    xi, eta = phi.xi, psi.xi
    out = [zero] * ctx.k
    for a, row in q.delta.d.items():
        total = zero
        for (b, c), v in row.items():
            w = xi[b] * eta[c] - xi[c] * eta[b]
            if not w.is_zero():
                total = total + w * v
        out[a] = -total
    return Covector(ctx, None, out)


def dual_bracket(q: Quadruple, phi: Covector, psi: Covector, lam: Multivector | None = None) -> Covector:
    if lam is None:
        lam = assemble_lambda(q)
    return lambda_bracket(lam, phi, psi) + delta_bracket(q, phi, psi)


def dual_anchor(q: Quadruple, phi: Covector) -> Multivector:
    """``rho_*(phi)``: the vector-field part of ``Lambda# phi``."""
    V = contract(assemble_lambda(q), phi)
    n = q.ctx.n
    return Multivector._raw(q.ctx, {key: v for key, v in V.terms.items() if key[0] < n})


def phi_map(q: Quadruple, alpha: Covector, xi: Covector) -> Covector:
    """``phi(alpha)(xi) = L_{pi# alpha} xi + ad*_{theta# alpha} xi`` (a ``g*`` section)."""
    ctx = q.ctx
    X = contract(q.pi, Covector(ctx, alpha.alpha))
    A = q.theta.sharp(alpha)
    vecA = [A.component((a,)) for a in range(ctx.k)]
    ad = coad(ctx.L, vecA, list(xi.xi))
    out = []
    for a in range(ctx.k):
        v = as_scalar(ad[a], ctx.n)
        if not X.is_zero():
            v = v + apply_vector(X, xi.xi[a])
        out.append(v)
    return Covector(ctx, None, out)


def psi_map(q: Quadruple, xi: Covector, alpha: Covector) -> Covector:
    """``psi(xi)(alpha) = -<xi, d(theta# alpha)> - i_{(theta#)* xi} d alpha`` (a one-form)."""
    ctx = q.ctx
    n, k = ctx.n, ctx.k
    zero = ScalarFn.constant(0, n)
    A = q.theta.sharp(alpha)
    vecA = [A.component((a,)) for a in range(k)]
    # (theta#)* xi = sum_a xi_a X_a
    V = [zero] * n
    for i, row in enumerate(q.theta.m):
        for a in range(k):
            if not row[a].is_zero() and not xi.xi[a].is_zero():
                V[i] = V[i] + row[a] * xi.xi[a]
    out = []
    for j in range(n):
        total = zero
        for a in range(k):
            d = vecA[a].diff(j)
            if not d.is_zero() and not xi.xi[a].is_zero():
                total = total - xi.xi[a] * d
        for i in range(n):
            if V[i].is_zero():
                continue
            da = alpha.alpha[j].diff(i) - alpha.alpha[i].diff(j)
            if not da.is_zero():
                total = total - V[i] * da
        out.append(total)
    return Covector(ctx, out)


def dual_generators(ctx: Context) -> list:
    """``[(label, covector)]`` for ``dx_i`` and ``e_a*``."""
    out = [(f"d{c}", Covector.dx(ctx, i)) for i, c in enumerate(ctx.coords)]
    out += [(f"{b}*", Covector.dual(ctx, a)) for a, b in enumerate(ctx.L.basis)]
    return out


def dual_jacobiator(q: Quadruple, a: Covector, b: Covector, c: Covector, lam=None) -> Covector:
    if lam is None:
        lam = assemble_lambda(q)
    br = lambda u, v: dual_bracket(q, u, v, lam)
    return br(br(a, b), c) + br(br(b, c), a) + br(br(c, a), b)


def _vec_text(V: Multivector) -> str:
    return V.to_text()


def check_matched_pair(q: Quadruple) -> Report:
    if not q.tau.is_zero():
        raise ValueError("matched-pair mode requires tau = 0")
    ctx = q.ctx
    rep = Report("matched-pair")
    sq = delta_squared(ctx.L, q.delta)
    res_a = [_cocycle_residual(ctx, q.delta)]
    res_a += [f"delta^2({ctx.L.basis[a]}): {v.to_text(ctx.L.basis, ctx.coords)}" for a, v in sq.items() if not v.is_zero()]
    rep.add("matched-pair.1", "Lie bialgebra: delta cocycle and delta^2 = 0", res_a)

    # -(theta#)^*: g* -> vector fields is a Lie algebra morphism
    legs = [q.theta.leg(a) for a in range(ctx.k)]
    from .multivector import lie_derivative

    res_b = []
    for a, b in combinations(range(ctx.k), 2):
        br = delta_bracket(q, Covector.dual(ctx, a), Covector.dual(ctx, b))
        lhs = ctx.zero()
        for c in range(ctx.k):
            if not br.xi[c].is_zero():
                lhs = lhs - legs[c].scale(br.xi[c])
        rhs = lie_derivative(-legs[a], -legs[b])
        if not (lhs - rhs).is_zero():
            res_b.append(f"({ctx.L.basis[a]}*,{ctx.L.basis[b]}*): {_vec_text(lhs - rhs)}")
    rep.add("matched-pair.2", "-(theta#)^* is a Lie algebra morphism", res_b)
    rep.add(
        "matched-pair.3",
        "Poisson action: delta theta + 1/2[theta,theta] = 0",
        theta_bracket(q.theta).scale(HALF) - delta_theta(q.theta, q.delta),
    )
    lam = assemble_lambda(q)
    gens = dual_generators(ctx)
    res_d = []
    for (la, a), (lb, b), (lc, c) in combinations(gens, 3):
        j = dual_jacobiator(q, a, b, c, lam)
        if not j.is_zero():
            res_d.append(f"({la},{lb},{lc}): {j.to_text()}")
    rep.add("matched-pair.4", "Jacobi of the dual bracket on generators", res_d)
    return rep


def anchor_identity_suite(q: Quadruple) -> Report:
    """``d_* f = -pi#(df) - theta#(df)`` and ``[df, xi]_* = -d(rho_*(xi) f) + ad*_{theta#(df)} xi``."""
    from .bialgebroid import d_star

    ctx = q.ctx
    rep = Report("anchor-identities")
    lam = assemble_lambda(q)
    n = ctx.n
    funcs = [(c, ScalarFn.coordinate(i, n)) for i, c in enumerate(ctx.coords)]
    for i in range(n):
        for j in range(i, n):
            funcs.append((f"{ctx.coords[i]}*{ctx.coords[j]}", ScalarFn.coordinate(i, n) * ScalarFn.coordinate(j, n)))
    for label, f in funcs:
        df = Covector.differential(ctx, f)
        lhs = d_star(q, ctx.scalar(f), lam)
        rhs = -contract(q.pi, df) - Multivector.from_alg(ctx, q.theta.sharp(df))
        rep.add(f"anchor.dstar.{label}", f"d_*({label}) = -pi#(df) - theta#(df)", lhs - rhs)
        A = q.theta.sharp(df)
        vecA = [A.component((a,)) for a in range(ctx.k)]
        for a, b in enumerate(ctx.L.basis):
            xi = Covector.dual(ctx, a)
            lhs = dual_bracket(q, df, xi, lam)
            g = apply_vector(dual_anchor(q, xi), f)
            ad = coad(ctx.L, vecA, list(xi.xi))
            rhs = -d_A(ctx, g) + Covector(ctx, None, [as_scalar(v, n) for v in ad])
            rep.add(f"anchor.bracket.{label}.{b}", f"[d({label}), {b}*]_* identity", (lhs - rhs).to_text())
    return rep


prop22_suite = anchor_identity_suite
