"""Schouten bracket on sections of ``Lambda A`` and the theta-calculus.

On monomials ``f s_I`` and ``g s_J`` (``p = |I|``, ``q = |J|``, positions
counted from 1) the bracket is

    [f s_I, g s_J] = f g sum_{r,t} (-1)^{r+t} [s_{i_r}, s_{j_t}] ^ s_{I-r} ^ s_{J-t}
                   + f sum_r (-1)^{p-r} s_{i_r}(g) s_{I-r} ^ s_J
                   - (-1)^{(p-1)(q-1)} g sum_t (-1)^{q-t} s_{j_t}(f) s_{J-t} ^ s_I

where ``s_i(g)`` is the anchor action (a partial derivative for coordinate
fields, zero for algebra elements) and the basis brackets are
``[d_i, d_j] = [d_i, e_a] = 0`` and ``[e_a, e_b] = c_ab^d e_d``.
"""

from __future__ import annotations

from typing import Sequence

from ._exterior import drop, merge
from .lie_algebra import AlgMultivector, Cobracket, _acc, alg_schouten, apply_delta
from .multivector import (
    Context,
    Covector,
    Multivector,
    _check,
    contract,
    lie_derivative,
    wedge,
)
from .scalar_field import ScalarFn, as_scalar

__all__ = [
    "schouten",
    "jacobiator",
    "Theta",
    "theta_to_K",
    "d_pi",
    "theta_bracket",
    "theta_wedge",
    "delta_theta",
    "tau_theta_bracket",
    "alt_theta_dtau",
    "pi_sharp_dtau",
    "cobracket_on",
]


def _basis_bracket(ctx: Context, I: tuple, J: tuple) -> dict:
    """Algebraic part ``[s_I, s_J]`` (no anchor terms), memoized per context."""
    memo = ctx._memo
    hit = memo.get((I, J))
    if hit is not None:
        return hit
    n = ctx.n
    out: dict = {}
    for r, a in enumerate(I):
        if a < n:
            continue
        Ir = drop(I, r)
        for t, b in enumerate(J):
            if b < n:
                continue
            row = ctx.alg_bracket(a - n, b - n)
            if not row:
                continue
            s0, R = merge(Ir, drop(J, t))
            if not s0:
                continue
            if (r + t) & 1:
                s0 = -s0
            for d, c in row:
                s1, K = merge((n + d,), R)
                if s1:
                    v = c * (s0 * s1)
                    prev = out.get(K)
                    out[K] = v if prev is None else prev + v
    out = {K: v for K, v in out.items() if v}
    memo[(I, J)] = out
    return out


def schouten(P: Multivector, Q: Multivector) -> Multivector:
    _check(P, Q)
    ctx = P.ctx
    n = ctx.n
    out: dict = {}
    for I, f in P.terms.items():
        p = len(I)
        for J, g in Q.terms.items():
            q = len(J)
            base = _basis_bracket(ctx, I, J)
            if base:
                fg = f * g
                for K, c in base.items():
                    _acc(out, K, fg * c)
            # the anchor of I acting on g
            for r, u in enumerate(I):
                if u >= n:
                    continue
                dg = g.diff(u)
                if dg.is_zero():
                    continue
                s, K = merge(drop(I, r), J)
                if not s:
                    continue
                if (p - 1 - r) & 1:
                    s = -s
                v = f * dg
                _acc(out, K, v if s > 0 else -v)
            # the anchor of J acting on f
            for t, u in enumerate(J):
                if u >= n:
                    continue
                df = f.diff(u)
                if df.is_zero():
                    continue
                s, K = merge(drop(J, t), I)
                if not s:
                    continue
                s = -s
                if ((p - 1) * (q - 1)) & 1:
                    s = -s
                if (q - 1 - t) & 1:
                    s = -s
                v = g * df
                _acc(out, K, v if s > 0 else -v)
    return Multivector._raw(ctx, out)


def jacobiator(X: Multivector, A: Multivector, B: Multivector) -> Multivector:
    """``[X,[A,B]] + [B,[X,A]] + [A,[B,X]]``."""
    return schouten(X, schouten(A, B)) + schouten(B, schouten(X, A)) + schouten(A, schouten(B, X))


class Theta:
    """``theta = sum_{i,a} theta[i][a] d_i (x) e_a``."""

    __slots__ = ("ctx", "m")

    def __init__(self, ctx: Context, matrix: Sequence[Sequence] | None = None):
        n, k = ctx.n, ctx.k
        if matrix is None:
            matrix = [[0] * k for _ in range(n)]
        if len(matrix) != n or any(len(row) != k for row in matrix):
            raise ValueError(f"theta must be a {n} x {k} matrix")
        self.ctx = ctx
        self.m = tuple(tuple(as_scalar(v, n) for v in row) for row in matrix)

    @classmethod
    def from_pairs(cls, ctx: Context, pairs) -> "Theta":
        """From ``[(vector field, algebra index), ...]`` meaning ``sum X (x) e_a``."""
        n, k = ctx.n, ctx.k
        mat = [[ScalarFn.constant(0, n) for _ in range(k)] for _ in range(n)]
        for X, a in pairs:
            for key, v in X.terms.items():
                if len(key) != 1 or key[0] >= n:
                    raise ValueError("theta legs must be vector fields")
                mat[key[0]][a] = mat[key[0]][a] + v
        return cls(ctx, mat)

    def leg(self, a: int) -> Multivector:
        """The vector field ``X_a`` multiplying ``e_a``."""
        return Multivector._raw(self.ctx, {(i,): row[a] for i, row in enumerate(self.m) if not row[a].is_zero()})

    def sharp(self, alpha: Covector) -> AlgMultivector:
        """``theta#(alpha) = sum_{i,a} alpha_i theta^{ia} e_a``."""
        k, n = self.ctx.k, self.ctx.n
        vec = [ScalarFn.constant(0, n)] * k
        for i, row in enumerate(self.m):
            ai = alpha.alpha[i]
            if ai.is_zero():
                continue
            for a in range(k):
                vec[a] = vec[a] + ai * row[a]
        return AlgMultivector.from_vector(vec, n)

    def is_zero(self) -> bool:
        return all(v.is_zero() for row in self.m for v in row)

    def __add__(self, other: "Theta") -> "Theta":
        return Theta(self.ctx, [[a + b for a, b in zip(r, s)] for r, s in zip(self.m, other.m)])

    def scale(self, c) -> "Theta":
        return Theta(self.ctx, [[a * c for a in r] for r in self.m])

    def __eq__(self, other):
        if not isinstance(other, Theta):
            return NotImplemented
        return all(a == b for r, s in zip(self.m, other.m) for a, b in zip(r, s))

    __hash__ = None


def theta_to_K(theta: Theta) -> Multivector:
    """``K = sum theta^{ia} d_i ^ e_a``, so that ``i_{dx_i} K = theta#(dx_i)``."""
    ctx = theta.ctx
    n = ctx.n
    out = {}
    for i, row in enumerate(theta.m):
        for a, v in enumerate(row):
            if not v.is_zero():
                out[(i, n + a)] = v
    return Multivector._raw(ctx, out)


def K_to_theta(K: Multivector) -> Theta:
    ctx = K.ctx
    n = ctx.n
    mat = [[0] * ctx.k for _ in range(n)]
    for key, v in K.terms.items():
        if len(key) != 2 or key[0] >= n or key[1] < n:
            raise ValueError("K must have bigrade (1, 1)")
        mat[key[0]][key[1] - n] = v
    return Theta(ctx, mat)


def d_pi(theta: Theta, pi: Multivector) -> Multivector:
    """``d_pi theta = -sum_a (L_{X_a} pi) ^ e_a`` via the classical Lie derivative."""
    _check(pi, theta)
    ctx = theta.ctx
    out = ctx.zero()
    for a in range(ctx.k):
        X = theta.leg(a)
        if X.is_zero():
            continue
        out = out - wedge(lie_derivative(X, pi), ctx.element(a))
    return out


def theta_bracket(theta: Theta) -> Multivector:
    """``[theta, theta] = sum_{a,b} [X_a, X_b] ^ e_a ^ e_b`` (both orders summed)."""
    ctx = theta.ctx
    out = ctx.zero()
    legs = [theta.leg(a) for a in range(ctx.k)]
    for a, Xa in enumerate(legs):
        if Xa.is_zero():
            continue
        for b, Xb in enumerate(legs):
            if a == b or Xb.is_zero():
                continue
            br = lie_derivative(Xa, Xb)
            if br.is_zero():
                continue
            out = out + wedge(br, wedge(ctx.element(a), ctx.element(b)))
    return out


def theta_wedge(theta: Theta) -> Multivector:
    """``theta ^ theta = sum_{a<b} X_a ^ X_b ^ [e_a, e_b]``."""
    ctx = theta.ctx
    out = ctx.zero()
    legs = [theta.leg(a) for a in range(ctx.k)]
    for a in range(ctx.k):
        for b in range(a + 1, ctx.k):
            row = ctx.alg_bracket(a, b)
            if not row or legs[a].is_zero() or legs[b].is_zero():
                continue
            XX = wedge(legs[a], legs[b])
            for d, c in row:
                out = out + wedge(XX, ctx.element(d)).scale(c)
    return out


def cobracket_on(ctx: Context, delta: Cobracket, P: Multivector) -> Multivector:
    """Extend ``delta`` to all of ``Lambda A`` as a derivation killing functions and ``d_i``.

    ``delta(P ^ Q) = delta(P) ^ Q + (-1)^p P ^ delta(Q)``.
    """
    n = ctx.n
    out: dict = {}
    for I, f in P.terms.items():
        for r, u in enumerate(I):
            if u < n:
                continue
            row = delta.d.get(u - n)
            if not row:
                continue
            rest = drop(I, r)
            # delta(s_u) is even, so it can be moved in front of position r
            # at the cost of the prefix sign only
            for (b, c), v in row.items():
                s, K = merge((n + b, n + c), rest)
                if not s:
                    continue
                if r & 1:
                    s = -s
                _acc(out, K, f * (s * v))
    return Multivector._raw(ctx, out)


def delta_theta(theta: Theta, delta: Cobracket) -> Multivector:
    """``delta theta = sum_a X_a ^ delta(e_a)``."""
    ctx = theta.ctx
    out = ctx.zero()
    for a in range(ctx.k):
        X = theta.leg(a)
        img = delta.image(a, ctx.n)
        if X.is_zero() or img.is_zero():
            continue
        out = out + wedge(X, Multivector.from_alg(ctx, img))
    return out


def tau_theta_bracket(tau: AlgMultivector, theta: Theta) -> Multivector:
    """``[tau, theta] = sum_a X_a ^ [tau, e_a]`` with the pointwise algebraic bracket."""
    ctx = theta.ctx
    out = ctx.zero()
    for a in range(ctx.k):
        X = theta.leg(a)
        if X.is_zero():
            continue
        br = alg_schouten(ctx.L, tau, AlgMultivector.basis(ctx.k, ctx.n, a))
        if not br.is_zero():
            out = out + wedge(X, Multivector.from_alg(ctx, br))
    return out


def alt_theta_dtau(theta: Theta, tau: AlgMultivector) -> AlgMultivector:
    """Total antisymmetrization of ``theta# d tau`` as a trivector.

    ``<Alt, xi^eta^zeta> = <(theta# d tau)(xi, eta), zeta> + cyclic``, three
    cyclic terms and no normalizing factor.  On a basis triple ``b < c < d``
    this reads ``sum_j d_j tau_bc theta^{jd} + d_j tau_cd theta^{jb} + d_j tau_db theta^{jc}``.
    """
    ctx = theta.ctx
    n, k = ctx.n, ctx.k
    zero = ScalarFn.constant(0, n)
    dtau = [[[zero] * k for _ in range(k)] for _ in range(n)]
    for key, v in tau.coeffs.items():
        if len(key) != 2:
            raise ValueError("tau must be a bivector")
        b, c = key
        for j in range(n):
            d = v.diff(j)
            if not d.is_zero():
                dtau[j][b][c] = d
                dtau[j][c][b] = -d
    out = {}
    for b in range(k):
        for c in range(b + 1, k):
            for d in range(c + 1, k):
                total = zero
                for j in range(n):
                    row = theta.m[j]
                    for (x, y, z) in ((b, c, d), (c, d, b), (d, b, c)):
                        t = dtau[j][x][y]
                        if not t.is_zero() and not row[z].is_zero():
                            total = total + t * row[z]
                if not total.is_zero():
                    out[(b, c, d)] = total
    return AlgMultivector._raw(k, n, out)


def pi_sharp_dtau(pi: Multivector, tau: AlgMultivector) -> Multivector:
    """``pi#(d tau) = sum_j pi#(dx_j) ^ d_j tau`` with ``pi#(dx_j) = i_{dx_j} pi``."""
    ctx = pi.ctx
    out = ctx.zero()
    for j in range(ctx.n):
        dj = tau.diff(j)
        if dj.is_zero():
            continue
        v = contract(pi, Covector.dx(ctx, j))
        if not v.is_zero():
            out = out + wedge(v, Multivector.from_alg(ctx, dj))
    return out
