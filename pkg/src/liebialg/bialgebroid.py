"""Quadruples ``(pi, theta, tau, delta)`` on ``TR^n (+) (R^n x g)`` and their verifiers.

``Lambda = pi + K + tau`` and ``T = delta(Lambda) + 1/2 [Lambda, Lambda]``.
The bigraded pieces of ``T`` under the implemented bracket are

    T(3,0) = 1/2 [pi, pi]
    T(2,1) = d_pi theta + theta ^ theta
    T(1,2) = -delta theta - [tau, theta] + 1/2 [theta, theta] - pi#(d tau)
    T(0,3) = delta tau + 1/2 [tau, tau] - Alt(theta# d tau)

where ``[tau, theta]`` is :func:`tau_theta_bracket` and ``Alt`` is
:func:`alt_theta_dtau`.  :func:`t_direct` recomputes the same thing straight
from the Schouten bracket; the two must agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .lie_algebra import (
    AlgMultivector,
    Cobracket,
    LieAlgebraData,
    alg_schouten,
    apply_delta,
    cocycle_defects,
    coboundary,
    delta_squared,
)
from .multivector import Context, Multivector, apply_vector, bigrade, contract, Covector, de_rham
from .schouten import (
    Theta,
    alt_theta_dtau,
    cobracket_on,
    d_pi,
    delta_theta,
    pi_sharp_dtau,
    schouten,
    tau_theta_bracket,
    theta_bracket,
    theta_to_K,
    theta_wedge,
)
from .scalar_field import ScalarFn

__all__ = [
    "Quadruple",
    "Condition",
    "Diagnostic",
    "Report",
    "assemble_lambda",
    "t_components",
    "t_direct",
    "verify_transitive",
    "verify_coboundary",
    "gauge_transform",
    "d_star",
    "check_master",
    "check_hamiltonian_tau",
    "omega",
]

HALF = Fraction(1, 2)


@dataclass
class Quadruple:
    ctx: Context
    pi: Multivector
    theta: Theta
    tau: AlgMultivector
    delta: Cobracket

    def __post_init__(self):
        n, k = self.ctx.n, self.ctx.k
        if self.pi.bigrades() - {(2, 0)}:
            raise ValueError("pi must have bigrade (2, 0)")
        if self.tau.degrees() - {2}:
            raise ValueError("tau must be a bivector in the algebra")
        if self.tau.k != k or self.tau.dim != n or self.delta.k != k or self.theta.ctx.k != k:
            raise ValueError("quadruple shapes do not match the context")

    @classmethod
    def zero(cls, ctx: Context) -> "Quadruple":
        return cls(ctx, ctx.zero(), Theta(ctx), AlgMultivector(ctx.k, ctx.n), Cobracket.zero(ctx.k))

    def replace(self, **kw) -> "Quadruple":
        data = dict(ctx=self.ctx, pi=self.pi, theta=self.theta, tau=self.tau, delta=self.delta)
        data.update(kw)
        return Quadruple(**data)

    def __eq__(self, other):
        if not isinstance(other, Quadruple):
            return NotImplemented
        return (
            self.ctx.same(other.ctx)
            and self.pi == other.pi
            and self.theta == other.theta
            and self.tau == other.tau
            and self.delta == other.delta
        )

    __hash__ = None


@dataclass
class Condition:
    id: str
    tag: str
    passed: bool
    residual: str = "0"

    def to_json(self) -> dict:
        return {"id": self.id, "tag": self.tag, "pass": self.passed, "residual": self.residual}


@dataclass
class Diagnostic:
    """Informational value that does not enter the verdict."""

    id: str
    value: str
    note: str = ""

    def to_json(self) -> dict:
        return {"id": self.id, "value": self.value, "note": self.note}


@dataclass
class Report:
    mode: str
    conditions: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def add(self, id: str, tag: str, residual) -> Condition:
        text = _text(residual)
        cond = Condition(id, tag, text == "0", text)
        self.conditions.append(cond)
        return cond

    def diag(self, id: str, value, note: str = "") -> None:
        self.diagnostics.append(Diagnostic(id, _text(value), note))

    def get(self, id: str) -> Condition:
        for c in self.conditions:
            if c.id == id:
                return c
        raise KeyError(id)

    def failing(self) -> list:
        return [c for c in self.conditions if not c.passed]

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "pass": self.passed,
            "conditions": [c.to_json() for c in self.conditions],
            "diagnostics": [d.to_json() for d in self.diagnostics],
            "notes": list(self.notes),
        }


def _text(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (list, tuple)):
        parts = [_text(v) for v in value]
        parts = [p for p in parts if p != "0"]
        return "; ".join(parts) if parts else "0"
    return value.to_text()


def _alg_text(ctx: Context, P: AlgMultivector) -> str:
    return P.to_text(ctx.L.basis, ctx.coords)


def assemble_lambda(q: Quadruple) -> Multivector:
    return q.pi + theta_to_K(q.theta) + Multivector.from_alg(q.ctx, q.tau)


def t_direct(q: Quadruple) -> Multivector:
    """``delta(Lambda) + 1/2 [Lambda, Lambda]`` from the Schouten bracket alone."""
    lam = assemble_lambda(q)
    return cobracket_on(q.ctx, q.delta, lam) + schouten(lam, lam).scale(HALF)


def t_components(q: Quadruple) -> tuple:
    """``(T30, T21, T12, T03)`` from the theta-calculus (``T03`` as an AlgMultivector)."""
    ctx = q.ctx
    pi, th, tau = q.pi, q.theta, q.tau
    t30 = schouten(pi, pi).scale(HALF)
    t21 = d_pi(th, pi) + theta_wedge(th)
    t12 = (
        theta_bracket(th).scale(HALF)
        - delta_theta(th, q.delta)
        - tau_theta_bracket(tau, th)
        - pi_sharp_dtau(pi, tau)
    )
    t03 = apply_delta(q.delta, tau) + alg_schouten(ctx.L, tau, tau).scale(HALF) - alt_theta_dtau(th, tau)
    return t30, t21, t12, t03


def omega(q: Quadruple) -> AlgMultivector:
    """``1/2 [tau, tau] - Alt(theta# d tau)``: the trivector constrained by the dynamical equation."""
    return alg_schouten(q.ctx.L, q.tau, q.tau).scale(HALF) - alt_theta_dtau(q.theta, q.tau)


def _constancy_residual(ctx: Context, P: AlgMultivector):
    d = de_rham(P)
    return d.to_text(ctx.coords, ctx.L.basis)


def _ad_residual(ctx: Context, P: AlgMultivector) -> list:
    out = []
    for a in range(ctx.k):
        r = alg_schouten(ctx.L, AlgMultivector.basis(ctx.k, ctx.n, a), P)
        if not r.is_zero():
            out.append(f"{ctx.L.basis[a]}: {_alg_text(ctx, r)}")
    return out


def _cocycle_residual(ctx: Context, delta: Cobracket) -> str:
    defects = cocycle_defects(ctx.L, delta)
    if not defects:
        return "0"
    b = ctx.L.basis
    return "; ".join(f"({b[x]},{b[y]}): {v.to_text(b)}" for (x, y), v in sorted(defects.items()))


def verify_transitive(q: Quadruple) -> Report:
    ctx = q.ctx
    rep = Report("transitive")
    t30, t21, t12, t03 = t_components(q)
    rep.add("transitive.1", "cocycle: delta is a Lie algebra 1-cocycle", _cocycle_residual(ctx, q.delta))
    rep.add("transitive.2", "poisson: [pi, pi] = 0", schouten(q.pi, q.pi))
    rep.add("transitive.3", "morphism: d_pi theta + theta^theta = 0", t21)
    rep.add("transitive.4", "coupling: T(1,2) = 0", t12)
    rep.add("transitive.5", "constancy: d T(0,3) = 0", _constancy_residual(ctx, t03))
    sq = delta_squared(ctx.L, q.delta)
    residual6 = []
    for a in range(ctx.k):
        r = sq[a] + alg_schouten(ctx.L, t03, AlgMultivector.basis(ctx.k, ctx.n, a))
        if not r.is_zero():
            residual6.append(f"{ctx.L.basis[a]}: {_alg_text(ctx, r)}")
    rep.add("transitive.6", "co-jacobi: delta^2 + [T(0,3), .] = 0", residual6)
    rep.diag("T03", _alg_text(ctx, t03))
    adinv = _ad_residual(ctx, t03) if all(v.is_constant() for v in t03.coeffs.values()) else ["T(0,3) not constant"]
    rep.diag("T03.ad_invariance", adinv, "reported separately, not part of the verdict")
    return rep


def verify_coboundary(q: Quadruple) -> Report:
    if not q.delta.is_zero():
        raise ValueError("coboundary mode requires delta = 0")
    ctx = q.ctx
    rep = Report("coboundary")
    t30, t21, t12, _ = t_components(q)
    om = omega(q)
    rep.add("coboundary.1", "poisson: [pi, pi] = 0", schouten(q.pi, q.pi))
    rep.add("coboundary.2", "morphism: d_pi theta + theta^theta = 0", t21)
    rep.add("coboundary.3", "coupling: 1/2[theta,theta] = [tau,theta] - pi#(d tau)", t12)
    const = om.is_constant()
    if const:
        res4 = _ad_residual(ctx, om)
    else:
        res4 = ["not constant: " + _constancy_residual(ctx, om)]
    rep.add("coboundary.4", "dynamical YBE: Omega constant and ad-invariant", res4)
    rep.diag("Omega", _alg_text(ctx, om), "Omega = 1/2[tau,tau] - Alt(theta# d tau)")
    rep.diag("half_tau_tau", _alg_text(ctx, alg_schouten(ctx.L, q.tau, q.tau).scale(HALF)))
    rep.diag("Alt", _alg_text(ctx, alt_theta_dtau(q.theta, q.tau)), "three cyclic terms, no normalizing factor")
    rep.diag("theta_bracket", theta_bracket(q.theta))
    return rep


def gauge_transform(q: Quadruple, r0: AlgMultivector) -> Quadruple:
    """``tau -> tau + r0`` and ``delta -> delta - [r0, .]`` for constant ``r0``."""
    if not r0.is_constant():
        raise ValueError("r0 must be constant")
    if r0.degrees() - {2}:
        raise ValueError("r0 must be a bivector")
    # delta - [r0, .] = delta + [., r0]
    new_delta = q.delta + coboundary(q.ctx.L, r0)
    lifted = AlgMultivector(q.ctx.k, q.ctx.n, {key: v.constant_value() for key, v in r0.coeffs.items()})
    return q.replace(tau=q.tau + lifted, delta=new_delta)


def d_star(q: Quadruple, S: Multivector, lam: Multivector | None = None) -> Multivector:
    """``d_* S = [Lambda, S] + delta(S)``."""
    if lam is None:
        lam = assemble_lambda(q)
    return schouten(lam, S) + cobracket_on(q.ctx, q.delta, S)


def generators(ctx: Context) -> list:
    """``[(label, section)]`` for ``x_i``, ``d_i`` and ``e_a``."""
    out = [(c, ctx.scalar(ScalarFn.coordinate(i, ctx.n))) for i, c in enumerate(ctx.coords)]
    out += [(f"d_{c}", ctx.vector(i)) for i, c in enumerate(ctx.coords)]
    out += [(b, ctx.element(a)) for a, b in enumerate(ctx.L.basis)]
    return out


def check_master(q: Quadruple) -> Report:
    """``d_*^2`` on every generator, computed by applying :func:`d_star` twice."""
    rep = Report("master")
    lam = assemble_lambda(q)
    for label, g in generators(q.ctx):
        once = d_star(q, g, lam)
        rep.add(f"master.{label}", f"d_*^2({label}) = 0", d_star(q, once, lam))
    return rep


def check_hamiltonian_tau(q: Quadruple) -> Report:
    """Split of the coupling and Jacobi conditions for a Hamiltonian-type ``tau``."""
    ctx = q.ctx
    th, tau = q.theta, q.tau
    rep = Report("hamiltonian-tau")
    rep.add(
        "hamiltonian.1",
        "delta theta + 1/2[theta,theta] = 0",
        theta_bracket(th).scale(HALF) - delta_theta(th, q.delta),
    )
    rep.add(
        "hamiltonian.2",
        "[tau,theta] - pi#(d tau) = 0",
        -(tau_theta_bracket(tau, th) + pi_sharp_dtau(q.pi, tau)),
    )
    sq = delta_squared(ctx.L, q.delta)
    rep.add("hamiltonian.3", "delta^2 = 0", [f"{ctx.L.basis[a]}: {_alg_text(ctx, v)}" for a, v in sq.items() if not v.is_zero()])
    t03 = apply_delta(q.delta, tau) + omega(q)
    rep.add("hamiltonian.4", "delta tau + 1/2[tau,tau] + Alt(theta# d tau) = 0", _alg_text(ctx, t03))
    # pointwise form of the coupling condition on coordinate functions
    literal, flipped = [], []
    for i, c in enumerate(ctx.coords):
        Xf = contract(q.pi, Covector.dx(ctx, i))
        lhs = AlgMultivector._raw(ctx.k, ctx.n, {})
        for key, v in tau.coeffs.items():
            w = apply_vector(Xf, v) if not Xf.is_zero() else ScalarFn.constant(0, ctx.n)
            if not w.is_zero():
                lhs.coeffs[key] = w
        rhs = alg_schouten(ctx.L, th.sharp(Covector.dx(ctx, i)), tau)
        if not (lhs - rhs).is_zero():
            literal.append(f"{c}: {_alg_text(ctx, lhs - rhs)}")
        if not (lhs + rhs).is_zero():
            flipped.append(f"{c}: {_alg_text(ctx, lhs + rhs)}")
    rep.diag(
        "pointwise.literal",
        literal,
        "X_f tau - ad_{theta#(df)} tau for f = x_i; not a verdict",
    )
    rep.diag(
        "pointwise.consistent",
        flipped,
        "X_f tau + ad_{theta#(df)} tau for f = x_i; vanishes exactly when the coupling condition does",
    )
    return rep
