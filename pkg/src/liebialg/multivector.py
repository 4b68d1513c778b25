"""Sections of the exterior algebra of ``A = TR^n (+) (R^n x g)``.

A :class:`Multivector` stores sorted tuples of *unified* basis indices: the
coordinate vector fields ``d_0 .. d_{n-1}`` come first, followed by the
algebra basis ``e_a`` at index ``n + a``.  A key with ``p`` indices below
``n`` and ``q`` at or above it has bigrade ``(p, q)``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from ._exterior import drop, merge
from .lie_algebra import AlgMultivector, LieAlgebraData, _acc, _terms_text
from .scalar_field import (
    DivisionByZeroError,
    ExpressionError,
    Node,
    ParseError,
    ScalarFn,
    UnknownIdentifierError,
    _exp_of,
    as_scalar,
    parse_ast,
)

__all__ = [
    "Context",
    "Multivector",
    "Covector",
    "GForm",
    "wedge",
    "contract",
    "bigrade",
    "lie_derivative",
    "de_rham",
    "parse_section",
    "ContextMismatchError",
]


class ContextMismatchError(ValueError):
    pass


class Context:
    """Base dimension, coordinate names and the fibre Lie algebra.

    ``structure`` optionally replaces the constant brackets by
    coordinate-dependent ones: ``{(a, b): {d: ScalarFn}}`` for ``a < b``.
    Such a context is no longer a Lie algebroid, which is what the Jacobiator
    anomaly tests exercise.
    """

    def __init__(self, n: int, coords: Sequence[str] | None, L: LieAlgebraData, structure: Mapping | None = None):
        if n < 0:
            raise ValueError("n must be >= 0")
        coords = list(coords) if coords is not None else [f"x{i + 1}" for i in range(n)]
        if len(coords) != n:
            raise ValueError(f"expected {n} coordinate names, got {len(coords)}")
        if len(set(coords)) != n:
            raise ValueError("coordinate names must be distinct")
        clash = set(coords) & set(L.basis)
        if clash:
            raise ValueError(f"names used both as coordinate and basis element: {sorted(clash)}")
        self.n = n
        self.coords = tuple(coords)
        self.L = L
        self.structure = None
        if structure:
            full = {}
            for (a, b), row in structure.items():
                if a == b:
                    continue
                s = 1 if a < b else -1
                clean = {d: as_scalar(v, n) for d, v in row.items()}
                clean = {d: v for d, v in clean.items() if not v.is_zero()}
                full[(a, b)] = tuple((d, v if s > 0 else -v) for d, v in sorted(clean.items()))
                full[(b, a)] = tuple((d, -v if s > 0 else v) for d, v in sorted(clean.items()))
            self.structure = full
        self._memo: dict = {}

    @property
    def k(self) -> int:
        return self.L.k

    def names(self) -> list[str]:
        """Display labels for the unified basis."""
        return [f"d_{c}" for c in self.coords] + list(self.L.basis)

    def split(self, key: tuple) -> tuple[tuple, tuple]:
        n = self.n
        return tuple(i for i in key if i < n), tuple(i - n for i in key if i >= n)

    def join(self, I: Sequence[int], J: Sequence[int]) -> tuple:
        return tuple(sorted(I)) + tuple(sorted(self.n + a for a in J))

    def alg_bracket(self, a: int, b: int):
        """``((d, coefficient), ...)`` for ``[e_a, e_b]``; coefficients may be ScalarFn."""
        if self.structure is not None:
            return self.structure.get((a, b), ())
        return self.L.bracket(a, b)

    def zero(self) -> "Multivector":
        return Multivector(self, {})

    def scalar(self, f) -> "Multivector":
        return Multivector(self, {(): f})

    def vector(self, i: int) -> "Multivector":
        return Multivector(self, {(i,): 1})

    def element(self, a: int) -> "Multivector":
        return Multivector(self, {(self.n + a,): 1})

    def same(self, other: "Context") -> bool:
        return self is other or (
            self.n == other.n and self.coords == other.coords and self.L == other.L and self.structure is None and other.structure is None
        )

    def __repr__(self):
        return f"Context(n={self.n}, coords={list(self.coords)}, basis={list(self.L.basis)})"


def _check(a: "Multivector", b) -> None:
    if not a.ctx.same(b.ctx):
        raise ContextMismatchError("operands live in different contexts")


class Multivector:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: Context, terms: Mapping | None = None):
        self.ctx = ctx
        size = ctx.n + ctx.k
        clean = {}
        for key, v in (terms or {}).items():
            key = tuple(key)
            if list(key) != sorted(set(key)) or any(not 0 <= i < size for i in key):
                raise ValueError(f"bad basis key {key}")
            v = as_scalar(v, ctx.n)
            if not v.is_zero():
                clean[key] = v
        self.terms = clean

    @classmethod
    def _raw(cls, ctx, terms) -> "Multivector":
        out = cls.__new__(cls)
        out.ctx, out.terms = ctx, terms
        return out

    @classmethod
    def from_components(cls, ctx: Context, comps: Mapping) -> "Multivector":
        """Build from ``{(vector indices, algebra indices): coefficient}``."""
        out: dict = {}
        for (I, J), v in comps.items():
            if list(I) != sorted(set(I)) or list(J) != sorted(set(J)):
                raise ValueError(f"component key ({I}, {J}) must be strictly increasing")
            if any(not 0 <= i < ctx.n for i in I) or any(not 0 <= a < ctx.k for a in J):
                raise ValueError(f"component key ({I}, {J}) out of range")
            v = as_scalar(v, ctx.n)
            if not v.is_zero():
                _acc(out, ctx.join(I, J), v)
        return cls._raw(ctx, out)

    @classmethod
    def from_alg(cls, ctx: Context, P: AlgMultivector) -> "Multivector":
        n = ctx.n
        return cls._raw(ctx, {tuple(n + a for a in key): v for key, v in P.coeffs.items()})

    def components(self) -> dict:
        return {self.ctx.split(key): v for key, v in self.terms.items()}

    def to_alg(self) -> AlgMultivector:
        """Pure algebra part (bigrade ``(0, q)`` keys only)."""
        n = self.ctx.n
        return AlgMultivector._raw(
            self.ctx.k, n, {tuple(i - n for i in key): v for key, v in self.terms.items() if not key or key[0] >= n}
        )

    def bigrades(self) -> set:
        n = self.ctx.n
        out = set()
        for key in self.terms:
            p = sum(1 for i in key if i < n)
            out.add((p, len(key) - p))
        return out

    def degrees(self) -> set:
        return {len(key) for key in self.terms}

    def degree(self) -> int:
        """The total degree of a homogeneous element (0 for zero)."""
        degs = self.degrees()
        if len(degs) > 1:
            raise ValueError("multivector is not homogeneous")
        return next(iter(degs), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, key) -> ScalarFn:
        return self.terms.get(tuple(key), ScalarFn.constant(0, self.ctx.n))

    def __add__(self, other: "Multivector") -> "Multivector":
        _check(self, other)
        out = dict(self.terms)
        for key, v in other.terms.items():
            _acc(out, key, v)
        return Multivector._raw(self.ctx, out)

    def __neg__(self):
        return Multivector._raw(self.ctx, {key: -v for key, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> "Multivector":
        f = as_scalar(f, self.ctx.n)
        if f.is_zero():
            return Multivector._raw(self.ctx, {})
        return Multivector._raw(self.ctx, {key: v * f for key, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return wedge(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multivector):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def to_text(self) -> str:
        names = self.ctx.names()
        return _terms_text(self.terms, lambda key: [names[i] for i in key], self.ctx.coords)

    def to_json(self) -> list:
        """``[[vector indices], [algebra indices], "coefficient"]`` triples, sorted."""
        out = []
        for key in sorted(self.terms, key=lambda t: (len(t), t)):
            I, J = self.ctx.split(key)
            out.append([list(I), list(J), self.terms[key].to_text(self.ctx.coords)])
        return out

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Multivector({self.to_text()!r})"


def wedge(P: Multivector, Q: Multivector) -> Multivector:
    _check(P, Q)
    out: dict = {}
    for I, f in P.terms.items():
        for J, g in Q.terms.items():
            s, K = merge(I, J)
            if s:
                fg = f * g
                _acc(out, K, fg if s > 0 else -fg)
    return Multivector._raw(P.ctx, out)


class Covector:
    """Section ``alpha + xi`` of ``T*R^n (+) (R^n x g*)``."""

    __slots__ = ("ctx", "alpha", "xi")

    def __init__(self, ctx: Context, alpha: Sequence | None = None, xi: Sequence | None = None):
        n, k = ctx.n, ctx.k
        alpha = list(alpha) if alpha is not None else [0] * n
        xi = list(xi) if xi is not None else [0] * k
        if len(alpha) != n or len(xi) != k:
            raise ValueError(f"covector needs {n} form and {k} dual-algebra components")
        self.ctx = ctx
        self.alpha = tuple(as_scalar(v, n) for v in alpha)
        self.xi = tuple(as_scalar(v, n) for v in xi)

    @classmethod
    def dx(cls, ctx: Context, i: int) -> "Covector":
        a = [0] * ctx.n
        a[i] = 1
        return cls(ctx, a)

    @classmethod
    def dual(cls, ctx: Context, a: int) -> "Covector":
        x = [0] * ctx.k
        x[a] = 1
        return cls(ctx, None, x)

    @classmethod
    def differential(cls, ctx: Context, f) -> "Covector":
        """``df`` for a function ``f``."""
        f = as_scalar(f, ctx.n)
        return cls(ctx, [f.diff(i) for i in range(ctx.n)])

    def entry(self, u: int) -> ScalarFn:
        """Pairing with the unified basis element ``u``."""
        n = self.ctx.n
        return self.alpha[u] if u < n else self.xi[u - n]

    def entries(self) -> tuple:
        return self.alpha + self.xi

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.entries())

    def __add__(self, other: "Covector") -> "Covector":
        return Covector(self.ctx, [a + b for a, b in zip(self.alpha, other.alpha)], [a + b for a, b in zip(self.xi, other.xi)])

    def __neg__(self):
        return Covector(self.ctx, [-a for a in self.alpha], [-a for a in self.xi])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> "Covector":
        f = as_scalar(f, self.ctx.n)
        return Covector(self.ctx, [a * f for a in self.alpha], [a * f for a in self.xi])

    __rmul__ = scale

    def pair(self, X: Multivector) -> ScalarFn:
        """``<self, X>`` for a degree-1 multivector ``X``."""
        total = ScalarFn.constant(0, self.ctx.n)
        for key, v in X.terms.items():
            if len(key) != 1:
                raise ValueError("can only pair a covector with a degree-1 section")
            total = total + v * self.entry(key[0])
        return total

    def __eq__(self, other):
        if not isinstance(other, Covector):
            return NotImplemented
        return all(a == b for a, b in zip(self.entries(), other.entries()))

    __hash__ = None

    def to_text(self) -> str:
        names = [f"d{c}" for c in self.ctx.coords] + [f"{b}*" for b in self.ctx.L.basis]
        terms = {(u,): v for u, v in enumerate(self.entries()) if not v.is_zero()}
        return _terms_text(terms, lambda key: [names[i] for i in key], self.ctx.coords)

    def __repr__(self):
        return f"Covector({self.to_text()!r})"


def contract(P: Multivector, phi: Covector) -> Multivector:
    """Interior product ``i_phi P`` with ``i_phi(u1^...^up) = sum_r (-1)^(r-1) <phi,u_r> u_(r)``."""
    _check(P, phi)
    ent = phi.entries()
    out: dict = {}
    for I, f in P.terms.items():
        for r, u in enumerate(I):
            c = ent[u]
            if c.is_zero():
                continue
            v = f * c
            _acc(out, drop(I, r), -v if r & 1 else v)
    return Multivector._raw(P.ctx, out)


def pairing(P: Multivector, phis: Sequence[Covector]) -> ScalarFn:
    """``P(phi_1, ..., phi_p)``: contract in order, ``i_{phi_p} ... i_{phi_1} P``."""
    for phi in phis:
        P = contract(P, phi)
    return P.coefficient(())


def bigrade(P: Multivector, p: int, q: int) -> Multivector:
    n = P.ctx.n
    out = {}
    for key, v in P.terms.items():
        kp = sum(1 for i in key if i < n)
        if kp == p and len(key) - kp == q:
            out[key] = v
    return Multivector._raw(P.ctx, out)


def _vector_components(X: Multivector):
    n = X.ctx.n
    comps = [ScalarFn.constant(0, n)] * n
    for key, v in X.terms.items():
        if len(key) != 1 or key[0] >= n:
            raise ValueError("expected a vector field (bigrade (1, 0))")
        comps[key[0]] = v
    return comps


def apply_vector(X: Multivector, f: ScalarFn) -> ScalarFn:
    """Directional derivative ``X(f)``."""
    total = ScalarFn.constant(0, X.ctx.n)
    for i, c in enumerate(_vector_components(X)):
        if not c.is_zero():
            total = total + c * f.diff(i)
    return total


def lie_derivative(X: Multivector, P: Multivector) -> Multivector:
    """Lie derivative along a vector field.

    Coefficients are differentiated along ``X``; each coordinate field
    ``d_i`` picks up ``[X, d_i] = -sum_j d_i(X^j) d_j`` and constant algebra
    sections are left fixed.
    """
    _check(X, P)
    n = P.ctx.n
    comps = _vector_components(X)
    # L_X d_i
    images = []
    for i in range(n):
        row = {}
        for j, c in enumerate(comps):
            d = c.diff(i)
            if not d.is_zero():
                row[j] = -d
        images.append(row)
    out: dict = {}
    for I, f in P.terms.items():
        Xf = apply_vector(X, f)
        if not Xf.is_zero():
            _acc(out, I, Xf)
        for r, u in enumerate(I):
            if u >= n or not images[u]:
                continue
            rest = drop(I, r)
            for j, c in images[u].items():
                # replace position r by d_j: move d_j to the front, then merge
                s, K = merge((j,), rest)
                if s:
                    if r & 1:
                        s = -s
                    v = f * c
                    _acc(out, K, v if s > 0 else -v)
    return Multivector._raw(P.ctx, out)


class GForm:
    """Differential form on ``R^n`` with values in ``Lambda^q g``.

    Keys are ``(form indices, algebra indices)``, both sorted.
    """

    __slots__ = ("n", "k", "terms")

    def __init__(self, n: int, k: int, terms: Mapping | None = None):
        self.n, self.k = n, k
        clean = {}
        for (F, A), v in (terms or {}).items():
            F, A = tuple(F), tuple(A)
            if list(F) != sorted(set(F)) or list(A) != sorted(set(A)):
                raise ValueError(f"bad key ({F}, {A})")
            v = as_scalar(v, n)
            if not v.is_zero():
                clean[(F, A)] = v
        self.terms = clean

    @classmethod
    def from_alg(cls, P: AlgMultivector) -> "GForm":
        """A 0-form with values in ``Lambda g``."""
        return cls(P.dim, P.k, {((), key): v for key, v in P.coeffs.items()})

    @classmethod
    def from_function(cls, f: ScalarFn, k: int = 0) -> "GForm":
        return cls(f.dim, k, {((), ()): f})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for key, v in other.terms.items():
            _acc(out, key, v)
        return GForm(self.n, self.k, out)

    def __neg__(self):
        return GForm(self.n, self.k, {key: -v for key, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, GForm):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def leg(self, i: int) -> AlgMultivector:
        """For a 1-form: the ``dx_i`` component as an algebra element."""
        return AlgMultivector._raw(self.k, self.n, {A: v for (F, A), v in self.terms.items() if F == (i,)})

    def to_text(self, coords: Sequence[str] | None = None, basis: Sequence[str] | None = None) -> str:
        coords = coords or [f"x{i + 1}" for i in range(self.n)]
        basis = basis or [f"e{a + 1}" for a in range(self.k)]
        flat = {(F, A): v for (F, A), v in self.terms.items()}
        labels = lambda key: [f"d{coords[i]}" for i in key[0]] + [basis[a] for a in key[1]]
        return _terms_text(flat, labels, coords)

    def __repr__(self):
        return f"GForm({self.to_text()!r})"


def de_rham(omega) -> GForm:
    """Componentwise exterior derivative ``d = sum_j dx_j ^ d/dx_j``."""
    if isinstance(omega, AlgMultivector):
        omega = GForm.from_alg(omega)
    elif isinstance(omega, ScalarFn):
        omega = GForm.from_function(omega)
    out: dict = {}
    for (F, A), f in omega.terms.items():
        for j in range(omega.n):
            s, G = merge((j,), F)
            if not s:
                continue
            d = f.diff(j)
            if not d.is_zero():
                _acc(out, (G, A), d if s > 0 else -d)
    res = GForm.__new__(GForm)
    res.n, res.k, res.terms = omega.n, omega.k, out
    return res


def parse_section(text: str, ctx: Context) -> Multivector:
    """Parse an expression for a section of ``Lambda A``.

    Identifiers are coordinates, ``d_<coord>`` for coordinate vector fields
    and the algebra basis names; ``*`` between sections is the wedge product.
    Division and ``^`` only accept scalar operands.
    """
    node = parse_ast(text)
    coord_index = {c: i for i, c in enumerate(ctx.coords)}
    basis_index = {f"d_{c}": i for i, c in enumerate(ctx.coords)}
    basis_index.update({b: ctx.n + a for a, b in enumerate(ctx.L.basis)})
    n = ctx.n

    def as_fn(mv: Multivector, pos: int, what: str) -> ScalarFn:
        if any(key for key in mv.terms):
            raise ParseError(f"{what} needs a scalar operand", pos, text)
        return mv.coefficient(())

    def ev(nd: Node) -> Multivector:
        kind = nd.kind
        if kind == "num":
            return ctx.scalar(nd.value)
        if kind == "name":
            if nd.value in coord_index:
                return ctx.scalar(ScalarFn.coordinate(coord_index[nd.value], n))
            if nd.value in basis_index:
                return Multivector._raw(ctx, {(basis_index[nd.value],): ScalarFn.constant(1, n)})
            raise UnknownIdentifierError(f"unknown identifier {nd.value!r}", nd.pos, text)
        if kind == "exp":
            return ctx.scalar(_exp_of(as_fn(ev(nd.args[0]), nd.pos, "exp()"), nd.pos, text))
        if kind == "neg":
            return -ev(nd.args[0])
        if kind == "pow":
            return ctx.scalar(as_fn(ev(nd.args[0]), nd.pos, "'^'") ** nd.value)
        a, b = ev(nd.args[0]), ev(nd.args[1])
        if kind == "add":
            return a + b
        if kind == "sub":
            return a - b
        if kind == "mul":
            return wedge(a, b)
        den = as_fn(b, nd.pos, "division")
        if den.is_zero():
            raise DivisionByZeroError(f"division by zero at position {nd.pos}")
        return a.scale(ScalarFn.constant(1, n) / den)

    return ev(node)
