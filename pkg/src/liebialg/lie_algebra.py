"""Finite-dimensional Lie algebras given by structure constants.

Holds the algebraic exterior algebra of ``g`` with :class:`ScalarFn`
coefficients, the algebraic Schouten bracket, cobrackets and their cocycle /
co-Jacobi checks, the coadjoint action and an ad-invariance test.

The bracket on ``Lambda g`` extends ``[e_a, e_b] = c_ab^d e_d`` by

    [u1^...^up, v1^...^vq] = sum_{r,t} (-1)^{r+t} [u_r, v_t] ^ u_(r) ^ v_(t)

(hats denote omitted factors).  It satisfies graded antisymmetry
``[P,Q] = -(-1)^{(p-1)(q-1)} [Q,P]`` and graded Leibniz
``[P, Q^R] = [P,Q]^R + (-1)^{(p-1)q} Q^[P,R]``; coefficients multiply
pointwise.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from ._exterior import drop, merge
from .scalar_field import ScalarFn, as_scalar

__all__ = [
    "LieAlgebraData",
    "Cobracket",
    "AlgMultivector",
    "check_jacobi",
    "alg_schouten",
    "act",
    "apply_delta",
    "check_cocycle",
    "delta_squared",
    "is_ad_invariant",
    "coad",
    "center",
    "coboundary",
    "sl2",
    "aff2",
    "abelian",
]


def _q(value) -> Fraction:
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    return Fraction(value)


class LieAlgebraData:
    """Structure constants ``c[a, b][d]`` for ``[e_a, e_b] = sum_d c_ab^d e_d``.

    Only pairs ``a < b`` need to be supplied; antisymmetry fills in the rest.
    Jacobi is *not* enforced here, see :func:`check_jacobi`.
    """

    def __init__(self, basis: Sequence[str], constants: Mapping | None = None):
        self.basis = tuple(basis)
        if len(set(self.basis)) != len(self.basis):
            raise ValueError("basis names must be distinct")
        k = len(self.basis)
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (a, b), row in (constants or {}).items():
            if not (0 <= a < k and 0 <= b < k):
                raise ValueError(f"bracket index ({a}, {b}) out of range")
            clean = {d: _q(v) for d, v in row.items() if _q(v)}
            if any(not 0 <= d < k for d in clean):
                raise ValueError(f"bracket target out of range in ({a}, {b})")
            if a == b:
                if clean:
                    raise ValueError(f"[e_{a}, e_{a}] must vanish")
                continue
            lo, hi, s = (a, b, 1) if a < b else (b, a, -1)
            signed = {d: s * v for d, v in clean.items()}
            prev = table.get((lo, hi))
            if prev is not None and prev != signed:
                raise ValueError(f"inconsistent constants for pair ({lo}, {hi})")
            if signed:
                table[(lo, hi)] = signed
        self._table = table
        self._full: dict[tuple[int, int], tuple] = {}
        for (a, b), row in table.items():
            self._full[(a, b)] = tuple(sorted(row.items()))
            self._full[(b, a)] = tuple((d, -v) for d, v in sorted(row.items()))
        self._memo: dict = {}

    @classmethod
    def from_triples(cls, basis: Sequence[str], triples: Iterable) -> "LieAlgebraData":
        """Build from ``(a, b, d, value)`` entries meaning ``c_ab^d = value``."""
        rows: dict[tuple[int, int], dict[int, Fraction]] = {}
        for a, b, d, v in triples:
            lo, hi, s = (a, b, 1) if a <= b else (b, a, -1)
            row = rows.setdefault((lo, hi), {})
            row[d] = row.get(d, 0) + s * _q(v)
        return cls(basis, rows)

    @property
    def k(self) -> int:
        return len(self.basis)

    def bracket(self, a: int, b: int) -> tuple:
        """``((d, c_ab^d), ...)`` for the nonzero constants."""
        return self._full.get((a, b), ())

    def triples(self) -> list:
        return [(a, b, d, v) for (a, b), row in sorted(self._table.items()) for d, v in sorted(row.items())]

    def is_abelian(self) -> bool:
        return not self._table

    def __eq__(self, other):
        return isinstance(other, LieAlgebraData) and self.basis == other.basis and self._table == other._table

    __hash__ = None

    def __repr__(self):
        return f"LieAlgebraData({list(self.basis)!r}, {len(self._table)} nonzero brackets)"


def sl2() -> LieAlgebraData:
    """sl(2) with ``[H,E+] = E+``, ``[H,E-] = -E-``, ``[E+,E-] = 2H``."""
    return LieAlgebraData.from_triples(["H", "Ep", "Em"], [(0, 1, 1, 1), (0, 2, 2, -1), (1, 2, 0, 2)])


def aff2() -> LieAlgebraData:
    """The 2-dimensional nonabelian algebra ``[e1, e2] = e2``."""
    return LieAlgebraData.from_triples(["e1", "e2"], [(0, 1, 1, 1)])


def abelian(k: int, prefix: str = "e") -> LieAlgebraData:
    return LieAlgebraData([f"{prefix}{i + 1}" for i in range(k)])


def check_jacobi(L: LieAlgebraData) -> bool:
    """Cyclic sum of ``[[e_a, e_b], e_c]`` vanishes on all basis triples."""
    k = L.k

    def br(x: dict, b: int) -> dict:
        out: dict[int, Fraction] = {}
        for a, xa in x.items():
            for d, c in L.bracket(a, b):
                out[d] = out.get(d, 0) + xa * c
        return out

    for a, b, c in combinations(range(k), 3):
        total: dict[int, Fraction] = {}
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            for d, v in br(dict(L.bracket(x, y)), z).items():
                total[d] = total.get(d, 0) + v
        if any(total.values()):
            return False
    return True


class AlgMultivector:
    """Element of ``C(R^n, Lambda^* g)``: sorted index tuples -> ScalarFn."""

    __slots__ = ("k", "dim", "coeffs")

    def __init__(self, k: int, dim: int, coeffs: Mapping | None = None):
        self.k = k
        self.dim = dim
        clean = {}
        for key, v in (coeffs or {}).items():
            key = tuple(key)
            if list(key) != sorted(set(key)) or any(not 0 <= i < k for i in key):
                raise ValueError(f"bad basis key {key}")
            v = as_scalar(v, dim)
            if not v.is_zero():
                clean[key] = v
        self.coeffs = clean

    @classmethod
    def _raw(cls, k, dim, coeffs):
        out = cls.__new__(cls)
        out.k, out.dim, out.coeffs = k, dim, coeffs
        return out

    @classmethod
    def basis(cls, k: int, dim: int, a: int) -> "AlgMultivector":
        return cls(k, dim, {(a,): 1})

    @classmethod
    def from_vector(cls, vec: Sequence, dim: int) -> "AlgMultivector":
        return cls(len(vec), dim, {(a,): v for a, v in enumerate(vec)})

    def degrees(self) -> set:
        return {len(key) for key in self.coeffs}

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return all(v.is_constant() for v in self.coeffs.values())

    def __add__(self, other: "AlgMultivector") -> "AlgMultivector":
        out = dict(self.coeffs)
        for key, v in other.coeffs.items():
            w = out.get(key)
            s = v if w is None else w + v
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return AlgMultivector._raw(self.k, self.dim, out)

    def __neg__(self):
        return AlgMultivector._raw(self.k, self.dim, {key: -v for key, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> "AlgMultivector":
        f = as_scalar(f, self.dim)
        if f.is_zero():
            return AlgMultivector._raw(self.k, self.dim, {})
        return AlgMultivector._raw(self.k, self.dim, {key: v * f for key, v in self.coeffs.items()})

    __mul__ = scale
    __rmul__ = scale

    def wedge(self, other: "AlgMultivector") -> "AlgMultivector":
        out: dict = {}
        for I, f in self.coeffs.items():
            for J, g in other.coeffs.items():
                s, K = merge(I, J)
                if s:
                    _acc(out, K, f * g if s > 0 else -(f * g))
        return AlgMultivector._raw(self.k, self.dim, out)

    def diff(self, i: int) -> "AlgMultivector":
        return AlgMultivector._raw(
            self.k, self.dim, {key: d for key, v in self.coeffs.items() if not (d := v.diff(i)).is_zero()}
        )

    def component(self, key) -> ScalarFn:
        return self.coeffs.get(tuple(key), ScalarFn.constant(0, self.dim))

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgMultivector):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def to_text(self, basis: Sequence[str] | None = None, coords: Sequence[str] | None = None) -> str:
        basis = basis or [f"e{i + 1}" for i in range(self.k)]
        return _terms_text(self.coeffs, lambda key: [basis[i] for i in key], coords)

    def __repr__(self):
        return f"AlgMultivector({self.to_text()!r})"


def _acc(out: dict, key, v: ScalarFn):
    w = out.get(key)
    s = v if w is None else w + v
    if s.is_zero():
        out.pop(key, None)
    else:
        out[key] = s


def _terms_text(coeffs: Mapping, labels, coords) -> str:
    """Print ``sum coeff * b1*b2*...`` in sorted key order."""
    if not coeffs:
        return "0"
    parts = []
    for key in sorted(coeffs, key=lambda t: (len(t), t)):
        f = coeffs[key]
        names = labels(key)
        body = "*".join(names)
        txt = f.to_text(coords)
        neg = False
        if f.den.is_one() and len(f.num.terms) == 1:
            c = next(iter(f.num.terms.values()))
            if c < 0:
                neg, txt = True, (-f).to_text(coords)
        if not body:
            term = txt
        elif txt == "1":
            term = body
        elif f.den.is_one() and len(f.num.terms) == 1:
            term = f"{txt}*{body}"
        else:
            term = f"({txt})*{body}"
        parts.append(("-" if neg else "+", term))
    sign, term = parts[0]
    out = ("-" if sign == "-" else "") + term
    for sign, term in parts[1:]:
        out += f" {sign} {term}"
    return out


def _basis_bracket(L: LieAlgebraData, I: tuple, J: tuple) -> dict:
    """``[e_I, e_J]`` with constant coefficients, memoized on ``L``."""
    hit = L._memo.get((I, J))
    if hit is not None:
        return hit
    out: dict[tuple, Fraction] = {}
    for r, a in enumerate(I):
        Ir = drop(I, r)
        for t, b in enumerate(J):
            row = L.bracket(a, b)
            if not row:
                continue
            s0, R = merge(Ir, drop(J, t))
            if not s0:
                continue
            if (r + t) & 1:
                s0 = -s0
            for d, c in row:
                s1, K = merge((d,), R)
                if s1:
                    out[K] = out.get(K, 0) + s0 * s1 * c
    out = {K: v for K, v in out.items() if v}
    L._memo[(I, J)] = out
    return out


def alg_schouten(L: LieAlgebraData, P: AlgMultivector, Q: AlgMultivector) -> AlgMultivector:
    """Algebraic Schouten bracket ``[P, Q]`` (pointwise, no differentiation)."""
    out: dict = {}
    for I, f in P.coeffs.items():
        for J, g in Q.coeffs.items():
            base = _basis_bracket(L, I, J)
            if not base:
                continue
            fg = f * g
            for K, c in base.items():
                _acc(out, K, fg * c)
    return AlgMultivector._raw(P.k, P.dim, out)


def act(L: LieAlgebraData, a: int, P: AlgMultivector) -> AlgMultivector:
    """Derivation action ``e_a . P = [e_a, P]``."""
    return alg_schouten(L, AlgMultivector.basis(P.k, P.dim, a), P)


class Cobracket:
    """Constant linear map ``delta: g -> Lambda^2 g``.

    ``d[a]`` maps ``(b, c)`` with ``b < c`` to the coefficient of
    ``e_b ^ e_c`` in ``delta(e_a)``.
    """

    def __init__(self, k: int, d: Mapping | None = None):
        self.k = k
        table: dict[int, dict[tuple[int, int], Fraction]] = {}
        for a, row in (d or {}).items():
            clean = {}
            for (b, c), v in row.items():
                v = _q(v)
                if not (0 <= a < k and 0 <= b < k and 0 <= c < k):
                    raise ValueError("cobracket index out of range")
                if b == c:
                    if v:
                        raise ValueError("e_b ^ e_b component must vanish")
                    continue
                lo, hi, s = (b, c, 1) if b < c else (c, b, -1)
                clean[(lo, hi)] = clean.get((lo, hi), 0) + s * v
            clean = {key: v for key, v in clean.items() if v}
            if clean:
                table[a] = clean
        self.d = table

    @classmethod
    def zero(cls, k: int) -> "Cobracket":
        return cls(k)

    @classmethod
    def from_triples(cls, k: int, triples: Iterable) -> "Cobracket":
        rows: dict[int, dict] = {}
        for a, b, c, v in triples:
            row = rows.setdefault(a, {})
            lo, hi, s = (b, c, 1) if b < c else (c, b, -1)
            row[(lo, hi)] = row.get((lo, hi), 0) + s * _q(v)
        return cls(k, rows)

    @classmethod
    def from_images(cls, images: Sequence[AlgMultivector]) -> "Cobracket":
        """From constant bivectors ``delta(e_a)``."""
        rows = {}
        for a, img in enumerate(images):
            if img.degrees() - {2}:
                raise ValueError("cobracket images must be bivectors")
            rows[a] = {key: v.constant_value() for key, v in img.coeffs.items()}
        return cls(len(images), rows)

    def triples(self) -> list:
        return [(a, b, c, v) for a, row in sorted(self.d.items()) for (b, c), v in sorted(row.items())]

    def image(self, a: int, dim: int = 0) -> AlgMultivector:
        return AlgMultivector(self.k, dim, {key: v for key, v in self.d.get(a, {}).items()})

    def is_zero(self) -> bool:
        return not self.d

    def __add__(self, other: "Cobracket") -> "Cobracket":
        return Cobracket.from_triples(self.k, self.triples() + other.triples())

    def __neg__(self):
        return Cobracket.from_triples(self.k, [(a, b, c, -v) for a, b, c, v in self.triples()])

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, Cobracket) and self.k == other.k and self.d == other.d

    __hash__ = None

    def __repr__(self):
        return f"Cobracket({self.triples()!r})"


def coboundary(L: LieAlgebraData, r: AlgMultivector) -> Cobracket:
    """``delta(A) = [A, r]`` for a constant bivector ``r``."""
    if not r.is_constant():
        raise ValueError("r must be constant")
    r0 = AlgMultivector(r.k, 0, {key: v.constant_value() for key, v in r.coeffs.items()})
    return Cobracket.from_images([alg_schouten(L, AlgMultivector.basis(L.k, 0, a), r0) for a in range(L.k)])


def apply_delta(delta: Cobracket, P: AlgMultivector) -> AlgMultivector:
    """Extend ``delta`` to ``Lambda g`` as a degree +1 derivation.

    ``delta(u1^...^up) = sum_r (-1)^(r-1) u1^...^delta(u_r)^...^up``;
    function coefficients are left alone.
    """
    out: dict = {}
    for I, f in P.coeffs.items():
        for r, a in enumerate(I):
            row = delta.d.get(a)
            if not row:
                continue
            rest = drop(I, r)
            for bc, v in row.items():
                s, K = merge(bc, rest)
                if s:
                    if r & 1:
                        s = -s
                    _acc(out, K, f * (s * v))
    return AlgMultivector._raw(P.k, P.dim, out)


def check_cocycle(L: LieAlgebraData, delta: Cobracket) -> bool:
    """``delta[A,B] = A.delta(B) - B.delta(A)`` on all basis pairs."""
    return not cocycle_defects(L, delta)


def cocycle_defects(L: LieAlgebraData, delta: Cobracket) -> dict:
    defects = {}
    k = L.k
    for a, b in combinations(range(k), 2):
        lhs = AlgMultivector(k, 0)
        for d, c in L.bracket(a, b):
            lhs = lhs + delta.image(d).scale(c)
        rhs = act(L, a, delta.image(b)) - act(L, b, delta.image(a))
        diff = lhs - rhs
        if not diff.is_zero():
            defects[(a, b)] = diff
    return defects


def delta_squared(L: LieAlgebraData, delta: Cobracket) -> dict:
    """``a -> delta^2(e_a)`` (trivectors)."""
    return {a: apply_delta(delta, delta.image(a)) for a in range(L.k)}


def is_ad_invariant(L: LieAlgebraData, omega: AlgMultivector) -> bool:
    """``e_a . omega = 0`` for every basis element; ``omega`` must be constant."""
    if not omega.is_constant():
        raise ValueError("ad-invariance is only defined here for constant multivectors")
    return all(act(L, a, omega).is_zero() for a in range(L.k))


def coad(L: LieAlgebraData, A: Sequence, xi: Sequence) -> list:
    """Coadjoint action: ``<ad*_A xi, B> = -<xi, [A, B]>``."""
    k = L.k
    out = [0] * k
    for a in range(k):
        if not _nonzero(A[a]):
            continue
        for b in range(k):
            for d, c in L.bracket(a, b):
                if _nonzero(xi[d]):
                    out[b] = out[b] - A[a] * xi[d] * c
    return out


def _nonzero(v) -> bool:
    return not v.is_zero() if isinstance(v, ScalarFn) else bool(v)


def center(L: LieAlgebraData) -> list:
    """Basis of the center over Q (nullspace of all ``ad`` maps)."""
    from sympy import Matrix, Rational

    k = L.k
    rows = []
    for b in range(k):
        for d in range(k):
            rows.append([Rational(dict(L.bracket(b, a)).get(d, 0)) for a in range(k)])
    if not rows:
        return []
    null = Matrix(rows).nullspace()
    return [[Fraction(int(v.p), int(v.q)) for v in vec] for vec in null]
