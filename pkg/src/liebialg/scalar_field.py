"""Exact coefficient field: fractions of exponential-polynomials on R^n.

An :class:`ExpPoly` is a finite sum ``c * x^m * exp(<lam, x>)`` with rational
``c`` and ``lam``; a :class:`ScalarFn` is a quotient of two of them.  The
field is closed under differentiation, and equality is decided exactly by
cross-multiplication.

Text form (whitespace insignificant)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' natural)?
    base   := integer | identifier | 'exp' '(' linear ')' | '(' expr ')' | '-' factor

>>> f = parse("exp(x - y) * x^2 + 3/2", 2, ["x", "y"])
>>> print(f.to_text(["x", "y"]))
x^2*exp(x - y) + 3/2
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

__all__ = [
    "ExpPoly",
    "ScalarFn",
    "ExpressionError",
    "ParseError",
    "NonlinearExponentError",
    "UnknownIdentifierError",
    "DivisionByZeroError",
    "parse",
    "parse_ast",
    "as_scalar",
    "set_backend",
    "backend_name",
]

Number = Union[int, Fraction]


def set_backend(name: str | None = None) -> str:
    """Select the term-map kernel (``"cython"`` or ``"python"``).

    ``None`` picks the compiled kernel when it is importable, unless the
    ``LIEBIALG_PURE_PYTHON`` environment variable is set.
    """
    global _k, _add, _sub, _scale, _mul, _shift, _diff, _norm
    if name is None:
        pure = os.environ.get("LIEBIALG_PURE_PYTHON", "") not in ("", "0")
        name = "python" if pure or _compiled is None else "cython"
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernel liebialg._kernels is not built")
        mod = _compiled
    elif name == "python":
        mod = _kernels_py
    else:
        raise ValueError(f"unknown backend {name!r}")
    _k = mod
    _add, _sub, _scale, _mul = mod.add_terms, mod.sub_terms, mod.scale_terms, mod.mul_terms
    _shift, _diff, _norm = mod.shift_terms, mod.diff_terms, mod.norm
    return name


def backend_name() -> str:
    return _k.IMPLEMENTATION


set_backend()


def _rat(c) -> Number:
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return _norm(c)
    raise TypeError(f"expected int or Fraction, got {type(c).__name__}")


class ExpPoly:
    """Sparse sum of terms ``c * x^m * exp(<lam, x>)``.

    ``terms`` maps a flat key ``lam + m`` (length ``2*dim``) to a nonzero
    rational.  Keys compare lexicographically, weights first; the largest
    key is the leading term.
    """

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: dict | None = None):
        self.dim = dim
        self.terms = terms if terms is not None else {}

    @classmethod
    def constant(cls, c: Number, dim: int) -> "ExpPoly":
        c = _rat(c)
        return cls(dim, {(0,) * (2 * dim): c} if c else {})

    @classmethod
    def term(cls, c: Number, lam: Sequence[Number], m: Sequence[int]) -> "ExpPoly":
        dim = len(lam)
        if len(m) != dim or any(p < 0 for p in m):
            raise ValueError("monomial powers must be nonnegative with length dim")
        c = _rat(c)
        key = tuple(_rat(Fraction(v)) for v in lam) + tuple(int(p) for p in m)
        return cls(dim, {key: c} if c else {})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, ExpPoly) and self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        return ExpPoly(self.dim, _add(self.terms, other.terms))

    def __sub__(self, other: "ExpPoly") -> "ExpPoly":
        return ExpPoly(self.dim, _sub(self.terms, other.terms))

    def __neg__(self) -> "ExpPoly":
        return ExpPoly(self.dim, {k: -v for k, v in self.terms.items()})

    def __mul__(self, other: "ExpPoly") -> "ExpPoly":
        return ExpPoly(self.dim, _mul(self.terms, other.terms))

    def scale(self, c: Number) -> "ExpPoly":
        return ExpPoly(self.dim, _scale(self.terms, c))

    def diff(self, i: int) -> "ExpPoly":
        return ExpPoly(self.dim, _diff(self.terms, i, self.dim))

    def leading(self):
        """(key, coefficient) of the largest term."""
        k = max(self.terms)
        return k, self.terms[k]

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get((0,) * (2 * self.dim)) == 1

    def is_constant(self) -> bool:
        zero = (0,) * (2 * self.dim)
        return not self.terms or (len(self.terms) == 1 and zero in self.terms)

    def to_text(self, names: Sequence[str] | None = None) -> str:
        names = _names(names, self.dim)
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms, reverse=True):
            c = self.terms[key]
            factors = _monomial_factors(key, names, self.dim)
            body = "*".join(factors)
            neg = c < 0
            a = -c if neg else c
            if not body:
                txt = str(a)
            elif a == 1:
                txt = body
            else:
                txt = f"{a}*{body}"
            parts.append(("-" if neg else "+", txt))
        sign, txt = parts[0]
        out = ("-" if sign == "-" else "") + txt
        for sign, txt in parts[1:]:
            out += f" {sign} {txt}"
        return out

    def __repr__(self):
        return f"ExpPoly({self.to_text()!r})"


def _names(names, dim):
    if names is None:
        return [f"x{i}" for i in range(dim)]
    if len(names) != dim:
        raise ValueError(f"need {dim} coordinate names, got {len(names)}")
    return list(names)


def _linear_text(lam, names) -> str:
    parts = []
    for c, name in zip(lam, names):
        if not c:
            continue
        neg = c < 0
        a = -c if neg else c
        txt = name if a == 1 else f"{a}*{name}"
        parts.append(("-" if neg else "+", txt))
    sign, txt = parts[0]
    out = ("-" if sign == "-" else "") + txt
    for sign, txt in parts[1:]:
        out += f" {sign} {txt}"
    return out


def _monomial_factors(key, names, dim):
    lam, m = key[:dim], key[dim:]
    factors = []
    for p, name in zip(m, names):
        if p == 1:
            factors.append(name)
        elif p > 1:
            factors.append(f"{name}^{p}")
    if any(lam):
        factors.append(f"exp({_linear_text(lam, names)})")
    return factors


class DivisionByZeroError(ZeroDivisionError):
    """Division by a ScalarFn that is identically zero."""


class ScalarFn:
    """Quotient ``num / den`` of exponential-polynomials.

    Fractions are not gcd-reduced.  The stored denominator always has
    leading coefficient 1; single-term denominators are reduced to a pure
    monomial ``x^m`` and common monomial factors are cancelled, which keeps
    the rational-function cases small.  Equality is cross-multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: ExpPoly, den: ExpPoly | None = None):
        if den is None:
            den = ExpPoly.constant(1, num.dim)
        if num.dim != den.dim:
            raise ValueError("numerator and denominator dimensions differ")
        if not den.terms:
            raise DivisionByZeroError("denominator is zero")
        self.num, self.den = _normalize(num, den)

    # construction -------------------------------------------------------
    @classmethod
    def constant(cls, c: Number, dim: int) -> "ScalarFn":
        return cls(ExpPoly.constant(c, dim))

    @classmethod
    def coordinate(cls, i: int, dim: int) -> "ScalarFn":
        m = [0] * dim
        m[i] = 1
        return cls(ExpPoly.term(1, [0] * dim, m))

    @classmethod
    def exp_linear(cls, lam: Sequence[Number], c: Number = 1) -> "ScalarFn":
        return cls(ExpPoly.term(c, lam, [0] * len(lam)))

    @property
    def dim(self) -> int:
        return self.num.dim

    # predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num.terms

    def __bool__(self) -> bool:
        return bool(self.num.terms)

    def is_constant(self) -> bool:
        """True iff every partial derivative vanishes."""
        if self.den.is_one() and self.num.is_constant():
            return True
        return all(self.diff(i).is_zero() for i in range(self.dim))

    def constant_value(self) -> Fraction:
        """The rational value of a constant function."""
        if not self.is_constant():
            raise ValueError("not a constant function")
        if not self.num.terms:
            return Fraction(0)
        # num == c * den, so the leading terms share a key
        return Fraction(self.num.leading()[1]) / Fraction(self.den.leading()[1])

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "ScalarFn":
        if isinstance(other, ScalarFn):
            if other.dim != self.dim:
                raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return ScalarFn.constant(other, self.dim)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        if self.den == other.den:
            return ScalarFn(self.num + other.num, self.den)
        return ScalarFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return _raw(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                return ScalarFn.constant(0, self.dim)
            return _raw(self.num.scale(other), self.den)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.num.terms or not other.num.terms:
            return ScalarFn.constant(0, self.dim)
        if self.den.is_one() and other.den.is_one():
            return _raw(self.num * other.num, self.den)
        return ScalarFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.num.terms:
            raise DivisionByZeroError("division by zero")
        return ScalarFn(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, p: int):
        if not isinstance(p, int) or p < 0:
            raise ValueError("only natural powers are supported")
        out = ScalarFn.constant(1, self.dim)
        base = self
        while p:
            if p & 1:
                out = out * base
            base = base * base
            p >>= 1
        return out

    def diff(self, i: int) -> "ScalarFn":
        """Exact partial derivative along coordinate ``i``."""
        if not 0 <= i < self.dim:
            raise IndexError(f"coordinate index {i} out of range")
        dn = self.num.diff(i)
        if self.den.is_constant():
            return ScalarFn(dn, self.den)
        dd = self.den.diff(i)
        if not dd.terms:
            return ScalarFn(dn, self.den)
        return ScalarFn(dn * self.den - self.num * dd, self.den * self.den)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        if self.den == other.den:
            return self.num == other.num
        return not (self.num * other.den - other.num * self.den).terms

    __hash__ = None  # equality is not structural

    # text ---------------------------------------------------------------
    def to_text(self, names: Sequence[str] | None = None) -> str:
        if self.den.is_one():
            return self.num.to_text(names)
        num, den = self.num.to_text(names), self.den.to_text(names)
        if len(self.num.terms) > 1:
            num = f"({num})"
        if len(self.den.terms) > 1 or "*" in den or "/" in den:
            den = f"({den})"
        return f"{num}/{den}"

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"ScalarFn({self.to_text()!r})"


def _raw(num: ExpPoly, den: ExpPoly) -> ScalarFn:
    # num/den already normalized relative to each other
    out = ScalarFn.__new__(ScalarFn)
    if not num.terms:
        den = ExpPoly.constant(1, num.dim)
    out.num, out.den = num, den
    return out


def _normalize(num: ExpPoly, den: ExpPoly):
    dim = num.dim
    if not num.terms:
        return num, ExpPoly.constant(1, dim)
    if len(den.terms) == 1:
        (key, c), = den.terms.items()
        lam, m = key[:dim], key[dim:]
        if any(lam) or c != 1:
            inv = tuple(-v for v in lam) + (0,) * dim
            num = ExpPoly(dim, _shift(num.terms, inv, Fraction(1) / c))
            den = ExpPoly(dim, {(0,) * dim + tuple(m): 1})
        if not any(m):
            return num, den
    else:
        key, c = den.leading()
        if c != 1:
            inv = Fraction(1) / c
            num, den = num.scale(inv), den.scale(inv)
        if num.terms == den.terms:
            return ExpPoly.constant(1, dim), ExpPoly.constant(1, dim)
    # cancel the common monomial factor x^g
    g = None
    for poly in (den, num):
        for key in poly.terms:
            p = key[dim:]
            g = list(p) if g is None else [min(a, b) for a, b in zip(g, p)]
            if not any(g):
                return num, den
    shift = (0,) * dim + tuple(-a for a in g)
    return ExpPoly(dim, _shift(num.terms, shift, 1)), ExpPoly(dim, _shift(den.terms, shift, 1))


def as_scalar(value, dim: int) -> ScalarFn:
    """Coerce an int / Fraction / ScalarFn to a ScalarFn of dimension ``dim``."""
    if isinstance(value, ScalarFn):
        if value.dim != dim:
            raise ValueError(f"dimension mismatch: {value.dim} vs {dim}")
        return value
    return ScalarFn.constant(_rat(value), dim)


# ---------------------------------------------------------------------------
# parsing


class ExpressionError(ValueError):
    """Malformed expression; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        self.pos = pos
        self.text = text
        self.detail = message
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{message}{where}")


class ParseError(ExpressionError):
    pass


class NonlinearExponentError(ExpressionError):
    pass


class UnknownIdentifierError(ExpressionError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


@dataclass(frozen=True)
class Node:
    kind: str  # num | name | exp | add | sub | mul | div | neg | pow
    pos: int
    value: object = None
    args: tuple = ()


def _tokenize(text: str):
    toks = []
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:  # trailing whitespace
            break
        if m.group(1) is not None:
            toks.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", m.start(3), text)
            toks.append((ch, ch, m.start(3)))
        i = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {want}, found {got}", tok[2], self.text)
        self.i += 1
        return tok

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op, _, pos = self.take()
            node = Node("add" if op == "+" else "sub", pos, args=(node, self.term()))
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.take()
            node = Node("mul" if op == "*" else "div", pos, args=(node, self.factor()))
        return node

    def factor(self) -> Node:
        node = self.base()
        if self.peek()[0] == "^":
            _, _, pos = self.take()
            tok = self.peek()
            if tok[0] != "int":
                raise ParseError("exponent must be a natural number", tok[2], self.text)
            self.take()
            node = Node("pow", pos, tok[1], (node,))
        return node

    def base(self) -> Node:
        kind, val, pos = self.peek()
        if kind == "int":
            self.take()
            return Node("num", pos, val)
        if kind == "name":
            self.take()
            if val == "exp":
                self.take("(")
                arg = self.expr()
                self.take(")")
                return Node("exp", pos, args=(arg,))
            return Node("name", pos, val)
        if kind == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        if kind == "-":
            self.take()
            return Node("neg", pos, args=(self.factor(),))
        got = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {got}", pos, self.text)


def parse_ast(text: str) -> Node:
    """Parse ``text`` into an expression tree (no evaluation)."""
    p = _Parser(text)
    node = p.expr()
    p.take("end")
    return node


def evaluate(node: Node, dim: int, coords: Sequence[str], text: str | None = None) -> ScalarFn:
    index = {name: i for i, name in enumerate(coords)}

    def ev(nd: Node) -> ScalarFn:
        k = nd.kind
        if k == "num":
            return ScalarFn.constant(nd.value, dim)
        if k == "name":
            if nd.value not in index:
                raise UnknownIdentifierError(f"unknown identifier {nd.value!r}", nd.pos, text)
            return ScalarFn.coordinate(index[nd.value], dim)
        if k == "exp":
            return _exp_of(ev(nd.args[0]), nd.pos, text)
        if k == "neg":
            return -ev(nd.args[0])
        if k == "pow":
            return ev(nd.args[0]) ** nd.value
        a, b = ev(nd.args[0]), ev(nd.args[1])
        if k == "add":
            return a + b
        if k == "sub":
            return a - b
        if k == "mul":
            return a * b
        if b.is_zero():
            raise DivisionByZeroError(f"division by zero at position {nd.pos}")
        return a / b

    return ev(node)


def _exp_of(arg: ScalarFn, pos: int, text) -> ScalarFn:
    dim = arg.dim
    if not arg.den.is_one():
        raise NonlinearExponentError("exp() argument must be linear in the coordinates", pos, text)
    lam = [0] * dim
    for key, c in arg.num.terms.items():
        if any(key[:dim]):
            raise NonlinearExponentError("exp() argument must not contain exp()", pos, text)
        m = key[dim:]
        deg = sum(m)
        if deg > 1:
            raise NonlinearExponentError("exp() argument must be linear in the coordinates", pos, text)
        if deg == 0:
            raise NonlinearExponentError(
                "exp() argument must have no constant term (exp of a nonzero constant is not rational)",
                pos,
                text,
            )
        lam[m.index(1)] = c
    return ScalarFn.exp_linear(lam)


def parse(text: str, dim: int, coords: Sequence[str] | None = None) -> ScalarFn:
    """Parse an expression over coordinates ``coords`` into a ScalarFn."""
    coords = _names(coords, dim)
    return evaluate(parse_ast(text), dim, coords, text)
