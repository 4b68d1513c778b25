"""Pure-Python term-map kernels.

A term map is a ``dict`` from a flat exponent key to a nonzero rational
coefficient.  For ambient dimension ``n`` the key has length ``2n``: the
first ``n`` entries are the exponential weights (``int`` or ``Fraction``),
the last ``n`` the monomial powers (``int``).  Coefficients are ``int``
whenever they are integral so the common case stays on machine-speed ints.

``_kernels.pyx`` implements the same functions; keep both in lock step.
"""

from fractions import Fraction

IMPLEMENTATION = "python"


def norm(c):
    """Demote an integral ``Fraction`` to ``int``."""
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def add_terms(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for k, v in b.items():
        w = out.get(k)
        if w is None:
            out[k] = v
        else:
            s = norm(w + v)
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def sub_terms(a, b):
    out = dict(a)
    for k, v in b.items():
        w = out.get(k)
        if w is None:
            out[k] = -v
        else:
            s = norm(w - v)
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def scale_terms(a, c):
    c = norm(c)
    if not c:
        return {}
    if c == 1:
        return dict(a)
    return {k: norm(v * c) for k, v in a.items()}


def mul_terms(a, b):
    if not a or not b:
        return {}
    if len(a) < len(b):
        a, b = b, a
    out = {}
    get = out.get
    for kb, vb in b.items():
        for ka, va in a.items():
            k = tuple([x + y for x, y in zip(ka, kb)])
            w = get(k)
            p = va * vb
            if w is None:
                out[k] = p
            else:
                out[k] = w + p
    return {k: norm(v) for k, v in out.items() if v}


def shift_terms(a, key, c):
    """Multiply every term by the single term ``c * key``."""
    c = norm(c)
    return {tuple([x + y for x, y in zip(k, key)]): norm(v * c) for k, v in a.items()}


def diff_terms(a, i, n):
    """Partial derivative along coordinate ``i`` (of ``n``)."""
    out = {}
    j = n + i
    for k, v in a.items():
        lam = k[i]
        if lam:
            w = out.get(k)
            p = v * lam
            out[k] = p if w is None else w + p
        m = k[j]
        if m:
            k2 = k[:j] + (m - 1,) + k[j + 1:]
            w = out.get(k2)
            p = v * m
            out[k2] = p if w is None else w + p
    return {k: norm(v) for k, v in out.items() if v}
