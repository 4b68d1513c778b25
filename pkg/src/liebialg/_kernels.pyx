# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term-map kernels; same contract as ``_kernels_py``."""

from fractions import Fraction

IMPLEMENTATION = "cython"


cdef inline object _norm(object c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def norm(c):
    return _norm(c)


cdef inline tuple _key_add(tuple ka, tuple kb):
    cdef Py_ssize_t i, L = len(ka)
    cdef list out = [None] * L
    for i in range(L):
        out[i] = ka[i] + kb[i]
    return tuple(out)


def add_terms(dict a, dict b):
    cdef dict out
    cdef object k, v, w, s
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for k, v in b.items():
        w = out.get(k)
        if w is None:
            out[k] = v
        else:
            s = _norm(w + v)
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def sub_terms(dict a, dict b):
    cdef dict out = dict(a)
    cdef object k, v, w, s
    for k, v in b.items():
        w = out.get(k)
        if w is None:
            out[k] = -v
        else:
            s = _norm(w - v)
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def scale_terms(dict a, object c):
    cdef object k, v
    c = _norm(c)
    if not c:
        return {}
    if c == 1:
        return dict(a)
    return {k: _norm(v * c) for k, v in a.items()}


def mul_terms(dict a, dict b):
    cdef dict out, res
    cdef tuple ka, kb, k
    cdef object va, vb, w, p, v
    if not a or not b:
        return {}
    if len(a) < len(b):
        a, b = b, a
    out = {}
    for kb, vb in b.items():
        for ka, va in a.items():
            k = _key_add(ka, kb)
            p = va * vb
            w = out.get(k)
            if w is None:
                out[k] = p
            else:
                out[k] = w + p
    res = {}
    for k, v in out.items():
        if v:
            res[k] = _norm(v)
    return res


def shift_terms(dict a, tuple key, object c):
    cdef tuple k
    cdef object v
    c = _norm(c)
    return {_key_add(k, key): _norm(v * c) for k, v in a.items()}


def diff_terms(dict a, Py_ssize_t i, Py_ssize_t n):
    cdef dict out = {}, res
    cdef Py_ssize_t j = n + i
    cdef tuple k, k2
    cdef object v, lam, m, w, p
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
    res = {}
    for k, v in out.items():
        if v:
            res[k] = _norm(v)
    return res
