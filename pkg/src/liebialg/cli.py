"""Command line front end and the JSON instance format.

Instance document (``schema: 1``)::

    {
      "schema": 1,
      "name": "sl2_plane",
      "manifold": {"dim": 2, "coords": ["x", "y"]},
      "algebra": {"dim": 3, "basis": ["H", "Ep", "Em"],
                  "brackets": [[0, 1, 1, "1"], ...]},      # (a, b, d, c_ab^d), a < b
      "cobracket": [[a, b, c, "rational"], ...],             # delta(e_a) coefficient of e_b^e_c, b < c
      "pi": [[i, j, "expr"], ...],                           # i < j
      "theta": [[i, a, "expr"], ...],
      "tau": [[a, b, "expr"], ...],                          # a < b
      "mode": "coboundary"
    }

Indices are 0-based integers or basis / coordinate names.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

from .bialgebroid import (
    Quadruple,
    Report,
    check_hamiltonian_tau,
    check_master,
    d_star,
    gauge_transform,
    verify_coboundary,
    verify_transitive,
)
from .dual_structures import check_matched_pair
from .lie_algebra import AlgMultivector, Cobracket, LieAlgebraData, check_jacobi
from .multivector import Context, Multivector, parse_section
from .schouten import Theta
from .scalar_field import DivisionByZeroError, ExpressionError, ScalarFn, parse

__all__ = [
    "InstanceError",
    "SCHEMA",
    "MODES",
    "load_instance",
    "parse_instance",
    "instance_to_json",
    "instance_digest",
    "builtin_names",
    "resolve_instance",
    "run_mode",
    "render_text",
    "render_json",
    "main",
]

SCHEMA = 1
MODES = ("transitive", "coboundary", "matched-pair", "hamiltonian-tau")
EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InstanceError(ValueError):
    """Malformed instance or command input (exit status 2)."""


# --- instance parsing -------------------------------------------------------


def _index(value, names: Sequence[str], where: str) -> int:
    if isinstance(value, bool):
        raise InstanceError(f"{where}: expected an index, got {value!r}")
    if isinstance(value, int):
        if not 0 <= value < len(names):
            raise InstanceError(f"{where}: index {value} out of range 0..{len(names) - 1}")
        return value
    if isinstance(value, str) and value in names:
        return names.index(value)
    raise InstanceError(f"{where}: unknown index {value!r} (expected 0..{len(names) - 1} or one of {list(names)})")


def _rational(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise InstanceError(f"{where}: expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise InstanceError(f"{where}: expected a rational such as 3 or \"-1/2\", got {value!r}")


def _expr(value, n: int, coords, where: str) -> ScalarFn:
    if isinstance(value, bool):
        raise InstanceError(f"{where}: expected an expression, got {value!r}")
    if isinstance(value, int):
        return ScalarFn.constant(value, n)
    if not isinstance(value, str):
        raise InstanceError(f"{where}: expected an expression string, got {value!r}")
    try:
        return parse(value, n, coords)
    except ExpressionError as exc:
        raise InstanceError(f"{where}: {exc} in {value!r}") from exc
    except DivisionByZeroError as exc:
        raise InstanceError(f"{where}: {exc} in {value!r}") from exc


def _entries(doc: dict, key: str, width: int) -> list:
    raw = doc.get(key, [])
    if not isinstance(raw, list):
        raise InstanceError(f"{key}: expected a list")
    for pos, entry in enumerate(raw):
        if not isinstance(entry, list) or len(entry) != width:
            raise InstanceError(f"{key}[{pos}]: expected a list of {width} items")
    return raw


def parse_instance(doc: Any) -> tuple[Quadruple, dict]:
    """Validate a decoded instance document; returns the quadruple and metadata."""
    if not isinstance(doc, dict):
        raise InstanceError("instance must be a JSON object")
    if doc.get("schema") != SCHEMA:
        raise InstanceError(f"schema: expected {SCHEMA}, got {doc.get('schema')!r}")
    man = doc.get("manifold", {"dim": 0, "coords": []})
    if not isinstance(man, dict):
        raise InstanceError("manifold: expected an object")
    n = man.get("dim")
    coords = man.get("coords", [])
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InstanceError(f"manifold.dim: expected a natural number, got {n!r}")
    if not isinstance(coords, list) or len(coords) != n or not all(isinstance(c, str) for c in coords):
        raise InstanceError(f"manifold.coords: expected {n} names")
    alg = doc.get("algebra")
    if not isinstance(alg, dict):
        raise InstanceError("algebra: expected an object")
    basis = alg.get("basis")
    k = alg.get("dim", len(basis) if isinstance(basis, list) else None)
    if not isinstance(basis, list) or not all(isinstance(b, str) for b in basis) or len(basis) != k:
        raise InstanceError("algebra.basis: expected a list of names matching algebra.dim")
    for name in list(coords) + list(basis):
        if not name.isidentifier() or name == "exp" or name.startswith("d_"):
            raise InstanceError(f"name {name!r} is not usable (identifier, not 'exp', no 'd_' prefix)")
    brackets = alg.get("brackets", [])
    if not isinstance(brackets, list):
        raise InstanceError("algebra.brackets: expected a list")
    triples = []
    for pos, entry in enumerate(brackets):
        where = f"algebra.brackets[{pos}]"
        if not isinstance(entry, list) or len(entry) != 4:
            raise InstanceError(f"{where}: expected [a, b, d, rational]")
        a, b, d = (_index(entry[i], basis, where) for i in range(3))
        if a >= b:
            raise InstanceError(f"{where}: antisymmetric entries need a < b")
        triples.append((a, b, d, _rational(entry[3], where)))
    try:
        L = LieAlgebraData.from_triples(basis, triples)
        ctx = Context(n, coords, L)
    except ValueError as exc:
        raise InstanceError(f"algebra: {exc}") from exc
    if not check_jacobi(L):
        raise InstanceError("algebra.brackets: the structure constants violate the Jacobi identity")

    cob = []
    for pos, entry in enumerate(_entries(doc, "cobracket", 4)):
        where = f"cobracket[{pos}]"
        a, b, c = (_index(entry[i], basis, where) for i in range(3))
        if b >= c:
            raise InstanceError(f"{where}: antisymmetric entries need b < c")
        cob.append((a, b, c, _rational(entry[3], where)))
    delta = Cobracket.from_triples(k, cob)

    pi = {}
    for pos, entry in enumerate(_entries(doc, "pi", 3)):
        where = f"pi[{pos}]"
        i, j = _index(entry[0], coords, where), _index(entry[1], coords, where)
        if i >= j:
            raise InstanceError(f"{where}: antisymmetric entries need i < j")
        if (i, j) in pi:
            raise InstanceError(f"{where}: duplicate entry")
        pi[(i, j)] = _expr(entry[2], n, coords, where + "[2]")
    theta = [[ScalarFn.constant(0, n) for _ in range(k)] for _ in range(n)]
    seen = set()
    for pos, entry in enumerate(_entries(doc, "theta", 3)):
        where = f"theta[{pos}]"
        i, a = _index(entry[0], coords, where), _index(entry[1], basis, where)
        if (i, a) in seen:
            raise InstanceError(f"{where}: duplicate entry")
        seen.add((i, a))
        theta[i][a] = _expr(entry[2], n, coords, where + "[2]")
    tau = {}
    for pos, entry in enumerate(_entries(doc, "tau", 3)):
        where = f"tau[{pos}]"
        a, b = _index(entry[0], basis, where), _index(entry[1], basis, where)
        if a >= b:
            raise InstanceError(f"{where}: antisymmetric entries need a < b")
        if (a, b) in tau:
            raise InstanceError(f"{where}: duplicate entry")
        tau[(a, b)] = _expr(entry[2], n, coords, where + "[2]")
    mode = doc.get("mode", "transitive")
    if mode not in MODES:
        raise InstanceError(f"mode: expected one of {list(MODES)}, got {mode!r}")
    q = Quadruple(
        ctx,
        Multivector(ctx, {(i, j): v for (i, j), v in pi.items()}),
        Theta(ctx, theta),
        AlgMultivector(k, n, tau),
        delta,
    )
    meta = {"name": str(doc.get("name", "")), "mode": mode}
    if "description" in doc:
        meta["description"] = str(doc["description"])
    return q, meta


def instance_to_json(q: Quadruple, name: str = "", mode: str = "transitive", description: str | None = None) -> dict:
    """Canonical instance document for ``q``."""
    ctx = q.ctx
    coords = list(ctx.coords)
    doc: dict = {"schema": SCHEMA, "name": name}
    if description:
        doc["description"] = description
    doc["manifold"] = {"dim": ctx.n, "coords": coords}
    doc["algebra"] = {
        "dim": ctx.k,
        "basis": list(ctx.L.basis),
        "brackets": [[a, b, d, _rat_text(v)] for a, b, d, v in ctx.L.triples()],
    }
    doc["cobracket"] = [[a, b, c, _rat_text(v)] for a, b, c, v in q.delta.triples()]
    doc["pi"] = [[key[0], key[1], v.to_text(coords)] for key, v in sorted(q.pi.terms.items())]
    doc["theta"] = [
        [i, a, v.to_text(coords)] for i, row in enumerate(q.theta.m) for a, v in enumerate(row) if not v.is_zero()
    ]
    doc["tau"] = [[key[0], key[1], v.to_text(coords)] for key, v in sorted(q.tau.coeffs.items())]
    doc["mode"] = mode
    return doc


def _rat_text(v: Fraction) -> str:
    return str(Fraction(v))


def _canonical(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def instance_digest(q: Quadruple) -> str:
    """SHA-256 of the canonical instance content (name and mode excluded)."""
    doc = instance_to_json(q)
    doc.pop("name")
    doc.pop("mode")
    return "sha256:" + hashlib.sha256(_canonical(doc).encode()).hexdigest()


def builtin_names() -> list[str]:
    pkg = resources.files("liebialg") / "instances"
    return sorted(p.name[:-5] for p in pkg.iterdir() if p.name.endswith(".json"))


def resolve_instance(source: str) -> tuple[str, str]:
    """Return ``(label, text)`` for a file path or a built-in instance name.

    A path that does not exist falls back to the built-in library by stem,
    so ``examples/sl2_plane.json`` and ``sl2_plane`` both work.
    """
    path = Path(source)
    if path.is_file():
        return str(path), path.read_text(encoding="utf-8")
    stem = path.name[:-5] if path.name.endswith(".json") else path.name
    if stem in builtin_names():
        res = resources.files("liebialg") / "instances" / f"{stem}.json"
        return f"builtin:{stem}", res.read_text(encoding="utf-8")
    raise InstanceError(f"{source}: no such file or built-in instance (built-ins: {', '.join(builtin_names())})")


def load_instance(source: str) -> tuple[Quadruple, dict]:
    label, text = resolve_instance(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{label}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    q, meta = parse_instance(doc)
    meta["source"] = label
    return q, meta


# --- verification -------------------------------------------------------------


def run_mode(q: Quadruple, mode: str) -> Report:
    if mode == "transitive":
        return verify_transitive(q)
    if mode == "coboundary":
        if not q.delta.is_zero():
            raise InstanceError("coboundary mode needs an instance with an empty cobracket")
        return verify_coboundary(q)
    if mode == "matched-pair":
        if not q.tau.is_zero():
            raise InstanceError("matched-pair mode needs an instance with tau = 0")
        return check_matched_pair(q)
    if mode == "hamiltonian-tau":
        return check_hamiltonian_tau(q)
    raise InstanceError(f"unknown mode {mode!r}")


def build_document(q: Quadruple, meta: dict, mode: str, report: Report, oracle: Report | None) -> dict:
    overall = report.passed and (oracle is None or oracle.passed)
    doc = {
        "schema": SCHEMA,
        "instance": meta.get("name", ""),
        "digest": instance_digest(q),
        "mode": mode,
        "pass": overall,
        "verifier": {"pass": report.passed, "conditions": [c.to_json() for c in report.conditions]},
        "diagnostics": [d.to_json() for d in report.diagnostics],
        "notes": list(report.notes),
        "oracle": None,
        "exit": EXIT_PASS if overall else EXIT_FAIL,
    }
    if oracle is not None:
        doc["oracle"] = {
            "pass": oracle.passed,
            "agrees_with_verifier": oracle.passed == report.passed,
            "generators": [c.to_json() for c in oracle.conditions],
        }
    return doc


def render_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def render_text(doc: dict) -> str:
    lines = [f"instance: {doc['instance'] or '(unnamed)'} ({doc['digest']})", f"mode: {doc['mode']}"]
    for c in doc["verifier"]["conditions"]:
        mark = "PASS" if c["pass"] else "FAIL"
        lines.append(f"[{mark}] {c['id']}: {c['tag']}")
        if not c["pass"]:
            lines.append(f"       residual: {c['residual']}")
    if doc["diagnostics"]:
        lines.append("diagnostics:")
        for d in doc["diagnostics"]:
            note = f"  ({d['note']})" if d["note"] else ""
            lines.append(f"  {d['id']} = {d['value']}{note}")
    if doc["oracle"] is not None:
        o = doc["oracle"]
        agree = "agrees" if o["agrees_with_verifier"] else "DISAGREES"
        lines.append(f"oracle d_*^2: {'PASS' if o['pass'] else 'FAIL'} ({agree} with verifier)")
        for g in o["generators"]:
            if not g["pass"]:
                lines.append(f"  [FAIL] {g['id']}: {g['residual']}")
    lines.append(f"verdict: {'PASS' if doc['pass'] else 'FAIL'}")
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# --- subcommands ----------------------------------------------------------------


def cmd_verify(args) -> int:
    q, meta = load_instance(args.file)
    mode = args.mode or meta["mode"]
    report = run_mode(q, mode)
    oracle = check_master(q) if args.oracle else None
    doc = build_document(q, meta, mode, report, oracle)
    _emit(render_json(doc) if args.format == "json" else render_text(doc), args.out)
    return doc["exit"]


def parse_r0(text: str, ctx: Context) -> AlgMultivector:
    """``"a,b,rational;..."`` into a constant bivector."""
    coeffs: dict = {}
    basis = list(ctx.L.basis)
    for pos, chunk in enumerate(p for p in text.split(";") if p.strip()):
        parts = [s.strip() for s in chunk.split(",")]
        if len(parts) != 3:
            raise InstanceError(f"--r0 entry {pos}: expected a,b,rational, got {chunk!r}")
        idx = []
        for s in parts[:2]:
            idx.append(_index(int(s) if s.lstrip("-").isdigit() else s, basis, f"--r0 entry {pos}"))
        a, b = idx
        try:
            v = Fraction(parts[2])
        except (ValueError, ZeroDivisionError):
            fn = _expr(parts[2], ctx.n, ctx.coords, f"--r0 entry {pos}")
            if not fn.is_constant():
                raise InstanceError(f"--r0 entry {pos}: r0 must be constant, got {parts[2]!r}")
            v = fn.constant_value()
        if a == b:
            if v:
                raise InstanceError(f"--r0 entry {pos}: diagonal entry must vanish")
            continue
        if a > b:
            a, b, v = b, a, -v
        coeffs[(a, b)] = coeffs.get((a, b), 0) + v
    return AlgMultivector(ctx.k, ctx.n, coeffs)


def cmd_gauge(args) -> int:
    q, meta = load_instance(args.file)
    r0 = parse_r0(args.r0, q.ctx)
    q2 = gauge_transform(q, r0)
    doc = instance_to_json(q2, meta.get("name", ""), meta["mode"], meta.get("description"))
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return EXIT_PASS


def cmd_dstar(args) -> int:
    q, _ = load_instance(args.file)
    try:
        S = parse_section(args.section, q.ctx)
    except ExpressionError as exc:
        raise InstanceError(f"--section: {exc} in {args.section!r}") from exc
    except DivisionByZeroError as exc:
        raise InstanceError(f"--section: {exc}") from exc
    result = d_star(q, S)
    if args.format == "json":
        text = json.dumps({"schema": SCHEMA, "section": S.to_text(), "d_star": result.to_text(), "terms": result.to_json()}, indent=2) + "\n"
    else:
        text = result.to_text() + "\n"
    _emit(text, args.out)
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="liebialg", description="Verify transitive Lie bialgebroid data exactly.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verifier on an instance")
    v.add_argument("file", help="instance JSON path or built-in name")
    v.add_argument("--mode", choices=MODES)
    v.add_argument("--oracle", action="store_true", help="also run the independent d_*^2 oracle")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gauge", help="apply tau -> tau + r0, delta -> delta - [r0, .]")
    g.add_argument("file")
    g.add_argument("--r0", required=True, help='entries "a,b,rational;..."')
    g.add_argument("--out")
    g.set_defaults(func=cmd_gauge)

    d = sub.add_parser("dstar", help="print d_* of a section")
    d.add_argument("file")
    d.add_argument("--section", required=True)
    d.add_argument("--format", choices=("text", "json"), default="text")
    d.add_argument("--out")
    d.set_defaults(func=cmd_dstar)

    ls = sub.add_parser("list", help="list the built-in instances")
    ls.set_defaults(func=lambda args: (sys.stdout.write("\n".join(builtin_names()) + "\n"), EXIT_PASS)[1])
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors already
        return int(exc.code) if exc.code is not None else EXIT_INPUT
    try:
        return args.func(args)
    except InstanceError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
