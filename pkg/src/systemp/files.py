"""Text formats: kappa files, roles files, proof files, and JSON report records.

kappa file: one formula per line, ``#`` starts a comment.  Role references
``@p @q @r @gen_r @neg_gen_r`` (and ``@sb_r @neg_sb_r`` once an ``x`` is
known) may appear wherever an atom may.

proof file: ``<n>. <formula> ; <justification>`` per line, with
justifications ``ax:<schema>``, ``k``, ``mp:<i>,<j>`` (line i the antecedent,
line j the implication) and ``gen:<i>,<variable>``.
"""

from __future__ import annotations

import hashlib
import json
import re
from pathlib import Path

from . import codes
from .axioms import AxiomInstance, Generalization, KappaMember, ModusPonens
from .codes import GoedelCode
from .lemmas import X17, RoleAssignment, _x_code, make_roles
from .proofs import KappaClass, ProofArray, SearchBound, Verdict
from .syntax import Formula, Neg, ParseError, Term, Variable, display, parse_formula, substitute

__all__ = [
    "role_refs", "read_kappa", "parse_kappa", "read_roles", "parse_roles",
    "read_proof", "parse_proof", "parse_justification", "format_proof",
    "parse_x", "verdict_record", "dumps_record", "digest",
]


def _strip(line):
    return line.split("#", 1)[0].strip()


def role_refs(roles: RoleAssignment | None, x=None) -> dict:
    if roles is None:
        return {}
    refs = {"p": roles.p, "q": roles.q, "r": roles.r,
            "gen_r": roles.gen_r, "neg_gen_r": Neg(roles.gen_r)}
    if x is not None:
        sb = substitute(roles.r, X17, codes.z_term(_x_code(x)))
        refs.update(sb_r=sb, neg_sb_r=Neg(sb))
    return refs


def parse_kappa(text: str, refs: dict | None = None, label="kappa") -> KappaClass:
    members = []
    for n, line in enumerate(text.splitlines(), 1):
        s = _strip(line)
        if not s:
            continue
        try:
            members.append(parse_formula(s, refs))
        except ParseError as e:
            raise ParseError(f"line {n}: {e.message}", e.pos) from None
    return KappaClass(frozenset(members), label)


def read_kappa(path, refs=None) -> KappaClass:
    p = Path(path)
    return parse_kappa(p.read_text(), refs, p.name)


def parse_roles(text: str) -> RoleAssignment:
    lines = [s for s in map(_strip, text.splitlines()) if s]
    if len(lines) != 1:
        raise ParseError("a roles file holds exactly one formula q", 0)
    s = lines[0]
    if s.startswith("q") and "=" in s[:3]:
        s = s.split("=", 1)[1]
    return make_roles(parse_formula(s))


def read_roles(path) -> RoleAssignment:
    return parse_roles(Path(path).read_text())


_JUST = re.compile(r"^(?:ax:(?P<ax>[IV]+(?:\.\d)?)|(?P<k>k)|mp:(?P<i>\d+),(?P<j>\d+)"
                   r"|gen:(?P<g>\d+),(?P<v>[xX]\d+(?:\^\d+)?))$")


def parse_justification(text: str, pos=0):
    m = _JUST.match(text.replace(" ", ""))
    if not m:
        raise ParseError(f"bad justification {text!r}", pos)
    if m["ax"]:
        return AxiomInstance(m["ax"])
    if m["k"]:
        return KappaMember()
    if m["i"]:
        return ModusPonens(int(m["i"]), int(m["j"]))
    v = m["v"]
    if v[0] == "x":
        var = Variable(int(v[1:]), 1)
    else:
        body, _, lvl = v[1:].partition("^")
        var = Variable(int(body), int(lvl) if lvl else 2)
    return Generalization(int(m["g"]), var)


_LINE = re.compile(r"^\s*(\d+)\s*\.\s*(.*?)\s*;\s*(\S[^;]*?)\s*$")


def parse_proof(text: str, refs: dict | None = None):
    """Lines and justifications, unvalidated (forward references allowed so
    that the checker can report them by line number)."""
    lines, justs = [], []
    for n, raw in enumerate(text.splitlines(), 1):
        s = _strip(raw)
        if not s:
            continue
        m = _LINE.match(s)
        if not m:
            raise ParseError(f"line {n}: expected '<n>. <formula> ; <justification>'", 0)
        if int(m[1]) != len(lines) + 1:
            raise ParseError(f"line {n}: expected number {len(lines) + 1}, found {m[1]}", 0)
        try:
            lines.append(parse_formula(m[2], refs))
        except ParseError as e:
            raise ParseError(f"line {n}: {e.message}", e.pos) from None
        justs.append(parse_justification(m[3]))
    if not lines:
        raise ParseError("empty proof file", 0)
    return tuple(lines), tuple(justs)


def read_proof(path, refs=None):
    return parse_proof(Path(path).read_text(), refs)


def format_proof(proof: ProofArray) -> str:
    return "\n".join(proof.render()) + "\n"


def parse_x(spec, refs=None):
    """An x argument: a proof-file path, a list of formula texts, or a code."""
    if isinstance(spec, int):
        return spec
    if isinstance(spec, (list, tuple)):
        return tuple(parse_formula(s, refs) if isinstance(s, str) else s for s in spec)
    if isinstance(spec, str) and Path(spec).is_file():
        return read_proof(spec, refs)[0]
    if isinstance(spec, str) and spec.strip().isdigit():
        return int(spec)
    return codes.parse_code(str(spec))


# -- report records ---------------------------------------------------------

def _ser(v):
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, ProofArray):
        return v.render()
    if isinstance(v, Formula):
        return display(v)
    if isinstance(v, Term):
        return str(v)
    if isinstance(v, GoedelCode):
        return codes.format_code(v)
    if isinstance(v, Verdict):
        return {"status": v.status.value, "witness": _ser(v.witness)}
    if isinstance(v, dict):
        return {str(_ser(k)): _ser(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, frozenset, set)):
        items = [_ser(x) for x in v]
        return sorted(items, key=str) if isinstance(v, (set, frozenset)) else items
    return str(v)


def digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, default=str).encode()).hexdigest()[:16]


SEARCH_NOTES = (
    "proof lines are numbered 0 < n <= l(x) in both the proof-array and proof-of relations",
    "search is bounded by line count and formula size, not by code magnitude",
)


def verdict_record(v: Verdict, inputs) -> dict:
    bounded = isinstance(v.bound, SearchBound)
    return {
        "check": v.check,
        "inputs": digest(inputs),
        "status": v.status.value,
        "bound": v.bound.describe() if bounded else None,
        "witness": _ser(v.witness),
        "parts": {name: p.status.value for name, p in v.parts},
        "trace": list(v.trace),
        "notes": list(SEARCH_NOTES) if bounded else [],
    }


def dumps_record(rec: dict) -> str:
    return json.dumps(rec, sort_keys=True, ensure_ascii=False)
