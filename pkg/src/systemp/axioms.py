"""Axioms of system P and the immediate-consequence relation.

Schemata, in matching order::

    I.1   ~(f x1 = 0)
    I.2   f x1 = f x2 -> x1 = x2
    I.3   X1(0) & all x1 (X1(x1) -> X1(f x1)) -> all x1 X1(x1)
    II.1  p | p -> p
    II.2  p -> p | q
    II.3  p | q -> q | p
    II.4  (p -> q) -> (r | p -> r | q)
    III.1 all v a -> a[v := c]          (c free for v in a)
    III.2 all v (b | a) -> b | all v a  (v not free in b)
    IV    ex u all v (u(v) <-> a)       (u not free in a, type(u) = type(v) + 1)
    V     all x1 (X1(x1) <-> X2(x1)) -> X1 = X2, and all its type lifts

Formulas are compared after desugaring, so an axiom is recognised purely
by structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .syntax import (
    ZERO, Dis, Elem, Formula, Gen, Neg, SubstitutionError, Term, TypingError,
    Variable, check_collision, conj, eq, free_variables, iff, imp, succ,
    substitute, var_term,
)

__all__ = [
    "SCHEMA_IDS", "AxiomMatch", "match_axiom", "match_schema", "is_axiom",
    "instantiate", "axiom_v", "immediate_consequence",
    "AxiomInstance", "KappaMember", "ModusPonens", "Generalization", "Justification",
]

SCHEMA_IDS = ("I.1", "I.2", "I.3", "II.1", "II.2", "II.3", "II.4",
              "III.1", "III.2", "IV", "V")

x1, x2 = Variable(1), Variable(2)
X1, X2 = Variable(1, 2), Variable(2, 2)
_tx1, _tx2 = var_term(x1), var_term(x2)

AXIOM_I1 = Neg(eq(succ(_tx1), ZERO))
AXIOM_I2 = imp(eq(succ(_tx1), succ(_tx2)), eq(_tx1, _tx2))
AXIOM_I3 = imp(
    conj(Elem(X1, ZERO), Gen(x1, imp(Elem(X1, _tx1), Elem(X1, succ(_tx1))))),
    Gen(x1, Elem(X1, _tx1)))


def axiom_v(lift: int = 0) -> Formula:
    """Extensionality lifted by ``lift`` types."""
    v = Variable(1, 1 + lift)
    a, b = Variable(1, 2 + lift), Variable(2, 2 + lift)
    return imp(Gen(v, iff(Elem(a, var_term(v)), Elem(b, var_term(v)))),
               eq(var_term(a), var_term(b)))


# -- justifications ---------------------------------------------------------

@dataclass(frozen=True)
class AxiomInstance:
    schema_id: str

    def __str__(self):
        return f"ax:{self.schema_id}"


@dataclass(frozen=True)
class KappaMember:
    def __str__(self):
        return "k"


@dataclass(frozen=True)
class ModusPonens:
    """Line ``i`` holds the antecedent, line ``j`` the implication (1-based)."""
    i: int
    j: int

    def __str__(self):
        return f"mp:{self.i},{self.j}"


@dataclass(frozen=True)
class Generalization:
    i: int
    var: Variable

    def __str__(self):
        return f"gen:{self.i},{self.var}"


Justification = AxiomInstance | KappaMember | ModusPonens | Generalization


# -- matching ---------------------------------------------------------------

@dataclass(frozen=True)
class AxiomMatch:
    schema_id: str
    bindings: dict

    def __hash__(self):
        return hash((self.schema_id, tuple(sorted(self.bindings, key=str))))

    def rebuild(self) -> Formula:
        return instantiate(self.schema_id, **self.bindings)


def _split_imp(f):
    if isinstance(f, Dis) and isinstance(f.left, Neg):
        return f.left.body, f.right
    return None


def _split_conj(f):
    if (isinstance(f, Neg) and isinstance(f.body, Dis)
            and isinstance(f.body.left, Neg) and isinstance(f.body.right, Neg)):
        return f.body.left.body, f.body.right.body
    return None


def _split_iff(f):
    c = _split_conj(f)
    if c is None:
        return None
    a, b = _split_imp(c[0]) or (None, None), _split_imp(c[1]) or (None, None)
    if a[0] is None or b[0] is None or a != (b[1], b[0]):
        return None
    return a


def _match_ii(schema, f):
    m = _split_imp(f)
    if m is None:
        return None
    ante, cons = m
    if schema == "II.1":
        if isinstance(ante, Dis) and ante.left == ante.right == cons:
            return {"p": cons}
    elif schema == "II.2":
        if isinstance(cons, Dis) and cons.left == ante:
            return {"p": ante, "q": cons.right}
    elif schema == "II.3":
        if isinstance(ante, Dis) and isinstance(cons, Dis) \
                and (cons.left, cons.right) == (ante.right, ante.left):
            return {"p": ante.left, "q": ante.right}
    elif schema == "II.4":
        pq = _split_imp(ante)
        rr = _split_imp(cons)
        if pq and rr and isinstance(rr[0], Dis) and isinstance(rr[1], Dis):
            p, q = pq
            (r1, p1), (r2, q2) = (rr[0].left, rr[0].right), (rr[1].left, rr[1].right)
            if r1 == r2 and p1 == p and q2 == q:
                return {"p": p, "q": q, "r": r1}
    return None


class _NoMatch(Exception):
    pass


def _find_substituend(a, b, v):
    """Return the sign ``c`` with ``a[v := c] == b`` or raise ``_NoMatch``.

    Returns ``None`` when ``v`` has no free occurrence in ``a`` (then any
    sign works and ``b`` must equal ``a``).
    """
    found = []

    def unify_term(ta: Term, tb: Term):
        if ta.base != v:
            if ta != tb:
                raise _NoMatch
            return
        k = ta.succs
        if isinstance(tb.succs, int) and isinstance(k, int) and tb.succs < k:
            raise _NoMatch
        rest = tb.succs - k
        if isinstance(rest, int) and rest == 0:
            c = var_term(tb.base) if tb.base is not None else ZERO
        else:
            try:
                c = Term(tb.base, rest)
            except TypingError:
                raise _NoMatch from None
        if isinstance(c.succs, int) and c.succs < 0:
            raise _NoMatch
        record(c)

    def record(c):
        if found and found[0] != c:
            raise _NoMatch
        if not found:
            found.append(c)

    def walk(fa, fb, free):
        if type(fa) is not type(fb):
            raise _NoMatch
        if not free:
            if fa != fb:
                raise _NoMatch
            return
        if isinstance(fa, Elem):
            if fa.pred == v:
                record(var_term(fb.pred) if fb.pred.type_level == v.type_level else None)
            elif fa.pred != fb.pred:
                raise _NoMatch
            if v.type_level == 1 or fa.arg.base == v:
                unify_term(fa.arg, fb.arg)
            elif fa.arg != fb.arg:
                raise _NoMatch
        elif isinstance(fa, Neg):
            walk(fa.body, fb.body, free)
        elif isinstance(fa, Dis):
            walk(fa.left, fb.left, free)
            walk(fa.right, fb.right, free)
        else:
            if fa.var != fb.var:
                raise _NoMatch
            walk(fa.body, fb.body, fa.var != v)

    walk(a, b, True)
    if found and found[0] is None:
        raise _NoMatch
    return found[0] if found else None


def _match_iii1(f):
    m = _split_imp(f)
    if m is None or not isinstance(m[0], Gen):
        return None
    v, a = m[0].var, m[0].body
    try:
        c = _find_substituend(a, m[1], v)
    except _NoMatch:
        return None
    if c is None:
        c = var_term(v)
    try:
        check_collision(a, v, c)
    except SubstitutionError:
        return None
    if c.type_level != v.type_level:
        return None
    return {"v": v, "a": a, "c": c}


def _match_iii2(f):
    m = _split_imp(f)
    if m is None:
        return None
    ante, cons = m
    if not (isinstance(ante, Gen) and isinstance(ante.body, Dis) and isinstance(cons, Dis)
            and isinstance(cons.right, Gen)):
        return None
    v, b, a = ante.var, ante.body.left, ante.body.right
    if cons.left == b and cons.right == Gen(v, a) and v not in free_variables(b):
        return {"v": v, "a": a, "b": b}
    return None


def _match_iv(f):
    # Neg(Gen(u, Neg(Gen(v, iff(Elem(u, v), a)))))
    if not (isinstance(f, Neg) and isinstance(f.body, Gen) and isinstance(f.body.body, Neg)
            and isinstance(f.body.body.body, Gen)):
        return None
    u = f.body.var
    inner = f.body.body.body
    v = inner.var
    ia = _split_iff(inner.body)
    if ia is None or u.type_level != v.type_level + 1:
        return None
    left, a = ia
    if left != Elem(u, var_term(v)) or u in free_variables(a):
        return None
    return {"u": u, "v": v, "a": a}


def _match_v(f):
    m = _split_imp(f)
    if m is None or not isinstance(m[0], Gen):
        return None
    lift = m[0].var.type_level - 1
    return {"lift": lift} if f == axiom_v(lift) else None


_FIXED = {"I.1": AXIOM_I1, "I.2": AXIOM_I2, "I.3": AXIOM_I3}


def match_schema(schema_id: str, f: Formula) -> Optional[dict]:
    """Bindings under which ``f`` instantiates the named schema, else None."""
    if schema_id in _FIXED:
        return {} if f == _FIXED[schema_id] else None
    if schema_id.startswith("II."):
        return _match_ii(schema_id, f)
    if schema_id == "III.1":
        return _match_iii1(f)
    if schema_id == "III.2":
        return _match_iii2(f)
    if schema_id == "IV":
        return _match_iv(f)
    if schema_id == "V":
        return _match_v(f)
    raise KeyError(schema_id)


def match_axiom(f: Formula) -> Optional[AxiomMatch]:
    for sid in SCHEMA_IDS:
        b = match_schema(sid, f)
        if b is not None:
            return AxiomMatch(sid, b)
    return None


def is_axiom(f: Formula) -> Optional[str]:
    """First schema id (in the fixed order) that ``f`` instantiates."""
    m = match_axiom(f)
    return m.schema_id if m else None


def instantiate(schema_id: str, **b) -> Formula:
    """Build the schema instance for the given bindings (side conditions are
    checked; violations raise ``ValueError``)."""
    if schema_id in _FIXED:
        return _FIXED[schema_id]
    if schema_id == "II.1":
        p = b["p"]
        return imp(Dis(p, p), p)
    if schema_id == "II.2":
        return imp(b["p"], Dis(b["p"], b["q"]))
    if schema_id == "II.3":
        return imp(Dis(b["p"], b["q"]), Dis(b["q"], b["p"]))
    if schema_id == "II.4":
        p, q, r = b["p"], b["q"], b["r"]
        return imp(imp(p, q), imp(Dis(r, p), Dis(r, q)))
    if schema_id == "III.1":
        v, a = b["v"], b["a"]
        return imp(Gen(v, a), substitute(a, v, b["c"]))
    if schema_id == "III.2":
        v, a, bb = b["v"], b["a"], b["b"]
        if v in free_variables(bb):
            raise ValueError(f"{v} is free in the side formula")
        return imp(Gen(v, Dis(bb, a)), Dis(bb, Gen(v, a)))
    if schema_id == "IV":
        u, v, a = b["u"], b["v"], b["a"]
        if u.type_level != v.type_level + 1 or u in free_variables(a):
            raise ValueError("IV side condition violated")
        return Neg(Gen(u, Neg(Gen(v, iff(Elem(u, var_term(v)), a)))))
    if schema_id == "V":
        return axiom_v(b.get("lift", 0))
    raise KeyError(schema_id)


def immediate_consequence(x: Formula, y: Formula, z: Formula | None = None) -> bool:
    """``x`` follows from ``y`` and ``z = y -> x`` (modus ponens), or, with
    ``z`` absent, ``x = Gen(v, y)`` for some variable ``v``."""
    if z is None:
        return isinstance(x, Gen) and x.body == y
    return z == imp(y, x)
