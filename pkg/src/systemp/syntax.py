"""Formulas of system P: variables of every finite type, terms, formulas,
the ASCII grammar, rendering, free/bound occurrences and substitution.

Terms are kept in normal form ``f^k(atom)`` where the atom is ``0`` or a
variable.  The successor count may be a plain ``int`` or a
:class:`SymbolicCount` so that numerals ``Z(n)`` for astronomically large
``n`` (e.g. the code of a proof array) can still appear inside formulas.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from ._ints import int_text, text_int

__all__ = [
    "Variable", "SymbolicCount", "Term", "Formula", "Elem", "Neg", "Dis", "Gen",
    "ZERO", "zero", "succ", "numeral", "var_term",
    "imp", "conj", "iff", "ex", "eq",
    "ParseError", "TypingError", "SubstitutionError",
    "parse_formula", "parse_term", "render", "render_term", "display",
    "free_variables", "bound_variables", "occurrences", "variables_of",
    "substitute", "check_collision", "size", "subformulas",
]


class ParseError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.message = message
        self.pos = pos


class TypingError(ValueError):
    pass


class SubstitutionError(ValueError):
    """Raised when the substituted sign would be captured.

    ``variable`` is the offending bound variable and ``path`` the child-index
    path (from the root) of the free occurrence that would be captured.
    """

    def __init__(self, message, variable=None, path=()):
        super().__init__(message)
        self.variable = variable
        self.path = path


@dataclass(frozen=True, order=True)
class Variable:
    base_index: int
    type_level: int = 1

    def __post_init__(self):
        if self.base_index < 1 or self.type_level < 1:
            raise TypingError(f"bad variable index/type {self.base_index}/{self.type_level}")

    def __str__(self):
        if self.type_level == 1:
            return f"x{self.base_index}"
        if self.type_level == 2:
            return f"X{self.base_index}"
        return f"X{self.base_index}^{self.type_level}"


@dataclass(frozen=True)
class SymbolicCount:
    """The natural number ``value(code) + offset`` for a code too large to
    materialize.  ``code`` is any hashable object exposing ``digest()``."""

    code: object
    offset: int = 0

    def __add__(self, k):
        if isinstance(k, int):
            return SymbolicCount(self.code, self.offset + k)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, k):
        return SymbolicCount(self.code, self.offset - k)

    def describe(self):
        s = f"Z[{self.code.digest()}]"
        if self.offset:
            s += f"{self.offset:+d}"
        return s


Count = Union[int, SymbolicCount]


def _count_ge(count: Count, k: int) -> bool:
    # symbolic counts stand for numbers beyond any materializable int
    return True if isinstance(count, SymbolicCount) else count >= k


@dataclass(frozen=True)
class Term:
    """``succs`` successors applied to ``base`` (``None`` means the sign 0)."""

    base: Variable | None = None
    succs: Count = 0

    def __post_init__(self):
        if isinstance(self.succs, int) and self.succs < 0:
            raise TypingError("negative successor count")
        if self.succs != 0 and self.base is not None and self.base.type_level != 1:
            raise TypingError(f"f applied to {self.base}, which is not of type 1")

    @property
    def type_level(self) -> int:
        if self.base is None or self.succs != 0:
            return 1
        return self.base.type_level

    @property
    def is_numeral(self) -> bool:
        return self.base is None

    def variables(self) -> frozenset:
        return frozenset() if self.base is None else frozenset([self.base])

    def __str__(self):
        return render_term(self)


ZERO = Term()


def zero() -> Term:
    return ZERO


def succ(t: Term) -> Term:
    if t.type_level != 1:
        raise TypingError(f"f applied to a term of type {t.type_level}")
    return Term(t.base, t.succs + 1)


def numeral(n: Count) -> Term:
    return Term(None, n)


def var_term(v: Variable) -> Term:
    return Term(v, 0)


class Formula:
    __slots__ = ()

    def __str__(self):
        return render(self)

    def __or__(self, other):
        return Dis(self, other)

    def __invert__(self):
        return Neg(self)

    def __rshift__(self, other):
        return imp(self, other)

    def __reduce__(self):
        # drop cached hashes: string hashing is salted per process
        return type(self), _fields(self)


# Formulas are deep immutable trees used as dict keys during search; the
# structural hash is computed once per node and compared before the fields.

def _fields(f):
    return tuple(getattr(f, n) for n in f.__dataclass_fields__)


def _cached_hash(self):
    h = self.__dict__.get("_hash")
    if h is None:
        h = hash((type(self).__name__,) + _fields(self))
        object.__setattr__(self, "_hash", h)
    return h


def _cached_eq(self, other):
    if self is other:
        return True
    if type(self) is not type(other):
        return NotImplemented if not isinstance(other, Formula) else False
    return hash(self) == hash(other) and _fields(self) == _fields(other)


@dataclass(frozen=True, repr=False)
class Elem(Formula):
    __hash__ = _cached_hash
    __eq__ = _cached_eq

    pred: Variable
    arg: Term

    def __post_init__(self):
        if isinstance(self.arg, Variable):
            object.__setattr__(self, "arg", var_term(self.arg))
        if self.pred.type_level != self.arg.type_level + 1:
            raise TypingError(
                f"{self.pred} (type {self.pred.type_level}) cannot take an"
                f" argument of type {self.arg.type_level}")

    def __repr__(self):
        return f"Elem({self.pred}, {render_term(self.arg)})"


@dataclass(frozen=True, repr=False)
class Neg(Formula):
    __hash__ = _cached_hash
    __eq__ = _cached_eq

    body: Formula

    def __repr__(self):
        return f"Neg({self.body!r})"


@dataclass(frozen=True, repr=False)
class Dis(Formula):
    __hash__ = _cached_hash
    __eq__ = _cached_eq

    left: Formula
    right: Formula

    def __repr__(self):
        return f"Dis({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Gen(Formula):
    __hash__ = _cached_hash
    __eq__ = _cached_eq

    var: Variable
    body: Formula

    def __repr__(self):
        return f"Gen({self.var}, {self.body!r})"


# -- abbreviations ----------------------------------------------------------

def imp(a: Formula, b: Formula) -> Formula:
    return Dis(Neg(a), b)


def conj(a: Formula, b: Formula) -> Formula:
    return Neg(Dis(Neg(a), Neg(b)))


def iff(a: Formula, b: Formula) -> Formula:
    return conj(imp(a, b), imp(b, a))


def ex(v: Variable, a: Formula) -> Formula:
    return Neg(Gen(v, Neg(a)))


def eq(a: Term, b: Term) -> Formula:
    """Leibniz equality ``Gen(u, u(a) -> u(b))`` with ``u`` the first
    next-type variable not occurring in ``a`` or ``b``."""
    if a.type_level != b.type_level:
        raise TypingError(f"equality between types {a.type_level} and {b.type_level}")
    t = a.type_level + 1
    used = a.variables() | b.variables()
    k = 1
    while Variable(k, t) in used:
        k += 1
    u = Variable(k, t)
    return Gen(u, imp(Elem(u, a), Elem(u, b)))


# -- structure --------------------------------------------------------------

def size(f: Formula) -> int:
    """Number of connective and elementary nodes."""
    n = f.__dict__.get("_size")
    if n is None:
        if isinstance(f, Elem):
            n = 1
        elif isinstance(f, Dis):
            n = 1 + size(f.left) + size(f.right)
        else:
            n = 1 + size(f.body)
        object.__setattr__(f, "_size", n)
    return n


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Dis):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, (Neg, Gen)):
        yield from subformulas(f.body)


def occurrences(f: Formula, bound=frozenset(), path=()):
    """Yield ``(path, variable, is_free)`` for every variable occurrence.

    Binder positions of ``Gen`` count as bound occurrences.  The path is the
    tuple of child indices leading to the elementary formula (or binder).
    """
    if isinstance(f, Elem):
        yield path, f.pred, f.pred not in bound
        if f.arg.base is not None:
            yield path, f.arg.base, f.arg.base not in bound
    elif isinstance(f, Neg):
        yield from occurrences(f.body, bound, path + (0,))
    elif isinstance(f, Dis):
        yield from occurrences(f.left, bound, path + (0,))
        yield from occurrences(f.right, bound, path + (1,))
    else:
        yield path, f.var, False
        yield from occurrences(f.body, bound | {f.var}, path + (0,))


def free_variables(f: Formula) -> frozenset:
    return frozenset(v for _, v, free in occurrences(f) if free)


def bound_variables(f: Formula) -> frozenset:
    return frozenset(v for _, v, free in occurrences(f) if not free)


def variables_of(f: Formula) -> frozenset:
    return frozenset(v for _, v, _ in occurrences(f))


def check_collision(a: Formula, v: Variable, c: Term):
    """Raise :class:`SubstitutionError` if some variable of ``c`` is bound in
    ``a`` at a place where ``v`` is free."""
    cvars = c.variables()
    if not cvars:
        return

    def walk(f, bound, path):
        if isinstance(f, Elem):
            if v not in bound and v in (f.pred, f.arg.base):
                hit = cvars & bound
                if hit:
                    w = min(hit)
                    raise SubstitutionError(
                        f"{w} is bound at a place where {v} is free (path {path})", w, path)
        elif isinstance(f, Neg):
            walk(f.body, bound, path + (0,))
        elif isinstance(f, Dis):
            walk(f.left, bound, path + (0,))
            walk(f.right, bound, path + (1,))
        else:
            walk(f.body, bound | {f.var}, path + (0,))

    walk(a, frozenset(), ())


def substitute(a: Formula, v: Variable, c: Term | Variable) -> Formula:
    """Replace every free occurrence of ``v`` in ``a`` by the sign ``c``."""
    if isinstance(c, Variable):
        c = var_term(c)
    if c.type_level != v.type_level:
        raise TypingError(f"cannot substitute a type-{c.type_level} sign for {v}")
    if v.type_level > 1 and c.base is None:
        raise TypingError("only variables are signs of type > 1")
    check_collision(a, v, c)
    return _subst(a, v, c)


def _subst(f, v, c):
    if isinstance(f, Elem):
        pred, arg = f.pred, f.arg
        if pred == v:
            pred = c.base
        if arg.base == v:
            arg = Term(c.base, c.succs + arg.succs) if arg.succs != 0 else c
        if pred is f.pred and arg is f.arg:
            return f
        return Elem(pred, arg)
    if isinstance(f, Neg):
        body = _subst(f.body, v, c)
        return f if body is f.body else Neg(body)
    if isinstance(f, Dis):
        left, right = _subst(f.left, v, c), _subst(f.right, v, c)
        return f if (left is f.left and right is f.right) else Dis(left, right)
    if f.var == v:
        return f
    body = _subst(f.body, v, c)
    return f if body is f.body else Gen(f.var, body)


# -- rendering --------------------------------------------------------------

# numerals longer than this are written with the f^<n> shorthand
_SHORT_NUMERAL = 8


def render_term(t: Term, _display=False) -> str:
    atom = "0" if t.base is None else str(t.base)
    k = t.succs
    if isinstance(k, SymbolicCount):
        if not _display:
            raise ValueError("term with a symbolic successor count has no text form")
        return f"f^{k.describe()} {atom}"
    if k == 0:
        return atom
    if k <= _SHORT_NUMERAL:
        return "f " * k + atom
    if _display and k.bit_length() > 128:
        digits = len(int_text(k)) if k.bit_length() < 200_000 else None
        tag = f"<{digits}-digit>" if digits else "<huge>"
        return f"f^{tag} {atom}"
    return f"f^{int_text(k)} {atom}"


def render(f: Formula, sugar: bool = False) -> str:
    """Render in the ASCII grammar; ``parse_formula(render(f)) == f``.

    With ``sugar=True`` implication, conjunction, equivalence, existence and
    equality are recognised and written with their abbreviations.
    """
    return _render(f, sugar, False)


def display(f: Formula, sugar: bool = True) -> str:
    """Human-readable rendering; huge and symbolic numerals are abbreviated
    (not re-parseable in that case)."""
    return _render(f, sugar, True)


def _match_eq(f):
    # Gen(u, Dis(Neg(Elem(u, a)), Elem(u, b))) with u the canonical fresh variable
    if not (isinstance(f, Gen) and isinstance(f.body, Dis) and isinstance(f.body.left, Neg)):
        return None
    l, r = f.body.left.body, f.body.right
    if not (isinstance(l, Elem) and isinstance(r, Elem) and l.pred == f.var == r.pred):
        return None
    try:
        if eq(l.arg, r.arg) == f:
            return l.arg, r.arg
    except TypingError:
        pass
    return None


def _render(f, sugar, disp):
    t = lambda term: render_term(term, disp)
    if isinstance(f, Elem):
        return f"{f.pred}({t(f.arg)})"
    if sugar:
        m = _match_eq(f)
        if m:
            return f"{t(m[0])} = {t(m[1])}"
        if isinstance(f, Neg) and isinstance(f.body, Gen) and isinstance(f.body.body, Neg):
            return f"ex {f.body.var} {_unary(f.body.body.body, sugar, disp)}"
        if (isinstance(f, Neg) and isinstance(f.body, Dis)
                and isinstance(f.body.left, Neg) and isinstance(f.body.right, Neg)):
            a, b = f.body.left.body, f.body.right.body
            if isinstance(a, Dis) and isinstance(a.left, Neg) and b == imp(a.right, a.left.body):
                return f"({_render(a.left.body, sugar, disp)} <-> {_render(a.right, sugar, disp)})"
            return f"({_render(a, sugar, disp)} & {_render(b, sugar, disp)})"
        if isinstance(f, Dis) and isinstance(f.left, Neg):
            return f"({_render(f.left.body, sugar, disp)} -> {_render(f.right, sugar, disp)})"
    if isinstance(f, Neg):
        return "~" + _unary(f.body, sugar, disp)
    if isinstance(f, Dis):
        return f"({_render(f.left, sugar, disp)} | {_render(f.right, sugar, disp)})"
    return f"all {f.var} {_unary(f.body, sugar, disp)}"


def _unary(f, sugar, disp):
    s = _render(f, sugar, disp)
    # equations are atoms in the grammar but bind looser than prefix operators
    if sugar and _match_eq(f) and not s.startswith("("):
        return f"({s})"
    return s


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op><->|->|[~|&=()])
  | (?P<caret>\^\d+)
  | (?P<bigvar>X\d+(?:\^\d+)?)
  | (?P<var>x\d+)
  | (?P<kw>all|ex|f)
  | (?P<zero>0)
  | (?P<ref>@[A-Za-z_]\w*)
""", re.VERBOSE)


def _tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", pos))
    return out


def _make_variable(tok, pos):
    if tok.startswith("x"):
        k, n = int(tok[1:]), 1
    else:
        body, _, lvl = tok[1:].partition("^")
        k, n = int(body), int(lvl) if lvl else 2
        if lvl and n < 2:
            raise ParseError("X-variables have type >= 2", pos)
    if k < 1:
        raise ParseError("variable indices start at 1", pos)
    return Variable(k, n)


class _Parser:
    def __init__(self, text, refs=None):
        self.toks = _tokenize(text)
        self.i = 0
        self.refs = refs or {}

    def peek(self, ahead=0):
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def take(self, value=None):
        tok = self.peek()
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def at(self, value):
        return self.peek()[1] == value

    def formula(self):
        left = self.implication()
        while self.at("<->"):
            self.take()
            left = iff(left, self.implication())
        return left

    def implication(self):
        left = self.disjunction()
        if self.at("->"):
            self.take()
            return imp(left, self.implication())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.at("|"):
            self.take()
            left = Dis(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.at("&"):
            self.take()
            left = conj(left, self.unary())
        return left

    def variable(self):
        kind, tok, pos = self.take()
        if kind not in ("var", "bigvar"):
            raise ParseError(f"expected a variable, found {tok or 'end of input'!r}", pos)
        return _make_variable(tok, pos)

    def unary(self):
        kind, tok, pos = self.peek()
        if tok == "~":
            self.take()
            return Neg(self.unary())
        if tok in ("all", "ex"):
            self.take()
            v = self.variable()
            body = self.unary()
            return Gen(v, body) if tok == "all" else ex(v, body)
        return self.atom()

    def atom(self):
        kind, tok, pos = self.peek()
        if kind == "ref":
            self.take()
            if tok[1:] not in self.refs:
                raise ParseError(f"unknown reference {tok}", pos)
            return self.refs[tok[1:]]
        if tok == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        if kind in ("var", "bigvar") and self.peek(1)[1] == "(":
            pred = self.variable()
            self.take("(")
            arg = self.term()
            self.take(")")
            try:
                return Elem(pred, arg)
            except TypingError as e:
                raise TypingError(f"{e} at position {pos}") from None
        if kind in ("var", "bigvar", "zero") or tok == "f":
            a = self.term()
            self.take("=")
            b = self.term()
            try:
                return eq(a, b)
            except TypingError as e:
                raise TypingError(f"{e} at position {pos}") from None
        raise ParseError(f"unexpected {tok or 'end of input'!r}", pos)

    def term(self):
        kind, tok, pos = self.peek()
        if tok == "f":
            self.take()
            k = 1
            if self.peek()[0] == "caret":
                k = text_int(self.take()[1][1:])
            inner = self.term()
            if inner.type_level != 1:
                raise TypingError(f"f applied to a term of type {inner.type_level} at position {pos}")
            return Term(inner.base, inner.succs + k)
        if kind == "zero":
            self.take()
            return ZERO
        if kind in ("var", "bigvar"):
            return var_term(self.variable())
        raise ParseError(f"expected a term, found {tok or 'end of input'!r}", pos)


def parse_formula(text: str, refs: dict | None = None) -> Formula:
    """Parse the ASCII grammar (sugar allowed) into a desugared formula.

    ``refs`` maps names to formulas usable as atoms written ``@name``.
    """
    p = _Parser(text, refs)
    f = p.formula()
    kind, tok, pos = p.peek()
    if kind != "end":
        raise ParseError(f"trailing input {tok!r}", pos)
    return f


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.peek()[0] != "end":
        raise ParseError("trailing input", p.peek()[2])
    return t
