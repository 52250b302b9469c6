"""Proof arrays, the decidable relations Ax, Fl, Bw, B, W and their
kappa-relativizations, and bounded realizations of Bew, Wid and Flg(kappa).

Bew and Wid are only semi-decidable.  Here they are realized by a bounded
forward closure (:func:`flg_enumerate`).  Every formula reached carries a
re-checkable proof array.  A negative answer only means "nothing within
the bound".
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from typing import Iterable, Optional

from . import codes
from .axioms import (
    AXIOM_I1, AXIOM_I2, AXIOM_I3, AxiomInstance, Generalization, Justification,
    KappaMember, ModusPonens, axiom_v, immediate_consequence, instantiate,
    is_axiom, match_schema,
)
from .codes import CodeError, GoedelCode
from .syntax import (
    ZERO, Dis, Elem, Formula, Gen, Neg, SubstitutionError, Term, TypingError,
    Variable, display, free_variables, imp, size, subformulas, substitute,
    succ, var_term,
)

__all__ = [
    "KappaClass", "ProofArray", "SearchBound", "Status", "Verdict", "Closure",
    "ax_code", "fl_code", "bw", "bw_k", "b_rel", "w_rel", "b_k", "w_k",
    "bew_bounded", "wid_bounded", "flg_enumerate", "wid_s_bounded",
    "validate_lines", "formula_key", "EMPTY_KAPPA",
]


@dataclass(frozen=True)
class KappaClass:
    members: frozenset = frozenset()
    label: str = "kappa"

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))

    def __contains__(self, f):
        return f in self.members

    def __len__(self):
        return len(self.members)

    def __le__(self, other):
        return self.members <= other.members

    def sorted(self):
        return sorted(self.members, key=formula_key)


EMPTY_KAPPA = KappaClass(frozenset(), "empty")


def formula_key(f: Formula) -> str:
    """Deterministic ordering key (display text; huge numerals by digest)."""
    return _key(f)


@lru_cache(maxsize=200_000)
def _key(f):
    return f"{size(f):04d}:{display(f, sugar=False)}"


# -- proof arrays -----------------------------------------------------------

@dataclass(frozen=True)
class ProofArray:
    lines: tuple
    justifications: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))
        object.__setattr__(self, "justifications", tuple(self.justifications))
        if not self.lines:
            raise ValueError("a proof array has at least one line")
        if self.justifications and len(self.justifications) != len(self.lines):
            raise ValueError("one justification per line")
        for n, j in enumerate(self.justifications, 1):
            if isinstance(j, ModusPonens) and not (0 < j.i < n and 0 < j.j < n):
                raise ValueError(f"line {n}: premises must precede the line")
            if isinstance(j, Generalization) and not 0 < j.i < n:
                raise ValueError(f"line {n}: premise must precede the line")

    def __len__(self):
        return len(self.lines)

    @property
    def last(self) -> Formula:
        return self.lines[-1]

    @property
    def code(self) -> GoedelCode:
        return codes.encode_array(self.lines)

    def check(self, kappa: "KappaClass" = None) -> Optional[int]:
        """First line (1-based) whose justification does not re-validate."""
        return validate_lines(self.lines, self.justifications, kappa)

    def render(self):
        out = []
        for n, ln in enumerate(self.lines, 1):
            j = f" ; {self.justifications[n - 1]}" if self.justifications else ""
            out.append(f"{n}. {display(ln)}{j}")
        return out


def validate_lines(lines, justifications, kappa=None) -> Optional[int]:
    """Check each stated justification; returns the first bad line or None."""
    members = kappa.members if kappa is not None else frozenset()
    for n, (ln, j) in enumerate(zip(lines, justifications), 1):
        ok = False
        if isinstance(j, AxiomInstance):
            ok = j.schema_id in _SCHEMA_SET and match_schema(j.schema_id, ln) is not None
        elif isinstance(j, KappaMember):
            ok = ln in members
        elif isinstance(j, ModusPonens):
            ok = (0 < j.i < n and 0 < j.j < n
                  and immediate_consequence(ln, lines[j.i - 1], lines[j.j - 1]))
        elif isinstance(j, Generalization):
            ok = 0 < j.i < n and ln == Gen(j.var, lines[j.i - 1])
        if not ok:
            return n
    return None


_SCHEMA_SET = frozenset(("I.1", "I.2", "I.3", "II.1", "II.2", "II.3", "II.4",
                         "III.1", "III.2", "IV", "V"))


# -- the decidable relations on codes ---------------------------------------

def _formula_or_none(x):
    if isinstance(x, Formula):
        return x
    try:
        return codes.decode_formula(x)
    except CodeError:
        return None


def ax_code(x) -> bool:
    f = _formula_or_none(x)
    return f is not None and is_axiom(f) is not None


def fl_code(x, y, z) -> bool:
    """Immediate consequence on codes.

    Two-premise form: ``z`` codes ``y -> x``.  The one-premise Gen form is
    expressed as ``fl_code(Gen(v, y), y, y)``.
    """
    fx, fy, fz = (_formula_or_none(c) for c in (x, y, z))
    if fx is None or fy is None or fz is None:
        return False
    if immediate_consequence(fx, fy, fz):
        return True
    return fy == fz and immediate_consequence(fx, fy)


def _lines_of(x):
    if isinstance(x, ProofArray):
        return x.lines
    if isinstance(x, (tuple, list)) and all(isinstance(f, Formula) for f in x):
        return tuple(x)
    try:
        return codes.decode_array(x)
    except CodeError:
        return None


def _is_proof_array(lines, members) -> bool:
    if not lines:
        return False
    for n, ln in enumerate(lines):
        if ln in members or is_axiom(ln) is not None:
            continue
        earlier = lines[:n]
        if isinstance(ln, Gen) and ln.body in earlier:
            continue
        if any(imp(p, ln) in earlier for p in earlier):
            continue
        return False
    return True


def bw(x) -> bool:
    """x is a PROOF ARRAY: nonempty, every line an axiom or an immediate
    consequence of earlier lines."""
    lines = _lines_of(x)
    return lines is not None and _is_proof_array(lines, frozenset())


def bw_k(kappa: KappaClass, x) -> bool:
    """As :func:`bw`, additionally admitting lines that belong to kappa."""
    lines = _lines_of(x)
    return lines is not None and _is_proof_array(lines, kappa.members)


def _target(y):
    f = _formula_or_none(y)
    return f


def _proves(kappa, x, target) -> bool:
    lines = _lines_of(x)
    if lines is None or target is None or lines[-1] != target:
        return False
    return _is_proof_array(lines, kappa.members if kappa is not None else frozenset())


def b_rel(x, y) -> bool:
    """x is a PROOF of the FORMULA y."""
    return _proves(None, x, _target(y))


def w_rel(x, y) -> bool:
    """x is a REFUTATION of y: a proof whose last line is Neg(y)."""
    f = _target(y)
    return f is not None and _proves(None, x, Neg(f))


def b_k(kappa: KappaClass, x, y) -> bool:
    return _proves(kappa, x, _target(y))


def w_k(kappa: KappaClass, x, y) -> bool:
    f = _target(y)
    return f is not None and _proves(kappa, x, Neg(f))


# -- verdicts ---------------------------------------------------------------

class Status(Enum):
    HOLDS = "Holds"
    HOLDS_WITHIN_BOUND = "HoldsWithinBound"
    FAILS = "Fails"
    FAILS_WITHIN_BOUND = "FailsWithinBound"
    VACUOUS = "Vacuous"

    def negate(self) -> "Status":
        return _NEGATION[self]

    @property
    def is_failure(self):
        return self in (Status.FAILS, Status.FAILS_WITHIN_BOUND)


_NEGATION = {
    Status.HOLDS: Status.FAILS, Status.FAILS: Status.HOLDS,
    Status.HOLDS_WITHIN_BOUND: Status.FAILS_WITHIN_BOUND,
    Status.FAILS_WITHIN_BOUND: Status.HOLDS_WITHIN_BOUND,
    Status.VACUOUS: Status.VACUOUS,
}

_SEVERITY = [Status.FAILS, Status.FAILS_WITHIN_BOUND, Status.HOLDS_WITHIN_BOUND,
             Status.HOLDS, Status.VACUOUS]


def combine(statuses: Iterable[Status]) -> Status:
    """Status of a conjunction of checks (vacuous parts are ignored)."""
    statuses = set(statuses)
    for s in _SEVERITY:
        if s in statuses:
            return s
    return Status.VACUOUS


@dataclass(frozen=True)
class Verdict:
    """Outcome of one evaluated instance.

    ``witness`` maps names to re-checkable objects (proof arrays, codes,
    booleans); ``trace`` is the human-readable evaluation record; ``parts``
    holds sub-verdicts of compound checks.
    """
    check: str
    status: Status
    bound: Optional["SearchBound"] = None
    witness: dict = field(default_factory=dict)
    trace: tuple = ()
    parts: tuple = ()

    def __hash__(self):
        return hash((self.check, self.status))

    @property
    def found(self) -> bool:
        """For search verdicts: a witness proof array exists within the bound."""
        return self.status is Status.HOLDS and "proof" in self.witness

    @property
    def proof(self) -> Optional[ProofArray]:
        return self.witness.get("proof")

    def part(self, name) -> "Verdict":
        return dict(self.parts)[name]


# -- bounded search ---------------------------------------------------------

_x1, _x2, _X1 = Variable(1), Variable(2), Variable(1, 2)
DEFAULT_VARIABLES = (_x1, _x2, _X1)
DEFAULT_TERMS = (ZERO, succ(ZERO), succ(succ(ZERO)))


@dataclass(frozen=True)
class SearchBound:
    """Finite realization of the unbounded quantifier in Bew/Wid.

    ``max_lines`` bounds the tree size of derivations (the emitted proof
    array is at most that long), ``max_size`` the node count of every
    formula used.  Generalization uses ``variables``; III.1 instances use
    ``terms`` plus the type-matching pool variables; schemata II, III.2 and
    IV are instantiated over the subformulas of ``formulas`` and kappa.
    """
    max_lines: int = 5
    max_size: int = 20
    variables: tuple = DEFAULT_VARIABLES
    terms: tuple = DEFAULT_TERMS
    formulas: tuple = ()

    def __post_init__(self):
        if self.max_lines < 1 or self.max_size < 1:
            raise ValueError("bounds must be positive")
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "formulas", tuple(self.formulas))

    def with_formulas(self, *fs) -> "SearchBound":
        new = tuple(f for f in fs if f not in self.formulas)
        return replace(self, formulas=self.formulas + new) if new else self

    def with_terms(self, *ts) -> "SearchBound":
        new = tuple(t for t in ts if t not in self.terms)
        return replace(self, terms=self.terms + new) if new else self

    def covers(self, other: "SearchBound") -> bool:
        """True when every search admitted by ``other`` is admitted here."""
        return (self.max_lines >= other.max_lines and self.max_size >= other.max_size
                and set(other.variables) <= set(self.variables)
                and set(other.terms) <= set(self.terms)
                and set(other.formulas) <= set(self.formulas))

    def describe(self) -> dict:
        return {
            "max_lines": self.max_lines, "max_size": self.max_size,
            "variables": [str(v) for v in self.variables],
            "terms": [_term_text(t) for t in self.terms],
            "formulas": len(self.formulas),
        }


def _term_text(t):
    from .syntax import render_term
    return render_term(t, True)


@dataclass
class _Entry:
    cost: int
    rule: tuple


class Closure:
    """Bounded Flg(kappa): formulas reachable within a :class:`SearchBound`.

    Derivation costs are tree sizes (axiom and kappa lines cost 1, modus
    ponens ``1 + both premises``, generalization ``1 + premise``); the
    closure is the exact least fixed point of those costs, so membership is
    monotone in every component of the bound and in kappa.

    Expansion is lazy and cheapest-first: :meth:`reach` stops as soon as its
    target is settled, while iteration, ``len`` and ``in`` force the full
    closure.  Either way the settled costs are the same.
    """

    def __init__(self, kappa: KappaClass, bound: SearchBound):
        self.kappa = kappa
        self.bound = bound
        self.entries: dict = {}
        self._arrays: dict = {}
        self._heap = []
        self._counter = itertools.count()
        self._by_antecedent: dict = {}
        self._done = False
        self._seed()

    def __contains__(self, f):
        self._expand()
        return f in self.entries

    def __len__(self):
        self._expand()
        return len(self.entries)

    def __iter__(self):
        return iter(self.formulas())

    def reach(self, f) -> Optional[int]:
        """Cost of ``f`` if derivable within the bound, else None."""
        self._expand(until=f)
        e = self.entries.get(f)
        return e.cost if e else None

    def cost(self, f) -> Optional[int]:
        return self.reach(f)

    def formulas(self):
        self._expand()
        return sorted(self.entries, key=lambda f: (self.entries[f].cost, formula_key(f)))

    def base_pool(self):
        return [f for f in self.formulas() if self.entries[f].rule[0] in ("ax", "k")]

    def proof(self, f) -> Optional[ProofArray]:
        if self.reach(f) is None:
            return None
        if f not in self._arrays:
            lines, justs, index = [], [], {}
            self._emit(f, lines, justs, index)
            self._arrays[f] = ProofArray(lines, justs)
        return self._arrays[f]

    def _emit(self, f, lines, justs, index):
        # iterative post-order: derivations can be deep
        stack = [(f, False)]
        while stack:
            g, expanded = stack.pop()
            if g in index:
                continue
            rule = self.entries[g].rule
            if not expanded:
                stack.append((g, True))
                if rule[0] == "mp":
                    stack.append((rule[2], False))
                    stack.append((rule[1], False))
                elif rule[0] == "gen":
                    stack.append((rule[2], False))
                continue
            if rule[0] == "ax":
                j = AxiomInstance(rule[1])
            elif rule[0] == "k":
                j = KappaMember()
            elif rule[0] == "mp":
                j = ModusPonens(index[rule[1]], index[rule[2]])
            else:
                j = Generalization(index[rule[2]], rule[1])
            lines.append(g)
            justs.append(j)
            index[g] = len(lines)

    # -- construction --
    def _seeds(self):
        seen = set()
        out = []
        for f in list(self.kappa.sorted()) + list(self.bound.formulas):
            for g in subformulas(f):
                if g not in seen:
                    seen.add(g)
                    out.append(g)
        return sorted(out, key=formula_key)

    def _axiom_pool(self):
        B = self.bound
        S = B.max_size
        seeds = self._seeds()
        pool = {}

        def add(f, sid):
            if f not in pool and size(f) <= S:
                pool[f] = sid

        for f, sid in ((AXIOM_I1, "I.1"), (AXIOM_I2, "I.2"), (AXIOM_I3, "I.3")):
            add(f, sid)
        types = {v.type_level for v in B.variables} | {1}
        for lift in range(max(types)):
            add(axiom_v(lift), "V")
        for f in seeds:
            sid = is_axiom(f)
            if sid:
                add(f, sid)
        sized = [(f, size(f)) for f in seeds]
        for p, sp in sized:
            if 4 + 3 * sp <= S:
                add(instantiate("II.1", p=p), "II.1")
            for q, sq in sized:
                if 3 + 2 * sp + sq <= S:
                    add(instantiate("II.2", p=p, q=q), "II.2")
                if 4 + 2 * (sp + sq) <= S:
                    add(instantiate("II.3", p=p, q=q), "II.3")
                if 8 + 2 * (sp + sq) > S:
                    continue
                for r, sr in sized:
                    if 8 + 2 * (sp + sq + sr) <= S:
                        add(instantiate("II.4", p=p, q=q, r=r), "II.4")
        for g in seeds:
            if isinstance(g, Gen):
                for c in self._signs_for(g.var):
                    try:
                        add(instantiate("III.1", v=g.var, a=g.body, c=c), "III.1")
                    except (SubstitutionError, TypingError):
                        pass
                if isinstance(g.body, Dis) and g.var not in free_variables(g.body.left):
                    add(instantiate("III.2", v=g.var, a=g.body.right, b=g.body.left), "III.2")
        for v in B.variables:
            us = [u for u in B.variables if u.type_level == v.type_level + 1] or [
                Variable(1, v.type_level + 1)]
            for a, sa in sized:
                if 15 + 2 * sa > S:
                    continue
                for u in us:
                    if u not in free_variables(a):
                        add(instantiate("IV", u=u, v=v, a=a), "IV")
                        break
        return pool

    def _signs_for(self, v):
        if v.type_level == 1:
            signs = list(self.bound.terms)
        else:
            signs = []
        signs += [var_term(w) for w in self.bound.variables if w.type_level == v.type_level]
        return list(dict.fromkeys(signs))

    def _push(self, cost, f, rule):
        if cost <= self.bound.max_lines and f not in self.entries:
            heapq.heappush(self._heap, (cost, next(self._counter), f, rule))

    def _seed(self):
        S = self.bound.max_size
        for f in self.kappa.sorted():
            if size(f) <= S:
                self._push(1, f, ("k",))
        for f, sid in sorted(self._axiom_pool().items(), key=lambda kv: formula_key(kv[0])):
            self._push(1, f, ("ax", sid))

    def _expand(self, until=None):
        if self._done or (until is not None and until in self.entries):
            return
        B = self.bound
        L, S = B.max_lines, B.max_size
        heap, entries, by_ante = self._heap, self.entries, self._by_antecedent
        while heap:
            cost, _, f, rule = heapq.heappop(heap)
            if f in entries:
                continue
            entries[f] = _Entry(cost, rule)
            # f as minor premise
            for g in by_ante.get(f, ()):
                self._push(cost + entries[g].cost + 1, g.right, ("mp", f, g))
            # f as implication
            if isinstance(f, Dis) and isinstance(f.left, Neg):
                a = f.left.body
                by_ante.setdefault(a, []).append(f)
                if a in entries:
                    self._push(cost + entries[a].cost + 1, f.right, ("mp", a, f))
            if cost + 1 <= L and size(f) + 1 <= S:
                for v in B.variables:
                    self._push(cost + 1, Gen(v, f), ("gen", v, f))
            if until is not None and f == until:
                return
        self._done = True


@lru_cache(maxsize=32)
def _closure(kappa: KappaClass, bound: SearchBound) -> Closure:
    return Closure(kappa, bound)


def flg_enumerate(kappa: KappaClass, bound: SearchBound) -> Closure:
    """Forward-chaining closure of axioms and kappa under immediate
    consequence, restricted to ``bound``; deterministic for fixed inputs."""
    return _closure(kappa, bound)


def bew_bounded(kappa: KappaClass, y, bound: SearchBound) -> Verdict:
    """Search for a kappa-proof of ``y``.

    ``Holds`` (with ``witness['proof']``) when one exists within the bound,
    ``HoldsWithinBound`` when none was found, meaning only that no proof of
    size <= bound exists; the caller supplies the polarity.  ``y`` is added
    to ``bound.formulas`` and the verdict records the bound actually used.
    """
    f = _formula_or_none(y)
    if f is None:
        raise CodeError("bew_bounded expects a formula code")
    return _search("bew", kappa, f, bound)


def wid_bounded(kappa: KappaClass, y, bound: SearchBound) -> Verdict:
    """Search for a kappa-refutation of ``y``; identical to searching for a
    proof of ``Neg(y)``."""
    f = _formula_or_none(y)
    if f is None:
        raise CodeError("wid_bounded expects a formula code")
    v = _search("wid", kappa, Neg(f), bound)
    return replace(v, witness={**v.witness, "refuted": f})


def _search(name, kappa, target, bound):
    # the target always seeds the instantiation pool, so an axiom instance
    # is found at one line whatever the caller's pool was
    bound = bound.with_formulas(target)
    cl = flg_enumerate(kappa, bound)
    proof = cl.proof(target)
    if proof is not None:
        return Verdict(name, Status.HOLDS, bound, {"proof": proof, "target": target},
                       (f"{name}: proof of {len(proof)} lines found for {display(target)}",))
    return Verdict(name, Status.HOLDS_WITHIN_BOUND, bound, {"target": target},
                   (f"{name}: no proof of {display(target)} within {bound.max_lines} lines"
                    f" / size {bound.max_size} ({len(cl)} formulas reached)",))


def small_formulas(bound: SearchBound, max_size: int = 2):
    """Elementary formulas over the pool and (size permitting) their negations."""
    preds = [v for v in bound.variables if v.type_level >= 2]
    out = []
    for p in preds:
        args = [t for t in bound.terms if t.type_level == p.type_level - 1]
        args += [var_term(w) for w in bound.variables if w.type_level == p.type_level - 1]
        for a in dict.fromkeys(args):
            out.append(Elem(p, a))
    if max_size >= 2:
        out += [Neg(f) for f in out]
    return [f for f in out if size(f) <= min(max_size, bound.max_size)]


def wid_s_bounded(kappa: KappaClass, bound: SearchBound, candidate_size: int = 2) -> Verdict:
    """Bounded probe of ``Wid_s(kappa)``: is some formula unprovable?

    Small formulas with no proof within the bound are reported in
    ``witness['candidates']`` (status ``HoldsWithinBound``).  When every
    candidate is provable the status is ``FailsWithinBound`` and the proofs
    are attached.  Neither outcome is absolute.
    """
    cands = small_formulas(bound, candidate_size)
    b2 = bound.with_formulas(*cands)
    cl = flg_enumerate(kappa, b2)
    survivors = [f for f in cands if f not in cl]
    proofs = {f: cl.proof(f) for f in cands if f in cl}
    trace = (f"wid_s: {len(cands)} candidates, {len(survivors)} without proof "
             f"within {bound.max_lines} lines",)
    status = Status.HOLDS_WITHIN_BOUND if survivors else Status.FAILS_WITHIN_BOUND
    return Verdict("wid_s", status, b2, {"candidates": tuple(survivors), "proofs": proofs}, trace)
