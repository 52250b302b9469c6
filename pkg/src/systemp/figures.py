"""Replay of the three derivation figures as verdict-annotated DAGs.

Rows are kept in the order they are displayed; every edge runs from an
earlier row to a later one.  Rows whose content is Gödel's construction
(Theorem V and the unprinted definitions) are marked ``assumed`` and carry
no verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .lemmas import (
    X17, X19, RoleAssignment, _x_code, check_lemma_6, check_lemma_7, eval_prop, eval_Q,
    identity_13, identity_14, _implication, _prepare, _claim_not,
)
from .proofs import KappaClass, SearchBound, Status, Verdict, bew_bounded, combine
from .syntax import Neg, substitute
from . import codes

__all__ = ["Node", "FigureDAG", "replay_figure", "replay_theorem_8", "FIGURES"]

FIGURES = ("fig1", "fig2", "fig3")

CONCLUSION_1 = "1: 17 Gen r is not kappa-provable"
CONCLUSION_2 = "2: Neg(17 Gen r) is not kappa-provable"


@dataclass(frozen=True)
class Node:
    id: str
    label: str
    kind: str               # evaluated | assumed | definition | conclusion
    verdict: Optional[Verdict] = None

    @property
    def status(self) -> Optional[Status]:
        return self.verdict.status if self.verdict else None


@dataclass
class FigureDAG:
    name: str
    title: str
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    sink_ids: tuple = ()

    def node(self, id) -> Node:
        for n in self.nodes:
            if n.id == id:
                return n
        raise KeyError(id)

    def order(self, id) -> int:
        return [n.id for n in self.nodes].index(id)

    def sinks(self) -> list:
        """Nodes without outgoing edges below the figure's rule."""
        return [self.node(i) for i in self.sink_ids]

    def is_acyclic(self) -> bool:
        # edges are forward in display order, which is a topological order
        return all(self.order(a) < self.order(b) for a, b in self.edges)

    def predecessors(self, id):
        return [a for a, b in self.edges if b == id]

    def records(self):
        out = []
        for n in self.nodes:
            out.append({
                "id": n.id, "label": n.label, "kind": n.kind,
                "status": n.status.value if n.status else None,
                "from": self.predecessors(n.id),
                "sink": n.id in self.sink_ids,
            })
        return out

    def render(self) -> list:
        lines = [f"{self.name}: {self.title}"]
        rule_at = min((self.order(s) for s in self.sink_ids), default=len(self.nodes))
        for i, n in enumerate(self.nodes):
            if i == rule_at:
                lines.append("  " + "-" * 40)
            st = n.status.value if n.status else n.kind
            pre = ", ".join(self.predecessors(n.id))
            lines.append(f"  {n.id:<14} {st:<17} {n.label}" + (f"   <- {pre}" if pre else ""))
        return lines


class _Builder:
    def __init__(self, name, title):
        self.dag = FigureDAG(name, title)

    def add(self, id, label, kind="assumed", verdict=None, frm=()):
        ids = {n.id for n in self.dag.nodes}
        for a in frm:
            if a not in ids:
                raise ValueError(f"edge from later or unknown row {a!r}")
        self.dag.nodes.append(Node(id, label, kind, verdict))
        self.dag.edges.extend((a, id) for a in frm)

    def done(self, sinks):
        self.dag.sink_ids = tuple(sinks)
        assert self.dag.is_acyclic()
        return self.dag


class _Context:
    """Shared evaluations so every figure sees identical verdicts."""

    def __init__(self, kappa, roles, x, bound):
        self.kappa, self.roles, self.x, self.bound = kappa, roles, x, bound
        self._cache = {}

    def get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def prop(self, pid):
        return self.get(pid, lambda: eval_prop(pid, self.kappa, self.roles, self.x, self.bound))

    def q_value(self):
        return self.get("Q", lambda: eval_Q(self.kappa, self.roles, self.x, self.roles.p))

    def q_verdict(self):
        v = self.q_value()
        return Verdict("8.1", Status.HOLDS if v else Status.FAILS, None, {"Q": v},
                       (f"Q(x, p) = {v}",))

    def row_9_10(self, which):
        # (9)/(10) at y = p, computed from q directly: Sb(q, 17 19, Z(x) Z(p))
        def run():
            k, roles = self.kappa, self.roles
            Fx, G, b, xb = _prepare(k, roles, self.x, self.bound)
            zx = codes.z_term(_x_code(self.x))
            direct = substitute(substitute(roles.q, X17, zx), X19, roles.z_p)
            ant = not xb if which == "9" else xb
            target = direct if which == "9" else Neg(direct)
            return _implication(which, ant, bew_bounded(k, target, b))
        return self.get(("row", which), run)

    def conclusion(self, neg):
        def run():
            Fx, G, b, xb = _prepare(self.kappa, self.roles, self.x, self.bound)
            target = Neg(G) if neg else G
            return _claim_not(CONCLUSION_2 if neg else CONCLUSION_1,
                              bew_bounded(self.kappa, target, b),
                              "proof of " + ("Neg(17 Gen r)" if neg else "17 Gen r"))
        return self.get(("concl", neg), run)

    def lemma6(self):
        def run():
            Fx, G, b, xb = _prepare(self.kappa, self.roles, self.x, self.bound)
            return check_lemma_6(self.kappa, self.x, G, b)
        return self.get("lemma6", run)

    def lemma7(self):
        def run():
            zx = codes.z_term(_x_code(self.x))
            i, ii = check_lemma_7(self.kappa, self.roles.r, X17, zx, self.bound)
            return Verdict("lemma7", combine([i.status, ii.status]), i.bound, {},
                           i.trace + ii.trace, (("i", i), ("ii", ii)))
        return self.get("lemma7", run)


def _implies(check, ant: Verdict, cons: Verdict) -> Verdict:
    """Row 'A -> B' where A is decidable and B already evaluated."""
    if ant.status is Status.FAILS:
        return Verdict(check, Status.HOLDS, None, {}, ("antecedent false",))
    return Verdict(check, cons.status, cons.bound, {}, ("antecedent true",) + cons.trace)


def replay_figure(fig: str, kappa: KappaClass, roles: RoleAssignment, x,
                  bound: SearchBound, _ctx: _Context | None = None) -> FigureDAG:
    """Build the DAG of ``fig1``, ``fig2`` or ``fig3`` with verdicts attached."""
    fig = {"1": "fig1", "2": "fig2", "3": "fig3"}.get(str(fig), fig)
    if fig not in FIGURES:
        raise ValueError(f"unknown figure {fig!r}")
    c = _ctx or _Context(kappa, roles, x, bound)
    p15, p16 = c.prop("15"), c.prop("16")
    if fig in ("fig1", "fig2"):
        title = ("from Theorem V to conclusions 1 and 2" if fig == "fig1"
                 else "derivation of (15) and (16)")
        b = _Builder(fig, title)
        b.add("(1)", "row (1)")
        b.add("(2)", "row (2)")
        b.add("(3)", "R(x1..xn) -> Bew_k[Sb(r, u.., Z(x)..)]  (Theorem V)")
        b.add("(4)", "not R(x1..xn) -> Bew_k[Neg Sb(r, u.., Z(x)..)]  (Theorem V)")
        for r in ("5", "6", "6.1", "7", "8"):
            b.add(f"({r})", f"row ({r})", "assumed")
        b.add("(8.1)", "Q(x,y) == not x B_k Sb(y, 19, Z(y))", "evaluated", c.q_verdict())
        b.add("Q->9", "Q(x,y) -> [not xB_k Sb(y,19,Z(y)) -> Bew_k Sb(q, 17 19, Z(x) Z(y))]",
              "evaluated", _implies("Q->9", c.q_verdict(), c.row_9_10("9")), ("(3)", "(8.1)"))
        nq = Verdict("not Q", Status.FAILS if c.q_value() else Status.HOLDS, None, {}, ())
        b.add("notQ->10", "not Q(x,y) -> [xB_k Sb(y,19,Z(y)) -> Bew_k Neg Sb(q, 17 19, Z(x) Z(y))]",
              "evaluated", _implies("notQ->10", nq, c.row_9_10("10")), ("(4)", "(8.1)"))
        b.add("(9)", "not xB_k Sb(y,19,Z(y)) -> Bew_k Sb(q, 17 19, Z(x) Z(y))", "evaluated",
              c.row_9_10("9"), ("Q->9",))
        b.add("(10)", "xB_k Sb(y,19,Z(y)) -> Bew_k Neg Sb(q, 17 19, Z(x) Z(y))", "evaluated",
              c.row_9_10("10"), ("notQ->10",))
        b.add("(11)", "p = 17 Gen q", "definition")
        b.add("(12)", "r = Sb(q, 19, Z(p))", "definition")
        b.add("(11),(12)->(13)", "(11), (12) give (13)", "assumed", None, ("(11)", "(12)"))
        b.add("(12)->(14)", "(12) gives (14)", "assumed", None, ("(12)",))
        b.add("(13)", "Sb(p, 19, Z(p)) = 17 Gen r", "evaluated", identity_13(roles),
              ("(11),(12)->(13)",))
        b.add("(14)", "Sb(r, 17, Z(x)) = Sb(q, 17 19, Z(x) Z(p))", "evaluated",
              identity_14(roles, x), ("(12)->(14)",))
        b.add("->15", "(13), (14), (9) give (15)", "evaluated", p15, ("(13)", "(14)", "(9)"))
        b.add("->16", "(13), (14), (10) give (16)", "evaluated", p16, ("(13)", "(14)", "(10)"))
        b.add("(15)", "not xB_k(17 Gen r) -> Bew_k Sb(r, 17, Z(x))", "evaluated", p15, ("->15",))
        b.add("(16)", "xB_k(17 Gen r) -> Bew_k Neg Sb(r, 17, Z(x))", "evaluated", p16, ("->16",))
        if fig == "fig2":
            return b.done(("(15)", "(16)"))
        b.add("(15)->1", "(15) gives conclusion 1", "assumed", None, ("(15)",))
        b.add("(16)->2", "(16) gives conclusion 2", "assumed", None, ("(16)",))
        b.add("1.", CONCLUSION_1, "conclusion", c.conclusion(False), ("(15)->1",))
        b.add("2.", CONCLUSION_2, "conclusion", c.conclusion(True), ("(16)->2",))
        return b.done(("1.", "2."))

    p1, p2 = c.prop("I"), c.prop("II")
    b = _Builder(fig, "(15) and (16) evaluated false")
    for r in ("1", "2", "3", "4"):
        b.add(f"({r})", f"row ({r})", "assumed")
    for r in ("5", "6", "6.1", "6.2", "6.2.1", "7", "7.1"):
        b.add(f"({r})", f"row ({r})", "definition")
    b.add("Lemma 6", "Lemma 6 at x, y = 17 Gen r", "evaluated", c.lemma6(),
          ("(5)", "(6)", "(6.1)", "(6.2)", "(6.2.1)"))
    b.add("Lemma 7", "Lemma 7 at a = r, v = 17, c = Z(x)", "evaluated", c.lemma7(),
          ("(7)", "(7.1)"))
    b.add("(8)", "row (8)", "assumed")
    b.add("(8.1)", "Q(x,y) == not x B_k Sb(y, 19, Z(y))", "evaluated", c.q_verdict())
    b.add("(11)", "p = 17 Gen q", "definition")
    b.add("(12)", "r = Sb(q, 19, Z(p))", "definition")
    b.add("(13)", "Sb(p, 19, Z(p)) = 17 Gen r", "evaluated", identity_13(roles),
          ("(11)", "(12)"))
    nq = Verdict("not Q", Status.FAILS if c.q_value() else Status.HOLDS, None, {}, ())
    src = ("Lemma 6", "Lemma 7", "(8.1)", "(13)")
    b.add("Q->I", "Q(x,y) -> not (15)", "evaluated", _implies("Q->I", c.q_verdict(), p1), src)
    b.add("notQ->II", "not Q(x,y) -> not (16)", "evaluated", _implies("notQ->II", nq, p2), src)
    b.add("(I)", "not [not xB_k(17 Gen r) -> Bew_k Sb(r, 17, Z(x))]", "evaluated", p1,
          ("Q->I",))
    b.add("(II)", "not [xB_k(17 Gen r) -> Bew_k Neg Sb(r, 17, Z(x))]", "evaluated", p2,
          ("notQ->II",))
    b.add("(15) is false", "(15) is false", "conclusion", p1, ("(I)",))
    b.add("(16) is false", "(16) is false", "conclusion", p2, ("(II)",))
    return b.done(("(15) is false", "(16) is false"))


def replay_theorem_8(kappa, roles, x, bound) -> FigureDAG:
    """Stated dependencies of Theorem 8, each node with its verdict."""
    c = _Context(kappa, roles, x, bound)
    b = _Builder("thm8", "dependencies of Theorem 8")
    b.add("Lemma 6", "Lemma 6 at x, y = 17 Gen r", "evaluated", c.lemma6())
    b.add("Lemma 7", "Lemma 7 at a = r, v = 17, c = Z(x)", "evaluated", c.lemma7())
    b.add("(8.1)", "Q(x, p)", "evaluated", c.q_verdict())
    b.add("(I)", "not (15)", "evaluated", c.prop("I"), ("Lemma 6", "Lemma 7", "(8.1)"))
    b.add("(II)", "not (16)", "evaluated", c.prop("II"), ("Lemma 6", "Lemma 7", "(8.1)"))
    conclusions = Verdict("no-proof", combine([c.prop("I").status, c.prop("II").status]),
                          bound, {}, ("(I) and (II) together",))
    b.add("no VI", "Theorem VI's proof blocked", "evaluated", conclusions, ("(I)", "(II)"))
    b.add("Theorem 8", "Theorem 8 (not adjudicated)", "assumed", None, ("no VI",))
    return b.done(("Theorem 8",))
