"""Checkers for Lemmas 1-7, the diagonal roles p, q, r, the predicate Q and
the proposition schemata (15), (16), (I), (II).

Every checker returns a :class:`~systemp.proofs.Verdict`.  Statuses follow
one rule: an outcome that depends only on decidable relations is ``Holds``
or ``Fails``; a ``Fails`` backed by a found proof is ``Fails`` too; any
outcome resting on *not* finding a proof, or positive only because a search
was run, carries the ``WithinBound`` qualifier.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import codes
from .axioms import AxiomInstance, ModusPonens, instantiate
from .codes import GoedelCode
from .proofs import (
    EMPTY_KAPPA, KappaClass, ProofArray, SearchBound, Status, Verdict, _lines_of,
    b_k, b_rel, bew_bounded, bw_k, combine, w_k, w_rel, wid_bounded,
)
from .syntax import (
    Dis, Elem, Formula, Gen, Neg, Term, TypingError, Variable, check_collision,
    display, free_variables, imp, substitute, var_term,
)

__all__ = [
    "RoleAssignment", "RoleError", "make_roles", "identity_13", "identity_14",
    "eval_Q", "eval_prop", "check_lemma_1", "check_lemma_2", "check_lemma_3",
    "check_lemma_4", "check_lemma_5", "check_lemma_6", "check_lemma_7",
    "double_negation_intro", "double_negation_elim", "PROPOSITIONS",
    "candidate_arrays", "relation_sweep",
]

X17, X19 = Variable(1), Variable(2)
V17, V19 = codes.variable_code(X17), codes.variable_code(X19)

H, F, WB, FWB, VAC = (Status.HOLDS, Status.FAILS, Status.HOLDS_WITHIN_BOUND,
                      Status.FAILS_WITHIN_BOUND, Status.VACUOUS)


def _exact(check, ok, witness=None, trace=()):
    return Verdict(check, H if ok else F, None, witness or {}, tuple(trace))


def _formula(y) -> Formula:
    if isinstance(y, Formula):
        return y
    return codes.decode_formula(y)


def _lines(x):
    lines = _lines_of(x)
    return lines if lines else None


# -- double negation templates ----------------------------------------------

class _Builder:
    """Appends justified lines to a proof array, reusing earlier lines."""

    def __init__(self, proof: ProofArray):
        self.lines = list(proof.lines)
        self.justs = list(proof.justifications) if proof.justifications else [None] * len(self.lines)
        self.index = {}
        for n, f in enumerate(self.lines, 1):
            self.index.setdefault(f, n)

    def add(self, f, just):
        if f not in self.index:
            self.lines.append(f)
            self.justs.append(just)
            self.index[f] = len(self.lines)
        return self.index[f]

    def axiom(self, schema, **b):
        return self.add(instantiate(schema, **b), AxiomInstance(schema))

    def mp(self, i, j):
        a, ij = self.lines[i - 1], self.lines[j - 1]
        assert ij == imp(a, ij.right)
        return self.add(ij.right, ModusPonens(i, j))

    def excluded_middle(self, s):
        """``~s | s`` in five lines."""
        l1 = self.axiom("II.2", p=s, q=s)
        l2 = self.axiom("II.1", p=s)
        l3 = self.axiom("II.4", p=Dis(s, s), q=s, r=Neg(s))
        return self.mp(l1, self.mp(l2, l3))

    def dn_implication(self, a):
        """``a -> ~~a`` in seven lines."""
        s = Neg(a)
        l5 = self.excluded_middle(s)
        l6 = self.axiom("II.3", p=Neg(s), q=s)
        return self.mp(l5, l6)

    def build(self):
        justs = self.justs if all(j is not None for j in self.justs) else ()
        return ProofArray(self.lines, justs)


def double_negation_intro(proof: ProofArray) -> ProofArray:
    """Extend a proof of ``a`` to a proof of ``~~a`` (at most 8 more lines)."""
    b = _Builder(proof)
    a = proof.last
    b.mp(b.index[a], b.dn_implication(a))
    out = b.build()
    assert out.last == Neg(Neg(a))
    return out


def double_negation_elim(proof: ProofArray) -> ProofArray:
    """Extend a proof of ``~~a`` to a proof of ``a``."""
    nna = proof.last
    if not (isinstance(nna, Neg) and isinstance(nna.body, Neg)):
        raise ValueError("last line is not a double negation")
    a = nna.body.body
    b = _Builder(proof)
    t = b.dn_implication(Neg(a))                       # ~a -> ~~~a
    em = b.excluded_middle(a)                          # ~a | a
    em2 = b.mp(em, b.axiom("II.3", p=Neg(a), q=a))     # a | ~a
    l = b.axiom("II.4", p=Neg(a), q=Neg(nna), r=a)
    step = b.mp(em2, b.mp(t, l))                       # a | ~~~a
    flipped = b.mp(step, b.axiom("II.3", p=a, q=Neg(nna)))   # ~~a -> a
    b.mp(b.index[nna], flipped)
    out = b.build()
    assert out.last == a
    return out


# -- Lemmas 1-4 ---------------------------------------------------------------

def check_lemma_1(y, bound: SearchBound, mode: str = "strict",
                  kappa: KappaClass = EMPTY_KAPPA) -> Verdict:
    """Wid(y) ~ Bew(Neg y), and Bew(y) ~ Wid(Neg y) at the bound.

    The first equivalence is definitional; it is checked exactly, at the
    relation level, on the arrays involved.  For the second, ``strict`` compares the searches for ``y``
    and ``~~y`` as distinct formulas; ``derived`` also converts a found
    proof of one into a proof of the other with the double-negation
    templates, charging the added lines against ``bound.max_lines``.
    """
    if mode not in ("strict", "derived"):
        raise ValueError(f"unknown mode {mode!r}")
    f = _formula(y)
    bew = bew_bounded(kappa, f, bound)
    L = bound.max_lines
    template = None
    if mode == "derived" and bew.found and len(double_negation_intro(bew.proof)) <= L:
        ext = double_negation_intro(bew.proof)
        wid_neg = Verdict("wid", H, bound, {"proof": ext, "target": Neg(Neg(f))},
                          (f"wid: proof of {len(bew.proof)} lines extended by the "
                           f"double-negation template to {len(ext)} lines",))
        template = "intro"
    else:
        wid_neg = wid_bounded(kappa, Neg(f), bound)
        if mode == "derived" and wid_neg.found and not bew.found:
            ext = double_negation_elim(wid_neg.proof)
            if len(ext) <= L:
                bew = Verdict("bew", H, bound, {"proof": ext, "target": f},
                              (f"bew: proof of ~~y extended to {len(ext)} lines",))
                template = "elim"
    same = bew.found == wid_neg.found
    first = _lemma1_first(kappa, f, [bew.proof, wid_neg.proof])
    second = Verdict(
        "lemma1.second", WB if same else FWB, bound,
        {"bew": bew.proof, "wid_neg": wid_neg.proof, "mode": mode, "template": template},
        bew.trace + wid_neg.trace
        + ((f"asymmetry at {L} lines: Bew(y)={bew.found}, Wid(Neg y)={wid_neg.found}",)
           if not same else ()))
    return Verdict("lemma1", combine([first.status, second.status]), bound,
                   {"mode": mode}, first.trace + second.trace,
                   (("first", first), ("second", second)))


def _lemma1_first(kappa, f, proofs):
    # Wid(y) and Bew(Neg y) quantify over the same predicate: check
    # xW_kappa y <=> xB_kappa Neg(y) on every array at hand
    arrays = [(f,), (Neg(f),), (Neg(Neg(f)),)] + [p.lines for p in proofs if p is not None]
    bad = [a for a in arrays if w_k(kappa, a, f) != b_k(kappa, a, Neg(f))]
    return Verdict("lemma1.first", F if bad else H, None, {"violations": bad},
                   (f"xW y <=> xB Neg(y) on {len(arrays)} arrays; Wid(y) and Bew(Neg y)"
                    " are the same search by definition",))


def _pair(x, y, kappa):
    if kappa is None:
        return b_rel(x, y), w_rel(x, y)
    return b_k(kappa, x, y), w_k(kappa, x, y)


def check_lemma_2(x, y, kappa: KappaClass | None = None) -> Verdict:
    """Not both xWy and xBy (exact)."""
    b, w = _pair(x, y, kappa)
    return _exact("lemma2", not (b and w), {"x": _lines(x), "y": _formula_or(y), "b": b, "w": w},
                  (f"xBy={b}, xWy={w}",))


def _formula_or(y):
    try:
        return _formula(y)
    except codes.CodeError:
        return None


def check_lemma_3(x, y, kappa: KappaClass | None = None) -> Verdict:
    """xBy or xWy, for x a proof of y (else vacuous)."""
    b, w = _pair(x, y, kappa)
    if not b:
        return Verdict("lemma3", VAC, None, {}, ("hypothesis xBy is false",))
    return _exact("lemma3", b or w, {"b": b, "w": w}, (f"xBy={b}, xWy={w}",))


def check_lemma_4(x, y, kappa: KappaClass | None = None) -> Verdict:
    """xWy ~ not xBy, for x a proof of y (else vacuous)."""
    b, w = _pair(x, y, kappa)
    if not b:
        return Verdict("lemma4", VAC, None, {}, ("hypothesis xBy is false",))
    return _exact("lemma4", w == (not b), {"b": b, "w": w},
                  (f"xWy={w}, not xBy={not b}",))


def candidate_arrays(pool, max_lines: int = 3):
    """Every sequence of 1..max_lines formulas drawn from ``pool``."""
    pool = tuple(pool)
    for n in range(1, max_lines + 1):
        yield from product(pool, repeat=n)


def relation_sweep(pool, kappa: KappaClass | None = None, max_lines: int = 3) -> Verdict:
    """Lemma 2 and the relation-level Lemma 1 identity on every candidate
    array over ``pool`` against every target in ``pool``."""
    pool = tuple(pool)
    pairs = not_both = identity = 0
    lemma2_bad, lemma1_bad = [], []
    for x in candidate_arrays(pool, max_lines):
        for y in pool:
            pairs += 1
            b, w = _pair(x, y, kappa)
            if b and w:
                lemma2_bad.append((x, y))
            if w != _pair(x, Neg(y), kappa)[0]:
                lemma1_bad.append((x, y))
            not_both += b or w
            identity += w
    ok = not lemma2_bad and not lemma1_bad
    return _exact("relation_sweep", ok,
                  {"pairs": pairs, "lemma2_violations": lemma2_bad[:5],
                   "lemma1_violations": lemma1_bad[:5]},
                  (f"{pairs} (x, y) pairs over a {len(pool)}-formula pool; "
                   f"{not_both} with xBy or xWy, {identity} refutations",))


# -- Lemmas 5 and 6 ---------------------------------------------------------

def _lemma_5_6(name, kappa, x, f, bound, hyp_ok, hyp_text, xb):
    if not hyp_ok:
        return Verdict(name, VAC, bound, {}, (f"hypothesis fails: {hyp_text}",))
    part_a = Verdict(f"{name}.a", VAC, bound, {},
                     ("not Bew(y) if not xBy: antecedent false since xBy holds",))
    wid = wid_bounded(kappa, f, bound)
    if wid.found:
        # not Wid(y) is false while xBy is true: the biconditional fails
        part_b = Verdict(f"{name}.b", F, wid.bound,
                         {"x": _lines(x), "refutation": wid.proof, "y": f},
                         (f"xBy={xb} and a refutation of y exists",) + wid.trace)
    else:
        part_b = Verdict(f"{name}.b", WB, wid.bound, {"y": f},
                         (f"xBy={xb}; no refutation of y",) + wid.trace)
    return Verdict(name, combine([part_a.status, part_b.status]), wid.bound,
                   dict(part_b.witness), part_a.trace + part_b.trace,
                   (("a", part_a), ("b", part_b)))


def check_lemma_5(x, y, bound: SearchBound) -> Verdict:
    """Per instance: for x a proof of y, not Bew(y) if not xBy, and
    not Wid(y) iff xBy (plain P)."""
    f = _formula(y)
    b = b_rel(x, f)
    return _lemma_5_6("lemma5", EMPTY_KAPPA, x, f, bound, b, "x is not a proof of y", b)


def check_lemma_6(kappa: KappaClass, x, y, bound: SearchBound) -> Verdict:
    """kappa-form of Lemma 5 under the hypothesis Bw_kappa(x) and last line = y."""
    f = _formula(y)
    lines = _lines(x)
    hyp = lines is not None and bw_k(kappa, lines) and lines[-1] == f
    b = hyp and b_k(kappa, lines, f)
    return _lemma_5_6("lemma6", kappa, x, f, bound, hyp,
                      "x is not a kappa-proof array ending in y", b)


# -- Lemma 7 ----------------------------------------------------------------

def _lemma7_part(name, search, kappa, g, sb, bound, label):
    vg = search(kappa, g, bound)
    vs = search(kappa, sb, bound)
    witness = {"gen": vg.proof, "sb": vs.proof}
    trace = vg.trace + vs.trace
    if vg.found:
        status = WB
        trace += (f"{label}(Gen) found: the implication holds with a false antecedent",)
    elif vs.found:
        status = FWB
        trace += (f"{label}(Sb) found while {label}(Gen) was not within the bound",)
    else:
        status = WB
        trace += (f"neither {label}(Gen) nor {label}(Sb) found",)
    return Verdict(name, status, vs.bound, witness, trace)


def check_lemma_7(kappa: KappaClass, a: Formula, v: Variable, c, bound: SearchBound):
    """(i) not Bew(Gen(v, a)) -> not Bew(a[v:=c]); (ii) the Wid analogue."""
    if isinstance(c, Variable):
        c = var_term(c)
    if c.type_level != v.type_level:
        raise TypingError(f"{v} has type {v.type_level}, the substituend type {c.type_level}")
    check_collision(a, v, c)
    g, sb = Gen(v, a), substitute(a, v, c)
    b = bound.with_formulas(g, sb, Neg(g), Neg(sb))
    if c.type_level == 1:
        b = b.with_terms(c)
    return (_lemma7_part("lemma7.i", bew_bounded, kappa, g, sb, b, "Bew"),
            _lemma7_part("lemma7.ii", wid_bounded, kappa, g, sb, b, "Wid"))


# -- roles and identity (13) ------------------------------------------------

class RoleError(ValueError):
    pass


@dataclass(frozen=True)
class RoleAssignment:
    """q and the derived p = Gen(x1, q), r = q[x2 := Z(p)]."""

    q: Formula
    p: Formula
    r: Formula
    p_code: GoedelCode
    derivation: tuple

    @property
    def gen_r(self) -> Formula:
        return Gen(X17, self.r)

    @property
    def z_p(self) -> Term:
        return codes.z_term(self.p_code)

    def describe(self):
        return {"q": display(self.q), "p": display(self.p), "r": display(self.r),
                "p_code": self.p_code.digest()}


def make_roles(q: Formula) -> RoleAssignment:
    fv = free_variables(q)
    missing = {X17, X19} - fv
    if missing:
        raise RoleError(f"q lacks the free variable(s) {', '.join(sorted(map(str, missing)))}")
    p = Gen(X17, q)
    pc = codes.encode_formula(p)
    zp = codes.z_term(pc)
    try:
        check_collision(q, X19, zp)
    except Exception as e:
        raise RoleError(str(e)) from e
    r = substitute(q, X19, zp)
    roles = RoleAssignment(q, p, r, pc, (
        "p := Gen(x1, q)",
        f"Z(p) := numeral with {codes.format_code(pc)} successors",
        "r := q[x2 := Z(p)]",
    ))
    if identity_13(roles).status is not H:
        raise RoleError("identity (13) fails")
    return roles


def identity_13(roles: RoleAssignment) -> Verdict:
    """Sb(p[19 := Z(p)]) = 17 Gen r, on codes."""
    lhs = codes.sb_code(roles.p_code, V19, codes.z_numeral(roles.p_code))
    rhs = codes.gen_code(V17, codes.encode_formula(roles.r))
    return _exact("identity13", lhs == rhs, {"lhs": lhs.digest(), "rhs": rhs.digest()},
                  ("Sb(p, 19, Z(p)) == Gen(17, r) structurally",))


def _x_code(x) -> GoedelCode:
    if isinstance(x, ProofArray):
        return x.code
    if isinstance(x, (tuple, list)):
        return codes.encode_array(x)
    return codes.to_code(x) if not isinstance(x, int) else x


def identity_14(roles: RoleAssignment, x) -> Verdict:
    """r[17 := Z(x)] equals q with 17 := Z(x) and 19 := Z(p) (the other order)."""
    zx = codes.z_term(_x_code(x))
    lhs = substitute(roles.r, X17, zx)
    rhs = substitute(substitute(roles.q, X17, zx), X19, roles.z_p)
    return _exact("identity14", lhs == rhs, {}, ("Sb(r, 17, Z(x)) == Sb(q, 17 19, Z(x) Z(p))",))


def eval_Q(kappa: KappaClass, roles: RoleAssignment, x, y) -> bool:
    """Q(x, y): not x B_kappa Sb(y[19 := Z(y)])."""
    f = _formula(y)
    if X19 not in free_variables(f):
        raise RoleError("y has no free variable 19")
    yc = codes.encode_formula(f)
    target = codes.decode_formula(codes.sb_code(yc, V19, codes.z_numeral(yc)))
    return not b_k(kappa, x, target)


# -- propositions (15), (16), (I), (II) -------------------------------------

PROPOSITIONS = ("15", "16", "I", "II")


def _tautology_check():
    """a -> (~b -> ~(a -> b)) over all valuations, as a formula of P."""
    a, b = Elem(Variable(1, 2), var_term(X17)), Elem(Variable(2, 2), var_term(X17))
    f = imp(a, imp(Neg(b), Neg(imp(a, b))))

    def ev(g, val):
        if isinstance(g, Elem):
            return val[g]
        if isinstance(g, Neg):
            return not ev(g.body, val)
        return ev(g.left, val) or ev(g.right, val)

    ok = all(ev(f, {a: va, b: vb}) for va, vb in product((False, True), repeat=2))
    return _exact("tautology", ok, {"formula": display(f)},
                  ("a -> (~b -> ~(a -> b)) true under all 4 valuations",))


def _claim_not(name, v: Verdict, what):
    """Verdict for the claim 'not <search target found>'."""
    if v.found:
        return Verdict(name, F, v.bound, {"proof": v.proof}, (f"{what} found",) + v.trace)
    return Verdict(name, WB, v.bound, {}, (f"{what} not found",) + v.trace)


def _prepare(kappa, roles, x, bound):
    zx = codes.z_term(_x_code(x))
    Fx = substitute(roles.r, X17, zx)
    G = roles.gen_r
    b = (bound.with_terms(zx, roles.z_p)
         .with_formulas(G, Neg(G), Fx, Neg(Fx)))
    return Fx, G, b, b_k(kappa, x, G)


def _implication(check, ant: bool, cons: Verdict, extra_trace=()):
    if not ant:
        return Verdict(check, H, cons.bound, {}, ("antecedent false",) + tuple(extra_trace))
    if cons.found:
        return Verdict(check, WB, cons.bound, {"proof": cons.proof},
                       ("antecedent true; consequent proven",) + cons.trace)
    return Verdict(check, FWB, cons.bound, {},
                   ("antecedent true; consequent not proven",) + cons.trace)


def _chain_I(kappa, roles, x, Fx, G, b, xb):
    q_val = eval_Q(kappa, roles, x, roles.p)
    steps = [("I.1", _exact("I.1", q_val, {}, (f"Q(x, p) = {q_val}",)))]
    if not q_val:
        return tuple(steps), ("chain I not applicable: Q(x, p) is false",)
    bew_f = bew_bounded(kappa, Fx, b)
    steps += [
        ("I.2", _exact("I.2", not xb, {}, (f"x B_kappa (17 Gen r) = {xb}",))),
        ("I.3", _tautology_check()),
        ("I.4", Verdict("I.4", WB, bew_f.bound, {}, ("instance of I.3 with its antecedent",)
                        + bew_f.trace)),
        ("I.5", _claim_not("I.5", bew_bounded(kappa, G, b), "proof of 17 Gen r")),
        ("I.6", _claim_not("I.6", bew_f, "proof of Sb(r, 17, Z(x))")),
    ]
    return tuple(steps), ()


def _chain_II(kappa, roles, x, Fx, G, b, xb):
    q_val = eval_Q(kappa, roles, x, roles.p)
    steps = [("II.1", _exact("II.1", xb, {}, (f"x B_kappa (17 Gen r) = {xb}",)))]
    if q_val:
        return tuple(steps), ("chain II not applicable: Q(x, p) is true",)
    wid_f = wid_bounded(kappa, Fx, b)
    ii5 = _claim_not("II.5", wid_f, "refutation of Sb(r, 17, Z(x))")
    steps += [
        ("II.2", _tautology_check()),
        ("II.3", Verdict("II.3", WB, wid_f.bound, {}, ("instance of II.2 with its antecedent",)
                         + wid_f.trace)),
        ("II.4", _claim_not("II.4", wid_bounded(kappa, G, b), "refutation of 17 Gen r")),
        ("II.5", ii5),
        ("II.6", Verdict("II.6", ii5.status, ii5.bound, ii5.witness,
                         ("antecedent xB(17 Gen r) true, so equals II.5",))),
    ]
    return tuple(steps), ()


def eval_prop(prop_id: str, kappa: KappaClass, roles: RoleAssignment, x,
              bound: SearchBound) -> Verdict:
    """Evaluate one instance of (15), (16), (I) or (II) at ``x``.

    The antecedent x B_kappa (17 Gen r) is decided exactly; the Bew
    consequent is searched within ``bound`` (extended with Z(x), Z(p) and
    the relevant formulas).  (I) and (II) are the negations of the (15) and
    (16) instances and carry the step record of their derivation chains.
    """
    if prop_id not in PROPOSITIONS:
        raise ValueError(f"unknown proposition {prop_id!r}")
    Fx, G, b, xb = _prepare(kappa, roles, x, bound)
    if prop_id in ("15", "I"):
        base = _implication("15", not xb, bew_bounded(kappa, Fx, b),
                            (f"x B_kappa (17 Gen r) = {xb}",))
    else:
        base = _implication("16", xb, bew_bounded(kappa, Neg(Fx), b),
                            (f"x B_kappa (17 Gen r) = {xb}",))
    witness = {"F": Fx, "gen_r": G, "xB": xb, **base.witness}
    if prop_id in ("15", "16"):
        return Verdict(prop_id, base.status, b, witness, base.trace)
    chain, note = (_chain_I if prop_id == "I" else _chain_II)(kappa, roles, x, Fx, G, b, xb)
    return Verdict(prop_id, base.status.negate(), b, witness,
                   (f"negation of the ({'15' if prop_id == 'I' else '16'}) instance",)
                   + base.trace + note,
                   (("base", base),) + chain)
