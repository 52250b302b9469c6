import pytest

from conftest import X1, X2, x1, x2
from systemp.axioms import (
    AXIOM_I1, AxiomInstance, Generalization, KappaMember, ModusPonens, axiom_v,
    immediate_consequence, instantiate, is_axiom, match_schema,
)
from systemp.codes import encode_array, encode_formula, encode_seq, from_int, gen_code
from systemp.proofs import (
    EMPTY_KAPPA, KappaClass, ProofArray, SearchBound, Status, Verdict, ax_code, b_k, b_rel,
    bew_bounded, bw, bw_k, combine, fl_code, flg_enumerate, validate_lines, w_k, w_rel,
    wid_bounded, wid_s_bounded,
)
from systemp.proofs import Closure
from systemp.syntax import Dis, Elem, Gen, Neg, ZERO, imp, parse_formula, var_term

P = Elem(X2, var_term(x1))
F = parse_formula("X1(x1)")
G = parse_formula("X1(0)")
A = instantiate("II.1", p=F)


# -- axiom recognition ------------------------------------------------------

def test_ii2_instance():
    f = Dis(Neg(P), Dis(P, Neg(P)))
    assert is_axiom(f) == "II.2"
    assert match_schema("II.2", f) == {"p": P, "q": Neg(P)}


def test_iii1_instance():
    f = imp(Gen(x1, P), Elem(P.pred, ZERO))
    assert is_axiom(f) == "III.1"


def test_not_ii2_when_disjuncts_swapped():
    assert is_axiom(Dis(Neg(P), Dis(Neg(P), P))) is None


def test_fixed_axioms_and_lifts():
    assert is_axiom(AXIOM_I1) == "I.1"
    assert is_axiom(axiom_v(0)) == "V"
    assert is_axiom(axiom_v(2)) == "V"
    assert is_axiom(F) is None


def test_iii1_rejects_capture():
    # all x1 ex x2 ... instantiated with c = x2 would capture
    a = parse_formula("all x1 (ex x2 X1(x1))")
    bad = imp(a, parse_formula("ex x2 X1(x2)"))
    assert match_schema("III.1", bad) is None


def test_iii2_side_condition():
    ok = instantiate("III.2", v=x1, a=F, b=G)
    assert is_axiom(ok) == "III.2"
    with pytest.raises(ValueError):
        instantiate("III.2", v=x1, a=F, b=F)


def test_iv_instance():
    f = instantiate("IV", u=X1, v=x1, a=parse_formula("X2(x1)"))
    assert is_axiom(f) == "IV"
    with pytest.raises(ValueError):
        instantiate("IV", u=X1, v=x1, a=parse_formula("X1(x1)"))


def test_immediate_consequence_shapes():
    assert immediate_consequence(G, F, imp(F, G))
    assert immediate_consequence(Gen(x1, F), F)
    assert not immediate_consequence(F, G, imp(F, G))


# -- relations on codes -----------------------------------------------------

def test_ax_code():
    assert ax_code(encode_formula(Dis(Neg(P), Dis(P, Neg(P)))))
    assert not ax_code(encode_formula(F))
    assert not ax_code(27)


def test_fl_code():
    assert fl_code(encode_formula(G), encode_formula(F), encode_formula(imp(F, G)))
    assert fl_code(gen_code(17, encode_formula(F)), encode_formula(F), encode_formula(F))
    assert not fl_code(encode_formula(F), encode_formula(G), encode_formula(Neg(F)))


def test_bw():
    assert bw(encode_array([A]))
    assert not bw(encode_seq([1]))
    assert not bw(encode_array([F]))
    k = KappaClass({F})
    assert bw_k(k, encode_array([F]))
    assert bw_k(k, [F, Gen(x1, F)])


def test_b_and_w():
    assert b_rel(encode_array([A]), encode_formula(A))
    eq = parse_formula("f x1 = 0")
    assert w_rel(encode_array([AXIOM_I1]), encode_formula(eq))
    assert not b_rel(encode_array([AXIOM_I1]), encode_formula(eq))
    k = KappaClass({Neg(F)})
    assert w_k(k, encode_array([Neg(F)]), encode_formula(F))
    assert not b_rel(from_int(1080), encode_formula(F))


def test_proof_array_rejects_forward_reference():
    with pytest.raises(ValueError):
        ProofArray((F, G), (KappaMember(), ModusPonens(2, 1)))
    with pytest.raises(ValueError):
        ProofArray(())


def test_validate_lines_reports_first_bad_line():
    k = KappaClass({F, imp(F, G)})
    lines = (F, imp(F, G), G)
    assert validate_lines(lines, (KappaMember(), KappaMember(), ModusPonens(1, 2)), k) is None
    assert validate_lines(lines, (KappaMember(), KappaMember(), ModusPonens(2, 1)), k) == 3
    assert validate_lines(lines, (AxiomInstance("II.1"), KappaMember(), ModusPonens(1, 2)), k) == 1
    assert validate_lines((F, Gen(x2, F)), (KappaMember(), Generalization(1, x1)), k) == 2


# -- verdict algebra --------------------------------------------------------

def test_negate_is_an_involution():
    for s in Status:
        assert s.negate().negate() is s
    assert Status.HOLDS.negate() is Status.FAILS
    assert Status.HOLDS_WITHIN_BOUND.negate() is Status.FAILS_WITHIN_BOUND


def test_combine_severity():
    H, WB, F_, FWB, V = (Status.HOLDS, Status.HOLDS_WITHIN_BOUND, Status.FAILS,
                         Status.FAILS_WITHIN_BOUND, Status.VACUOUS)
    assert combine([H, WB]) is WB
    assert combine([WB, FWB, H]) is FWB
    assert combine([FWB, F_]) is F_
    assert combine([V, H]) is H
    assert combine([]) is V


# -- bounded search ---------------------------------------------------------

def test_bew_of_kappa_member():
    v = bew_bounded(KappaClass({G}), encode_formula(G), SearchBound(1))
    assert v.status is Status.HOLDS and v.found
    assert len(v.proof) == 1 and v.proof.check(KappaClass({G})) is None


def test_wid_of_axiom_not_found():
    v = wid_bounded(EMPTY_KAPPA, encode_formula(A), SearchBound(2, 12))
    assert v.status is Status.HOLDS_WITHIN_BOUND and not v.found


def test_wid_via_negated_member():
    v = wid_bounded(KappaClass({Neg(G)}), G, SearchBound(1))
    assert v.status is Status.HOLDS
    assert v.proof.lines == (Neg(G),)


def test_closure_contains_axiom_pool_and_gen():
    cl = flg_enumerate(EMPTY_KAPPA, SearchBound(1, 20))
    assert axiom_v(0) in cl and AXIOM_I1 in cl
    b = SearchBound(2, 10)
    k = KappaClass({G})
    cl = flg_enumerate(k, b)
    for v in b.variables:
        assert Gen(v, G) in cl
    assert cl.cost(Gen(x1, G)) == 2


def test_closure_is_sound():
    k = KappaClass({F, imp(F, G)})
    b = SearchBound(3, 12)
    cl = flg_enumerate(k, b)
    for f in cl.formulas():
        p = cl.proof(f)
        assert p.check(k) is None and p.last == f and len(p) <= 3
        assert bw_k(k, p.lines)
    assert G in cl


def test_closure_is_monotone_in_the_bound():
    k = KappaClass({F})
    small = set(flg_enumerate(k, SearchBound(2, 10)).formulas())
    big = set(flg_enumerate(k, SearchBound(3, 10)).formulas())
    assert small <= big


def test_enumeration_is_deterministic():
    k = KappaClass({F, Neg(G)})
    b = SearchBound(3, 10)
    a = [str(f) for f in flg_enumerate(k, b).formulas()]
    assert a == [str(f) for f in Closure(k, b).formulas()]


def test_wid_s_probe():
    b = SearchBound(1, 10)
    v = wid_s_bounded(EMPTY_KAPPA, b)
    assert v.status is Status.HOLDS_WITHIN_BOUND
    assert F in v.witness["candidates"]
    for c in v.witness["candidates"]:
        assert bew_bounded(EMPTY_KAPPA, c, v.bound).status is not Status.HOLDS


def test_inconsistent_kappa_shrinks_candidates():
    k = KappaClass({G, Neg(G)})
    runs = [wid_s_bounded(k, SearchBound(L, 12)) for L in (1, 3, 5)]
    counts = [len(v.witness["candidates"]) for v in runs]
    assert counts[0] >= counts[1] >= counts[2]
    # ex falso needs an II.2 instance and two modus ponens steps: 5 lines
    assert counts[2] == 0 and runs[2].status is Status.FAILS_WITHIN_BOUND
    for f, p in runs[2].witness["proofs"].items():
        assert p.last == f and p.check(k) is None


def test_verdict_parts():
    inner = Verdict("a", Status.HOLDS)
    v = Verdict("x", Status.HOLDS, parts=(("a", inner),))
    assert v.part("a") is inner
