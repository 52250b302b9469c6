import itertools

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import X1, formulas, x1
from systemp import codes
from systemp.codes import (
    CodeError, CodeTooLarge, GoedelCode, classify, decode, decode_array, decode_formula,
    dis_code, encode_array, encode_formula, encode_seq, format_code, from_int, gen_code,
    gl, is_formula_code, is_variable_code, neg_code, parse_code, sb_code, seq_len, star,
    variable_code, variable_from_code, z_numeral,
)
from systemp.syntax import Elem, Neg, SymbolicCount, Term, Variable, parse_formula, var_term


def oracle_items(n):
    """Exponents of consecutive primes, via sympy's factorization."""
    f = sympy.factorint(n)
    primes = list(sympy.primerange(2, max(f) + 1)) if f else []
    return [f.get(p, 0) for p in primes]


def test_fixed_vectors():
    assert int(encode_seq([5])) == 32
    assert int(encode_seq([3, 1])) == 24
    assert int(encode_seq([3, 3, 1])) == 1080
    assert int(z_numeral(0)) == 2
    assert int(z_numeral(1)) == 24
    assert int(z_numeral(2)) == 1080


def test_factor_1080_is_numeral_two():
    c = from_int(1080)
    assert decode(c) == [3, 3, 1]
    assert classify(c) == ("numeral", 2)


def test_54():
    assert decode(from_int(54)) == [1, 3]


def test_gap_rejected():
    with pytest.raises(CodeError, match="prime 2"):
        from_int(27)
    with pytest.raises(CodeError):
        from_int(2 * 7)   # 3 is skipped
    with pytest.raises(CodeError):
        encode_seq([])
    with pytest.raises(CodeError):
        encode_seq([3, 0, 1])


def test_item_access():
    assert gl(1, 24) == 3
    assert gl(2, 24) == 1
    assert gl(3, 24) == 0
    assert gl(0, 24) == 0
    assert seq_len(24) == 2


def test_star_and_connectives():
    assert star(encode_seq([1]), encode_seq([3])) == encode_seq([1, 3])
    assert int(star(encode_seq([1]), encode_seq([3]))) == 54
    y = encode_seq([289, 11, 17, 13])
    assert neg_code(y) == encode_seq([5, 11, 289, 11, 17, 13, 13])
    assert seq_len(neg_code(y)) == seq_len(y) + 3
    assert dis_code(y, y) == encode_seq([11, 289, 11, 17, 13, 13, 7, 11, 289, 11, 17, 13, 13])
    assert gen_code(17, y) == encode_seq([17, 9, 11, 289, 11, 17, 13, 13])
    with pytest.raises(CodeError):
        neg_code(encode_seq([3, 1]))
    with pytest.raises(CodeError):
        gen_code(15, y)


def test_variable_codes():
    assert variable_code(x1) == 17
    assert variable_code(Variable(2)) == 19
    assert variable_code(X1) == 289
    assert variable_code(Variable(1, 3)) == 17 ** 3
    assert is_variable_code(17, 1)
    assert is_variable_code(289, 2)
    assert not is_variable_code(289, 1)
    assert not is_variable_code(15, 1)
    assert not is_variable_code(13)
    assert variable_from_code(23 ** 2) == Variable(3, 2)
    assert variable_from_code(17 * 19) is None


def test_formula_code_mapping():
    f = parse_formula("X1(x1)")
    assert encode_formula(f) == encode_seq([289, 11, 17, 13])
    assert is_formula_code(encode_seq([289, 11, 17, 13]))
    assert not is_formula_code(encode_seq([3, 1]))
    assert not is_formula_code(encode_seq([289, 11, 17]))


def test_sb_code_examples():
    a = encode_formula(parse_formula("X1(x1)"))
    assert sb_code(a, 17, z_numeral(0)) == encode_formula(parse_formula("X1(0)"))
    assert sb_code(a, 17, encode_seq([17])) == a
    g = gen_code(17, a)
    assert sb_code(g, 17, z_numeral(3)) == g


def test_array_codes():
    lines = [parse_formula("X1(x1)"), parse_formula("~X1(x1)")]
    c = encode_array(lines)
    assert decode_array(c) == tuple(lines)
    kind, got = classify(c)
    assert kind == "array" and got == tuple(lines)
    # a formula code is not an array whose items are formulas
    assert classify(encode_formula(lines[0]))[0] == "formula"


def test_structural_vs_decimal_text():
    c = encode_formula(parse_formula("X1(x1)"))
    assert format_code(c, structural=True) == "[289,11,17,13]"
    assert parse_code("[289,11,17,13]") == c
    assert parse_code(format_code(c)) == c
    assert parse_code("[3*2,1]") == encode_seq([3, 3, 1])


def test_structural_equality_matches_magnitude():
    a = encode_seq([3, 3, 1])
    b = GoedelCode([(3, 2), (1, 1)])
    assert a == b and hash(a) == hash(b)
    assert int(a) == int(b)


def test_symbolic_numeral_never_materializes():
    big = encode_formula(parse_formula("X1(x1) | X1(x2)"))
    z = z_numeral(big)
    assert not z.materializable()
    with pytest.raises(CodeTooLarge):
        z.magnitude
    # the length is an exact (if large) integer; only the magnitude is out of reach
    assert seq_len(z) == int(big) + 1
    assert gl(1, z) == 3


def test_symbolic_runs_do_not_merge():
    big = encode_formula(parse_formula("X1(x1) | X1(x2)"))
    s = SymbolicCount(big)
    with pytest.raises(CodeTooLarge):
        GoedelCode([(3, s), (3, s)])


def test_digit_cap_switches_text_form():
    c = encode_formula(parse_formula("X1(x1)"))
    old = codes.get_digit_cap()
    try:
        codes.set_digit_cap(2)
        assert format_code(c).startswith("[")
        with pytest.raises(CodeTooLarge):
            c.magnitude
    finally:
        codes.set_digit_cap(old)
    assert format_code(c).isdigit()


def test_arithmetic_against_factorization():
    alphabet = (1, 3, 5, 7, 9, 11, 13)
    for n in range(1, 4):
        for seq in itertools.product(alphabet, repeat=n):
            c = encode_seq(seq)
            m = int(c)
            ex = oracle_items(m)
            assert ex == list(seq)
            assert seq_len(c) == len(ex)
            for i in range(0, n + 2):
                want = ex[i - 1] if 1 <= i <= len(ex) else 0
                assert gl(i, c) == want


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 40), min_size=1, max_size=5),
       st.lists(st.integers(1, 40), min_size=1, max_size=5))
def test_star_matches_factorization(a, b):
    c = star(encode_seq(a), encode_seq(b))
    assert oracle_items(int(c)) == a + b


@settings(max_examples=300, deadline=None)
@given(formulas)
def test_formula_code_roundtrip(f):
    c = encode_formula(f)
    assert decode_formula(c) == f
    assert is_formula_code(c)


@settings(max_examples=100, deadline=None)
@given(formulas)
def test_neg_code_commutes_with_encoding(f):
    assert neg_code(encode_formula(f)) == encode_formula(Neg(f))


def test_huge_numeral_formula_roundtrip():
    f = parse_formula("X1(x1) | X1(x2)")
    t = Term(None, SymbolicCount(encode_formula(f)))
    g = Elem(X1, t)
    assert decode_formula(encode_formula(g)) == g
    assert var_term(x1) != t


def test_codes_past_the_interpreter_digit_limit():
    # about 6000 digits: above CPython's default int/str limit, below the cap
    c = encode_seq([3] * 300 + [1] * 1200)
    assert 4300 < c.digits() < codes.get_digit_cap()
    text = format_code(c)
    assert text.isdigit()
    assert parse_code(text) == c
    # a numeral with that many successors survives render/parse
    f = Elem(X1, Term(None, int(c)))
    from systemp.syntax import render
    assert parse_formula(render(f)) == f
