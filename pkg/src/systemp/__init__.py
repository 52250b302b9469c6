"""Goedel numbering, bounded provability and lemma checking for the simple type theory P."""

from .codes import (
    CodeError, CodeTooLarge, GoedelCode, classify, decode, decode_array, decode_formula,
    encode_array, encode_formula, format_code, parse_code, sb_code, z_numeral,
)
from .figures import FIGURES, replay_figure, replay_theorem_8
from .lemmas import (
    PROPOSITIONS, RoleAssignment, RoleError, check_lemma_1, check_lemma_2, check_lemma_3,
    check_lemma_4, check_lemma_5, check_lemma_6, check_lemma_7, eval_prop, eval_Q,
    identity_13, identity_14, make_roles, relation_sweep,
)
from .proofs import (
    EMPTY_KAPPA, KappaClass, ProofArray, SearchBound, Status, Verdict, bew_bounded, bw, bw_k,
    b_k, b_rel, flg_enumerate, w_k, w_rel, wid_bounded, wid_s_bounded,
)
from .syntax import (
    Dis, Elem, Formula, Gen, Neg, ParseError, SubstitutionError, Term, TypingError, Variable,
    display, parse_formula, parse_term, render, substitute,
)

__version__ = "0.1.0"
