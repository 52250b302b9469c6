import random

import pytest
from hypothesis import strategies as st

from systemp.syntax import Dis, Elem, Gen, Neg, Term, Variable, var_term

x1, x2 = Variable(1), Variable(2)
X1, X2 = Variable(1, 2), Variable(2, 2)
POOL = (x1, x2, X1)


def _type1_terms(rng):
    base = rng.choice([None, x1, x2])
    return Term(base, rng.randrange(3))


def random_formula(rng: random.Random, depth: int = 6):
    """A well-typed formula over x1, x2, X1 (and X1^3 at the top type)."""
    if depth <= 1 or rng.random() < 0.25:
        if rng.random() < 0.8:
            return Elem(X1, _type1_terms(rng))
        return Elem(Variable(1, 3), var_term(X1))
    k = rng.randrange(3)
    if k == 0:
        return Neg(random_formula(rng, depth - 1))
    if k == 1:
        return Dis(random_formula(rng, depth - 1), random_formula(rng, depth - 1))
    return Gen(rng.choice(POOL), random_formula(rng, depth - 1))


type1_terms = st.builds(Term, st.sampled_from([None, x1, x2]), st.integers(0, 4))
atoms = st.one_of(
    st.builds(Elem, st.just(X1), type1_terms),
    st.builds(Elem, st.just(X2), type1_terms),
    st.builds(Elem, st.just(Variable(1, 3)), st.sampled_from([var_term(X1), var_term(X2)])),
)
formulas = st.recursive(
    atoms,
    lambda inner: st.one_of(
        st.builds(Neg, inner),
        st.builds(Dis, inner, inner),
        st.builds(Gen, st.sampled_from([x1, x2, X1, X2]), inner),
    ),
    max_leaves=12,
)


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            for name, value in getattr(rep, "user_properties", ()):
                if name == "criterion" and rep.when == "call":
                    lines.append(value)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
