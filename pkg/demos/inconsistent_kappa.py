"""With an inconsistent class of extra axioms the per-instance reading of
the provability/refutability lemma breaks, and the checker says so."""

from systemp import KappaClass, SearchBound, check_lemma_2, check_lemma_6, parse_formula
from systemp.syntax import Neg, display

G = parse_formula("X1(0)")
kappa = KappaClass({G, Neg(G)}, "{G, ~G}")

x = [G]
print("kappa:", ", ".join(display(f) for f in kappa.sorted()))
print("x    :", [display(f) for f in x], " (a one-line kappa-proof of G)")

v2 = check_lemma_2(x, G, kappa)
print("\nnot both xBy and xWy:", v2.status.value, "-", v2.trace[0])

v6 = check_lemma_6(kappa, x, G, SearchBound(1))
print("\nkappa-form of the refutation lemma:", v6.status.value)
for line in v6.trace:
    print("  ", line)
print("witness refutation:")
for line in v6.witness["refutation"].render():
    print("  ", line)
