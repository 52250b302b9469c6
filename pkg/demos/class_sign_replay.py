"""Pick a class sign q, derive p and r from it, then evaluate the two
propositions and replay the derivation figures at a chosen x."""

from systemp import KappaClass, SearchBound, eval_prop, make_roles, parse_formula, replay_figure
from systemp.syntax import display

roles = make_roles(parse_formula("X1(x1) | X1(x2)"))
for k, v in roles.describe().items():
    print(f"{k:7}{v}")

kappa = KappaClass({roles.gen_r}, "{17 Gen r}")
bound = SearchBound(3)

for x, label in ((0, "x = 0 (not a proof)"), ([roles.gen_r], "x = [17 Gen r]")):
    print(f"\n== {label}")
    for pid in ("15", "16", "I", "II"):
        v = eval_prop(pid, kappa, roles, x, bound)
        print(f"  ({pid:>2}) {v.status.value:<17} {v.trace[-1] if v.trace else ''}")

print()
for line in replay_figure("fig3", kappa, roles, 0, bound).render():
    print(line)
