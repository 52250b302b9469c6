"""Signs, formulas and their codes, step by step."""

from systemp import codes
from systemp.codes import classify, encode_formula, encode_seq, format_code, parse_code, z_numeral
from systemp.syntax import display, parse_formula

f = parse_formula("X1(x1)")
c = encode_formula(f)
print("formula           ", display(f))
print("sign sequence     ", format_code(c, structural=True))
print("as a number       ", format_code(c))

# the numeral 2 is f f 0, whose code factors as 2^3 * 3^3 * 5^1
print("code of Z(2)      ", int(z_numeral(2)), "=", format_code(z_numeral(2), structural=True))
print("1080 classifies as", classify(parse_code("1080")))

# a larger formula: 'X1(x1) -> ~X1(f x2)' desugars to a disjunction
g = parse_formula("X1(x1) -> ~X1(f x2)")
gc = encode_formula(g)
print()
print("formula           ", display(g), " (core form:", display(g, sugar=False) + ")")
print("digits in its code", int(gc.digits()))

# the numeral of that code has more signs than fit in memory as a number,
# but its sign sequence is one run of successor signs and stays exact
z = z_numeral(gc)
print("Z(code) materializable?", z.materializable())
print("Z(code) run form (head)", format_code(z, structural=True)[:60], "...")
print("digit cap", codes.get_digit_cap(), "; more digits than this are shown in run form")
