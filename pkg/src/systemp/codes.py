"""Gödel numbering of signs, formulas and proof arrays.

A :class:`GoedelCode` stands for the natural number ``prod p_i ** n_i`` over
consecutive primes ``2, 3, 5, ...``.  It is stored structurally as a
run-length encoded item sequence; an item is a sign number (``int``) or a
nested code, and a run count may be symbolic.  The magnitude is produced
only on request and only below a digit cap, so codes such as
``Sb(r^17_Z(x))`` for a proof array ``x`` remain first-class values.

Sign numbers: ``0 -> 1, f -> 3, ~ -> 5, | -> 7, all -> 9, ( -> 11, ) -> 13``;
the k-th variable of type n is ``p_k ** n`` with ``p_k`` the k-th prime
above 13 (so ``x1 -> 17``, ``x2 -> 19``, ``X1 -> 289``).
"""

from __future__ import annotations

import bisect
import hashlib
import math
import re
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from ._ints import int_text, text_int
from .syntax import (
    Dis, Elem, Formula, Gen, Neg, SymbolicCount, Term, TypingError, Variable,
    free_variables, substitute,
)

__all__ = [
    "ZERO_SIGN", "SUCC", "NEG", "DIS", "GEN", "LPAREN", "RPAREN",
    "CodeError", "CodeTooLarge", "GoedelCode", "SymbolicNumeral",
    "DEFAULT_DIGIT_CAP", "get_digit_cap", "set_digit_cap",
    "encode_seq", "from_int", "encode_formula", "encode_term", "encode_array",
    "decode", "decode_formula", "decode_term", "decode_array", "classify",
    "gl", "seq_len", "star", "neg_code", "dis_code", "gen_code", "z_numeral", "z_term",
    "to_code",
    "sb_code", "is_formula_code", "is_variable_code", "variable_code",
    "variable_from_code", "nth_prime", "parse_code", "format_code",
    "compare_magnitudes",
]

ZERO_SIGN, SUCC, NEG, DIS, GEN, LPAREN, RPAREN = 1, 3, 5, 7, 9, 11, 13

DEFAULT_DIGIT_CAP = 10_000
# nested codes up to this many digits are stored as plain ints; fixed so
# that equality and hashing never depend on the user-facing cap
INLINE_DIGITS = 10_000
_MAX_ITEMS = 200_000
_LOG10: list[float] = []

_cap_lock = threading.Lock()
_digit_cap = DEFAULT_DIGIT_CAP


def get_digit_cap() -> int:
    return _digit_cap


def set_digit_cap(cap: int) -> None:
    """Digits above which magnitudes are neither materialized nor printed."""
    global _digit_cap
    if cap < 1:
        raise ValueError("digit cap must be positive")
    with _cap_lock:
        _digit_cap = cap


class CodeError(ValueError):
    pass


class CodeTooLarge(CodeError):
    pass


# -- primes -----------------------------------------------------------------

_primes: list[int] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
_primes_lock = threading.Lock()


def _ensure_primes(n: int) -> None:
    if len(_primes) >= n:
        return
    with _primes_lock:
        limit = max(64, int(n * (math.log(n + 2) + math.log(math.log(n + 3)) + 2)))
        while True:
            sieve = bytearray([1]) * (limit + 1)
            sieve[0:2] = b"\x00\x00"
            for i in range(2, math.isqrt(limit) + 1):
                if sieve[i]:
                    sieve[i * i::i] = bytearray(len(range(i * i, limit + 1, i)))
            found = [i for i, ok in enumerate(sieve) if ok]
            if len(found) >= n:
                _primes[:] = found
                return
            limit *= 2


def nth_prime(i: int) -> int:
    """The i-th prime, 1-based (``nth_prime(1) == 2``)."""
    _ensure_primes(i)
    return _primes[i - 1]


def _log10_prime(i: int) -> float:
    # 0-based index
    if i >= len(_LOG10):
        _ensure_primes(i + 1)
        _LOG10.extend(math.log10(p) for p in _primes[len(_LOG10):max(i + 1, 2 * len(_LOG10))])
    return _LOG10[i]


def _prime_index(p: int) -> int:
    """0-based index of prime p, or -1 if p is not prime."""
    if p < 2:
        return -1
    while _primes[-1] < p:
        _ensure_primes(len(_primes) * 2)
    i = bisect.bisect_left(_primes, p)
    return i if _primes[i] == p else -1


def variable_code(v: Variable) -> int:
    return nth_prime(6 + v.base_index) ** v.type_level


def _iroot(x: int, n: int) -> int:
    if n == 1:
        return x
    lo, hi = 0, 1 << (x.bit_length() // n + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** n <= x:
            lo = mid
        else:
            hi = mid - 1
    return lo


@lru_cache(maxsize=4096)
def variable_from_code(x: int) -> Variable | None:
    """The variable with sign number ``x``, or None."""
    if not isinstance(x, int) or x < 17 or x.bit_length() > 4096:
        return None
    for n in range(1, x.bit_length() + 1):
        r = _iroot(x, n)
        if r < 17:
            break
        if r ** n == x and r.bit_length() <= 32:
            i = _prime_index(r)
            if i >= 6:
                return Variable(i - 5, n)
    return None


def is_variable_code(x, type_level: int | None = None) -> bool:
    v = variable_from_code(x) if isinstance(x, int) else None
    return v is not None and (type_level is None or v.type_level == type_level)


# -- the code value ---------------------------------------------------------

def _count_key(c):
    return c if isinstance(c, int) else ("sym", c.code, c.offset)


class GoedelCode:
    """A sequence code ``prod p_i ** items[i]`` in run-length form.

    ``runs`` is a tuple of ``(item, count)`` pairs; ``item`` is an ``int``
    >= 1 or a nested :class:`GoedelCode` too large to inline, ``count`` an
    ``int`` >= 1 or a :class:`~systemp.syntax.SymbolicCount`.  Adjacent
    equal items are merged, so equal values have equal runs.
    """

    __slots__ = ("runs", "_hash", "_digits", "_mag", "_text", "__weakref__")

    def __init__(self, runs: Iterable[tuple]):
        out: list[list] = []
        for item, count in runs:
            if isinstance(count, int) and count == 0:
                continue
            if isinstance(count, int) and count < 0:
                raise CodeError("negative run length")
            item = _as_item(item)
            if isinstance(item, int) and item < 1:
                raise CodeError("sequence items must be >= 1")
            if out and out[-1][0] == item:
                if not isinstance(count, int) and not isinstance(out[-1][1], int):
                    raise CodeTooLarge("adjacent runs with two symbolic lengths")
                out[-1][1] = out[-1][1] + count
            else:
                out.append([item, count])
        self.runs = tuple((i, c) for i, c in out)
        self._hash = None
        self._digits = None
        self._mag = None
        self._text = None

    # equality is structural; runs are canonical
    def __eq__(self, other):
        if not isinstance(other, GoedelCode):
            return NotImplemented
        if self is other:
            return True
        if hash(self) != hash(other):
            return False
        return self.runs == other.runs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple((i, _count_key(c)) for i, c in self.runs))
        return self._hash

    def __repr__(self):
        return f"GoedelCode({format_code(self, structural=True, limit=200)})"

    def __int__(self):
        return self.magnitude

    def __len__(self):
        n = seq_len(self)
        if not isinstance(n, int):
            raise CodeTooLarge("symbolic length")
        return n

    def is_empty(self):
        return not self.runs

    def items(self) -> Iterator:
        """Iterate items; only for codes of materializable length."""
        for item, count in self.runs:
            if not isinstance(count, int) or count > 10 ** 7:
                raise CodeTooLarge("run too long to enumerate")
            for _ in range(count):
                yield item

    def digits(self) -> float:
        """Decimal digits of the magnitude (``inf`` when hopelessly large)."""
        if self._digits is None:
            self._digits = _estimate_digits(self)
        return self._digits

    def materializable(self, cap: int | None = None) -> bool:
        return self.digits() <= (get_digit_cap() if cap is None else cap)

    @property
    def magnitude(self) -> int:
        """The natural number itself; raises :class:`CodeTooLarge` above the cap."""
        if self._mag is None and self.digits() > get_digit_cap():
            raise CodeTooLarge(f"code has ~{self.digits():.3g} digits (cap {get_digit_cap()})")
        return _exact(self)

    def try_magnitude(self, cap: int | None = None):
        return self.magnitude if self.materializable(cap) else None

    def digest(self) -> str:
        """Short stable fingerprint of the structural form."""
        return hashlib.sha256(_struct_text(self).encode()).hexdigest()[:12]


def _exact(code: GoedelCode) -> int:
    if code._mag is None:
        code._mag = _materialize(code)
    return code._mag


def _as_item(item):
    if isinstance(item, GoedelCode):
        return _exact(item) if item.digits() <= INLINE_DIGITS else item
    if isinstance(item, bool) or not isinstance(item, int):
        raise CodeError(f"bad sequence item {item!r}")
    return item


def _estimate_digits(code: GoedelCode) -> float:
    total = 0
    for _, count in code.runs:
        if not isinstance(count, int):
            return math.inf
        total += count
    # every item contributes at least log10(p_i) digits
    if total > _MAX_ITEMS:
        return math.inf
    if total == 0:
        return 1.0
    acc = 0.0
    idx = 0
    for item, count in code.runs:
        if isinstance(item, GoedelCode):
            return math.inf
        if item.bit_length() > 900:
            return math.inf
        e = float(item)
        for j in range(idx, idx + count):
            acc += e * _log10_prime(j)
        idx += count
        if acc > 10 ** 12:
            return math.inf
    return math.floor(acc) + 1.0


def _materialize(code: GoedelCode) -> int:
    out = 1
    idx = 0
    for item, count in code.runs:
        _ensure_primes(idx + count)
        for j in range(idx, idx + count):
            out *= _primes[j] ** item
        idx += count
    return out


# -- construction and decomposition ----------------------------------------

def encode_seq(items: Sequence) -> GoedelCode:
    """Code of a nonempty sequence of items (ints >= 1 or codes)."""
    items = list(items)
    if not items:
        raise CodeError("empty sequence has no code")
    for it in items:
        if isinstance(it, int) and not isinstance(it, bool) and it < 1:
            raise CodeError("zero item: sequence codes have no gaps")
    return GoedelCode((it, 1) for it in items)


def _remove(n: int, p: int) -> tuple[int, int]:
    if n % p:
        return n, 0
    powers = [(p, 1)]
    while True:
        q, k = powers[-1]
        sq = q * q
        if sq > n or n % sq:
            break
        powers.append((sq, 2 * k))
    e = 0
    for q, k in reversed(powers):
        if n % q == 0:
            n //= q
            e += k
    return n, e


def from_int(n: int) -> GoedelCode:
    """Factor a magnitude into its sequence code."""
    if n < 2:
        raise CodeError(f"{n} is not a sequence code (magnitude {n})")
    items = []
    i = 0
    while n > 1:
        p = nth_prime(i + 1)
        n, e = _remove(n, p)
        if e == 0:
            raise CodeError(f"not a sequence code: exponent of prime {p} is 0")
        items.append(e)
        i += 1
    code = GoedelCode((e, 1) for e in items)
    return code


def _runs_of(x) -> tuple:
    if isinstance(x, GoedelCode):
        return x.runs
    if isinstance(x, int):
        return from_int(x).runs
    raise CodeError(f"not a code: {x!r}")


def to_code(x) -> GoedelCode:
    if isinstance(x, GoedelCode):
        return x
    if isinstance(x, int):
        return from_int(x)
    if isinstance(x, Formula):
        return encode_formula(x)
    raise CodeError(f"not a code: {x!r}")


def seq_len(x):
    """Number of items; an ``int`` or a :class:`SymbolicCount`."""
    total = 0
    sym = None
    for _, c in _runs_of(x):
        if isinstance(c, int):
            total += c
        elif sym is None:
            sym = c
        else:
            raise CodeTooLarge("length involves several symbolic runs")
    return total if sym is None else sym + total


def gl(n: int, x):
    """The n-th item (1-based); 0 when ``n == 0`` or ``n > l(x)``."""
    if n <= 0:
        return 0
    pos = 0
    for item, c in _runs_of(x):
        if isinstance(c, SymbolicCount) or n <= pos + c:
            return item
        pos += c
    return 0


def star(x, y) -> GoedelCode:
    """Concatenation of item sequences."""
    return GoedelCode(_runs_of(x) + _runs_of(y))


def _seq(*parts) -> GoedelCode:
    runs = []
    for p in parts:
        if isinstance(p, int):
            runs.append((p, 1))
        else:
            runs.extend(_runs_of(p))
    return GoedelCode(runs)


def _require_formula(x):
    if not is_formula_code(x):
        raise CodeError("operand is not a formula code")


def neg_code(y) -> GoedelCode:
    _require_formula(y)
    return _seq(NEG, LPAREN, y, RPAREN)


def dis_code(x, y) -> GoedelCode:
    _require_formula(x)
    _require_formula(y)
    return _seq(LPAREN, x, RPAREN, DIS, LPAREN, y, RPAREN)


def gen_code(v: int, y) -> GoedelCode:
    if not is_variable_code(v):
        raise CodeError(f"{v} is not a variable code")
    _require_formula(y)
    return _seq(v, GEN, LPAREN, y, RPAREN)


@dataclass(frozen=True)
class SymbolicNumeral:
    """The numeral ``f...f0`` with ``count`` successors."""

    count: object

    def term(self) -> Term:
        return Term(None, self.count)

    def code(self) -> GoedelCode:
        return GoedelCode([(SUCC, self.count), (ZERO_SIGN, 1)])

    def sign_length(self):
        return self.count + 1


def _normalize_count(n):
    if isinstance(n, bool):
        raise CodeError("bad numeral count")
    if isinstance(n, int):
        if n < 0:
            raise CodeError("negative numeral")
        return n
    if isinstance(n, SymbolicCount):
        return n
    code = to_code(n)
    if code.digits() <= INLINE_DIGITS:
        return _as_item(code)
    return SymbolicCount(code, 0)


def z_numeral(n) -> GoedelCode:
    """Code of the numeral ``Z(n)``; ``n`` may be an int or any code."""
    return SymbolicNumeral(_normalize_count(n)).code()


def z_term(n) -> Term:
    """The numeral ``Z(n)`` as a term (symbolic when ``n`` is too large)."""
    return SymbolicNumeral(_normalize_count(n)).term()


# -- formulas <-> codes -----------------------------------------------------

def _term_runs(t: Term):
    if t.succs != 0:
        yield SUCC, t.succs
    yield (ZERO_SIGN if t.base is None else variable_code(t.base)), 1


def _formula_runs(f: Formula):
    # iterative to cope with deep formulas
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, tuple):
            yield g
        elif isinstance(g, Elem):
            yield variable_code(g.pred), 1
            yield LPAREN, 1
            yield from _term_runs(g.arg)
            yield RPAREN, 1
        elif isinstance(g, Neg):
            stack.extend([(RPAREN, 1), g.body, (LPAREN, 1), (NEG, 1)])
        elif isinstance(g, Dis):
            stack.extend([(RPAREN, 1), g.right, (LPAREN, 1), (DIS, 1), (RPAREN, 1),
                          g.left, (LPAREN, 1)])
        else:
            stack.extend([(RPAREN, 1), g.body, (LPAREN, 1), (GEN, 1),
                          (variable_code(g.var), 1)])


def encode_formula(f: Formula) -> GoedelCode:
    code = GoedelCode(_formula_runs(f))
    _remember(code, f)
    return code


def encode_term(t: Term) -> GoedelCode:
    return GoedelCode(_term_runs(t))


def encode_array(lines: Sequence) -> GoedelCode:
    """Code of a proof array: the sequence of its formula codes."""
    if not lines:
        raise CodeError("a proof array has at least one line")
    return GoedelCode((encode_formula(ln) if isinstance(ln, Formula) else to_code(ln), 1)
                      for ln in lines)


_recent: dict = {}
_RECENT_MAX = 200_000


def _remember(code, f):
    if len(_recent) > _RECENT_MAX:
        _recent.clear()
    key = code.runs
    _recent[key] = f


class _Tokens:
    """Sign stream over runs; a run of successor signs is one token."""

    def __init__(self, runs):
        self.toks = []
        for item, count in runs:
            if item == SUCC:
                self.toks.append(("f", count))
            elif isinstance(item, GoedelCode):
                raise CodeError("nested code where a sign was expected")
            elif not isinstance(count, int) or count > 10 ** 6:
                raise CodeError("symbolic run of a non-successor sign")
            else:
                self.toks.extend([("s", item)] * count)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", None)

    def take(self, sign=None):
        tok = self.peek()
        if tok[0] == "end" or (sign is not None and tok != ("s", sign)):
            raise CodeError(f"malformed sign sequence at item {self.i + 1}")
        self.i += 1
        return tok


def _parse_term(tk: _Tokens) -> Term:
    k = 0
    if tk.peek()[0] == "f":
        k = tk.take()[1]
    kind, s = tk.take()
    if kind != "s":
        raise CodeError("malformed term")
    if s == ZERO_SIGN:
        return Term(None, k)
    v = variable_from_code(s)
    if v is None:
        raise CodeError(f"sign {s} is neither 0 nor a variable")
    try:
        return Term(v, k)
    except TypingError as e:
        raise CodeError(str(e)) from None


def _parse_formula(tk: _Tokens) -> Formula:
    kind, s = tk.take()
    if kind != "s":
        raise CodeError("formula cannot start with f")
    if s == NEG:
        tk.take(LPAREN)
        body = _parse_formula(tk)
        tk.take(RPAREN)
        return Neg(body)
    if s == LPAREN:
        left = _parse_formula(tk)
        tk.take(RPAREN)
        tk.take(DIS)
        tk.take(LPAREN)
        right = _parse_formula(tk)
        tk.take(RPAREN)
        return Dis(left, right)
    v = variable_from_code(s)
    if v is None:
        raise CodeError(f"sign {s} cannot start a formula")
    nxt = tk.peek()
    if nxt == ("s", GEN):
        tk.take()
        tk.take(LPAREN)
        body = _parse_formula(tk)
        tk.take(RPAREN)
        return Gen(v, body)
    tk.take(LPAREN)
    arg = _parse_term(tk)
    tk.take(RPAREN)
    try:
        return Elem(v, arg)
    except TypingError as e:
        raise CodeError(f"ill-typed elementary formula: {e}") from None


def decode(code) -> list:
    """The item sequence of a code (materializable length only)."""
    return list(to_code(code).items())


def decode_formula(code) -> Formula:
    code = to_code(code)
    hit = _recent.get(code.runs)
    if hit is not None:
        return hit
    f = _decode_formula_runs(code.runs)
    _remember(code, f)
    return f


def _decode_formula_runs(runs) -> Formula:
    tk = _Tokens(runs)
    f = _parse_formula(tk)
    if tk.peek()[0] != "end":
        raise CodeError("trailing signs after a complete formula")
    return f


@lru_cache(maxsize=65536)
def _formula_from_int(n: int) -> Formula:
    return decode_formula(from_int(n))


def _formula_item(item) -> Formula:
    if isinstance(item, int):
        return _formula_from_int(item)
    return decode_formula(item)


def decode_term(code) -> Term:
    tk = _Tokens(to_code(code).runs)
    t = _parse_term(tk)
    if tk.peek()[0] != "end":
        raise CodeError("trailing signs after a term")
    return t


def decode_array(code) -> tuple:
    """Lines of a proof-array code (each item must be a formula code)."""
    code = to_code(code)
    lines = []
    for item, count in code.runs:
        if not isinstance(count, int) or count > 10 ** 6:
            raise CodeError("proof array of unmaterializable length")
        try:
            f = _formula_item(item)
        except CodeError as e:
            raise CodeError(f"item is not a formula code ({e})") from None
        lines.extend([f] * count)
    return tuple(lines)


def classify(code) -> tuple[str, object]:
    """``('formula', F)``, ``('numeral', n)``, ``('term', t)``,
    ``('array', lines)`` or ``('sequence', None)``."""
    code = to_code(code)
    try:
        return "formula", decode_formula(code)
    except CodeError:
        pass
    try:
        t = decode_term(code)
        return ("numeral", t.succs) if t.base is None else ("term", t)
    except CodeError:
        pass
    try:
        return "array", decode_array(code)
    except CodeError:
        pass
    return "sequence", None


def is_formula_code(x) -> bool:
    try:
        decode_formula(x)
        return True
    except CodeError:
        return False


def sb_code(a, v: int, c) -> GoedelCode:
    """Code of a[v := c], computed on the structure (decode, substitute,
    re-encode); never by arithmetic on magnitudes."""
    f = decode_formula(a)
    var = variable_from_code(v)
    if var is None:
        raise CodeError(f"{v} is not a variable code")
    if isinstance(c, Term):
        t = c
    else:
        t = decode_term(c)
    return encode_formula(substitute(f, var, t))


def compare_magnitudes(a, b):
    """-1/0/1 when both magnitudes are materializable, else None."""
    ma, mb = to_code(a).try_magnitude(), to_code(b).try_magnitude()
    if ma is None or mb is None:
        return None
    return (ma > mb) - (ma < mb)


# -- text form --------------------------------------------------------------

def _struct_text(code: GoedelCode, limit=None) -> str:
    if code._text is None:
        parts = []
        for item, count in code.runs:
            s = _struct_text(item) if isinstance(item, GoedelCode) else int_text(item)
            if count != 1:
                if isinstance(count, SymbolicCount):
                    cs = _struct_text(count.code)
                    if count.offset:
                        cs += f"{count.offset:+d}"
                else:
                    cs = int_text(count)
                s = f"{s}*{cs}"
            parts.append(s)
        code._text = "[" + ",".join(parts) + "]"
    t = code._text
    if limit is not None and len(t) > limit:
        return t[:limit] + "...]"
    return t


def format_code(code, structural: bool = False, cap: int | None = None, limit=None) -> str:
    """Decimal magnitude when under the cap, otherwise the bracketed list.

    In the bracketed form ``item*count`` abbreviates a run; a count may
    itself be a bracketed code (optionally ``+k``/``-k``) for symbolic runs.
    """
    code = to_code(code)
    if not structural and code.materializable(cap):
        return int_text(code.magnitude)
    return _struct_text(code, limit)


_CODE_TOKEN = re.compile(r"\s*(\[|\]|,|\*|[+-]\d+|\d+)")


def parse_code(text: str) -> GoedelCode:
    """Inverse of :func:`format_code`."""
    text = text.strip()
    if re.fullmatch(r"\d+", text):
        return from_int(text_int(text))
    toks = []
    pos = 0
    while pos < len(text):
        m = _CODE_TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise CodeError(f"bad code text at position {pos}")
        toks.append(m.group(1))
        pos = m.end()
    i = 0

    def seq():
        nonlocal i
        if toks[i] != "[":
            raise CodeError("expected '['")
        i += 1
        runs = []
        while True:
            item = atom()
            count = 1
            if i < len(toks) and toks[i] == "*":
                i += 1
                count = atom()
                if isinstance(count, GoedelCode):
                    off = 0
                    if i < len(toks) and toks[i][0] in "+-":
                        off = int(toks[i])
                        i += 1
                    count = _normalize_count(count)
                    if off:
                        count = count + off
            runs.append((item, count))
            if toks[i] == ",":
                i += 1
                continue
            if toks[i] == "]":
                i += 1
                return GoedelCode(runs)
            raise CodeError("expected ',' or ']'")

    def atom():
        nonlocal i
        if toks[i] == "[":
            return seq()
        tok = toks[i]
        i += 1
        if not tok.isdigit():
            raise CodeError(f"unexpected {tok!r}")
        return text_int(tok)

    try:
        code = seq()
    except IndexError:
        raise CodeError("truncated code text") from None
    if i != len(toks):
        raise CodeError("trailing text after code")
    if code.is_empty():
        raise CodeError("empty sequence")
    return code
