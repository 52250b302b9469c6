"""Decimal conversion of large ints without tripping the interpreter's
digit limit (CPython refuses int/str conversion past 4300 digits)."""

import sys
import threading
from contextlib import contextmanager

_lock = threading.Lock()


@contextmanager
def _allow(ndigits: int):
    get = getattr(sys, "get_int_max_str_digits", None)
    if get is None:
        yield
        return
    with _lock:
        old = get()
        if old and old < ndigits + 1:
            sys.set_int_max_str_digits(ndigits + 1)
        try:
            yield
        finally:
            sys.set_int_max_str_digits(old)


def int_text(n: int) -> str:
    # bit_length * log10(2) bounds the digit count from above, give or take one
    with _allow(n.bit_length() * 30103 // 100000 + 2):
        return str(n)


def text_int(s: str) -> int:
    s = s.strip()
    with _allow(len(s)):
        return int(s)
