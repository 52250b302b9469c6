"""Command line front end.

Exit codes: 0 every check holds (possibly within the bound), 1 some check
fails (possibly within the bound) or a proof line does not check, 2 a
malformed or empty suite manifest, 3 a parse or decode failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import codes
from .codes import CodeError
from .figures import FIGURES, replay_figure
from .files import (
    dumps_record, parse_x, read_kappa, read_proof, read_roles, role_refs, verdict_record,
)
from .lemmas import (
    PROPOSITIONS, RoleError, check_lemma_1, check_lemma_2, check_lemma_3, check_lemma_4,
    check_lemma_5, check_lemma_6, check_lemma_7, eval_prop, relation_sweep,
)
from .proofs import (
    EMPTY_KAPPA, KappaClass, SearchBound, Status, Verdict, combine, flg_enumerate,
    validate_lines, wid_s_bounded,
)
from .syntax import (
    Formula, ParseError, SubstitutionError, TypingError, display, parse_formula, parse_term,
    render,
)

OK, FAILED, MALFORMED, BAD_INPUT = 0, 1, 2, 3


class _Malformed(Exception):
    pass


def _status_exit(statuses) -> int:
    return FAILED if any(s.is_failure for s in statuses) else OK


class _Out:
    def __init__(self, path):
        self.path = path
        self.chunks = []

    def write(self, line=""):
        self.chunks.append(line + "\n")

    def close(self):
        text = "".join(self.chunks)
        if self.path:
            Path(self.path).write_text(text)
        else:
            sys.stdout.write(text)


def _bound(args, extra=()) -> SearchBound:
    if args.max_lines < 1 or args.max_size < 1:
        raise _Malformed("bounds must be positive")
    return SearchBound(args.max_lines, args.max_size).with_formulas(*extra)


def _context(args, x_spec=None):
    roles = read_roles(args.roles) if getattr(args, "roles", None) else None
    x = None
    if x_spec is not None:
        x = parse_x(x_spec, role_refs(roles))
    refs = role_refs(roles, x)
    kappa = read_kappa(args.kappa, refs) if getattr(args, "kappa", None) else EMPTY_KAPPA
    return roles, x, refs, kappa


def _formula_arg(text, refs) -> Formula:
    if Path(text).is_file():
        text = Path(text).read_text().strip()
    return parse_formula(text, refs)


# -- commands ---------------------------------------------------------------

def cmd_encode(args, out):
    text = args.formula
    if Path(text).is_file():
        text = Path(text).read_text().strip()
    try:
        f = parse_formula(text)
    except ParseError:
        try:
            parse_term(text)
        except (ParseError, TypingError):
            raise
        raise ParseError("a term is not a formula; only formulas are encoded", 0) from None
    out.write(codes.format_code(codes.encode_formula(f), structural=args.structural))
    return OK


def cmd_decode(args, out):
    code = codes.parse_code(args.code)
    kind, detail = codes.classify(code)
    if kind == "formula":
        out.write(render(detail, sugar=not args.raw))
        return OK
    if kind == "array":
        for n, f in enumerate(detail, 1):
            out.write(f"{n}. {render(f, sugar=not args.raw)}")
        return OK
    if kind == "numeral":
        raise CodeError(f"not a formula: numeral sign sequence Z({detail})")
    if kind == "term":
        raise CodeError(f"not a formula: term {detail}")
    raise CodeError(f"not a formula: sign sequence {codes.format_code(code, structural=True)}")


def cmd_check_proof(args, out):
    roles, x, refs, kappa = _context(args, args.x)
    lines, justs = read_proof(args.proof, refs)
    bad = validate_lines(lines, justs, kappa)
    for n, (f, j) in enumerate(zip(lines, justs), 1):
        if bad is not None and n == bad:
            out.write(f"line {n}: FAIL  {display(f)} ; {j}")
            out.write(f"first failing line: {n}")
            return FAILED
        out.write(f"line {n}: ok    {display(f)} ; {j}")
    out.write(f"proof array of {len(lines)} lines checks under {kappa.label}")
    return OK


def cmd_enumerate(args, out):
    roles, x, refs, kappa = _context(args)
    extra = [_formula_arg(t, refs) for t in args.formula or ()]
    bound = _bound(args, extra)
    if args.wid_s:
        v = wid_s_bounded(kappa, bound)
        out.write(dumps_record(verdict_record(v, _inputs(args))))
        return _status_exit([v.status])
    cl = flg_enumerate(kappa, bound)
    for f in cl.formulas():
        out.write(f"{cl.cost(f)}\t{display(f)}")
    out.write(f"# {len(cl)} formulas within {bound.max_lines} lines / size {bound.max_size}")
    return OK


def _inputs(args):
    keep = {}
    for k, v in sorted(vars(args).items()):
        if k in ("func", "out") or v is None:
            continue
        if isinstance(v, str) and Path(v).is_file():
            v = Path(v).read_text()
        keep[k] = v
    return keep


def _emit(out, verdicts, inputs, pretty):
    for v in verdicts:
        if pretty:
            out.write(f"{v.check}: {v.status.value}")
            for t in v.trace:
                out.write(f"  {t}")
            for name, p in v.parts:
                out.write(f"  [{name}] {p.status.value}")
        else:
            out.write(dumps_record(verdict_record(v, inputs)))
    return _status_exit(v.status for v in verdicts)


def run_lemma(n: int, kappa, roles, refs, bound, params: dict):
    """Evaluate one lemma; ``params`` holds the raw x, y, a, v, c and mode."""
    def need(key):
        if params.get(key) is None:
            raise _Malformed(f"lemma {n} needs --{key}")
        return params[key]
    x = parse_x(need("x"), refs) if n in (2, 3, 4, 5, 6) else None
    y = _formula_arg(need("y"), refs) if n != 7 else None
    if n == 1:
        return [check_lemma_1(y, bound, params.get("mode") or "strict", kappa)]
    if n in (2, 3, 4):
        k = kappa if params.get("kappa_given") else None
        return [(check_lemma_2, check_lemma_3, check_lemma_4)[n - 2](x, y, k)]
    if n == 5:
        return [check_lemma_5(x, y, bound)]
    if n == 6:
        return [check_lemma_6(kappa, x, y, bound)]
    if n == 7:
        a = _formula_arg(need("a"), refs)
        v = parse_formula(f"all {need('v')} 0=0").var
        c = parse_term(need("c"))
        return list(check_lemma_7(kappa, a, v, c, bound))
    raise _Malformed(f"no lemma {n}")


def cmd_lemma(args, out):
    roles, x, refs, kappa = _context(args)
    bound = _bound(args)
    params = dict(x=args.x, y=args.y, a=args.a, v=args.v, c=args.c, mode=args.mode,
                  kappa_given=args.kappa is not None)
    return _emit(out, run_lemma(args.n, kappa, roles, refs, bound, params), _inputs(args),
                 args.pretty)


def cmd_prop(args, out):
    if not args.roles:
        raise _Malformed("prop needs --roles")
    roles, x, refs, kappa = _context(args, args.x if args.x is not None else "0")
    v = eval_prop(args.id, kappa, roles, x, _bound(args))
    return _emit(out, [v], _inputs(args), args.pretty)


def cmd_replay(args, out):
    if not args.roles:
        raise _Malformed("replay needs --roles")
    roles, x, refs, kappa = _context(args, args.x if args.x is not None else "0")
    dag = replay_figure(args.fig, kappa, roles, x, _bound(args))
    if args.pretty:
        for line in dag.render():
            out.write(line)
    else:
        for rec in dag.records():
            out.write(json.dumps(rec, sort_keys=True))
    return _status_exit(n.status for n in dag.sinks() if n.status is not None)


# -- suites -----------------------------------------------------------------

def _entry_path(base: Path, p):
    q = Path(p)
    return q if q.is_absolute() else base / q


def _load_kappa(entry, base, refs):
    k = entry.get("kappa")
    if k is None:
        return EMPTY_KAPPA
    if isinstance(k, list):
        return KappaClass(frozenset(parse_formula(s, refs) for s in k), "inline")
    return read_kappa(_entry_path(base, k), refs)


def _load_roles(entry, base):
    r = entry.get("roles")
    if r is None:
        return None
    p = _entry_path(base, r)
    if p.is_file():
        return read_roles(p)
    from .lemmas import make_roles
    return make_roles(parse_formula(r))


def run_entry(entry: dict, base: Path) -> list:
    if not isinstance(entry, dict) or "check" not in entry:
        raise _Malformed("entry needs a 'check' field")
    check = str(entry["check"])
    roles = _load_roles(entry, base)
    x_raw = entry.get("x")
    if isinstance(x_raw, str) and _entry_path(base, x_raw).is_file():
        x_raw = str(_entry_path(base, x_raw))
    pre = role_refs(roles)
    x = parse_x(x_raw, pre) if x_raw is not None else None
    refs = role_refs(roles, x)
    kappa = _load_kappa(entry, base, refs)
    try:
        bound = SearchBound(int(entry.get("max_lines", 3)), int(entry.get("max_size", 20)))
    except (TypeError, ValueError) as e:
        raise _Malformed(str(e)) from None
    if check.startswith("lemma") and check[5:].isdigit():
        params = {k: entry.get(k) for k in ("y", "a", "v", "c", "mode")}
        params["x"] = x_raw
        params["kappa_given"] = "kappa" in entry
        return run_lemma(int(check[5:]), kappa, roles, refs, bound, params)
    if check == "relation_sweep":
        pool = [parse_formula(s, refs) for s in entry.get("pool", [])]
        if not pool:
            raise _Malformed("relation_sweep needs a pool")
        k = kappa if "kappa" in entry else None
        return [relation_sweep(pool, k, int(entry.get("max_lines", 3)))]
    if check.startswith("prop"):
        pid = check[4:].lstrip(":")
        if pid not in PROPOSITIONS or roles is None:
            raise _Malformed(f"bad proposition entry {check!r}")
        return [eval_prop(pid, kappa, roles, x if x is not None else 0, bound)]
    if check.startswith("replay"):
        fig = check[6:].lstrip(":")
        if fig not in FIGURES or roles is None:
            raise _Malformed(f"bad replay entry {check!r}")
        dag = replay_figure(fig, kappa, roles, x if x is not None else 0, bound)
        sinks = [n.verdict for n in dag.sinks() if n.verdict is not None]
        return [Verdict(fig, combine(v.status for v in sinks) if sinks else Status.VACUOUS,
                        bound, {n.id: (n.status.value if n.status else n.kind) for n in dag.nodes})]
    if check == "wid_s":
        return [wid_s_bounded(kappa, bound)]
    raise _Malformed(f"unknown check {check!r}")


def _resolved(entry, base: Path) -> dict:
    """The entry with file references replaced by their text, for digests."""
    out = {}
    for k, v in entry.items():
        if isinstance(v, str) and _entry_path(base, v).is_file():
            v = {"file": v, "text": _entry_path(base, v).read_text()}
        out[k] = v
    return out


def run_suite(manifest_path, out) -> int:
    path = Path(manifest_path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise _Malformed(f"manifest is not JSON: {e}") from None
    entries = data.get("checks", []) if isinstance(data, dict) else data
    if not isinstance(entries, list) or not entries:
        out.write("# empty manifest")
        return MALFORMED
    statuses, malformed = [], 0
    for i, entry in enumerate(entries):
        try:
            verdicts = run_entry(entry, path.parent)
        except (_Malformed, ParseError, CodeError, TypingError, SubstitutionError,
                RoleError, OSError, KeyError, ValueError) as e:
            malformed += 1
            out.write(json.dumps({"entry": i, "error": str(e), "status": "Malformed"},
                                 sort_keys=True))
            continue
        for v in verdicts:
            rec = verdict_record(v, _resolved(entry, path.parent))
            rec["entry"] = i
            out.write(dumps_record(rec))
            statuses.append(v.status)
    if malformed:
        return MALFORMED
    return _status_exit(statuses)


def cmd_suite(args, out):
    return run_suite(args.manifest, out)


# -- parser -----------------------------------------------------------------

def _common(p, kappa=True):
    if kappa:
        p.add_argument("--kappa", help="kappa file (one formula per line)")
        p.add_argument("--roles", help="roles file holding the class sign q")
    p.add_argument("--max-lines", type=int, default=3, help="derivation size bound L")
    p.add_argument("--max-size", type=int, default=20, help="formula node-count bound S")
    p.add_argument("--digit-cap", type=int, default=None,
                   help="largest magnitude (in digits) printed in decimal")
    p.add_argument("--out", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="systemp", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="print the code of a formula")
    p.add_argument("formula", help="formula text or a file containing it")
    p.add_argument("--structural", action="store_true", help="print the bracketed item form")
    p.add_argument("--digit-cap", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="print the formula or array a code denotes")
    p.add_argument("code", help="decimal or bracketed code")
    p.add_argument("--raw", action="store_true", help="no sugar in the output")
    p.add_argument("--digit-cap", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("check-proof", help="validate a proof file line by line")
    p.add_argument("proof")
    p.add_argument("--x", help="x used to resolve @sb_r references")
    _common(p)
    p.set_defaults(func=cmd_check_proof)

    p = sub.add_parser("enumerate", help="list the bounded closure Flg(kappa)")
    p.add_argument("--formula", action="append", help="seed formula for the instance pools")
    p.add_argument("--wid-s", action="store_true", help="run the bounded consistency probe")
    _common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("lemma", help="check one lemma instance")
    p.add_argument("n", type=int, choices=range(1, 8))
    for name in ("x", "y", "a", "v", "c"):
        p.add_argument(f"--{name}")
    p.add_argument("--mode", choices=("strict", "derived"), default="strict")
    p.add_argument("--pretty", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_lemma)

    p = sub.add_parser("prop", help="evaluate (15), (16), (I) or (II) at x")
    p.add_argument("id", choices=PROPOSITIONS)
    p.add_argument("--x", help="proof file or code (default 0)")
    p.add_argument("--pretty", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_prop)

    p = sub.add_parser("replay", help="replay a derivation figure")
    p.add_argument("fig", choices=FIGURES)
    p.add_argument("--x", help="proof file or code (default 0)")
    p.add_argument("--pretty", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("suite", help="run a JSON manifest of checks")
    p.add_argument("manifest")
    p.add_argument("--digit-cap", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_suite)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = _Out(getattr(args, "out", None))
    old_cap = codes.get_digit_cap()
    if getattr(args, "digit_cap", None) is not None:
        if args.digit_cap < 1:
            print("error: --digit-cap must be positive", file=sys.stderr)
            return MALFORMED
        codes.set_digit_cap(args.digit_cap)
    try:
        rc = args.func(args, out)
    except _Malformed as e:
        out.close()
        print(f"error: {e}", file=sys.stderr)
        return MALFORMED
    except (ParseError, CodeError, TypingError, SubstitutionError, RoleError, OSError) as e:
        out.close()
        print(f"error: {e}", file=sys.stderr)
        return BAD_INPUT
    finally:
        codes.set_digit_cap(old_cap)
    out.close()
    return rc


if __name__ == "__main__":
    sys.exit(main())
