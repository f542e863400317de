"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 degree cap exceeded.  Output on stdout is deterministic for a fixed
configuration; wall time goes to stderr.
"""
from __future__ import annotations

import argparse
import inspect
import json
import os
import sys
import time
from typing import Callable, Sequence

from .admissible import CACHE_ENV, format_word, milnor_to_admissible, element_excess
from .conditions import FAMILIES as CONDITION_FAMILIES
from .core import CapExceeded, PrimeContext, enumerate_admissible, excess, index_from_word
from .dual import DUAL_FAMILIES, format_dual_monomial, level as dual_level
from .milnor import Element, basis as milnor_basis, format_monomial, weight
from .parse import ParseError, format_element_json, parse, parse_element
from .report import Report
from .scheme import SCHEME_FAMILIES
from .unstable import UNSTABLE_FAMILIES

FAMILIES: dict[str, Callable[..., Report]] = {
    **CONDITION_FAMILIES, **DUAL_FAMILIES, **SCHEME_FAMILIES, **UNSTABLE_FAMILIES,
}
_RANGE_KEYS = ("i", "level", "s", "l")
_LEVEL_PARAMS = ("max_level", "max_i", "max_s")


class UsageError(ValueError):
    pass


def _range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}") from None
    if a > b:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return a, b


def _context(args) -> PrimeContext:
    try:
        return PrimeContext(args.p, args.cap)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _emit(args, text: str, data) -> None:
    if args.format == "json":
        print(json.dumps(data, separators=(",", ":")))
    else:
        print(text)


# ---------------------------------------------------------------------------
# basis listings

def _admissible_entry(w: tuple[int, ...], ctx: PrimeContext) -> dict:
    E, R = index_from_word(w, ctx)
    return {"text": format_word(w, ctx.p), "word": list(w), "E": list(E), "R": list(R), "excess": excess(w, ctx)}


def cmd_basis(args) -> int:
    ctx = _context(args)
    p, n = ctx.p, args.n
    kind = args.kind
    if kind in ("filtration", "dual") and args.i is None:
        raise UsageError(f"--kind {kind} needs -i")
    level = args.i[0] if args.i else None
    if args.i and args.i[0] != args.i[1]:
        raise UsageError("basis takes a single level, -i k")
    if kind == "admissible":
        entries = [_admissible_entry(w, ctx) for w in enumerate_admissible(n, ctx)]
        lines = [f"{e['text']}\texcess={e['excess']}" for e in entries]
    elif kind == "filtration":
        entries = [_admissible_entry(w, ctx) for w in enumerate_admissible(n, ctx) if excess(w, ctx) >= level]
        lines = [f"{e['text']}\texcess={e['excess']}" for e in entries]
    elif kind == "milnor":
        entries = [{"text": format_monomial(m, p), "E": list(m.E), "R": list(m.R), "weight": weight(m, p)}
                   for m in milnor_basis(n, ctx)]
        lines = [f"{e['text']}\tweight={e['weight']}" for e in entries]
    else:
        entries = [{"text": format_dual_monomial(m, p), "E": list(m.E), "R": list(m.R), "level": dual_level(m, p)}
                   for m in milnor_basis(n, ctx) if dual_level(m, p) <= level]
        lines = [f"{e['text']}\tlevel={e['level']}" for e in entries]
    head = f"# kind={kind} p={p} degree={n}" + (f" level={level}" if level is not None else "")
    text = "\n".join([head, *lines, f"# count={len(entries)}"])
    _emit(args, text, {"schema": 1, "p": p, "degree": n, "basis": kind, "level": level,
                       "count": len(entries), "entries": entries})
    return 0


# ---------------------------------------------------------------------------
# elements

def _show(args, a: Element, ctx: PrimeContext) -> None:
    if args.to == "admissible":
        adm = milnor_to_admissible(a, ctx)
        terms = []
        for w, c in adm.sorted_items():
            E, R = index_from_word(w, ctx)
            terms.append({"coeff": c, "word": list(w), "E": list(E), "R": list(R)})
        data = {"schema": 1, "p": a.p, "degree": a.degree if a else None, "basis": "admissible", "terms": terms}
        _emit(args, str(adm), data)
    else:
        _emit(args, str(a), format_element_json(a))


def cmd_product(args) -> int:
    ctx = _context(args)
    a, b = parse_element(args.left, ctx), parse_element(args.right, ctx)
    if a and b:
        ctx.check(a.degree + b.degree)
    _show(args, a * b, ctx)
    return 0


def cmd_convert(args) -> int:
    ctx = _context(args)
    _show(args, parse_element(args.element, ctx), ctx)
    return 0


def cmd_excess(args) -> int:
    ctx = _context(args)
    if (args.word is None) == (args.element is None):
        raise UsageError("give either --word or an element")
    if args.word is not None:
        parsed = parse(args.word, ctx)
        if parsed.word is None:
            raise ParseError("expected a single word of Sq^a, P^i and b letters", 0, args.word)
        e = excess(parsed.word, ctx)
    else:
        a = parse_element(args.element, ctx)
        if not a:
            raise UsageError("the zero element has no excess")
        e = element_excess(milnor_to_admissible(a, ctx))
    _emit(args, str(e), {"schema": 1, "p": ctx.p, "excess": e})
    return 0


# ---------------------------------------------------------------------------
# verification

def _in_range(indices: dict, lo: int, hi: int) -> bool:
    for key in _RANGE_KEYS:
        if key in indices and isinstance(indices[key], int):
            return lo <= indices[key] <= hi
    return True


def run_family(name: str, ctx: PrimeContext, max_degree: int | None = None, cap: int | None = None,
               levels: tuple[int, int] | None = None, seed: int | None = None) -> Report:
    try:
        fn = FAMILIES[name.lower()]
    except KeyError:
        raise UsageError(f"unknown family {name!r}; choose from {', '.join(sorted(FAMILIES))}") from None
    params = inspect.signature(fn).parameters
    kwargs: dict = {}
    if "seed" in params:
        if seed is None:
            raise UsageError(f"family {name!r} is randomized; pass --seed")
        kwargs["seed"] = seed
    if max_degree is not None:
        if "max_degree" not in params:
            raise UsageError(f"family {name!r} takes no --max-degree")
        kwargs["max_degree"] = max_degree
    if cap is not None and "cap" in params:
        kwargs["cap"] = cap
    if levels is not None:
        key = next((k for k in _LEVEL_PARAMS if k in params), None)
        if key is None:
            raise UsageError(f"family {name!r} takes no level range")
        kwargs[key] = levels[1]
    rep = fn(ctx, **kwargs)
    if levels is not None:
        kept = Report(rep.family, rep.p, notes=list(rep.notes))
        kept.records = [r for r in rep.records if _in_range(r.indices, *levels)]
        rep = kept
    return rep


def cmd_verify(args) -> int:
    ctx = _context(args)
    start = time.perf_counter()
    rep = run_family(args.family, ctx, args.max_degree, args.cap, args.i, args.seed)
    if args.format == "json":
        for line in rep.lines():
            print(line)
        print(json.dumps({"summary": rep.summary()}, separators=(",", ":")))
    else:
        for r in rep.failures:
            print(r.to_json())
        print(rep)
    print(f"wall time {time.perf_counter() - start:.2f}s", file=sys.stderr)
    return 0 if rep.passed else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", type=int, default=2, help="the prime")
    common.add_argument("--cap", type=int, default=None, help="degree cap")
    common.add_argument("--format", choices=("text", "json"), default=None)
    common.add_argument("--cache-dir", default=None, help=f"change-of-basis cache (overrides ${CACHE_ENV})")

    parser = argparse.ArgumentParser(prog="steenrod-excess", description="Mod-p Steenrod algebra computations.")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("basis", parents=[common], help="list a basis in one degree")
    b.add_argument("--kind", choices=("admissible", "milnor", "filtration", "dual"), required=True)
    b.add_argument("-n", type=int, required=True, help="degree")
    b.add_argument("-i", type=_range, default=None, help="filtration level")
    b.set_defaults(func=cmd_basis)

    pr = sub.add_parser("product", parents=[common], help="multiply two elements")
    pr.add_argument("left")
    pr.add_argument("right")
    pr.add_argument("--to", choices=("milnor", "admissible"), default="milnor")
    pr.set_defaults(func=cmd_product)

    cv = sub.add_parser("convert", parents=[common], help="rewrite an element in another basis")
    cv.add_argument("element")
    cv.add_argument("--to", choices=("milnor", "admissible"), required=True)
    cv.set_defaults(func=cmd_convert)

    ex = sub.add_parser("excess", parents=[common], help="excess of a word or element")
    ex.add_argument("element", nargs="?")
    ex.add_argument("--word", default=None)
    ex.set_defaults(func=cmd_excess)

    v = sub.add_parser("verify", parents=[common], help="run a verification family")
    v.add_argument("--family", required=True)
    v.add_argument("--max-degree", type=int, default=None)
    v.add_argument("-i", type=_range, default=None, help="level range a..b")
    v.add_argument("--seed", type=int, default=None)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.format is None:
        args.format = "json" if args.command == "verify" else "text"
    if args.cache_dir:
        os.environ[CACHE_ENV] = args.cache_dir
    try:
        return args.func(args)
    except (ParseError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
