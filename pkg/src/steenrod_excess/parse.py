"""Parsing of element expressions.

Grammar (whitespace is ignored)::

    expr   := term (("+" | "-") term)*
    term   := [INT] factor*
    factor := "Sq(" ints ")" | "Q(" ints ")" | "P(" ints ")"
            | "Sq" ["^"] INT | "P" ["^"] INT | "b"

Juxtaposed factors multiply.  ``b`` is the Bockstein.  Factors written
as ``Sq^a``, ``P^i`` and ``b`` are word letters; a term made only of
letters also has a word form.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .core import PrimeContext, as_context, canonical_word
from .milnor import Element, Monomial
from .sparse import DegreeMismatch


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.position = position
        self.text = text


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>Sq|Q|P|b)|(?P<sym>[\^(),+\-]))")


@dataclass(frozen=True)
class _Tok:
    kind: str
    value: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    out, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError("unexpected character", start, text)
        kind = m.lastgroup
        out.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(_Tok("end", "", len(text)))
    return out


@dataclass
class Parsed:
    element: Element
    word: tuple[int, ...] | None  # set when the expression is a single word


class _Parser:
    def __init__(self, text: str, ctx: PrimeContext):
        self.text = text
        self.ctx = ctx
        self.p = ctx.p
        self.toks = _tokenize(text)
        self.k = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.k]

    def error(self, message: str, tok: _Tok | None = None):
        raise ParseError(message, (tok or self.tok).pos, self.text)

    def take(self, kind: str, value: str | None = None) -> _Tok:
        t = self.tok
        if t.kind != kind or (value is not None and t.value != value):
            self.error(f"expected {value or kind}")
        self.k += 1
        return t

    def at(self, kind: str, value: str | None = None) -> bool:
        return self.tok.kind == kind and (value is None or self.tok.value == value)

    def ints(self) -> tuple[int, ...]:
        self.take("sym", "(")
        vals = []
        if not self.at("sym", ")"):
            vals.append(int(self.take("int").value))
            while self.at("sym", ","):
                self.k += 1
                vals.append(int(self.take("int").value))
        self.take("sym", ")")
        return tuple(vals)

    def expr(self) -> Parsed:
        sign = 1
        if self.at("sym", "-"):
            self.k += 1
            sign = -1
        first = self.term()
        total, terms = first.element.scale(sign), 1
        while self.at("sym", "+") or self.at("sym", "-"):
            s = 1 if self.take("sym").value == "+" else -1
            start = self.tok
            try:
                total = total + self.term().element.scale(s)
            except DegreeMismatch:
                self.error("terms of different degrees", start)
            terms += 1
        if not self.at("end"):
            self.error("unexpected token")
        word = first.word if terms == 1 and sign == 1 else None
        return Parsed(total, word)

    def term(self) -> Parsed:
        coeff = 1
        start = self.tok
        if self.at("int"):
            coeff = int(self.take("int").value)
        value = Element.one(self.p)
        letters: list[tuple[str, int]] = []
        milnor_factor = False
        deg = 0
        while self.at("name"):
            t = self.take("name")
            if t.value == "Sq":
                if self.p != 2:
                    self.error("Sq is only available at p=2", t)
                if self.at("sym", "("):
                    R = self.ints()
                    factor, milnor_factor = Element({Monomial.make((), R): 1}, 2), True
                else:
                    if self.at("sym", "^"):
                        self.k += 1
                    a = int(self.take("int").value)
                    factor = Element({Monomial.make((), (a,)): 1}, 2)
                    letters.append(("Sq", a))
            elif self.p == 2:
                self.error(f"{t.value} needs an odd prime", t)
            elif t.value == "Q":
                E = self.ints()
                if any(e not in (0, 1) for e in E):
                    self.error("Q exponents must be 0 or 1", t)
                factor, milnor_factor = Element({Monomial.make(E, ()): 1}, self.p), True
            elif t.value == "P":
                if self.at("sym", "("):
                    R = self.ints()
                    factor, milnor_factor = Element({Monomial.make((), R): 1}, self.p), True
                else:
                    if self.at("sym", "^"):
                        self.k += 1
                    i = int(self.take("int").value)
                    factor = Element({Monomial.make((), (i,)): 1}, self.p)
                    letters.append(("P", i))
            else:
                factor = Element({Monomial.make((1,), ()): 1}, self.p)
                letters.append(("b", 1))
            deg += factor.degree
            self.ctx.check(deg)
            value = value * factor
        if self.tok is start:
            self.error("expected a term")
        word = None
        if letters and not milnor_factor and coeff == 1:
            word = self._word(letters)
        elif not letters and not milnor_factor:
            word = canonical_word((), self.ctx)
        return Parsed(value.scale(coeff), word)

    def _word(self, letters: list[tuple[str, int]]) -> tuple[int, ...] | None:
        if self.p == 2:
            return tuple(a for _, a in letters)
        w = [0]
        for name, x in letters:
            if name == "b":
                if w[-1]:
                    return None  # b b = 0 has no word form
                w[-1] = 1
            else:
                w += [x, 0]
        return canonical_word(w, self.ctx)


def parse_element(text: str, ctx: PrimeContext | int) -> Element:
    return _Parser(text, as_context(ctx)).expr().element


def parse(text: str, ctx: PrimeContext | int) -> Parsed:
    return _Parser(text, as_context(ctx)).expr()


def parse_word(text: str, ctx: PrimeContext | int) -> tuple[int, ...]:
    """The word written as ``Sq^a Sq^b ...`` or ``b P^i b P^j ...``."""
    parsed = parse(text, ctx)
    if parsed.word is None:
        raise ParseError("expected a single word of Sq^a, P^i and b letters", 0, text)
    return parsed.word


def format_element_json(a: Element, basis_name: str = "milnor") -> dict:
    return {"schema": 1, "p": a.p, "degree": a.degree if a else None, "basis": basis_name,
            "terms": [{"coeff": c, "E": list(m.E), "R": list(m.R)} for m, c in a.sorted_items()]}

