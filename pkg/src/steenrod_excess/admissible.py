"""Admissible basis and conversion to and from the Milnor basis.

Conversion is plain linear algebra: the columns of the change-of-basis
matrix in degree ``n`` are the Milnor expansions of the admissible words
of degree ``n``.  Nothing here knows about Adem relations.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np

from . import linalg
from .core import (PrimeContext, as_context, canonical_word, degree, enumerate_admissible, excess,
                   is_admissible)
from .milnor import Element, Monomial, basis as milnor_basis, milnor_product
from .sparse import SparseVector

CACHE_ENV = "STEENROD_EXCESS_CACHE"
CACHE_FORMAT = "steenrod-excess/change-of-basis/1"


class BasisTheoremViolated(RuntimeError):
    """The change-of-basis matrix was singular; this is an implementation bug."""


def format_word(word: Sequence[int], p: int) -> str:
    if p == 2:
        return " ".join(f"Sq^{j}" for j in word) or "1"
    parts = []
    for k, x in enumerate(word):
        if k % 2 == 0:
            if x:
                parts.append("b")
        elif x:
            parts.append(f"P^{x}")
    return " ".join(parts) or "1"


class AdmissibleElement(SparseVector):
    """Sparse combination of admissible words."""

    __slots__ = ()

    def __init__(self, terms=None, p: int = 2):
        super().__init__(terms, p)
        for w in self._terms:
            if not is_admissible(w, p):
                raise ValueError(f"word {w} is not admissible")

    def _label_degree(self, word) -> int:
        return degree(word, self.p)

    def sorted_items(self):
        return sorted(self._terms.items(), key=lambda kv: (degree(kv[0], self.p), tuple(-x for x in kv[0])))

    def __str__(self) -> str:
        from .milnor import format_terms
        return format_terms((format_word(w, self.p), c) for w, c in self.sorted_items())

    def __repr__(self) -> str:
        return f"AdmissibleElement(p={self.p}, {self})"


# ---------------------------------------------------------------------------
# words -> Milnor basis

def _letters(word: tuple[int, ...], p: int) -> list[Monomial]:
    if p == 2:
        return [Monomial((), (j,)) for j in word if j]
    out = []
    for k, x in enumerate(word):
        if k % 2 == 0:
            if x:
                out.append(Monomial((1,), ()))
        elif x:
            out.append(Monomial((), (x,)))
    return out


@lru_cache(maxsize=None)
def _evaluate(p: int, letters: tuple[Monomial, ...]) -> Element:
    if not letters:
        return Element.one(p)
    head = Element({letters[0]: 1}, p)
    return milnor_product(head, _evaluate(p, letters[1:]), p)


def word_to_milnor(word: Sequence[int], ctx: PrimeContext | int) -> Element:
    """Milnor expansion of the composite ``b^{e0} P^{i1} b^{e1} ...`` (``Sq^{j1} Sq^{j2} ...``)."""
    ctx = as_context(ctx)
    word = canonical_word(word, ctx)
    ctx.check(degree(word, ctx))
    return _evaluate(ctx.p, tuple(_letters(word, ctx.p)))


# ---------------------------------------------------------------------------
# change of basis

@dataclass(frozen=True)
class ChangeOfBasis:
    """Column ``k`` of ``matrix`` is the Milnor expansion of ``admissible[k]``."""

    p: int
    degree: int
    admissible: tuple[tuple[int, ...], ...]
    milnor: tuple[Monomial, ...]
    matrix: np.ndarray
    inverse: np.ndarray

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "format": CACHE_FORMAT,
            "p": self.p,
            "degree": self.degree,
            "admissible": [list(w) for w in self.admissible],
            "milnor": [{"E": list(m.E), "R": list(m.R)} for m in self.milnor],
            "matrix": self.matrix.tolist(),
        }


def _cache_dir(cache_dir: str | os.PathLike | None) -> Path | None:
    if cache_dir is not None:
        return Path(cache_dir)
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else None


def _load(path: Path, p: int, n: int) -> np.ndarray | None:
    try:
        data = json.loads(path.read_text())
    except (OSError, ValueError):
        return None
    if data.get("format") != CACHE_FORMAT or data.get("p") != p or data.get("degree") != n:
        return None
    return np.array(data["matrix"], dtype=np.int64).reshape(len(data["milnor"]), len(data["admissible"]))


def _build(p: int, n: int, cache_dir: Path | None) -> ChangeOfBasis:
    ctx = as_context(p)
    words = tuple(enumerate_admissible(n, ctx))
    monos = tuple(milnor_basis(n, ctx))
    if len(words) != len(monos):
        raise BasisTheoremViolated(f"{len(words)} admissibles vs {len(monos)} Milnor monomials in degree {n}")
    path = cache_dir / f"cob_p{p}_n{n}.json" if cache_dir else None
    m = _load(path, p, n) if path and path.exists() else None
    if m is None:
        pos = {mono: k for k, mono in enumerate(monos)}
        m = np.zeros((len(monos), len(words)), dtype=np.int64)
        for col, w in enumerate(words):
            for mono, c in word_to_milnor(w, ctx).items():
                m[pos[mono], col] = c
    try:
        inv = linalg.inverse(m, p)
    except linalg.SingularMatrix as exc:
        raise BasisTheoremViolated(f"basis theorem violated in degree {n}, p={p}") from exc
    cob = ChangeOfBasis(p, n, words, monos, m, inv)
    if path is not None and not path.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(f".tmp{os.getpid()}")
        tmp.write_text(json.dumps(cob.to_json()))
        os.replace(tmp, path)
    return cob


@lru_cache(maxsize=None)
def _change_of_basis(p: int, n: int, cache_dir: Path | None) -> ChangeOfBasis:
    return _build(p, n, cache_dir)


def change_of_basis(n: int, ctx: PrimeContext | int, cache_dir: str | os.PathLike | None = None) -> ChangeOfBasis:
    """Square invertible matrix expressing admissible words in the Milnor basis.

    A disk cache is used only when ``cache_dir`` is given or the
    ``STEENROD_EXCESS_CACHE`` environment variable is set.
    """
    ctx = as_context(ctx)
    ctx.check(n)
    return _change_of_basis(ctx.p, n, _cache_dir(cache_dir))


# ---------------------------------------------------------------------------
# conversions

def milnor_to_admissible(a: Element, ctx: PrimeContext | int | None = None) -> AdmissibleElement:
    p = a.p
    ctx = as_context(ctx if ctx is not None else p)
    if not a:
        return AdmissibleElement.zero(p)
    n = a.degree
    if n is None:
        raise ValueError("milnor_to_admissible needs a homogeneous element")
    cob = change_of_basis(n, ctx)
    v = np.array([a.coeff(m) for m in cob.milnor], dtype=np.int64)
    x = cob.inverse @ v % p
    return AdmissibleElement({w: int(c) for w, c in zip(cob.admissible, x) if c}, p)


def admissible_to_milnor(a: AdmissibleElement, ctx: PrimeContext | int | None = None) -> Element:
    ctx = as_context(ctx if ctx is not None else a.p)
    out = Element.zero(a.p)
    for w, c in a.items():
        out = out + word_to_milnor(w, ctx).scale(c)
    return out


def rewrite_word(word: Sequence[int], ctx: PrimeContext | int) -> AdmissibleElement:
    """Admissible expansion of an arbitrary word; no term has smaller excess than the input."""
    ctx = as_context(ctx)
    word = canonical_word(word, ctx)
    if is_admissible(word, ctx):
        return AdmissibleElement({word: 1}, ctx.p)
    result = milnor_to_admissible(word_to_milnor(word, ctx), ctx)
    e = excess(word, ctx)
    for w in result:
        assert excess(w, ctx) >= e, (word, w)
    return result


def element_excess(a: AdmissibleElement) -> int:
    """Smallest excess among the terms, i.e. the largest ``i`` with ``a`` in ``F_i``."""
    if not a:
        raise ValueError("the zero element lies in every filtration level")
    return min(excess(w, a.p) for w in a)
