"""The excess filtration F_i, its graded pieces E_i^j, and the maps mu~ and gamma.

Subspaces of a single degree are stored as row matrices over the
canonical Milnor basis of that degree.  Quotients ``A/F_i`` are modelled
by the complement spanned by monomials of weight ``< i``, so reducing
modulo ``F_i`` just drops the heavy terms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from . import linalg
from .admissible import word_to_milnor
from .core import PrimeContext, as_context, enumerate_admissible, excess
from .milnor import Element, Monomial, basis, milnor_product, weight


# ---------------------------------------------------------------------------
# weight bookkeeping

def truncate_below(a: Element, i: int) -> Element:
    """``pi_i``: representative of ``a`` modulo ``F_i`` (terms of weight < i)."""
    p = a.p
    return a.truncate(lambda m: weight(m, p) < i)


def weight_part(a: Element, w: int) -> Element:
    """Terms of weight exactly ``w``: the class of ``a`` in ``E_w`` when ``a`` lies in ``F_w``."""
    p = a.p
    return a.truncate(lambda m: weight(m, p) == w)


def min_weight(a: Element) -> int | None:
    """Largest ``i`` with ``a`` in ``F_i``; None for zero."""
    if not a:
        return None
    return min(weight(m, a.p) for m in a)


def in_filtration(a: Element, i: int) -> bool:
    w = min_weight(a)
    return w is None or w >= i


@lru_cache(maxsize=None)
def _weights(p: int, n: int) -> tuple[int, ...]:
    return tuple(weight(m, p) for m in basis(n, p))


def monomials_by_weight(n: int, ctx: PrimeContext | int, lo: int | None = None, hi: int | None = None) -> list[Monomial]:
    """Degree-``n`` monomials with ``lo <= weight <= hi`` (bounds optional)."""
    ctx = as_context(ctx)
    out = []
    for m, w in zip(basis(n, ctx), _weights(ctx.p, n)):
        if (lo is None or w >= lo) and (hi is None or w <= hi):
            out.append(m)
    return out


def quotient_basis(i: int, n: int, ctx: PrimeContext | int) -> list[Monomial]:
    """Complement basis of ``(A/F_i)^n``."""
    return monomials_by_weight(n, ctx, hi=i - 1)


# ---------------------------------------------------------------------------
# top generators

def top_degree(s: int, p: int) -> int:
    """Degree of ``b^e P^i`` for ``s = 2i + e`` (of ``Sq^s`` at p=2)."""
    if p == 2:
        return s
    return 2 * (s // 2) * (p - 1) + s % 2


def top_monomial(s: int, p: int) -> Monomial:
    if p == 2:
        return Monomial((), (s,) if s else ())
    i, e = divmod(s, 2)
    return Monomial((1,) if e else (), (i,) if i else ())


def top_word(s: int, p: int) -> tuple[int, ...]:
    if p == 2:
        return (s,) if s else ()
    i, e = divmod(s, 2)
    return (e, i, 0) if i else (e,)


def top_element(s: int, ctx: PrimeContext | int) -> Element:
    """``b^e P^i`` as a Milnor element; it is the monomial ``Q_0^e P(i)``."""
    p = as_context(ctx).p
    return Element({top_monomial(s, p): 1}, p)


# ---------------------------------------------------------------------------
# subspaces

@dataclass(frozen=True, eq=False)
class GradedSubspace:
    """A subspace of ``A^n`` given by spanning elements, at filtration level ``level``."""

    p: int
    degree: int
    level: int
    basis: tuple[Element, ...]
    ambient: tuple[Monomial, ...] = field(repr=False)

    @property
    def ambient_dim(self) -> int:
        return len(self.ambient)

    @cached_property
    def matrix(self) -> np.ndarray:
        pos = {m: k for k, m in enumerate(self.ambient)}
        out = np.zeros((len(self.basis), len(self.ambient)), dtype=np.int64)
        for r, b in enumerate(self.basis):
            for m, c in b.items():
                out[r, pos[m]] = c
        return out

    @cached_property
    def echelon(self) -> np.ndarray:
        return linalg.row_basis(self.matrix, self.p)

    @property
    def dim(self) -> int:
        return self.echelon.shape[0]

    def vector(self, a: Element) -> np.ndarray:
        pos = {m: k for k, m in enumerate(self.ambient)}
        v = np.zeros(len(self.ambient), dtype=np.int64)
        for m, c in a.items():
            v[pos[m]] = c
        return v

    def contains(self, a: Element) -> bool:
        return linalg.in_row_space(self.echelon, self.vector(a), self.p)


def _subspace(p: int, n: int, i: int, elements) -> GradedSubspace:
    return GradedSubspace(p, n, i, tuple(elements), tuple(basis(n, p)))


def filtration_basis(i: int, n: int, kind: str, ctx: PrimeContext | int) -> GradedSubspace:
    """Basis of ``(F_i A)^n``: admissible words of excess ``>= i`` or Milnor monomials of weight ``>= i``."""
    ctx = as_context(ctx)
    ctx.check(n)
    p = ctx.p
    if kind == "milnor":
        elems = [Element({m: 1}, p) for m in monomials_by_weight(n, ctx, lo=i)]
    elif kind == "admissible":
        elems = [word_to_milnor(w, ctx) for w in enumerate_admissible(n, ctx) if excess(w, ctx) >= i]
    else:
        raise ValueError(f"unknown basis kind {kind!r}")
    return _subspace(p, n, i, elems)


def subspace_equal(a: GradedSubspace, b: GradedSubspace) -> bool:
    if a.degree != b.degree or a.p != b.p:
        raise ValueError("subspaces live in different degrees")
    return linalg.same_row_space(a.matrix, b.matrix, a.p)


# ---------------------------------------------------------------------------
# graded pieces

@dataclass(frozen=True)
class EQuotient:
    """``E_i^j = F_i^j / F_{i+1}^j`` with coset representatives (monomials of weight exactly i)."""

    p: int
    level: int
    degree: int
    basis: tuple[Element, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


def e_quotient(i: int, j: int, ctx: PrimeContext | int) -> EQuotient:
    ctx = as_context(ctx)
    ctx.check(j)
    reps = monomials_by_weight(j, ctx, lo=i, hi=i)
    return EQuotient(ctx.p, i, j, tuple(Element({m: 1}, ctx.p) for m in reps))


# ---------------------------------------------------------------------------
# mu~ and gamma

@dataclass(frozen=True, eq=False)
class MuTilde:
    """Matrix of ``E_s^{top} (x) (A/F_{s-J+1})^J -> E_{s-J}^{top+J}``, ``g_s (x) m -> top(s) m``.

    Columns are indexed by ``source`` (quotient monomials of degree J),
    rows by ``target`` (monomials of weight exactly ``s - J``).
    """

    p: int
    s: int
    j: int
    source: tuple[Monomial, ...]
    target: tuple[Monomial, ...]
    matrix: np.ndarray

    @property
    def square(self) -> bool:
        return self.matrix.shape[0] == self.matrix.shape[1]

    @cached_property
    def rank(self) -> int:
        return linalg.rank(self.matrix, self.p) if self.matrix.size else 0

    @property
    def invertible(self) -> bool:
        return self.square and self.rank == len(self.source)

    @cached_property
    def inverse(self) -> np.ndarray:
        if not self.square:
            raise linalg.SingularMatrix(f"mu~ for s={self.s}, j={self.j} is {self.matrix.shape}")
        return linalg.inverse(self.matrix, self.p)


@lru_cache(maxsize=None)
def _mu_tilde(p: int, s: int, j: int) -> MuTilde:
    ctx = as_context(p)
    lvl = s - j
    src = tuple(quotient_basis(lvl + 1, j, ctx))
    deg = top_degree(s, p) + j
    ctx.check(deg)
    tgt = tuple(monomials_by_weight(deg, ctx, lo=lvl, hi=lvl)) if lvl >= 0 else ()
    pos = {m: k for k, m in enumerate(tgt)}
    mat = np.zeros((len(tgt), len(src)), dtype=np.int64)
    g = top_element(s, ctx)
    for col, m in enumerate(src):
        prod = weight_part(milnor_product(g, Element({m: 1}, p), ctx), lvl)
        for t, c in prod.items():
            mat[pos[t], col] = c
    return MuTilde(p, s, j, src, tgt, mat)


def mu_tilde(s: int, j: int, ctx: PrimeContext | int) -> MuTilde:
    """``mu~_s^{top(s), j}`` for ``s = 2i + e``."""
    if s < 0 or j < 0:
        raise ValueError("indices must be nonnegative")
    return _mu_tilde(as_context(ctx).p, s, j)


def kappa(j: int, eps: int) -> int:
    return eps if j % 2 == 0 else 1 - eps


def gamma_source_degree(j: int, eps: int, p: int) -> int:
    """Degree of the operations fed to ``gamma_{i,j,eps}``."""
    return p * j - (p - 2) * (eps - kappa(j, eps))


def gamma(i: int, j: int, eps: int, theta: Element, ctx: PrimeContext | int | None = None) -> Element:
    """``gamma_{i,j,eps}(theta (x) g_{2i-j+eps})`` as the class ``c`` with value ``g_{2i+eps} (x) c``.

    ``c`` is returned as a combination of monomials of degree ``j`` and
    weight ``<= 2i - j + eps``, i.e. an element of ``(A/F_{2i-j+eps+1})^j``.
    """
    p = theta.p
    ctx = as_context(ctx if ctx is not None else p)
    if min(i, j) < 0 or eps not in (0, 1):
        raise ValueError(f"gamma index out of range: {(i, j, eps)}")
    s_src = 2 * i - j + eps
    if s_src < 0:
        raise ValueError(f"gamma index out of range: {(i, j, eps)}")
    d = gamma_source_degree(j, eps, p)
    if theta and theta.degree != d:
        raise ValueError(f"gamma_{(i, j, eps)} takes operations of degree {d}")
    mt = mu_tilde(2 * i + eps, j, ctx)
    if not theta or not mt.source:
        return Element.zero(p)
    x = weight_part(milnor_product(theta, top_element(s_src, ctx), ctx), s_src)
    pos = {m: k for k, m in enumerate(mt.target)}
    v = np.zeros(len(mt.target), dtype=np.int64)
    for m, c in x.items():
        v[pos[m]] = c
    sol = mt.inverse @ v % p
    return Element({m: int(c) for m, c in zip(mt.source, sol) if c}, p)
