"""The Milnor basis Q(E) P(R) (Sq(R) at p = 2): elements, product, coproduct."""
from __future__ import annotations

from functools import lru_cache
from itertools import product as cartesian
from typing import Iterable, Iterator, NamedTuple, Sequence

from .core import (PrimeContext, as_context, divides, enumerate_milnor_index, exterior_from_indices,
                   exterior_indices, index_degree, index_weight, multinomial_mod_p, trim)
from .sparse import SparseVector, Tensor, tensor_multiply


class Monomial(NamedTuple):
    """Index ``(E, R)`` of ``Q(E) P(R)``; also used for the dual ``tau(E) xi(R)``."""

    E: tuple[int, ...] = ()
    R: tuple[int, ...] = ()

    @classmethod
    def make(cls, E: Sequence[int] = (), R: Sequence[int] = ()) -> "Monomial":
        E, R = trim(E), trim(R)
        if any(e not in (0, 1) for e in E):
            raise ValueError(f"exterior exponents must be 0 or 1: {E}")
        if any(r < 0 for r in R):
            raise ValueError(f"negative exponent in {R}")
        return cls(E, R)


UNIT = Monomial((), ())


def monomial_degree(m: Monomial, p: int) -> int:
    return index_degree(m.E, m.R, p)


def weight(m: Monomial, p: int) -> int:
    """``|E| + 2|R|`` (``|R|`` at p=2); the exact excess-filtration level of the monomial."""
    return index_weight(m.E, m.R, p)


@lru_cache(maxsize=None)
def degree_function(p: int):
    def deg(m: Monomial) -> int:
        return index_degree(m.E, m.R, p)
    return deg


def _seq_text(seq: Sequence[int]) -> str:
    return ",".join(str(x) for x in seq)


def format_monomial(m: Monomial, p: int) -> str:
    if p == 2:
        return f"Sq({_seq_text(m.R)})" if m.R else "1"
    parts = []
    if m.E:
        parts.append(f"Q({_seq_text(m.E)})")
    if m.R:
        parts.append(f"P({_seq_text(m.R)})")
    return " ".join(parts) or "1"


def format_terms(terms: Iterable[tuple[str, int]]) -> str:
    out = [text if c == 1 else f"{c} {text}" for text, c in terms]
    return " + ".join(out) if out else "0"


class Element(SparseVector):
    """Sparse F_p-combination of Milnor basis monomials."""

    __slots__ = ()

    def _label_degree(self, m: Monomial) -> int:
        return index_degree(m.E, m.R, self.p)

    @classmethod
    def monomial(cls, E: Sequence[int] = (), R: Sequence[int] = (), p: int = 2, coeff: int = 1) -> "Element":
        if p == 2 and any(E):
            raise ValueError("no exterior part at p=2")
        return cls({Monomial.make(E, R): coeff}, p)

    @classmethod
    def one(cls, p: int) -> "Element":
        return cls({UNIT: 1}, p)

    def sorted_items(self) -> list[tuple[Monomial, int]]:
        return sorted(self._terms.items(), key=lambda kv: (self._label_degree(kv[0]), kv[0]))

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, Element):
            return milnor_product(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __str__(self) -> str:
        return format_terms((format_monomial(m, self.p), c) for m, c in self.sorted_items())

    def __repr__(self) -> str:
        return f"Element(p={self.p}, {self})"


def Sq(*R: int) -> Element:
    return Element.monomial((), R, 2)


def P(*R: int, p: int) -> Element:
    return Element.monomial((), R, p)


def Q(*E: int, p: int) -> Element:
    """``Q(E)`` from the 0/1 sequence ``E``; ``Q(1, p=p)`` is the Bockstein."""
    return Element.monomial(E, (), p)


def Qk(k: int, p: int) -> Element:
    return Element.monomial(exterior_from_indices([k]), (), p)


def new_tensor(terms, p: int) -> Tensor:
    return Tensor(terms, p, degree_function(p))


# ---------------------------------------------------------------------------
# product

def _row_choices(r: int, col_left: Sequence[int], p: int, j: int | None = None) -> Iterator[tuple[int, ...]]:
    """Vectors ``(x_1..x_c)`` with ``sum p^j x_j <= r`` and ``x_j <= col_left[j-1]``."""
    if j is None:
        j = len(col_left)
    if j == 0:
        yield ()
        return
    pj = p ** j
    for x in range(min(r // pj, col_left[j - 1]) + 1):
        for rest in _row_choices(r - x * pj, col_left, p, j - 1):
            yield rest + (x,)


@lru_cache(maxsize=None)
def _p_product(p: int, R: tuple[int, ...], S: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], int], ...]:
    """``P(R) P(S)`` as ``((T, coeff), ...)`` by summing over Milnor matrices."""
    if not R:
        return ((S, 1),)
    if not S:
        return ((R, 1),)
    rows, cols = len(R), len(S)
    out: dict[tuple[int, ...], int] = {}

    def finish(matrix: list[tuple[int, ...]], col_left: list[int]) -> None:
        # matrix[i-1] = (x_i0, x_i1, ..., x_ic); col_left[j-1] = x_0j
        ndiag = rows + cols
        coeff = 1
        T = []
        for n in range(1, ndiag + 1):
            diag = []
            if n <= cols:
                diag.append(col_left[n - 1])
            for i in range(1, min(n, rows) + 1):
                j = n - i
                if j <= cols:
                    diag.append(matrix[i - 1][j])
            coeff = coeff * multinomial_mod_p(diag, p) % p
            if not coeff:
                return
            T.append(sum(diag))
        T = trim(T)
        out[T] = (out.get(T, 0) + coeff) % p

    def rec(i: int, matrix: list[tuple[int, ...]], col_left: list[int]) -> None:
        if i > rows:
            finish(matrix, col_left)
            return
        r = R[i - 1]
        for row in _row_choices(r, col_left, p):
            used = sum(x * p ** (j + 1) for j, x in enumerate(row))
            rec(i + 1, matrix + [(r - used, *row)],
                [c - x for c, x in zip(col_left, row)])

    rec(1, [], list(S))
    return tuple((T, c) for T, c in sorted(out.items()) if c)


def _commute_q(p: int, qs: tuple[int, ...], R: tuple[int, ...], k: int):
    """Rewrite ``Q(qs) P(R) Q_k`` as ``sum sign Q(qs') P(R')``."""
    pk = p ** k
    for j in range(len(R) + 1):
        q = k + j
        if q in qs:
            continue
        if j == 0:
            R2 = R
        else:
            if R[j - 1] < pk:
                continue
            R2 = trim(R[:j - 1] + (R[j - 1] - pk,) + R[j:])
        inversions = sum(1 for x in qs if x > q)
        yield tuple(sorted(qs + (q,))), R2, (-1) ** inversions


@lru_cache(maxsize=None)
def _monomial_product(p: int, a: Monomial, b: Monomial) -> tuple[tuple[Monomial, int], ...]:
    states: dict[tuple[tuple[int, ...], tuple[int, ...]], int] = {(exterior_indices(a.E), a.R): 1}
    for k in exterior_indices(b.E):
        nxt: dict = {}
        for (qs, R), c in states.items():
            for qs2, R2, s in _commute_q(p, qs, R, k):
                nxt[(qs2, R2)] = (nxt.get((qs2, R2), 0) + s * c) % p
        states = {key: c for key, c in nxt.items() if c}
    out: dict[Monomial, int] = {}
    for (qs, R), c in states.items():
        E = exterior_from_indices(qs)
        for T, c2 in _p_product(p, R, b.R):
            m = Monomial(E, T)
            out[m] = (out.get(m, 0) + c * c2) % p
    return tuple((m, c) for m, c in sorted(out.items()) if c)


def monomial_product(a: Monomial, b: Monomial, p: int) -> tuple[tuple[Monomial, int], ...]:
    return _monomial_product(p, a, b)


def _check_pair(a: Element, b: Element) -> int:
    if a.p != b.p:
        raise ValueError("elements over different primes")
    return a.p


def milnor_product(a: Element, b: Element, ctx: PrimeContext | int | None = None) -> Element:
    p = _check_pair(a, b)
    ctx = as_context(ctx if ctx is not None else p)
    for d1 in a.degrees:
        for d2 in b.degrees:
            ctx.check(d1 + d2)
    out: dict[Monomial, int] = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            for m, c in _monomial_product(p, m1, m2):
                out[m] = out.get(m, 0) + c * c1 * c2
    return Element(out, p)


# ---------------------------------------------------------------------------
# coproduct

def _splittings(R: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    for S in cartesian(*(range(r + 1) for r in R)):
        yield trim(S), trim(r - s for r, s in zip(R, S))


@lru_cache(maxsize=None)
def _monomial_coproduct(p: int, m: Monomial) -> tuple[tuple[tuple[Monomial, Monomial], int], ...]:
    qs = exterior_indices(m.E)
    out = {}
    for mask in range(1 << len(qs)):
        left = [q for b, q in enumerate(qs) if mask >> b & 1]
        right = [q for b, q in enumerate(qs) if not mask >> b & 1]
        inv = sum(1 for a in right for b in left if a < b)
        sign = (-1) ** inv % p
        E1, E2 = exterior_from_indices(left), exterior_from_indices(right)
        for S, T in _splittings(m.R):
            out[(Monomial(E1, S), Monomial(E2, T))] = sign
    return tuple(sorted(out.items()))


def monomial_coproduct(m: Monomial, p: int):
    return _monomial_coproduct(p, m)


def milnor_coproduct(a: Element, ctx: PrimeContext | int | None = None) -> Tensor:
    ctx = as_context(ctx if ctx is not None else a.p)
    for d in a.degrees:
        ctx.check(d)
    out: dict = {}
    for m, c in a.items():
        for pair, s in _monomial_coproduct(a.p, m):
            out[pair] = out.get(pair, 0) + c * s
    return new_tensor(out, a.p)


def tensor_monomial_product(x: Tensor, y: Tensor) -> Tensor:
    """Product in ``A (x) A`` with the Koszul sign."""
    p = x.p
    return tensor_multiply(x, y, lambda m, n: _monomial_product(p, m, n), degree_function(p))


def format_tensor(t: Tensor) -> str:
    p = t.p
    deg = degree_function(p)
    items = sorted(t.items(), key=lambda kv: (tuple(deg(m) for m in kv[0]), kv[0]))
    return format_terms((" ⊗ ".join(format_monomial(m, p) for m in key), c) for key, c in items)


# ---------------------------------------------------------------------------
# p-th root

def pth_root(a: Element, ctx: PrimeContext | int | None = None) -> Element:
    """Dual of the p-th power map: ``Q(E)P(R) -> P(R/p)`` if ``E = 0`` and ``p | R``, else 0."""
    p = a.p
    ctx = as_context(ctx if ctx is not None else p)
    if not a:
        return Element.zero(p)
    d = a.degree
    if d is None:
        raise ValueError("pth_root needs a homogeneous element")
    if d % p:
        raise ValueError(f"degree {d} is not divisible by {p}")
    ctx.check(d)
    out = {}
    for m, c in a.items():
        if not any(m.E) and divides(p, m.R):
            out[Monomial((), trim(r // p for r in m.R))] = c
    return Element(out, p)


# ---------------------------------------------------------------------------
# bases

def basis(n: int, ctx: PrimeContext | int) -> list[Monomial]:
    """Milnor monomials of degree ``n`` in canonical (lexicographic ``(E, R)``) order."""
    return [Monomial(E, R) for E, R in enumerate_milnor_index(n, ctx)]


def to_vector(a: Element, monomials: Sequence[Monomial]) -> list[int]:
    return [a.coeff(m) for m in monomials]


def from_vector(v: Iterable[int], monomials: Sequence[Monomial], p: int) -> Element:
    return Element({m: int(c) for m, c in zip(monomials, v) if int(c) % p}, p)
