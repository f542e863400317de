"""Sparse F_p-linear combinations keyed by hashable basis labels."""
from __future__ import annotations

from typing import Callable, Hashable, Iterable, Iterator, Mapping


class DegreeMismatch(ValueError):
    pass


class SparseVector:
    """Immutable ``{basis label: nonzero coefficient mod p}``.

    Subclasses supply ``_label_degree`` so the homogeneous degree can be
    tracked; adding two homogeneous vectors of different degrees raises
    DegreeMismatch.  Heterogeneous vectors may still be built directly.
    """

    __slots__ = ("p", "_terms", "_hash")

    def __init__(self, terms: Mapping[Hashable, int] | Iterable[tuple[Hashable, int]] | None = None, p: int = 2):
        clean: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else (terms or ())
        for key, c in items:
            c = (clean.get(key, 0) + c) % p
            if c:
                clean[key] = c
            else:
                clean.pop(key, None)
        self.p = p
        self._terms = clean
        self._hash = None

    # construction helpers -------------------------------------------------
    @classmethod
    def zero(cls, p: int):
        return cls({}, p)

    @classmethod
    def basis(cls, label, p: int, coeff: int = 1):
        return cls({label: coeff}, p)

    def _new(self, terms):
        return type(self)(terms, self.p)

    # basic protocol -------------------------------------------------------
    @property
    def terms(self) -> Mapping:
        return dict(self._terms)

    def __iter__(self) -> Iterator:
        return iter(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coeff(self, label) -> int:
        return self._terms.get(label, 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self._terms
        if not isinstance(other, SparseVector) or type(other) is not type(self):
            return NotImplemented
        return self.p == other.p and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((type(self).__name__, self.p, frozenset(self._terms.items())))
        return self._hash

    # degrees ---------------------------------------------------------------
    def _label_degree(self, label) -> int:
        raise NotImplementedError

    @property
    def degree(self) -> int | None:
        """Common degree of all terms, or None for zero/heterogeneous vectors."""
        degs = {self._label_degree(k) for k in self._terms}
        return degs.pop() if len(degs) == 1 else None

    @property
    def degrees(self) -> set[int]:
        return {self._label_degree(k) for k in self._terms}

    # linear structure -----------------------------------------------------
    def _check_compatible(self, other: "SparseVector") -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.p != self.p:
            raise ValueError("elements over different primes")
        d1, d2 = self.degree, other.degree
        if d1 is not None and d2 is not None and d1 != d2:
            raise DegreeMismatch(f"adding degree {d1} to degree {d2}")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check_compatible(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int):
        c %= self.p
        if not c:
            return self.zero(self.p)
        return self._new({k: v * c for k, v in self._terms.items()})

    def truncate(self, keep: Callable[[Hashable], bool]):
        return self._new({k: c for k, c in self._terms.items() if keep(k)})


class Tensor(SparseVector):
    """Element of a tensor power; labels are tuples of factor labels.

    ``factor_degree`` gives the degree of one factor label and is needed
    for Koszul signs and degree tracking.
    """

    __slots__ = ("factor_degree",)

    def __init__(self, terms=None, p: int = 2, factor_degree: Callable[[Hashable], int] | None = None):
        super().__init__(terms, p)
        self.factor_degree = factor_degree

    def _new(self, terms):
        return Tensor(terms, self.p, self.factor_degree)

    def _label_degree(self, label) -> int:
        return sum(self.factor_degree(x) for x in label)

    def __eq__(self, other):
        if isinstance(other, Tensor):
            return self.p == other.p and self._terms == other._terms
        return super().__eq__(other)

    __hash__ = SparseVector.__hash__

    def _check_compatible(self, other):
        if not isinstance(other, Tensor) or other.p != self.p:
            raise TypeError("incompatible tensor")


def koszul_sign(*degree_pairs: tuple[int, int]) -> int:
    """(-1)^(sum of products) for the given degree pairs."""
    return -1 if sum(a * b for a, b in degree_pairs) % 2 else 1


def tensor_multiply(x: Tensor, y: Tensor, mul: Callable, deg: Callable[[Hashable], int]) -> Tensor:
    """``(a (x) b)(c (x) d) = (-1)^{|b||c|} ac (x) bd`` extended to any arity.

    ``mul(m, n)`` returns an iterable of ``(label, coeff)`` pairs.
    """
    p = x.p
    out: dict = {}
    for lx, cx in x.items():
        for ly, cy in y.items():
            sign = 1
            # moving factor ly[k] past lx[k+1:]
            for k in range(len(ly)):
                dk = deg(ly[k])
                if dk % 2:
                    for m in lx[k + 1:]:
                        if deg(m) % 2:
                            sign = -sign
            partial = [((), sign * cx * cy)]
            for a, b in zip(lx, ly):
                nxt = []
                prods = list(mul(a, b))
                if not prods:
                    partial = []
                    break
                for labels, c in partial:
                    for lab, c2 in prods:
                        nxt.append((labels + (lab,), c * c2))
                partial = nxt
            for labels, c in partial:
                out[labels] = (out.get(labels, 0) + c) % p
    return Tensor({k: v for k, v in out.items() if v}, p, x.factor_degree or y.factor_degree)
