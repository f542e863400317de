"""Free graded-commutative algebras over F_p, optionally truncated.

A monomial is a tuple of ``(generator index, exponent)`` pairs sorted by
index.  Odd generators anticommute (at odd primes) and square to zero;
truncations ``g^t = 0`` make test rings finite.  Degrees may be negative,
as long as enumeration stays finite.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Sequence

import numpy as np

from .sparse import SparseVector

RingMonomial = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Generator:
    name: Hashable
    degree: int
    parity: int | None = None
    truncation: int | None = None  # g^truncation = 0

    @property
    def odd(self) -> bool:
        return bool(self.degree % 2 if self.parity is None else self.parity)


class RingElement(SparseVector):
    __slots__ = ("ring",)

    def __init__(self, terms=None, p: int = 2, ring: "GradedAlgebra | None" = None):
        super().__init__(terms, p)
        self.ring = ring

    def _new(self, terms):
        return RingElement(terms, self.p, self.ring)

    def zero_like(self) -> "RingElement":
        return RingElement({}, self.p, self.ring)

    def _label_degree(self, m: RingMonomial) -> int:
        return self.ring.monomial_degree(m)

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.p == other.p and self._terms == other._terms
        return super().__eq__(other)

    __hash__ = SparseVector.__hash__

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        out = dict(self._terms)
        for k, c in other.items():
            out[k] = out.get(k, 0) + c
        return self._new(out)

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return self.ring.multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "RingElement":
        out, base = self.ring.one(), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __str__(self) -> str:
        return self.ring.format(self)

    def __repr__(self) -> str:
        return f"RingElement({self})"


class GradedAlgebra:
    """Free graded-commutative algebra on ``generators`` modulo their truncations."""

    def __init__(self, p: int, generators: Sequence[Generator], name: str = "R"):
        self.p = p
        self.name = name
        gens = []
        for g in generators:
            if p != 2 and g.odd and (g.truncation is None or g.truncation > 2):
                g = Generator(g.name, g.degree, g.parity, 2)
            gens.append(g)
        self.generators = tuple(gens)
        self.index = {g.name: k for k, g in enumerate(self.generators)}

    # monomials -----------------------------------------------------------
    def monomial_degree(self, m: RingMonomial) -> int:
        return sum(self.generators[k].degree * e for k, e in m)

    def _odd_list(self, m: RingMonomial) -> list[int]:
        return [k for k, e in m if self.generators[k].odd and e % 2]

    def monomial_product(self, a: RingMonomial, b: RingMonomial) -> tuple[tuple[RingMonomial, int], ...]:
        exps = dict(a)
        for k, e in b:
            exps[k] = exps.get(k, 0) + e
            t = self.generators[k].truncation
            if t is not None and exps[k] >= t:
                return ()
        sign = 1
        if self.p != 2:
            odd_b = self._odd_list(b)
            # move each odd factor of b left past the later odd factors of a
            for k, e in a:
                if self.generators[k].odd and e % 2:
                    sign *= (-1) ** sum(1 for j in odd_b if j < k)
        return ((tuple(sorted(exps.items())), sign % self.p),)

    def multiply(self, x: RingElement, y: RingElement) -> RingElement:
        out: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for m, c in self.monomial_product(a, b):
                    out[m] = out.get(m, 0) + c * ca * cb
        return RingElement(out, self.p, self)

    # elements ------------------------------------------------------------
    def element(self, terms=None) -> RingElement:
        return RingElement(terms, self.p, self)

    def zero(self) -> RingElement:
        return RingElement({}, self.p, self)

    def one(self) -> RingElement:
        return RingElement({(): 1}, self.p, self)

    def scalar(self, c: int) -> RingElement:
        return RingElement({(): c}, self.p, self)

    def gen(self, name: Hashable) -> RingElement:
        return RingElement({((self.index[name], 1),): 1}, self.p, self)

    def monomial(self, exponents: dict) -> RingElement:
        """Ordered product of generators, ``{name: exponent}``."""
        out = self.one()
        for name, e in sorted(exponents.items(), key=lambda kv: self.index[kv[0]]):
            out = out * self.gen(name) ** e
        return out

    def format_monomial(self, m: RingMonomial) -> str:
        parts = []
        for k, e in m:
            n = self.generators[k].name
            n = "".join(map(str, n)) if isinstance(n, tuple) else str(n)
            parts.append(n if e == 1 else f"{n}^{e}")
        return " ".join(parts) or "1"

    def format(self, x: RingElement) -> str:
        from .milnor import format_terms
        items = sorted(x.items(), key=lambda kv: (self.monomial_degree(kv[0]), kv[0]))
        return format_terms((self.format_monomial(m), c) for m, c in items)

    # enumeration ---------------------------------------------------------
    def _max_exponent(self, k: int, degree_bound: int | None) -> int:
        g = self.generators[k]
        t = g.truncation
        if t is not None:
            return t - 1
        if g.degree <= 0 or degree_bound is None:
            raise ValueError(f"generator {g.name} makes degree {degree_bound} infinite-dimensional")
        return degree_bound // g.degree

    def basis(self, degree: int) -> list[RingMonomial]:
        """Monomials of the given degree, in a fixed order."""
        return list(self._basis(degree))

    def _basis(self, degree: int) -> Iterable[RingMonomial]:
        if all(g.truncation is not None for g in self.generators):
            yield from (m for m in self.all_monomials if self.monomial_degree(m) == degree)
            return
        if any(g.degree <= 0 for g in self.generators):
            raise ValueError("enumeration needs positive degrees or truncations")

        def rec(k: int, left: int) -> Iterable[list[tuple[int, int]]]:
            if k == len(self.generators):
                if left == 0:
                    yield []
                return
            g = self.generators[k]
            for e in range(min(self._max_exponent(k, left), left // g.degree) + 1):
                for rest in rec(k + 1, left - e * g.degree):
                    yield ([(k, e)] if e else []) + rest

        for m in rec(0, degree):
            yield tuple(m)

    @cached_property
    def all_monomials(self) -> tuple[RingMonomial, ...]:
        ranges = [range(self._max_exponent(k, None) + 1) for k in range(len(self.generators))]
        out = []
        for exps in itertools.product(*ranges):
            out.append(tuple((k, e) for k, e in enumerate(exps) if e))
        return tuple(sorted(out, key=lambda m: (self.monomial_degree(m), m)))

    def random_element(self, degree: int, rng: np.random.Generator) -> RingElement:
        ms = self.basis(degree)
        coeffs = rng.integers(0, self.p, size=len(ms))
        return RingElement({m: int(c) for m, c in zip(ms, coeffs)}, self.p, self)

    def homogeneous_elements(self, degree: int) -> Iterable[RingElement]:
        """Every element of the (finite) degree-``degree`` part."""
        ms = self.basis(degree)
        for coeffs in itertools.product(range(self.p), repeat=len(ms)):
            yield RingElement(dict(zip(ms, coeffs)), self.p, self)

    def with_generator(self, g: Generator) -> "GradedAlgebra":
        return GradedAlgebra(self.p, self.generators + (g,), self.name)

    def __repr__(self) -> str:
        gens = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"GradedAlgebra(p={self.p}, {self.name}[{gens}])"


class GradedTestRing(GradedAlgebra):
    """A finite graded-commutative test ring; every generator is truncated."""

    def __init__(self, p: int, generators: Sequence[Generator], name: str = "R"):
        super().__init__(p, generators, name)
        for g in self.generators:
            if g.truncation is None:
                raise ValueError(f"test ring generator {g.name} needs a truncation")

    @classmethod
    def from_json(cls, data: str | dict) -> "GradedTestRing":
        """``{"p": 3, "generators": [{"name": "y", "degree": 2, "truncation": 9}, ...]}``."""
        if isinstance(data, str):
            data = json.loads(data)
        gens = [Generator(g["name"], int(g["degree"]), g.get("parity"), g.get("truncation"))
                for g in data["generators"]]
        return cls(int(data["p"]), gens, data.get("name", "R"))

    def to_json(self) -> dict:
        return {"p": self.p, "name": self.name,
                "generators": [{"name": g.name, "degree": g.degree, "parity": int(g.odd),
                                "truncation": g.truncation} for g in self.generators]}


def truncated_polynomial(p: int, degree: int, order: int) -> GradedTestRing:
    """``F_p[y]/(y^order)``."""
    return GradedTestRing(p, [Generator("y", degree, 0, order)], f"F{p}[y]/(y^{order})")


def exterior_polynomial(p: int, odd_degree: int, even_degree: int, order: int) -> GradedTestRing:
    """``E(e) (x) F_p[y]/(y^order)``."""
    return GradedTestRing(p, [Generator("e", odd_degree, 1, 2), Generator("y", even_degree, 0, order)],
                          f"E(e)⊗F{p}[y]/(y^{order})")
