"""The dual Steenrod algebra E(tau_0, tau_1, ...) (x) F_p[xi_1, xi_2, ...] (F_2[zeta_1, ...] at p=2).

Dual monomials reuse :class:`Monomial`; ``(E, R)`` stands for
``tau(E) xi(R)`` and pairs to 1 with ``Q(E) P(R)``.  Because both bases are
enumerated in the same order, pairing matrices are identities.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from . import linalg
from .conditions import FAMILIES as PRIMAL_FAMILIES
from .core import PrimeContext, as_context, exterior_from_indices, exterior_indices, trim
from .filtration import GradedSubspace, filtration_basis, top_degree
from .milnor import (Element, Monomial, UNIT, basis, degree_function, format_terms, milnor_coproduct,
                     monomial_product, weight)
from .report import Report
from .sparse import SparseVector, Tensor, tensor_multiply


def level(m: Monomial, p: int) -> int:
    """Filtration level ``|E| + 2|R|`` (``|R|`` at p=2)."""
    return weight(m, p)


def format_dual_monomial(m: Monomial, p: int) -> str:
    parts = [f"tau_{k}" for k in exterior_indices(m.E)]
    name = "zeta" if p == 2 else "xi"
    for k, r in enumerate(m.R, start=1):
        if r == 1:
            parts.append(f"{name}_{k}")
        elif r:
            parts.append(f"{name}_{k}^{r}")
    return " ".join(parts) or "1"


class DualElement(SparseVector):
    __slots__ = ()

    def _label_degree(self, m: Monomial) -> int:
        return degree_function(self.p)(m)

    @classmethod
    def monomial(cls, E: Sequence[int] = (), R: Sequence[int] = (), p: int = 2, coeff: int = 1) -> "DualElement":
        return cls({Monomial.make(E, R): coeff}, p)

    @classmethod
    def one(cls, p: int) -> "DualElement":
        return cls({UNIT: 1}, p)

    def sorted_items(self):
        deg = degree_function(self.p)
        return sorted(self._terms.items(), key=lambda kv: (deg(kv[0]), kv[0]))

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, DualElement):
            return dual_product(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "DualElement":
        out = DualElement.one(self.p)
        for _ in range(n):
            out = out * self
        return out

    def __str__(self) -> str:
        return format_terms((format_dual_monomial(m, self.p), c) for m, c in self.sorted_items())

    def __repr__(self) -> str:
        return f"DualElement(p={self.p}, {self})"


def tau(k: int, p: int) -> DualElement:
    return DualElement({Monomial(exterior_from_indices([k]), ()): 1}, p)


def xi(k: int, p: int, power: int = 1) -> DualElement:
    """``xi_k^power`` (``zeta_k`` at p=2); ``xi_0 = 1``."""
    if k == 0:
        return DualElement.one(p)
    return DualElement({Monomial((), trim((0,) * (k - 1) + (power,))): 1}, p)


zeta = xi


# ---------------------------------------------------------------------------
# product

@lru_cache(maxsize=None)
def _dual_monomial_product(p: int, a: Monomial, b: Monomial) -> tuple[tuple[Monomial, int], ...]:
    ea, eb = exterior_indices(a.E), exterior_indices(b.E)
    if set(ea) & set(eb):
        return ()
    inv = sum(1 for x in ea for y in eb if x > y)
    n = max(len(a.R), len(b.R))
    R = trim((a.R[k] if k < len(a.R) else 0) + (b.R[k] if k < len(b.R) else 0) for k in range(n))
    return ((Monomial(exterior_from_indices(ea + eb), R), (-1) ** inv % p),)


def dual_monomial_product(a: Monomial, b: Monomial, p: int):
    return _dual_monomial_product(p, a, b)


def dual_product(a: DualElement, b: DualElement, ctx: PrimeContext | int | None = None) -> DualElement:
    if a.p != b.p:
        raise ValueError("elements over different primes")
    p = a.p
    ctx = as_context(ctx if ctx is not None else p)
    for d1 in a.degrees:
        for d2 in b.degrees:
            ctx.check(d1 + d2)
    out: dict = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            for m, c in _dual_monomial_product(p, m1, m2):
                out[m] = out.get(m, 0) + c * c1 * c2
    return DualElement(out, p)


# ---------------------------------------------------------------------------
# pairing

def pairing(x: Element, u: DualElement) -> int:
    """Diagonal pairing of the Milnor basis with the monomial basis."""
    if x.p != u.p:
        raise ValueError("elements over different primes")
    return sum(c * u.coeff(m) for m, c in x.items()) % x.p


def tensor_pairing(x: Tensor, u: Tensor) -> int:
    """``<a (x) b, c (x) d> = <a, c><b, d>``."""
    return sum(c * u.coeff(k) for k, c in x.items()) % x.p


def pairing_matrix(n: int, ctx: PrimeContext | int) -> np.ndarray:
    ctx = as_context(ctx)
    ms = basis(n, ctx)
    out = np.zeros((len(ms), len(ms)), dtype=np.int64)
    for r, m in enumerate(ms):
        x = Element({m: 1}, ctx.p)
        for c, u in enumerate(ms):
            out[r, c] = pairing(x, DualElement({u: 1}, ctx.p))
    return out


# ---------------------------------------------------------------------------
# coproduct

def _mul_dual(p: int):
    return lambda a, b: _dual_monomial_product(p, a, b)


def _dual_tensor(terms, p: int) -> Tensor:
    return Tensor(terms, p, degree_function(p))


@lru_cache(maxsize=None)
def _generator_coproduct(p: int, kind: str, k: int) -> Tensor:
    """Milnor's formulas ``xi_k -> sum xi_{k-i}^{p^i} (x) xi_i`` and ``tau_k -> tau_k (x) 1 + sum xi_{k-i}^{p^i} (x) tau_i``."""
    terms: dict = {}
    for i in range(k + 1):
        left = next(iter(xi(k - i, p, p ** i)))
        if kind == "xi":
            right = next(iter(xi(i, p)))
        else:
            right = next(iter(tau(i, p)))
        terms[(left, right)] = 1
    if kind == "tau":
        terms[(next(iter(tau(k, p))), UNIT)] = 1
    return _dual_tensor(terms, p)


@lru_cache(maxsize=None)
def _xi_power_coproduct(p: int, k: int, r: int) -> Tensor:
    if r == 0:
        return _dual_tensor({(UNIT, UNIT): 1}, p)
    half = _xi_power_coproduct(p, k, r // 2)
    out = tensor_multiply(half, half, _mul_dual(p), degree_function(p))
    if r % 2:
        out = tensor_multiply(out, _generator_coproduct(p, "xi", k), _mul_dual(p), degree_function(p))
    return out


@lru_cache(maxsize=None)
def _dual_monomial_coproduct(p: int, m: Monomial) -> Tensor:
    out = _dual_tensor({(UNIT, UNIT): 1}, p)
    mul, deg = _mul_dual(p), degree_function(p)
    for k in exterior_indices(m.E):
        out = tensor_multiply(out, _generator_coproduct(p, "tau", k), mul, deg)
    for k, r in enumerate(m.R, start=1):
        if r:
            out = tensor_multiply(out, _xi_power_coproduct(p, k, r), mul, deg)
    return out


def dual_coproduct(u: DualElement, ctx: PrimeContext | int | None = None) -> Tensor:
    """Coproduct of the dual algebra, multiplicative from its values on generators."""
    p = u.p
    ctx = as_context(ctx if ctx is not None else p)
    for d in u.degrees:
        ctx.check(d)
    out: dict = {}
    for m, c in u.items():
        for key, c2 in _dual_monomial_coproduct(p, m).items():
            out[key] = out.get(key, 0) + c * c2
    return _dual_tensor(out, p)


def format_dual_tensor(t: Tensor) -> str:
    p = t.p
    deg = degree_function(p)
    items = sorted(t.items(), key=lambda kv: (tuple(deg(m) for m in kv[0]), kv[0]))
    return format_terms((" ⊗ ".join(format_dual_monomial(m, p) for m in key), c) for key, c in items)


# ---------------------------------------------------------------------------
# filtration

def _dual_subspace(p: int, n: int, i: int, elements) -> GradedSubspace:
    return GradedSubspace(p, n, i, tuple(elements), tuple(basis(n, p)))


def dual_filtration_basis(i: int, n: int, kind: str, ctx: PrimeContext | int) -> GradedSubspace:
    """``(F_i A_*)_n``: monomials of level ``<= i``, or the annihilator of ``(F_{i+1} A)^n``."""
    ctx = as_context(ctx)
    ctx.check(n)
    p = ctx.p
    if kind == "monomial":
        elems = [DualElement({m: 1}, p) for m in basis(n, ctx) if level(m, p) <= i]
    elif kind == "annihilator":
        primal = filtration_basis(i + 1, n, "admissible", ctx)
        ms = basis(n, ctx)
        if primal.matrix.shape[0]:
            kernel = linalg.nullspace(primal.matrix, p)
        else:
            kernel = np.eye(len(ms), dtype=np.int64)
        elems = [DualElement({m: int(c) for m, c in zip(ms, row) if c}, p) for row in kernel]
    else:
        raise ValueError(f"unknown dual basis kind {kind!r}")
    return _dual_subspace(p, n, i, elems)


def dual_e_dim(s: int, k: int, ctx: PrimeContext | int) -> int:
    """``dim E_s^k A_* = dim F_s - dim F_{s-1}`` from the annihilator description."""
    return (dual_filtration_basis(s, k, "annihilator", ctx).dim
            - dual_filtration_basis(s - 1, k, "annihilator", ctx).dim)


# ---------------------------------------------------------------------------
# verification

def check_pairing_identity(ctx: PrimeContext | int, max_degree: int | None = None) -> Report:
    ctx = as_context(ctx)
    max_degree = min(ctx.degree_cap, 40) if max_degree is None else max_degree
    rep = Report("pairing", ctx.p)
    for n in range(max_degree + 1):
        m = pairing_matrix(n, ctx)
        rep.add(bool(np.array_equal(m, np.eye(len(m), dtype=np.int64))), n=n, dim=len(m))
    return rep


def check_adjointness(ctx: PrimeContext | int, max_degree: int = 16) -> Report:
    """``<delta x, u (x) v> = <x, uv>`` and ``<mu* u, x (x) y> = <u, xy>`` on all basis elements."""
    ctx = as_context(ctx)
    p = ctx.p
    rep = Report("adjoint", p)
    for n in range(max_degree + 1):
        ms = basis(n, ctx)
        # coefficient tables indexed by (target, left, right)
        via_product: dict = {}
        via_dual_product: dict = {}
        for a in range(n + 1):
            for x in basis(a, ctx):
                for y in basis(n - a, ctx):
                    for m, c in monomial_product(x, y, p):
                        via_product[(m, x, y)] = c
                    for m, c in _dual_monomial_product(p, x, y):
                        via_dual_product[(m, x, y)] = c
        via_dual_coproduct = {}
        via_coproduct = {}
        for m in ms:
            for (x, y), c in _dual_monomial_coproduct(p, m).items():
                via_dual_coproduct[(m, x, y)] = c
            for (x, y), c in milnor_coproduct(Element({m: 1}, p), ctx).items():
                via_coproduct[(m, x, y)] = c
        bad1 = _first_difference(via_product, via_dual_coproduct)
        bad2 = _first_difference(via_dual_product, via_coproduct)
        rep.add(bad1 is None, witness=bad1, n=n, side="dual_coproduct")
        rep.add(bad2 is None, witness=bad2, n=n, side="milnor_coproduct")
    return rep


def _first_difference(a: dict, b: dict):
    for key in sorted(set(a) | set(b)):
        if a.get(key, 0) != b.get(key, 0):
            return [str(k) for k in key] + [a.get(key, 0), b.get(key, 0)]
    return None


def check_dual_filt3(ctx: PrimeContext | int, max_level: int = 12, max_degree: int = 30) -> Report:
    """Monomial and annihilator descriptions agree, with the dimension identity."""
    ctx = as_context(ctx)
    rep = Report("dual_filt3", ctx.p)
    for n in range(max_degree + 1):
        total = len(basis(n, ctx))
        for i in range(-1, max_level + 1):
            mono = dual_filtration_basis(i, n, "monomial", ctx)
            ann = dual_filtration_basis(i, n, "annihilator", ctx)
            primal = filtration_basis(i + 1, n, "admissible", ctx).dim
            ok = linalg.same_row_space(mono.matrix, ann.matrix, ctx.p) if mono.basis or ann.basis else True
            ok = ok and mono.dim == ann.dim == total - primal
            rep.add(ok, witness={"monomial": mono.dim, "annihilator": ann.dim, "expected": total - primal}, i=i, n=n)
    return rep


def check_dual_e1(ctx, max_degree: int = 20, min_level: int = -3) -> Report:
    ctx = as_context(ctx)
    rep = Report("E1*", ctx.p)
    for n in range(max_degree + 1):
        for i in range(min_level, 0):
            d = dual_filtration_basis(i, n, "annihilator", ctx).dim
            rep.add(d == 0, witness={"dim": d}, i=i, n=n)
    return rep


def check_dual_e2(ctx, max_degree: int = 20) -> Report:
    ctx = as_context(ctx)
    rep = Report("E2*", ctx.p)
    for n in range(max_degree + 1):
        sub = dual_filtration_basis(n, n, "annihilator", ctx)
        rep.add(sub.dim == sub.ambient_dim, witness={"dim": sub.dim}, i=n, n=n)
    return rep


def check_dual_e3(ctx, max_level: int = 10, max_degree: int = 14) -> Report:
    """Left coideals: ``mu*(F_i) in A_* (x) F_i``."""
    ctx = as_context(ctx)
    p = ctx.p
    rep = Report("E3*", p)
    for n in range(max_degree + 1):
        data = []
        for m in basis(n, ctx):
            worst = max(level(b, p) for _, b in _dual_monomial_coproduct(p, m))
            data.append((level(m, p), worst, m))
        for i in range(max_level + 1):
            bad = next((d for d in data if d[0] <= i < d[1]), None)
            rep.add(bad is None, witness=bad and format_dual_monomial(bad[2], p), i=i, n=n)
    return rep


def check_dual_e4(ctx, max_level: int = 10, max_degree: int = 14) -> Report:
    """``mu*(F_i A_k)`` in the sum over j of ``F_{i+j} A_{k-j} (x) A_j``, checked term by term."""
    ctx = as_context(ctx)
    p = ctx.p
    deg = degree_function(p)
    rep = Report("E4*", p)
    for n in range(max_degree + 1):
        data = []
        for m in basis(n, ctx):
            excess_level = max(level(a, p) - deg(b) for a, b in _dual_monomial_coproduct(p, m))
            data.append((level(m, p), excess_level, m))
        for i in range(max_level + 1):
            bad = next((d for d in data if d[0] <= i and d[1] > i), None)
            rep.add(bad is None, witness=bad and format_dual_monomial(bad[2], p), i=i, n=n)
    return rep


def check_dual_e5(ctx, max_level: int = 10, max_degree: int = 14) -> Report:
    """``F_j * F_k`` lies in ``F_{j+k}``."""
    ctx = as_context(ctx)
    p = ctx.p
    rep = Report("E5*", p)
    for d1 in range(max_degree + 1):
        for d2 in range(max_degree + 1 - d1):
            bad = None
            for a in basis(d1, ctx):
                for b in basis(d2, ctx):
                    for m, _ in _dual_monomial_product(p, a, b):
                        if level(m, p) > level(a, p) + level(b, p):
                            bad = [format_dual_monomial(a, p), format_dual_monomial(b, p)]
            rep.add(bad is None, witness=bad, degree=d1, other_degree=d2)
    return rep


def check_dual_e6(ctx, max_level: int = 17, max_degree: int = 30) -> Report:
    ctx = as_context(ctx)
    p = ctx.p
    rep = Report("E6*", p)
    for s in range(max_level + 1):
        for k in range(max_degree + 1):
            if k < top_degree(s, p) or (s + k) % (2 * p) not in (0, 2):
                d = dual_e_dim(s, k, ctx)
                rep.add(d == 0, witness={"dim": d}, level=s, degree=k)
    return rep


def check_dual_e7(ctx, max_level: int = 17) -> Report:
    """One-dimensional top quotient, spanned by ``tau_0^e xi_1^i`` (``zeta_1^s``)."""
    ctx = as_context(ctx)
    p = ctx.p
    rep = Report("E7*", p)
    for s in range(max_level + 1):
        k = top_degree(s, p)
        if k > ctx.degree_cap:
            continue
        d = dual_e_dim(s, k, ctx)
        if p == 2:
            w = xi(1, p, s)
        else:
            w = (tau(0, p) if s % 2 else DualElement.one(p)) * xi(1, p, s // 2)
        top = dual_filtration_basis(s, k, "annihilator", ctx)
        below = dual_filtration_basis(s - 1, k, "annihilator", ctx)
        ok = d == 1 and top.contains(w) and not below.contains(w)
        rep.add(ok, witness={"dim": d}, level=s, degree=k)
    return rep


DUAL_FAMILIES = {
    "e1*": check_dual_e1, "e2*": check_dual_e2, "e3*": check_dual_e3, "e4*": check_dual_e4,
    "e5*": check_dual_e5, "e6*": check_dual_e6, "e7*": check_dual_e7,
    "dual_filt3": check_dual_filt3, "pairing": check_pairing_identity, "adjoint": check_adjointness,
}


def check_e1_7(ctx: PrimeContext | int, max_level: int = 8, max_degree: int = 14) -> Report:
    """For each l, (El) on the algebra and (El*) on the dual have the same outcome."""
    ctx = as_context(ctx)
    rep = Report("e1-7", ctx.p)
    for l in range(1, 8):
        primal, dual = PRIMAL_FAMILIES[f"e{l}"], DUAL_FAMILIES[f"e{l}*"]
        if l in (1, 2):
            a, b = primal(ctx, max_degree=max_degree), dual(ctx, max_degree=max_degree)
        elif l == 7:
            a, b = primal(ctx, max_level=max_level), dual(ctx, max_level=max_level)
        else:
            a = primal(ctx, max_level=max_level, max_degree=max_degree)
            b = dual(ctx, max_level=max_level, max_degree=max_degree)
        rep.add(a.passed == b.passed and a.passed, witness={"primal": a.passed, "dual": b.passed}, l=l)
    return rep


DUAL_FAMILIES["e1-7"] = check_e1_7


def verify_dual_conditions(family: str, ctx: PrimeContext | int, **ranges) -> Report:
    try:
        fn = DUAL_FAMILIES[family.lower()]
    except KeyError:
        raise ValueError(f"unknown dual family {family!r}") from None
    return fn(ctx, **ranges)
