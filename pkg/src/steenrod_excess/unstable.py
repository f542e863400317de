"""Unstable modules over the Steenrod algebra, truncated at a degree cap.

A module is a graded vector space with, for each Milnor monomial ``t`` and
degree ``n``, the matrix of ``t: M^n -> M^{n+|t|}``.  Matrices are built on
first use and cached, so functors compose cheaply and only the parts that
are inspected get computed.

Suspension carries the action over unchanged (no sign).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from . import linalg
from .admissible import word_to_milnor
from .core import CapExceeded, PrimeContext, as_context
from .filtration import gamma, quotient_basis, top_degree, top_monomial
from .milnor import Element, Monomial, UNIT, basis, format_monomial, monomial_coproduct, monomial_degree, \
    monomial_product, weight
from .report import Report


class NotUnstable(ValueError):
    pass


@dataclass(frozen=True)
class GradedVectorSpace:
    """Finite graded vector space ``{degree: dimension}``."""

    dims: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "dims", {n: d for n, d in sorted(self.dims.items()) if d})

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def suspend(self, k: int = 1) -> "GradedVectorSpace":
        """``(Sigma^k V)^i = V^{i-k}``."""
        return GradedVectorSpace({n + k: d for n, d in self.dims.items()})

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def basis(self) -> list[tuple[int, int]]:
        return [(n, k) for n, d in self.dims.items() for k in range(d)]


def sphere(n: int, dim: int = 1) -> GradedVectorSpace:
    """``Sigma^n F_p`` (``dim`` copies)."""
    return GradedVectorSpace({n: dim})


class UnstableModule:
    """A module over the Steenrod algebra known in degrees ``<= cap``.

    ``action_fn(t, n)`` returns the matrix of the monomial ``t`` from
    degree ``n``; it is called at most once per pair.
    """

    def __init__(self, p: int, cap: int, dims: Mapping[int, int], action_fn: Callable[[Monomial, int], np.ndarray],
                 labels: Mapping[int, Sequence[Hashable]] | None = None, name: str = "M"):
        self.p = p
        self.cap = cap
        self.dims = {n: d for n, d in sorted(dims.items()) if d and n <= cap}
        self._action_fn = action_fn
        self._cache: dict = {}
        self.labels = {n: list(labels[n]) for n in self.dims} if labels is not None else None
        self.name = name
        self.verified_unstable: bool | None = None

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    @property
    def degrees(self) -> list[int]:
        return list(self.dims)

    def action(self, t: Monomial, n: int) -> np.ndarray:
        d = monomial_degree(t, self.p)
        if n + d > self.cap:
            raise CapExceeded(f"{self.name}: degree {n + d} is beyond the cap {self.cap}")
        key = (t, n)
        if key not in self._cache:
            src, tgt = self.dim(n), self.dim(n + d)
            if not src or not tgt:
                m = np.zeros((tgt, src), dtype=np.int64)
            elif t == UNIT:
                m = np.eye(src, dtype=np.int64)
            else:
                m = np.asarray(self._action_fn(t, n), dtype=np.int64) % self.p
                if m.shape != (tgt, src):
                    raise AssertionError(f"action of {t} on degree {n} has shape {m.shape}, expected {(tgt, src)}")
            self._cache[key] = m
        return self._cache[key]

    def act(self, a: Element, n: int) -> np.ndarray:
        """Matrix of a homogeneous element from degree ``n``."""
        d = a.degree
        if d is None:
            raise ValueError("act needs a nonzero homogeneous element")
        out = np.zeros((self.dim(n + d), self.dim(n)), dtype=np.int64)
        for m, c in a.items():
            out = out + c * self.action(m, n)
        return out % self.p

    def act_word(self, word: Sequence[int], n: int, ctx: PrimeContext | int | None = None) -> np.ndarray:
        """Matrix of an admissible (or any) word, through its Milnor expansion."""
        return self.act(word_to_milnor(word, ctx if ctx is not None else self.p), n)

    def monomials_on(self, n: int) -> Iterable[Monomial]:
        """Milnor monomials whose action on degree ``n`` stays within the cap."""
        for j in range(self.cap - n + 1):
            yield from basis(j, self.p)

    def to_json(self) -> dict:
        actions = []
        for n in self.degrees:
            for t in self.monomials_on(n):
                m = self.action(t, n)
                if m.size and np.any(m):
                    actions.append({"E": list(t.E), "R": list(t.R), "degree": n, "matrix": m.tolist()})
        return {"schema": 1, "p": self.p, "cap": self.cap, "name": self.name,
                "dims": {str(n): d for n, d in self.dims.items()}, "actions": actions}

    def __repr__(self) -> str:
        return f"UnstableModule({self.name}, p={self.p}, cap={self.cap}, dims={self.dims})"


@dataclass
class Morphism:
    source: UnstableModule
    target: UnstableModule
    matrices: dict[int, np.ndarray]

    def __getitem__(self, n: int) -> np.ndarray:
        if n in self.matrices:
            return self.matrices[n]
        return np.zeros((self.target.dim(n), self.source.dim(n)), dtype=np.int64)

    @property
    def cap(self) -> int:
        return min(self.source.cap, self.target.cap)

    def compose(self, other: "Morphism") -> "Morphism":
        """``self o other``."""
        p = self.source.p
        degs = set(other.source.degrees)
        return Morphism(other.source, self.target, {n: (self[n] @ other[n]) % p for n in degs})

    def rank(self, n: int) -> int:
        m = self[n]
        return linalg.rank(m, self.source.p) if m.size else 0


def module_from_json(data: str | dict) -> UnstableModule:
    if isinstance(data, str):
        data = json.loads(data)
    p, cap = int(data["p"]), int(data["cap"])
    dims = {int(n): int(d) for n, d in data["dims"].items()}
    table = {(Monomial(tuple(a["E"]), tuple(a["R"])), int(a["degree"])): np.array(a["matrix"], dtype=np.int64)
             for a in data["actions"]}

    def action(t: Monomial, n: int) -> np.ndarray:
        d = monomial_degree(t, p)
        return table.get((t, n), np.zeros((dims.get(n + d, 0), dims.get(n, 0)), dtype=np.int64))

    return UnstableModule(p, cap, dims, action, name=data.get("name", "M"))


# ---------------------------------------------------------------------------
# instability

def check_unstable(M: UnstableModule, max_witnesses: int = 20) -> Report:
    """``F_{n+1}`` acts trivially on ``M^n``; witnesses are ``(monomial, degree, basis index)``."""
    p = M.p
    rep = Report("unstable", p)
    witnesses = 0
    for n in M.degrees:
        for t in M.monomials_on(n):
            if weight(t, p) < n + 1:
                continue
            m = M.action(t, n)
            bad = np.nonzero(m.any(axis=0))[0] if m.size else []
            ok = not len(bad)
            rep.add(ok, witness=None if ok else [format_monomial(t, p), n, int(bad[0])], degree=n,
                    monomial=format_monomial(t, p))
            if not ok:
                witnesses += 1
                if witnesses >= max_witnesses:
                    M.verified_unstable = False
                    return rep
    M.verified_unstable = rep.passed
    return rep


def is_unstable(M: UnstableModule) -> bool:
    if M.verified_unstable is None:
        check_unstable(M)
    return bool(M.verified_unstable)


def check_unstable_top(M: UnstableModule) -> Report:
    """Only the top operations: ``b^e P^i`` kills ``M^k`` whenever ``k < 2i + e`` (``Sq^s`` for ``s > k``)."""
    p = M.p
    rep = Report("unstable_top", p)
    for k in M.degrees:
        s = k + 1
        while k + top_degree(s, p) <= M.cap:
            m = M.action(top_monomial(s, p), k)
            rep.add(not np.any(m), witness=[format_monomial(top_monomial(s, p), p), k], degree=k, level=s)
            s += 1
    return rep


def check_um(M: UnstableModule) -> Report:
    """Both instability criteria give the same answer."""
    full, top = check_unstable(M), check_unstable_top(M)
    rep = Report("um", M.p)
    rep.add(full.passed == top.passed, witness={"unstable": full.passed, "top": top.passed}, module=M.name)
    return rep


def require_unstable(M: UnstableModule) -> None:
    if not is_unstable(M):
        raise NotUnstable(f"{M.name} is not unstable")


def check_associative(M: UnstableModule, exhaustive_degree: int = 10, samples: int = 500, seed: int = 0) -> Report:
    """``(t t') m = t (t' m)`` exhaustively up to ``exhaustive_degree``, then on random triples up to the cap."""
    p = M.p
    rep = Report("associative", p)

    def one(t: Monomial, u: Monomial, n: int) -> None:
        prod = Element(dict(monomial_product(t, u, p)), p)
        du = monomial_degree(u, p)
        lhs = M.act(prod, n) if prod else np.zeros((M.dim(n + du + monomial_degree(t, p)), M.dim(n)), dtype=np.int64)
        rhs = (M.action(t, n + du) @ M.action(u, n)) % p
        rep.add(np.array_equal(lhs, rhs), witness=[format_monomial(t, p), format_monomial(u, p), n],
                degree=n, left=format_monomial(t, p), right=format_monomial(u, p))

    top = min(exhaustive_degree, M.cap)
    for n in M.degrees:
        for j in range(top - n + 1):
            for k in range(1, top - n - j + 1):
                for t in basis(j, p):
                    for u in basis(k, p):
                        one(t, u, n)
    rng = np.random.default_rng(seed)
    degs = M.degrees
    if degs and M.cap > top:
        for _ in range(samples):
            n = int(rng.choice(degs))
            room = M.cap - n
            if room < 2:
                continue
            j = int(rng.integers(0, room))
            k = int(rng.integers(1, room - j + 1))
            bj, bk = basis(j, p), basis(k, p)
            if bj and bk:
                one(bj[int(rng.integers(len(bj)))], bk[int(rng.integers(len(bk)))], n)
    return rep


def check_module_map(f: Morphism, max_degree: int | None = None) -> Report:
    """``f(t x) = t f(x)`` for every monomial within range."""
    M, N = f.source, f.target
    p = M.p
    top = f.cap if max_degree is None else min(max_degree, f.cap)
    rep = Report("module_map", p)
    for n in M.degrees:
        if n > top:
            continue
        for j in range(top - n + 1):
            for t in basis(j, p):
                lhs = (f[n + j] @ M.action(t, n)) % p
                rhs = (N.action(t, n) @ f[n]) % p
                rep.add(np.array_equal(lhs, rhs), witness=[format_monomial(t, p), n], degree=n,
                        monomial=format_monomial(t, p))
    return rep


# ---------------------------------------------------------------------------
# constructions

def _index(labels: Sequence[Hashable]) -> dict:
    return {lab: k for k, lab in enumerate(labels)}


def free_unstable(V: GradedVectorSpace, cap: int, ctx: PrimeContext | int) -> UnstableModule:
    """``F(V) = sum_n A/F_{n+1} (x) V^n``; basis ``(a, (n, k))`` with ``a`` of weight ``<= n``."""
    ctx = as_context(ctx)
    p = ctx.p
    ctx.check(cap)
    labels: dict[int, list] = {}
    for d in range(cap + 1):
        labs = []
        for n, k in V.basis():
            if 0 <= d - n:
                labs.extend((a, (n, k)) for a in quotient_basis(n + 1, d - n, ctx))
        if labs:
            labels[d] = labs
    index = {d: _index(labs) for d, labs in labels.items()}

    def action(t: Monomial, d: int) -> np.ndarray:
        j = monomial_degree(t, p)
        out = np.zeros((len(labels.get(d + j, ())), len(labels[d])), dtype=np.int64)
        tgt = index.get(d + j, {})
        for col, (a, (n, k)) in enumerate(labels[d]):
            for m, c in monomial_product(t, a, p):
                if weight(m, p) <= n:
                    out[tgt[(m, (n, k))], col] += c
        return out

    dims = {d: len(labs) for d, labs in labels.items()}
    return UnstableModule(p, cap, dims, action, labels, name=f"F({dict(V.dims)})")


def algebra_quotient(i: int, shift: int, cap: int, ctx: PrimeContext | int) -> UnstableModule:
    """``Sigma^shift A/F_i``, a left module because ``F_i`` is a left ideal."""
    ctx = as_context(ctx)
    p = ctx.p
    labels = {d: quotient_basis(i, d - shift, ctx) for d in range(shift, cap + 1)}
    labels = {d: l for d, l in labels.items() if l}
    index = {d: _index(l) for d, l in labels.items()}

    def action(t: Monomial, d: int) -> np.ndarray:
        j = monomial_degree(t, p)
        out = np.zeros((len(labels.get(d + j, ())), len(labels[d])), dtype=np.int64)
        for col, a in enumerate(labels[d]):
            for m, c in monomial_product(t, a, p):
                if weight(m, p) < i:
                    out[index[d + j][m], col] += c
        return out

    return UnstableModule(p, cap, {d: len(l) for d, l in labels.items()}, action, labels,
                          name=f"Σ^{shift} A/F_{i}")


def suspend(M: UnstableModule, k: int = 1) -> UnstableModule:
    """``(Sigma^k M)^n = M^{n-k}`` with the same action."""
    if k < 0 and any(n + k < 0 for n in M.degrees):
        raise ValueError(f"desuspending {M.name} would leave negative degrees")
    labels = {n + k: l for n, l in M.labels.items()} if M.labels is not None else None
    return UnstableModule(M.p, M.cap + k, {n + k: d for n, d in M.dims.items()},
                          lambda t, n: M.action(t, n - k), labels, name=f"Σ^{k}{M.name}" if k != 1 else f"Σ{M.name}")


def _phi_levels(p: int, cap: int) -> dict[int, int]:
    """``{top(s) + s: s}`` for the degrees of Phi M within the cap."""
    out = {}
    s = 0
    while top_degree(s, p) + s <= cap:
        out[top_degree(s, p) + s] = s
        s += 1
    return out


def _validated(M: UnstableModule, validate: bool) -> UnstableModule:
    if validate and not is_unstable(M):
        raise AssertionError(f"{M.name} is not unstable")
    return M


def phi(M: UnstableModule, ctx: PrimeContext | int | None = None, check: bool = True,
        validate: bool = False) -> UnstableModule:
    """``Phi M = sum_s E_s^{top(s)} (x) M^s``; basis ``g_s (x) m``.

    ``t (g_s (x) m) = g_{s'} (x) c m`` where ``gamma`` writes the class of
    ``t g_s`` as ``g_{s'} c``, and ``c`` acts on ``M^s`` through ``A/F_{s+1}``.
    """
    p = M.p
    ctx = as_context(ctx if ctx is not None else p)
    if check:
        require_unstable(M)
    levels = _phi_levels(p, M.cap)
    dims = {k: M.dim(s) for k, s in levels.items()}

    def action(t: Monomial, k: int) -> np.ndarray:
        s = levels[k]
        J = monomial_degree(t, p)
        s2 = levels[k + J]
        i2, e2 = divmod(s2, 2)
        c = gamma(i2, s2 - s, e2, Element({t: 1}, p), ctx)
        out = np.zeros((M.dim(s2), M.dim(s)), dtype=np.int64)
        for m, coeff in c.items():
            out = out + coeff * M.action(m, s)
        return out

    return _validated(UnstableModule(p, M.cap, dims, action, name=f"Φ{M.name}"), validate)


def lambda_map(M: UnstableModule, PM: UnstableModule | None = None, ctx: PrimeContext | int | None = None,
               validate: bool = False) -> Morphism:
    """``lambda: Phi M -> M``, ``g_s (x) m -> top(s) m``."""
    p = M.p
    PM = phi(M, ctx) if PM is None else PM
    mats = {}
    for k, s in _phi_levels(p, M.cap).items():
        mats[k] = M.action(top_monomial(s, p), s)
    lam = Morphism(PM, M, mats)
    if validate and not check_module_map(lam).passed:
        raise AssertionError(f"lambda on {M.name} does not commute with the action")
    return lam


def phi_map(f: Morphism, PM: UnstableModule, PN: UnstableModule) -> Morphism:
    """``Phi f = id (x) f``."""
    p = f.source.p
    return Morphism(PM, PN, {k: f[s] for k, s in _phi_levels(p, f.cap).items()})


def quotient_module(M: UnstableModule, spans: Mapping[int, np.ndarray], name: str | None = None) -> tuple[UnstableModule, Morphism]:
    """``M / W`` for a submodule ``W`` given degreewise by spanning rows, with the projection."""
    p = M.p
    red = {n: linalg.Reducer(spans.get(n, np.zeros((0, M.dim(n)), dtype=np.int64)), M.dim(n), p) for n in M.degrees}
    dims = {n: len(r.free) for n, r in red.items()}

    def action(t: Monomial, n: int) -> np.ndarray:
        j = monomial_degree(t, p)
        src, tgt = red[n], red[n + j]
        act = M.action(t, n)
        cols = [tgt.coords(act @ src.lift(k)) for k in range(len(src.free))]
        return np.array(cols, dtype=np.int64).T.reshape(len(tgt.free), len(src.free))

    Q = UnstableModule(p, M.cap, dims, action, name=name or f"{M.name}/W")
    proj = {n: np.array([r.coords(np.eye(M.dim(n), dtype=np.int64)[:, c]) for c in range(M.dim(n))],
                        dtype=np.int64).T.reshape(dims[n], M.dim(n)) for n, r in red.items()}
    return Q, Morphism(M, Q, proj)


def submodule(M: UnstableModule, spans: Mapping[int, np.ndarray], name: str | None = None) -> tuple[UnstableModule, Morphism]:
    """The submodule spanned degreewise by the given rows, with its inclusion."""
    p = M.p
    ech = {}
    for n in M.degrees:
        rows = spans.get(n)
        if rows is not None and np.asarray(rows).size:
            r, piv = linalg.rref(np.asarray(rows, dtype=np.int64), p)
            ech[n] = (r[: len(piv)], piv)
    dims = {n: len(piv) for n, (_, piv) in ech.items()}

    def action(t: Monomial, n: int) -> np.ndarray:
        j = monomial_degree(t, p)
        rows, _ = ech[n]
        trows, tpiv = ech[n + j]
        images = (M.action(t, n) @ rows.T) % p
        coords = images[tpiv, :]
        if not np.array_equal((trows.T @ coords) % p, images):
            raise AssertionError(f"{M.name}: span is not closed under the action")
        return coords

    S = UnstableModule(p, M.cap, dims, action, name=name or f"W⊂{M.name}")
    inc = {n: rows.T.copy() for n, (rows, _) in ech.items()}
    return S, Morphism(S, M, inc)


def cokernel(f: Morphism, name: str | None = None) -> tuple[UnstableModule, Morphism]:
    spans = {n: f[n].T for n in f.target.degrees}
    return quotient_module(f.target, spans, name)


def kernel(f: Morphism, name: str | None = None) -> tuple[UnstableModule, Morphism]:
    spans = {}
    for n in f.source.degrees:
        m = f[n]
        spans[n] = linalg.nullspace(m, f.source.p) if m.shape[0] else np.eye(f.source.dim(n), dtype=np.int64)
    return submodule(f.source, spans, name)


def omega(M: UnstableModule, ctx: PrimeContext | int | None = None, validate: bool = False) -> UnstableModule:
    """``Omega M = Sigma^{-1} Coker lambda``."""
    lam = lambda_map(M, phi(M, ctx))
    C, _ = cokernel(lam, name=f"Coker λ({M.name})")
    if C.dim(0):
        raise AssertionError("lambda is onto in degree 0")
    out = suspend(C, -1)
    out.name = f"Ω{M.name}"
    return _validated(out, validate)


@lru_cache(maxsize=None)
def _e9_passed(p: int, max_degree: int) -> bool:
    from .conditions import check_e9
    return check_e9(p, max_degree=max_degree).passed


def omega1(M: UnstableModule, ctx: PrimeContext | int | None = None, require_e9: bool = True,
           validate: bool = False) -> UnstableModule:
    """``Omega^1 M = Sigma^{-1} Ker lambda``; instability relies on (E9) in range, which is checked first."""
    p = M.p
    if require_e9 and not _e9_passed(p, min(M.cap, 24)):
        raise AssertionError("(E9) failed in range; Omega^1 need not be unstable")
    lam = lambda_map(M, phi(M, ctx))
    K, _ = kernel(lam, name=f"Ker λ({M.name})")
    if K.dim(0):
        raise AssertionError("lambda is injective in degree 0")
    out = suspend(K, -1)
    out.name = f"Ω¹{M.name}"
    return _validated(out, validate)


def tensor_unstable(M: UnstableModule, N: UnstableModule, check: bool = True,
                    validate: bool = False) -> UnstableModule:
    """``M (x) N`` with the Cartan action ``t (m (x) n) = sum (-1)^{|t''||m|} t'm (x) t''n``."""
    if M.p != N.p:
        raise ValueError("modules over different primes")
    if check:
        require_unstable(M)
        require_unstable(N)
    p = M.p
    cap = min(M.cap, N.cap)
    blocks: dict[int, list[tuple[int, int, int]]] = {}
    for a in M.degrees:
        for b in N.degrees:
            if a + b <= cap:
                blocks.setdefault(a + b, []).append((a, b, M.dim(a) * N.dim(b)))
    offsets: dict[int, dict[tuple[int, int], int]] = {}
    dims = {}
    for d, bl in sorted(blocks.items()):
        off, pos = 0, {}
        for a, b, size in bl:
            pos[(a, b)] = off
            off += size
        offsets[d], dims[d] = pos, off

    def action(t: Monomial, d: int) -> np.ndarray:
        j = monomial_degree(t, p)
        out = np.zeros((dims.get(d + j, 0), dims[d]), dtype=np.int64)
        for (t1, t2), c in monomial_coproduct(t, p):
            j1, j2 = monomial_degree(t1, p), monomial_degree(t2, p)
            for a, b, size in blocks[d]:
                if (a + j1, b + j2) not in offsets.get(d + j, {}):
                    continue
                sign = -1 if (j2 * a) % 2 else 1
                blk = np.kron(M.action(t1, a), N.action(t2, b)) * (c * sign)
                r0, c0 = offsets[d + j][(a + j1, b + j2)], offsets[d][(a, b)]
                out[r0:r0 + blk.shape[0], c0:c0 + blk.shape[1]] += blk
        return out

    return _validated(UnstableModule(p, cap, dims, action, name=f"{M.name}⊗{N.name}"), validate)


def trivial_module(p: int, cap: int, degree: int = 0) -> UnstableModule:
    """``F_p`` in one degree with only the unit acting."""
    return UnstableModule(p, cap, {degree: 1}, lambda t, n: np.zeros((0, 1), dtype=np.int64), name=f"F{p}[{degree}]")


# ---------------------------------------------------------------------------
# the short exact sequence for free modules

def rho_v(V: GradedVectorSpace, FV: UnstableModule, target: UnstableModule) -> Morphism:
    """``F(V) -> Sigma F(Sigma^{-1} V)``: drop the weight-``n`` part of ``a`` for ``a (x) v``, ``v`` in ``V^n``."""
    p = FV.p
    mats = {}
    for d in FV.degrees:
        tlabels = target.labels.get(d, []) if target.labels else []
        tidx = _index(tlabels)
        m = np.zeros((len(tlabels), FV.dim(d)), dtype=np.int64)
        for col, (a, (n, k)) in enumerate(FV.labels[d]):
            if weight(a, p) <= n - 1:
                m[tidx[(a, (n - 1, k))], col] = 1
        mats[d] = m
    return Morphism(FV, target, mats)


def check_ses_free(V: GradedVectorSpace, cap: int, ctx: PrimeContext | int) -> Report:
    """``0 -> Phi F(V) -> F(V) -> Sigma F(Sigma^{-1} V) -> 0`` is exact in every degree ``<= cap``."""
    ctx = as_context(ctx)
    p = ctx.p
    FV = free_unstable(V, cap, ctx)
    PF = phi(FV, ctx, check=False)
    lam = lambda_map(FV, PF)
    target = suspend(free_unstable(V.suspend(-1), cap - 1, ctx), 1)
    rho = rho_v(V, FV, target)
    rep = Report("ses", p)
    for d in range(cap + 1):
        r_lam, r_rho = lam.rank(d), rho.rank(d)
        zero = not np.any((rho[d] @ lam[d]) % p) if lam[d].size and rho[d].size else True
        ok = r_lam == PF.dim(d) and r_rho == target.dim(d) and zero and r_lam + r_rho == FV.dim(d)
        rep.add(ok, witness={"phi": PF.dim(d), "free": FV.dim(d), "target": target.dim(d),
                             "rank_lambda": r_lam, "rank_rho": r_rho},
                degree=d, V={str(n): c for n, c in V.dims.items()})
    return rep


def check_phi_exact(V: GradedVectorSpace, cap: int, ctx: PrimeContext | int) -> Report:
    """Applying Phi to the free short exact sequence keeps it exact."""
    ctx = as_context(ctx)
    p = ctx.p
    FV = free_unstable(V, cap, ctx)
    PF = phi(FV, ctx, check=False)
    lam = lambda_map(FV, PF)
    target = suspend(free_unstable(V.suspend(-1), cap - 1, ctx), 1)
    rho = rho_v(V, FV, target)
    PPF, PT = phi(PF, ctx, check=False), phi(target, ctx, check=False)
    f, g = phi_map(lam, PPF, PF), phi_map(rho, PF, PT)
    rep = Report("phi_exact", p)
    for d in range(cap + 1):
        rf, rg = f.rank(d), g.rank(d)
        zero = not np.any((g[d] @ f[d]) % p) if f[d].size and g[d].size else True
        ok = rf == PPF.dim(d) and rg == PT.dim(d) and zero and rf + rg == PF.dim(d)
        rep.add(ok, degree=d, V={str(n): c for n, c in V.dims.items()})
    return rep


def check_triangle(V: GradedVectorSpace, cap: int, ctx: PrimeContext | int) -> Report:
    """``eps_{F V} o F(eta_V) = id`` on ``F(V)``, and ``eps_M o eta_{O M} = id`` on ``M = F(V)``."""
    ctx = as_context(ctx)
    p = ctx.p
    FV = free_unstable(V, cap, ctx)
    W = GradedVectorSpace(dict(FV.dims))
    FW = free_unstable(W, cap, ctx)
    rep = Report("triangle", p)
    unit_index = {d: _index(FV.labels[d]) for d in FV.degrees}
    for d in range(cap + 1):
        n_src = FV.dim(d)
        # F(eta): a (x) v  ->  a (x) (1 (x) v), a basis vector of F(W)
        f_eta = np.zeros((FW.dim(d), n_src), dtype=np.int64)
        fw_index = _index(FW.labels.get(d, [])) if FW.labels else {}
        for col, (a, (n, k)) in enumerate(FV.labels.get(d, [])):
            f_eta[fw_index[(a, (n, unit_index[n][(UNIT, (n, k))]))], col] = 1
        # eps: a (x) w  ->  a w
        eps = np.zeros((n_src, FW.dim(d)), dtype=np.int64)
        for col, (a, (n, k)) in enumerate(FW.labels.get(d, [])):
            eps[:, col] = FV.action(a, n)[:, k]
        rep.add(np.array_equal((eps @ f_eta) % p, np.eye(n_src, dtype=np.int64)), degree=d, identity="F")
        # eta_{O M} followed by eps_M on a basis vector w: 1 (x) w -> w
        ok = True
        for n in FV.degrees:
            if n != d:
                continue
            cols = [fw_index[(UNIT, (n, k))] for k in range(FV.dim(n))]
            ok = np.array_equal(eps[:, cols] % p, np.eye(FV.dim(n), dtype=np.int64))
        rep.add(ok, degree=d, identity="O")
    return rep


def check_suspension_iso(M: UnstableModule, ctx: PrimeContext | int | None = None) -> Report:
    """``lambda`` vanishes on ``Sigma M``, so ``Sigma M -> Sigma Omega Sigma M`` is an isomorphism."""
    SM = suspend(M, 1)
    lam = lambda_map(SM, phi(SM, ctx, check=False))
    C, proj = cokernel(lam)
    rep = Report("suspension_iso", M.p)
    for d in range(SM.cap + 1):
        ok = not np.any(lam[d]) and C.dim(d) == SM.dim(d) and proj.rank(d) == SM.dim(d)
        rep.add(ok, degree=d, module=M.name)
    return rep


def small_spaces(max_total: int = 3, max_degree: int = 5) -> list[GradedVectorSpace]:
    """Every graded space with total dimension ``<= max_total`` in degrees ``0..max_degree``."""
    out = []

    def rec(n: int, left: int, acc: dict):
        if n > max_degree:
            out.append(GradedVectorSpace(dict(acc)))
            return
        for d in range(left + 1):
            rec(n + 1, left - d, {**acc, n: d} if d else acc)

    rec(0, max_total, {})
    return out


def check_omega_dims(M: UnstableModule, ctx: PrimeContext | int | None = None) -> Report:
    """``dim (Sigma Omega M)^n + rank lambda^n = dim M^n``."""
    lam = lambda_map(M, phi(M, ctx))
    SO = suspend(omega(M, ctx), 1)
    rep = Report("omega_dims", M.p)
    for n in range(M.cap + 1):
        rep.add(SO.dim(n) + lam.rank(n) == M.dim(n), witness=[SO.dim(n), lam.rank(n), M.dim(n)], degree=n)
    return rep


def constructed_modules(ctx: PrimeContext | int, cap: int) -> list[UnstableModule]:
    """A spread of modules built by the functors, for the instability and suspension checks."""
    ctx = as_context(ctx)
    p = ctx.p
    out = []
    for V in (sphere(0), sphere(1), sphere(2), GradedVectorSpace({1: 1, 2: 1}), GradedVectorSpace({3: 2})):
        F = free_unstable(V, cap, ctx)
        out += [F, phi(F, ctx), omega(F, ctx), omega1(F, ctx)]
    out.append(algebra_quotient(3, 2, cap, ctx))
    small = free_unstable(sphere(1), min(cap, 10), ctx)
    out.append(tensor_unstable(small, small))
    out.append(tensor_unstable(small, trivial_module(p, min(cap, 10))))
    return out


def verify_ses(ctx: PrimeContext | int, cap: int = 20) -> Report:
    rep = Report("ses", as_context(ctx).p)
    for V in small_spaces():
        rep.extend(check_ses_free(V, cap, ctx))
    return rep


def verify_triangle(ctx: PrimeContext | int, cap: int = 20) -> Report:
    rep = Report("triangle", as_context(ctx).p)
    for V in small_spaces():
        rep.extend(check_triangle(V, cap, ctx))
    return rep


def verify_phi_exact(ctx: PrimeContext | int, cap: int = 20) -> Report:
    rep = Report("phi_exact", as_context(ctx).p)
    for V in small_spaces():
        rep.extend(check_phi_exact(V, cap, ctx))
    return rep


def verify_um(ctx: PrimeContext | int, cap: int = 20) -> Report:
    rep = Report("um", as_context(ctx).p)
    for M in constructed_modules(ctx, cap):
        rep.extend(check_um(M))
        rep.add(is_unstable(M), module=M.name, check="unstable")
    return rep


def verify_suspension(ctx: PrimeContext | int, cap: int = 20) -> Report:
    rep = Report("suspension_iso", as_context(ctx).p)
    for M in constructed_modules(ctx, cap - 1):
        rep.extend(check_suspension_iso(M, ctx))
        rep.extend(check_omega_dims(M, ctx))
    return rep


def verify_free_dims(ctx: PrimeContext | int, cap: int = 17) -> Report:
    """``F(Sigma^1 F_2)`` is one-dimensional exactly in degrees ``1, 2, 4, 8, ...``."""
    ctx = as_context(ctx)
    rep = Report("free_dims", ctx.p)
    if ctx.p != 2:
        rep.notes.append("the one-sphere pattern is stated at p = 2 only")
        return rep
    F = free_unstable(sphere(1), cap, ctx)
    for n in range(cap + 1):
        expected = 1 if n >= 1 and (n & (n - 1)) == 0 else 0
        rep.add(F.dim(n) == expected, witness=[F.dim(n), expected], degree=n)
    return rep


UNSTABLE_FAMILIES = {
    "ses": verify_ses,
    "triangle": verify_triangle,
    "phi_exact": verify_phi_exact,
    "um": verify_um,
    "suspension": verify_suspension,
    "free_dims": verify_free_dims,
}
