"""Prime-field coefficients, index sequences and their degree/excess arithmetic.

Sequences are plain tuples of nonnegative ints with trailing zeros trimmed.
Three shapes occur:

* ``R`` sequences (1-indexed, ``(r_1, r_2, ...)``) index the polynomial
  part of Milnor monomials and 2-primary words ``Sq^{j_1} Sq^{j_2} ...``.
* ``E`` sequences (0-indexed 0/1 tuples ``(e_0, e_1, ...)``) index the
  exterior part ``Q_0^{e_0} Q_1^{e_1} ...``.
* odd-primary words ``(e_0, i_1, e_1, ..., i_n, e_n)`` of odd length stand
  for ``b^{e_0} P^{i_1} b^{e_1} ... P^{i_n} b^{e_n}``.  The unit word is
  ``(0,)`` at odd primes and ``()`` at ``p = 2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

DEFAULT_CAPS = {2: 64, 3: 60}
DEFAULT_CAP_LARGE_P = 50
MAX_PRIME = 13


class CapExceeded(ValueError):
    """A computation was asked for a degree beyond the configured cap."""


class NotAdmissible(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


@dataclass(frozen=True)
class PrimeContext:
    """The ambient prime and the global degree truncation."""

    p: int
    degree_cap: int | None = None

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p) or self.p > MAX_PRIME:
            raise ValueError(f"p must be a prime between 2 and {MAX_PRIME}, got {self.p!r}")
        if self.degree_cap is None:
            object.__setattr__(self, "degree_cap", DEFAULT_CAPS.get(self.p, DEFAULT_CAP_LARGE_P))
        if self.degree_cap < 0:
            raise ValueError("degree_cap must be nonnegative")

    @property
    def odd(self) -> bool:
        return self.p != 2

    def check(self, degree: int) -> None:
        if degree > self.degree_cap:
            raise CapExceeded(f"degree {degree} exceeds cap {self.degree_cap} (p={self.p})")


def as_context(ctx: PrimeContext | int) -> PrimeContext:
    if isinstance(ctx, PrimeContext):
        return ctx
    return _default_context(ctx)


@lru_cache(maxsize=None)
def _default_context(p: int) -> PrimeContext:
    return PrimeContext(p)


# ---------------------------------------------------------------------------
# sequences

def trim(seq: Iterable[int]) -> tuple[int, ...]:
    """Drop trailing zeros."""
    out = list(seq)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def seq_add(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    n = max(len(a), len(b))
    return trim((a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n))


def seq_sub(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...] | None:
    """Componentwise difference, or None when some entry goes negative."""
    n = max(len(a), len(b))
    out = [(a[k] if k < len(a) else 0) - (b[k] if k < len(b) else 0) for k in range(n)]
    if any(x < 0 for x in out):
        return None
    return trim(out)


def seq_norm(seq: Sequence[int]) -> int:
    return sum(seq)


def shift(seq: Sequence[int]) -> tuple[int, ...]:
    """``s(R) = (0, r_1, r_2, ...)``."""
    return trim((0, *seq))


def unit_vector(n: int) -> tuple[int, ...]:
    """``E_n`` for ``n >= 1``: entry ``n`` (1-based) equal to one; ``E_0 = 0``."""
    if n == 0:
        return ()
    return tuple(1 if k == n - 1 else 0 for k in range(n))


def divides(p: int, seq: Sequence[int]) -> bool:
    return all(x % p == 0 for x in seq)


def divide(seq: Sequence[int], p: int) -> tuple[int, ...]:
    if not divides(p, seq):
        raise ValueError(f"{p} does not divide {tuple(seq)}")
    return trim(x // p for x in seq)


def exterior_indices(E: Sequence[int]) -> tuple[int, ...]:
    return tuple(k for k, e in enumerate(E) if e)


def exterior_from_indices(indices: Iterable[int]) -> tuple[int, ...]:
    idx = set(indices)
    if not idx:
        return ()
    return tuple(1 if k in idx else 0 for k in range(max(idx) + 1))


# ---------------------------------------------------------------------------
# multinomials

@lru_cache(maxsize=None)
def _factorials(p: int) -> tuple[int, ...]:
    f = [1]
    for k in range(1, p):
        f.append(f[-1] * k % p)
    return tuple(f)


def multinomial_mod_p(parts: Sequence[int], ctx: PrimeContext | int) -> int:
    """Multinomial coefficient ``(sum parts)! / prod(part!)`` reduced mod p.

    Computed digit by digit in base p (Lucas); a carry in any digit
    position makes the coefficient vanish.  The empty list gives 1.
    """
    p = as_context(ctx).p
    fact = _factorials(p)
    rest = [x for x in parts if x]
    if any(x < 0 for x in rest):
        raise ValueError("parts must be nonnegative")
    result = 1
    while rest:
        digits = [x % p for x in rest]
        total = sum(digits)
        if total >= p:
            return 0
        denom = 1
        for d in digits:
            denom = denom * fact[d] % p
        result = result * fact[total] * pow(denom, p - 2, p) % p
        rest = [x // p for x in rest if x >= p]
    return result


# ---------------------------------------------------------------------------
# words

def canonical_word(word: Sequence[int], ctx: PrimeContext | int) -> tuple[int, ...]:
    ctx = as_context(ctx)
    w = list(word)
    if any(x < 0 for x in w):
        raise ValueError(f"negative entry in word {tuple(word)}")
    if not ctx.odd:
        return trim(w)
    if not w:
        return (0,)
    if len(w) % 2 == 0:
        raise ValueError(f"odd-primary words have odd length: {tuple(word)}")
    if any(e > 1 for e in w[0::2]):
        raise ValueError(f"Bockstein exponents must be 0 or 1: {tuple(word)}")
    while len(w) > 1 and w[-1] == 0 and w[-2] == 0:
        del w[-2:]
    return tuple(w)


def _split(word: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Odd-primary word -> (bocksteins e_0..e_n, powers i_1..i_n)."""
    return tuple(word[0::2]), tuple(word[1::2])


def degree(word: Sequence[int], ctx: PrimeContext | int) -> int:
    ctx = as_context(ctx)
    if not ctx.odd:
        return sum(word)
    if not word:
        return 0
    eps, pows = _split(word)
    return 2 * (ctx.p - 1) * sum(pows) + sum(eps)


def _excess_by_sum(word: Sequence[int], ctx: PrimeContext) -> int:
    p = ctx.p
    if not ctx.odd:
        j = list(word) + [0]
        return sum(j[s] - 2 * j[s + 1] for s in range(len(word)))
    if not word:
        return 0
    eps, pows = _split(word)
    i = list(pows) + [0]
    n = len(pows)
    return sum(eps) + 2 * sum(i[s] - p * i[s + 1] - eps[s + 1] for s in range(n))


def excess(word: Sequence[int], ctx: PrimeContext | int) -> int:
    """Excess of a word, via ``2p i_1 + 2 e_0 - degree`` (``2 j_1 - degree`` at p=2).

    The defining sum formula is evaluated as well and must agree.
    """
    ctx = as_context(ctx)
    d = degree(word, ctx)
    if not ctx.odd:
        e = 2 * (word[0] if word else 0) - d
    elif not word:
        e = 0
    else:
        i1 = word[1] if len(word) > 1 else 0
        e = 2 * ctx.p * i1 + 2 * word[0] - d
    assert e == _excess_by_sum(word, ctx), (word, e)
    return e


def is_admissible(word: Sequence[int], ctx: PrimeContext | int) -> bool:
    ctx = as_context(ctx)
    if not ctx.odd:
        j = list(word) + [0]
        return all(j[s] >= 2 * j[s + 1] for s in range(len(word)))
    if not word:
        return True
    eps, pows = _split(word)
    i = list(pows) + [0]
    return all(i[s] >= ctx.p * i[s + 1] + eps[s + 1] for s in range(len(pows)))


def varrho(word: Sequence[int], ctx: PrimeContext | int) -> tuple[int, ...]:
    """Bijection from all words onto admissible words."""
    ctx = as_context(ctx)
    p = ctx.p
    word = canonical_word(word, ctx)
    if not ctx.odd:
        n = len(word)
        return trim(sum(word[k] * 2 ** (k - s) for k in range(s, n)) for s in range(n))
    eps, js = _split(word)
    n = len(js)
    out = [eps[0]]
    for s in range(1, n + 1):
        out.append(sum((eps[k] + js[k - 1]) * p ** (k - s) for k in range(s, n + 1)))
        out.append(eps[s])
    return canonical_word(out, ctx)


def varrho_inv(word: Sequence[int], ctx: PrimeContext | int) -> tuple[int, ...]:
    ctx = as_context(ctx)
    word = canonical_word(word, ctx)
    if not is_admissible(word, ctx):
        raise NotAdmissible(f"not admissible: {word}")
    p = ctx.p
    if not ctx.odd:
        j = list(word) + [0]
        return trim(j[s] - 2 * j[s + 1] for s in range(len(word)))
    eps, pows = _split(word)
    i = list(pows) + [0]
    out = [eps[0]]
    for s in range(len(pows)):
        out.append(i[s] - p * i[s + 1] - eps[s + 1])
        out.append(eps[s + 1])
    return canonical_word(out, ctx)


def word_from_index(E: Sequence[int], R: Sequence[int], ctx: PrimeContext | int) -> tuple[int, ...]:
    """Interleave ``(E, R)`` into the word ``(e_0, r_1, e_1, ...)`` (``R`` alone at p=2)."""
    ctx = as_context(ctx)
    if not ctx.odd:
        return trim(R)
    n = max(len(R), len(E) - 1, 0)
    out = [E[0] if E else 0]
    for s in range(1, n + 1):
        out.append(R[s - 1] if s - 1 < len(R) else 0)
        out.append(E[s] if s < len(E) else 0)
    return canonical_word(out, ctx)


def index_from_word(word: Sequence[int], ctx: PrimeContext | int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    ctx = as_context(ctx)
    if not ctx.odd:
        return (), trim(word)
    eps, pows = _split(canonical_word(word, ctx))
    return trim(eps), trim(pows)


def to_seq_o(word: Sequence[int], ctx: PrimeContext | int) -> tuple[int, ...]:
    """Packed form used for serialization: odd positions carry the Bocksteins."""
    return canonical_word(word, ctx) if as_context(ctx).odd else trim(word)


def J_word(n: int, ctx: PrimeContext | int) -> tuple[int, ...]:
    """``(0, p^{n-1}, 0, p^{n-2}, ..., 0, 1, 0)``."""
    p = as_context(ctx).p
    out = [0]
    for k in range(n - 1, -1, -1):
        out += [p ** k, 0]
    return canonical_word(out, ctx)


def J_prime_word(n: int, ctx: PrimeContext | int) -> tuple[int, ...]:
    w = list(J_word(n, ctx))
    w[-1] = 1
    return tuple(w)


def K_word(n: int) -> tuple[int, ...]:
    """``(2^{n-1}, ..., 2, 1)``."""
    return tuple(2 ** k for k in range(n - 1, -1, -1))


# ---------------------------------------------------------------------------
# enumeration by degree

def tau_degree(k: int, p: int) -> int:
    return 2 * p ** k - 1


def xi_degree(k: int, p: int) -> int:
    """Degree of ``xi_k`` (``zeta_k`` at p=2)."""
    return 2 * (p ** k - 1) if p != 2 else 2 ** k - 1


def index_degree(E: Sequence[int], R: Sequence[int], p: int) -> int:
    return sum(tau_degree(k, p) for k, e in enumerate(E) if e) + sum(
        r * xi_degree(k, p) for k, r in enumerate(R, start=1))


def index_weight(E: Sequence[int], R: Sequence[int], p: int) -> int:
    return sum(E) + 2 * sum(R) if p != 2 else sum(R)


def _r_vectors(d: int, top: int, p: int) -> Iterator[tuple[int, ...]]:
    if top == 0:
        if d == 0:
            yield ()
        return
    w = xi_degree(top, p)
    for r in range(d // w + 1):
        for rest in _r_vectors(d - r * w, top - 1, p):
            yield rest + (r,)


def _r_sequences(d: int, top: int, p: int) -> Iterator[tuple[int, ...]]:
    """All R with entries only in positions <= top and degree exactly d."""
    for v in _r_vectors(d, top, p):
        yield trim(v)


def _max_index(d: int, p: int) -> int:
    k = 0
    while xi_degree(k + 1, p) <= d:
        k += 1
    return k


@lru_cache(maxsize=None)
def _milnor_index(n: int, p: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    out = []
    if p == 2:
        for R in _r_sequences(n, _max_index(n, p), p):
            out.append(((), R))
    else:
        taus = []
        k = 0
        while tau_degree(k, p) <= n:
            taus.append(k)
            k += 1
        for mask in range(1 << len(taus)):
            chosen = [taus[b] for b in range(len(taus)) if mask >> b & 1]
            d = n - sum(tau_degree(k, p) for k in chosen)
            if d < 0:
                continue
            E = exterior_from_indices(chosen)
            for R in _r_sequences(d, _max_index(d, p), p):
                out.append((E, R))
    out.sort()
    return tuple(out)


def enumerate_milnor_index(n: int, ctx: PrimeContext | int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All ``(E, R)`` of degree ``n``, sorted lexicographically on ``(E, R)``."""
    ctx = as_context(ctx)
    ctx.check(n)
    if n < 0:
        return []
    return list(_milnor_index(n, ctx.p))


@lru_cache(maxsize=None)
def _admissible(n: int, p: int) -> tuple[tuple[int, ...], ...]:
    ctx = _default_context(p)
    words = {varrho(word_from_index(E, R, ctx), ctx) for E, R in _milnor_index(n, p)}
    return tuple(sorted(words, reverse=True))


def enumerate_admissible(n: int, ctx: PrimeContext | int) -> list[tuple[int, ...]]:
    """All admissible words of degree ``n`` in descending lexicographic order."""
    ctx = as_context(ctx)
    ctx.check(n)
    if n < 0:
        return []
    return list(_admissible(n, ctx.p))
