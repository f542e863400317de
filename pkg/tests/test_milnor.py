from math import comb

import pytest
from hypothesis import given, strategies as st

from steenrod_excess.admissible import word_to_milnor
from steenrod_excess.core import CapExceeded, PrimeContext
from steenrod_excess.milnor import (Element, Monomial, P, Q, Qk, Sq, UNIT, basis, format_monomial, format_tensor,
                                    milnor_coproduct, milnor_product, monomial_degree, pth_root,
                                    tensor_monomial_product, weight)
from steenrod_excess.sparse import DegreeMismatch, Tensor


def binom(n, k):
    return comb(n, k) if 0 <= k <= n else 0


def adem_2(a, b):
    """Sq^a Sq^b for a < 2b as a sum of words, by the Adem relation."""
    return {(a + b - j, j): binom(b - j - 1, a - 2 * j) % 2 for j in range(a // 2 + 1)}


def adem_odd(a, b, p, beta):
    """P^a (b) P^b for a <= p b (a < p b without the Bockstein)."""
    out = {}
    for j in range(a // p + 1):
        sign = (-1) ** (a + j)
        if not beta:
            c = sign * binom((p - 1) * (b - j) - 1, a - p * j)
            out[(0, a + b - j, 0, j, 0)] = out.get((0, a + b - j, 0, j, 0), 0) + c
        else:
            c1 = sign * binom((p - 1) * (b - j), a - p * j)
            c2 = -sign * binom((p - 1) * (b - j) - 1, a - p * j - 1)
            out[(1, a + b - j, 0, j, 0)] = out.get((1, a + b - j, 0, j, 0), 0) + c1
            out[(0, a + b - j, 1, j, 0)] = out.get((0, a + b - j, 1, j, 0), 0) + c2
    return out


def evaluate(words, p):
    total = Element.zero(p)
    for w, c in words.items():
        if c % p:
            total = total + word_to_milnor(w, p).scale(c)
    return total


@pytest.mark.parametrize("a,b", [(a, b) for b in range(1, 9) for a in range(1, 2 * b)])
def test_adem_relations_p2(a, b):
    lhs = Sq(a) * Sq(b)
    rhs = evaluate(adem_2(a, b), 2)
    assert lhs == rhs


@pytest.mark.parametrize("p", [3, 5])
def test_adem_relations_odd(p):
    for b in range(1, 4 if p == 3 else 2):
        for a in range(1, p * b):
            assert P(a, p=p) * P(b, p=p) == evaluate(adem_odd(a, b, p, False), p), (a, b)
        for a in range(1, p * b + 1):
            lhs = word_to_milnor((0, a, 1, b, 0), p)
            assert lhs == evaluate(adem_odd(a, b, p, True), p), (a, b)


def test_hand_products():
    assert Sq(2) * Sq(2) == Sq(1, 1)
    assert Sq(1) * Sq(1) == Element.zero(2)
    assert Sq(1) * Sq(2) == Sq(3)
    assert Sq(2) * Sq(1) == Sq(3) + Sq(0, 1)
    # one Milnor matrix: x_20 = x_01 = 1
    assert Sq(0, 1) * Sq(1) == Sq(1, 1)


def test_odd_hand_products():
    p = 3
    b = Q(1, p=p)
    assert b * b == Element.zero(p)
    assert P(1, p=p) * P(1, p=p) == P(2, p=p).scale(2)
    # Q_1 is the commutator of P^1 and the Bockstein
    assert P(1, p=p) * b - b * P(1, p=p) == Qk(1, p)
    assert Qk(0, p) * Qk(1, p) == Q(1, 1, p=p)
    assert Qk(1, p) * Qk(0, p) == Q(1, 1, p=p).scale(-1)


def elements(p, max_degree=14):
    degs = [n for n in range(max_degree + 1) if basis(n, p)]
    return st.sampled_from(degs).flatmap(
        lambda n: st.lists(st.integers(0, p - 1), min_size=len(basis(n, p)), max_size=len(basis(n, p))).map(
            lambda cs: Element(dict(zip(basis(n, p), cs)), p)))


@pytest.mark.parametrize("p", [2, 3])
@given(data=st.data())
def test_associativity(p, data):
    a, b, c = (data.draw(elements(p, 10)) for _ in range(3))
    assert (a * b) * c == a * (b * c)


@pytest.mark.parametrize("p", [2, 3])
@given(data=st.data())
def test_product_is_bilinear_and_unital(p, data):
    a, b, c = data.draw(elements(p, 12)), data.draw(elements(p, 12)), data.draw(elements(p, 12))
    one = Element.one(p)
    assert one * a == a == a * one
    if b.degree == c.degree or not b or not c:
        assert a * (b + c) == a * b + a * c


@pytest.mark.parametrize("p", [2, 3])
@given(data=st.data())
def test_coproduct_is_multiplicative(p, data):
    a, b = data.draw(elements(p, 10)), data.draw(elements(p, 10))
    assert milnor_coproduct(a * b) == tensor_monomial_product(milnor_coproduct(a), milnor_coproduct(b))


def coassoc_check(a):
    p = a.p
    left, right = {}, {}
    for (x, y), c in milnor_coproduct(a).items():
        for (x1, x2), c1 in milnor_coproduct(Element({x: 1}, p)).items():
            key = (x1, x2, y)
            left[key] = (left.get(key, 0) + c * c1) % p
        for (y1, y2), c2 in milnor_coproduct(Element({y: 1}, p)).items():
            key = (x, y1, y2)
            right[key] = (right.get(key, 0) + c * c2) % p
    clean = lambda d: {k: v for k, v in d.items() if v}
    return clean(left) == clean(right)


@pytest.mark.parametrize("p", [2, 3])
def test_coproduct_coassociative_and_counital(p):
    for n in range(0, 20):
        for m in basis(n, p):
            a = Element({m: 1}, p)
            assert coassoc_check(a)
            t = milnor_coproduct(a)
            assert t.coeff((m, UNIT)) == 1 and t.coeff((UNIT, m)) == 1


def test_coproduct_examples():
    t = milnor_coproduct(Sq(2))
    assert format_tensor(t) == "1 ⊗ Sq(2) + Sq(1) ⊗ Sq(1) + Sq(2) ⊗ 1"
    q = milnor_coproduct(Qk(0, 3))
    assert set(q.terms) == {(Monomial((1,), ()), UNIT), (UNIT, Monomial((1,), ()))}


@pytest.mark.parametrize("p", [2, 3])
@given(data=st.data())
def test_pth_root_is_multiplicative(p, data):
    a, b = data.draw(elements(p, 12)), data.draw(elements(p, 12))

    def root(x):
        if not x or x.degree % p:
            return Element.zero(p)
        return pth_root(x)

    prod = a * b
    assert root(prod) == root(a) * root(b)


def test_pth_root_examples():
    assert pth_root(Sq(2)) == Sq(1)
    assert pth_root(Sq(0, 2)) == Sq(0, 1)
    assert pth_root(Sq(1, 1)) == Element.zero(2)
    assert pth_root(P(3, p=3)) == P(1, p=3)
    with pytest.raises(ValueError):
        pth_root(Sq(3))


def test_weight_and_degree():
    assert weight(Monomial((), (0, 1)), 2) == 1
    assert monomial_degree(Monomial((), (0, 1)), 2) == 3
    assert weight(Monomial((1, 1), (1,)), 3) == 4
    assert monomial_degree(Monomial((1, 1), (1,)), 3) == 10


def test_formatting_and_errors():
    assert format_monomial(UNIT, 2) == "1"
    assert str(Sq(3) + Sq(0, 1)) == "Sq(0,1) + Sq(3)"
    assert str(Q(1, p=3) * P(1, p=3)) == "Q(1) P(1)"
    assert str(Element.zero(2)) == "0"
    with pytest.raises(DegreeMismatch):
        Sq(1) + Sq(2)
    with pytest.raises(ValueError):
        Element.monomial((1,), (), 2)
    with pytest.raises(CapExceeded):
        milnor_product(Sq(8), Sq(8), PrimeContext(2, 10))
