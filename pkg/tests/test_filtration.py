import numpy as np
import pytest
from hypothesis import given, strategies as st

from steenrod_excess.core import enumerate_admissible, excess
from steenrod_excess.filtration import (e_quotient, filtration_basis, gamma, gamma_source_degree, in_filtration,
                                        min_weight, mu_tilde, quotient_basis, subspace_equal, top_degree,
                                        top_element, top_monomial, top_word, truncate_below, weight_part)
from steenrod_excess.admissible import word_to_milnor
from steenrod_excess.milnor import Element, Monomial, Sq, basis, milnor_product, weight


@pytest.mark.parametrize("p", [2, 3])
def test_span_equality_small(p):
    for n in range(0, 21):
        for i in range(0, 8):
            a = filtration_basis(i, n, "admissible", p)
            b = filtration_basis(i, n, "milnor", p)
            assert subspace_equal(a, b)
            assert a.dim == b.dim


def test_filtration_zero_is_everything():
    sub = filtration_basis(0, 3, "admissible", 2)
    assert sub.dim == sub.ambient_dim == 2


def test_weight_helpers():
    a = Sq(3) + Sq(0, 1)
    assert min_weight(a) == 1
    assert truncate_below(a, 2) == Sq(0, 1)
    assert truncate_below(a, 1) == Element.zero(2)
    assert weight_part(a, 1) == Sq(0, 1)
    assert in_filtration(a, 1) and not in_filtration(a, 2)
    assert min_weight(Element.zero(2)) is None


def test_top_elements():
    assert top_monomial(3, 2) == Monomial((), (3,))
    assert top_monomial(3, 3) == Monomial((1,), (1,))
    assert top_degree(3, 3) == 5
    assert top_word(3, 3) == (1, 1, 0)
    assert top_element(4, 2) == Sq(4)


@pytest.mark.parametrize("p", [2, 3])
def test_e_quotients_match_admissible_counts(p):
    """dim E_i^j = #admissibles of degree j with excess exactly i."""
    for j in range(0, 25):
        words = enumerate_admissible(j, p)
        for i in range(0, j + 2):
            assert e_quotient(i, j, p).dim == sum(1 for w in words if excess(w, p) == i)


@pytest.mark.parametrize("p", [2, 3])
def test_top_quotients_are_lines(p):
    for s in range(0, 9):
        e = e_quotient(s, top_degree(s, p), p)
        assert e.dim == 1
        assert e.basis[0] == Element({top_monomial(s, p): 1}, p)


@pytest.mark.parametrize("p", [2, 3])
def test_mu_tilde_invertible(p):
    for s in range(0, 8):
        for j in range(0, s + 1):
            if top_degree(s, p) + j > 24:
                continue
            mt = mu_tilde(s, j, p)
            assert mt.invertible, (s, j)


def test_mu_tilde_rejects_negative():
    with pytest.raises(ValueError):
        mu_tilde(-1, 0, 2)


@pytest.mark.parametrize("p", [2, 3])
@given(data=st.data())
def test_gamma_defining_congruence(p, data):
    """theta * top(s_src) and top(2i+e) * gamma(theta) agree in weight s_src."""
    i = data.draw(st.integers(0, 4))
    eps = data.draw(st.integers(0, 1))
    j = data.draw(st.integers(0, 2 * i + eps))
    d = gamma_source_degree(j, eps, p)
    ms = basis(d, p)
    if not ms or top_degree(2 * i + eps, p) + j > 30:
        return
    cs = data.draw(st.lists(st.integers(0, p - 1), min_size=len(ms), max_size=len(ms)))
    theta = Element(dict(zip(ms, cs)), p)
    c = gamma(i, j, eps, theta, p)
    s_src = 2 * i - j + eps
    for m in c:
        assert weight(m, p) <= s_src
    lhs = weight_part(milnor_product(theta, top_element(s_src, p)), s_src) if theta else Element.zero(p)
    rhs = weight_part(milnor_product(top_element(2 * i + eps, p), c), s_src) if c else Element.zero(p)
    assert lhs == rhs


def test_gamma_argument_checks():
    with pytest.raises(ValueError):
        gamma(1, 5, 0, Sq(2), 2)
    with pytest.raises(ValueError):
        gamma(2, 1, 0, Sq(1), 2)


def test_quotient_basis():
    assert quotient_basis(1, 0, 2) == [Monomial((), ())]
    assert quotient_basis(1, 5, 2) == []
    assert set(quotient_basis(2, 3, 2)) == {Monomial((), (0, 1))}


def test_worked_excess_one_elements():
    # K_n = Sq^{2^{n-1}} ... Sq^1 has excess one and spans the weight-one part with Sq(0,..,0,1)
    a = word_to_milnor((4, 2, 1), 2)
    assert min_weight(a) == 1
