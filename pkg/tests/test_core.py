import math

import pytest
from hypothesis import given, strategies as st

from steenrod_excess.core import (CapExceeded, J_prime_word, J_word, K_word, NotAdmissible, PrimeContext,
                                  canonical_word, degree, enumerate_admissible, enumerate_milnor_index, excess,
                                  index_from_word, is_admissible, multinomial_mod_p, trim, varrho, varrho_inv,
                                  word_from_index)


def poincare_series(p, top):
    """Coefficients of prod 1/(1 - t^{|xi_k|}) * prod (1 + t^{|tau_k|}), the dimensions of A_p."""
    coeffs = [1] + [0] * top
    k = 1
    while (2 ** k - 1 if p == 2 else 2 * (p ** k - 1)) <= top:
        d = 2 ** k - 1 if p == 2 else 2 * (p ** k - 1)
        for n in range(d, top + 1):
            coeffs[n] += coeffs[n - d]
        k += 1
    if p != 2:
        k = 0
        while 2 * p ** k - 1 <= top:
            d = 2 * p ** k - 1
            for n in range(top, d - 1, -1):
                coeffs[n] += coeffs[n - d]
            k += 1
    return coeffs


@pytest.mark.parametrize("p", [2, 3, 5])
def test_basis_counts_match_poincare_series(p):
    series = poincare_series(p, 40)
    for n in range(41):
        assert len(enumerate_admissible(n, p)) == series[n]
        assert len(enumerate_milnor_index(n, p)) == series[n]


def test_degree_seven_admissibles():
    assert enumerate_admissible(7, 2) == [(7,), (6, 1), (5, 2), (4, 2, 1)]


@given(st.lists(st.integers(0, 12), min_size=1, max_size=4), st.sampled_from([2, 3, 5, 7]))
def test_multinomial_matches_factorials(parts, p):
    exact = math.factorial(sum(parts))
    for x in parts:
        exact //= math.factorial(x)
    assert multinomial_mod_p(parts, p) == exact % p


def test_multinomial_edge_cases():
    assert multinomial_mod_p([], 3) == 1
    assert multinomial_mod_p([0, 0], 2) == 1
    with pytest.raises(ValueError):
        multinomial_mod_p([-1, 2], 3)


def test_degree_and_excess_small_words():
    assert degree((2, 1), 2) == 3 and excess((2, 1), 2) == 1
    # b P^1 at p = 3: degree 5, excess 3
    assert degree((1, 1, 0), 3) == 5 and excess((1, 1, 0), 3) == 3
    assert excess((0, 1, 0), 3) == 2


@pytest.mark.parametrize("n", range(1, 6))
def test_known_words(n):
    assert degree(K_word(n), 2) == 2 ** n - 1 and excess(K_word(n), 2) == 1
    for p in (3, 5):
        J = J_word(n, p)
        assert is_admissible(J, p)
        assert degree(J, p) == 2 * (p ** n - 1)
        assert excess(J, p) == 2
        Jp = J_prime_word(n, p)
        assert is_admissible(Jp, p) and excess(Jp, p) == 1


def words(p):
    if p == 2:
        return st.lists(st.integers(0, 9), max_size=4).map(tuple)
    return st.integers(0, 3).flatmap(
        lambda n: st.tuples(*([st.integers(0, 1)] + [x for _ in range(n) for x in (st.integers(0, 4), st.integers(0, 1))])))


@given(st.data(), st.sampled_from([2, 3, 5]))
def test_varrho_is_a_bijection_onto_admissibles(data, p):
    w = canonical_word(data.draw(words(p)), p)
    a = varrho(w, p)
    assert is_admissible(a, p)
    assert varrho_inv(a, p) == w


@given(st.data(), st.sampled_from([2, 3]))
def test_excess_formula_nonnegative_on_admissibles(data, p):
    w = varrho(data.draw(words(p)), p)
    assert excess(w, p) >= 0
    assert excess(w, p) <= degree(w, p)


def test_varrho_inv_rejects_non_admissible():
    with pytest.raises(NotAdmissible):
        varrho_inv((1, 2), 2)


@given(st.data(), st.sampled_from([2, 3]))
def test_index_round_trip(data, p):
    w = canonical_word(data.draw(words(p)), p)
    E, R = index_from_word(w, p)
    assert word_from_index(E, R, p) == w


def test_canonical_word_validation():
    assert canonical_word((0, 1, 0, 0, 0), 3) == (0, 1, 0)
    assert canonical_word((), 3) == (0,)
    assert trim((1, 0, 0)) == (1,)
    with pytest.raises(ValueError):
        canonical_word((0, 1), 3)
    with pytest.raises(ValueError):
        canonical_word((2, 1, 0), 3)


def test_context_validation():
    with pytest.raises(ValueError):
        PrimeContext(4)
    with pytest.raises(ValueError):
        PrimeContext(17)
    ctx = PrimeContext(2, 10)
    ctx.check(10)
    with pytest.raises(CapExceeded):
        ctx.check(11)
    with pytest.raises(CapExceeded):
        enumerate_admissible(11, ctx)


def test_admissible_definition_examples():
    assert is_admissible((4, 2, 1), 2)
    assert not is_admissible((1, 2), 2)
    assert is_admissible((0, 3, 0, 1, 0), 3)
    assert not is_admissible((0, 2, 0, 1, 0), 3)
    assert is_admissible((0, 3, 1, 1, 0), 3) is False  # 3 < 3*1 + 1
    assert is_admissible((1, 4, 1, 1, 0), 3)
