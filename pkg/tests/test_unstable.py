import itertools
import json

import numpy as np
import pytest

from steenrod_excess.core import CapExceeded, PrimeContext
from steenrod_excess.milnor import Element, Monomial, UNIT
from steenrod_excess.unstable import (UNSTABLE_FAMILIES, GradedVectorSpace, NotUnstable, algebra_quotient,
                                      check_associative, check_module_map, check_ses_free, check_triangle,
                                      check_phi_exact, check_unstable, check_unstable_top, free_unstable,
                                      is_unstable, lambda_map, module_from_json, omega, omega1, phi,
                                      small_spaces, sphere, suspend, tensor_unstable, trivial_module)


def brute_free_dims(p: int, V: dict, cap: int) -> dict:
    """Count admissible words ``I`` with excess ``<= n`` on each generator of degree ``n``."""
    out: dict = {}
    for n, mult in V.items():
        for d in range(cap - n + 1):
            count = sum(1 for w in brute_words(p, d) if brute_excess(p, w) <= n)
            if count * mult:
                out[n + d] = out.get(n + d, 0) + count * mult
    return out


def brute_words(p: int, d: int):
    if p == 2:
        def rec(left, prev):
            if left == 0:
                yield ()
                return
            for a in range(1, min(left, prev) + 1):
                for rest in rec(left - a, a // 2):
                    yield (a,) + rest
        yield from rec(d, d)
        return
    q = 2 * (p - 1)
    # words (e0, i1, e1, ..., ik, ek) with i_j >= p i_{j+1} + e_j, read right to left
    for k in range(0, d // q + 2):
        for eps in itertools.product((0, 1), repeat=k + 1):
            budget = d - sum(eps)
            if budget < 0 or budget % q:
                continue
            total = budget // q
            for ii in itertools.product(range(1, total + 1), repeat=k):
                if sum(ii) != total:
                    continue
                if all(ii[j] >= p * ii[j + 1] + eps[j + 1] for j in range(k - 1)):
                    w = [eps[0]]
                    for j in range(k):
                        w += [ii[j], eps[j + 1]]
                    yield tuple(w)


def brute_excess(p: int, w) -> int:
    if not w:
        return 0
    if p == 2:
        return w[0] - sum(w[1:])
    q = 2 * (p - 1)
    rest = sum(w[2::2]) + q * sum(w[3::2])
    return 2 * w[1] + w[0] - rest if len(w) > 1 else w[0]


@pytest.mark.parametrize("V", [{0: 1}, {1: 1}, {2: 1}, {1: 1, 3: 2}, {4: 1}])
def test_free_dims_match_admissible_count(p, V):
    cap = 14 if p == 2 else 24
    F = free_unstable(GradedVectorSpace(V), cap, p)
    assert F.dims == brute_free_dims(p, V, cap)


def test_free_one_sphere_powers_of_two():
    F = free_unstable(sphere(1), 17, 2)
    assert F.dims == {1: 1, 2: 1, 4: 1, 8: 1, 16: 1}


def test_free_degenerate_cases(p):
    assert free_unstable(sphere(0), 12, p).dims == {0: 1}
    assert free_unstable(GradedVectorSpace(), 12, p).dims == {}
    assert is_unstable(free_unstable(GradedVectorSpace(), 12, p))


def test_free_modules_are_unstable_and_associative(p):
    F = free_unstable(GradedVectorSpace({1: 1, 2: 1}), 14, p)
    assert check_unstable(F).passed
    assert check_associative(F, exhaustive_degree=8, samples=40).passed


def test_sphere_quotients_are_unstable(p):
    for n in range(4):
        M = algebra_quotient(n + 1, n, 14, p)
        assert is_unstable(M), M.name


def test_shifted_quotient_is_not_unstable():
    M = algebra_quotient(3, 1, 10, 2)
    rep = check_unstable(M)
    assert not rep.passed
    assert rep.failures[0].witness == ["Sq(2)", 1, 0]
    assert not check_unstable_top(M).passed
    with pytest.raises(NotUnstable):
        phi(M)
    with pytest.raises(NotUnstable):
        tensor_unstable(M, M)


def test_zero_module_is_unstable(p):
    Z = free_unstable(GradedVectorSpace(), 8, p)
    assert check_unstable(Z).passed
    assert phi(Z).dims == {}


def test_phi_degrees(p):
    F = free_unstable(GradedVectorSpace({1: 1, 2: 1, 3: 1}), 24, p)
    P = phi(F)
    assert P.dims
    for k in P.degrees:
        assert k % (2 * p) in (0, 2)
    assert is_unstable(P)


def test_phi_of_degree_zero_module(p):
    P = phi(free_unstable(sphere(0), 12, p))
    assert P.dims == {0: 1}


def test_lambda_on_one_sphere():
    F = free_unstable(sphere(1), 10, 2)
    lam = lambda_map(F)
    # the generator of degree 1 doubles under Sq^1
    assert lam[2].tolist() == [[1]]
    assert check_module_map(lam).passed


def test_lambda_is_a_module_map(p):
    F = free_unstable(GradedVectorSpace({2: 1, 3: 1}), 16, p)
    assert check_module_map(lambda_map(F, validate=True)).passed


def test_omega_of_suspension(p):
    F = free_unstable(GradedVectorSpace({1: 1, 2: 1}), 14, p)
    O = omega(suspend(F, 1))
    assert O.dims == F.dims


@pytest.mark.parametrize("V", [{1: 1}, {2: 1}, {1: 1, 3: 1}])
def test_omega_of_free(p, V):
    cap = 14
    V = GradedVectorSpace(V)
    O = omega(free_unstable(V, cap, p), validate=True)
    expected = free_unstable(V.suspend(-1), cap - 1, p)
    assert O.dims == expected.dims


def test_omega_one(p):
    F = free_unstable(sphere(1), 12, p)
    assert omega(F).dims == {0: 1}
    assert omega1(F).dims == {}
    G = free_unstable(GradedVectorSpace({2: 1}), 14, p)
    assert is_unstable(omega1(G))


@pytest.mark.parametrize("V,p_,cap", [({1: 1}, 2, 17), ({2: 1, 3: 1}, 3, 16), ({}, 2, 10), ({}, 3, 10)])
def test_short_exact_sequence(V, p_, cap):
    rep = check_ses_free(GradedVectorSpace(V), cap, p_)
    assert rep.passed, rep.failures[:3]


def test_phi_exact_and_triangle(p):
    V = GradedVectorSpace({1: 1, 2: 1})
    assert check_phi_exact(V, 14, p).passed
    assert check_triangle(V, 14, p).passed


def test_small_spaces():
    spaces = small_spaces()
    assert len(spaces) == len({tuple(s.dims.items()) for s in spaces}) == 84
    assert all(s.total_dim <= 3 for s in spaces)


def test_tensor_with_unit(p):
    F = free_unstable(GradedVectorSpace({1: 1, 2: 1}), 12, p)
    T = tensor_unstable(F, trivial_module(p, 12))
    assert T.dims == F.dims
    for n in F.degrees:
        for t in F.monomials_on(n):
            assert np.array_equal(T.action(t, n), F.action(t, n))


def test_tensor_cartan_formula_p2():
    F = free_unstable(sphere(1), 8, 2)
    T = tensor_unstable(F, F)
    sq1 = Monomial((), (1,))
    # Sq^1 (x (x) x) = x^2 (x) x + x (x) x^2
    assert T.action(sq1, 2).tolist() == [[1], [1]]
    assert is_unstable(T)


def test_tensor_cartan_sign_odd():
    F = free_unstable(sphere(1), 8, 3)
    T = tensor_unstable(F, F)
    beta = Monomial((1,), ())
    # b(x (x) x) = bx (x) x - x (x) bx
    col = T.action(beta, 2)[:, 0].tolist()
    assert sorted(col) == [1, 2]
    assert is_unstable(T)


def test_json_round_trip(p):
    F = free_unstable(GradedVectorSpace({1: 1, 2: 1}), 10, p)
    G = module_from_json(json.dumps(F.to_json()))
    assert G.dims == F.dims
    for n in F.degrees:
        for t in F.monomials_on(n):
            assert np.array_equal(G.action(t, n), F.action(t, n))


def test_action_cap(p):
    F = free_unstable(sphere(1), 6, p)
    with pytest.raises(CapExceeded):
        F.action(Monomial((), (6,)), 1)
    assert np.array_equal(F.action(UNIT, 1), np.eye(1, dtype=np.int64))


def test_act_element():
    F = free_unstable(sphere(2), 10, 2)
    sq2 = Element({Monomial((), (2,)): 1}, 2)
    assert F.act(sq2, 2).tolist() == [[1]]
    assert np.array_equal(F.act_word((2,), 2), F.act(sq2, 2))


def test_suspend_negative_degree():
    F = free_unstable(sphere(0), 4, 2)
    with pytest.raises(ValueError):
        suspend(F, -1)


def test_family_registry(p):
    assert set(UNSTABLE_FAMILIES) == {"ses", "triangle", "phi_exact", "um", "suspension", "free_dims"}
    assert UNSTABLE_FAMILIES["free_dims"](PrimeContext(p), cap=17).passed
