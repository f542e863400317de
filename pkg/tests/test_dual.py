import numpy as np
import pytest
from hypothesis import given, strategies as st

from steenrod_excess.dual import (DUAL_FAMILIES, DualElement, check_adjointness, check_dual_filt3,
                                  check_pairing_identity, dual_coproduct, dual_filtration_basis, dual_product,
                                  format_dual_monomial, format_dual_tensor, level, pairing, pairing_matrix, tau,
                                  tensor_pairing, verify_dual_conditions, xi, zeta)
from steenrod_excess.filtration import filtration_basis, subspace_equal
from steenrod_excess.milnor import Element, Monomial, UNIT, basis, milnor_product, new_tensor


def mono(u):
    (m,) = u.terms
    return m


def test_generators_and_format():
    assert str(tau(0, 3)) == "tau_0"
    assert str(xi(1, 3, 2)) == "xi_1^2"
    assert str(zeta(2, 2)) == "zeta_2"
    assert str(DualElement.one(2)) == "1"
    assert xi(0, 3) == DualElement.one(3)
    assert format_dual_monomial(Monomial((1, 0, 1), (0, 3)), 3) == "tau_0 tau_2 xi_2^3"


def test_exterior_signs():
    p = 3
    t0, t1 = tau(0, p), tau(1, p)
    assert t0 * t0 == DualElement.zero(p)
    assert t1 * t0 == (t0 * t1).scale(-1)
    assert xi(1, p) * t0 == t0 * xi(1, p)


def test_p2_is_polynomial():
    z = zeta(1, 2)
    assert z * z == xi(1, 2, 2)
    assert (z ** 3) == xi(1, 2, 3)


def test_coproduct_on_generators_p3():
    p = 3
    got = dual_coproduct(xi(2, p))
    expected = {(mono(xi(2, p)), UNIT): 1, (mono(xi(1, p, 3)), mono(xi(1, p))): 1, (UNIT, mono(xi(2, p))): 1}
    assert dict(got.items()) == expected
    got = dual_coproduct(tau(1, p))
    expected = {(mono(tau(1, p)), UNIT): 1, (mono(xi(1, p)), mono(tau(0, p))): 1, (UNIT, mono(tau(1, p))): 1}
    assert dict(got.items()) == expected


def test_coproduct_binomial_p2():
    """delta(zeta_1^n) = sum_k C(n, k) zeta_1^k (x) zeta_1^{n-k}."""
    from math import comb
    for n in range(1, 12):
        got = dual_coproduct(xi(1, 2, n))
        expected = {}
        for k in range(n + 1):
            if comb(n, k) % 2:
                a = mono(xi(1, 2, k)) if k else UNIT
                b = mono(xi(1, 2, n - k)) if n - k else UNIT
                expected[(a, b)] = 1
        assert dict(got.items()) == expected


def test_coproduct_format():
    assert format_dual_tensor(dual_coproduct(zeta(2, 2))) == "1 ⊗ zeta_2 + zeta_1^2 ⊗ zeta_1 + zeta_2 ⊗ 1"


@pytest.mark.parametrize("p", [2, 3])
def test_pairing_matrix_is_identity(p):
    for n in range(0, 30):
        m = pairing_matrix(n, p)
        assert np.array_equal(m, np.eye(len(m), dtype=np.int64))
    assert check_pairing_identity(p, max_degree=30).passed


def duals(p, top=14):
    degs = [n for n in range(top + 1) if basis(n, p)]
    return st.sampled_from(degs).flatmap(
        lambda n: st.lists(st.integers(0, p - 1), min_size=len(basis(n, p)), max_size=len(basis(n, p))).map(
            lambda cs: DualElement(dict(zip(basis(n, p), cs)), p)))


@pytest.mark.parametrize("p", [2, 3])
@given(data=st.data())
def test_dual_product_graded_commutative_associative(p, data):
    a, b, c = (data.draw(duals(p)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    if a and b:
        sign = -1 if (a.degree * b.degree) % 2 else 1
        assert a * b == (b * a).scale(sign)


@pytest.mark.parametrize("p", [2, 3])
@given(data=st.data())
def test_adjointness_random(p, data):
    """<x y, u> = <x (x) y, delta u> and <x, u v> = <delta x, u (x) v>."""
    u = data.draw(duals(p, 16))
    if not u or u.degree == 0:
        return
    n = u.degree
    k = data.draw(st.integers(0, n))
    for mx in basis(k, p):
        for my in basis(n - k, p):
            x, y = Element({mx: 1}, p), Element({my: 1}, p)
            assert pairing(milnor_product(x, y), u) == tensor_pairing(new_tensor({(mx, my): 1}, p), dual_coproduct(u))


@pytest.mark.parametrize("p", [2, 3])
def test_adjointness_exhaustive(p):
    assert check_adjointness(p, max_degree=12).passed


@pytest.mark.parametrize("p", [2, 3])
def test_dual_filtration_two_descriptions(p):
    assert check_dual_filt3(p, max_level=6, max_degree=20).passed
    for n in range(0, 16):
        for i in range(0, 6):
            a = dual_filtration_basis(i, n, "monomial", p)
            b = dual_filtration_basis(i, n, "annihilator", p)
            assert subspace_equal(a, b)
            assert a.dim == len(basis(n, p)) - filtration_basis(i + 1, n, "milnor", p).dim


def test_level_examples():
    assert level(mono(tau(0, 3)), 3) == 1
    assert level(mono(xi(1, 3, 2)), 3) == 4
    assert level(mono(zeta(1, 2)), 2) == 1


def test_dual_basis_examples():
    sub = dual_filtration_basis(1, 1, "monomial", 3)
    assert [str(e) for e in sub.basis] == ["tau_0"]


@pytest.mark.parametrize("family", sorted(DUAL_FAMILIES))
def test_dual_families_pass_small(family, p):
    ranges = {"pairing": dict(max_degree=16), "adjoint": dict(max_degree=10),
              "dual_filt3": dict(max_level=6, max_degree=16), "e1-7": dict(max_level=5, max_degree=8),
              "e7*": dict(max_level=10), "e6*": dict(max_level=10, max_degree=20),
              "e1*": dict(max_degree=14), "e2*": dict(max_degree=14)}.get(family, dict(max_level=6, max_degree=8))
    rep = verify_dual_conditions(family, p, **ranges)
    assert len(rep) and rep.passed, rep.failures[:3]


def test_unknown_dual_family():
    with pytest.raises(ValueError):
        verify_dual_conditions("nope", 2)
