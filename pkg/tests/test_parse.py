import pytest
from hypothesis import given, strategies as st

from steenrod_excess.core import CapExceeded, PrimeContext
from steenrod_excess.milnor import Element, Monomial, basis, format_monomial
from steenrod_excess.parse import ParseError, format_element_json, parse, parse_element, parse_word


def mono(E, R, p):
    return Element({Monomial.make(E, R): 1}, p)


def test_milnor_factors():
    assert parse_element("Sq(0,1)", 2) == mono((), (0, 1), 2)
    assert parse_element("Q(1,1) P(2)", 3) == mono((1, 1), (2,), 3)
    assert parse_element("Sq()", 2) == Element.one(2)


def test_letters_and_words():
    assert parse_word("Sq^4 Sq^2 Sq^1", 2) == (4, 2, 1)
    assert parse_word("Sq4Sq2", 2) == (4, 2)
    assert parse_word("b P1", 3) == (1, 1, 0)
    assert parse_word("P^3 b P^1", 3) == (0, 3, 1, 1, 0)
    assert parse("1", 2).word == ()


def test_juxtaposition_multiplies():
    assert parse_element("Sq(1) Sq(2)", 2) == parse_element("Sq(3)", 2)
    assert parse_element("Sq(2) Sq(1)", 2) == parse_element("Sq(3) + Sq(0,1)", 2)


def test_sums_and_coefficients():
    a = parse_element("2 P(1) - P(1)", 3)
    assert a == mono((), (1,), 3)
    assert parse_element("Sq(3) + Sq(3)", 2) == Element.zero(2)
    assert parse("Sq^2 + Sq^2", 2).word is None
    assert parse("-Sq^2", 2).word is None


def test_prime_specific_names():
    with pytest.raises(ParseError):
        parse_element("Sq(1)", 3)
    with pytest.raises(ParseError):
        parse_element("P(1)", 2)
    with pytest.raises(ParseError):
        parse_element("b", 2)
    with pytest.raises(ParseError):
        parse_element("Q(2)", 3)


@pytest.mark.parametrize("text,pos", [("Sq(1", 4), ("Sq(1) +", 7), ("Sq(1) % 2", 6), ("Sq(1) + Sq(2)", 8), ("", 0)])
def test_error_positions(text, pos):
    with pytest.raises(ParseError) as err:
        parse_element(text, 2)
    assert err.value.position == pos
    assert f"position {pos}" in str(err.value)


def test_parse_word_rejects_milnor_notation():
    with pytest.raises(ParseError):
        parse_word("Sq(2)", 2)
    with pytest.raises(ParseError):
        parse_word("b b", 3)


def test_degree_cap():
    with pytest.raises(CapExceeded):
        parse_element("Sq(30)", PrimeContext(2, 20))


def test_json_format():
    data = format_element_json(parse_element("Sq(3) + Sq(0,1)", 2))
    assert data == {"schema": 1, "p": 2, "degree": 3, "basis": "milnor",
                    "terms": [{"coeff": 1, "E": [], "R": [0, 1]}, {"coeff": 1, "E": [], "R": [3]}]}
    assert format_element_json(Element.zero(3))["degree"] is None


@given(p=st.sampled_from([2, 3, 5]), n=st.integers(0, 30), data=st.data())
def test_format_parse_round_trip(p, n, data):
    monos = basis(n, p)
    if not monos:
        return
    m = data.draw(st.sampled_from(monos))
    assert parse_element(format_monomial(m, p), p) == Element({m: 1}, p)


@given(p=st.sampled_from([2, 3]), n=st.integers(1, 20), data=st.data())
def test_str_round_trip(p, n, data):
    monos = basis(n, p)
    if not monos:
        return
    coeffs = data.draw(st.lists(st.integers(0, p - 1), min_size=len(monos), max_size=len(monos)))
    a = Element({m: c for m, c in zip(monos, coeffs) if c}, p)
    if a:
        assert parse_element(str(a), p) == a
