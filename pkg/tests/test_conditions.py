import pytest

from steenrod_excess.conditions import FAMILIES, check_cong22, check_cong32, verify_conditions
from steenrod_excess.admissible import word_to_milnor
from steenrod_excess.filtration import in_filtration
from steenrod_excess.milnor import Sq

SMALL = {
    "e1": dict(max_degree=12), "e2": dict(max_degree=12), "e3": dict(max_level=6, max_degree=8),
    "e4": dict(max_level=6, max_degree=8), "e5": dict(max_level=6, max_degree=8), "e6": dict(max_level=8),
    "e7": dict(max_level=8), "e8": dict(max_degree=16), "e9": dict(max_degree=16), "fil1": dict(max_i=5),
    "fil2": dict(count=40, max_degree=16, seed=3), "span": dict(max_level=6, max_degree=16),
    "weight": dict(max_degree=14), "excess_bound": dict(count=40, max_degree=16, seed=4),
    "a5": dict(max_degree=16), "cong1": dict(max_degree=16), "cong2": dict(max_degree=16),
    "cong22": dict(max_degree=16), "cong3": dict(max_degree=16), "cong32": dict(max_degree=16),
    "cong4": dict(max_degree=16), "cong42": dict(max_degree=16),
}


@pytest.mark.parametrize("family", sorted(SMALL))
def test_family_passes_in_small_range(family, p):
    rep = verify_conditions(family, p, **SMALL[family])
    assert len(rep) > 0
    assert rep.passed, rep.failures[:3]


def test_registry_covers_families():
    assert set(SMALL) == set(FAMILIES)
    with pytest.raises(ValueError):
        verify_conditions("nope", 2)


def test_literal_cong22_counterexample():
    """Sq(2) Sq^1 = Sq(3) + Sq(0,1); the weight-one term is not in F_2."""
    prod = Sq(2) * word_to_milnor((1,), 2)
    assert prod == Sq(3) + Sq(0, 1)
    assert not in_filtration(prod, 2)
    rep = check_cong22(2, max_degree=6, literal=True)
    assert not rep.passed
    assert any(r.witness and r.witness["input"] == "Sq(2)" for r in rep.failures if r.indices["j"] == 1)


def test_cong22_corrected_bound_passes():
    assert check_cong22(2, max_degree=20).passed
    assert check_cong32(2, max_degree=20).passed


def test_report_serialization():
    rep = verify_conditions("a5", 2, max_degree=6)
    lines = list(rep.lines())
    assert len(lines) == len(rep)
    assert all(line.startswith('{"family":"a5","p":2') for line in lines)
    assert rep.summary()["failed"] == 0
