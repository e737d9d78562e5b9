import pytest

from twistlie.covers import kummer_ring, kummer_witt_homlie
from twistlie.reference import (
    KW_TABLES,
    as_comparison,
    compare_table,
    discrepancy_notes,
    kw_comparison,
    omega_comparison,
    proportional,
    sl2_comparison,
)
from twistlie.enveloping import jackson_presentation


@pytest.mark.parametrize("n,r", sorted(KW_TABLES))
def test_kummer_witt_full_tables_agree(n, r):
    full = kw_comparison(n, r)[0]
    assert full.match, [str(d) for d in full.diffs]


def test_kummer_witt_simplified_form_discrepancy():
    simplified = kw_comparison(4, 1)[1]
    assert [(d.pair, d.index) for d in simplified.diffs] == [((2, 3), 1)]
    d = simplified.diffs[0]
    # the printed value is twice the true one
    assert d.published_value == 2 * d.computed
    assert "<e2,e3>" in discrepancy_notes([simplified])[0]


def test_artin_schreier_p3_agrees():
    assert as_comparison(3).match


def test_artin_schreier_p5_discrepancies():
    c = as_comparison(5)
    assert sorted((d.pair, d.index) for d in c.diffs) == [((1, 4), 3), ((1, 4), 4), ((2, 4), 2)]


def test_compare_table_detects_perturbation():
    _, xi, b = kummer_ring(3, "sym")
    L = kummer_witt_homlie(3, 1, b, xi)
    table = dict(KW_TABLES[(3, 1)])
    table[(0, 1)] = [(1, "1 + xi")]
    c = compare_table(L, table, "perturbed")
    assert [(d.pair, d.index) for d in c.diffs] == [((0, 1), 1)]


def test_sl2_relations():
    matches = {m.name: m.proportional for m in sl2_comparison()}
    assert all(matches[f"slenv #{k}"] for k in (1, 2, 3))
    assert not matches["slenv matrix form #1"] and matches["slenv matrix form #2"]
    assert not matches["q-specialization #2"]
    assert matches["q-specialization #1"] and matches["q-specialization #3"]


def test_proportional():
    P = jackson_presentation(3, "sym")
    x = P.parse("eps0*eps1 + eps2")
    assert proportional(x, x * 3) and not proportional(x, P.parse("eps0*eps1 - eps2"))
    assert not proportional(x, P.parse("0")) and proportional(P.parse("0"), P.parse("0"))


def test_omega_normal_elements():
    sol, cases = omega_comparison(3)
    assert sol.dimension == 2 and sol.raw_dimension == 3
    assert all(all(c.agree) for c in cases)
