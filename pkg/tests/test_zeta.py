import itertools
import random
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistlie.zeta import (
    Budget,
    BudgetExceeded,
    CentralData,
    ExtClass,
    FqSpec,
    GF,
    ZetaError,
    ZetaSeries,
    absolutely_irreducible,
    arithmetic_product,
    brute_force_simples,
    compile_presentation,
    compile_relations,
    ext1_dim,
    isomorphic,
    jackson_fiber,
    one_dim_points,
    one_dim_points_oracle,
    relations_hold,
    series_exp,
    series_log,
    trace_T,
    zeta_element,
)

FIELDS = [GF(2), GF(5), GF(7), GF(2, 3), GF(3, 2), GF(7, 2)]


@pytest.mark.parametrize("F", FIELDS, ids=repr)
@settings(max_examples=60, deadline=None)
@given(st.data())
def test_gf_field_axioms(F, data):
    a, b, c = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    add, mul = F.add, F.mul
    assert add[add[a, b], c] == add[a, add[b, c]]
    assert mul[mul[a, b], c] == mul[a, mul[b, c]]
    assert mul[a, add[b, c]] == add[mul[a, b], mul[a, c]]
    assert mul[a, b] == mul[b, a] and add[a, F.neg[a]] == 0
    if a:
        assert mul[a, F.inv[a]] == 1


def test_gf_rejects_composite_and_huge():
    with pytest.raises(ZetaError):
        GF(6)
    with pytest.raises(BudgetExceeded):
        GF(2, 13)


def test_frobenius_fixes_prime_field():
    F = GF(7, 2)
    fixed = [x for x in range(F.q) if F.power(x, 7) == x]
    assert len(fixed) == 7


@pytest.mark.parametrize("k", [1, 2])
def test_one_dim_points_match_oracle(k):
    P = jackson_fiber(3, 7, 2, 1)
    F = GF(7, k)
    assert sorted(p.values for p in one_dim_points(P, F)) == one_dim_points_oracle(P, 7, k)


def test_one_dim_points_other_fibre():
    # n = 3 also divides 13 - 1; xi = 3 has order 3 there
    P = jackson_fiber(3, 13, 3, 2)
    F = GF(13)
    assert sorted(p.values for p in one_dim_points(P, F)) == one_dim_points_oracle(P, 13, 1)


def test_jackson_fiber_checks_xi_order():
    with pytest.raises(ZetaError):
        jackson_fiber(3, 7, 3, 1)  # 3 has order 6 mod 7
    with pytest.raises(ZetaError):
        jackson_fiber(3, 5, 2, 1)  # 3 does not divide 4


def test_polynomial_ring_points_are_affine_space():
    # the commutative polynomial ring in two variables has q^2 characters, nothing higher
    p = 5
    C = compile_relations(p, ["x", "y"], [{(0, 1): 1, (1, 0): -1}])
    F = GF(p)
    assert len(one_dim_points(C, F)) == p * p
    central = CentralData(((((0,), 1),), (((1,), 1),)), (None, None), ("x", "y"))
    res = brute_force_simples(C, F, 2, central, Budget(matrix_field=5))
    assert Counter(s.dim for s in res.simples) == {1: 25}


@pytest.fixture(scope="module")
def fibre_k1():
    P = jackson_fiber(3, 7, 2, 1)
    central = CentralData.compute(P)
    res = brute_force_simples(P, GF(7), 3, central, Budget(matrix_field=7))
    return P, central, res


def test_found_simples_are_valid_and_distinct(fibre_k1):
    P, central, res = fibre_k1
    F, C = GF(7), compile_presentation(P)
    assert res.complete
    dims = Counter(s.dim for s in res.simples)
    assert dims[1] == len(one_dim_points_oracle(P, 7, 1)) and set(dims) <= {1, 2, 3}
    for s in res.simples:
        mats = s.arrays()
        assert relations_hold(F, C, mats) and absolutely_irreducible(F, mats)
    rng = random.Random(3)
    sample = rng.sample([s for s in res.simples if s.dim == 3], 30)
    for a, b in itertools.combinations(sample, 2):
        assert not isomorphic(F, a.arrays(), b.arrays())


def test_isomorphic_under_conjugation(fibre_k1):
    _, _, res = fibre_k1
    F = GF(7)
    S = next(s for s in res.simples if s.dim == 3).arrays()
    g = np.array([[1, 2, 0], [0, 1, 3], [0, 0, 1]])
    ginv = np.array([[1, 5, 6], [0, 1, 4], [0, 0, 1]])
    assert (F.matmul(g, ginv) == F.identity(3)).all()
    T = [F.matmul(F.matmul(g, X), ginv) for X in S]
    assert isomorphic(F, S, T)


def test_reducible_module_rejected():
    F = GF(7)
    mats = [np.array([[1, 1], [0, 2]]), np.array([[3, 0], [0, 3]])]
    assert not absolutely_irreducible(F, mats)
    assert absolutely_irreducible(F, [np.array([[0, 1], [0, 0]]), np.array([[0, 0], [1, 0]])])


def test_budget_guard_on_matrix_search():
    P = jackson_fiber(3, 7, 2, 1)
    central = CentralData((), (None, None, None), ())
    with pytest.raises(BudgetExceeded):
        brute_force_simples(P, GF(7, 2), 2, central, Budget(matrix_field=7))
    with pytest.raises(BudgetExceeded):
        brute_force_simples(P, GF(7), 5, central, Budget(max_dim=3))


def test_ext1_free_algebra_equals_generator_count():
    F = GF(5)
    for g in (1, 2, 3):
        C = compile_relations(5, [f"x{i}" for i in range(g)], [])
        pt = [np.array([[i]]) for i in range(g)]
        assert ext1_dim(C, pt, pt, F) == g


def test_ext1_between_distinct_characters_of_polynomial_ring():
    # Ext^1 between distinct points of affine space vanishes
    C = compile_relations(5, ["x", "y"], [{(0, 1): 1, (1, 0): -1}])
    F = GF(5)
    S = [np.array([[1]]), np.array([[2]])]
    T = [np.array([[1]]), np.array([[3]])]
    assert ext1_dim(C, S, T, F) == 0
    assert ext1_dim(C, S, S, F) == 2


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-20, 20), st.integers(1, 6)), min_size=1, max_size=6))
def test_series_exp_log_round_trip(pairs):
    logc = [Fraction(a, b) for a, b in pairs]
    z = series_exp(logc, len(logc))
    assert z[0] == 1
    assert series_log(z) == [Fraction(x) for x in logc]


def test_series_from_counts():
    s = ZetaSeries.from_counts([1, 1, 1])
    # exp(sum t^k / k) = 1 / (1 - t)
    assert s.coefficients == (1, 1, 1, 1) and s.round_trip()
    # point counts q^k of the affine line give 1 / (1 - q t)
    assert ZetaSeries.from_counts([2, 4, 8]).coefficients == (1, 2, 4, 8)


def test_series_log_needs_unit_constant():
    with pytest.raises(ZetaError):
        series_log([Fraction(2), Fraction(1)])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=1, max_size=9), st.randoms(use_true_random=False))
def test_ext_class_and_trace_permutation_invariant(entries, rnd):
    n = 1
    while n * n < len(entries):
        n += 1
    flat = entries + [0] * (n * n - len(entries))
    shuffled = flat[:]
    rnd.shuffle(shuffled)
    M1 = [flat[i * n:(i + 1) * n] for i in range(n)]
    M2 = [shuffled[i * n:(i + 1) * n] for i in range(n)]
    assert ExtClass.of(M1) == ExtClass.of(M2)
    assert trace_T(Counter({ExtClass.of(M1): 2})) == 2 * sum(flat)


def test_budget_from_env(monkeypatch):
    monkeypatch.setenv("TWISTLIE_BUDGET", '{"matrix_field": 7, "max_dim": 2}')
    b = Budget.from_env(candidates=10)
    assert (b.matrix_field, b.max_dim, b.candidates) == (7, 2, 10)
    assert Budget.from_env(max_dim=None).max_dim == 2
    monkeypatch.setenv("TWISTLIE_BUDGET", '{"wallclock": 3}')
    with pytest.raises(ZetaError):
        Budget.from_env()
    monkeypatch.delenv("TWISTLIE_BUDGET")
    assert Budget.from_env() == Budget()


def test_fq_spec_validation():
    assert FqSpec(7, 1, 2, 3).q == 7
    with pytest.raises(ZetaError):
        FqSpec(8)
    with pytest.raises(ZetaError):
        FqSpec(7, 2, 2, 3)


def test_zeta_first_term_and_arithmetic_product(fibre_k1):
    P, central, res = fibre_k1
    Z = zeta_element(P, FqSpec(7, 1, 2, 3), 1, 3, central=central, budget=Budget(matrix_field=7))
    f = Z.fibers[0]
    # recount the Azumaya/ramified split directly from the simples
    by_char = Counter(s.character for s in res.simples)
    top = [s for s in res.simples if s.dim == 3 and by_char[s.character] == 1]
    ram = sum(s.dim for s in res.simples if not (s.dim == 3 and by_char[s.character] == 1))
    assert f.complete and f.azumaya == len(top) and f.ram_count == ram
    assert f.central_points == len(by_char) == f.azumaya + len(f.ram_points)
    assert Z.zeta_azu.coefficients == (1, len(top))
    prod = arithmetic_product([(7, Z)])
    assert prod.primes == (7,) and len(prod) == 1
    with pytest.raises(ZetaError):
        arithmetic_product([(7, Z), (7, Z)])
