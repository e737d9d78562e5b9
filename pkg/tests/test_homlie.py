import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import monomial_algebra, twist_scalars, witt_data
from twistlie.algebra import LinearEndomorphism
from twistlie.covers import (
    CoverSpec,
    arithmetic_witt,
    kummer_algebra,
    kummer_ring,
    kummer_sigma,
    kummer_witt_homlie,
)
from twistlie.derivations import make_derivation
from twistlie.homlie import (
    AlternationError,
    HomLieAlgebra,
    HomLieError,
    base_change,
    check_axioms,
    derived_dimensions,
    from_derivation,
    from_json,
    hl_functor,
    is_morphism,
    is_solvable,
    subalgebra_scan,
    to_json,
    to_latex,
)
from twistlie.rings import PrimeField, Rationals, RingMorphism

FAMILY_SPECS = [
    CoverSpec("kummer-witt", 3, 1),
    CoverSpec("kummer-witt", 4, 2),
    CoverSpec("kummer-witt", 5, 3),
    CoverSpec("jackson", 5),
    CoverSpec("artin-schreier", 3),
    CoverSpec("artin-schreier", 5),
    CoverSpec("jackson-sl2"),
]


@pytest.mark.parametrize("spec", FAMILY_SPECS, ids=lambda s: f"{s.family}-{s.n}-{s.r}")
def test_family_axioms_and_antisymmetry(spec):
    L = spec.build()
    report = check_axioms(L)
    assert report.passed
    assert report.q == ("s1" if spec.family == "jackson-sl2" else "1")
    for i in range(L.rank):
        for j in range(L.rank):
            assert L.bracket_basis(i, j) == tuple(-c for c in L.bracket_basis(j, i))


@pytest.mark.parametrize("n,r", [(3, 1), (4, 1), (4, 3), (5, 2), (6, 1)])
def test_hl_functor_equals_id_minus_sigma(n, r):
    _, xi, b = kummer_ring(n, "sym")
    A = kummer_algebra(n, b)
    sigma = kummer_sigma(A, r, xi)
    assert hl_functor(A, sigma) == from_derivation(make_derivation(sigma, 1))


@settings(max_examples=25, deadline=None)
@given(witt_data(5))
def test_hl_functor_on_random_graded_algebras(data):
    monos, scales = data
    A = monomial_algebra(monos, scales)
    qs = twist_scalars(monos)
    sigma = LinearEndomorphism.diagonal(A, qs)
    L = hl_functor(A, sigma)
    assert L == arithmetic_witt(A, qs)
    assert L == from_derivation(make_derivation(sigma, 1))
    assert check_axioms(L).passed


def _random_vec(rng, R, n):
    return tuple(R(rng.randint(-3, 3)) for _ in range(n))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_base_change_commutes_with_bracket(seed):
    rng = random.Random(seed)
    R, xi, b = kummer_ring(3, "sym")
    L = kummer_witt_homlie(3, 1, b, xi)
    phi = RingMorphism.from_images(R, PrimeField(7), {"xi": 2, "b": rng.randint(0, 6)})
    M = base_change(L, phi)
    u, v = _random_vec(rng, R, 3), _random_vec(rng, R, 3)
    assert tuple(phi(c) for c in L.bracket(u, v)) == M.bracket(tuple(phi(c) for c in u), tuple(phi(c) for c in v))


def test_is_morphism_identity_and_random_rejections():
    _, xi, b = kummer_ring(3, "sym")
    L = kummer_witt_homlie(3, 1, b, xi)
    ident = [[1 if i == k else 0 for k in range(3)] for i in range(3)]
    assert is_morphism(L, L, ident).ok
    rng = random.Random(0)
    rejected = 0
    for _ in range(100):
        f = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
        # skip matrices that happen to be diagonal: those can commute with the twist
        if all(f[i][k] == 0 for i in range(3) for k in range(3) if i != k):
            continue
        rejected += not is_morphism(L, L, f).ok
    assert rejected >= 95


@settings(max_examples=20, deadline=None)
@given(st.integers(3, 7), st.integers(0, 6))
def test_derived_series_nonincreasing(n, r):
    _, xi, b = kummer_ring(n, "sym")
    dims = derived_dimensions(kummer_witt_homlie(n, r % n, b, xi))
    assert all(a > b for a, b in zip(dims, dims[1:]))


def test_solvability_examples():
    _, xi, b = kummer_ring(4, "sym")
    assert derived_dimensions(kummer_witt_homlie(4, 2, b, xi)) == [4, 2, 0]
    assert is_solvable(kummer_witt_homlie(4, 2, b, xi))
    from twistlie.covers import jackson_subalgebra

    _, xi, b = kummer_ring(3, 1, field=True)
    assert not is_solvable(jackson_subalgebra(3, 1, b, xi))


def test_subalgebra_scan_contains_jackson_indices():
    _, xi, b = kummer_ring(5, "sym")
    L = kummer_witt_homlie(5, 1, b, xi)
    subs = subalgebra_scan(L)
    assert (0, 1, 4) in subs and (0,) in subs and tuple(range(5)) in subs
    assert (1, 2) not in subs  # <e1, e2> is a multiple of e3


@pytest.mark.parametrize("spec", FAMILY_SPECS, ids=lambda s: f"{s.family}-{s.n}-{s.r}")
def test_json_round_trip(spec):
    L = spec.build()
    assert from_json(to_json(L)) == L


def test_json_rejects_unknown_fields():
    L = CoverSpec("kummer-witt", 3, 1).build()
    data = to_json(L)
    data["colour"] = "blue"
    with pytest.raises(HomLieError):
        from_json(data)


def test_nonalternating_input_rejected():
    with pytest.raises(AlternationError):
        HomLieAlgebra.make(Rationals(), 2, {(0, 0): [1, 0]})
    with pytest.raises(AlternationError):
        HomLieAlgebra.make(Rationals(), 2, {(0, 1): [1, 0], (1, 0): [1, 0]})


def test_broken_jacobi_has_witness():
    Q = Rationals()
    L = HomLieAlgebra.make(Q, 3, {(0, 1): [0, 1, 0], (0, 2): [0, 0, 1], (1, 2): [1, 0, 0]})
    report = check_axioms(L)
    assert not report.jacobi and report.witness == (0, 1, 2)


def test_rank_zero_is_vacuous():
    assert check_axioms(HomLieAlgebra.make(Rationals(), 0, {})).passed


def test_latex_layout():
    L = CoverSpec("kummer-witt", 3, 1).build()
    tex = to_latex(L)
    assert tex.startswith("\\begin{align*}") and tex.count("\\langle") == 3
    assert "\\xi" in tex
