"""Explicit families: Kummer and Artin-Schreier algebras and their hom-Lie algebras."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .algebra import FiniteAlgebra, LinearEndomorphism
from .derivations import SigmaDerivation, polynomial_endomorphism
from .homlie import (
    EquivariantHomLie,
    FiniteGroup,
    HomLieAlgebra,
    HomLieError,
    base_change,
    from_derivation,
    hl_functor,
)
from .rings import (
    Cyclotomic,
    FractionField,
    PrimeField,
    Rationals,
    Ring,
    RingMorphism,
    RingValue,
    polynomial_ring,
)


class CoverError(ValueError):
    pass


# ---------------------------------------------------------------------------
# rings for the families


def kummer_ring(n: int, b="sym", field: bool = False) -> tuple[Ring, RingValue, RingValue]:
    """``Z[xi]/Phi_n`` (or ``Q(xi)`` when ``field``), with ``b`` symbolic or an integer.

    Returns ``(ring, xi, b)``.
    """
    base = Cyclotomic(n, Rationals()) if field else Cyclotomic(n)
    if b == "sym":
        R = polynomial_ring(["b"], base)
        return R, R.gen("xi"), R.gen("b")
    return base, base.gen("xi"), base(int(b))


def artin_schreier_ring(p: int, nu="sym", b="sym") -> tuple[Ring, RingValue, RingValue]:
    """``GF(p)[nu, b]/(nu^p - nu)`` with either parameter optionally specialized."""
    F = PrimeField(p)
    vars_, rel = [], {}
    if nu == "sym":
        vars_.append("nu")
        rel["nu"] = f"nu^{p} - nu"
    if b == "sym":
        vars_.append("b")
    if not vars_:
        return F, F(int(nu)), F(int(b))
    R = polynomial_ring(vars_, F, relations=rel)
    nu_v = R.gen("nu") if nu == "sym" else R(int(nu))
    b_v = R.gen("b") if b == "sym" else R(int(b))
    return R, nu_v, b_v


# ---------------------------------------------------------------------------
# algebras and twists


def kummer_algebra(n: int, b: RingValue) -> FiniteAlgebra:
    """``B[t]/(t^n - b)`` with basis ``e_i = t^i``."""
    R = b.ring
    mult = []
    for i in range(n):
        row = []
        for j in range(n):
            v = [R(0)] * n
            if i + j < n:
                v[i + j] = R(1)
            else:
                v[i + j - n] = b
            row.append(tuple(v))
        mult.append(tuple(row))
    return FiniteAlgebra(R, tuple(mult), tuple(f"e{i}" for i in range(n)))


def kummer_sigma(A: FiniteAlgebra, r: int, xi: RingValue) -> LinearEndomorphism:
    """``sigma(t) = xi^r t``, diagonal on the basis."""
    n = A.rank
    if not 0 <= r < n:
        raise CoverError("need 0 <= r < n")
    if xi ** n != 1 or any(xi ** d == 1 for d in range(1, n) if n % d == 0):
        raise CoverError(f"xi does not have exact order {n}")
    return LinearEndomorphism.diagonal(A, [xi ** (r * i) for i in range(n)])


def artin_schreier_algebra(p: int, b: RingValue) -> FiniteAlgebra:
    """``B[y]/(y^p - y - b)`` with basis ``e_i = y^i``."""
    R = b.ring
    if R.characteristic != p:
        raise CoverError(f"characteristic of {R!r} is not {p}")
    mult = []
    for i in range(p):
        row = []
        for j in range(p):
            v = [R(0)] * p
            s = i + j
            if s < p:
                v[s] = R(1)
            else:
                # y^s = y^(s-p) (y + b)
                v[s - p + 1] = v[s - p + 1] + 1
                v[s - p] = v[s - p] + b
            row.append(tuple(v))
        mult.append(tuple(row))
    return FiniteAlgebra(R, tuple(mult), tuple(f"e{i}" for i in range(p)))


def as_sigma(A: FiniteAlgebra, nu: RingValue) -> LinearEndomorphism:
    """``sigma(y) = y + nu``: ``sigma(e_i) = sum_k C(i,k) nu^(i-k) e_k``."""
    p = A.rank
    R = A.ring
    matrix = tuple(
        tuple(R(comb(i, k)) * nu ** (i - k) if k <= i else R(0) for k in range(p)) for i in range(p)
    )
    sigma = LinearEndomorphism(A, matrix)
    ok, bad = sigma.check()
    if not ok:
        raise CoverError(f"y -> y + nu is not an algebra map (pair {bad})")
    return sigma


# ---------------------------------------------------------------------------
# hom-Lie algebras


def witt_homlie(A: FiniteAlgebra, sigma: LinearEndomorphism) -> HomLieAlgebra:
    """Structure constants ``sum_k (s_ik a^l_kj - s_jk a^l_ki)``."""
    ok, bad = sigma.check()
    if not ok:
        raise CoverError(f"sigma is not an algebra endomorphism (pair {bad})")
    n, R = A.rank, A.ring
    s, a = sigma.matrix, A.mult
    brackets = {}
    for i in range(n):
        for j in range(i + 1, n):
            vec = []
            for ell in range(n):
                c = R(0)
                for k in range(n):
                    if s[i][k]:
                        c = c + s[i][k] * a[k][j][ell]
                    if s[j][k]:
                        c = c - s[j][k] * a[k][i][ell]
                vec.append(c)
            brackets[(i, j)] = vec
    return HomLieAlgebra.make(R, n, brackets, s, 1)


def arithmetic_witt(A: FiniteAlgebra, qs) -> HomLieAlgebra:
    """Witt algebra of a diagonal twist ``sigma(e_i) = q_i e_i``: ``(q_i - q_j) a^k_ij``."""
    n, R = A.rank, A.ring
    qs = [R(q) for q in qs]
    brackets = {
        (i, j): [(qs[i] - qs[j]) * A.mult[i][j][k] for k in range(n)]
        for i in range(n)
        for j in range(i + 1, n)
    }
    twist = [[qs[i] if i == k else 0 for k in range(n)] for i in range(n)]
    return HomLieAlgebra.make(R, n, brackets, twist, 1)


def kummer_witt_closed_form(n: int, r: int, b: RingValue, xi: RingValue) -> HomLieAlgebra:
    """``<eps_i, eps_j> = b^wrap xi^(ri) (1 - xi^(r(j-i))) eps_(i+j mod n)``, b when i+j >= n."""
    R = b.ring
    x = xi ** r
    brackets = {}
    for i in range(n):
        for j in range(i + 1, n):
            c = x ** i * (1 - x ** (j - i))
            if i + j >= n:
                c = c * b
            vec = [R(0)] * n
            vec[(i + j) % n] = c
            brackets[(i, j)] = vec
    twist = [[x ** i if i == k else 0 for k in range(n)] for i in range(n)]
    return HomLieAlgebra.make(R, n, brackets, twist, 1)


def kummer_witt_homlie(n: int, r: int, b: RingValue, xi: RingValue, check: bool = True) -> HomLieAlgebra:
    """Closed-form Kummer-Witt algebra, cross-checked against the general double sum."""
    L = kummer_witt_closed_form(n, r, b, xi)
    if check:
        A = kummer_algebra(n, b)
        oracle = witt_homlie(A, kummer_sigma(A, r, xi))
        if oracle != L:
            raise CoverError(f"closed form and general machinery disagree for n={n}, r={r}")
    return L


def kummer_witt_family(n: int, b: RingValue, xi: RingValue) -> EquivariantHomLie:
    """One Kummer-Witt algebra per element r of the cyclic group of order n."""
    members = tuple((r, kummer_witt_homlie(n, r, b, xi)) for r in range(n))
    return EquivariantHomLie(FiniteGroup.cyclic(n), members)


def artin_schreier_homlie(p: int, nu: RingValue, b: RingValue) -> HomLieAlgebra:
    A = artin_schreier_algebra(p, b)
    return witt_homlie(A, as_sigma(A, nu))


def jackson_subalgebra(n: int, r: int, b: RingValue, xi: RingValue) -> HomLieAlgebra:
    """Rank-3 restriction of the Kummer-Witt algebra to eps_0, eps_1, eps_(n-1)."""
    if n < 3:
        raise CoverError("the Jackson subalgebra needs n >= 3")
    L = kummer_witt_homlie(n, r, b, xi)
    idx = [0, 1, n - 1]
    brackets = {}
    for a in range(3):
        for c in range(a + 1, 3):
            vec = L.bracket_basis(idx[a], idx[c])
            if any(v for k, v in enumerate(vec) if k not in idx):
                raise CoverError("Jackson subalgebra is not closed")
            brackets[(a, c)] = [vec[k] for k in idx]
    twist = [[L.twist[i][k] for k in idx] for i in idx]
    labels = ("eps0", "eps1", f"eps{n - 1}")
    return HomLieAlgebra.make(L.ring, 3, brackets, twist, L.q, labels)


def jackson_sl2(q_specialized: bool = False) -> HomLieAlgebra:
    """``span(e, h, f)`` with ``e = D, h = -2tD, f = -t^2 D`` for the Jackson derivative D.

    D = (id - sigma)/(t - sigma(t)) with sigma(t) = s0 + s1 t over Q[s0, s1];
    with ``q_specialized`` the twist is sigma(t) = q t over Q(q).
    """
    if q_specialized:
        coeffs = FractionField(polynomial_ring(["q"], Rationals()))
        A = polynomial_ring(["t"], coeffs)
        sigma = polynomial_endomorphism(A, {"t": "q*t"})
    else:
        coeffs = polynomial_ring(["s0", "s1"], Rationals())
        A = polynomial_ring(["t"], coeffs)
        sigma = polynomial_endomorphism(A, {"t": "s0 + s1*t"})
    D = SigmaDerivation(sigma, table={"t": 1})
    elements = [A(1), A("-2*t"), A("-t^2")]
    return from_derivation(D, elements, labels=("e", "h", "f"))


def fiber_reduce(L: HomLieAlgebra, phi: RingMorphism) -> HomLieAlgebra:
    return base_change(L, phi)


def specialization(source: Ring, target: Ring, **images) -> RingMorphism:
    """Ring map sending the named generators to the given values."""
    return RingMorphism.from_images(source, target, images)


# ---------------------------------------------------------------------------
# CLI-facing descriptors


@dataclass(frozen=True)
class CoverSpec:
    family: str
    n: int = 0
    r: int = 1
    b: str = "sym"
    nu: str = "sym"

    def build(self) -> HomLieAlgebra:
        if self.family == "kummer-witt":
            if self.n < 1:
                raise CoverError("n must be positive")
            if not 0 <= self.r < self.n:
                raise CoverError("need 0 <= r < n")
            _, xi, b = kummer_ring(self.n, self.b)
            return kummer_witt_homlie(self.n, self.r, b, xi)
        if self.family == "jackson":
            _, xi, b = kummer_ring(self.n, self.b)
            return jackson_subalgebra(self.n, self.r, b, xi)
        if self.family == "artin-schreier":
            _, nu, b = artin_schreier_ring(self.n, self.nu, self.b)
            return artin_schreier_homlie(self.n, nu, b)
        if self.family == "jackson-sl2":
            return jackson_sl2()
        raise CoverError(f"unknown family {self.family!r}")


def hl_equals_witt(A: FiniteAlgebra, sigma: LinearEndomorphism) -> bool:
    """The twisted-commutator construction and the double sum agree."""
    try:
        return hl_functor(A, sigma) == witt_homlie(A, sigma)
    except HomLieError:
        return False
