"""Hom-Lie algebras given by structure constants.

An algebra of rank n has basis ``eps_0..eps_{n-1}``, brackets
``<eps_i, eps_j> = sum_l c[i,j][l] eps_l`` (stored for i < j), a twist
matrix ``alpha`` with ``alpha(eps_i) = sum_k alpha[i][k] eps_k`` and a
scalar ``q``.  The twisted Jacobi identity checked here is

    cyclic sum of  <alpha(a), <b, c>> + q <a, <b, c>>  = 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .algebra import AlgebraElement, FiniteAlgebra, LinearEndomorphism
from .derivations import SigmaDerivation, make_derivation, q_factor
from .linalg import kernel, rref, span_basis
from .rings import (
    InexactDivision,
    Polynomial,
    Ring,
    RingMorphism,
    RingValue,
    field_of_fractions,
    ring_from_json,
)


class HomLieError(ValueError):
    pass


class AlternationError(HomLieError):
    """Input brackets that cannot come from an alternating product."""


Vector = tuple  # tuple of RingValue


def _zero_vec(ring: Ring, n: int) -> Vector:
    return tuple(ring(0) for _ in range(n))


def _unit_vec(ring: Ring, n: int, i: int) -> Vector:
    return tuple(ring(1 if k == i else 0) for k in range(n))


def vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, u: Vector) -> Vector:
    return tuple(c * a for a in u)


@dataclass(frozen=True)
class HomLieAlgebra:
    ring: Ring
    rank: int
    table: tuple  # ((i, j), coeffs) for i < j with a nonzero bracket
    twist: tuple  # rank x rank
    q: RingValue
    labels: tuple = ()

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"eps{i}" for i in range(self.rank)))
        object.__setattr__(self, "_brackets", dict(self.table))

    @classmethod
    def make(cls, ring: Ring, rank: int, brackets: dict, twist=None, q=1, labels=()) -> "HomLieAlgebra":
        """Build from ``{(i, j): coeffs}``; entries with i > j are antisymmetrized."""
        table = {}
        for (i, j), coeffs in brackets.items():
            vec = tuple(ring(c) for c in coeffs)
            if len(vec) != rank:
                raise HomLieError(f"bracket ({i},{j}) has {len(vec)} coefficients, expected {rank}")
            if i == j:
                if any(vec):
                    raise AlternationError(f"<e{i}, e{i}> must vanish")
                continue
            if i > j:
                i, j, vec = j, i, tuple(-c for c in vec)
            if (i, j) in table and table[(i, j)] != vec:
                raise AlternationError(f"conflicting entries for ({i},{j})")
            if any(vec):
                table[(i, j)] = vec
        if twist is None:
            twist = [[1 if i == k else 0 for k in range(rank)] for i in range(rank)]
        tw = tuple(tuple(ring(c) for c in row) for row in twist)
        return cls(ring, rank, tuple(sorted(table.items())), tw, ring(q), tuple(labels))

    # -- operations
    def basis(self, i: int) -> Vector:
        return _unit_vec(self.ring, self.rank, i)

    def bracket_basis(self, i: int, j: int) -> Vector:
        if i == j:
            return _zero_vec(self.ring, self.rank)
        if i < j:
            return self._brackets.get((i, j), _zero_vec(self.ring, self.rank))
        return tuple(-c for c in self._brackets.get((j, i), _zero_vec(self.ring, self.rank)))

    def bracket(self, u: Vector, v: Vector) -> Vector:
        out = list(_zero_vec(self.ring, self.rank))
        for (i, j), coeffs in self.table:
            c = u[i] * v[j] - u[j] * v[i]
            if c:
                for k, x in enumerate(coeffs):
                    if x:
                        out[k] = out[k] + c * x
        return tuple(out)

    def alpha(self, u: Vector) -> Vector:
        out = list(_zero_vec(self.ring, self.rank))
        for i, ui in enumerate(u):
            if ui:
                for k, s in enumerate(self.twist[i]):
                    if s:
                        out[k] = out[k] + ui * s
        return tuple(out)

    def is_abelian(self) -> bool:
        return not self.table

    def twist_is_identity(self) -> bool:
        return all(
            self.twist[i][k] == (1 if i == k else 0) for i in range(self.rank) for k in range(self.rank)
        )

    def twist_is_diagonal(self) -> bool:
        return all(not self.twist[i][k] for i in range(self.rank) for k in range(self.rank) if i != k)

    def constants(self) -> dict:
        """All brackets ``{(i, j): coeffs}`` with i < j, zeros included."""
        return {(i, j): self.bracket_basis(i, j) for i in range(self.rank) for j in range(i + 1, self.rank)}

    def map_coefficients(self, phi: RingMorphism) -> "HomLieAlgebra":
        R = phi.target
        return HomLieAlgebra.make(
            R,
            self.rank,
            {k: [phi(c) for c in v] for k, v in self.table},
            [[phi(c) for c in row] for row in self.twist],
            phi(self.q),
            self.labels,
        )


# ---------------------------------------------------------------------------
# axioms


@dataclass
class AxiomReport:
    alternating: bool
    jacobi: bool
    witness: tuple | None
    classical_agrees: bool | None
    q_is_unit: bool
    q: str

    @property
    def passed(self) -> bool:
        return self.alternating and self.jacobi


def jacobi_sum(L: HomLieAlgebra, a: Vector, b: Vector, c: Vector) -> Vector:
    total = _zero_vec(L.ring, L.rank)
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        inner = L.bracket(y, z)
        total = vec_add(total, L.bracket(L.alpha(x), inner))
        total = vec_add(total, vec_scale(L.q, L.bracket(x, inner)))
    return total


def classical_jacobi_sum(L: HomLieAlgebra, a: Vector, b: Vector, c: Vector) -> Vector:
    """``cyclic sum <alpha(a) + a, <b, c>>`` (the form used when q = 1)."""
    total = _zero_vec(L.ring, L.rank)
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        total = vec_add(total, L.bracket(vec_add(L.alpha(x), x), L.bracket(y, z)))
    return total


def check_axioms(L: HomLieAlgebra) -> AxiomReport:
    """Alternation on basis pairs and twisted Jacobi on all basis triples.

    The cyclic sum is alternating in its arguments, so triples i < j < k
    suffice.
    """
    n = L.rank
    e = [L.basis(i) for i in range(n)]
    alternating = True
    for i in range(n):
        if any(L.bracket(e[i], e[i])):
            alternating = False
        for j in range(i + 1, n):
            if L.bracket(e[i], e[j]) != tuple(-c for c in L.bracket(e[j], e[i])):
                alternating = False
    witness = None
    classical = None
    q_one = L.q == 1
    if q_one:
        classical = True
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                s = jacobi_sum(L, e[i], e[j], e[k])
                if q_one and (classical_jacobi_sum(L, e[i], e[j], e[k]) != s):
                    classical = False
                if any(s) and witness is None:
                    witness = (i, j, k)
    return AxiomReport(
        alternating=alternating,
        jacobi=witness is None,
        witness=witness,
        classical_agrees=classical,
        q_is_unit=L.q.is_unit(),
        q=str(L.q),
    )


# ---------------------------------------------------------------------------
# constructions


def _terms(x):
    """(key, coeff) pairs of an element, leading key first, keys comparable."""
    if isinstance(x, AlgebraElement):
        return [(i, c) for i, c in reversed(list(enumerate(x.coords))) if c]
    R = x.ring
    return [(e, RingValue(R.base, c)) for e, c in x.rep]


def decompose(x, basis: list):
    """Coordinates of ``x`` in the span of ``basis`` by leading-term elimination.

    The basis elements must have distinct leading terms.  Raises
    ``HomLieError`` when ``x`` is not in the span.
    """
    if basis and isinstance(basis[0], AlgebraElement) and all(
        b.coords == b.algebra.basis(i).coords for i, b in enumerate(basis)
    ) and len(basis) == basis[0].algebra.rank:
        return list(x.coords)
    leads = {}
    for idx, b in enumerate(basis):
        t = _terms(b)
        if not t:
            raise HomLieError("zero vector in basis")
        if t[0][0] in leads:
            raise HomLieError("basis elements must have distinct leading terms")
        leads[t[0][0]] = (idx, t[0][1])
    coeff_ring = _terms(basis[0])[0][1].ring
    coords = [coeff_ring(0)] * len(basis)
    r = x
    while True:
        t = _terms(r)
        if not t:
            return coords
        key, c = t[0]
        if key not in leads:
            raise HomLieError(f"{x} is not in the span")
        idx, lc = leads[key]
        try:
            f = c / lc
        except InexactDivision as exc:
            raise HomLieError(f"{x} is not in the span over the coefficients") from exc
        coords[idx] = coords[idx] + f
        r = r - basis[idx] * (f if isinstance(r, AlgebraElement) else r.ring(f))


def _scalar_of(q, A):
    if isinstance(q, AlgebraElement):
        s = q.scalar()
        if s is None:
            raise HomLieError(f"q = {q} is not a scalar")
        return s
    if len(q.rep) == 1 and not any(q.rep[0][0]):
        return RingValue(A.base, q.rep[0][1])
    if not q.rep:
        return RingValue(A.base, A.base.zero())
    raise HomLieError(f"q = {q} is not a scalar")


def from_derivation(d: SigmaDerivation, elements: list | None = None, labels=()) -> HomLieAlgebra:
    """Hom-Lie algebra on ``span(b_i * d)`` with ``<a d, b d> = (sigma(a) d(b) - sigma(b) d(a)) d``."""
    A = d.algebra
    if elements is None:
        if not isinstance(A, FiniteAlgebra):
            raise HomLieError("spanning elements are required for polynomial algebras")
        elements = A.gens()
    q = q_factor(d)
    if q is None:
        raise HomLieError("no consistent q: d o sigma is not a multiple of sigma o d")
    qs = _scalar_of(q, A)
    ring = qs.ring
    n = len(elements)
    sig = d.sigma
    brackets = {}
    for i in range(n):
        for j in range(i + 1, n):
            bi, bj = elements[i], elements[j]
            val = sig(bi) * d(bj) - sig(bj) * d(bi)
            brackets[(i, j)] = decompose(val, elements)
    twist = [decompose(sig(b), elements) for b in elements]
    return HomLieAlgebra.make(ring, n, brackets, twist, qs, labels)


def hl_functor(A: FiniteAlgebra, sigma: LinearEndomorphism, labels=()) -> HomLieAlgebra:
    """``<a, b> = sigma(a) b - sigma(b) a`` on the algebra itself."""
    ok, bad = sigma.check()
    if not ok:
        raise HomLieError(f"sigma is not an algebra endomorphism (pair {bad})")
    e = A.gens()
    brackets = {}
    for i in range(A.rank):
        for j in range(i + 1, A.rank):
            brackets[(i, j)] = (sigma(e[i]) * e[j] - sigma(e[j]) * e[i]).coords
    return HomLieAlgebra.make(A.ring, A.rank, brackets, sigma.matrix, 1, labels)


def from_rep(A: FiniteAlgebra, sigma: LinearEndomorphism, w, labels=()) -> HomLieAlgebra:
    """Bracket of ``A * D_w`` with ``D_w = w (id - sigma)``."""
    return from_derivation(make_derivation(sigma, w), labels=labels)


# ---------------------------------------------------------------------------
# morphisms


@dataclass
class MorphismReport:
    bracket_ok: bool
    twist_ok: bool
    q_ok: bool
    witness: str | None = None

    @property
    def ok(self) -> bool:
        return self.bracket_ok and self.twist_ok and self.q_ok


def _apply_matrix(f, u: Vector, ring: Ring, m: int) -> Vector:
    out = list(_zero_vec(ring, m))
    for i, ui in enumerate(u):
        if ui:
            for k, x in enumerate(f[i]):
                if x:
                    out[k] = out[k] + ui * x
    return tuple(out)


def is_morphism(src: HomLieAlgebra, dst: HomLieAlgebra, f) -> MorphismReport:
    """Check ``f(eps_i) = sum_k f[i][k] eps'_k`` against brackets, twists and q."""
    R = dst.ring
    f = [[R(x) for x in row] for row in f]
    n, m = src.rank, dst.rank
    fv = lambda u: _apply_matrix(f, u, R, m)  # noqa: E731
    witness = None
    bracket_ok = True
    for i in range(n):
        for j in range(i + 1, n):
            lhs = fv(src.bracket_basis(i, j))
            rhs = dst.bracket(fv(src.basis(i)), fv(src.basis(j)))
            if lhs != rhs:
                bracket_ok = False
                witness = witness or f"bracket ({i},{j})"
    twist_ok = True
    for i in range(n):
        if fv(src.alpha(src.basis(i))) != dst.alpha(fv(src.basis(i))):
            twist_ok = False
            witness = witness or f"twist on basis {i}"
    q_ok = R(src.q) == dst.q if src.ring == R else src.q == dst.q
    if not q_ok:
        witness = witness or "q"
    return MorphismReport(bracket_ok, twist_ok, q_ok, witness)


# ---------------------------------------------------------------------------
# structure analysis


def _over_field(L: HomLieAlgebra) -> HomLieAlgebra:
    if L.ring.is_field:
        return L
    if not L.ring.is_domain:
        raise HomLieError(f"{L.ring!r} is not a domain")
    _, phi = field_of_fractions(L.ring)
    return L.map_coefficients(phi)


def derived_series(L: HomLieAlgebra, over_fraction_field: bool = True) -> list[list[Vector]]:
    """Bases of L, [L, L], [[L, L], [L, L]], ... until it stabilizes."""
    if not L.ring.is_field and not over_fraction_field:
        raise HomLieError("base ring is not a field; pass over_fraction_field=True")
    K = _over_field(L)
    F = K.ring
    current = [K.basis(i) for i in range(K.rank)]
    series = [current]
    while current:
        prods = [K.bracket(u, v) for a, u in enumerate(current) for v in current[a + 1:]]
        nxt = span_basis([p for p in prods if any(p)], F)
        if len(nxt) == len(current):
            break
        series.append(nxt)
        current = nxt
    return series


def derived_dimensions(L: HomLieAlgebra) -> list[int]:
    return [len(b) for b in derived_series(L)]


def is_solvable(L: HomLieAlgebra) -> bool:
    return derived_dimensions(L)[-1] == 0


def zero_pairs(L: HomLieAlgebra) -> list[tuple[int, int]]:
    return [
        (i, j) for i in range(L.rank) for j in range(i + 1, L.rank) if not any(L.bracket_basis(i, j))
    ]


def zero_pair_exists(L: HomLieAlgebra) -> tuple[int, int] | None:
    pairs = zero_pairs(L)
    return pairs[0] if pairs else None


def subalgebra_scan(L: HomLieAlgebra, max_rank: int = 16) -> list[tuple[int, ...]]:
    """All nonempty basis subsets whose span is closed under the bracket."""
    n = L.rank
    if n > max_rank:
        raise HomLieError(f"rank {n} exceeds the scan guard {max_rank}")
    support = {}
    for (i, j), coeffs in L.table:
        mask = 0
        for k, c in enumerate(coeffs):
            if c:
                mask |= 1 << k
        support[(i, j)] = mask
    closed = []
    for subset in range(1, 1 << n):
        ok = True
        for (i, j), mask in support.items():
            if (subset >> i) & 1 and (subset >> j) & 1 and mask & ~subset:
                ok = False
                break
        if ok:
            closed.append(tuple(k for k in range(n) if (subset >> k) & 1))
    return closed


def base_change(L: HomLieAlgebra, phi: RingMorphism) -> HomLieAlgebra:
    if phi.source != L.ring:
        raise HomLieError("morphism source differs from the algebra's ring")
    out = L.map_coefficients(phi)
    report = check_axioms(out)
    if not report.passed:
        raise HomLieError(f"axioms fail after base change at {report.witness}")
    return out


# ---------------------------------------------------------------------------
# equivariant families


@dataclass(frozen=True)
class FiniteGroup:
    elements: tuple
    table: tuple  # table[a][b] = index of elements[a]*elements[b]

    @classmethod
    def cyclic(cls, m: int) -> "FiniteGroup":
        return cls(tuple(range(m)), tuple(tuple((a + b) % m for b in range(m)) for a in range(m)))

    def mul(self, a, b):
        ia, ib = self.elements.index(a), self.elements.index(b)
        return self.elements[self.table[ia][ib]]

    @property
    def identity(self):
        for e in self.elements:
            if all(self.mul(e, g) == g for g in self.elements):
                return e
        raise HomLieError("group has no identity")

    def inverse(self, a):
        e = self.identity
        return next(g for g in self.elements if self.mul(a, g) == e)


@dataclass(frozen=True)
class EquivariantHomLie:
    group: FiniteGroup
    members: tuple  # tuple of (element, HomLieAlgebra)

    def __post_init__(self):
        mem = dict(self.members)
        if set(mem) != set(self.group.elements):
            raise HomLieError("one algebra per group element is required")
        ranks = {L.rank for L in mem.values()}
        rings = {L.ring for L in mem.values()}
        if len(ranks) > 1 or len(rings) > 1:
            raise HomLieError("members must share rank and ring")
        ident = mem[self.group.identity]
        if not (ident.twist_is_identity() and ident.q == 1 and check_axioms(ident).passed):
            raise HomLieError("the identity element must carry a Lie algebra")

    def __getitem__(self, g) -> HomLieAlgebra:
        return dict(self.members)[g]

    @property
    def rank(self) -> int:
        return self.members[0][1].rank


def _coords_in(basis: list[Vector], v: Vector, F: Ring) -> list:
    """Coordinates of v in the (independent) rows ``basis``."""
    k = len(basis)
    rows = [[basis[a][c] for a in range(k)] + [v[c]] for c in range(len(v))]
    red, pivots = rref(rows, F)
    if k in pivots:
        raise HomLieError("vector is not in the span")
    coords = [F(0)] * k
    for row, p in zip(red, pivots):
        coords[p] = row[k]
    return coords


def invariants(family: EquivariantHomLie, subgroup: list) -> EquivariantHomLie:
    """Restriction of every member to the subspace fixed by the twists of ``subgroup``."""
    first = family[family.group.identity]
    L0 = _over_field(first)
    F = L0.ring
    n = L0.rank
    rows = []
    for h in subgroup:
        Lh = _over_field(family[h])
        # v alpha = v  <=>  (alpha - I)^T v = 0
        for col in range(n):
            rows.append([Lh.twist[i][col] - (1 if i == col else 0) for i in range(n)])
    basis = kernel(rows, F, n) if rows else [L0.basis(i) for i in range(n)]
    basis = span_basis(basis, F) if basis else []
    members = []
    for g, Lg in family.members:
        K = _over_field(Lg)
        brackets = {}
        for a in range(len(basis)):
            for b in range(a + 1, len(basis)):
                brackets[(a, b)] = _coords_in(basis, K.bracket(basis[a], basis[b]), F)
        twist = [_coords_in(basis, K.alpha(v), F) for v in basis]
        members.append((g, HomLieAlgebra.make(F, len(basis), brackets, twist, K.q)))
    return EquivariantHomLie(family.group, tuple(members))


def induced(family: EquivariantHomLie, G: FiniteGroup, embedding: dict) -> tuple[EquivariantHomLie, dict]:
    """Functions psi: G -> L with psi(h g) = h . psi(g), bracket pointwise.

    ``embedding`` maps the elements of the family's group into ``G``.  The
    twist of g' is ``(g'.psi)(g) = psi(g g')``; the pointwise bracket uses
    the identity member.  Returns the family and the axiom reports.
    """
    H = family.group
    Hin = {embedding[h]: h for h in H.elements}
    lie = family[H.identity]
    R, n = lie.ring, lie.rank
    reps: list = []
    for g in G.elements:
        if not any(G.mul(h, r) == g for h in Hin for r in reps):
            reps.append(g)
    m = len(reps) * n

    def locate(g):
        for h, hh in Hin.items():
            for ri, r in enumerate(reps):
                if G.mul(h, r) == g:
                    return hh, ri
        raise HomLieError("coset decomposition failed")

    idx = lambda ri, i: ri * n + i  # noqa: E731
    brackets = {}
    for ri in range(len(reps)):
        for i in range(n):
            for j in range(i + 1, n):
                vec = [R(0)] * m
                for k, c in enumerate(lie.bracket_basis(i, j)):
                    vec[idx(ri, k)] = c
                brackets[(idx(ri, i), idx(ri, j))] = vec
    members, reports = [], {}
    for gp in G.elements:
        twist = []
        for ri in range(len(reps)):
            for i in range(n):
                row = [R(0)] * m
                # (gp . psi)(r) = psi(r gp) = h . psi(r'')
                for rj, r in enumerate(reps):
                    hh, rk = locate(G.mul(r, gp))
                    if rk == ri:
                        val = family[hh].alpha(lie.basis(i))
                        for k, c in enumerate(val):
                            row[idx(rj, k)] = row[idx(rj, k)] + c
                twist.append(row)
        Lg = HomLieAlgebra.make(R, m, brackets, twist, 1)
        reports[gp] = check_axioms(Lg)
        members.append((gp, Lg))
    return EquivariantHomLie(G, tuple(members)), reports


# ---------------------------------------------------------------------------
# serialization


def to_json(L: HomLieAlgebra) -> dict:
    return {
        "ring": L.ring.to_json(),
        "rank": L.rank,
        "labels": list(L.labels),
        "twist": [[str(c) for c in row] for row in L.twist],
        "q": str(L.q),
        "brackets": [
            {"i": i, "j": j, "coeffs": [str(c) for c in L.bracket_basis(i, j)]}
            for i in range(L.rank)
            for j in range(i + 1, L.rank)
        ],
    }


_JSON_KEYS = {"ring", "rank", "labels", "twist", "q", "brackets"}


def from_json(data: dict) -> HomLieAlgebra:
    extra = set(data) - _JSON_KEYS
    if extra:
        raise HomLieError(f"unknown fields {sorted(extra)}")
    ring = ring_from_json(data["ring"])
    n = int(data["rank"])
    brackets = {}
    for entry in data.get("brackets", []):
        if set(entry) - {"i", "j", "coeffs"}:
            raise HomLieError("bracket entries take i, j and coeffs only")
        i, j = int(entry["i"]), int(entry["j"])
        if not (0 <= i < n and 0 <= j < n):
            raise HomLieError(f"bracket index out of range: ({i},{j})")
        brackets[(i, j)] = [ring(str(c)) for c in entry["coeffs"]]
    twist = data.get("twist")
    if twist is not None:
        if len(twist) != n or any(len(r) != n for r in twist):
            raise HomLieError("twist must be rank x rank")
        twist = [[ring(str(c)) for c in row] for row in twist]
    return HomLieAlgebra.make(ring, n, brackets, twist, ring(str(data.get("q", "1"))), data.get("labels", ()))


_GREEK = {"xi": r"\xi", "nu": r"\nu"}


def latex_coeff(text: str) -> str:
    s = text
    for k, v in _GREEK.items():
        s = re.sub(rf"(?<![A-Za-z]){k}(?![A-Za-z])", lambda _m, v=v: v + " ", s)
    s = s.replace("*", "")
    s = re.sub(r"\^\((-?\d+)\)", r"^{\1}", s)
    s = re.sub(r"\^(\d+)", r"^{\1}", s)
    s = s.replace(" ^", "^").replace(" )", ")").replace(" }", "}")
    return re.sub(r"  +", " ", s).strip()


def to_latex(L: HomLieAlgebra, symbol: str = r"\varepsilon") -> str:
    """Bracket table in an align environment, one line per pair i < j."""
    lines = []
    for i in range(L.rank):
        for j in range(i + 1, L.rank):
            vec = L.bracket_basis(i, j)
            terms = []
            for k, c in enumerate(vec):
                if not c:
                    continue
                cs = latex_coeff(str(c))
                base = f"{symbol}_{{{k}}}"
                if cs == "1":
                    terms.append(base)
                elif cs == "-1":
                    terms.append("-" + base)
                else:
                    terms.append(f"({cs}){base}")
            rhs = " + ".join(terms).replace("+ -", "- ") if terms else "0"
            lines.append(rf"\langle {symbol}_{{{i}}},{symbol}_{{{j}}}\rangle &= {rhs}")
    return "\\begin{align*}\n" + " \\\\\n".join(lines) + "\n\\end{align*}"
