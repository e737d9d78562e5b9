"""Twisted derivations and difference operators.

A sigma-derivation satisfies ``d(xy) = d(x) y + sigma(x) d(y)``.  Two kinds
of algebras are supported: polynomial rings (elements are ``RingValue``s and
sigma is a ``RingMorphism`` of the ring into itself) and finite algebras
(elements are ``AlgebraElement``s and sigma a ``LinearEndomorphism``).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .algebra import AlgebraElement, FiniteAlgebra, LinearEndomorphism
from .linalg import rref
from .rings import (
    InexactDivision,
    Polynomial,
    RingError,
    RingMorphism,
    RingValue,
    gcd_univariate,
)


class DerivationError(ValueError):
    pass


def polynomial_endomorphism(R: Polynomial, images: dict) -> RingMorphism:
    """Endomorphism of ``R`` moving the listed variables and fixing everything else."""
    full = {}
    for layer in R.tower():
        for name in layer.gens():
            full[name] = R.gen(name)
    for name, v in images.items():
        if name not in full:
            raise RingError(f"unknown generator {name!r}")
        full[name] = v if isinstance(v, RingValue) else R(v)
    return RingMorphism.from_images(R, R, full)


def algebra_of(sigma) -> Polynomial | FiniteAlgebra:
    if isinstance(sigma, LinearEndomorphism):
        return sigma.algebra
    if isinstance(sigma, RingMorphism):
        if sigma.source != sigma.target or not isinstance(sigma.source, Polynomial):
            raise DerivationError("sigma must be an endomorphism of a polynomial ring")
        return sigma.source
    raise DerivationError(f"unsupported twist {type(sigma).__name__}")


def algebra_generators(A) -> list:
    """Algebra generators over the coefficient ring."""
    if isinstance(A, FiniteAlgebra):
        return A.gens()
    out = []
    for v in A.vars:
        g = A.gen(v)
        out.append(g)
        if v in A.laurent:
            out.append(g.inverse())
    return out


def is_identity(sigma) -> bool:
    A = algebra_of(sigma)
    return all(sigma(g) == g for g in algebra_generators(A))


def _zero(A):
    return A.zero() if isinstance(A, FiniteAlgebra) else A(0)


def _one(A):
    return A.one() if isinstance(A, FiniteAlgebra) else A(1)


class SigmaDerivation:
    """A sigma-derivation, either ``coefficient*(id - sigma)`` or a generator table.

    For polynomial rings the table maps variable names (or monomials) to
    values and is extended by the twisted Leibniz rule and linearity over
    the coefficient ring.  For finite algebras the table lists the values on
    the basis and is extended linearly.
    """

    def __init__(self, sigma, coefficient=None, table=None, validate=True):
        self.sigma = sigma
        self.algebra = algebra_of(sigma)
        if (coefficient is None) == (table is None):
            raise DerivationError("give exactly one of coefficient or table")
        self.coefficient = None
        self.table = None
        self._cache: dict = {}
        A = self.algebra
        if coefficient is not None:
            if isinstance(A, FiniteAlgebra):
                if not isinstance(coefficient, AlgebraElement):
                    coefficient = A.one() * A.ring(coefficient)
            else:
                coefficient = A(coefficient)
            self.coefficient = coefficient
        else:
            self.table = self._normalize_table(table)
        if validate:
            report = check_leibniz(self, trials=0)
            if not report.passed:
                raise DerivationError(f"twisted Leibniz rule fails on {report.witness}")

    def _normalize_table(self, table):
        A = self.algebra
        if isinstance(A, FiniteAlgebra):
            vals = [table[i] if i in table else A.zero() for i in range(A.rank)]
            return {i: (v if isinstance(v, AlgebraElement) else A.element(v)) for i, v in enumerate(vals)}
        out = {}
        for key, val in table.items():
            if isinstance(key, str):
                mono = A(key)
            elif isinstance(key, RingValue):
                mono = key
            else:
                mono = RingValue(A, ((tuple(key), A.base.one()),))
            if len(mono.rep) != 1 or mono.rep[0][1] != A.base.one():
                raise DerivationError(f"table key {mono} is not a monomial")
            out[mono.rep[0][0]] = A(val) if not isinstance(val, RingValue) else val
        for v in A.vars:
            e = tuple(1 if w == v else 0 for w in A.vars)
            out.setdefault(e, A(0))
        return out

    # -- evaluation
    def __call__(self, x):
        A = self.algebra
        if self.coefficient is not None:
            return self.coefficient * (x - self.sigma(x))
        if isinstance(A, FiniteAlgebra):
            out = A.zero()
            for i, c in enumerate(x.coords):
                if c:
                    out = out + self.table[i] * c
            return out
        total = A(0)
        for e, c in x.rep:
            total = total + self._monomial(e) * RingValue(A, A.from_base(c))
        return total

    def _monomial(self, e: tuple):
        if e in self._cache:
            return self._cache[e]
        A = self.algebra
        if e in self.table:
            val = self.table[e]
        elif not any(e):
            val = A(0)
        else:
            i = next(k for k, x in enumerate(e) if x)
            step = 1 if e[i] > 0 else -1
            unit = tuple(step if k == i else 0 for k in range(len(e)))
            rest = tuple(x - u for x, u in zip(e, unit))
            u = RingValue(A, ((unit, A.base.one()),))
            r = RingValue(A, ((rest, A.base.one()),))
            if step > 0:
                du = self._monomial(unit)
            else:
                # 0 = d(v v^-1) = d(v) v^-1 + sigma(v) d(v^-1)
                v = u.inverse()
                du = -self._monomial(v.rep[0][0]) * u / self.sigma(v)
            val = du * r + self.sigma(u) * self._monomial(rest)
        self._cache[e] = val
        return val

    def power(self, n: int, x):
        for _ in range(n):
            x = self(x)
        return x

    def __repr__(self):
        if self.coefficient is not None:
            return f"SigmaDerivation(({self.coefficient})*(id - sigma))"
        return "SigmaDerivation(table)"


def make_derivation(sigma, a) -> SigmaDerivation:
    """The derivation ``a*(id - sigma)``."""
    return SigmaDerivation(sigma, coefficient=a)


@dataclass
class LeibnizReport:
    passed: bool
    witness: tuple | None
    seed: int
    pairs_checked: int


def _random_element(A, rng: random.Random):
    if isinstance(A, FiniteAlgebra):
        return A.element([A.ring.random(rng, 2) for _ in range(A.rank)])
    return A.random(rng, 3)


def check_leibniz(d: SigmaDerivation, trials: int = 20, seed: int = 0) -> LeibnizReport:
    """Check the twisted Leibniz rule on generator pairs, then random pairs."""
    A = d.algebra
    sigma = d.sigma
    checked = 0
    one = _one(A)
    if d(one) != _zero(A):
        return LeibnizReport(False, ("1",), seed, 0)
    gens = algebra_generators(A)
    if d.table is not None and not isinstance(A, FiniteAlgebra):
        monos = [RingValue(A, ((e, A.base.one()),)) for e in d.table]
        gens = gens + [m for m in monos if m not in gens]
    pairs = [(x, y) for x in gens for y in gens]
    rng = random.Random(seed)
    pairs += [(_random_element(A, rng), _random_element(A, rng)) for _ in range(trials)]
    for x, y in pairs:
        checked += 1
        if d(x * y) != d(x) * y + sigma(x) * d(y):
            return LeibnizReport(False, (str(x), str(y)), seed, checked)
    return LeibnizReport(True, None, seed, checked)


def canonical_form(d: SigmaDerivation, x):
    """Return ``c = (x - sigma x)^-1 d(x)`` and confirm ``d = c (id - sigma)``."""
    A = d.algebra
    u = x - d.sigma(x)
    if isinstance(A, FiniteAlgebra):
        raise DerivationError("canonical form is implemented for polynomial rings")
    if not u or not u.is_unit():
        raise DerivationError(f"{u} is not a unit")
    c = d(x) * u.inverse()
    for g in algebra_generators(A):
        if d(g) != c * (g - d.sigma(g)):
            raise DerivationError(f"d differs from c*(id - sigma) on {g}")
    return c, True


def ufd_generator(sigma: RingMorphism, prefix: int | None = None) -> tuple[SigmaDerivation, RingValue]:
    """Generator ``(id - sigma)/g`` of the sigma-derivations of ``K[t]``.

    ``g`` is the monic gcd of ``(id - sigma)(t^k)`` for k = 1, 2, ...;
    iteration stops once two further terms leave the gcd unchanged, or
    after ``prefix`` terms if given.  Returns the derivation and ``g``.
    """
    A = algebra_of(sigma)
    if not A.is_univariate or not A.base.is_field:
        raise DerivationError("ufd_generator needs K[t] with K a field")
    t = A.gen(A.vars[0])
    if sigma(t) == t:
        raise DerivationError("sigma is the identity")
    g = A(0)
    stable = 0
    k = 0
    while True:
        k += 1
        img = t ** k - sigma(t ** k)
        new = gcd_univariate(g, img)
        stable = stable + 1 if new == g else 0
        g = new
        if (prefix is not None and k >= prefix) or (prefix is None and stable >= 2 and k >= 2):
            break
    delta = SigmaDerivation(sigma, table={A.vars[0]: (t - sigma(t)) / g})
    return delta, g


def q_factor(d: SigmaDerivation):
    """Element q with ``d(sigma x) = q sigma(d x)`` on all generators, or None."""
    A = d.algebra
    gens = algebra_generators(A)
    pairs = [(d(d.sigma(g)), d.sigma(d(g))) for g in gens]
    one = _one(A)
    if all(u == v for u, v in pairs):
        return one
    if isinstance(A, FiniteAlgebra):
        return _solve_q_finite(A, pairs)
    q = None
    for num, den in pairs:
        if not num and not den:
            continue
        if not den:
            return None
        try:
            cand = num / den
        except (InexactDivision, ZeroDivisionError):
            return None
        if q is None:
            q = cand
        elif q != cand:
            return None
    return q if q is not None else one


def _solve_q_finite(A: FiniteAlgebra, pairs):
    R = A.ring
    if not R.is_field:
        return None
    n = A.rank
    rows = []
    for num, den in pairs:
        prods = [A.basis(m) * den for m in range(n)]
        for k in range(n):
            rows.append([prods[m].coords[k] for m in range(n)] + [num.coords[k]])
    red, pivots = rref(rows, R)
    if n in pivots:
        return None
    q = [R(0)] * n
    for row, p in zip(red, pivots):
        q[p] = row[n]
    return A.element(q)


# ---------------------------------------------------------------------------
# the pi symbols and difference operators


def pi_symbol(n: int, i: int, d: SigmaDerivation, x):
    """Sum of all compositions of (n-i) copies of d and i copies of sigma, at x.

    Computed by the recursion ``pi(n,i) = d o pi(n-1,i) + sigma o pi(n-1,i-1)``.
    """
    A = d.algebra
    if i < 0 or i > n:
        return _zero(A)
    row = [x]  # row[j] = pi(m, j)(x) for the current m
    for m in range(1, n + 1):
        new = []
        for j in range(0, m + 1):
            val = _zero(A)
            if j <= m - 1:
                val = val + d(row[j])
            if j >= 1:
                val = val + d.sigma(row[j - 1])
            new.append(val)
        row = new
    return row[i]


def pi_symbol_by_permutations(n: int, i: int, d: SigmaDerivation, x):
    """Reference evaluation of pi(n, i) as an explicit sum over words (n <= 5)."""
    if n > 5:
        raise ValueError("the permutation sum is only used for n <= 5")
    A = d.algebra
    if i < 0 or i > n:
        return _zero(A)
    total = _zero(A)
    for sigma_slots in itertools.combinations(range(n), i):
        val = x
        # the rightmost map acts first
        for pos in reversed(range(n)):
            val = d.sigma(val) if pos in sigma_slots else d(val)
        total = total + val
    return total


@dataclass(frozen=True)
class DifferenceOperator:
    """``sum p_i d^i`` with coefficients in the algebra."""

    derivation: SigmaDerivation = field(compare=False)
    terms: tuple = ()  # sorted tuple of (power, coefficient)

    @classmethod
    def make(cls, d: SigmaDerivation, pairs) -> "DifferenceOperator":
        acc: dict = {}
        for coeff, power in pairs:
            if power < 0:
                raise ValueError("powers are nonnegative")
            acc[power] = acc[power] + coeff if power in acc else coeff
        terms = tuple(sorted((p, c) for p, c in acc.items() if c))
        return cls(d, terms)

    @classmethod
    def monomial(cls, d: SigmaDerivation, a, n: int) -> "DifferenceOperator":
        return cls.make(d, [(a, n)])

    def __call__(self, x):
        total = _zero(self.derivation.algebra)
        for power, c in self.terms:
            total = total + c * self.derivation.power(power, x)
        return total

    def __add__(self, other):
        return DifferenceOperator.make(
            self.derivation, [(c, p) for p, c in self.terms] + [(c, p) for p, c in other.terms]
        )

    def __neg__(self):
        return DifferenceOperator(self.derivation, tuple((p, -c) for p, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def left_multiply(self, a) -> "DifferenceOperator":
        return DifferenceOperator.make(self.derivation, [(a * c, p) for p, c in self.terms])

    def compose(self, other: "DifferenceOperator") -> "DifferenceOperator":
        """``self o other`` expanded with the generalized Leibniz rule."""
        d = self.derivation
        pairs = []
        for n, a in self.terms:
            for m, b in other.terms:
                for i in range(n + 1):
                    pairs.append((a * pi_symbol(n, i, d, b), i + m))
        return DifferenceOperator.make(d, pairs)

    def coefficient(self, power: int):
        for p, c in self.terms:
            if p == power:
                return c
        return _zero(self.derivation.algebra)

    def __eq__(self, other):
        return isinstance(other, DifferenceOperator) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)


def operator_bracket(d: SigmaDerivation, a, n: int, b, m: int) -> DifferenceOperator:
    """``sigma(a) d^n o (b d^m) - sigma(b) d^m o (a d^n)``."""
    P = DifferenceOperator.monomial(d, a, n)
    Q = DifferenceOperator.monomial(d, b, m)
    left = DifferenceOperator.make(d, [(d.sigma(a), 0)]).compose(
        DifferenceOperator.make(d, [(_one(d.algebra), n)]).compose(Q)
    )
    right = DifferenceOperator.make(d, [(d.sigma(b), 0)]).compose(
        DifferenceOperator.make(d, [(_one(d.algebra), m)]).compose(P)
    )
    return left - right
