"""Finite free commutative algebras given by structure constants."""

from __future__ import annotations

from dataclasses import dataclass

from .rings import Ring, RingValue


@dataclass(frozen=True)
class FiniteAlgebra:
    """Free module with basis ``e_0..e_{n-1}`` and ``e_i e_j = sum_k mult[i][j][k] e_k``."""

    ring: Ring
    mult: tuple  # mult[i][j] is a tuple of n RingValues
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        n = len(self.mult)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i}" for i in range(n)))
        for row in self.mult:
            if len(row) != n or any(len(v) != n for v in row):
                raise ValueError("structure constants must form an n x n x n array")

    @property
    def rank(self) -> int:
        return len(self.mult)

    def element(self, coords) -> "AlgebraElement":
        return AlgebraElement(self, tuple(self.ring(c) for c in coords))

    def basis(self, i: int) -> "AlgebraElement":
        return self.element([1 if k == i else 0 for k in range(self.rank)])

    def zero(self) -> "AlgebraElement":
        return self.element([0] * self.rank)

    def one(self) -> "AlgebraElement":
        return self.basis(0)

    def gens(self) -> list["AlgebraElement"]:
        return [self.basis(i) for i in range(self.rank)]

    def _mul(self, x: tuple, y: tuple) -> tuple:
        R = self.ring
        out = [R(0)] * self.rank
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                c = xi * yj
                for k, a in enumerate(self.mult[i][j]):
                    if a:
                        out[k] = out[k] + c * a
        return tuple(out)

    def check(self) -> dict:
        """Commutativity, associativity on all triples, and e_0 as unit."""
        n = self.rank
        e = self.gens()
        commutative = all(e[i] * e[j] == e[j] * e[i] for i in range(n) for j in range(n))
        unit = all(e[0] * e[i] == e[i] for i in range(n))
        assoc_witness = None
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if (e[i] * e[j]) * e[k] != e[i] * (e[j] * e[k]):
                        assoc_witness = (i, j, k)
                        break
                if assoc_witness:
                    break
            if assoc_witness:
                break
        return {
            "commutative": commutative,
            "associative": assoc_witness is None,
            "unit": unit,
            "witness": assoc_witness,
        }


class AlgebraElement:
    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: FiniteAlgebra, coords: tuple):
        self.algebra = algebra
        self.coords = coords

    def _same(self, other):
        if isinstance(other, AlgebraElement):
            if other.algebra != self.algebra:
                raise TypeError("elements of different algebras")
            return other
        return None

    def __add__(self, other):
        o = self._same(other)
        if o is None:
            o = self.algebra.one() * self.algebra.ring(other)
        return AlgebraElement(self.algebra, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.algebra, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._same(other)
        if o is not None:
            return AlgebraElement(self.algebra, self.algebra._mul(self.coords, o.coords))
        if isinstance(other, (int, RingValue)):
            c = self.algebra.ring(other)
            return AlgebraElement(self.algebra, tuple(a * c for a in self.coords))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.algebra.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.algebra == other.algebra and self.coords == other.coords
        if isinstance(other, int) and other == 0:
            return not any(self.coords)
        return NotImplemented

    def __hash__(self):
        return hash(self.coords)

    def __bool__(self):
        return any(self.coords)

    def scalar(self) -> RingValue | None:
        """The base scalar c with self = c*e_0, if any."""
        if any(self.coords[1:]):
            return None
        return self.coords[0]

    def __str__(self):
        parts = []
        for c, lab in zip(self.coords, self.algebra.labels):
            if c:
                parts.append(f"({c})*{lab}")
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


@dataclass(frozen=True)
class LinearEndomorphism:
    """Endomorphism of a FiniteAlgebra: ``sigma(e_i) = sum_k matrix[i][k] e_k``."""

    algebra: FiniteAlgebra
    matrix: tuple

    def __call__(self, x):
        if isinstance(x, RingValue) or isinstance(x, int):
            return self.algebra.ring(x)
        R = self.algebra.ring
        out = [R(0)] * self.algebra.rank
        for i, xi in enumerate(x.coords):
            if xi:
                for k, s in enumerate(self.matrix[i]):
                    if s:
                        out[k] = out[k] + xi * s
        return AlgebraElement(self.algebra, tuple(out))

    def check(self) -> tuple[bool, tuple | None]:
        """Is this a unital algebra map?  Returns (ok, failing pair)."""
        A = self.algebra
        if self(A.one()) != A.one():
            return False, (0, 0)
        e = A.gens()
        for i in range(A.rank):
            for j in range(i, A.rank):
                if self(e[i] * e[j]) != self(e[i]) * self(e[j]):
                    return False, (i, j)
        return True, None

    @classmethod
    def identity(cls, A: FiniteAlgebra) -> "LinearEndomorphism":
        R = A.ring
        return cls(A, tuple(tuple(R(1 if i == k else 0) for k in range(A.rank)) for i in range(A.rank)))

    @classmethod
    def diagonal(cls, A: FiniteAlgebra, values) -> "LinearEndomorphism":
        R = A.ring
        return cls(A, tuple(
            tuple(R(values[i]) if i == k else R(0) for k in range(A.rank)) for i in range(A.rank)
        ))
