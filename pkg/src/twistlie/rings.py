"""Exact coefficient rings arranged in towers.

A ring is an immutable descriptor object that knows how to do arithmetic on
raw representations (ints, Fractions, tuples).  User code normally works with
:class:`RingValue`, a thin wrapper carrying its descriptor so that operators
work and values from different rings are never mixed silently.

Supported layers:

* ``Integers``, ``Rationals``, ``PrimeField(p)``, ``ExtensionField(p, modulus)``
* ``Cyclotomic(n, base)``: ``base[x]/(Phi_n)``, generator ``xi`` by default
* ``Polynomial(vars, base)``: sparse multivariate polynomials in graded-lex
  order, optionally with Laurent variables and monic univariate relations
  such as ``nu^3 = nu``
* ``FractionField(base)`` for univariate polynomial rings over a field
"""

from __future__ import annotations

import ast
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd as _igcd


class RingError(ValueError):
    """Invalid ring construction or unsupported operation."""


class DescriptorMismatch(TypeError):
    """Arithmetic between values of different rings."""


class InexactDivision(ArithmeticError):
    """The divisor does not divide the dividend (or is not a unit)."""


# ---------------------------------------------------------------------------
# small integer helpers


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def euler_phi(n: int) -> int:
    result = n
    for p in prime_factors(n):
        result -= result // p
    return result


def multiplicative_order(a: int, n: int) -> int:
    """Order of ``a`` modulo ``n`` (``a`` coprime to ``n``)."""
    if _igcd(a, n) != 1:
        raise RingError(f"{a} is not invertible mod {n}")
    k, x = 1, a % n
    while x != 1 % n:
        x = x * a % n
        k += 1
    return k


@lru_cache(maxsize=None)
def cyclotomic_coeffs(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, constant term first."""
    if n < 1:
        raise RingError("cyclotomic index must be positive")
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _int_poly_exact_div(num, list(cyclotomic_coeffs(d)))
    return tuple(num)


def _int_poly_exact_div(num: list[int], den: list[int]) -> list[int]:
    # den is monic
    num = list(num)
    dd = len(den) - 1
    quot = [0] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c:
            quot[k - dd] = c
            for j in range(dd + 1):
                num[k - dd + j] -= c * den[j]
    if any(num[:dd]):
        raise InexactDivision("integer polynomial division left a remainder")
    return quot


# ---------------------------------------------------------------------------
# ring descriptors


class Ring:
    """Base class of ring descriptors (subclasses are frozen dataclasses)."""

    base: "Ring | None" = None
    is_field = False
    is_domain = True
    characteristic = 0

    # -- to be provided by subclasses
    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def divexact(self, a, b):
        raise NotImplementedError

    def fmt(self, a) -> str:
        raise NotImplementedError

    def gens(self) -> dict:
        return {}

    def from_base(self, rep):
        raise RingError(f"{self!r} has no base ring")

    def layer_json(self) -> dict:
        raise NotImplementedError

    def random_rep(self, rng: random.Random, size: int = 3):
        raise NotImplementedError

    # -- generic
    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_zero(self, a) -> bool:
        return a == self.zero()

    def inv(self, a):
        return self.divexact(self.one(), a)

    def is_unit(self, a) -> bool:
        try:
            self.inv(a)
        except (InexactDivision, ZeroDivisionError):
            return False
        return True

    def pow(self, a, k: int):
        if k < 0:
            return self.pow(self.inv(a), -k)
        result, sq = self.one(), a
        while k:
            if k & 1:
                result = self.mul(result, sq)
            k >>= 1
            if k:
                sq = self.mul(sq, sq)
        return result

    def from_fraction(self, x: Fraction):
        return self.divexact(self.from_int(x.numerator), self.from_int(x.denominator))

    def tower(self) -> list["Ring"]:
        """Layers from the ground ring up to ``self``."""
        layers, r = [], self
        while r is not None:
            layers.append(r)
            r = r.base
        return layers[::-1]

    def all_gens(self) -> dict[str, "RingValue"]:
        """Generators of every layer, embedded into this ring."""
        out = {}
        for layer in self.tower():
            for name, rep in layer.gens().items():
                out[name] = self.embed(RingValue(layer, rep))
        return out

    def embed(self, value: "RingValue") -> "RingValue":
        """Coerce a value from a ring lower in this tower."""
        if value.ring == self:
            return value
        if self.base is None:
            raise DescriptorMismatch(f"cannot embed {value.ring!r} into {self!r}")
        inner = self.base.embed(value)
        return RingValue(self, self.from_base(inner.rep))

    def to_json(self) -> dict:
        return {"tower": [layer.layer_json() for layer in self.tower()]}

    def __call__(self, x) -> "RingValue":
        if isinstance(x, RingValue):
            return self.embed(x)
        if isinstance(x, bool):
            raise TypeError("booleans are not ring elements")
        if isinstance(x, int):
            return RingValue(self, self.from_int(x))
        if isinstance(x, Fraction):
            return RingValue(self, self.from_fraction(x))
        if isinstance(x, str):
            return parse(self, x)
        raise TypeError(f"cannot convert {type(x).__name__} into {self!r}")

    def gen(self, name: str) -> "RingValue":
        gens = self.all_gens()
        if name not in gens:
            raise RingError(f"no generator named {name!r}")
        return gens[name]

    def random(self, rng: random.Random, size: int = 3) -> "RingValue":
        return RingValue(self, self.random_rep(rng, size))


@dataclass(frozen=True)
class Integers(Ring):
    is_field = False

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return int(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def divexact(self, a, b):
        if b == 0 or a % b:
            raise InexactDivision(f"{b} does not divide {a}")
        return a // b

    def fmt(self, a):
        return str(a)

    def layer_json(self):
        return {"kind": "integers"}

    def random_rep(self, rng, size=3):
        return rng.randint(-10 ** size, 10 ** size)

    def __repr__(self):
        return "ZZ"


@dataclass(frozen=True)
class Rationals(Ring):
    is_field = True

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def from_fraction(self, x):
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def divexact(self, a, b):
        if b == 0:
            raise InexactDivision("division by zero")
        return a / b

    def fmt(self, a):
        return str(a)

    def layer_json(self):
        return {"kind": "rationals"}

    def random_rep(self, rng, size=3):
        return Fraction(rng.randint(-10 ** size, 10 ** size), rng.randint(1, 10 ** size))

    def __repr__(self):
        return "QQ"


@dataclass(frozen=True)
class PrimeField(Ring):
    p: int
    is_field = True

    def __post_init__(self):
        if not is_prime(self.p):
            raise RingError(f"{self.p} is not prime")

    @property
    def characteristic(self):
        return self.p

    @property
    def size(self):
        return self.p

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return int(n) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def divexact(self, a, b):
        if b % self.p == 0:
            raise InexactDivision("division by zero")
        return a * pow(b, -1, self.p) % self.p

    def fmt(self, a):
        return str(a)

    def layer_json(self):
        return {"kind": "prime-field", "p": self.p}

    def random_rep(self, rng, size=3):
        return rng.randrange(self.p)

    def __repr__(self):
        return f"GF({self.p})"


def _fp_poly_mod(a: list[int], m: tuple[int, ...], p: int) -> list[int]:
    a = [x % p for x in a]
    d = len(m) - 1
    for k in range(len(a) - 1, d - 1, -1):
        c = a[k]
        if c:
            for j in range(d + 1):
                a[k - d + j] = (a[k - d + j] - c * m[j]) % p
    a = a[:d] + [0] * max(0, d - len(a))
    return a


def _fp_poly_mulmod(a, b, m, p):
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _fp_poly_mod(prod, m, p)


def _fp_poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_poly_gcd(a, b, p):
    a, b = _fp_poly_trim(a), _fp_poly_trim(b)
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            c = a[-1] * inv % p
            shift = len(a) - len(b)
            for j, y in enumerate(b):
                a[shift + j] = (a[shift + j] - c * y) % p
            a = _fp_poly_trim(a)
            if not a:
                break
        a, b = b, a
    return a


def is_irreducible_mod_p(modulus: tuple[int, ...], p: int) -> bool:
    """Rabin's test for a monic polynomial over GF(p), low degree first."""
    m = tuple(c % p for c in modulus)
    d = len(m) - 1
    if d < 1 or m[-1] != 1:
        return False
    if d == 1:
        return True

    def frob_power(k):
        # x^(p^k) mod m
        x = [0, 1]
        for _ in range(k):
            x = _fp_poly_pow(x, p, m, p)
        return x

    xpd = frob_power(d)
    if _fp_poly_trim(_fp_poly_mod([a - b for a, b in zip(xpd + [0, 0], [0, 1] + [0] * len(xpd))], m, p)):
        return False
    for r in prime_factors(d):
        h = frob_power(d // r)
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] -= 1
        g = _fp_poly_gcd(list(m), diff, p)
        if len(g) > 1:
            return False
    return True


def _fp_poly_pow(a, k, m, p):
    result = [1]
    sq = list(a)
    while k:
        if k & 1:
            result = _fp_poly_mulmod(result, sq, m, p)
        k >>= 1
        if k:
            sq = _fp_poly_mulmod(sq, sq, m, p)
    return result


def find_irreducible(p: int, d: int) -> tuple[int, ...]:
    """First monic irreducible of degree ``d`` over GF(p) in lexicographic order."""
    for idx in range(p ** d):
        coeffs, x = [], idx
        for _ in range(d):
            coeffs.append(x % p)
            x //= p
        cand = tuple(coeffs) + (1,)
        if is_irreducible_mod_p(cand, p):
            return cand
    raise RingError(f"no irreducible polynomial of degree {d} over GF({p})")


@dataclass(frozen=True)
class ExtensionField(Ring):
    """GF(p^d) as GF(p)[a]/(modulus); modulus given constant term first."""

    p: int
    modulus: tuple[int, ...]
    var: str = "a"
    is_field = True

    def __post_init__(self):
        if not is_prime(self.p):
            raise RingError(f"{self.p} is not prime")
        mod = tuple(int(c) % self.p for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if not is_irreducible_mod_p(mod, self.p):
            raise RingError(f"modulus {mod} is not irreducible over GF({self.p})")

    @property
    def degree(self):
        return len(self.modulus) - 1

    @property
    def characteristic(self):
        return self.p

    @property
    def size(self):
        return self.p ** self.degree

    def zero(self):
        return (0,) * self.degree

    def one(self):
        return (1,) + (0,) * (self.degree - 1)

    def from_int(self, n):
        return (int(n) % self.p,) + (0,) * (self.degree - 1)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x % self.p for x in a)

    def mul(self, a, b):
        return tuple(_fp_poly_mulmod(list(a), list(b), self.modulus, self.p))

    def divexact(self, a, b):
        if not any(b):
            raise InexactDivision("division by zero")
        return self.mul(a, Ring.pow(self, b, self.size - 2))

    def gens(self):
        if self.degree == 1:
            return {}
        return {self.var: (0, 1) + (0,) * (self.degree - 2)}

    def fmt(self, a):
        return _fmt_dense(a, self.var, str, lambda c: c == 0, lambda c: c == 1)

    def layer_json(self):
        return {"kind": "ext-field", "p": self.p, "modulus": list(self.modulus), "var": self.var}

    def random_rep(self, rng, size=3):
        return tuple(rng.randrange(self.p) for _ in range(self.degree))

    def elements(self):
        """All field elements in a fixed order (index = base-p digits)."""
        out = []
        for idx in range(self.size):
            digits, x = [], idx
            for _ in range(self.degree):
                digits.append(x % self.p)
                x //= self.p
            out.append(tuple(digits))
        return out

    def __repr__(self):
        return f"GF({self.p}^{self.degree})"


def _fmt_dense(coeffs, var, fmt_c, is0, is1) -> str:
    """Format a dense univariate representation, highest power first."""
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if is0(c):
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        terms.append(_term(fmt_c(c), mono, is1(c)))
    return _join_terms(terms)


def _atomic(s: str) -> bool:
    body = s[1:] if s.startswith("-") else s
    return not any(op in body for op in (" + ", " - ")) and not body.startswith("(")


def _term(cstr: str, mono: str, is_one: bool) -> str:
    if not mono:
        return cstr
    if is_one:
        return mono
    if cstr == "-1":
        return "-" + mono
    if not _atomic(cstr):
        cstr = f"({cstr})"
    return f"{cstr}*{mono}"


def _join_terms(terms: list[str]) -> str:
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        if t.startswith("-") and _atomic(t):
            out += " - " + t[1:]
        else:
            out += " + " + t
    return out


@dataclass(frozen=True)
class Cyclotomic(Ring):
    """``base[x]/(Phi_n)``; the class of ``x`` has exact order ``n``."""

    n: int
    base: Ring = field(default_factory=Integers)
    var: str = "xi"

    def __post_init__(self):
        if self.n < 1:
            raise RingError("cyclotomic index must be positive")
        if self.base.characteristic and self.n % self.base.characteristic == 0:
            raise RingError("characteristic divides n: xi cannot have exact order n")
        phi = tuple(self.base.from_int(c) for c in cyclotomic_coeffs(self.n))
        object.__setattr__(self, "_phi", phi)

    @property
    def degree(self):
        return euler_phi(self.n)

    @property
    def characteristic(self):
        return self.base.characteristic

    @property
    def is_field(self):
        b = self.base
        if isinstance(b, Rationals) or isinstance(b, FractionField):
            return True
        size = getattr(b, "size", None)
        if size is not None and b.is_field:
            return multiplicative_order(size % self.n, self.n) == self.degree if self.n > 1 else True
        return False

    @property
    def is_domain(self):
        return self.is_field or isinstance(self.base, Integers)

    def zero(self):
        return (self.base.zero(),) * self.degree

    def one(self):
        return self.from_base(self.base.one())

    def from_base(self, rep):
        return (rep,) + (self.base.zero(),) * (self.degree - 1)

    def from_int(self, n):
        return self.from_base(self.base.from_int(n))

    def from_fraction(self, x):
        return self.from_base(self.base.from_fraction(x))

    def add(self, a, b):
        B = self.base
        return tuple(B.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        B = self.base
        return tuple(B.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def _reduce(self, coeffs: list):
        B, phi, d = self.base, self._phi, self.degree
        for k in range(len(coeffs) - 1, d - 1, -1):
            c = coeffs[k]
            if not B.is_zero(c):
                for j in range(d):
                    coeffs[k - d + j] = B.sub(coeffs[k - d + j], B.mul(c, phi[j]))
        out = coeffs[:d]
        return tuple(out) + (B.zero(),) * (d - len(out))

    def mul(self, a, b):
        B = self.base
        prod = [B.zero()] * (2 * self.degree - 1)
        for i, x in enumerate(a):
            if B.is_zero(x):
                continue
            for j, y in enumerate(b):
                if not B.is_zero(y):
                    prod[i + j] = B.add(prod[i + j], B.mul(x, y))
        return self._reduce(prod)

    def inv(self, a):
        if all(self.base.is_zero(x) for x in a):
            raise InexactDivision("division by zero")
        if isinstance(self.base, Integers):
            qring = Cyclotomic(self.n, Rationals(), self.var)
            inv = qring.inv(tuple(Fraction(x) for x in a))
            if any(c.denominator != 1 for c in inv):
                raise InexactDivision(f"{self.fmt(a)} is not a unit")
            return tuple(int(c) for c in inv)
        if not self.base.is_field:
            raise InexactDivision("inverse needs a field or integer base")
        u = _dense_inverse_mod(self.base, list(a), list(self._phi))
        return tuple(u) + (self.base.zero(),) * (self.degree - len(u))

    def divexact(self, a, b):
        B = self.base
        if all(B.is_zero(x) for x in b[1:]):
            # division by a base scalar
            return tuple(B.divexact(x, b[0]) for x in a)
        if isinstance(B, Integers):
            qring = Cyclotomic(self.n, Rationals(), self.var)
            q = qring.divexact(tuple(Fraction(x) for x in a), tuple(Fraction(x) for x in b))
            if any(c.denominator != 1 for c in q):
                raise InexactDivision(f"{self.fmt(b)} does not divide {self.fmt(a)}")
            return tuple(int(c) for c in q)
        return self.mul(a, self.inv(b))

    def gens(self):
        if self.degree == 1:
            # n = 1 or 2: xi is the integer 1 or -1
            return {self.var: self.from_int(1 if self.n == 1 else -1)}
        return {self.var: (self.base.zero(), self.base.one()) + (self.base.zero(),) * (self.degree - 2)}

    def fmt(self, a):
        B = self.base
        return _fmt_dense(a, self.var, B.fmt, B.is_zero, lambda c: c == B.one())

    def layer_json(self):
        d = {"kind": "cyclotomic", "n": self.n}
        if self.var != "xi":
            d["var"] = self.var
        return d

    def random_rep(self, rng, size=3):
        return tuple(self.base.random_rep(rng, size) for _ in range(self.degree))

    def __repr__(self):
        return f"{self.base!r}[{self.var}]/Phi_{self.n}"


def _dense_trim(B: Ring, a: list) -> list:
    a = list(a)
    while a and B.is_zero(a[-1]):
        a.pop()
    return a


def _dense_divmod(B: Ring, a: list, b: list):
    """Division with remainder of dense polynomials over a field ``B``."""
    a, b = _dense_trim(B, a), _dense_trim(B, b)
    if not b:
        raise InexactDivision("polynomial division by zero")
    inv = B.inv(b[-1])
    quot = [B.zero()] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        c = B.mul(a[-1], inv)
        shift = len(a) - len(b)
        quot[shift] = c
        for j, y in enumerate(b):
            a[shift + j] = B.sub(a[shift + j], B.mul(c, y))
        a = _dense_trim(B, a)
    return quot, a


def _dense_mul(B: Ring, a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [B.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if B.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = B.add(out[i + j], B.mul(x, y))
    return _dense_trim(B, out)


def _dense_sub(B: Ring, a: list, b: list) -> list:
    n = max(len(a), len(b))
    a = list(a) + [B.zero()] * (n - len(a))
    b = list(b) + [B.zero()] * (n - len(b))
    return _dense_trim(B, [B.sub(x, y) for x, y in zip(a, b)])


def _dense_gcdex(B: Ring, a: list, b: list):
    """Return (g, s) with g = s*a mod b, g a monic gcd over the field ``B``."""
    r0, r1 = _dense_trim(B, a), _dense_trim(B, b)
    s0, s1 = [B.one()], []
    while r1:
        q, r = _dense_divmod(B, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _dense_sub(B, s0, _dense_mul(B, q, s1))
    if not r0:
        return [], []
    lc = B.inv(r0[-1])
    return [B.mul(lc, c) for c in r0], [B.mul(lc, c) for c in s0]


def _dense_inverse_mod(B: Ring, a: list, m: list) -> list:
    g, s = _dense_gcdex(B, a, m)
    if len(g) != 1:
        raise InexactDivision("element is a zero divisor")
    _, r = _dense_divmod(B, s, m)
    return r


def _glex_key(exps: tuple[int, ...]):
    return (sum(exps), exps)


@dataclass(frozen=True)
class Polynomial(Ring):
    """Sparse polynomials over ``base`` in the variables ``vars``.

    Representations are tuples of ``(exponents, coeff)`` sorted with the
    graded-lex leading term first.  ``laurent`` names variables that may
    carry negative exponents (a localization ``t * t^-1 = 1``).
    ``relations`` maps a variable to ``(c_0, ..., c_{d-1})`` meaning
    ``var^d = sum c_j var^j``.
    """

    vars: tuple[str, ...]
    base: Ring = field(default_factory=Integers)
    laurent: tuple[str, ...] = ()
    relations: tuple = ()  # tuple of (var_index, coeff tuple)

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "laurent", tuple(self.laurent))
        if len(set(self.vars)) != len(self.vars) or not self.vars:
            raise RingError("polynomial variables must be distinct and nonempty")
        for v in self.laurent:
            if v not in self.vars:
                raise RingError(f"Laurent variable {v!r} is not a ring variable")
        object.__setattr__(self, "_laurent_idx", frozenset(self.vars.index(v) for v in self.laurent))
        object.__setattr__(self, "_rel", {i: tuple(c) for i, c in self.relations})

    @property
    def nvars(self):
        return len(self.vars)

    @property
    def characteristic(self):
        return self.base.characteristic

    @property
    def is_domain(self):
        return not self.relations and self.base.is_domain

    @property
    def is_univariate(self):
        return self.nvars == 1 and not self.relations and not self.laurent

    def zero(self):
        return ()

    def one(self):
        return self.from_base(self.base.one())

    def from_base(self, rep):
        if self.base.is_zero(rep):
            return ()
        return (((0,) * self.nvars, rep),)

    def from_int(self, n):
        return self.from_base(self.base.from_int(n))

    def from_fraction(self, x):
        return self.from_base(self.base.from_fraction(x))

    def is_zero(self, a):
        return not a

    def _pack(self, terms: dict):
        B = self.base
        if self._rel:
            terms = self._apply_relations(terms)
        items = [(e, c) for e, c in terms.items() if not B.is_zero(c)]
        items.sort(key=lambda t: _glex_key(t[0]), reverse=True)
        return tuple(items)

    def _apply_relations(self, terms: dict) -> dict:
        B = self.base
        out: dict = {}
        stack = list(terms.items())
        while stack:
            e, c = stack.pop()
            if B.is_zero(c):
                continue
            for i, rel in self._rel.items():
                d = len(rel)
                if e[i] >= d:
                    for j, rc in enumerate(rel):
                        if not B.is_zero(rc):
                            e2 = e[:i] + (e[i] - d + j,) + e[i + 1:]
                            stack.append((e2, B.mul(c, rc)))
                    break
            else:
                out[e] = B.add(out[e], c) if e in out else c
        return out

    def add(self, a, b):
        B = self.base
        terms = dict(a)
        for e, c in b:
            terms[e] = B.add(terms[e], c) if e in terms else c
        items = [(e, c) for e, c in terms.items() if not B.is_zero(c)]
        items.sort(key=lambda t: _glex_key(t[0]), reverse=True)
        return tuple(items)

    def neg(self, a):
        return tuple((e, self.base.neg(c)) for e, c in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a or not b:
            return ()
        B = self.base
        terms: dict = {}
        for e1, c1 in a:
            for e2, c2 in b:
                e = tuple(x + y for x, y in zip(e1, e2))
                c = B.mul(c1, c2)
                terms[e] = B.add(terms[e], c) if e in terms else c
        return self._pack(terms)

    def scale(self, a, c):
        """Multiply by a base-ring scalar."""
        B = self.base
        return tuple((e, B.mul(x, c)) for e, x in a if not B.is_zero(B.mul(x, c)))

    def _monomial_divides(self, e_small, e_big) -> bool:
        return all(i in self._laurent_idx or s <= b for i, (s, b) in enumerate(zip(e_small, e_big)))

    def inv(self, a):
        if len(a) != 1:
            raise InexactDivision(f"{self.fmt(a)} is not a unit")
        e, c = a[0]
        if any(x and i not in self._laurent_idx for i, x in enumerate(e)):
            raise InexactDivision(f"{self.fmt(a)} is not a unit")
        return (((tuple(-x for x in e)), self.base.inv(c)),)

    def divexact(self, a, b):
        if not b:
            raise InexactDivision("division by zero")
        if not a:
            return ()
        if len(b) == 1 and not self._rel:
            eb, cb = b[0]
            if all(self._monomial_divides(eb, e) for e, _ in a):
                B = self.base
                return tuple(
                    (tuple(x - y for x, y in zip(e, eb)), B.divexact(c, cb)) for e, c in a
                )
            raise InexactDivision(f"{self.fmt(b)} does not divide {self.fmt(a)}")
        if self._rel:
            if len(b) == 1 and not any(b[0][0]):
                return self.scale(a, self.base.inv(b[0][1]))
            return self.mul(a, self.inv(b))
        if self._laurent_idx:
            # clear negative exponents, divide as polynomials, shift back
            sa, sb = self._laurent_shift(a), self._laurent_shift(b)
            q = self._poly_divexact(self._shift(a, sa), self._shift(b, sb))
            return self._shift(q, tuple(x - y for x, y in zip(sb, sa)))
        return self._poly_divexact(a, b)

    def _laurent_shift(self, a):
        mins = [0] * self.nvars
        for i in self._laurent_idx:
            mins[i] = -min(e[i] for e, _ in a)
        return tuple(mins)

    def _shift(self, a, s):
        return self._pack({tuple(x + y for x, y in zip(e, s)): c for e, c in a})

    def _poly_divexact(self, a, b):
        B = self.base
        eb, cb = b[0]
        quot: dict = {}
        r = a
        while r:
            er, cr = r[0]
            if not all(x >= y for x, y in zip(er, eb)):
                raise InexactDivision(f"{self.fmt(b)} does not divide {self.fmt(a)}")
            c = B.divexact(cr, cb)
            e = tuple(x - y for x, y in zip(er, eb))
            quot[e] = c
            r = self.sub(r, self.mul(((e, c),), b))
        return self._pack(quot)

    def gens(self):
        out = {}
        for i, v in enumerate(self.vars):
            e = tuple(1 if j == i else 0 for j in range(self.nvars))
            out[v] = self._pack({e: self.base.one()})
        return out

    def fmt(self, a):
        B = self.base
        terms = []
        for e, c in a:
            mono = "*".join(
                v if x == 1 else f"{v}^{x}" if x > 0 else f"{v}^({x})"
                for v, x in zip(self.vars, e)
                if x
            )
            terms.append(_term(B.fmt(c), mono, c == B.one()))
        return _join_terms(terms)

    def layer_json(self):
        d = {"kind": "polynomial", "vars": list(self.vars)}
        if self.laurent:
            d["laurent"] = list(self.laurent)
        if self.relations:
            rels = {}
            for i, coeffs in self.relations:
                uni = Polynomial((self.vars[i],), self.base)
                dd = len(coeffs)
                terms = {(dd,): self.base.one()}
                for j, c in enumerate(coeffs):
                    if not self.base.is_zero(c):
                        terms[(j,)] = self.base.neg(c)
                rels[self.vars[i]] = uni.fmt(uni._pack(terms))
            d["relations"] = rels
        return d

    def random_rep(self, rng, size=3):
        terms = {}
        for _ in range(rng.randint(0, size)):
            e = tuple(
                rng.randint(-2, 2) if i in self._laurent_idx else rng.randint(0, 2)
                for i in range(self.nvars)
            )
            terms[e] = self.base.random_rep(rng, max(1, size - 1))
        return self._pack(terms)

    # -- helpers for univariate work
    def to_dense(self, a) -> list:
        if self.nvars != 1 or self._laurent_idx:
            raise RingError("dense form needs a univariate polynomial ring")
        B = self.base
        if not a:
            return []
        out = [B.zero()] * (a[0][0][0] + 1)
        for (k,), c in a:
            out[k] = c
        return out

    def from_dense(self, coeffs) -> tuple:
        return self._pack({(k,): c for k, c in enumerate(coeffs)})

    def coefficient(self, a, exps) -> object:
        for e, c in a:
            if e == tuple(exps):
                return c
        return self.base.zero()

    def degree_in(self, a, var: str) -> int:
        i = self.vars.index(var)
        return max((e[i] for e, _ in a), default=-1)

    def __repr__(self):
        return f"{self.base!r}[{','.join(self.vars)}]"


def polynomial_ring(vars, base: Ring | None = None, laurent=(), relations=None) -> Polynomial:
    """Build a polynomial ring; ``relations`` maps var -> monic polynomial string."""
    base = base if base is not None else Integers()
    vars = tuple(vars)
    rels = []
    for v, text in (relations or {}).items():
        uni = Polynomial((v,), base)
        rep = parse(uni, text).rep
        d = rep[0][0][0]
        if d < 1 or rep[0][1] != base.one():
            raise RingError(f"relation for {v} must be monic of positive degree")
        coeffs = [base.zero()] * d
        for (k,), c in rep[1:]:
            coeffs[k] = base.neg(c)
        rels.append((vars.index(v), tuple(coeffs)))
    return Polynomial(vars, base, tuple(laurent), tuple(sorted(rels)))


@dataclass(frozen=True)
class FractionField(Ring):
    """Fractions over a univariate polynomial ring with field coefficients."""

    base: Ring
    is_field = True

    def __post_init__(self):
        b = self.base
        if not (isinstance(b, Polynomial) and b.is_univariate and b.base.is_field):
            raise RingError(
                "fraction fields are supported over univariate polynomial rings "
                "with field coefficients (use Rationals for the integers)"
            )

    @property
    def characteristic(self):
        return self.base.characteristic

    def _normalize(self, num, den):
        P, F = self.base, self.base.base
        if not den:
            raise InexactDivision("zero denominator")
        if not num:
            return ((), P.one())
        nd, dd = P.to_dense(num), P.to_dense(den)
        g, _ = _dense_gcdex(F, nd, dd)
        if len(g) > 1:
            nd, r1 = _dense_divmod(F, nd, g)
            dd, r2 = _dense_divmod(F, dd, g)
            assert not r1 and not r2
        lc = F.inv(dd[-1])
        nd = [F.mul(c, lc) for c in nd]
        dd = [F.mul(c, lc) for c in dd]
        return (P.from_dense(nd), P.from_dense(dd))

    def zero(self):
        return ((), self.base.one())

    def one(self):
        return (self.base.one(), self.base.one())

    def from_base(self, rep):
        return self._normalize(rep, self.base.one())

    def from_int(self, n):
        return self.from_base(self.base.from_int(n))

    def from_fraction(self, x):
        return self.from_base(self.base.from_fraction(x))

    def is_zero(self, a):
        return not a[0]

    def add(self, a, b):
        P = self.base
        if a[1] == b[1]:
            return self._normalize(P.add(a[0], b[0]), a[1])
        return self._normalize(P.add(P.mul(a[0], b[1]), P.mul(b[0], a[1])), P.mul(a[1], b[1]))

    def neg(self, a):
        return (self.base.neg(a[0]), a[1])

    def mul(self, a, b):
        P = self.base
        return self._normalize(P.mul(a[0], b[0]), P.mul(a[1], b[1]))

    def divexact(self, a, b):
        if not b[0]:
            raise InexactDivision("division by zero")
        P = self.base
        return self._normalize(P.mul(a[0], b[1]), P.mul(a[1], b[0]))

    def fmt(self, a):
        P = self.base
        num = P.fmt(a[0])
        if a[1] == P.one():
            return num
        den = P.fmt(a[1])
        if not _atomic(num):
            num = f"({num})"
        if not _atomic(den) or "*" in den or den.startswith("-"):
            den = f"({den})"
        return f"{num}/{den}"

    def layer_json(self):
        return {"kind": "fraction-field"}

    def random_rep(self, rng, size=3):
        den = self.base.random_rep(rng, size)
        if not den:
            den = self.base.one()
        return self._normalize(self.base.random_rep(rng, size), den)

    def __repr__(self):
        return f"Frac({self.base!r})"


def fraction_field(ring: Ring) -> Ring:
    """Fraction field of a supported domain (the integers give the rationals)."""
    if isinstance(ring, Integers):
        return Rationals()
    if ring.is_field:
        return ring
    return FractionField(ring)


# ---------------------------------------------------------------------------
# values


class RingValue:
    """An element of a ring, with arithmetic operators."""

    __slots__ = ("ring", "rep")

    def __init__(self, ring: Ring, rep):
        self.ring = ring
        self.rep = rep

    def _coerce(self, other) -> "RingValue":
        if isinstance(other, RingValue):
            if other.ring != self.ring:
                raise DescriptorMismatch(f"{self.ring!r} vs {other.ring!r}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.ring(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RingValue(self.ring, self.ring.add(self.rep, o.rep))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RingValue(self.ring, self.ring.sub(self.rep, o.rep))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RingValue(self.ring, self.ring.sub(o.rep, self.rep))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RingValue(self.ring, self.ring.mul(self.rep, o.rep))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RingValue(self.ring, self.ring.divexact(self.rep, o.rep))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RingValue(self.ring, self.ring.divexact(o.rep, self.rep))

    def __neg__(self):
        return RingValue(self.ring, self.ring.neg(self.rep))

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        return RingValue(self.ring, self.ring.pow(self.rep, k))

    def __eq__(self, other):
        if isinstance(other, RingValue):
            return self.ring == other.ring and self.rep == other.rep
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            try:
                return self.rep == self.ring(other).rep
            except InexactDivision:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.rep))

    def __bool__(self):
        return not self.ring.is_zero(self.rep)

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.rep)

    def is_unit(self) -> bool:
        return self.ring.is_unit(self.rep)

    def inverse(self) -> "RingValue":
        return RingValue(self.ring, self.ring.inv(self.rep))

    def __str__(self):
        return self.ring.fmt(self.rep)

    def __repr__(self):
        return f"RingValue({self.ring!r}, {self})"


# ---------------------------------------------------------------------------
# parsing and serialization


class _Evaluator(ast.NodeVisitor):
    def __init__(self, ring: Ring):
        self.ring = ring
        self.names = ring.all_gens()

    def visit_Expression(self, node):
        return self.visit(node.body)

    def visit_Constant(self, node):
        if isinstance(node.value, int) and not isinstance(node.value, bool):
            return self.ring(node.value)
        raise RingError(f"unsupported constant {node.value!r}")

    def visit_Name(self, node):
        if node.id not in self.names:
            raise RingError(f"unknown symbol {node.id!r} in {self.ring!r}")
        return self.names[node.id]

    def visit_UnaryOp(self, node):
        v = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
        raise RingError("unsupported unary operator")

    def visit_BinOp(self, node):
        if isinstance(node.op, ast.Pow):
            exp = _int_literal(node.right)
            return self.visit(node.left) ** exp
        left, right = self.visit(node.left), self.visit(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            return left / right
        raise RingError("unsupported binary operator")

    def generic_visit(self, node):
        raise RingError(f"unsupported syntax: {type(node).__name__}")


def _int_literal(node) -> int:
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_int_literal(node.operand)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.UAdd):
        return _int_literal(node.operand)
    raise RingError("exponents must be integer literals")


def parse(ring: Ring, text: str) -> RingValue:
    """Parse an arithmetic expression in the ring's generator names.

    ``^`` and ``**`` both mean power; ``/`` is exact division.
    """
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise RingError(f"cannot parse {text!r}") from exc
    return _Evaluator(ring).visit(tree)


def ring_from_json(data: dict | list) -> Ring:
    """Build a ring from ``{"tower": [...]}`` (or the bare layer list)."""
    layers = data["tower"] if isinstance(data, dict) else data
    if not layers:
        raise RingError("empty ring tower")
    ring: Ring | None = None
    for layer in layers:
        kind = layer.get("kind")
        known = {
            "integers": set(),
            "rationals": set(),
            "prime-field": {"p"},
            "ext-field": {"p", "modulus", "var"},
            "cyclotomic": {"n", "var"},
            "polynomial": {"vars", "laurent", "relations"},
            "fraction-field": set(),
        }
        if kind not in known:
            raise RingError(f"unknown ring kind {kind!r}")
        extra = set(layer) - known[kind] - {"kind"}
        if extra:
            raise RingError(f"unknown fields {sorted(extra)} for {kind}")
        ground = kind in ("integers", "rationals", "prime-field", "ext-field")
        if ground and ring is not None:
            raise RingError(f"{kind} must be the first layer of a tower")
        if kind == "integers":
            ring = Integers()
        elif kind == "rationals":
            ring = Rationals()
        elif kind == "prime-field":
            ring = PrimeField(int(layer["p"]))
        elif kind == "ext-field":
            ring = ExtensionField(int(layer["p"]), tuple(layer["modulus"]), layer.get("var", "a"))
        else:
            base = ring if ring is not None else Integers()
            if kind == "cyclotomic":
                ring = Cyclotomic(int(layer["n"]), base, layer.get("var", "xi"))
            elif kind == "polynomial":
                ring = polynomial_ring(
                    layer["vars"], base, layer.get("laurent", ()), layer.get("relations")
                )
            else:
                ring = fraction_field(base)
    return ring


# ---------------------------------------------------------------------------
# univariate gcd


def _univariate_ring(f: RingValue) -> Polynomial:
    R = f.ring
    if not (isinstance(R, Polynomial) and R.is_univariate):
        raise RingError("gcd_univariate needs a univariate polynomial ring")
    return R


def poly_divmod(f: RingValue, g: RingValue) -> tuple[RingValue, RingValue]:
    """Quotient and remainder of univariate polynomials over a field."""
    R = _univariate_ring(f)
    if not R.base.is_field:
        raise RingError("division with remainder needs field coefficients")
    q, r = _dense_divmod(R.base, R.to_dense(g._coerce(f).rep), R.to_dense(g.rep))
    return RingValue(R, R.from_dense(q)), RingValue(R, R.from_dense(r))


def gcd_univariate(f: RingValue, g: RingValue) -> RingValue:
    """Normalized gcd: monic over a field, positive content over the integers."""
    R = _univariate_ring(f)
    g = f._coerce(g)
    B = R.base
    if B.is_field:
        fd, gd = R.to_dense(f.rep), R.to_dense(g.rep)
        if not fd and not gd:
            return RingValue(R, ())
        h, _ = _dense_gcdex(B, fd if fd else gd, gd if fd else fd)
        return RingValue(R, R.from_dense(h))
    if isinstance(B, Integers):
        return RingValue(R, R.from_dense(_int_poly_gcd(R.to_dense(f.rep), R.to_dense(g.rep))))
    raise RingError("gcd_univariate needs field or integer coefficients")


def _content(a: list[int]) -> int:
    c = 0
    for x in a:
        c = _igcd(c, x)
    return c


def _int_poly_gcd(a: list[int], b: list[int]) -> list[int]:
    a, b = _trim_int(a), _trim_int(b)
    if not a:
        a, b = b, a
    if not a:
        return []
    if not b:
        c = _content(a)
        out = [x // c for x in a]
        sign = 1 if out[-1] > 0 else -1
        return [sign * c * x for x in out]
    ca, cb = _content(a), _content(b)
    cont = _igcd(ca, cb)
    a = [x // ca for x in a]
    b = [x // cb for x in b]
    # primitive pseudo-remainder sequence
    while b:
        r = _pseudo_rem(a, b)
        a, b = b, r
        if b:
            c = _content(b)
            b = [x // c for x in b]
    if a[-1] < 0:
        a = [-x for x in a]
    return [cont * x for x in a]


def _trim_int(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pseudo_rem(a, b):
    a = list(a)
    lb = b[-1]
    while len(a) >= len(b):
        la = a[-1]
        shift = len(a) - len(b)
        a = [x * lb for x in a]
        for j, y in enumerate(b):
            a[shift + j] -= la * y
        a = _trim_int(a)
    return a


def cyclotomic_poly(n: int, var: str = "x") -> RingValue:
    """The n-th cyclotomic polynomial as an element of ZZ[var]."""
    R = Polynomial((var,), Integers())
    return RingValue(R, R.from_dense(list(cyclotomic_coeffs(n))))


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True)
class RingMorphism:
    """A ring map fixed by the images of the source's generators.

    Ground layers map canonically (integers and rationals through the
    target's prime subring, prime fields need matching characteristic).
    """

    source: Ring
    target: Ring
    images: tuple  # tuple of (name, RingValue) in the target
    partial: bool = False  # reduction mod p: defined on p-integral rationals only

    def __post_init__(self):
        imgs = dict(self.images)
        for name, v in imgs.items():
            if not isinstance(v, RingValue) or v.ring != self.target:
                raise DescriptorMismatch(f"image of {name!r} must lie in {self.target!r}")
        for layer in self.source.tower():
            self._check_layer(layer, imgs)

    @classmethod
    def from_images(cls, source: Ring, target: Ring, images: dict, partial: bool = False) -> "RingMorphism":
        conv = {}
        for name, v in images.items():
            conv[name] = v if isinstance(v, RingValue) else target(v)
        return cls(source, target, tuple(sorted(conv.items())), partial)

    @classmethod
    def identity(cls, ring: Ring) -> "RingMorphism":
        gens = {}
        for layer in ring.tower():
            for name in layer.gens():
                gens[name] = ring.gen(name)
        return cls.from_images(ring, ring, gens)

    @property
    def image_map(self) -> dict:
        return dict(self.images)

    def _check_layer(self, layer: Ring, imgs: dict):
        T = self.target
        if isinstance(layer, (PrimeField, ExtensionField)):
            if T.characteristic != layer.p:
                raise RingError(f"characteristic mismatch: {layer!r} into {T!r}")
        if isinstance(layer, Rationals) and T.characteristic and not self.partial:
            raise RingError("rationals have no map into positive characteristic")
        for name in layer.gens():
            if name not in imgs and not (isinstance(layer, Cyclotomic) and layer.degree == 1):
                raise RingError(f"no image given for generator {name!r}")
        if isinstance(layer, Cyclotomic) and layer.degree > 1:
            x = imgs[layer.var]
            val = _horner([T(c) for c in cyclotomic_coeffs(layer.n)], x)
            if val:
                raise RingError(f"image of {layer.var} is not a root of Phi_{layer.n}")
        if isinstance(layer, ExtensionField) and layer.degree > 1:
            val = _horner([T(c) for c in layer.modulus], imgs[layer.var])
            if val:
                raise RingError(f"image of {layer.var} is not a root of the modulus")
        if isinstance(layer, Polynomial):
            for i, v in enumerate(layer.vars):
                if i in layer._laurent_idx and not imgs[v].is_unit():
                    raise RingError(f"image of Laurent variable {v} is not a unit")
            for i, coeffs in layer.relations:
                x = imgs[layer.vars[i]]
                rhs = T(0)
                for j, c in enumerate(coeffs):
                    rhs = rhs + self._apply(layer.base, c) * x ** j
                if x ** len(coeffs) != rhs:
                    raise RingError(f"image of {layer.vars[i]} violates its relation")

    def _apply(self, ring: Ring, rep) -> RingValue:
        T = self.target
        imgs = self.image_map
        if isinstance(ring, (Integers, PrimeField)):
            return T(int(rep))
        if isinstance(ring, Rationals):
            return T(rep.numerator) / T(rep.denominator)
        if isinstance(ring, ExtensionField):
            x = imgs.get(ring.var, T(0))
            return _horner([T(int(c)) for c in rep], x)
        if isinstance(ring, Cyclotomic):
            x = imgs[ring.var] if ring.degree > 1 else T(1 if ring.n == 1 else -1)
            return _horner([self._apply(ring.base, c) for c in rep], x)
        if isinstance(ring, Polynomial):
            total = T(0)
            xs = [imgs[v] for v in ring.vars]
            for e, c in rep:
                term = self._apply(ring.base, c)
                for x, k in zip(xs, e):
                    if k:
                        term = term * x ** k
                total = total + term
            return total
        if isinstance(ring, FractionField):
            return self._apply(ring.base, rep[0]) / self._apply(ring.base, rep[1])
        raise RingError(f"cannot map values of {ring!r}")

    def __call__(self, a: RingValue | int) -> RingValue:
        if not isinstance(a, RingValue):
            a = self.source(a)
        if a.ring != self.source:
            raise DescriptorMismatch(f"{a.ring!r} is not the source {self.source!r}")
        return self._apply(self.source, a.rep)

    def compose(self, first: "RingMorphism") -> "RingMorphism":
        """``self after first``."""
        if first.target != self.source:
            raise DescriptorMismatch("morphisms are not composable")
        return RingMorphism(first.source, self.target, tuple((n, self(v)) for n, v in first.images), self.partial or first.partial)


def apply_morphism(phi: RingMorphism, a: RingValue) -> RingValue:
    return phi(a)


def _horner(coeffs: list[RingValue], x: RingValue) -> RingValue:
    acc = coeffs[-1] if coeffs else x.ring(0)
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def field_of_fractions(ring: Ring) -> tuple[Ring, RingMorphism]:
    """A field containing ``ring`` together with the inclusion map.

    Supported: fields, the integers, cyclotomic rings over the integers and
    univariate polynomial rings over any of these.
    """
    if ring.is_field:
        return ring, RingMorphism.identity(ring)
    if isinstance(ring, Integers):
        K: Ring = Rationals()
    elif isinstance(ring, Cyclotomic) and isinstance(ring.base, Integers):
        K = Cyclotomic(ring.n, Rationals(), ring.var)
    elif isinstance(ring, Polynomial) and ring.is_univariate:
        inner, _ = field_of_fractions(ring.base)
        K = FractionField(Polynomial(ring.vars, inner))
    else:
        raise RingError(f"no fraction field available for {ring!r}")
    images = {}
    for layer in ring.tower():
        for name in layer.gens():
            images[name] = K.gen(name)
    return K, RingMorphism.from_images(ring, K, images)
