"""Zeta elements of finitely presented algebras over finite fields.

Everything here works with small finite fields encoded as integers
``0 <= x < q`` (base-p digits of the polynomial representative) and numpy
lookup tables for the field operations.
"""

from __future__ import annotations

import itertools
import json
import os
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .enveloping import NCPolynomial, NCPresentation, _solve, center_scan
from .rings import ExtensionField, PrimeField, Ring, RingMorphism, find_irreducible, is_prime


class ZetaError(ValueError):
    pass


class BudgetExceeded(ZetaError):
    pass


@dataclass(frozen=True)
class Budget:
    points_field: int = 10_000  # largest q^k for the 1-dim enumeration
    matrix_field: int = 49  # largest q^k for the matrix search
    max_dim: int = 3
    candidates: int = 150_000  # largest affine family or centralizer enumerated in one step

    @classmethod
    def from_env(cls, **overrides) -> "Budget":
        data = {}
        raw = os.environ.get("TWISTLIE_BUDGET")
        if raw:
            data = json.loads(raw)
            unknown = set(data) - set(cls.__dataclass_fields__)
            if unknown:
                raise ZetaError(f"unknown budget fields {sorted(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**{k: int(v) for k, v in data.items()})


# ---------------------------------------------------------------------------
# finite fields as lookup tables


def _polymulmod(a, b, mod, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    d = len(mod) - 1
    for s in range(len(out) - 1, d - 1, -1):
        c = out[s]
        if c:
            for j in range(d + 1):
                out[s - d + j] = (out[s - d + j] - c * mod[j]) % p
    return (out + [0] * d)[:d]


class GF:
    """GF(p^k) with add/mul tables; multiplication through a primitive element."""

    def __init__(self, p: int, k: int = 1):
        if not is_prime(p):
            raise ZetaError(f"{p} is not prime")
        Q = p ** k
        if Q > 4096:
            raise BudgetExceeded(f"GF({p}^{k}) is too large for table arithmetic")
        self.p, self.k, self.q = p, k, Q
        self.modulus = find_irreducible(p, k) if k > 1 else (0, 1)
        pw = p ** np.arange(k)
        digits = (np.arange(Q)[:, None] // pw[None, :]) % p
        self.digits = digits
        self.add = ((digits[:, None, :] + digits[None, :, :]) % p) @ pw
        self.neg = ((-digits) % p) @ pw
        self.sub = self.add[np.arange(Q)[:, None], self.neg[None, :]]
        exp = self._primitive_powers()
        log = np.full(Q, -1, dtype=np.int64)
        log[exp] = np.arange(Q - 1)
        la, lb = np.meshgrid(log, log, indexing="ij")
        mul = exp[(la + lb) % (Q - 1)]
        mul[(la < 0) | (lb < 0)] = 0
        self.mul = mul
        inv = exp[(-log) % (Q - 1)]
        inv[0] = 0
        self.inv = inv
        self.exp, self.log = exp, log

    def _primitive_powers(self):
        p, Q = self.p, self.q
        if Q == 2:
            return np.array([1])
        mod = list(self.modulus)
        for g in range(2, Q):
            gd = [int(x) for x in self.digits[g]]
            cur, powers = [1] + [0] * (self.k - 1), []
            for _ in range(Q - 1):
                powers.append(sum(c * p ** i for i, c in enumerate(cur)))
                cur = _polymulmod(cur, gd, mod, p)
            if len(set(powers)) == Q - 1:
                return np.array(powers)
        raise ZetaError("no primitive element found")

    def __repr__(self):
        return f"GF({self.p}^{self.k})"

    def elem(self, c: int) -> int:
        """Embed an integer through the prime field."""
        return int(c) % self.p

    def power(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        return int(self.exp[(self.log[a] * e) % (self.q - 1)])

    def fmt(self, x: int) -> str:
        if self.k == 1:
            return str(int(x))
        ds = [int(d) for d in self.digits[x]]
        terms = []
        for i in range(len(ds) - 1, -1, -1):
            c = ds[i]
            if not c:
                continue
            mon = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
            terms.append(str(c) if not mon else (mon if c == 1 else f"{c}*{mon}"))
        return " + ".join(terms) or "0"

    # matrices ---------------------------------------------------------------

    def matmul(self, A, B):
        if self.k == 1:
            return (A @ B) % self.p
        prod = self.mul[A[:, :, None], B[None, :, :]]
        out = prod[:, 0, :]
        for j in range(1, prod.shape[1]):
            out = self.add[out, prod[:, j, :]]
        return out

    def identity(self, n: int):
        return np.eye(n, dtype=np.int64)

    def rref(self, M):
        M = np.array(M, dtype=np.int64, copy=True)
        if M.ndim != 2 or M.size == 0:
            return M.reshape(0, M.shape[1] if M.ndim == 2 else 0), []
        R, C = M.shape
        piv, r = [], 0
        for c in range(C):
            if r == R:
                break
            nz = np.nonzero(M[r:, c])[0]
            if not len(nz):
                continue
            i = r + nz[0]
            if i != r:
                M[[r, i]] = M[[i, r]]
            M[r] = self.mul[self.inv[M[r, c]], M[r]]
            f = M[:, c].copy()
            f[r] = 0
            rows = np.nonzero(f)[0]
            if len(rows):
                M[rows] = self.sub[M[rows], self.mul[f[rows][:, None], M[r][None, :]]]
            piv.append(c)
            r += 1
        return M[:r], piv

    def rank(self, M) -> int:
        M = np.asarray(M)
        if M.size == 0:
            return 0
        return len(self.rref(M)[1])

    def solve_affine(self, A, b):
        """``A x = b``: ``(particular, kernel basis)`` or ``None`` when inconsistent."""
        A = np.asarray(A, dtype=np.int64)
        C = A.shape[1]
        if A.shape[0] == 0:
            basis = [np.eye(C, dtype=np.int64)[i] for i in range(C)]
            return np.zeros(C, dtype=np.int64), basis
        aug = np.concatenate([A, np.asarray(b, dtype=np.int64)[:, None]], axis=1)
        R, piv = self.rref(aug)
        if C in piv:
            return None
        x = np.zeros(C, dtype=np.int64)
        for i, c in enumerate(piv):
            x[c] = R[i, C]
        basis = []
        for f in (c for c in range(C) if c not in piv):
            v = np.zeros(C, dtype=np.int64)
            v[f] = 1
            for i, c in enumerate(piv):
                v[c] = self.neg[R[i, f]]
            basis.append(v)
        return x, basis

    def nullspace(self, A, ncols: int):
        A = np.asarray(A, dtype=np.int64).reshape(-1, ncols)
        return self.solve_affine(A, np.zeros(A.shape[0], dtype=np.int64))[1]

    # univariate polynomials, coefficient lists low degree first -------------

    def poly_eval(self, coeffs, xs):
        acc = np.zeros_like(xs) + coeffs[-1]
        for c in reversed(coeffs[:-1]):
            acc = self.add[self.mul[acc, xs], c]
        return acc

    def roots(self, coeffs) -> list[int]:
        xs = np.arange(self.q)
        return [int(x) for x in np.nonzero(self.poly_eval(list(coeffs), xs) == 0)[0]]

    def poly_mul(self, a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = int(self.add[out[i + j], self.mul[x, y]])
        return out


# ---------------------------------------------------------------------------
# presentations compiled to integer data


@dataclass(frozen=True)
class CompiledPresentation:
    """Relations ``sum c_w w = 0`` with coefficients in GF(p) as integers."""

    p: int
    labels: tuple
    relations: tuple  # tuple of tuples of (word, coeff)

    @property
    def ngens(self) -> int:
        return len(self.labels)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "generators": list(self.labels),
            "relations": [[[list(w), c] for w, c in rel] for rel in self.relations],
        }


def _rep_int(v, p: int) -> int:
    rep = v.rep if hasattr(v, "rep") else v
    return int(rep) % p


def compile_presentation(P, p: int | None = None) -> CompiledPresentation:
    """Accepts a compiled presentation or an NCPresentation over a prime field."""
    if isinstance(P, CompiledPresentation):
        return P
    if not isinstance(P.ring, PrimeField):
        raise ZetaError(f"reduce the presentation to a prime field first (got {P.ring!r})")
    p = P.ring.p
    rels = []
    for r in P.relations():
        terms = tuple(sorted((w, _rep_int(c, p)) for w, c in r.as_dict().items() if _rep_int(c, p)))
        if terms:
            rels.append(terms)
    return CompiledPresentation(p, tuple(P.labels), tuple(rels))


def compile_relations(p: int, labels, relations) -> CompiledPresentation:
    """From NCPolynomials (or ``{word: int}`` dicts) over GF(p)."""
    rels = []
    for r in relations:
        items = r.as_dict().items() if isinstance(r, NCPolynomial) else r.items()
        terms = tuple(sorted((tuple(w), _rep_int(c, p)) for w, c in items if _rep_int(c, p)))
        if terms:
            rels.append(terms)
    return CompiledPresentation(p, tuple(labels), tuple(rels))


def reduce_presentation(P: NCPresentation, p: int, images: dict) -> NCPresentation:
    """Specialize the coefficient ring into GF(p) (rationals reduced mod p)."""
    F = PrimeField(p)
    phi = RingMorphism.from_images(P.ring, F, images, partial=True)
    return P.map_coefficients(phi)


# ---------------------------------------------------------------------------
# field spec


@dataclass(frozen=True)
class FqSpec:
    p: int
    d: int = 1
    xi: int | None = None
    n: int | None = None

    def __post_init__(self):
        if not is_prime(self.p) or self.d < 1:
            raise ZetaError("need a prime p and d >= 1")
        if self.xi is not None:
            if self.d != 1:
                raise ZetaError("xi is given as an integer only over prime fields")
            if self.n is None or (self.q - 1) % self.n:
                raise ZetaError(f"n={self.n} does not divide q-1={self.q - 1}")
            x = self.xi % self.p
            order = next((e for e in range(1, self.q) if pow(x, e, self.p) == 1), None)
            if order != self.n:
                raise ZetaError(f"{self.xi} has order {order} in GF({self.p}), not {self.n}")

    @property
    def q(self) -> int:
        return self.p ** self.d

    def field(self, k: int = 1) -> GF:
        return GF(self.p, self.d * k)


# ---------------------------------------------------------------------------
# evaluation


def _word_product(F: GF, w, mats, N, cache):
    if w in cache:
        return cache[w]
    if not w:
        out = F.identity(N)
    else:
        out = F.matmul(_word_product(F, w[:-1], mats, N, cache), mats[w[-1]])
    cache[w] = out
    return out


def evaluate(F: GF, terms, mats, N: int, cache=None):
    cache = {} if cache is None else cache
    acc = np.zeros((N, N), dtype=np.int64)
    for w, c in terms:
        acc = F.add[acc, F.mul[F.elem(c), _word_product(F, w, mats, N, cache)]]
    return acc


def relations_hold(F: GF, C: CompiledPresentation, mats) -> bool:
    N = mats[0].shape[0] if mats else 1
    cache = {}
    return all(not evaluate(F, rel, mats, N, cache).any() for rel in C.relations)


# ---------------------------------------------------------------------------
# one-dimensional points


@dataclass(frozen=True)
class CharacterPoint:
    values: tuple

    def matrices(self):
        return [np.array([[v]], dtype=np.int64) for v in self.values]


def _scalar_word(F: GF, w, grids):
    acc = np.ones_like(grids[0]) if grids else np.ones(1, dtype=np.int64)
    for g in w:
        acc = F.mul[acc, grids[g]]
    return acc


def one_dim_points(P, F: GF, budget: Budget | None = None) -> list[CharacterPoint]:
    """All points of the commutativized relations over ``F``.

    The last generator is solved for from the relations that are linear in
    it; the others are enumerated as numpy grids.
    """
    C = compile_presentation(P)
    if C.p != F.p:
        raise ZetaError("characteristic mismatch")
    budget = budget or Budget.from_env()
    Q, g = F.q, C.ngens
    if Q > budget.points_field:
        raise BudgetExceeded(f"q^k = {Q} exceeds the point budget {budget.points_field}")
    if g == 0:
        ok = all(sum(F.elem(c) for w, c in rel) % F.p == 0 for rel in C.relations)
        return [CharacterPoint(())] if ok else []
    if Q ** (g - 1) > 4_000_000:
        raise BudgetExceeded(f"{Q}^{g - 1} grid points exceed the array budget")
    z = g - 1
    idx = np.indices((Q,) * (g - 1)).reshape(g - 1, -1) if g > 1 else np.zeros((0, 1), dtype=np.int64)
    grids = [idx[i] for i in range(g - 1)]
    size = idx.shape[1]
    if any(w.count(z) > 1 for rel in C.relations for w, _ in rel):
        return _points_by_grid(C, F, grids, size)
    A, B = [], []
    for rel in C.relations:
        a = np.zeros(size, dtype=np.int64)
        b = np.zeros(size, dtype=np.int64)
        for w, c in rel:
            rest = tuple(x for x in w if x != z)
            val = F.mul[F.elem(c), _scalar_word(F, rest, grids)]
            if len(rest) == len(w):
                a = F.add[a, val]
            else:
                b = F.add[b, val]
        A.append(a)
        B.append(b)
    points = []
    if not C.relations:
        mask_free = np.ones(size, dtype=bool)
        solved = np.zeros(size, dtype=bool)
        zval = np.zeros(size, dtype=np.int64)
    else:
        A, B = np.array(A), np.array(B)
        has = (B != 0).any(axis=0)
        first = np.argmax(B != 0, axis=0)
        cols = np.arange(size)
        zval = F.mul[F.neg[A[first, cols]], F.inv[B[first, cols]]]
        resid = F.add[A, F.mul[B, zval[None, :]]]
        solved = has & ~(resid != 0).any(axis=0)
        mask_free = ~has & ~(A != 0).any(axis=0)
    for i in np.nonzero(solved)[0]:
        points.append(tuple(int(gr[i]) for gr in grids) + (int(zval[i]),))
    for i in np.nonzero(mask_free)[0]:
        head = tuple(int(gr[i]) for gr in grids)
        points.extend(head + (v,) for v in range(Q))
    return [CharacterPoint(t) for t in sorted(points)]


def _points_by_grid(C, F, grids, size):
    Q = F.q
    points = []
    for v in range(Q):
        full = grids + [np.full(size, v, dtype=np.int64)]
        ok = np.ones(size, dtype=bool)
        for rel in C.relations:
            acc = np.zeros(size, dtype=np.int64)
            for w, c in rel:
                acc = F.add[acc, F.mul[F.elem(c), _scalar_word(F, w, full)]]
            ok &= acc == 0
        points.extend(tuple(int(gr[i]) for gr in grids) + (v,) for i in np.nonzero(ok)[0])
    return [CharacterPoint(t) for t in sorted(points)]


def _ring_tables(p: int, k: int):
    """Add/mul tables built from the ring layer, independent of ``GF``."""
    R: Ring = PrimeField(p) if k == 1 else ExtensionField(p, find_irreducible(p, k))
    if k == 1:
        elems = list(range(p))
        enc = {e: e for e in elems}
    else:
        elems = R.elements()
        enc = {e: i for i, e in enumerate(elems)}
    Q = len(elems)
    add = np.zeros((Q, Q), dtype=np.int64)
    mul = np.zeros((Q, Q), dtype=np.int64)
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            add[i, j] = enc[R.add(x, y)]
            mul[i, j] = enc[R.mul(x, y)]
    return add, mul


def one_dim_points_oracle(P, p: int, k: int = 1) -> list[tuple]:
    """Plain exhaustive loop over every generator value, with ring-layer tables."""
    C = compile_presentation(P)
    add, mul = _ring_tables(p, k)
    Q, g = p ** k, C.ngens
    if Q ** g > 50_000_000:
        raise BudgetExceeded("oracle enumeration too large")
    out = []
    if g == 0:
        return [()] if all(sum(c for _, c in rel) % p == 0 for rel in C.relations) else []
    rest = np.indices((Q,) * (g - 1)).reshape(g - 1, -1) if g > 1 else np.zeros((0, 1), dtype=np.int64)
    for x0 in range(Q):
        vals = [np.full(rest.shape[1], x0, dtype=np.int64)] + [rest[i] for i in range(g - 1)]
        ok = np.ones(rest.shape[1], dtype=bool)
        for rel in C.relations:
            acc = np.zeros(rest.shape[1], dtype=np.int64)
            for w, c in rel:
                term = np.full(rest.shape[1], c % p, dtype=np.int64)
                for letter in w:
                    term = mul[term, vals[letter]]
                acc = add[acc, term]
            ok &= acc == 0
        for i in np.nonzero(ok)[0]:
            out.append((x0,) + tuple(int(x) for x in rest[:, i]))
    return sorted(out)


# ---------------------------------------------------------------------------
# Ext^1


def _inner_rows(F: GF, S, T):
    """Matrix of c -> (S(g) c - c T(g))_g, columns indexed by entries of c."""
    a, b = S[0].shape[0], T[0].shape[0]
    cols = []
    for i in range(a):
        for j in range(b):
            c = np.zeros((a, b), dtype=np.int64)
            c[i, j] = 1
            img = [F.sub[F.matmul(s, c), F.matmul(c, t)].ravel() for s, t in zip(S, T)]
            cols.append(np.concatenate(img) if img else np.zeros(0, dtype=np.int64))
    return np.array(cols, dtype=np.int64).T.reshape(-1, a * b)


def _derivation_rows(F: GF, C: CompiledPresentation, S, T):
    """Matrix of D -> (D(r))_r with D(uv) = D(u)T(v) + S(u)D(v)."""
    a, b = S[0].shape[0], T[0].shape[0]
    g = C.ngens
    nvar = g * a * b
    cs, ct = {}, {}
    blocks = []
    for rel in C.relations:
        M = np.zeros((a * b, nvar), dtype=np.int64)
        for w, c in rel:
            cc = F.elem(c)
            for t, letter in enumerate(w):
                left = _word_product(F, w[:t], S, a, cs)
                right = _word_product(F, w[t + 1 :], T, b, ct)
                # (left D right)_{ik} = sum left_ij D_jl right_lk
                K = F.mul[left[:, None, :, None], right.T[None, :, None, :]].reshape(a * b, a * b)
                K = F.mul[cc, K]
                sl = slice(letter * a * b, (letter + 1) * a * b)
                M[:, sl] = F.add[M[:, sl], K]
        blocks.append(M)
    if not blocks:
        return np.zeros((0, nvar), dtype=np.int64)
    return np.concatenate(blocks, axis=0)


@dataclass(frozen=True)
class ExtReport:
    cocycles: int
    inner: int

    @property
    def dimension(self) -> int:
        return self.cocycles - self.inner


def ext1_report(P, S, T, F: GF) -> ExtReport:
    C = compile_presentation(P)
    S = S.matrices() if isinstance(S, CharacterPoint) else [np.asarray(m) for m in S]
    T = T.matrices() if isinstance(T, CharacterPoint) else [np.asarray(m) for m in T]
    if len(S) != C.ngens or len(T) != C.ngens:
        raise ZetaError("one matrix per generator is required")
    a, b = S[0].shape[0], T[0].shape[0]
    nvar = C.ngens * a * b
    cocycles = nvar - F.rank(_derivation_rows(F, C, S, T))
    inner = F.rank(_inner_rows(F, S, T))
    return ExtReport(cocycles, inner)


def ext1_dim(P, S, T, F: GF) -> int:
    """dim Ext^1 as (S,T)-derivations killing the relations modulo inner ones."""
    return ext1_report(P, S, T, F).dimension


# ---------------------------------------------------------------------------
# central data


def univariate_central(P: NCPresentation, label: str, max_degree: int) -> list[int] | None:
    """Lowest-degree monic ``f`` with ``f(label)`` central, as GF(p) integers (no constant term)."""
    if not isinstance(P.ring, PrimeField):
        raise ZetaError("univariate_central expects a presentation over a prime field")
    i = P.index(label)
    gens = P.gens()
    from .enveloping import normal_form

    for m in range(1, max_degree + 1):
        support = [(i,) * j for j in range(1, m + 1)]

        def pieces(w):
            x = NCPolynomial.word(P.ring, w)
            return [normal_form(P, x * g - g * x) for g in gens]

        _, _, basis = _solve(P, support, pieces)
        for vec in basis:
            vals = [_rep_int(v, P.ring.p) for v in vec]
            if vals[-1]:
                lead = pow(vals[-1], -1, P.ring.p)
                return [0] + [v * lead % P.ring.p for v in vals]
    return None


@dataclass(frozen=True)
class CentralData:
    """Central elements (for characters) and per-generator central polynomials."""

    elements: tuple  # compiled terms of non-constant central elements
    hints: tuple  # per generator: coefficient list of f with f(x) central, or None
    texts: tuple

    @classmethod
    def compute(cls, P: NCPresentation, max_degree: int | None = None) -> "CentralData":
        hints = tuple(univariate_central(P, lab, 6) for lab in P.labels)
        deg = max_degree or max((len(h) - 1 for h in hints if h), default=2)
        scan = center_scan(P, deg)
        p = P.ring.p
        elements, texts = [], []
        for e in scan.basis:
            terms = tuple(sorted((w, _rep_int(c, p)) for w, c in e.as_dict().items() if _rep_int(c, p)))
            if any(w for w, _ in terms):
                elements.append(terms)
                texts.append(e.fmt(P.labels))
        return cls(tuple(elements), hints, tuple(texts))


def central_character(F: GF, central: CentralData, mats) -> tuple | None:
    """Scalars of the central elements on the module, or None if one is not scalar."""
    N = mats[0].shape[0]
    cache = {}
    out = []
    for terms in central.elements:
        M = evaluate(F, terms, mats, N, cache)
        c = M[0, 0]
        if (M != F.mul[c, np.eye(N, dtype=np.int64)]).any():
            return None
        out.append(int(c))
    return tuple(out)


# ---------------------------------------------------------------------------
# simple modules


@dataclass(frozen=True)
class SimpleModuleRep:
    dim: int
    matrices: tuple  # per generator, rows of integers
    character: tuple

    def arrays(self):
        return [np.array(m, dtype=np.int64).reshape(self.dim, self.dim) for m in self.matrices]

    def to_json(self, F: GF | None = None) -> dict:
        fmt = F.fmt if F else str
        return {
            "dim": self.dim,
            "matrices": [[[fmt(x) for x in row] for row in m] for m in self.matrices],
            "character": [fmt(x) for x in self.character],
        }


def _freeze(mats) -> tuple:
    return tuple(tuple(tuple(int(x) for x in row) for row in m) for m in mats)


def absolutely_irreducible(F: GF, mats) -> bool:
    """Burnside: the generated algebra is all of Mat_N."""
    N = mats[0].shape[0]
    if N == 1:
        return True
    basis = F.identity(N).reshape(1, -1)
    layer = [F.identity(N)]
    while layer:
        new = [F.matmul(X, G) for X in layer for G in mats]
        stack = np.concatenate([basis] + [Y.reshape(1, -1) for Y in new], axis=0)
        _, piv = F.rref(stack.T)
        if len(piv) == N * N:
            return True
        keep = [c - len(basis) for c in piv if c >= len(basis)]
        if not keep:
            return False
        basis = stack[piv]
        layer = [new[i] for i in keep]
    return False


def isomorphic(F: GF, A, B) -> bool:
    """A nonzero intertwiner X with A_g X = X B_g (enough for simples of equal dimension)."""
    a, b = A[0].shape[0], B[0].shape[0]
    if a != b:
        return False
    rows = _inner_rows(F, A, B)
    return F.rank(rows) < a * b


def _trace_key(F: GF, mats, length: int) -> tuple:
    N = mats[0].shape[0]
    cache = {}
    key = []
    for L in range(1, length + 1):
        for w in itertools.product(range(len(mats)), repeat=L):
            M = _word_product(F, w, mats, N, cache)
            key.append(int(np.trace(M) % F.p) if F.k == 1 else _gf_trace(F, M))
    return tuple(key)


def _gf_trace(F: GF, M) -> int:
    acc = 0
    for i in range(M.shape[0]):
        acc = int(F.add[acc, M[i, i]])
    return acc


# rational canonical forms -----------------------------------------------


def _monic_batches(F: GF, d: int, chunk: int = 1 << 18):
    """All monic polys of degree d as arrays (batch, d) of lower coefficients."""
    total = F.q ** d
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk))
        yield np.stack([(idx // F.q ** i) % F.q for i in range(d)], axis=1) if d else idx[:, None][:, :0]


def _mod_batch(F: GF, f, G):
    """Remainders of the fixed poly f modulo each monic row of G (lower coeffs)."""
    B, d = G.shape
    cur = np.tile(np.array(f, dtype=np.int64), (B, 1))
    m = len(f) - 1
    for s in range(m - d, -1, -1):
        lead = cur[:, s + d].copy()
        cur[:, s + d] = 0
        for j in range(d):
            cur[:, s + j] = F.sub[cur[:, s + j], F.mul[lead, G[:, j]]]
    return cur[:, :d]


def _divisors_of(F: GF, f, d: int):
    """Monic divisors of degree d of f (f low-first, monic)."""
    if d > len(f) - 1:
        return []
    out = []
    for G in _monic_batches(F, d):
        R = _mod_batch(F, f, G)
        ok = ~(R != 0).any(axis=1)
        out.extend(tuple(int(x) for x in row) + (1,) for row in G[ok])
    return out


def _candidate_minpolys(F: GF, hint, d: int):
    """Monic g of degree d dividing hint - alpha for some alpha (all monic g if no hint)."""
    out = []
    for G in _monic_batches(F, d):
        if hint is None:
            out.extend(tuple(int(x) for x in row) + (1,) for row in G)
            continue
        if len(hint) - 1 < d:
            continue
        R = _mod_batch(F, hint, G)
        ok = ~(R[:, 1:] != 0).any(axis=1) if d > 1 else np.ones(len(G), dtype=bool)
        out.extend(tuple(int(x) for x in row) + (1,) for row in G[ok])
    return out


def _companion(F: GF, g):
    d = len(g) - 1
    M = np.zeros((d, d), dtype=np.int64)
    for i in range(1, d):
        M[i, i - 1] = 1
    for i in range(d):
        M[i, d - 1] = F.neg[g[i]]
    return M


def _chains(F: GF, rest: int, top):
    if rest == 0:
        yield []
        return
    for e in range(1, min(rest, len(top) - 1) + 1):
        for h in _divisors_of(F, list(top), e):
            for c in _chains(F, rest - e, h):
                yield c + [h]


def rcf_representatives(F: GF, N: int, hint=None):
    """One matrix per similarity class whose minimal polynomial divides hint - alpha.

    Split semisimple classes are returned diagonal.
    """
    out = []
    for d in range(1, N + 1):
        for g in _candidate_minpolys(F, hint, d):
            for chain in _chains(F, N - d, g):
                factors = chain + [list(g)]
                rts = F.roots(list(g))
                if len(rts) == d:
                    diag = sorted(r for f in factors for r in F.roots(f))
                    out.append(np.diag(np.array(diag, dtype=np.int64)))
                else:
                    M = np.zeros((N, N), dtype=np.int64)
                    pos = 0
                    for f in factors:
                        k = len(f) - 1
                        M[pos : pos + k, pos : pos + k] = _companion(F, f)
                        pos += k
                    out.append(M)
    return out


# search -----------------------------------------------------------------


def _linear_space(F: GF, C: CompiledPresentation, fixed: dict, h: int, N: int):
    """Affine space of matrices for generator h, from relations linear in h.

    Returns (particular, basis) or None if some relation among fixed generators fails.
    """
    rows, rhs = [], []
    cache = {}
    known = set(fixed) | {h}
    for rel in C.relations:
        letters = {x for w, _ in rel for x in w}
        if not letters <= known:
            continue
        if any(w.count(h) > 1 for w, _ in rel):
            continue
        L = np.zeros((N * N, N * N), dtype=np.int64)
        const = np.zeros((N, N), dtype=np.int64)
        for w, c in rel:
            cc = F.elem(c)
            if h not in w:
                const = F.add[const, F.mul[cc, _word_product(F, w, fixed, N, cache)]]
                continue
            t = w.index(h)
            A = _word_product(F, w[:t], fixed, N, cache)
            B = _word_product(F, w[t + 1 :], fixed, N, cache)
            K = F.mul[A[:, None, :, None], B.T[None, :, None, :]].reshape(N * N, N * N)
            L = F.add[L, F.mul[cc, K]]
        if h not in letters:
            if const.any():
                return None
            continue
        rows.append(L)
        rhs.append(F.neg[const.ravel()])
    if not rows:
        return np.zeros(N * N, dtype=np.int64), [np.eye(N * N, dtype=np.int64)[i] for i in range(N * N)]
    return F.solve_affine(np.concatenate(rows), np.concatenate(rhs))


def _enumerate_space(F: GF, space, N: int):
    x0, basis = space
    d = len(basis)
    if d == 0:
        return x0[None, :]
    coeffs = np.indices((F.q,) * d).reshape(d, -1).T
    acc = np.tile(x0, (coeffs.shape[0], 1))
    for j, v in enumerate(basis):
        acc = F.add[acc, F.mul[coeffs[:, j][:, None], v[None, :]]]
    return acc


def _batch_matmul(F: GF, A, B):
    """Batched products of stacks (G, N, N) (either side may be a single matrix)."""
    A = A if A.ndim == 3 else A[None]
    B = B if B.ndim == 3 else B[None]
    if F.k == 1:
        return np.matmul(A, B) % F.p
    prod = F.mul[A[:, :, :, None], B[:, None, :, :]]
    out = prod[:, :, 0, :]
    for j in range(1, prod.shape[2]):
        out = F.add[out, prod[:, :, j, :]]
    return out


def _batch_det_adj(F: GF, D):
    """Determinants and adjugates of a stack of N x N matrices, N <= 3."""
    G, N, _ = D.shape
    if N == 1:
        return D[:, 0, 0], np.ones_like(D)
    if N == 2:
        a, b, c, d = D[:, 0, 0], D[:, 0, 1], D[:, 1, 0], D[:, 1, 1]
        det = F.sub[F.mul[a, d], F.mul[b, c]]
        adj = np.stack([np.stack([d, F.neg[b]], 1), np.stack([F.neg[c], a], 1)], 1)
        return det, adj
    if N != 3:
        raise ZetaError("batched inverses are implemented for N <= 3")
    adj = np.zeros_like(D)
    for i in range(3):
        for j in range(3):
            r = [x for x in range(3) if x != j]
            c = [x for x in range(3) if x != i]
            m = F.sub[F.mul[D[:, r[0], c[0]], D[:, r[1], c[1]]], F.mul[D[:, r[0], c[1]], D[:, r[1], c[0]]]]
            adj[:, i, j] = m if (i + j) % 2 == 0 else F.neg[m]
    det = np.zeros(G, dtype=np.int64)
    for k in range(3):
        det = F.add[det, F.mul[D[:, 0, k], adj[:, k, 0]]]
    return det, adj


def centralizer_group(F: GF, X, limit: int):
    """All invertible matrices commuting with X with their inverses, or None past ``limit``."""
    N = X.shape[0]
    rows = _inner_rows(F, [X], [X])
    basis = F.nullspace(rows, N * N)
    if F.q ** len(basis) > limit:
        return None
    coeffs = np.indices((F.q,) * len(basis)).reshape(len(basis), -1).T
    acc = np.zeros((coeffs.shape[0], N * N), dtype=np.int64)
    for j, v in enumerate(basis):
        acc = F.add[acc, F.mul[coeffs[:, j][:, None], v[None, :]]]
    # conjugation ignores scalars: keep matrices whose first nonzero entry is 1
    first = acc[np.arange(len(acc)), np.argmax(acc != 0, axis=1)]
    D = acc[first == 1].reshape(-1, N, N)
    det, adj = _batch_det_adj(F, D)
    ok = det != 0
    D, det, adj = D[ok], det[ok], adj[ok]
    Dinv = F.mul[F.inv[det][:, None, None], adj]
    return D, Dinv


def _row_keys(F: GF, rows):
    w = F.q ** np.arange(rows.shape[1], dtype=np.int64)
    return rows @ w


def orbit_representatives(F: GF, cands, group, N: int):
    """First member of each orbit of the rows of ``cands`` under conjugation by ``group``."""
    if group is None or len(cands) <= 1:
        return cands
    if F.q ** (N * N) >= 2 ** 62:
        raise BudgetExceeded("matrix keys overflow 64 bits")
    D, Dinv = group
    keys = _row_keys(F, cands)
    order = np.argsort(keys)
    skeys = keys[order]
    seen = np.zeros(len(cands), dtype=bool)
    reps = []
    for i in range(len(cands)):
        if seen[i]:
            continue
        reps.append(cands[i])
        orbit = _batch_matmul(F, _batch_matmul(F, D, cands[i].reshape(N, N)), Dinv).reshape(-1, N * N)
        ok = _row_keys(F, orbit)
        pos = np.clip(np.searchsorted(skeys, ok), 0, len(skeys) - 1)
        hit = skeys[pos] == ok
        seen[order[pos[hit]]] = True
        seen[i] = True
    return np.array(reps)


def _is_scalar(X) -> bool:
    return not (X != X[0, 0] * np.eye(X.shape[0], dtype=np.int64)).any()


@dataclass
class SearchResult:
    simples: list
    complete: bool
    notes: list
    tuples_checked: int = 0


class _Search:
    def __init__(self, C, F, N, central, budget):
        self.C, self.F, self.N = C, F, N
        self.central, self.budget = central, budget
        self.found: list[SimpleModuleRep] = []
        self.by_key: dict = {}
        self.complete = True
        self.notes: list[str] = []
        self.checked = 0
        self._rcf = {}

    def rcf(self, h):
        if h not in self._rcf:
            self._rcf[h] = rcf_representatives(self.F, self.N, self.central.hints[h])
        return self._rcf[h]

    def record(self, mats):
        F, N = self.F, self.N
        self.checked += 1
        if not relations_hold(F, self.C, mats):
            return
        ch = central_character(F, self.central, mats)
        if ch is None:
            # a central element is not scalar, so the module is not absolutely simple
            return
        key = (ch, _trace_key(F, mats, min(3, 2 * N)))
        group = self.by_key.setdefault(key, [])
        if any(isomorphic(F, mats, other.arrays()) for other in group):
            return
        if not absolutely_irreducible(F, mats):
            return
        rep = SimpleModuleRep(N, _freeze(mats), ch)
        group.append(rep)
        self.found.append(rep)

    def order(self):
        hinted = [i for i in range(self.C.ngens) if self.central.hints[i]]
        return hinted + [i for i in range(self.C.ngens) if i not in hinted]

    def run(self):
        self.scalar_branch({}, self.order())

    def scalar_branch(self, fixed, remaining):
        if not remaining:
            return
        h, rest = remaining[0], remaining[1:]
        for X in self.rcf(h):
            trial = dict(fixed)
            trial[h] = X
            if not self._consistent(trial):
                continue
            if _is_scalar(X):
                self.scalar_branch(trial, rest)
            else:
                group = centralizer_group(self.F, X, self.budget.candidates)
                if group is None:
                    self.notes.append("centralizer too large for orbit reduction")
                self.complete_from(trial, rest, group)

    def _consistent(self, fixed):
        cache = {}
        for rel in self.C.relations:
            if {x for w, _ in rel for x in w} <= set(fixed):
                if evaluate(self.F, rel, fixed, self.N, cache).any():
                    return False
        return True

    def complete_from(self, fixed, remaining, group):
        if not remaining:
            self.record([fixed[i] for i in range(self.C.ngens)])
            return
        spaces = {}
        for h in remaining:
            s = _linear_space(self.F, self.C, fixed, h, self.N)
            if s is None:
                return
            spaces[h] = s
        h = min(remaining, key=lambda x: (len(spaces[x][1]), remaining.index(x)))
        size = self.F.q ** len(spaces[h][1])
        if size > self.budget.candidates:
            self.complete = False
            self.notes.append(f"skipped a family of {size} candidates for {self.C.labels[h]}")
            return
        rest = [x for x in remaining if x != h]
        cands = orbit_representatives(self.F, _enumerate_space(self.F, spaces[h], self.N), group, self.N)
        for row in cands:
            trial = dict(fixed)
            trial[h] = row.reshape(self.N, self.N)
            self.complete_from(trial, rest, None)


def brute_force_simples(P, F: GF, max_dim: int, central: CentralData, budget: Budget | None = None) -> SearchResult:
    """Absolutely irreducible modules of dimension <= max_dim up to isomorphism."""
    C = compile_presentation(P)
    budget = budget or Budget.from_env()
    if max_dim > budget.max_dim:
        raise BudgetExceeded(f"dimension {max_dim} exceeds the budget {budget.max_dim}")
    simples, notes, complete, checked = [], [], True, 0
    for pt in one_dim_points(C, F, budget):
        mats = pt.matrices()
        ch = central_character(F, central, mats)
        simples.append(SimpleModuleRep(1, _freeze(mats), ch))
    if max_dim >= 2 and F.q > budget.matrix_field:
        raise BudgetExceeded(f"q^k = {F.q} exceeds the matrix-search budget {budget.matrix_field}")
    for N in range(2, max_dim + 1):
        s = _Search(C, F, N, central, budget)
        s.run()
        simples.extend(s.found)
        notes.extend(sorted(set(s.notes)))
        complete &= s.complete
        checked += s.checked
    return SearchResult(simples, complete, notes, checked)


# ---------------------------------------------------------------------------
# Ext classes and series


@dataclass(frozen=True)
class ExtClass:
    """Class of an integer matrix up to permutation of its entries."""

    entries: tuple

    @classmethod
    def of(cls, matrix) -> "ExtClass":
        return cls(tuple(sorted(int(x) for row in matrix for x in row)))

    @property
    def trace(self) -> int:
        return sum(self.entries)


def ext_matrix(P, F: GF, simples: list, N: int) -> list[list[int]]:
    size = max(N, len(simples))
    M = [[0] * size for _ in range(size)]
    for i, S in enumerate(simples):
        for j, T in enumerate(simples):
            M[i][j] = ext1_dim(P, S.arrays(), T.arrays(), F)
    return M


def trace_T(classes: Counter) -> int:
    return sum(c.trace * m for c, m in classes.items())


def series_exp(log_coeffs: list[Fraction], terms: int) -> list[Fraction]:
    """Coefficients z_0..z_terms of exp(sum_{k>=1} l_k t^k), l given from k=1."""
    l = [Fraction(0)] + [Fraction(x) for x in log_coeffs] + [Fraction(0)] * terms
    z = [Fraction(1)]
    for n in range(1, terms + 1):
        z.append(sum((k * l[k] * z[n - k] for k in range(1, n + 1)), Fraction(0)) / n)
    return z


def series_log(z: list[Fraction]) -> list[Fraction]:
    """Inverse of series_exp for z_0 = 1; returns l_1..l_terms."""
    if z[0] != 1:
        raise ZetaError("constant term must be 1")
    terms = len(z) - 1
    l = [Fraction(0)] * (terms + 1)
    for n in range(1, terms + 1):
        s = n * z[n] - sum((k * l[k] * z[n - k] for k in range(1, n)), Fraction(0))
        l[n] = s / n
    return l[1:]


@dataclass(frozen=True)
class ZetaSeries:
    terms: int
    counts: tuple  # c_1..c_terms
    coefficients: tuple  # exp(sum c_k t^k / k), degrees 0..terms

    @classmethod
    def from_counts(cls, counts) -> "ZetaSeries":
        counts = tuple(int(c) for c in counts)
        logc = [Fraction(c, k) for k, c in enumerate(counts, start=1)]
        return cls(len(counts), counts, tuple(series_exp(logc, len(counts))))

    @property
    def log_coefficients(self) -> tuple:
        return tuple(Fraction(c, k) for k, c in enumerate(self.counts, start=1))

    def round_trip(self) -> bool:
        return tuple(series_log(list(self.coefficients))) == self.log_coefficients

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coefficients]


@dataclass
class FiberCount:
    k: int
    field_size: int
    one_dim_points: int
    simples_by_dim: dict
    central_points: int
    azumaya: int
    ram_points: list  # characters
    ram_count: int  # sum of dims of simples above ramified points
    ext_classes: Counter
    trace: int
    complete: bool
    notes: list = field(default_factory=list)

    def to_json(self, F: GF | None = None) -> dict:
        fmt = F.fmt if F else str
        classes = []
        for c, m in sorted(self.ext_classes.items(), key=lambda t: t[0].entries):
            classes.append({"entries": list(c.entries), "multiplicity": m})
        return {
            "k": self.k,
            "fieldSize": self.field_size,
            "oneDimPoints": self.one_dim_points,
            "simplesByDim": {str(d): n for d, n in sorted(self.simples_by_dim.items())},
            "centralPoints": self.central_points,
            "azumaya": self.azumaya,
            "ramPoints": [[fmt(x) for x in ch] for ch in self.ram_points],
            "ramCount": self.ram_count,
            "extClasses": classes,
            "trace": self.trace,
            "complete": self.complete,
            "notes": list(self.notes),
        }


def fiber_count(P, spec: FqSpec, k: int, max_dim: int, central: CentralData,
                pi_degree: int | None = None, budget: Budget | None = None) -> FiberCount:
    budget = budget or Budget.from_env()
    F = spec.field(k)
    C = compile_presentation(P)
    notes = []
    try:
        res = brute_force_simples(C, F, max_dim, central, budget)
        simples, complete = res.simples, res.complete
        notes.extend(res.notes)
    except BudgetExceeded as exc:
        if max_dim < 2:
            raise
        res = brute_force_simples(C, F, 1, central, budget)
        simples, complete = res.simples, False
        notes.append(f"matrix search skipped: {exc}")
    N = pi_degree or max((s.dim for s in simples), default=1)
    groups: dict = {}
    for s in simples:
        groups.setdefault(s.character, []).append(s)
    azu, ram = 0, []
    for ch, ss in groups.items():
        if len(ss) == 1 and ss[0].dim == N:
            azu += 1
        else:
            ram.append(ch)
    ram.sort()
    classes: Counter = Counter()
    ram_count = 0
    for ch in ram:
        ss = sorted(groups[ch], key=lambda s: (s.dim, s.matrices))
        ram_count += sum(s.dim for s in ss)
        if len(ss) > N:
            notes.append(f"more than N={N} simples above one point; matrix enlarged")
        classes[ExtClass.of(ext_matrix(C, F, ss, N))] += 1
    if not complete:
        notes.append("counts are lower bounds")
    notes = [m if c == 1 else f"{m} (x{c})" for m, c in Counter(notes).items()]
    dims = Counter(s.dim for s in simples)
    return FiberCount(k, F.q, dims.get(1, 0), dict(dims), len(groups), azu, ram, ram_count,
                      classes, trace_T(classes), complete, notes)


@dataclass
class ZetaElement:
    spec: FqSpec
    terms: int
    fibers: list
    zeta_ram: ZetaSeries
    zeta_azu: ZetaSeries
    zeta_tangent: ZetaSeries
    log_classes: list  # per k: (Fraction(1, k), Counter of ExtClass)

    @property
    def complete(self) -> bool:
        return all(f.complete for f in self.fibers)

    def to_json(self) -> dict:
        return {
            "q": self.spec.q,
            "terms": self.terms,
            "perK": [f.to_json(self.spec.field(f.k) if f.field_size <= 4096 else None) for f in self.fibers],
            "zetaRam": self.zeta_ram.to_json(),
            "zetaAzu": self.zeta_azu.to_json(),
            "zetaTangent": self.zeta_tangent.to_json(),
            "logTangent": [
                {"coeff": str(c), "classes": [[list(e.entries), m] for e, m in sorted(cl.items(), key=lambda t: t[0].entries)]}
                for c, cl in self.log_classes
            ],
            "complete": self.complete,
        }


def zeta_element(P, spec: FqSpec, terms: int, max_dim: int, central: CentralData | None = None,
                 pi_degree: int | None = None, budget: Budget | None = None) -> ZetaElement:
    if central is None:
        if not isinstance(P, NCPresentation):
            raise ZetaError("central data is required for compiled presentations")
        central = CentralData.compute(P)
    fibers = []
    for k in range(1, terms + 1):
        f = fiber_count(P, spec, k, max_dim, central, pi_degree, budget)
        if pi_degree is None:
            # the first fibre fixes N; later fibres may be truncated searches
            pi_degree = max((d for d in f.simples_by_dim), default=1)
        fibers.append(f)
    return ZetaElement(
        spec,
        terms,
        fibers,
        ZetaSeries.from_counts([f.ram_count for f in fibers]),
        ZetaSeries.from_counts([f.azumaya for f in fibers]),
        ZetaSeries.from_counts([f.trace for f in fibers]),
        [(Fraction(1, f.k), f.ext_classes) for f in fibers],
    )


def zeta_ram(P, spec, terms, max_dim, **kw) -> ZetaSeries:
    return zeta_element(P, spec, terms, max_dim, **kw).zeta_ram


def zeta_azu(P, spec, terms, max_dim, **kw) -> ZetaSeries:
    return zeta_element(P, spec, terms, max_dim, **kw).zeta_azu


def zeta_tangent(P, spec, terms, max_dim, **kw) -> ZetaSeries:
    return zeta_element(P, spec, terms, max_dim, **kw).zeta_tangent


@dataclass(frozen=True)
class ArithmeticZeta:
    """Formal product over an explicit list of primes; nothing is evaluated."""

    factors: tuple  # (prime, ZetaElement)

    @property
    def primes(self) -> tuple:
        return tuple(p for p, _ in self.factors)

    def __len__(self):
        return len(self.factors)


def arithmetic_product(fibers) -> ArithmeticZeta:
    fibers = tuple(fibers)
    primes = [p for p, _ in fibers]
    if len(set(primes)) != len(primes):
        raise ZetaError("repeated prime in the arithmetic product")
    return ArithmeticZeta(fibers)


# ---------------------------------------------------------------------------
# the Jackson fibres


def jackson_fiber(n: int, p: int, xi: int, b: int) -> NCPresentation:
    """The shifted Jackson presentation reduced to GF(p) with xi, b specialized."""
    from .enveloping import jackson_presentation

    FqSpec(p, 1, xi, n)
    P = jackson_presentation(n, "sym", shifted=True)
    return reduce_presentation(P, p, {"xi": xi, "b": b})
