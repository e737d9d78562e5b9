"""Enveloping algebras of hom-Lie algebras as noncommutative rewrite systems.

Words are tuples of generator indices; the generator order is the index
order and words are compared graded-lexicographically.  A presentation is
a set of rules ``lhs -> rhs`` with every word of ``rhs`` below ``lhs``, so
rewriting terminates.
"""

from __future__ import annotations

import ast
import itertools
import random
from dataclasses import dataclass, field
from math import comb

from .covers import jackson_sl2, jackson_subalgebra, kummer_ring, kummer_witt_homlie
from .homlie import HomLieAlgebra
from .linalg import kernel, rank
from .rings import Ring, RingError, RingValue, field_of_fractions, parse, ring_from_json

Word = tuple[int, ...]


class EnvelopingError(ValueError):
    pass


class DegreeCapExceeded(EnvelopingError):
    pass


def word_key(w: Word):
    return (len(w), w)


# ---------------------------------------------------------------------------
# noncommutative polynomials


class NCPolynomial:
    """Sparse linear combination of words, largest word first."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms=()):
        self.ring = ring
        if isinstance(terms, dict):
            terms = terms.items()
        acc: dict = {}
        for w, c in terms:
            w = tuple(w)
            c = ring(c)
            acc[w] = acc[w] + c if w in acc else c
        items = [(w, c) for w, c in acc.items() if c]
        items.sort(key=lambda t: word_key(t[0]), reverse=True)
        self.terms = tuple(items)

    @classmethod
    def _raw(cls, ring: Ring, acc: dict) -> "NCPolynomial":
        obj = cls.__new__(cls)
        obj.ring = ring
        items = [(w, c) for w, c in acc.items() if c]
        items.sort(key=lambda t: word_key(t[0]), reverse=True)
        obj.terms = tuple(items)
        return obj

    @classmethod
    def word(cls, ring: Ring, w: Word, c=1) -> "NCPolynomial":
        return cls(ring, [(w, c)])

    @classmethod
    def scalar(cls, ring: Ring, c) -> "NCPolynomial":
        return cls(ring, [((), c)])

    def as_dict(self) -> dict:
        return dict(self.terms)

    def coefficient(self, w: Word) -> RingValue:
        for v, c in self.terms:
            if v == tuple(w):
                return c
        return self.ring(0)

    def words(self) -> list[Word]:
        return [w for w, _ in self.terms]

    def leading(self) -> tuple[Word, RingValue]:
        if not self.terms:
            raise EnvelopingError("zero polynomial has no leading word")
        return self.terms[0]

    @property
    def degree(self) -> int:
        return max((len(w) for w, _ in self.terms), default=-1)

    def _other(self, other) -> "NCPolynomial":
        if isinstance(other, NCPolynomial):
            if other.ring != self.ring:
                raise EnvelopingError("polynomials over different rings")
            return other
        return NCPolynomial.scalar(self.ring, other)

    def __add__(self, other):
        o = self._other(other)
        acc = dict(self.terms)
        for w, c in o.terms:
            acc[w] = acc[w] + c if w in acc else c
        return NCPolynomial._raw(self.ring, acc)

    __radd__ = __add__

    def __neg__(self):
        return NCPolynomial._raw(self.ring, {w: -c for w, c in self.terms})

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if isinstance(other, NCPolynomial):
            o = self._other(other)
            acc: dict = {}
            for w1, c1 in self.terms:
                for w2, c2 in o.terms:
                    w = w1 + w2
                    c = c1 * c2
                    acc[w] = acc[w] + c if w in acc else c
            return NCPolynomial._raw(self.ring, acc)
        c = self.ring(other)
        return NCPolynomial._raw(self.ring, {w: x * c for w, x in self.terms})

    def __rmul__(self, other):
        # scalars commute with everything
        return self * other

    def __pow__(self, k: int):
        out = NCPolynomial.scalar(self.ring, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, NCPolynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def map_coefficients(self, f, ring: Ring) -> "NCPolynomial":
        return NCPolynomial._raw(ring, {w: f(c) for w, c in self.terms})

    def fmt(self, labels) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.terms:
            mono = "*".join(labels[i] for i in w)
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return self.fmt([f"x{i}" for i in range(1 + max((max(w, default=0) for w in self.words()), default=0))])


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class NCPresentation:
    """Generators ``labels`` (listed in increasing order) and rewrite rules."""

    ring: Ring
    labels: tuple[str, ...]
    rules: tuple  # ((lhs word, NCPolynomial rhs), ...)
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        seen = set()
        for lhs, rhs in self.rules:
            if lhs in seen:
                raise EnvelopingError(f"duplicate rule for {self.fmt_word(lhs)}")
            seen.add(lhs)
            if not lhs:
                raise EnvelopingError("a rule cannot rewrite the empty word")
            for w in rhs.words():
                if word_key(w) >= word_key(lhs):
                    raise EnvelopingError(
                        f"rule {self.fmt_word(lhs)} -> {rhs.fmt(self.labels)} does not decrease"
                    )
        object.__setattr__(self, "_rule_map", dict(self.rules))
        object.__setattr__(self, "_lengths", sorted({len(l) for l, _ in self.rules}))

    @classmethod
    def from_relations(cls, ring: Ring, labels, relations) -> "NCPresentation":
        """Orient each relation at its leading word (the coefficient must be a unit)."""
        return cls(ring, tuple(labels), tuple(orient(r) for r in relations if r))

    @property
    def ngens(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        if isinstance(label, int):
            return label
        try:
            return self.labels.index(label)
        except ValueError:
            raise EnvelopingError(f"unknown generator {label!r}") from None

    def gen(self, label) -> NCPolynomial:
        return NCPolynomial.word(self.ring, (self.index(label),))

    def gens(self) -> list[NCPolynomial]:
        return [self.gen(i) for i in range(self.ngens)]

    def word(self, *labels) -> NCPolynomial:
        return NCPolynomial.word(self.ring, tuple(self.index(x) for x in labels))

    def scalar(self, c) -> NCPolynomial:
        return NCPolynomial.scalar(self.ring, c)

    def parse(self, text: str) -> NCPolynomial:
        """Expression in generator labels and ring generators, ``*`` noncommutative."""
        try:
            tree = ast.parse(text.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise EnvelopingError(f"cannot parse {text!r}") from exc
        return _NCEval(self).visit(tree.body)

    def fmt_word(self, w: Word) -> str:
        return "*".join(self.labels[i] for i in w) if w else "1"

    def fmt(self, x: NCPolynomial) -> str:
        return x.fmt(self.labels)

    def relations(self) -> list[NCPolynomial]:
        return [NCPolynomial.word(self.ring, l) - r for l, r in self.rules]

    def rule(self, lhs: Word) -> NCPolynomial | None:
        return self._rule_map.get(tuple(lhs))

    def rule_dict(self) -> dict:
        return dict(self._rule_map)

    def map_coefficients(self, phi) -> "NCPresentation":
        R = phi.target
        return NCPresentation(
            R, self.labels, tuple((l, r.map_coefficients(phi, R)) for l, r in self.rules)
        )

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "generators": list(self.labels),
            "order": list(self.labels),
            "rules": [
                {
                    "lhs": encode_word(l, self.ngens),
                    "rhs": [{"word": encode_word(w, self.ngens), "coeff": str(c)} for w, c in r.terms],
                }
                for l, r in self.rules
            ],
        }


_NC_KEYS = {"ring", "generators", "order", "rules"}


def encode_word(w: Word, ngens: int) -> str:
    if ngens <= 10:
        return "".join(str(i) for i in w)
    return ",".join(str(i) for i in w)


def decode_word(s: str, ngens: int) -> Word:
    if not s:
        return ()
    w = tuple(int(x) for x in s.split(",")) if "," in s or ngens > 10 else tuple(int(ch) for ch in s)
    if any(not 0 <= i < ngens for i in w):
        raise EnvelopingError(f"word {s!r} uses an unknown generator")
    return w


def presentation_from_json(data: dict) -> NCPresentation:
    extra = set(data) - _NC_KEYS
    if extra:
        raise EnvelopingError(f"unknown fields {sorted(extra)}")
    ring = ring_from_json(data["ring"])
    labels = tuple(data["generators"])
    order = tuple(data.get("order", labels))
    if sorted(order) != sorted(labels):
        raise EnvelopingError("order must list every generator once")
    # reindex so that index order is the monomial order
    perm = [labels.index(x) for x in order]
    back = {old: new for new, old in enumerate(perm)}
    n = len(labels)
    rules = []
    for entry in data["rules"]:
        if set(entry) - {"lhs", "rhs"}:
            raise EnvelopingError("rules take lhs and rhs only")
        lhs = tuple(back[i] for i in decode_word(entry["lhs"], n))
        terms = []
        for t in entry["rhs"]:
            if set(t) - {"word", "coeff"}:
                raise EnvelopingError("rhs terms take word and coeff only")
            terms.append((tuple(back[i] for i in decode_word(t["word"], n)), parse(ring, str(t["coeff"]))))
        rules.append((lhs, NCPolynomial(ring, terms)))
    return NCPresentation(ring, order, tuple(rules))


class _NCEval(ast.NodeVisitor):
    def __init__(self, P: NCPresentation):
        self.P = P

    def generic_visit(self, node):
        raise EnvelopingError(f"unsupported syntax: {ast.dump(node)}")

    def visit_Constant(self, node):
        if isinstance(node.value, int) and not isinstance(node.value, bool):
            return self.P.scalar(node.value)
        raise EnvelopingError(f"unsupported constant {node.value!r}")

    def visit_Name(self, node):
        if node.id in self.P.labels:
            return self.P.gen(node.id)
        try:
            return self.P.scalar(self.P.ring.gen(node.id))
        except (RingError, KeyError) as exc:
            raise EnvelopingError(f"unknown name {node.id!r}") from exc

    def visit_UnaryOp(self, node):
        v = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
        return self.generic_visit(node)

    def visit_BinOp(self, node):
        a, b = self.visit(node.left), self.visit(node.right)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Pow):
            k = _as_scalar(b)
            if k is None or not isinstance(node.right, ast.Constant):
                raise EnvelopingError("exponents must be integer literals")
            return a ** int(node.right.value)
        if isinstance(node.op, ast.Div):
            c = _as_scalar(b)
            if c is None:
                raise EnvelopingError("can only divide by scalars")
            return a * c.inverse()
        return self.generic_visit(node)


def _as_scalar(x: NCPolynomial) -> RingValue | None:
    if not x.terms:
        return x.ring(0)
    if len(x.terms) == 1 and x.terms[0][0] == ():
        return x.terms[0][1]
    return None


def orient(rel: NCPolynomial) -> tuple[Word, NCPolynomial]:
    """Turn ``rel = 0`` into ``lead -> rest`` using the leading word."""
    lw, lc = rel.leading()
    if not lc.is_unit():
        raise EnvelopingError(f"leading coefficient {lc} is not a unit")
    inv = lc.inverse()
    rest = {w: -c * inv for w, c in rel.terms[1:]}
    return lw, NCPolynomial._raw(rel.ring, rest)


# ---------------------------------------------------------------------------
# normal forms


def _find(P: NCPresentation, w: Word, strategy: str):
    n = len(w)
    positions = range(n) if strategy == "leftmost" else range(n - 1, -1, -1)
    for i in positions:
        for L in P._lengths:
            if i + L <= n:
                rhs = P._rule_map.get(w[i:i + L])
                if rhs is not None:
                    return i, L, rhs
    return None


def _nf_word(P: NCPresentation, w: Word, strategy: str) -> dict:
    memo = P._cache.setdefault(strategy, {})
    hit = memo.get(w)
    if hit is not None:
        return hit
    found = _find(P, w, strategy)
    if found is None:
        out = {w: P.ring(1)}
    else:
        i, L, rhs = found
        pre, post = w[:i], w[i + L:]
        out: dict = {}
        for v, c in rhs.terms:
            for u, d in _nf_word(P, pre + v + post, strategy).items():
                x = c * d
                out[u] = out[u] + x if u in out else x
        out = {u: c for u, c in out.items() if c}
    memo[w] = out
    return out


def normal_form(P: NCPresentation, x: NCPolynomial, cap: int | None = None, strategy: str = "leftmost") -> NCPolynomial:
    """Reduce until no word contains a rule's leading word."""
    if strategy not in ("leftmost", "rightmost"):
        raise EnvelopingError(f"unknown strategy {strategy!r}")
    if x.ring != P.ring:
        raise EnvelopingError("polynomial and presentation have different rings")
    if cap is not None and x.degree > cap:
        raise DegreeCapExceeded(f"degree {x.degree} exceeds cap {cap}")
    acc: dict = {}
    for w, c in x.terms:
        for u, d in _nf_word(P, w, strategy).items():
            y = c * d
            acc[u] = acc[u] + y if u in acc else y
    return NCPolynomial._raw(P.ring, acc)


def is_normal_word(P: NCPresentation, w: Word) -> bool:
    return _find(P, tuple(w), "leftmost") is None


def irreducible_words(P: NCPresentation, degree: int) -> list[Word]:
    """All words of exactly ``degree`` letters avoiding every leading word."""
    out = []

    def grow(w):
        if len(w) == degree:
            out.append(w)
            return
        for g in range(P.ngens):
            v = w + (g,)
            # only factors ending at the new letter can be new
            if any(len(v) >= L and v[len(v) - L:] in P._rule_map for L in P._lengths):
                continue
            grow(v)

    grow(())
    return out


def normal_words_up_to(P: NCPresentation, degree: int) -> list[Word]:
    return [w for d in range(degree + 1) for w in irreducible_words(P, d)]


# ---------------------------------------------------------------------------
# confluence


@dataclass
class ConfluenceReport:
    confluent: bool
    ambiguities: int
    failures: list  # (overlap word, difference)
    counts: dict  # degree -> number of irreducible words
    commutative_counts: dict  # degree -> C(k+g-1, g-1)

    @property
    def pbw_counts_match(self) -> bool:
        return self.counts == self.commutative_counts


def ambiguities(P: NCPresentation, max_degree: int):
    """Overlap and inclusion ambiguities ``(word, first reduct, second reduct)``."""
    ring = P.ring
    out = []
    for (l1, r1), (l2, r2) in itertools.product(P.rules, repeat=2):
        # overlaps: a proper suffix of l1 equals a proper prefix of l2
        for k in range(1, min(len(l1), len(l2))):
            if l1[len(l1) - k:] == l2[:k]:
                w = l1 + l2[k:]
                if len(w) > max_degree:
                    continue
                a = r1 * NCPolynomial.word(ring, l2[k:])
                b = NCPolynomial.word(ring, l1[:len(l1) - k]) * r2
                out.append((w, a, b))
        # inclusions: l2 a proper factor of l1
        if l1 != l2 and len(l2) < len(l1) and len(l1) <= max_degree:
            for i in range(len(l1) - len(l2) + 1):
                if l1[i:i + len(l2)] == l2:
                    a = r1
                    b = NCPolynomial.word(ring, l1[:i]) * r2 * NCPolynomial.word(ring, l1[i + len(l2):])
                    out.append((l1, a, b))
    return out


def confluence_check(P: NCPresentation, degree: int) -> ConfluenceReport:
    amb = ambiguities(P, degree)
    failures = []
    for w, a, b in amb:
        diff = normal_form(P, a - b)
        if diff:
            failures.append((P.fmt_word(w), P.fmt(diff)))
    g = P.ngens
    counts = {k: len(irreducible_words(P, k)) for k in range(degree + 1)}
    comm = {k: comb(k + g - 1, g - 1) for k in range(degree + 1)}
    return ConfluenceReport(not failures, len(amb), failures, counts, comm)


def strategy_agreement(P: NCPresentation, trials: int = 200, max_degree: int = 6, seed: int = 0) -> tuple[bool, Word | None]:
    """Leftmost and rightmost rewriting agree on random words."""
    rng = random.Random(seed)
    for _ in range(trials):
        d = rng.randint(0, max_degree)
        w = tuple(rng.randrange(P.ngens) for _ in range(d))
        x = NCPolynomial.word(P.ring, w)
        if normal_form(P, x, strategy="leftmost") != normal_form(P, x, strategy="rightmost"):
            return False, w
    return True, None


# ---------------------------------------------------------------------------
# building presentations from hom-Lie data


def _vec_to_nc(ring: Ring, vec) -> NCPolynomial:
    return NCPolynomial(ring, [((k,), c) for k, c in enumerate(vec) if c])


def envelope_relation(L: HomLieAlgebra, i: int, j: int) -> NCPolynomial:
    """``alpha(e_i) e_j - alpha(e_j) e_i - <e_i, e_j>`` in the free algebra."""
    R = L.ring
    ai = _vec_to_nc(R, L.twist[i])
    aj = _vec_to_nc(R, L.twist[j])
    ei = NCPolynomial.word(R, (i,))
    ej = NCPolynomial.word(R, (j,))
    return ai * ej - aj * ei - _vec_to_nc(R, L.bracket_basis(i, j))


def envelope_relations(L: HomLieAlgebra) -> dict:
    """All defining relations, keyed by the pair ``(i, j)`` with i < j."""
    return {(i, j): envelope_relation(L, i, j) for i in range(L.rank) for j in range(i + 1, L.rank)}


def enveloping_from_homlie(L: HomLieAlgebra) -> NCPresentation:
    """Presentation for a diagonal twist ``alpha(e_i) = q_i e_i`` with unit ``q_i``.

    For i < j the rule is ``e_j e_i -> q_j^-1 (q_i e_i e_j - <e_i, e_j>)``.
    """
    if not L.twist_is_diagonal():
        raise EnvelopingError("the twist is not diagonal; only the raw relations are available")
    qs = [L.twist[i][i] for i in range(L.rank)]
    for i, q in enumerate(qs):
        if not q.is_unit():
            raise EnvelopingError(f"twist entry q_{i} = {q} is not a unit")
    R = L.ring
    rules = []
    for i in range(L.rank):
        for j in range(i + 1, L.rank):
            qinv = qs[j].inverse()
            rhs = (NCPolynomial.word(R, (i, j), qs[i]) - _vec_to_nc(R, L.bracket_basis(i, j))) * qinv
            rules.append(((j, i), rhs))
    return NCPresentation(R, L.labels, tuple(rules))


def sl2_presentation(q_specialized: bool = True) -> NCPresentation:
    L = jackson_sl2(q_specialized=q_specialized)
    if L.ring.characteristic == 2:
        raise EnvelopingError("the sl2 relations divide by 2")
    return enveloping_from_homlie(L)


def kw_presentation(n: int, r: int = 1, b="sym") -> NCPresentation:
    """Full Kummer-Witt enveloping presentation over ``Q(xi)[b]``."""
    _, xi, bv = kummer_ring(n, b, field=True)
    return enveloping_from_homlie(kummer_witt_homlie(n, r, bv, xi))


def jac_presentation(n: int, b="sym") -> NCPresentation:
    """Enveloping algebra of the Jackson subalgebra, before the basis change."""
    _, xi, bv = kummer_ring(n, b, field=True)
    return enveloping_from_homlie(jackson_subalgebra(n, 1, bv, xi))


# ---------------------------------------------------------------------------
# substitutions


def substitute(P: NCPresentation, images: dict) -> NCPresentation:
    """Replace generator ``g`` by ``images[g]`` in every relation and re-orient."""
    idx = {P.index(k): v for k, v in images.items()}
    rels = []
    for rel in P.relations():
        acc = NCPolynomial(P.ring)
        for w, c in rel.terms:
            term = NCPolynomial.scalar(P.ring, c)
            for g in w:
                term = term * (idx[g] if g in idx else NCPolynomial.word(P.ring, (g,)))
            acc = acc + term
        rels.append(acc)
    return NCPresentation.from_relations(P.ring, P.labels, rels)


def _xi(P: NCPresentation) -> RingValue:
    return P.ring.gen("xi")


def basis_shift(P: NCPresentation, index: int = 0) -> NCPresentation:
    """``e_0 -> (1 - xi^2)^-1 e_0 + 1``."""
    xi = _xi(P)
    s = 1 - xi ** 2
    if not s.is_unit():
        raise EnvelopingError(f"shift scalar {s} is not a unit")
    X = P.gen(index)
    return substitute(P, {index: X * s.inverse() + 1})


def basis_unshift(P: NCPresentation, index: int = 0) -> NCPresentation:
    """Inverse of :func:`basis_shift`: ``e_0 -> (1 - xi^2)(e_0 - 1)``."""
    xi = _xi(P)
    X = P.gen(index)
    return substitute(P, {index: (X - 1) * (1 - xi ** 2)})


def jackson_presentation(n: int, b="sym", shifted: bool = True) -> NCPresentation:
    """``J_b(xi)`` over ``Q(xi)[b]``; ``shifted`` applies the basis change."""
    P = jac_presentation(n, b)
    return basis_shift(P) if shifted else P


def envs_presentation(ring: Ring, xi: RingValue, b: RingValue, n_label: str = "eps2") -> NCPresentation:
    """The shifted relations typed in directly for arbitrary ``xi`` (``xi = 1`` allowed)."""
    labels = ("eps0", "eps1", n_label)
    one = NCPolynomial.scalar(ring, 1)
    e0, e1, e2 = (NCPolynomial.word(ring, (i,)) for i in range(3))
    rels = [
        e0 * e1 - e1 * e0 * xi,
        e2 * e0 - e0 * e2 * xi,
        e2 * e1 - e1 * e2 * xi ** 2 - e0 * b - one * (b * (1 - xi ** 2)),
    ]
    return NCPresentation.from_relations(ring, labels, rels)


# ---------------------------------------------------------------------------
# centre and normal elements


def commutator(P: NCPresentation, x: NCPolynomial, y: NCPolynomial) -> NCPolynomial:
    return normal_form(P, x * y - y * x)


def is_central(P: NCPresentation, x: NCPolynomial, cap: int | None = None) -> bool:
    if cap is not None and x.degree + 1 > cap:
        raise DegreeCapExceeded(f"degree {x.degree + 1} exceeds cap {cap}")
    return all(not commutator(P, x, g) for g in P.gens())


def _field_embedding(P: NCPresentation):
    F, inc = field_of_fractions(P.ring)
    return F, inc


def _solve(P: NCPresentation, support: list[Word], pieces) -> tuple:
    """Kernel of ``c -> (sum_w c_w pieces(w)[g])_g`` with pieces already in normal form."""
    F, inc = _field_embedding(P)
    cols = [pieces(w) for w in support]
    ngroups = len(cols[0]) if cols else 0
    rows = []
    for g in range(ngroups):
        ws = sorted({u for col in cols for u in col[g].as_dict()}, key=word_key)
        for u in ws:
            rows.append([inc(col[g].coefficient(u)) for col in cols])
    basis = kernel(rows, F, len(support)) if rows else [
        [F(1 if i == j else 0) for i in range(len(support))] for j in range(len(support))
    ]
    return F, inc, basis


def _combine(P: NCPresentation, F: Ring, inc, support, vec) -> NCPolynomial:
    """``sum vec_w nf(w)`` over the field F."""
    acc = NCPolynomial(F)
    for w, c in zip(support, vec):
        if c:
            nf = normal_form(P, NCPolynomial.word(P.ring, w))
            acc = acc + nf.map_coefficients(inc, F) * c
    return acc


def _image_dim(P, F, inc, support, basis) -> tuple[int, list[NCPolynomial]]:
    elems = [_combine(P, F, inc, support, v) for v in basis]
    words = sorted({w for e in elems for w in e.words()}, key=word_key)
    if not words:
        return 0, elems
    return rank([[e.coefficient(w) for w in words] for e in elems], F), elems


@dataclass
class CenterScan:
    max_degree: int
    dimension: int  # dim of central elements of degree <= max_degree
    basis: list  # NCPolynomials over the fraction field
    expected: list  # the known generators that lie in the scanned range
    expected_in_span: bool
    extra_dimension: int  # dimension beyond the span of the monomials in the known generators


def center_scan(P: NCPresentation, max_degree: int, known: list[NCPolynomial] | None = None) -> CenterScan:
    """All central elements supported on normal words of degree <= max_degree."""
    support = normal_words_up_to(P, max_degree)
    gens = P.gens()

    def pieces(w):
        x = NCPolynomial.word(P.ring, w)
        return [normal_form(P, x * g - g * x) for g in gens]

    F, inc, basis = _solve(P, support, pieces)
    dim, elems = _image_dim(P, F, inc, support, basis)
    known = known or []
    # products of the known generators inside the degree range
    monos = [NCPolynomial.scalar(P.ring, 1)]
    frontier = [NCPolynomial.scalar(P.ring, 1)]
    while frontier:
        nxt = []
        for m in frontier:
            for k in known:
                y = normal_form(P, m * k)
                if y.degree <= max_degree and y not in monos:
                    monos.append(y)
                    nxt.append(y)
        frontier = nxt
    words = sorted({w for e in elems + [m.map_coefficients(inc, F) for m in monos] for w in e.words()}, key=word_key)
    known_F = [m.map_coefficients(inc, F) for m in monos]
    rk_known = rank([[e.coefficient(w) for w in words] for e in known_F], F) if known_F else 0
    rk_all = rank([[e.coefficient(w) for w in words] for e in elems + known_F], F)
    return CenterScan(max_degree, dim, elems, monos, rk_all == dim, dim - rk_known)


@dataclass
class NormalSolution:
    tau: tuple  # scalar per generator: tau(g) = tau_g g
    raw_dimension: int  # kernel dimension in support coordinates
    dimension: int  # dimension of the image in the algebra
    kernel: list  # support-coordinate vectors over the fraction field
    elements: list  # normal forms of the kernel vectors


def normal_element_solve(
    P: NCPresentation,
    support: list[Word],
    tau=None,
    candidates=None,
) -> list[NormalSolution]:
    """Elements ``O`` on ``support`` with ``O g = tau(g) O`` for every generator g.

    ``tau`` is a tuple of scalars (one per generator); when omitted every
    tuple drawn from ``candidates`` (default: powers of xi) is tried and the
    characters with a nonzero solution in the algebra are returned.
    """
    support = [tuple(w) for w in support]
    if not support:
        raise EnvelopingError("empty support")
    if tau is not None:
        taus = [tuple(P.ring(t) for t in tau)]
    else:
        if candidates is None:
            try:
                xi = _xi(P)
                order = next(k for k in range(1, 64) if xi ** k == 1)
                candidates = [xi ** k for k in range(order)]
            except (RingError, KeyError, StopIteration):
                candidates = [P.ring(1)]
        taus = list(itertools.product(candidates, repeat=P.ngens))
    gens = P.gens()
    out = []
    for t in taus:
        def pieces(w, t=t):
            x = NCPolynomial.word(P.ring, w)
            return [normal_form(P, x * g - (g * x) * t[i]) for i, g in enumerate(gens)]

        F, inc, basis = _solve(P, support, pieces)
        dim, elems = _image_dim(P, F, inc, support, basis)
        if tau is not None or dim > 0:
            out.append(NormalSolution(t, len(basis), dim, basis, elems))
    return out


def is_normal_element(P: NCPresentation, x: NCPolynomial, tau) -> bool:
    return all(
        not normal_form(P, x * g - (g * x) * P.ring(tau[i])) for i, g in enumerate(P.gens())
    )


# ---------------------------------------------------------------------------
# down-up identification


@dataclass
class DownUpReport:
    n: int
    residuals: list  # normal forms of the two down-up relations
    ok: bool
    eps0_recovered: bool  # b eps0 = du - xi^2 ud - b(1 - xi^2) holds


def downup_relations(P: NCPresentation, xi: RingValue, a: RingValue, d_label: str, u_label: str = "eps1"):
    d, u = P.gen(d_label), P.gen(u_label)
    c = a * (1 - xi ** 2) * (1 - xi)
    r1 = d * d * u - d * u * d * (xi * (1 + xi)) + u * d * d * xi ** 3 - d * c
    r2 = d * u * u - u * d * u * (xi * (1 + xi)) + u * u * d * xi ** 3 - u * c
    return r1, r2


def downup_check(n: int, b="sym", P: NCPresentation | None = None) -> DownUpReport:
    """Both down-up relations (with a = b) must vanish in the shifted algebra."""
    if P is None:
        P = jackson_presentation(n, b)
    xi = _xi(P) if "xi" in P.ring.all_gens() else P.ring(1)
    bv = P.ring.gen("b") if "b" in P.ring.all_gens() else P.ring(b)
    d_label = P.labels[2]
    res = [normal_form(P, r) for r in downup_relations(P, xi, bv, d_label)]
    d, u, e0 = P.gen(d_label), P.gen("eps1"), P.gen("eps0")
    lhs = normal_form(P, d * u - u * d * xi ** 2 - (1 - xi ** 2) * bv)
    return DownUpReport(n, [P.fmt(r) for r in res], all(not r for r in res), lhs == normal_form(P, e0 * bv))


# ---------------------------------------------------------------------------
# Ore towers


@dataclass(frozen=True)
class OreTowerSpec:
    """``B[x_0][x_1; w_1, d_1]...``: ``x_k x_i = w_k(x_i) x_k + d_k(x_i)`` for i < k.

    ``actions[k][i]`` is the scalar of the diagonal automorphism on ``x_i`` and
    ``derivations[k][i]`` an NCPolynomial in ``x_0..x_{k-1}`` (absent means 0).
    """

    ring: Ring
    variables: tuple[str, ...]
    actions: tuple  # tuple of dicts
    derivations: tuple  # tuple of dicts

    def __post_init__(self):
        for k in range(len(self.variables)):
            for i, s in self.actions[k].items():
                if i >= k:
                    raise EnvelopingError("automorphisms act on earlier variables only")
                if not self.ring(s).is_unit():
                    raise EnvelopingError(f"automorphism scalar {s} is not a unit")
            for i, p in self.derivations[k].items():
                if i >= k or any(g >= k for w in p.words() for g in w):
                    raise EnvelopingError("skew derivations take values in earlier variables")

    def presentation(self, upto: int | None = None) -> NCPresentation:
        m = len(self.variables) if upto is None else upto
        rules = []
        R = self.ring
        for k in range(m):
            for i in range(k):
                rhs = NCPolynomial.word(R, (i, k), self.actions[k].get(i, 1))
                rhs = rhs + self.derivations[k].get(i, NCPolynomial(R))
                rules.append(((k, i), rhs))
        return NCPresentation(R, self.variables[:m], tuple(rules))

    def _omega(self, k: int, x: NCPolynomial) -> NCPolynomial:
        acc = {}
        for w, c in x.terms:
            s = self.ring(c)
            for g in w:
                s = s * self.ring(self.actions[k].get(g, 1))
            acc[w] = s
        return NCPolynomial._raw(self.ring, acc)

    def _delta(self, k: int, x: NCPolynomial) -> NCPolynomial:
        R = self.ring
        out = NCPolynomial(R)
        for w, c in x.terms:
            for t, g in enumerate(w):
                dg = self.derivations[k].get(g)
                if dg is None or not dg:
                    continue
                left = self._omega(k, NCPolynomial.word(R, w[:t]))
                out = out + left * dg * NCPolynomial.word(R, w[t + 1:]) * c
        return out


@dataclass
class OreReport:
    ok: bool
    failures: list  # (step, relation, which map, residual)


def ore_tower_check(T: OreTowerSpec) -> OreReport:
    """Each new automorphism and skew derivation respects the earlier relations."""
    failures = []
    for k in range(1, len(T.variables)):
        sub = T.presentation(k)
        for rel in sub.relations():
            w = normal_form(sub, T._omega(k, rel))
            if w:
                failures.append((k, sub.fmt(rel), "automorphism", sub.fmt(w)))
            d = normal_form(sub, T._delta(k, rel))
            if d:
                failures.append((k, sub.fmt(rel), "derivation", sub.fmt(d)))
    return OreReport(not failures, failures)


def jackson_ore_tower(n: int, b="sym") -> OreTowerSpec:
    """``B[e1][e0; tau][e_(n-1); omega, Delta]`` from the shifted relations."""
    _, xi, bv = kummer_ring(n, b, field=True)
    R = xi.ring
    # variable order e1, e0, e_(n-1)
    delta = NCPolynomial(R, [((1,), bv), ((), bv * (1 - xi ** 2))])
    return OreTowerSpec(
        R,
        ("eps1", "eps0", f"eps{n - 1}"),
        ({}, {0: xi}, {0: xi ** 2, 1: xi}),
        ({}, {}, {0: delta}),
    )


def same_algebra(P: NCPresentation, Q: NCPresentation) -> bool:
    """Each presentation's relations vanish in the other (generators matched by label)."""
    if set(P.labels) != set(Q.labels) or P.ring != Q.ring:
        return False

    def move(x: NCPolynomial, src: NCPresentation, dst: NCPresentation) -> NCPolynomial:
        return NCPolynomial(dst.ring, [(tuple(dst.index(src.labels[g]) for g in w), c) for w, c in x.terms])

    return all(not normal_form(Q, move(r, P, Q)) for r in P.relations()) and all(
        not normal_form(P, move(r, Q, P)) for r in Q.relations()
    )
