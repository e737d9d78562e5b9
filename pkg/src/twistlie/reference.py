"""Published tables, kept as strings and compared entry by entry.

Entries are ``(i, j) -> [(k, coefficient text), ...]`` for the bracket of
basis elements ``i < j``; repeated ``k`` are summed, which matters for tables
that print a basis element twice.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .covers import artin_schreier_homlie, artin_schreier_ring, kummer_ring, kummer_witt_homlie
from .homlie import HomLieAlgebra
from .rings import Ring, RingValue, parse

KW_TABLES = {
    (3, 1): {
        (0, 1): [(1, "1 - xi")],
        (0, 2): [(2, "1 - xi^2")],
        (1, 2): [(0, "b*xi*(1 - xi)")],
    },
    (3, 2): {
        (0, 1): [(1, "1 - xi^2")],
        (0, 2): [(2, "1 - xi")],
        (1, 2): [(0, "-b*xi*(1 - xi)")],
    },
    (4, 1): {
        (0, 1): [(1, "1 - xi")],
        (0, 2): [(2, "1 - xi^2")],
        (0, 3): [(3, "1 - xi^3")],
        (1, 2): [(3, "xi*(1 - xi)")],
        (1, 3): [(0, "b*xi*(1 - xi^2)")],
        (2, 3): [(1, "b*xi^2*(1 - xi)")],
    },
    (4, 2): {
        (0, 1): [(1, "2")],
        (0, 2): [],
        (0, 3): [(3, "2")],
        (1, 2): [(3, "-2")],
        (1, 3): [],
        (2, 3): [(1, "2*b")],
    },
    (5, 1): {
        (0, 1): [(1, "1 - xi")],
        (0, 2): [(2, "1 - xi^2")],
        (0, 3): [(3, "1 - xi^3")],
        (0, 4): [(4, "1 - xi^4")],
        (1, 2): [(3, "xi*(1 - xi)")],
        (1, 3): [(4, "xi*(1 - xi^2)")],
        (1, 4): [(0, "b*xi*(1 - xi^3)")],
        (2, 3): [(0, "b*xi^2*(1 - xi)")],
        (2, 4): [(1, "b*xi^2*(1 - xi^2)")],
        (3, 4): [(2, "b*xi^3*(1 - xi)")],
    },
}

# The n=4, r=1 table also prints simplified right-hand sides using xi^2 = -1.
KW_SIMPLIFIED = {
    (4, 1): {
        (0, 2): [(2, "2")],
        (1, 3): [(0, "2*b*xi")],
        (2, 3): [(1, "-2*b*(1 - xi)")],
    },
}

AS_TABLES = {
    3: {
        (0, 1): [(0, "-nu")],
        (0, 2): [(1, "-2*nu"), (0, "-nu^2")],
        (1, 2): [(1, "-nu^2"), (2, "-nu")],
    },
    5: {
        (0, 1): [(0, "-nu")],
        (0, 2): [(1, "-2*nu"), (0, "-nu^2")],
        (0, 3): [(2, "-3*nu"), (1, "-3*nu^2"), (0, "-nu^3")],
        (0, 4): [(3, "-4*nu"), (2, "-nu^2"), (1, "-4*nu^3"), (0, "-nu^4")],
        (1, 2): [(2, "-nu"), (1, "-nu^2")],
        (1, 3): [(3, "-2*nu"), (2, "-3*nu^2"), (1, "-nu^3")],
        (1, 4): [(3, "-3*nu"), (3, "-nu^2"), (2, "-4*nu^3"), (1, "-nu^4")],
        (2, 3): [(4, "-nu"), (3, "-2*nu^2"), (2, "-nu^3")],
        (2, 4): [(3, "-4*nu^3"), (2, "-nu^3"), (1, "-2*nu"), (0, "-2*nu*b")],
        (3, 4): [(4, "-3*nu^3"), (3, "-nu^4"), (2, "-nu"), (1, "-(b + 3*nu)*nu"), (0, "-3*b*nu^2")],
    },
}

# Normal elements: coefficients on (eps_{n-1} eps_1, eps_1 eps_{n-1}, eps_0^2, eps_0, 1)
# in terms of p1, p2, p3; xinv stands for xi^-1 = xi^(n-1).
OMEGA_SUPPORT = ("eps_last*eps1", "eps1*eps_last", "eps0^2", "eps0", "1")
OMEGA_COEFFS = ("p1", "-p2", "p3", "b*(p2*xinv - p1)/(1 - xi)", "-b*(p1 - p2)")
OMEGA_PENCIL = ("p1", "-xi*p1", "p3", "0", "-b*p1*(1 - xi)")
OMEGA_TAU = {"eps0": "1", "eps1": "xi^2", "eps_last": "xi^(-2)"}

# Jackson sl2 enveloping relations, lhs = rhs, over Q[s0, s1]
SLENV = (
    ("-2*s0*e^2 + s1*h*e - e*h", "2*e"),
    ("-2*s0*e*f + s1*h*f + s0^2*e*h - s0*s1*h^2 - s1^2*f*h", "-s0*h - 2*s1*f"),
    ("e*f + s0^2*e^2 - s0*s1*h*e - s1^2*f*e", "-s0*e + (s1 + 1)/2*h"),
)
# the same relations as printed in matrix form (expressions equal to zero)
SLENV_MATRIX = (
    "2*s0*e^2 + s1*h*e - e*h - 2*e",
    "-2*s0*e*f + s1*h*f + s0^2*e*h - s0*s1*h^2 - s1^2*f*h + s0*h + 2*s1*f",
    "e*f + s0^2*e^2 - s0*s1*h*e - s1^2*f*e + s0*e - (s1 + 1)/2*h",
)
QSL2 = (
    "h*e - q^(-1)*e*h - 2*q^(-1)*e",
    "h*f - q*f*h + 2*q*f",
    "e*f - q^2*f*e - (q + 1)/2*h",
)

# Shifted Jackson relations (lhs = rhs) with eps_last = eps_{n-1}
ENVS = (
    ("eps0*eps1 - xi*eps1*eps0", "0"),
    ("eps_last*eps0 - xi*eps0*eps_last", "0"),
    ("eps_last*eps1 - xi^2*eps1*eps_last", "b*eps0 + b*(1 - xi^2)"),
)


@dataclass
class EntryDiff:
    pair: tuple
    index: int
    published: str
    published_value: RingValue
    computed: RingValue

    def __str__(self):
        i, j = self.pair
        return f"<e{i},e{j}> coefficient of e{self.index}: published {self.published} = {self.published_value}, computed {self.computed}"


@dataclass
class TableComparison:
    name: str
    entries: int
    diffs: list = field(default_factory=list)

    @property
    def match(self) -> bool:
        return not self.diffs

    def to_json(self) -> dict:
        return {"table": self.name, "entries": self.entries, "match": self.match, "diffs": [str(d) for d in self.diffs]}


def table_vectors(ring: Ring, rank: int, table: dict) -> dict:
    out = {}
    for pair, terms in table.items():
        vec = [ring(0)] * rank
        text = [""] * rank
        for k, expr in terms:
            vec[k] = vec[k] + parse(ring, expr)
            text[k] = f"{text[k]} + {expr}" if text[k] else expr
        out[pair] = (vec, text)
    return out


def compare_table(L: HomLieAlgebra, table: dict, name: str, pairs=None) -> TableComparison:
    """Entrywise comparison; pairs missing from ``table`` are not compared unless listed."""
    vecs = table_vectors(L.ring, L.rank, table)
    pairs = sorted(vecs) if pairs is None else pairs
    diffs, count = [], 0
    for pair in pairs:
        vec, text = vecs.get(pair, ([L.ring(0)] * L.rank, [""] * L.rank))
        got = L.bracket_basis(*pair)
        for k in range(L.rank):
            count += 1
            if got[k] != vec[k]:
                diffs.append(EntryDiff(pair, k, text[k] or "0", vec[k], got[k]))
    return TableComparison(name, count, diffs)


def kw_comparison(n: int, r: int) -> list[TableComparison]:
    _, xi, b = kummer_ring(n, "sym")
    L = kummer_witt_homlie(n, r, b, xi)
    all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    out = [compare_table(L, KW_TABLES[(n, r)], f"kummer-witt n={n} r={r}", all_pairs)]
    if (n, r) in KW_SIMPLIFIED:
        out.append(compare_table(L, KW_SIMPLIFIED[(n, r)], f"kummer-witt n={n} r={r} simplified forms"))
    return out


def as_comparison(p: int) -> TableComparison:
    _, nu, b = artin_schreier_ring(p)
    L = artin_schreier_homlie(p, nu, b)
    all_pairs = [(i, j) for i in range(p) for j in range(i + 1, p)]
    return compare_table(L, AS_TABLES[p], f"artin-schreier p={p}", all_pairs)


def discrepancy_notes(comparisons: list[TableComparison]) -> list[str]:
    notes = []
    for c in comparisons:
        for d in c.diffs:
            notes.append(f"{c.name}: {d}")
    return notes


@dataclass
class OmegaCase:
    p: tuple  # (p1, p2, p3) as texts
    published: list  # coefficient texts on the support
    solved: list | None  # the normal element agreeing with the published leading coefficients
    agree: list  # per support coordinate

    def to_json(self) -> dict:
        return {
            "p": list(self.p),
            "support": list(OMEGA_SUPPORT),
            "published": [str(x) for x in self.published],
            "solved": None if self.solved is None else [str(x) for x in self.solved],
            "agree": self.agree,
        }


def _omega_text(expr: str, n: int, p: tuple) -> str:
    out = expr.replace("xinv", f"xi^{n - 1}")
    for name, val in zip(("p1", "p2", "p3"), p):
        out = out.replace(name, f"({val})")
    return out


def omega_comparison(n: int = 3, cases=None) -> tuple[object, list[OmegaCase]]:
    """Solve for normal elements on the published support and compare coefficients.

    Kernel vectors are matched on the three quadratic coordinates, which
    determine them; the two lower coordinates are then compared.
    """
    from .enveloping import jackson_presentation, normal_element_solve
    from .linalg import kernel

    P = jackson_presentation(n, "sym")
    xi = P.ring.gen("xi")
    support = [(2, 1), (1, 2), (0, 0), (0,), ()]
    tau = (P.ring(1), xi ** 2, xi ** (n - 2))
    sol = normal_element_solve(P, support, tau)[0]
    F = sol.kernel[0][0].ring
    if cases is None:
        cases = [("1", "0", "0"), ("0", "1", "0"), ("0", "0", "1"), ("1", "xi", "0")]
    out = []
    for p in cases:
        exprs = OMEGA_PENCIL if p == ("1", "xi", "0") else OMEGA_COEFFS
        pub = [parse(F, _omega_text(e, n, p)) for e in exprs]
        m = len(sol.kernel)
        rows = [[v[c] for v in sol.kernel] + [-pub[c]] for c in range(3)]
        ker = [v for v in kernel(rows, F, m + 1) if v[-1]]
        solved = None
        if ker:
            v = ker[0]
            lam = [x / v[-1] for x in v[:-1]]
            solved = [sum((lam[i] * sol.kernel[i][c] for i in range(m)), F(0)) for c in range(5)]
        agree = [solved is not None and solved[c] == pub[c] for c in range(5)]
        out.append(OmegaCase(p, pub, solved, agree))
    return sol, out


# ---------------------------------------------------------------------------
# sl2 enveloping relations

# (published relation index) -> basis pair (i < j) for the labels (e, h, f)
SL2_PAIRS = ((0, 1), (1, 2), (0, 2))


@dataclass
class RelationMatch:
    name: str
    pair: tuple
    published: str
    computed: str
    proportional: bool

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "pair": list(self.pair),
            "published": self.published,
            "computed": self.computed,
            "agree": self.proportional,
        }


def proportional(x, y) -> bool:
    """``x = c y`` for a nonzero scalar c, tested by cross-multiplying one coefficient."""
    if not x.terms or not y.terms:
        return not x.terms and not y.terms
    w, cy = y.terms[0]
    cx = x.coefficient(w)
    return bool(cx) and x * cy == y * cx


def sl2_comparison() -> list[RelationMatch]:
    """Published sl2 enveloping relations against those built from the bracket data."""
    from .covers import jackson_sl2
    from .enveloping import NCPresentation, envelope_relations

    out = []
    for q_spec, name, pubs in (
        (False, "slenv", [f"{lhs} - ({rhs})" for lhs, rhs in SLENV]),
        (False, "slenv matrix form", list(SLENV_MATRIX)),
        (True, "q-specialization", list(QSL2)),
    ):
        L = jackson_sl2(q_specialized=q_spec)
        free = NCPresentation(L.ring, L.labels, ())
        rels = envelope_relations(L)
        for k, text in enumerate(pubs):
            pair = SL2_PAIRS[k]
            x = free.parse(text.replace("q^(-1)", "(1/q)"))
            c = rels[pair]
            out.append(RelationMatch(f"{name} #{k + 1}", pair, text, free.fmt(c), proportional(x, c)))
    return out
