"""Random inputs shared by the property tests and the acceptance suite."""

import random
from fractions import Fraction

from hypothesis import strategies as st

from twistlie.algebra import FiniteAlgebra
from twistlie.rings import Rationals, polynomial_ring

Q2 = polynomial_ring(["q1", "q2"], Rationals())


def staircase(heights):
    """Monomials x^a y^b with b < heights[a]; heights nonincreasing and positive."""
    hs = sorted((h for h in heights if h > 0), reverse=True) or [1]
    return sorted((a, b) for a, h in enumerate(hs) for b in range(h))


def monomial_algebra(monos, scales, ring=Q2):
    """Span of the monomials in Q[x, y]/(everything else), basis rescaled by ``scales``.

    Products are ``e_u e_v = s_u s_v / s_(u+v) e_(u+v)`` when u+v is kept.
    """
    idx = {m: i for i, m in enumerate(monos)}
    n = len(monos)
    mult = []
    for u in monos:
        row = []
        for v in monos:
            vec = [ring(0)] * n
            w = (u[0] + v[0], u[1] + v[1])
            if w in idx:
                c = Fraction(scales[idx[u]]) * scales[idx[v]] / scales[idx[w]]
                vec[idx[w]] = ring(c)
            row.append(tuple(vec))
        mult.append(tuple(row))
    return FiniteAlgebra(ring, tuple(mult))


def twist_scalars(monos, ring=Q2):
    q1, q2 = ring.gen("q1"), ring.gen("q2")
    return [q1 ** a * q2 ** b for a, b in monos]


def random_witt_data(rng: random.Random, max_rank=6):
    while True:
        heights = [rng.randint(0, 3) for _ in range(3)]
        monos = staircase(heights)
        if len(monos) <= max_rank:
            break
    scales = [1] + [Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3)) for _ in monos[1:]]
    return monos, scales


@st.composite
def witt_data(draw, max_rank=6):
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_witt_data(random.Random(seed), max_rank)
