"""Exact Gaussian elimination over field-valued rings."""

from __future__ import annotations

from .rings import Ring, RingValue


def rref(rows: list[list[RingValue]], ring: Ring) -> tuple[list[list[RingValue]], list[int]]:
    """Reduced row echelon form; returns nonzero rows and pivot columns."""
    if not ring.is_field:
        raise ValueError(f"row reduction needs a field, got {ring!r}")
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: list[list[RingValue]], ring: Ring) -> int:
    return len(rref(rows, ring)[1])


def kernel(rows: list[list[RingValue]], ring: Ring, ncols: int | None = None) -> list[list[RingValue]]:
    """Basis of {x : M x = 0} for the matrix with the given rows."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    red, pivots = rref(rows, ring) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ring(0)] * ncols
        v[f] = ring(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def span_basis(vectors: list[list[RingValue]], ring: Ring) -> list[list[RingValue]]:
    """Echelon basis of the span of ``vectors``."""
    return rref(vectors, ring)[0] if vectors else []


def in_span(v: list[RingValue], basis: list[list[RingValue]], ring: Ring) -> bool:
    return rank(basis + [v], ring) == rank(basis, ring) if basis else not any(v)
