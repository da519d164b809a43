"""Submodules of free modules R^k and kernels of polynomial matrices."""

from __future__ import annotations

from collections import deque

from . import _engine
from .errors import ConsistencyError
from .groebner import _denominator, layout_for
from .poly import GREVLEX, Polynomial, RingContext, TermOrder

# A module vector is a tuple of Polynomials of one ring.


class PolyMatrix:
    """Rectangular matrix of polynomials over one ring."""

    def __init__(self, ring: RingContext, rows):
        rows = [list(r) for r in rows]
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("matrix rows must have equal length")
        self.ring = ring
        self.rows = [[e if isinstance(e, Polynomial) else ring.const(e) for e in r] for r in rows]
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0

    @classmethod
    def from_columns(cls, ring, cols, nrows=None):
        cols = [tuple(c) for c in cols]
        if not cols:
            return cls.zeros(ring, nrows or 0, 0)
        return cls(ring, [[c[i] for c in cols] for i in range(len(cols[0]))])

    @classmethod
    def zeros(cls, ring, nrows, ncols):
        m = cls(ring, [[ring.zero()] * ncols for _ in range(nrows)])
        m.ncols = ncols
        return m

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix.from_columns(self.ring, [tuple(r) for r in self.rows], self.ncols)

    def row_block(self, start, stop) -> "PolyMatrix":
        m = PolyMatrix(self.ring, self.rows[start:stop])
        m.ncols = self.ncols
        return m

    def __matmul__(self, other):
        if isinstance(other, PolyMatrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = [self.apply(c) for c in other.columns()]
            out = PolyMatrix.from_columns(self.ring, cols, self.nrows)
            out.ncols = other.ncols
            if not cols:
                out.nrows = self.nrows
            return out
        return self.apply(other)

    def apply(self, v) -> tuple:
        if len(v) != self.ncols:
            raise ValueError("vector length does not match the number of columns")
        out = []
        for r in self.rows:
            acc = self.ring.zero()
            for a, b in zip(r, v):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def is_zero(self) -> bool:
        return all(not e for r in self.rows for e in r)

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.shape == other.shape and self.rows == other.rows

    def __str__(self):
        cells = [[str(e) for e in r] for r in self.rows]
        if not cells:
            return "[]"
        w = [max(len(r[j]) for r in cells) for j in range(self.ncols)]
        return "\n".join("[ " + "  ".join(c.rjust(k) for c, k in zip(r, w)) + " ]" for r in cells)


def _vec_terms(v):
    for p, f in enumerate(v):
        for e, c in f._terms.items():
            yield p, e, c


def pack_vector(v, lay) -> dict:
    out = {}
    den = 1
    for f in v:
        d = _denominator(f)
        den = den * d // _gcd(den, d)
    for p, e, c in _vec_terms(v):
        out[lay.pack(e, p)] = int(c * den)
    return out


def unpack_vector(d, ring, lay, rank, offset=0) -> tuple:
    parts = [dict() for _ in range(rank)]
    for m, c in d.items():
        parts[lay.pos(m) - offset][lay.exps(m)] = c
    return tuple(Polynomial._raw(ring, t) for t in parts)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _check_rank(gens):
    ranks = {len(v) for v in gens}
    if len(ranks) > 1:
        raise ValueError("module generators must have equal length")
    return ranks.pop() if ranks else 0


def module_gb(gens, order: str = "top", ring: RingContext | None = None, term_order: TermOrder = GREVLEX) -> list:
    """Groebner basis of the submodule generated by ``gens`` (TOP or POT)."""
    gens = [tuple(v) for v in gens]
    if not gens:
        return []
    rank = _check_rank(gens)
    ring = ring or gens[0][0].ring
    lay = layout_for(ring, term_order, rank=rank, pot=(order == "pot"))
    eng = _engine.groebner([pack_vector(v, lay) for v in gens if any(v)], lay, name="module_gb")
    return [unpack_vector(g, ring, lay, rank) for g in eng.reduced()]


def module_member(v, gens, ring=None) -> bool:
    """Is v in the submodule generated by gens?"""
    v = tuple(v)
    if not any(v):
        return True
    gens = [tuple(g) for g in gens if any(g)]
    if not gens:
        return False
    ring = ring or v[0].ring
    lay = layout_for(ring, GREVLEX, rank=len(v))
    eng = _engine.groebner([pack_vector(g, lay) for g in gens], lay, name="module_member")
    r, _ = eng.nf(pack_vector(v, lay))
    return not r


def homogeneous_shifts(Q: PolyMatrix):
    """Row and column shifts making Q homogeneous, or None.

    Entry (i, j) must be homogeneous of degree col[j] - row[i].
    """
    rows = [None] * Q.nrows
    cols = [None] * Q.ncols
    for i in range(Q.nrows):
        for j in range(Q.ncols):
            f = Q[i, j]
            if f and not f.is_homogeneous():
                return None
    adj = {}
    for i in range(Q.nrows):
        for j in range(Q.ncols):
            f = Q[i, j]
            if f:
                d = f.total_degree()
                adj.setdefault(("r", i), []).append((("c", j), d))
                adj.setdefault(("c", j), []).append((("r", i), -d))
    val = {}
    for start in [("r", i) for i in range(Q.nrows)] + [("c", j) for j in range(Q.ncols)]:
        if start in val:
            continue
        val[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w, d in adj.get(u, ()):
                want = val[u] + d
                if w not in val:
                    val[w] = want
                    queue.append(w)
                elif val[w] != want:
                    return None
    for (kind, k), x in val.items():
        (rows if kind == "r" else cols)[k] = x
    return rows, cols


def vector_degree(v, shifts):
    """Shifted degree of a homogeneous vector (None if inhomogeneous)."""
    degs = {sum(e) + shifts[p] for p, e, _ in _vec_terms(v)}
    return degs.pop() if len(degs) == 1 else None


def _sort_key(v, shifts):
    d = vector_degree(v, shifts) if shifts else None
    return (d if d is not None else max((sum(e) for _, e, _ in _vec_terms(v)), default=0), str([str(f) for f in v]))


def prune(vectors, shifts, ring, presorted: bool = False) -> list:
    """Drop vectors lying in the span of earlier ones (graded, lowest degree first)."""
    if not vectors:
        return []
    rank = len(vectors[0])
    lay = layout_for(ring, GREVLEX, rank=rank)
    eng = _engine.Buchberger(lay, shifts=shifts, name="prune")
    keep = []
    if not presorted:
        vectors = sorted(vectors, key=lambda v: _sort_key(v, shifts))
    for v in vectors:
        d = vector_degree(v, shifts)
        eng.run(d)
        if eng.add(pack_vector(v, lay), sugar=d):
            keep.append(v)
    return keep


def kernel(Qm: PolyMatrix, minimize: bool = True) -> PolyMatrix:
    """Matrix whose columns generate {v : Qm v = 0}.

    Uses one position-over-term Groebner run on the columns of Qm stacked
    over tracking unit vectors.  When Qm is homogeneous the generators are
    reduced to a graded minimal set (``minimize``).
    """
    ring = Qm.ring
    m, k = Qm.nrows, Qm.ncols
    if k == 0:
        return PolyMatrix.zeros(ring, 0, 0)
    grading = homogeneous_shifts(Qm)
    rank = m + k
    lay = layout_for(ring, GREVLEX, rank=rank, pot=True)
    shifts = None
    col_shift = None
    if grading is not None:
        rows, cols = grading
        # position i < m carries row i of Q; entry degree + shift = column degree
        shifts = list(rows) + list(cols)
        col_shift = list(cols)
    gens = []
    for j, col in enumerate(Qm.columns()):
        v = tuple(col) + tuple(ring.one() if t == j else ring.zero() for t in range(k))
        gens.append(pack_vector(v, lay))
    eng = _engine.Buchberger(lay, shifts=shifts, name="kernel")
    for g in sorted(gens, key=lambda g: (eng.poly_sugar(g), max(g))):
        eng.add(g)
    eng.run()
    syz = []
    for g in eng.reduced():
        if lay.pos(max(g)) >= m:
            syz.append(unpack_vector(g, ring, lay, rank)[m:])
    if minimize and grading is not None:
        syz = prune(syz, col_shift, ring)
    else:
        syz.sort(key=lambda v: _sort_key(v, col_shift))
    K = PolyMatrix.from_columns(ring, syz, k)
    if not syz:
        K = PolyMatrix.zeros(ring, k, 0)
    for v in syz:
        if any(Qm.apply(v)):
            raise ConsistencyError("kernel vector does not satisfy Q v = 0")
    return K


def split_kernel(K: PolyMatrix, m: int, n: int):
    """(A, B): the top m rows and the bottom n rows of K."""
    if K.nrows != m + n:
        raise ValueError(f"kernel has {K.nrows} rows, expected {m + n}")
    return K.row_block(0, m), K.row_block(m, m + n)
