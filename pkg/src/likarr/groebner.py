"""Ideals, Groebner bases and the operations built on them.

Saturation and ideal quotients of homogeneous ideals by homogeneous
elements use a fresh variable ``y`` with ``y - f`` adjoined and a
weighted grevlex order in which ``y`` is the last variable: then
``(I + <y - f>) : y^k`` is read off a single Groebner basis and
``y -> f`` maps it back onto ``I : f^k``.  Inhomogeneous input falls back
to the classical constructions with an auxiliary variable ``t``.
"""

from __future__ import annotations

import logging
from collections import Counter
from fractions import Fraction

from . import _engine
from ._engine import Buchberger, Layout, budget, current_budget  # noqa: F401
from .errors import RingMismatchError
from .poly import GREVLEX, Polynomial, RingContext, TermOrder

log = logging.getLogger(__name__)

_layouts = {}


def layout_for(ring: RingContext, order: TermOrder, rank=1, pot=False, degw=None) -> Layout:
    key = (ring, order, rank, pot, tuple(degw) if degw else None)
    lay = _layouts.get(key)
    if lay is None:
        lay = Layout(order.matrix(ring), ring.nvars, rank=rank, pot=pot, degw=degw)
        _layouts[key] = lay
    return lay


def _denominator(f: Polynomial) -> int:
    den = 1
    for c in f._terms.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // _gcd(den, c.denominator)
    return den


def to_packed(f: Polynomial, lay: Layout, pos=0) -> dict:
    """Packed form of f scaled by the lcm of its denominators."""
    den = _denominator(f)
    return {lay.pack(e, pos): int(c * den) for e, c in f._terms.items()}


def from_packed(d: dict, ring: RingContext, lay: Layout) -> Polynomial:
    return Polynomial._raw(ring, {lay.exps(m): c for m, c in d.items()})


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------


class Ideal:
    """Ideal of a polynomial ring, with Groebner bases cached per term order."""

    def __init__(self, ring: RingContext, generators=()):
        gens = []
        for g in generators:
            if not isinstance(g, Polynomial):
                g = ring.const(g) if not isinstance(g, str) else ring.parse(g)
            if g.ring != ring:
                raise RingMismatchError("generator from another ring")
            if g:
                gens.append(g)
        self.ring = ring
        self.generators = tuple(gens)
        self._gb = {}

    def __repr__(self):
        return f"Ideal({len(self.generators)} generators in {', '.join(self.ring.variables)})"

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __contains__(self, f):
        return ideal_member(f, self)

    def gb(self, order: TermOrder | None = None) -> list:
        return groebner_basis(self, order)

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.gb())

    def is_bihomogeneous(self) -> bool:
        return all(g.bidegree() is not None for g in self.generators)

    def is_homogeneous(self, weights=None) -> bool:
        return all(g.is_homogeneous(weights) for g in self.generators)

    def __add__(self, other):
        if isinstance(other, Ideal):
            other = other.generators
        elif isinstance(other, Polynomial):
            other = [other]
        return Ideal(self.ring, list(self.generators) + list(other))


def _engine_gb(ring, gens, order, name="gb", degw=None, degree_bound=None):
    lay = layout_for(ring, order, degw=degw)
    eng = _engine.groebner([to_packed(g, lay) for g in gens], lay, degree_bound=degree_bound, name=name)
    return eng, lay


def groebner_basis(I: Ideal, order: TermOrder | None = None) -> list:
    """Reduced Groebner basis: primitive integer coefficients, positive leading terms."""
    order = order or GREVLEX
    hit = I._gb.get(order)
    if hit is not None:
        return hit
    if not I.generators:
        I._gb[order] = []
        return []
    eng, lay = _engine_gb(I.ring, I.generators, order)
    gb = [from_packed(g, I.ring, lay) for g in eng.reduced()]
    I._gb[order] = gb
    if I.is_bihomogeneous():
        for g in gb:
            if g.bidegree() is None:
                raise AssertionError("Groebner basis of a bihomogeneous ideal lost bihomogeneity")
    return gb


def reduce(f: Polynomial, G, order: TermOrder | None = None) -> Polynomial:
    """Normal form of f modulo the list G (full reduction); f - result lies in <G>."""
    order = order or GREVLEX
    G = [g for g in G if g]
    if not f or not G:
        return f
    ring = f.ring
    lay = layout_for(ring, order)
    eng = Buchberger(lay)
    for g in G:
        if g.ring != ring:
            raise RingMismatchError("reducer from another ring")
        eng.add_reducer(to_packed(g, lay))
    r, scale = eng.nf(to_packed(f, lay))
    return from_packed(r, ring, lay) * (Fraction(1) / (scale * _denominator(f)))


def ideal_member(f: Polynomial, I: Ideal) -> bool:
    if f.ring != I.ring:
        raise RingMismatchError("polynomial and ideal live in different rings")
    if not f:
        return True
    return not reduce(f, groebner_basis(I))


def contains(I: Ideal, J: Ideal) -> bool:
    """J subset of I."""
    G = groebner_basis(I)
    return all(not reduce(g, G) for g in J.generators)


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    """Equal iff the reduced grevlex bases coincide."""
    if I.ring != J.ring:
        raise RingMismatchError("ideals live in different rings")
    return groebner_basis(I) == groebner_basis(J)


# ---------------------------------------------------------------------------
# elimination, quotients, saturation


def eliminate(I: Ideal, names) -> Ideal:
    """I intersected with the subring without the variables ``names``."""
    names = tuple(names)
    for v in names:
        I.ring.index(v)
    if not names:
        return I
    order = TermOrder.block(names)
    gb = groebner_basis(I, order)
    idx = [I.ring.index(v) for v in names]
    keep = [g for g in gb if all(e[i] == 0 for e in g._terms for i in idx)]
    return Ideal(I.ring, keep)


def _homogeneous_weights(I: Ideal, f: Polynomial):
    w = [1] * I.ring.nvars
    if f.is_homogeneous(w) and I.is_homogeneous(w):
        return w
    return None


def _extend_last(ring: RingContext, stem: str):
    y = ring.fresh_name(stem)
    return RingContext(ring.x_vars, ring.s_vars + (y,)), y


def _drop_var(f: Polynomial, ring: RingContext) -> Polynomial:
    """Project a polynomial free of the last variable back to ``ring``."""
    n = ring.nvars
    t = {}
    for e, c in f._terms.items():
        if any(e[n:]):
            raise AssertionError("auxiliary variable survived")
        t[e[:n]] = c
    return Polynomial._raw(ring, t)


def _bayer(I: Ideal, f: Polynomial, w, once: bool):
    """(I + <y - f>) : y (once) or : y^inf, mapped back along y -> f."""
    ring = I.ring
    big, y = _extend_last(ring, "y")
    d = sum(a * b for a, b in zip(next(iter(f._terms)), w))
    weights = tuple(w) + (d,)
    order = TermOrder("wgrevlex", weights=weights)
    yv = big.var(y)
    fb = f.to_ring(big)
    gens = [g.to_ring(big) for g in I.generators] + [yv - fb]
    eng, lay = _engine_gb(big, gens, order, name="saturate" if not once else "quotient", degw=weights)
    yi = big.nvars - 1
    out = []
    for g in eng.reduced():
        p = from_packed(g, big, lay)
        k = min(e[yi] for e in p._terms)
        if once:
            k = min(k, 1)
        if k:
            p = Polynomial._raw(big, {e[:yi] + (e[yi] - k,): c for e, c in p._terms.items()})
        p = p.subs({y: fb})
        out.append(_drop_var(p, ring).primitive())
    return Ideal(ring, _dedupe(out))


def _dedupe(polys):
    seen = set()
    out = []
    for p in polys:
        if p and p not in seen:
            seen.add(p)
            out.append(p)
    return out


def quotient(I: Ideal, f: Polynomial) -> Ideal:
    """I : f."""
    if not f:
        raise ValueError("quotient by the zero polynomial")
    if f.is_constant():
        return I
    w = _homogeneous_weights(I, f)
    if w is not None:
        return _bayer(I, f, w, once=True)
    J = intersect(I, Ideal(I.ring, [f]))
    return Ideal(I.ring, _dedupe([g.exact_div(f).primitive() for g in J.generators]))


def intersect(I: Ideal, J: Ideal) -> Ideal:
    ring = I.ring
    big = RingContext((ring.fresh_name("t"),) + ring.x_vars, ring.s_vars)
    t = big.var(big.x_vars[0])
    gens = [t * g.to_ring(big) for g in I.generators] + [(1 - t) * g.to_ring(big) for g in J.generators]
    E = eliminate(Ideal(big, gens), [big.x_vars[0]])
    return Ideal(ring, [_from_front(g, ring) for g in E.generators])


def _from_front(g, ring):
    return Polynomial._raw(ring, {e[1:]: c for e, c in g._terms.items()})


def saturate(I: Ideal, f: Polynomial) -> Ideal:
    """I : f^inf."""
    if not f:
        raise ValueError("saturation at the zero polynomial")
    if f.is_constant() or not I.generators:
        return I
    w = _homogeneous_weights(I, f)
    if w is not None:
        return _bayer(I, f, w, once=False)
    ring = I.ring
    big = RingContext((ring.fresh_name("t"),) + ring.x_vars, ring.s_vars)
    t = big.var(big.x_vars[0])
    gens = [g.to_ring(big) for g in I.generators] + [1 - t * f.to_ring(big)]
    E = eliminate(Ideal(big, gens), [big.x_vars[0]])
    return Ideal(ring, [_from_front(g, ring) for g in E.generators])


# ---------------------------------------------------------------------------
# dimension and Hilbert series


def leading_monomials(I: Ideal, order: TermOrder | None = None) -> list:
    key = (order or GREVLEX).key_function(I.ring)
    return [max(g._terms, key=key) for g in groebner_basis(I, order)]


def codim(I: Ideal, order: TermOrder | None = None) -> int:
    """Codimension via a minimum set of variables meeting every leading monomial."""
    lms = leading_monomials(I, order)
    if any(not any(e) for e in lms):
        raise ValueError("codimension of the unit ideal is undefined")
    return monomial_codim(lms)


def monomial_codim(monos) -> int:
    supports = _minimal_sets([frozenset(i for i, a in enumerate(e) if a) for e in monos])
    best = [len({i for s in supports for i in s})]

    def search(chosen, size):
        if size >= best[0]:
            return
        for s in supports:
            if not (s & chosen):
                for v in sorted(s):
                    search(chosen | {v}, size + 1)
                return
        best[0] = size

    search(frozenset(), 0)
    return best[0] if supports else 0


def _minimal_sets(sets):
    sets = sorted(set(sets), key=len)
    out = []
    for s in sets:
        if not any(o <= s for o in out):
            out.append(s)
    return out


def hilbert_numerator(monos, ring: RingContext) -> dict:
    """Bigraded K(t1, t2) for R/<monos>, as {(a, b): coefficient}.

    Hilbert series = K / ((1 - t1)^n (1 - t2)^m) with n x- and m s-variables.
    """
    nx = len(ring.x_vars)
    gens = _min_monos([tuple(e) for e in monos])
    return _hilbert(gens, nx)


def _min_monos(monos):
    monos = sorted(set(monos), key=sum)
    out = []
    for m in monos:
        if not any(all(a <= b for a, b in zip(o, m)) for o in out):
            out.append(m)
    return out


def _bideg(e, nx):
    return (sum(e[:nx]), sum(e[nx:]))


def _polymul(p, q):
    out = Counter()
    for (a, b), c in p.items():
        for (a2, b2), c2 in q.items():
            out[(a + a2, b + b2)] += c * c2
    return {k: v for k, v in out.items() if v}


def _hilbert(gens, nx):
    if not gens:
        return {(0, 0): 1}
    if any(not any(g) for g in gens):
        return {}
    supports = [frozenset(i for i, a in enumerate(g) if a) for g in gens]
    # pairwise coprime: product of Koszul factors
    if sum(len(s) for s in supports) == len(frozenset().union(*supports)):
        out = {(0, 0): 1}
        for g in gens:
            out = _polymul(out, {(0, 0): 1, _bideg(g, nx): -1})
        return out
    # K(M' + m) = K(M') - t^deg(m) K(M' : m), with m the last (largest) generator
    if len(gens) <= 6:
        *rest, m = gens
        a = _hilbert(rest, nx)
        colon = _min_monos([tuple(max(x - y, 0) for x, y in zip(g, m)) for g in rest])
        b = _hilbert(colon, nx)
        shift = _bideg(m, nx)
        out = Counter(a)
        for (i, j), c in b.items():
            out[(i + shift[0], j + shift[1])] -= c
        return {k: v for k, v in out.items() if v}
    # same identity with a variable pivot p = v: K(M) = K(M + <v>) + t^deg(v) K(M : v)
    counts = Counter(i for s in supports for i in s if len(s) > 1)
    v = max(counts, key=lambda i: (counts[i], -i))
    unit = tuple(1 if i == v else 0 for i in range(len(gens[0])))
    plus = _min_monos([g for g in gens if g[v] == 0] + [unit])
    colon = _min_monos([tuple(a - 1 if i == v and a else a for i, a in enumerate(g)) for g in gens])
    a = _hilbert(plus, nx)
    b = _hilbert(colon, nx)
    shift = _bideg(unit, nx)
    out = Counter(a)
    for (i, j), c in b.items():
        out[(i + shift[0], j + shift[1])] += c
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# minimal generators of homogeneous ideals


def minimal_generators(I: Ideal, weights=None) -> list:
    """A minimal generating set of a homogeneous ideal (degree-by-degree)."""
    ring = I.ring
    w = weights or [1] * ring.nvars
    if not I.is_homogeneous(w):
        raise ValueError("minimal generators need a homogeneous ideal")

    def deg(g):
        return sum(a * b for a, b in zip(next(iter(g._terms)), w))

    lay = layout_for(ring, GREVLEX, degw=w)
    eng = Buchberger(lay, name="mingens")
    keep = []
    for g in sorted(I.generators, key=lambda g: (deg(g), str(g))):
        eng.run(deg(g))
        if eng.add(to_packed(g, lay)):
            keep.append(g.primitive())
    return keep


def interreduce(polys, order: TermOrder | None = None) -> list:
    """Reduce each element modulo the others until nothing changes; drop zeros."""
    cur = [p for p in polys if p]
    changed = True
    while changed:
        changed = False
        for i in range(len(cur)):
            others = cur[:i] + cur[i + 1 :]
            r = reduce(cur[i], others, order) if others else cur[i]
            if r != cur[i]:
                changed = True
                cur[i] = r
        cur = [p for p in cur if p]
    return [p.primitive() for p in cur]
