"""Buchberger kernel on packed-integer monomials.

A term of a free module R^k is packed into a single Python int made of
32-bit fields (top to bottom)::

    [position if POT] order rows ... [position if TOP] e_1 ... e_n degree

Every field is a nonnegative linear function of the exponent vector, so
multiplying monomials is integer addition, comparing terms is integer
comparison, and divisibility is one guarded subtraction.  Polynomials are
dicts ``{packed term: int coefficient}``; reduction is fraction-free.
"""

from __future__ import annotations

import contextvars
import heapq
import logging
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import BudgetExceeded

log = logging.getLogger(__name__)

FIELD = 32
VMAX = (1 << (FIELD - 1)) - 1
MASK = (1 << FIELD) - 1


@dataclass(frozen=True)
class Budget:
    max_pairs: int | None = None
    max_degree: int | None = None


_budget = contextvars.ContextVar("likarr_budget", default=Budget())


@contextmanager
def budget(max_pairs=None, max_degree=None):
    """Cap every Groebner run inside the block."""
    token = _budget.set(Budget(max_pairs, max_degree))
    try:
        yield
    finally:
        _budget.reset(token)


def current_budget() -> Budget:
    return _budget.get()


class Layout:
    """Packing scheme for one (ring, order, module rank) combination."""

    def __init__(self, rows, nvars, rank=1, pot=False, degw=None):
        self.nvars = nvars
        self.rank = rank
        self.pot = pot
        degw = list(degw) if degw is not None else [1] * nvars
        off = 0
        self.off_deg = off
        off += FIELD
        self.off_exp = []
        for _ in range(nvars):
            self.off_exp.append(off)
            off += FIELD
        self.off_pos = None
        if rank > 1 and not pot:
            self.off_pos = off
            off += FIELD
        self.off_rows = [0] * len(rows)
        for r in range(len(rows) - 1, -1, -1):
            self.off_rows[r] = off
            off += FIELD
        if rank > 1 and pot:
            self.off_pos = off
            off += FIELD
        self.units = []
        for i in range(nvars):
            u = (1 << self.off_exp[i]) | (degw[i] << self.off_deg)
            for r, row in enumerate(rows):
                if row[i]:
                    u += row[i] << self.off_rows[r]
            self.units.append(u)
        guard = 0
        for o in [self.off_deg] + self.off_exp + self.off_rows:
            guard |= 1 << (o + FIELD - 1)
        self.guard = guard
        self.posmask = (MASK << self.off_pos) if self.off_pos is not None else 0
        self.maxweight = max([max(degw, default=1)] + [sum(r) for r in rows] + [1])

    # -- packing
    def pack(self, exps, pos=0):
        m = 0
        for e, u in zip(exps, self.units):
            if e:
                if e > VMAX:
                    raise OverflowError("exponent exceeds packed field width")
                m += e * u
        if pos:
            m += (self.rank - 1 - pos) << self.off_pos
        elif self.off_pos is not None:
            m += (self.rank - 1) << self.off_pos
        return m

    def exps(self, m):
        return tuple((m >> o) & MASK for o in self.off_exp)

    def pos(self, m):
        if self.off_pos is None:
            return 0
        return self.rank - 1 - ((m >> self.off_pos) & MASK)

    def deg(self, m):
        return m & MASK

    def divides(self, a, b):
        return ((b | self.guard) - a) & self.guard == self.guard

    def lcm(self, a, b):
        m = a & self.posmask
        for o, u in zip(self.off_exp, self.units):
            e = max((a >> o) & MASK, (b >> o) & MASK)
            if e:
                m += e * u
        return m

    def strip_pos(self, m):
        return m & ~self.posmask


def primitive(f):
    """Divide by content and make the leading coefficient positive (in place)."""
    if not f:
        return f, 1
    g = gcd(*f.values())
    if f[max(f)] < 0:
        g = -g
    if g != 1:
        for k in f:
            f[k] //= g
    return f, g


class Buchberger:
    """Incremental Buchberger run with Gebauer-Moeller pair elimination and sugar selection."""

    def __init__(self, layout: Layout, shifts=None, product_criterion=None, name="gb"):
        self.L = layout
        self.shifts = shifts
        self.polys = []
        self.lms = []
        self.lcs = []
        self.sugar = []
        self.reducers = {}
        self.pairs = []
        self.npairs = 0
        self.maxdeg = 0
        self.name = name
        self.product_criterion = layout.rank == 1 if product_criterion is None else product_criterion
        b = current_budget()
        self.max_pairs = b.max_pairs
        self.max_degree = b.max_degree

    # -- degrees
    def term_degree(self, m):
        d = m & MASK
        if self.shifts is not None:
            d += self.shifts[self.L.pos(m)]
        return d

    def poly_sugar(self, f):
        return max(self.term_degree(m) for m in f)

    # -- reduction
    def nf(self, f, full=True, exclude=-1):
        """Normal form of f; returns (r, scale) with r = scale * remainder."""
        f = dict(f)
        r = {}
        scale = Fraction(1)
        G = self.L.guard
        lms, lcs, polys = self.lms, self.lcs, self.polys
        pm = self.L.posmask
        reducers = self.reducers
        steps = 0
        while f:
            m = max(f)
            c = f[m]
            found = -1
            for j in reducers.get(m & pm, ()):
                if j != exclude and ((m | G) - lms[j]) & G == G:
                    found = j
                    break
            if found < 0:
                del f[m]
                r[m] = c
                if not full:
                    r.update(f)
                    break
                continue
            lc = lcs[found]
            q = m - lms[found]
            d = gcd(c, lc)
            a = lc // d
            b = c // d
            if a != 1:
                if a == -1:
                    f = {k: -v for k, v in f.items()}
                    if r:
                        r = {k: -v for k, v in r.items()}
                else:
                    f = {k: v * a for k, v in f.items()}
                    if r:
                        r = {k: v * a for k, v in r.items()}
                scale *= a
                steps += 1
            for mg, cg in polys[found].items():
                k = mg + q
                v = f.get(k, 0) - b * cg
                if v:
                    f[k] = v
                else:
                    del f[k]
            if steps >= 6:
                steps = 0
                g = gcd(*f.values(), *r.values())
                if g > 1:
                    f = {k: v // g for k, v in f.items()}
                    r = {k: v // g for k, v in r.items()}
                    scale /= g
        return r, scale

    # -- basis maintenance
    def add(self, f, sugar=None):
        """Reduce f against the current basis and insert it; False if it reduced to 0."""
        r, _ = self.nf(f)
        if not r:
            return False
        r, _ = primitive(r)
        self._insert(r, self.poly_sugar(f) if sugar is None else sugar)
        return True

    def add_reducer(self, h):
        """Register h as a reducer only (no pairs); used for plain normal forms."""
        idx = len(self.polys)
        lm = max(h)
        self.polys.append(h)
        self.lms.append(lm)
        self.lcs.append(h[lm])
        self.sugar.append(0)
        self.reducers.setdefault(lm & self.L.posmask, []).append(idx)

    def _insert(self, h, sugar):
        L = self.L
        idx = len(self.polys)
        lm = max(h)
        self.polys.append(h)
        self.lms.append(lm)
        self.lcs.append(h[lm])
        self.sugar.append(sugar)
        self.maxdeg = max(self.maxdeg, sugar)
        lms = self.lms
        posk = lm & L.posmask
        cands = list(self.reducers.get(posk, ()))
        lcm_h = {j: L.lcm(lm, lms[j]) for j in cands}
        pc = self.product_criterion
        coprime = {j: pc and lcm_h[j] == lm + lms[j] for j in cands}
        C = cands[:]
        D = []
        while C:
            j = C.pop()
            Lj = lcm_h[j]
            if coprime[j] or not (
                any(L.divides(lcm_h[k], Lj) for k in C) or any(L.divides(lcm_h[k], Lj) for k in D)
            ):
                D.append(j)
        old = self.pairs
        if old:
            keep = []
            for p in old:
                _, Lp, i, j = p
                if (Lp & L.posmask) == posk and L.divides(lm, Lp) and L.lcm(lms[i], lm) != Lp and L.lcm(lms[j], lm) != Lp:
                    continue
                keep.append(p)
            if len(keep) != len(old):
                heapq.heapify(keep)
            self.pairs = keep
        sug = self.sugar
        for j in D:
            if coprime[j]:
                continue
            Lj = lcm_h[j]
            s = max(sugar + L.deg(Lj) - L.deg(lm), sug[j] + L.deg(Lj) - L.deg(lms[j]))
            heapq.heappush(self.pairs, (s, Lj, j, idx))
        self.reducers[posk] = [j for j in self.reducers.get(posk, ()) if not L.divides(lm, lms[j])] + [idx]

    def spoly(self, i, j, lcm):
        gi, gj = self.polys[i], self.polys[j]
        ci, cj = self.lcs[i], self.lcs[j]
        qi = lcm - self.lms[i]
        qj = lcm - self.lms[j]
        d = gcd(ci, cj)
        a = cj // d
        b = ci // d
        s = {m + qi: a * c for m, c in gi.items()}
        for m, c in gj.items():
            k = m + qj
            v = s.get(k, 0) - b * c
            if v:
                s[k] = v
            else:
                del s[k]
        return s

    def run(self, degree_bound=None):
        """Process pairs (all of them, or those of sugar <= degree_bound)."""
        while self.pairs:
            s, lcm, i, j = self.pairs[0]
            if degree_bound is not None and s > degree_bound:
                break
            heapq.heappop(self.pairs)
            if self.max_degree is not None and s > self.max_degree:
                raise BudgetExceeded(f"{self.name}: degree {s} exceeds cap {self.max_degree}", self.npairs, s)
            self.npairs += 1
            if self.max_pairs is not None and self.npairs > self.max_pairs:
                raise BudgetExceeded(f"{self.name}: more than {self.max_pairs} S-pairs", self.npairs, s)
            if s * self.L.maxweight > VMAX:
                raise OverflowError("degree too large for packed monomials")
            h = self.spoly(i, j, lcm)
            if not h:
                continue
            r, _ = self.nf(h)
            if r:
                r, _ = primitive(r)
                self._insert(r, s)
        log.debug("%s: %d pairs, %d basis elements, max sugar %d", self.name, self.npairs, len(self.polys), self.maxdeg)
        return self

    # -- output
    def active(self):
        return [j for lst in self.reducers.values() for j in lst]

    def basis(self):
        return [self.polys[j] for j in self.active()]

    def reduced(self):
        """Reduced basis: tails normalised, primitive, positive leading coefficients."""
        out = []
        for j in self.active():
            r, _ = self.nf(self.polys[j], exclude=j)
            r, _ = primitive(r)
            out.append(r)
        out.sort(key=max, reverse=True)
        return out


def groebner(polys, layout, shifts=None, degree_bound=None, name="gb"):
    """Run Buchberger on a list of packed polynomials; returns the engine."""
    eng = Buchberger(layout, shifts=shifts, name=name)
    todo = [p for p in polys if p]
    todo.sort(key=lambda p: (eng.poly_sugar(p), max(p)))
    for p in todo:
        eng.add(p)
    eng.run(degree_bound)
    return eng
