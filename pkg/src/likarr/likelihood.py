"""Arrangements, their likelihood presentation, pre-likelihood and likelihood ideals."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import BudgetExceeded, ConsistencyError, ParseError
from .groebner import Ideal, contains, groebner_basis, reduce, saturate
from .poly import Polynomial, RingContext
from .syzygy import PolyMatrix, kernel, module_member, split_kernel

log = logging.getLogger(__name__)

GENTLE = "Gentle"
NOT_GENTLE = "NotGentle"
INCONCLUSIVE = "Inconclusive"


class Arrangement:
    """Homogeneous polynomials f_1..f_m in the x-variables of one ring."""

    def __init__(self, polys, ring: RingContext | None = None, s_names=None, check_coprime: bool = True):
        polys = list(polys)
        if not polys:
            raise ValueError("an arrangement needs at least one polynomial")
        ring = ring or polys[0].ring
        if ring.s_vars:
            raise ValueError("arrangement ring must not contain s-variables")
        for f in polys:
            if f.ring != ring:
                raise ValueError("all polynomials must live in the arrangement ring")
            if not f:
                raise ValueError("arrangement polynomials must be nonzero")
            if not f.is_homogeneous():
                raise ValueError(f"{f} is not homogeneous")
        self.ring = ring
        self.polys = tuple(polys)
        self.degrees = tuple(f.total_degree() for f in polys)
        self.m = len(polys)
        self.n = len(ring.x_vars)
        names = tuple(s_names) if s_names else tuple(f"s{i + 1}" for i in range(self.m))
        if len(names) != self.m:
            raise ValueError("need one s-variable name per polynomial")
        self.s_ring = ring.with_s(names)
        if self.m <= self.n:
            log.warning("m = %d <= n = %d: fewer polynomials than variables", self.m, self.n)
        if check_coprime:
            bad = common_factor_pairs(self.polys)
            if bad:
                i, j = bad[0]
                raise ValueError(f"polynomials {polys[i]} and {polys[j]} appear to share a factor")

    @classmethod
    def parse(cls, x_vars, texts, **kw) -> "Arrangement":
        ring = RingContext(tuple(x_vars), ())
        return cls([ring.parse(t) for t in texts], ring, **kw)

    def __repr__(self):
        return f"Arrangement({', '.join(map(str, self.polys))})"


# ---------------------------------------------------------------------------
# coprimality heuristic


def _univariate(f: Polynomial, a, b) -> list:
    """Coefficients (low to high) of f(a + t*b)."""
    out = [Fraction(0)]
    for e, c in f._terms.items():
        term = [Fraction(c)]
        for i, k in enumerate(e):
            for _ in range(k):
                term = _umul(term, [Fraction(a[i]), Fraction(b[i])])
        if len(term) > len(out):
            out += [Fraction(0)] * (len(term) - len(out))
        for i, c2 in enumerate(term):
            out[i] += c2
    return _trim(out)


def _umul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _trim(p):
    while p and not p[-1]:
        p = p[:-1]
    return p


def _umod(p, q):
    p = list(p)
    while len(p) >= len(q):
        c = p[-1] / q[-1]
        shift = len(p) - len(q)
        for i, b in enumerate(q):
            p[shift + i] -= c * b
        p = _trim(p[:-1])
    return p


def _ugcd_degree(p, q):
    while q:
        p, q = q, _umod(p, q)
    return len(p) - 1


def common_factor_pairs(polys, seed: int = 20240601) -> list:
    """Index pairs whose restrictions to a random line share a root (likely a common factor)."""
    if len(polys) < 2:
        return []
    n = polys[0].ring.nvars
    rng = random.Random(seed)
    a = [rng.randint(-97, 97) for _ in range(n)]
    b = [rng.randint(-97, 97) for _ in range(n)]
    restricted = [_univariate(f, a, b) for f in polys]
    return [
        (i, j)
        for i, j in combinations(range(len(polys)), 2)
        if restricted[i] and restricted[j] and _ugcd_degree(restricted[i], restricted[j]) > 0
    ]


# ---------------------------------------------------------------------------
# presentation


@dataclass
class LikelihoodPresentation:
    Q: PolyMatrix
    A: PolyMatrix
    B: PolyMatrix

    @property
    def l(self) -> int:  # noqa: E743
        return self.A.ncols

    def column_degrees(self) -> list:
        """Degree of each nonzero column of A."""
        out = []
        for col in self.A.columns():
            nz = [f.total_degree() for f in col if f]
            if nz:
                out.append(max(nz))
        return out


def build_Q(arr: Arrangement) -> PolyMatrix:
    """[diag(f_1..f_m) | Jacobian]."""
    R = arr.ring
    rows = []
    for i, f in enumerate(arr.polys):
        diag = [f if j == i else R.zero() for j in range(arr.m)]
        rows.append(diag + [f.diff(v) for v in R.x_vars])
    return PolyMatrix(R, rows)


def euler_vector(arr: Arrangement) -> tuple:
    R = arr.ring
    return tuple(R.const(d) for d in arr.degrees) + tuple(-x for x in R.xs())


def presentation(arr: Arrangement, check_euler: bool = True) -> LikelihoodPresentation:
    Q = build_Q(arr)
    K = kernel(Q)
    if check_euler:
        e = euler_vector(arr)
        if any(Q.apply(e)):
            raise ConsistencyError("Euler vector is not a syzygy")
        if not module_member(e, K.columns(), arr.ring):
            raise ConsistencyError("Euler syzygy missing from the computed kernel")
    A, B = split_kernel(K, arr.m, arr.n)
    return LikelihoodPresentation(Q, A, B)


def evaluate_derivation(arr: Arrangement, col, pres: LikelihoodPresentation | None = None) -> Polynomial:
    """s^T col for a column of A (checked to lie in the span of A)."""
    col = tuple(col)
    if len(col) != arr.m:
        raise ValueError(f"column must have length {arr.m}")
    if any(col):
        pres = pres or presentation(arr, check_euler=False)
        if not module_member(col, pres.A.columns(), arr.ring):
            raise ValueError("column is not in the span of logarithmic derivations")
    S = arr.s_ring
    out = S.zero()
    for s, a in zip(S.ss(), col):
        if a:
            out = out + s * a.to_ring(S)
    return out


def pre_likelihood_ideal(arr: Arrangement, pres: LikelihoodPresentation | None = None) -> Ideal:
    """<s^T A>, one generator per nonzero column of A."""
    pres = pres or presentation(arr)
    S = arr.s_ring
    gens = []
    for col in pres.A.columns():
        if any(col):
            g = S.zero()
            for s, a in zip(S.ss(), col):
                if a:
                    g = g + s * a.to_ring(S)
            gens.append(g.primitive())
    for g in gens:
        bd = g.bidegree()
        if bd is None or bd[1] != 1:
            raise ConsistencyError(f"pre-likelihood generator {g} is not of s-degree 1")
    return Ideal(S, gens)


# ---------------------------------------------------------------------------
# witnesses and saturation


def _determinant(M) -> Polynomial:
    """Laplace expansion along the first row (matrices here are small)."""
    memo = {}
    k = len(M)

    def det(r, cols):
        if r == k:
            return None
        key = (r, cols)
        if key in memo:
            return memo[key]
        acc = None
        for pos, c in enumerate(cols):
            a = M[r][c]
            if not a:
                continue
            rest = cols[:pos] + cols[pos + 1 :]
            sub = det(r + 1, rest)
            term = a if sub is None else a * sub
            if pos % 2:
                term = -term
            acc = term if acc is None else acc + term
        if acc is None:
            acc = M[0][0].ring.zero()
        memo[key] = acc
        return acc

    return det(0, tuple(range(k)))


def jacobian_minors(arr: Arrangement) -> list:
    """All maximal minors of the m x n Jacobian (nonzero and zero)."""
    J = [[f.diff(v) for v in arr.ring.x_vars] for f in arr.polys]
    k = min(arr.m, arr.n)
    out = []
    for rows in combinations(range(arr.m), k):
        for cols in combinations(range(arr.n), k):
            out.append(_determinant([[J[r][c] for c in cols] for r in rows]))
    return out


def saturation_witnesses(arr: Arrangement, witness: Polynomial | None = None, skip_minors: bool = False) -> list:
    """f_i by ascending degree, then nonconstant maximal Jacobian minors by degree; deduplicated."""
    seen = set()
    out = []

    def push(p):
        if not p or p.is_constant():
            return
        p = p.primitive()
        if p in seen:
            return
        seen.add(p)
        out.append(p)

    if witness is not None:
        push(witness.to_ring(arr.ring))
    for f in sorted(arr.polys, key=Polynomial.total_degree):
        push(f)
    if not skip_minors:
        minors = [g for g in jacobian_minors(arr) if g and not g.is_constant()]
        for g in sorted(minors, key=lambda g: (g.total_degree(), str(g))):
            push(g)
    return out


@dataclass
class GentleVerdict:
    status: str
    witness: Polynomial | None = None
    ideal: Ideal | None = None
    pre_ideal: Ideal | None = None
    passes: int = 0
    witnesses: list = field(default_factory=list)
    error: str | None = None

    @property
    def gentle(self) -> bool:
        return self.status == GENTLE


def likelihood_computation(
    arr: Arrangement,
    witness: Polynomial | None = None,
    skip_minors: bool = False,
    I0: Ideal | None = None,
    max_passes: int = 10,
) -> GentleVerdict:
    """Saturate I_0 witness by witness until a full pass changes nothing."""
    I0 = I0 or pre_likelihood_ideal(arr)
    ws = saturation_witnesses(arr, witness, skip_minors)
    S = arr.s_ring
    cur = I0
    first = None
    passes = 0
    try:
        while passes < max_passes:
            passes += 1
            changed = False
            for w in ws:
                nxt = saturate(cur, w.to_ring(S))
                if not contains(cur, nxt):
                    log.info("saturation at %s enlarged the ideal", w)
                    changed = True
                    if first is None:
                        first = w
                    cur = Ideal(S, groebner_basis(nxt))
            if not changed:
                break
        else:
            raise BudgetExceeded(f"no fixed point after {max_passes} passes", 0, 0)
    except BudgetExceeded as exc:
        return GentleVerdict(INCONCLUSIVE, first, cur, I0, passes, ws, str(exc))
    status = GENTLE if first is None else NOT_GENTLE
    return GentleVerdict(status, first, cur, I0, passes, ws)


def likelihood_ideal(arr: Arrangement, **kw) -> Ideal:
    """I_0 : p^inf; raises BudgetExceeded when a cap was hit."""
    v = likelihood_computation(arr, **kw)
    if v.status == INCONCLUSIVE:
        raise BudgetExceeded(v.error or "budget exceeded")
    return v.ideal


def is_gentle(arr: Arrangement, **kw) -> GentleVerdict:
    return likelihood_computation(arr, **kw)


def reduces_to_zero(f: Polynomial, I: Ideal) -> bool:
    return not reduce(f, groebner_basis(I))


def parse_arrangement(text: str, **kw) -> Arrangement:
    """``vars x1 x2 ...`` then one polynomial per line; ``#`` starts a comment."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0].split()[0] != "vars":
        raise ParseError("arrangement file must start with 'vars <names>'")
    names = lines[0].split()[1:]
    if not names:
        raise ParseError("no variables declared")
    if len(lines) < 2:
        raise ParseError("arrangement file lists no polynomials")
    try:
        ring = RingContext(tuple(names), ())
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    return Arrangement([ring.parse(ln) for ln in lines[1:]], ring, **kw)
