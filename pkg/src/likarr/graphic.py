"""Graphic arrangements: chordality, Saito and separator derivations, octahedron search."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations, permutations

from .errors import ConsistencyError, ParseError
from .groebner import Ideal
from .likelihood import Arrangement
from .poly import Polynomial, RingContext
from .syzygy import prune

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 1..n."""

    n: int
    edges: tuple

    def __init__(self, n: int, edges):
        norm = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"edge {i}-{j} outside vertices 1..{n}")
            e = (min(i, j), max(i, j))
            if e in norm:
                raise ValueError(f"duplicate edge {i}-{j}")
            norm.add(e)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def neighbors(self, v) -> set:
        return {j if i == v else i for i, j in self.edges if v in (i, j)}

    def adjacency(self) -> dict:
        adj = {v: set() for v in self.vertices}
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def has_edge(self, i, j) -> bool:
        return (min(i, j), max(i, j)) in set(self.edges)

    def induced(self, vertices) -> "Graph":
        """Induced subgraph, relabelled 1..k in increasing order."""
        vs = sorted(vertices)
        pos = {v: k + 1 for k, v in enumerate(vs)}
        return Graph(len(vs), [(pos[i], pos[j]) for i, j in self.edges if i in pos and j in pos])

    def is_connected(self) -> bool:
        return len(components(self, set(self.vertices))) <= 1

    def __str__(self):
        return f"n {self.n}\n" + "".join(f"{i} {j}\n" for i, j in self.edges)


def complete_graph(n: int) -> Graph:
    return Graph(n, combinations(range(1, n + 1), 2))


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, i % n + 1) for i in range(1, n + 1)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(1, n)])


def octahedron() -> Graph:
    """K6 minus the perfect matching {1,4}, {2,5}, {3,6}."""
    return Graph(6, [e for e in combinations(range(1, 7), 2) if e not in {(1, 4), (2, 5), (3, 6)}])


def parse_graph(text: str) -> Graph:
    """``n <count>`` then one ``i j`` edge per line; ``#`` starts a comment."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty graph file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "n" or not head[1].isdigit():
        raise ParseError(f"expected 'n <count>', got {lines[0]!r}")
    n = int(head[1])
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ParseError(f"expected 'i j', got {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    try:
        return Graph(n, edges)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def components(G: Graph, vertices) -> list:
    """Connected components of the subgraph induced on ``vertices`` (sorted lists)."""
    adj = G.adjacency()
    left = set(vertices)
    out = []
    while left:
        start = min(left)
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w in left and w not in seen:
                    seen.add(w)
                    stack.append(w)
        left -= seen
        out.append(sorted(seen))
    return sorted(out)


def canonical_form(G: Graph) -> tuple:
    """Lexicographically least edge list over all relabellings (small n only)."""
    best = None
    for perm in permutations(range(1, G.n + 1)):
        cand = tuple(sorted((min(perm[i - 1], perm[j - 1]), max(perm[i - 1], perm[j - 1])) for i, j in G.edges))
        if best is None or cand < best:
            best = cand
    return best


def connected_graphs(n: int) -> list:
    """One representative per isomorphism class of connected graphs on n vertices."""
    if n > 6:
        raise ValueError("isomorphism-class enumeration is limited to n <= 6")
    pairs = list(combinations(range(1, n + 1), 2))
    seen = set()
    out = []
    for mask in range(1 << len(pairs)):
        G = Graph(n, [p for k, p in enumerate(pairs) if mask >> k & 1])
        if not G.is_connected():
            continue
        key = canonical_form(G)
        if key not in seen:
            seen.add(key)
            out.append(Graph(n, key))
    return out


# ---------------------------------------------------------------------------
# arrangement and chordality


def s_name(i: int, j: int, n: int) -> str:
    return f"s{i}{j}" if n < 10 else f"s{i}_{j}"


def graphic_arrangement(G: Graph, drop_last: bool = False) -> Arrangement:
    """Forms x_i - x_j over the edges in lexicographic order.

    With ``drop_last`` the coordinate x_n is set to 0, which views the
    arrangement in the projective space of dimension n - 2.
    """
    if not G.edges:
        raise ValueError("graph has no edges")
    if not G.is_connected():
        log.warning("graph is not connected")
    names = [f"x{i}" for i in G.vertices]
    if drop_last:
        names = names[:-1]
    R = RingContext(tuple(names), ())

    def x(i):
        return R.zero() if drop_last and i == G.n else R.var(f"x{i}")

    forms = [x(i) - x(j) for i, j in G.edges]
    return Arrangement(forms, R, s_names=[s_name(i, j, G.n) for i, j in G.edges])


def is_chordal(G: Graph) -> bool:
    """Maximum cardinality search, then a perfect-elimination check."""
    adj = G.adjacency()
    weight = {v: 0 for v in G.vertices}
    order = []
    numbered = set()
    while len(order) < G.n:
        v = max((w for w in G.vertices if w not in numbered), key=lambda w: (weight[w], -w))
        order.append(v)
        numbered.add(v)
        for w in adj[v]:
            if w not in numbered:
                weight[w] += 1
    # reverse of the MCS order is a perfect elimination order iff G is chordal
    pos = {v: k for k, v in enumerate(order)}
    for v in order:
        earlier = [w for w in adj[v] if pos[w] < pos[v]]
        if not earlier:
            continue
        parent = max(earlier, key=pos.get)
        if any(w != parent and w not in adj[parent] for w in earlier):
            return False
    return True


# ---------------------------------------------------------------------------
# derivations evaluated at the log-likelihood


def _s_ring(G: Graph) -> RingContext:
    return graphic_arrangement(G).s_ring


def saito_evaluation(G: Graph, k: int, ring: RingContext | None = None) -> Polynomial:
    """theta_k applied to the log-likelihood: sum over edges of h_{k-1}(x_i, x_j) s_ij."""
    if not 0 <= k <= max(G.n - 1, 0):
        raise ValueError(f"k must lie in 0..{G.n - 1}")
    S = ring or _s_ring(G)
    out = S.zero()
    for i, j in G.edges:
        xi, xj = S.var(f"x{i}"), S.var(f"x{j}")
        h = S.zero()
        for e in range(k):
            h = h + xi**e * xj ** (k - 1 - e)
        out = out + h * S.var(s_name(i, j, G.n))
    return out


@dataclass(frozen=True)
class Separator:
    T: tuple
    components: tuple


def _separates(G: Graph, T) -> list:
    rest = set(G.vertices) - set(T)
    comps = components(G, rest)
    return comps if len(comps) >= 2 else []


def minimal_separators(G: Graph, bound: int = 12) -> list:
    """All inclusion-minimal vertex sets whose removal disconnects G."""
    if G.n > bound:
        raise ValueError(f"separator enumeration limited to n <= {bound}")
    found = []
    for size in range(G.n - 1):
        for T in combinations(G.vertices, size):
            if any(set(F.T) <= set(T) for F in found):
                continue
            comps = _separates(G, T)
            if comps:
                found.append(Separator(T, tuple(tuple(c) for c in comps)))
    return found


def all_separators(G: Graph, bound: int = 12) -> list:
    """Every vertex set whose removal disconnects G, with its components."""
    if G.n > bound:
        raise ValueError(f"separator enumeration limited to n <= {bound}")
    found = []
    for size in range(G.n - 1):
        for T in combinations(G.vertices, size):
            comps = _separates(G, T)
            if comps:
                found.append(Separator(T, tuple(tuple(c) for c in comps)))
    return found


def separator_derivation_evaluation(G: Graph, T, C, ring: RingContext | None = None) -> Polynomial:
    """theta_C^T applied to the log-likelihood, expanded."""
    T = tuple(sorted(T))
    C = tuple(sorted(C))
    comps = _separates(G, T)
    if not comps:
        raise ValueError(f"{set(T)} does not separate the graph")
    if list(C) not in comps:
        raise ValueError(f"{set(C)} is not a component of G minus {set(T)}")
    S = ring or _s_ring(G)
    inC = set(C)

    def image(i):
        if i not in inC:
            return S.zero()
        out = S.one()
        for t in T:
            out = out * (S.var(f"x{i}") - S.var(f"x{t}"))
        return out

    total = S.zero()
    for i, j in G.edges:
        if i not in inC and j not in inC:
            continue
        num = image(i) - image(j)
        try:
            q = num.exact_div(S.var(f"x{i}") - S.var(f"x{j}"))
        except ValueError as exc:
            raise ConsistencyError(f"edge {i}{j}: derivation image is not divisible") from exc
        total = total + q * S.var(s_name(i, j, G.n))
    return total


def _coefficient_vector(g: Polynomial, G: Graph, R: RingContext) -> tuple:
    """Coefficients of the s_ij in an s-linear polynomial, as polynomials in x."""
    S = g.ring
    nx = len(R.x_vars)
    idx = {S.index(s_name(i, j, G.n)): k for k, (i, j) in enumerate(G.edges)}
    parts = [dict() for _ in G.edges]
    for e, c in g._terms.items():
        (si,) = [p for p in range(nx, len(e)) if e[p]]
        parts[idx[si]][e[:nx]] = c
    return tuple(Polynomial._raw(R, t) for t in parts)


def graphic_prelikelihood_generators(G: Graph, bound: int = 12, prune_redundant: bool = True) -> list:
    """theta_k (k = 1..n-1) and separator derivations, evaluated at the log-likelihood.

    Candidates come from every separator (minimal ones alone do not always
    suffice, e.g. two triangles sharing a vertex).  Redundant ones are
    dropped degree by degree as module elements over the x-ring, so within
    one degree the theta_k and then smaller components win.
    """
    S = _s_ring(G)
    cands = [saito_evaluation(G, k, S) for k in range(1, G.n)]
    seps = []
    for sep in all_separators(G, bound):
        for C in sep.components:
            seps.append((tuple(C), sep.T))
    for C, T in sorted(seps):
        cands.append(separator_derivation_evaluation(G, T, C, S))
    cands = [g for g in cands if g]
    if not prune_redundant:
        return cands
    R = RingContext(S.x_vars, ())
    vecs = {_coefficient_vector(g, G, R): g for g in cands}
    order = {v: k for k, v in enumerate(vecs)}

    kept = prune(sorted(vecs, key=lambda v: (_vec_degree(v), order[v])), [0] * len(G.edges), R, presorted=True)
    return [vecs[v] for v in kept]


def _vec_degree(v) -> int:
    return max(f.total_degree() for f in v if f)


def generator_ideal(G: Graph, **kw) -> Ideal:
    gens = graphic_prelikelihood_generators(G, **kw)
    return Ideal(_s_ring(G), gens)


# ---------------------------------------------------------------------------
# octahedron obstruction


def _is_octahedron(blocks, adj) -> bool:
    where = {v: b for b, blk in enumerate(blocks) for v in blk}
    nbrs = [set() for _ in blocks]
    for b, blk in enumerate(blocks):
        for v in blk:
            for w in adj[v]:
                c = where.get(w)
                if c is not None and c != b:
                    nbrs[b].add(c)
    return all(len(s) == 4 for s in nbrs)


def _connected_block(blk, adj) -> bool:
    blk = set(blk)
    start = next(iter(blk))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w in blk and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == blk


def octahedron_obstruction(G: Graph, bound: int = 9) -> bool:
    """Can the octahedron be reached by contracting edges of an induced subgraph?

    Equivalent search: six disjoint connected vertex blocks whose quotient
    graph (edges of G between blocks) is 4-regular on six vertices, which
    is the octahedron.
    """
    if G.n > bound:
        raise ValueError(f"obstruction search limited to n <= {bound}")
    if G.n < 6:
        return False
    adj = G.adjacency()
    verts = list(G.vertices)
    blocks = []

    def place(k):
        if len(blocks) + (len(verts) - k) < 6:
            return False
        if k == len(verts):
            return (
                len(blocks) == 6
                and all(_connected_block(b, adj) for b in blocks)
                and _is_octahedron(blocks, adj)
            )
        v = verts[k]
        if place(k + 1):  # v unused
            return True
        for b in blocks:
            b.append(v)
            if place(k + 1):
                return True
            b.pop()
        if len(blocks) < 6:
            blocks.append([v])
            if place(k + 1):
                return True
            blocks.pop()
        return False

    return place(0)
