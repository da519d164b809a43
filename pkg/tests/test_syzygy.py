import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load
from likarr.errors import ConsistencyError
from likarr.likelihood import build_Q, presentation
from likarr.poly import RingContext
from likarr.syzygy import (
    PolyMatrix,
    homogeneous_shifts,
    kernel,
    module_gb,
    module_member,
    prune,
    split_kernel,
)

XY = RingContext(("x", "y"))
XYZ = RingContext(("x", "y", "z"))


def row(ring, *texts):
    return PolyMatrix(ring, [[ring.parse(t) for t in texts]])


def vec(ring, *texts):
    return tuple(ring.parse(t) for t in texts)


def same_span(U, V, ring):
    return all(module_member(u, V, ring) for u in U) and all(module_member(v, U, ring) for v in V)


def test_kernel_of_x_one():
    K = kernel(row(XY, "x", "1"))
    assert K.shape == (2, 1)
    assert same_span(K.columns(), [vec(XY, "1", "-x")], XY)


def test_kernel_of_zero_matrix_is_everything():
    K = kernel(PolyMatrix.zeros(XY, 1, 3))
    assert same_span(K.columns(), [vec(XY, "1", "0", "0"), vec(XY, "0", "1", "0"), vec(XY, "0", "0", "1")], XY)
    assert K.shape == (3, 3)


def test_kernel_of_injective_map_is_empty():
    K = kernel(row(XY, "x"))
    assert K.shape == (1, 0)


def test_kernel_of_two_variables_is_koszul():
    K = kernel(row(XY, "x", "y"))
    assert K.shape == (2, 1)
    assert same_span(K.columns(), [vec(XY, "y", "-x")], XY)


def test_module_gb_pot_example():
    G = module_gb([vec(XY, "x", "y"), vec(XY, "y", "x")], order="pot")
    gens = [vec(XY, "x", "y"), vec(XY, "y", "x")]
    assert same_span(G, gens, XY)
    # POT eliminates the first position: (0, x^2 - y^2) is in the module
    assert module_member(vec(XY, "0", "x^2-y^2"), G, XY)
    assert any(not g[0] for g in G)


def test_module_member_examples():
    gens = [vec(XY, "x", "0"), vec(XY, "0", "y")]
    assert module_member(vec(XY, "x^2", "x*y"), gens, XY)
    assert not module_member(vec(XY, "y", "0"), gens, XY)
    assert module_member(vec(XY, "0", "0"), [], XY)
    assert not module_member(vec(XY, "1", "0"), [], XY)


def test_module_gb_rank_mismatch():
    with pytest.raises(ValueError):
        module_gb([vec(XY, "x"), vec(XY, "x", "y")])


def test_homogeneous_shifts():
    assert homogeneous_shifts(row(XY, "x", "y^2")) == ([0], [1, 2])
    assert homogeneous_shifts(row(XY, "x+1", "y")) is None
    # inconsistent degrees around a cycle
    M = PolyMatrix(XY, [[XY.parse("x"), XY.parse("y")], [XY.parse("x"), XY.parse("y^2")]])
    assert homogeneous_shifts(M) is None


def test_prune_drops_redundant_vectors():
    vs = [vec(XY, "x", "0"), vec(XY, "x^2", "0"), vec(XY, "0", "y"), vec(XY, "x*y", "x*y")]
    kept = prune(vs, [0, 0], XY)
    assert set(kept) == {vec(XY, "x", "0"), vec(XY, "0", "y")}


def test_split_kernel_shape_check():
    K = kernel(row(XY, "x", "y"))
    A, B = split_kernel(K, 1, 1)
    assert A.shape == (1, 1) and B.shape == (1, 1)
    with pytest.raises(ValueError):
        split_kernel(K, 2, 1)


def test_braid_k4_kernel():
    arr = load("braid_k4.arr")
    pres = presentation(arr)
    assert pres.l == 4
    assert (pres.Q @ PolyMatrix.from_columns(arr.ring, [a + b for a, b in zip(pres.A.columns(), pres.B.columns())])).is_zero()
    # exactly one column has A = 0
    assert sum(1 for c in pres.A.columns() if not any(c)) == 1
    # the B block spans the Vandermonde derivations sum_i x_i^k d/dx_i, k = 0..3
    R = arr.ring
    vander = [tuple(x**k for x in R.xs()) for k in range(4)]
    assert same_span(pres.B.columns(), vander, R)


def test_kernel_is_deterministic():
    arr = load("braid_k4.arr")
    Q = build_Q(arr)
    assert str(kernel(Q)) == str(kernel(Q))


def test_inhomogeneous_kernel():
    Q = row(XY, "x+1", "y", "x*y")
    K = kernel(Q)
    assert (Q @ K).is_zero()
    expected = [vec(XY, "0", "x", "-1"), vec(XY, "y", "-x-1", "0")]
    assert same_span(K.columns(), expected, XY)


# -- properties


def _monomial(ring, e):
    return ring.monomial(tuple(e))


def _lcm_syzygies(monos, ring):
    """Pairwise syzygies of a row of monomials; they generate the kernel."""
    out = []
    k = len(monos)
    for i in range(k):
        for j in range(i + 1, k):
            L = tuple(max(a, b) for a, b in zip(monos[i], monos[j]))
            v = [ring.zero()] * k
            v[i] = ring.monomial(tuple(a - b for a, b in zip(L, monos[i])))
            v[j] = -ring.monomial(tuple(a - b for a, b in zip(L, monos[j])))
            out.append(tuple(v))
    return out


exponent = st.tuples(*[st.integers(0, 3)] * 3)


@settings(max_examples=30, deadline=None)
@given(st.lists(exponent, min_size=1, max_size=4))
def test_kernel_of_monomial_row_matches_lcm_syzygies(monos):
    Q = PolyMatrix(XYZ, [[_monomial(XYZ, e) for e in monos]])
    K = kernel(Q)
    assert K.ncols == 0 or (Q @ K).is_zero()
    assert same_span(K.columns(), _lcm_syzygies(monos, XYZ), XYZ)


def _random_form(rng, ring, d):
    f = ring.zero()
    while not f:
        for _ in range(3):
            a = rng.randint(0, d)
            b = rng.randint(0, d - a)
            f = f + ring.monomial((a, b, d - a - b), rng.randint(-3, 3))
    return f


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 3))
def test_kernel_contains_koszul_syzygies(seed, k):
    rng = random.Random(seed)
    fs = [_random_form(rng, XYZ, rng.randint(1, 2)) for _ in range(k)]
    Q = PolyMatrix(XYZ, [fs])
    K = kernel(Q)
    for i in range(k):
        for j in range(i + 1, k):
            v = [XYZ.zero()] * k
            v[i], v[j] = fs[j], -fs[i]
            assert module_member(tuple(v), K.columns(), XYZ)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_kernel_of_random_matrix_annihilates(seed):
    rng = random.Random(seed)
    rows = [[_random_form(rng, XYZ, 1) for _ in range(3)] for _ in range(2)]
    Q = PolyMatrix(XYZ, rows)
    K = kernel(Q)
    assert K.ncols >= 1
    assert (Q @ K).is_zero()
    # the cofactor syzygy of a 2x3 matrix lies in the kernel
    def minor(a, b):
        return rows[0][a] * rows[1][b] - rows[0][b] * rows[1][a]

    cof = (minor(1, 2), -minor(0, 2), minor(0, 1))
    assert module_member(cof, K.columns(), XYZ)


def test_consistency_error_is_an_assertion():
    assert issubclass(ConsistencyError, AssertionError)
