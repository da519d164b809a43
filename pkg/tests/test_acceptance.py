"""Acceptance gate: one test per criterion, each printing a pass/fail line."""

import random
import time
from contextlib import contextmanager

import pytest

from conftest import ACCEPTANCE, is_groebner, load
from likarr.graphic import (
    Graph,
    complete_graph,
    connected_graphs,
    cycle_graph,
    generator_ideal,
    graphic_arrangement,
    is_chordal,
    minimal_separators,
    octahedron,
    octahedron_obstruction,
    saito_evaluation,
    separator_derivation_evaluation,
)
from likarr.groebner import Ideal, codim, contains, groebner_basis, ideal_equal, ideal_member, quotient, saturate
from likarr.likelihood import (
    GENTLE,
    NOT_GENTLE,
    Arrangement,
    euler_vector,
    is_gentle,
    pre_likelihood_ideal,
    presentation,
    reduces_to_zero,
)
from likarr.multidegree import ci_ml_degree, ml_degree, multidegree
from likarr.poly import BIGREVLEX, GREVLEX, RingContext
from likarr.syzygy import PolyMatrix, module_member


@contextmanager
def criterion(number, title, limit):
    """Time a criterion, enforce its limit and record a one-line verdict."""
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < limit, f"took {elapsed:.1f} s, limit {limit} s"
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        line = f"[{number}] FAIL  {title}  ({elapsed:.1f} s): {exc}"
        ACCEPTANCE.append(line)
        print(line)
        raise
    line = f"[{number}] PASS  {title}  ({elapsed:.1f} s, limit {limit} s)"
    ACCEPTANCE.append(line)
    print(line)


def ideal_of(ring, *texts):
    return Ideal(ring, [ring.parse(t) for t in texts])


def test_1_braid_k4_pipeline():
    with criterion(1, "K4 braid pipeline", 60):
        arr = load("braid_k4.arr")
        pres = presentation(arr)
        K = PolyMatrix.from_columns(arr.ring, [a + b for a, b in zip(pres.A.columns(), pres.B.columns())])
        assert K.ncols == 4
        assert (pres.Q @ K).is_zero()
        vander = [tuple(x**k for x in arr.ring.xs()) for k in range(4)]
        B = pres.B.columns()
        assert all(module_member(v, B, arr.ring) for v in vander)
        assert all(module_member(b, vander, arr.ring) for b in B)
        I0 = pre_likelihood_ideal(arr, pres)
        assert sorted(g.bidegree() for g in I0.generators) == [(0, 1), (1, 1), (2, 1)]
        v = is_gentle(arr)
        assert v.status == GENTLE
        assert ml_degree(multidegree(v.ideal)) == 2
        assert ci_ml_degree([1, 2]) == 2


def test_2_coordinate_cubic():
    with criterion(2, "three lines and a cubic: I = I0 + <q>, not gentle", 60):
        arr = load("coordinate_cubic.arr")
        S = arr.s_ring
        printed = ideal_of(
            S,
            "s1+s2+s3+3*s4",
            "x*z*s2 - (3*y^2+x*z)*s3",
            "y*z*s2 + (3*x^2+2*y*z)*s3 + 3*y*z*s4",
            "(x^3+y^3)*s2 + (3*y^3+x*y*z)*s3 + (3*y^3+x*y*z)*s4",
        )
        I0 = pre_likelihood_ideal(arr)
        assert ideal_equal(I0, printed)
        q = S.parse("z^2*s2^2 + z^2*s2*s3 + 9*x*y*s3^2 - 2*z^2*s3^2 + 3*z^2*s2*s4 - 3*z^2*s3*s4")
        v = is_gentle(arr)
        assert v.status == NOT_GENTLE
        assert ideal_equal(v.ideal, I0 + Ideal(S, [q]))
        assert reduces_to_zero(q, v.ideal)
        assert not reduces_to_zero(q, I0)


def test_3_special_four_conics():
    with criterion(3, "special four conics: printed likelihood ideal, codim 3, ML degree 1", 300):
        arr = load("special_four_conics.arr", check_coprime=False)
        S = arr.s_ring
        sp = "(s1+s2+s3+s4)"
        printed = ideal_of(
            S,
            f"2*{sp} + s5",
            f"{sp}*x1 - (s1+s3)*x3",
            f"{sp}*x2 - (s1+s2)*x3",
            "(s1+s2)*x1 - (s1+s3)*x2",
        )
        v = is_gentle(arr)
        assert ideal_equal(v.ideal, printed)
        assert codim(v.ideal) == 3
        assert ml_degree(multidegree(v.ideal)) == 1


def test_4_independence_toric():
    with criterion(4, "independence model: gentle, printed ideal; plane model multidegree", 300):
        arr = load("independence_toric.arr")
        S = arr.s_ring
        printed = ideal_of(S, "s1+s2+s5", "s3+s4+s5", "(b0+b1)*s4 + b1*s5", "(a0+a1)*s2 + a1*s5")
        v = is_gentle(arr)
        assert v.status == GENTLE
        assert ideal_equal(v.ideal, printed) and ideal_equal(v.pre_ideal, printed)
        plane = is_gentle(load("minimal_toric_plane.arr"))
        form = multidegree(plane.ideal)
        assert str(form) == "p^2*u + 2*p*u^2 + u^3"
        assert ml_degree(form) == 1


def _z(S, i, j):
    return S.var(f"x{i}") - S.var(f"x{j}")


def test_5_graphic_combinatorics():
    with criterion(5, "octahedron separators, printed derivations, chordality, obstruction", 10):
        G = octahedron()
        assert sorted(s.T for s in minimal_separators(G)) == [(1, 2, 4, 5), (1, 3, 4, 6), (2, 3, 5, 6)]
        S = graphic_arrangement(G).s_ring
        for c, T in [(1, (2, 3, 5, 6)), (2, (1, 3, 4, 6)), (3, (1, 2, 4, 5))]:
            want = S.zero()
            for j in T:
                coeff = S.one()
                for k in T:
                    if k != j:
                        coeff = coeff * _z(S, c, k)
                want = want + coeff * S.var(f"s{min(c, j)}{max(c, j)}")
            assert separator_derivation_evaluation(G, T, (c,), S) == want
        for H in [G, complete_graph(4), cycle_graph(5), Graph(3, [(1, 2), (2, 3)])]:
            assert not saito_evaluation(H, 0)
        assert is_chordal(complete_graph(4)) and not is_chordal(G)
        assert octahedron_obstruction(G)
        rng = random.Random(5)
        for n in (7, 8):
            edges = list(G.edges)
            for v in range(7, n + 1):
                edges += [(u, v) for u in rng.sample(range(1, v), 3)]
            assert octahedron_obstruction(Graph(n, edges))


def test_6_graphic_generators_match_pipeline():
    with criterion(6, "separator generators equal I0 and all verdicts Gentle for n <= 5", 600):
        checked = 0
        for n in range(2, 6):
            for G in connected_graphs(n):
                arr = graphic_arrangement(G)
                I0 = pre_likelihood_ideal(arr)
                assert ideal_equal(generator_ideal(G), I0), G
                assert is_gentle(arr, I0=I0).status == GENTLE, G
                checked += 1
        assert checked == 30


def _random_form(rng, ring, d):
    f = ring.zero()
    n = ring.nvars
    while not f:
        for _ in range(3):
            e = [0] * n
            for _ in range(d):
                e[rng.randrange(n)] += 1
            f = f + ring.monomial(tuple(e), rng.randint(-3, 3))
    return f


def _random_lines(rng, m):
    R = RingContext(("x", "y", "z"))
    forms, seen = [], set()
    while len(forms) < m:
        c = [rng.randint(-2, 2) for _ in range(3)]
        f = sum((R.monomial(tuple(int(i == k) for i in range(3)), a) for k, a in enumerate(c)), R.zero())
        if not f:
            continue
        key = f.primitive()
        key = key if key.leading_term(GREVLEX)[1] > 0 else -key
        if key not in seen:
            seen.add(key)
            forms.append(f)
    return Arrangement(forms, R)


def test_7_property_suites():
    with criterion(7, "property suites: Buchberger, Euler, sum d_i s_i, saturation, order, lines", 600):
        rng = random.Random(7)
        R = RingContext(("x", "y", "z"))
        goldens = []
        # Euler syzygy and sum d_i s_i for 50 random arrangements
        for _ in range(50):
            fs = [_random_form(rng, R, rng.randint(1, 2)) for _ in range(rng.randint(2, 4))]
            arr = Arrangement(fs, R, check_coprime=False)
            pres = presentation(arr, check_euler=False)
            e = euler_vector(arr)
            K = [a + b for a, b in zip(pres.A.columns(), pres.B.columns())]
            assert not any(pres.Q.apply(e)) and module_member(e, K, R)
            I0 = pre_likelihood_ideal(arr, pres)
            S = arr.s_ring
            assert ideal_member(sum((s * d for s, d in zip(S.ss(), arr.degrees)), S.zero()), I0)
        # golden ideals: Buchberger check, saturation idempotence, order invariance
        for name, kw in [
            ("braid_k4.arr", {}),
            ("coordinate_cubic.arr", {}),
            ("special_four_conics.arr", {"check_coprime": False}),
            ("independence_toric.arr", {}),
            ("minimal_toric_plane.arr", {}),
        ]:
            v = is_gentle(load(name, **kw))
            goldens.append(v)
            for I in (v.pre_ideal, v.ideal):
                for order in (GREVLEX, BIGREVLEX):
                    assert is_groebner(groebner_basis(I, order), order)
                assert multidegree(I, BIGREVLEX) == multidegree(I, GREVLEX)
            S = v.ideal.ring
            for w in v.witnesses:
                assert ideal_equal(saturate(v.ideal, w.to_ring(S)), v.ideal)
        # line arrangements in the plane
        for _ in range(30):
            arr = _random_lines(rng, rng.randint(3, 6))
            assert is_gentle(arr).status == GENTLE, arr


@pytest.mark.stretch
def test_8a_generic_four_conics():
    with criterion("8a", "stretch: generic four conics ML degree 25", 1800):
        v = is_gentle(load("generic_four_conics.arr"))
        assert v.status == GENTLE
        form = multidegree(v.ideal)
        assert str(form) == "25*p^2*u + 6*p*u^2 + u^3"
        assert ml_degree(form) == 25


@pytest.mark.stretch
def test_8b_octahedron_not_gentle():
    with criterion("8b", "stretch: octahedron I0 : (x1 - x2) strictly contains I0", 3600):
        arr = graphic_arrangement(octahedron())
        I0 = pre_likelihood_ideal(arr)
        S = arr.s_ring
        J = quotient(I0, S.parse("x1 - x2"))
        assert contains(J, I0) and not contains(I0, J)


@pytest.mark.stretch
def test_8c_cdfv_multidegree():
    with criterion("8c", "stretch: nine planes multidegree", 1800):
        v = is_gentle(load("cdfv_nine_planes.arr"))
        assert str(multidegree(v.ideal)) == "5*p^3*u + 9*p^2*u^2 + 5*p*u^3 + u^4"
