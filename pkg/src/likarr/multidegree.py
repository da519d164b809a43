"""Bigraded multidegree of R[s]/I and the ML degree read off from it."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import comb, prod

from .groebner import Ideal, groebner_basis, hilbert_numerator, monomial_codim
from .poly import BIGREVLEX, TermOrder


@dataclass(frozen=True)
class MultidegreeForm:
    """c_d p^d + c_{d-1} p^{d-1} u + ... + c_0 u^d in Z[p,u]/(p^n, u^m).

    ``coeffs[i]`` is the coefficient of p^(d-i) u^i; ``raw`` keeps the
    coefficients before truncation.
    """

    d: int
    raw: tuple
    n: int | None = None
    m: int | None = None

    @property
    def coeffs(self) -> tuple:
        return tuple(c if self._alive(self.d - i, i) else 0 for i, c in enumerate(self.raw))

    def _alive(self, pe, ue):
        return (self.n is None or pe < self.n) and (self.m is None or ue < self.m)

    def coefficient(self, p_exp: int) -> int:
        """c_i with i the exponent of p."""
        return self.coeffs[self.d - p_exp]

    def as_dict(self) -> dict:
        return {self.d - i: c for i, c in enumerate(self.coeffs) if c}

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "*".join(
                x for x in (_power("p", self.d - i), _power("u", i)) if x
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts) if parts else "0"


def _power(v, k):
    if k == 0:
        return ""
    return v if k == 1 else f"{v}^{k}"


def form_from_numerator(K: dict, d: int, n=None, m=None) -> MultidegreeForm:
    """Degree-d part of K(1-p, 1-u)."""
    out = Counter()
    for (a, b), c in K.items():
        for i in range(min(a, d) + 1):
            j = d - i
            if j > b:
                continue
            out[i] += c * comb(a, i) * comb(b, j) * (-1) ** d
    return MultidegreeForm(d, tuple(out[d - k] for k in range(d + 1)), n, m)


def multidegree(I: Ideal, order: TermOrder = BIGREVLEX) -> MultidegreeForm:
    if not I.is_bihomogeneous():
        raise ValueError("multidegree needs a bihomogeneous ideal")
    G = groebner_basis(I, order)
    if any(g.is_constant() for g in G):
        raise ValueError("multidegree of the unit ideal is undefined")
    key = order.key_function(I.ring)
    lms = [max(g._terms, key=key) for g in G]
    d = monomial_codim(lms)
    K = hilbert_numerator(lms, I.ring)
    return form_from_numerator(K, d, len(I.ring.x_vars), len(I.ring.s_vars))


def ml_degree(form: MultidegreeForm) -> int:
    """c_i for the largest p-exponent i with c_i > 0 (after truncation)."""
    for i, c in enumerate(form.coeffs):
        if c > 0:
            return c
    raise ValueError("zero multidegree form has no ML degree")


def ci_ml_degree(column_degrees) -> int:
    """Product of the positive column degrees (free and gentle arrangements)."""
    degs = list(column_degrees)
    if not degs:
        raise ValueError("need at least one column degree")
    return prod(d for d in degs if d > 0)
