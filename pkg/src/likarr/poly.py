"""Sparse multivariate polynomials with exact rational coefficients.

Grammar accepted by :func:`parse_poly` (EBNF)::

    expr    = term { ("+" | "-") term } ;
    term    = factor { ("*" | "/") factor } ;      (* "/" only by a constant *)
    factor  = ("+" | "-") factor | power ;
    power   = atom [ "^" uint ] ;
    atom    = uint | name | "(" expr ")" ;

Printing writes terms in decreasing order of the ring's default order,
coefficients as ``p`` or ``p/q``, e.g. ``x^2*s1 - 3/2*y*s2 + 1``.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import ParseError, RingMismatchError

MAX_EXPONENT = 2**31 - 1


def _norm(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    return c


# ---------------------------------------------------------------------------
# Term orders


@dataclass(frozen=True)
class TermOrder:
    """A monomial order, realised as a nonnegative integer weight matrix.

    kind is one of ``grevlex``, ``lex``, ``wgrevlex`` (grevlex refined by a
    positive weight vector), ``bigrevlex`` (x-degree, then s-degree, then
    grevlex) and ``block`` (variables in ``elim`` compared first with
    ``inner``, the rest with ``outer``).
    """

    kind: str = "grevlex"
    elim: tuple = ()
    inner: "TermOrder | None" = None
    outer: "TermOrder | None" = None
    weights: tuple = ()

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "wgrevlex", "bigrevlex", "block"):
            raise ValueError(f"unknown term order {self.kind!r}")

    @classmethod
    def block(cls, elim, inner=None, outer=None):
        return cls("block", elim=tuple(elim), inner=inner or GREVLEX, outer=outer or GREVLEX)

    def matrix(self, ring: "RingContext") -> list:
        return self._rows(ring, list(range(ring.nvars)))

    def _rows(self, ring, idx):
        n = ring.nvars
        k = len(idx)

        def row(ws):
            r = [0] * n
            for i, w in zip(idx, ws):
                r[i] = w
            return r

        if self.kind == "lex":
            return [row([1 if j == a else 0 for j in range(k)]) for a in range(k)]
        if self.kind in ("grevlex", "wgrevlex"):
            w = list(self.weights) if self.kind == "wgrevlex" else [1] * k
            if len(w) != k or min(w, default=1) <= 0:
                raise ValueError("wgrevlex needs one positive weight per variable")
            rows = [row(w)]
            for a in range(k - 1, 0, -1):
                rows.append(row(w[:a] + [0] * (k - a)))
            return rows
        if self.kind == "bigrevlex":
            xs = [1 if ring.is_x(i) else 0 for i in idx]
            ss = [1 if ring.is_s(i) else 0 for i in idx]
            return [row(xs), row(ss)] + GREVLEX._rows(ring, idx)
        # block
        names = set(self.elim)
        unknown = names - set(ring.variables)
        if unknown:
            raise ValueError(f"block order names unknown variables {sorted(unknown)}")
        first = [i for i in idx if ring.variables[i] in names]
        rest = [i for i in idx if ring.variables[i] not in names]
        return self.inner._rows(ring, first) + self.outer._rows(ring, rest)

    def key_function(self, ring: "RingContext"):
        rows = self.matrix(ring)
        sparse = [[(i, w) for i, w in enumerate(r) if w] for r in rows]

        def key(exps):
            return tuple(sum(w * exps[i] for i, w in r) for r in sparse)

        return key

    def __str__(self):
        if self.kind == "block":
            return f"block({','.join(self.elim)};{self.inner};{self.outer})"
        if self.kind == "wgrevlex":
            return f"wgrevlex{list(self.weights)}"
        return self.kind


GREVLEX = TermOrder("grevlex")
LEX = TermOrder("lex")
BIGREVLEX = TermOrder("bigrevlex")


def compare(order: TermOrder, ring: "RingContext", m1: Sequence[int], m2: Sequence[int]) -> int:
    """Return -1, 0 or 1 as ``m1`` is smaller, equal or larger than ``m2``."""
    if len(m1) != ring.nvars or len(m2) != ring.nvars:
        raise ValueError("exponent vector length does not match the ring")
    key = order.key_function(ring)
    a, b = key(m1), key(m2)
    return (a > b) - (a < b)


# ---------------------------------------------------------------------------
# Rings


@dataclass(frozen=True)
class RingContext:
    """Polynomial ring Q[x_vars, s_vars]; x-variables have bidegree (1,0), s-variables (0,1)."""

    x_vars: tuple
    s_vars: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "x_vars", tuple(self.x_vars))
        object.__setattr__(self, "s_vars", tuple(self.s_vars))
        names = self.x_vars + self.s_vars
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        for v in names:
            if not isinstance(v, str) or not v.isidentifier():
                raise ValueError(f"invalid variable name {v!r}")

    @cached_property
    def variables(self) -> tuple:
        return self.x_vars + self.s_vars

    @property
    def nvars(self) -> int:
        return len(self.x_vars) + len(self.s_vars)

    @cached_property
    def _index(self):
        return {v: i for i, v in enumerate(self.variables)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ParseError(f"unknown variable {name!r}") from None

    def is_x(self, i: int) -> bool:
        return i < len(self.x_vars)

    def is_s(self, i: int) -> bool:
        return i >= len(self.x_vars)

    @property
    def default_order(self) -> TermOrder:
        return BIGREVLEX if self.s_vars else GREVLEX

    @cached_property
    def _display_key(self):
        return self.default_order.key_function(self)

    # constructors
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: c})

    def var(self, name: str) -> "Polynomial":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Polynomial(self, {tuple(e): 1})

    def monomial(self, exps, coeff=1) -> "Polynomial":
        return Polynomial(self, {tuple(exps): coeff})

    def gens(self) -> list:
        return [self.var(v) for v in self.variables]

    def xs(self) -> list:
        return [self.var(v) for v in self.x_vars]

    def ss(self) -> list:
        return [self.var(v) for v in self.s_vars]

    def extend(self, x_vars=(), s_vars=()) -> "RingContext":
        return RingContext(self.x_vars + tuple(x_vars), self.s_vars + tuple(s_vars))

    def with_s(self, s_vars) -> "RingContext":
        return RingContext(self.x_vars, tuple(s_vars))

    def fresh_name(self, stem: str) -> str:
        name, k = stem, 0
        while name in self._index:
            k += 1
            name = f"{stem}{k}"
        return name

    def parse(self, text: str) -> "Polynomial":
        return parse_poly(text, self)


# ---------------------------------------------------------------------------
# Polynomials


class Polynomial:
    """Immutable sparse polynomial over Q; equality is equality of term maps."""

    __slots__ = ("ring", "_terms", "_sorted", "_hash")

    def __init__(self, ring: RingContext, terms: Mapping):
        n = ring.nvars
        clean = {}
        for e, c in terms.items():
            if c:
                e = tuple(e)
                if len(e) != n:
                    raise ValueError("exponent vector length does not match the ring")
                clean[e] = _norm(c)
        self.ring = ring
        self._terms = clean
        self._sorted = None
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        p = cls.__new__(cls)
        p.ring = ring
        p._terms = terms
        p._sorted = None
        p._hash = None
        return p

    # -- inspection
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        """Terms as (exponents, coefficient), largest first in the default order."""
        if self._sorted is None:
            key = self.ring._display_key
            self._sorted = sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True)
        return self._sorted

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def coefficient(self, exps) -> Fraction | int:
        return self._terms.get(tuple(exps), 0)

    def constant_term(self):
        return self._terms.get((0,) * self.ring.nvars, 0)

    def leading_term(self, order: TermOrder | None = None):
        """(exponents, coefficient) of the leading term."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        if order is None:
            return self.items()[0]
        key = order.key_function(self.ring)
        return max(self._terms.items(), key=lambda t: key(t[0]))

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.ring.index(name)
        return max((e[i] for e in self._terms), default=-1)

    def support(self) -> set:
        """Names of variables that occur."""
        used = set()
        for e in self._terms:
            used.update(i for i, a in enumerate(e) if a)
        return {self.ring.variables[i] for i in used}

    def is_homogeneous(self, weights=None) -> bool:
        if not self._terms:
            return True
        w = weights or [1] * self.ring.nvars
        degs = {sum(a * b for a, b in zip(e, w)) for e in self._terms}
        return len(degs) == 1

    def bidegree(self):
        """(x-degree, s-degree) if bihomogeneous, else None."""
        nx = len(self.ring.x_vars)
        bd = {(sum(e[:nx]), sum(e[nx:])) for e in self._terms}
        if len(bd) != 1:
            return None
        return bd.pop()

    # -- arithmetic
    def _check(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError("polynomials belong to different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        t = dict(self._terms)
        for e, c in other._terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = _norm(v)
            else:
                t.pop(e, None)
        return Polynomial._raw(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.ring.zero()
            return Polynomial._raw(self.ring, {e: _norm(c * other) for e, c in self._terms.items()})
        other = self._check(other)
        if other is NotImplemented:
            return other
        t = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return Polynomial(self.ring, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result, base = self.ring.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, c):
        if isinstance(c, (int, Fraction)):
            if not c:
                raise ZeroDivisionError("division by zero")
            return self * (Fraction(1) / Fraction(c))
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({(0,) * self.ring.nvars: other} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    # -- calculus and structure
    def diff(self, name: str) -> "Polynomial":
        i = self.ring.index(name)
        t = {}
        for e, c in self._terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                t[tuple(d)] = c * e[i]
        return Polynomial._raw(self.ring, t)

    def content(self) -> Fraction:
        """Positive rational c with self/c integral and primitive."""
        if not self._terms:
            return Fraction(0)
        vals = [Fraction(c) for c in self._terms.values()]
        den = math.lcm(*(v.denominator for v in vals))
        num = math.gcd(*(v.numerator * (den // v.denominator) for v in vals))
        return Fraction(num, den)

    def primitive(self, order: TermOrder | None = None) -> "Polynomial":
        """Integer content 1, positive leading coefficient (w.r.t. ``order``)."""
        if not self._terms:
            return self
        c = self.content()
        if self.leading_term(order)[1] < 0:
            c = -c
        return Polynomial._raw(self.ring, {e: _norm(Fraction(v) / c) for e, v in self._terms.items()})

    def monic(self, order: TermOrder | None = None) -> "Polynomial":
        return self * (Fraction(1) / Fraction(self.leading_term(order)[1]))

    def exact_div(self, g: "Polynomial") -> "Polynomial":
        """Quotient self/g; raises ValueError when g does not divide self."""
        g = self._check(g)
        if not g:
            raise ZeroDivisionError("division by the zero polynomial")
        key = LEX.key_function(self.ring)
        ge, gc = max(g._terms.items(), key=lambda t: key(t[0]))
        rem = dict(self._terms)
        q = {}
        gterms = list(g._terms.items())
        while rem:
            e, c = max(rem.items(), key=lambda t: key(t[0]))
            d = tuple(a - b for a, b in zip(e, ge))
            if min(d) < 0:
                raise ValueError("division is not exact")
            qc = Fraction(c) / gc
            q[d] = _norm(qc)
            for e2, c2 in gterms:
                k = tuple(a + b for a, b in zip(d, e2))
                v = rem.get(k, 0) - qc * c2
                if v:
                    rem[k] = _norm(v)
                else:
                    rem.pop(k, None)
        return Polynomial._raw(self.ring, q)

    def subs(self, values: Mapping[str, "Polynomial | int | Fraction"]) -> "Polynomial":
        """Substitute polynomials (in the same ring) or numbers for variables."""
        idx = {}
        for k, v in values.items():
            idx[self.ring.index(k)] = v if isinstance(v, Polynomial) else self.ring.const(v)
        powers = {i: [self.ring.one()] for i in idx}
        plain = {}
        out = self.ring.zero()
        for e, c in self._terms.items():
            rest = list(e)
            factor = None
            for i, v in idx.items():
                k = e[i]
                rest[i] = 0
                if k:
                    pw = powers[i]
                    while len(pw) <= k:
                        pw.append(pw[-1] * v)
                    factor = pw[k] if factor is None else factor * pw[k]
            rest = tuple(rest)
            if factor is None:
                plain[rest] = plain.get(rest, 0) + c
            else:
                out = out + Polynomial._raw(self.ring, {rest: c}) * factor
        return out + Polynomial(self.ring, plain)

    def evaluate(self, point: Mapping[str, Fraction | int]):
        """Numeric value at a full assignment of the variables."""
        vals = [Fraction(point[v]) for v in self.ring.variables]
        total = Fraction(0)
        for e, c in self._terms.items():
            t = Fraction(c)
            for v, a in zip(vals, e):
                if a:
                    t *= v**a
            total += t
        return _norm(total)

    def to_ring(self, ring: RingContext) -> "Polynomial":
        """Move into another ring, matching variables by name."""
        if ring == self.ring:
            return self
        pos = []
        for i, v in enumerate(self.ring.variables):
            pos.append(ring.index(v))
        n = ring.nvars
        t = {}
        for e, c in self._terms.items():
            d = [0] * n
            for i, a in enumerate(e):
                if a:
                    d[pos[i]] = a
            t[tuple(d)] = c
        return Polynomial._raw(ring, t)

    # -- printing
    def __str__(self):
        if not self._terms:
            return "0"
        names = self.ring.variables
        out = []
        for e, c in self.items():
            mono = "*".join(n if a == 1 else f"{n}^{a}" for n, a in zip(names, e) if a)
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not out:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(out)

    def __repr__(self):
        return f"Polynomial({str(self)!r})"


# ---------------------------------------------------------------------------
# Parsing


def parse_poly(text: str, ring: RingContext) -> Polynomial:
    """Parse ``text`` into a polynomial of ``ring`` (grammar in module docstring)."""
    src = text.strip()
    if not src:
        raise ParseError("empty polynomial")
    if "**" in src:
        raise ParseError("use ^ for powers")
    try:
        tree = ast.parse(src.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"malformed polynomial {text!r}: {exc.msg}") from None
    return _build(tree.body, ring, text)


def _build(node, ring, text):
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise ParseError(f"only integer literals are allowed in {text!r}")
        return ring.const(node.value)
    if isinstance(node, ast.Name):
        return ring.var(node.id)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _build(node.operand, ring, text)
        return -inner if isinstance(node.op, ast.USub) else inner
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            k = _exponent(node.right, text)
            return _build(node.left, ring, text) ** k
        left = _build(node.left, ring, text)
        right = _build(node.right, ring, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if not right.is_constant() or not right:
                raise ParseError(f"division only by nonzero constants in {text!r}")
            return left * (Fraction(1) / Fraction(right.constant_term()))
    raise ParseError(f"malformed polynomial {text!r}")


def _exponent(node, text):
    neg = False
    while isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        neg ^= isinstance(node.op, ast.USub)
        node = node.operand
    if not (isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool)):
        raise ParseError(f"exponent must be an integer literal in {text!r}")
    if neg and node.value:
        raise ParseError(f"negative exponent in {text!r}")
    if node.value > MAX_EXPONENT:
        raise ParseError(f"exponent too large in {text!r}")
    return node.value


def multiply(f: Polynomial, g: Polynomial) -> Polynomial:
    if f.ring != g.ring:
        raise RingMismatchError("polynomials belong to different rings")
    return f * g


def partial_derivative(f: Polynomial, name: str) -> Polynomial:
    return f.diff(name)


def bidegree(f: Polynomial):
    return f.bidegree()


def polys(ring: RingContext, texts: Iterable[str]) -> list:
    return [parse_poly(t, ring) for t in texts]
