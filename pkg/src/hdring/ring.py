"""Sparse canonical arithmetic for the truncated ring B(n, K, m).

Generators and their commutation rules:

* ``theta_l`` (column l): commuting, invertible, so exponents may be negative;
* ``e_I`` (finite column set I, possibly empty): commuting, but the product of
  any two e-generators is zero (square-zero ideal), so a monomial carries at
  most one e-factor;
* ``h_{k,l}`` (row k >= 1, column l): commuting, exponents >= 1;
* ``zeta_{k,l}`` (row k >= 0, column l): odd generators, pairwise
  anticommuting with zero squares.

A monomial is the canonical product of the four blocks with a global sign; an
element is a finite linear combination with exact coefficients, truncated so
that any monomial of total h-plus-zeta degree >= m is zero.
"""
from __future__ import annotations

import random
from fractions import Fraction
from math import factorial
from typing import Iterable, NamedTuple

from .fields import QQ, Field, PrimeField
from .params import Truncation

ZetaKey = tuple[int, int]  # (row, col)
HKey = tuple[int, int]  # (row, col)


class Monomial(NamedTuple):
    """Canonical monomial: theta exponents, optional e-index set, h exponents,
    and a strictly increasing tuple of zeta (row, col) pairs."""

    theta: tuple[tuple[int, int], ...]  # (col, exp), col ascending, exp != 0
    e: tuple[int, ...] | None  # sorted columns; None means no e-factor
    h: tuple[tuple[HKey, int], ...]  # ((row, col), exp), key ascending, exp >= 1
    zeta: tuple[ZetaKey, ...]  # strictly ascending (row, col)

    @property
    def h_degree(self) -> int:
        return sum(exp for _, exp in self.h)

    @property
    def zeta_degree(self) -> int:
        return len(self.zeta)

    @property
    def degree(self) -> int:
        return self.h_degree + self.zeta_degree

    def sort_key(self):
        e_mark = (0, ()) if self.e is None else (1, self.e)
        return (self.zeta, e_mark, self.h, self.theta)


ONE = Monomial((), None, (), ())


def make_monomial(
    theta: dict[int, int] | None = None,
    e: Iterable[int] | None = None,
    h: dict[HKey, int] | None = None,
    zeta: Iterable[ZetaKey] = (),
) -> Monomial:
    """Build a canonical Monomial from loose data; zeta pairs must be distinct."""
    th = tuple(sorted((l, x) for l, x in (theta or {}).items() if x != 0))
    ee = None if e is None else tuple(sorted(set(e)))
    hh = tuple(sorted((kl, x) for kl, x in (h or {}).items() if x != 0))
    if any(x < 1 for _, x in hh):
        raise ValueError("h exponents must be >= 1")
    zz = tuple(sorted(zeta))
    if len(zz) != len(set(zz)):
        raise ValueError("repeated zeta pair")
    return Monomial(th, ee, hh, zz)


def monomial_in_bounds(mono: Monomial, params: Truncation) -> bool:
    n, K, m = params
    if any(l < 1 or l > n for l, _ in mono.theta):
        return False
    if mono.e is not None and any(i < 1 or i > n for i in mono.e):
        return False
    if any(k < 1 or k > K or l < 1 or l > n for (k, l), _ in mono.h):
        return False
    if any(k < 0 or k > K or l < 1 or l > n for k, l in mono.zeta):
        return False
    return mono.degree < m


def zeta_merge(za: tuple[ZetaKey, ...], zb: tuple[ZetaKey, ...]):
    """Interleave two sorted zeta tuples; return (sign, merged) or None when a
    pair repeats.  The sign counts the transpositions of odd generators."""
    i, j, sign = 0, 0, 1
    out: list[ZetaKey] = []
    while i < len(za) and j < len(zb):
        if za[i] == zb[j]:
            return None
        if za[i] < zb[j]:
            out.append(za[i])
            i += 1
        else:
            if (len(za) - i) % 2:
                sign = -sign
            out.append(zb[j])
            j += 1
    out.extend(za[i:])
    out.extend(zb[j:])
    return sign, tuple(out)


def mono_mul(a: Monomial, b: Monomial, params: Truncation):
    """Canonical product of two monomials.

    Returns (sign, Monomial) or None for zero: both factors carry an e-part,
    a zeta pair repeats, or the h+zeta degree reaches the bound m.
    """
    if a.e is not None and b.e is not None:
        return None
    merged = zeta_merge(a.zeta, b.zeta)
    if merged is None:
        return None
    sign, zz = merged
    if sum(x for _, x in a.h) + sum(x for _, x in b.h) + len(zz) >= params.m:
        return None
    th = dict(a.theta)
    for l, x in b.theta:
        th[l] = th.get(l, 0) + x
        if th[l] == 0:
            del th[l]
    hh = dict(a.h)
    for kl, x in b.h:
        hh[kl] = hh.get(kl, 0) + x
    return sign, Monomial(
        tuple(sorted(th.items())),
        a.e if a.e is not None else b.e,
        tuple(sorted(hh.items())),
        zz,
    )


class Element:
    """Immutable linear combination of monomials over Q or F_p inside a
    truncation window.  Two elements are equal iff their canonical term maps
    (and coefficient fields) are equal."""

    __slots__ = ("terms", "params", "field")

    def __init__(self, terms, params: Truncation, field: Field = QQ, *, _trusted: bool = False):
        params.check()
        clean: dict[Monomial, object] = {}
        for mono, coeff in dict(terms).items():
            c = coeff if _trusted else field.coerce(coeff)
            if field.is_zero(c):
                continue
            if not _trusted and not monomial_in_bounds(mono, params):
                raise ValueError(f"monomial {mono} out of bounds for {params}")
            clean[mono] = c
        self.terms = clean
        self.params = params
        self.field = field

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(params: Truncation, field: Field = QQ) -> "Element":
        return Element({}, params, field, _trusted=True)

    @staticmethod
    def one(params: Truncation, field: Field = QQ) -> "Element":
        return Element({ONE: field.one}, params, field, _trusted=True)

    @staticmethod
    def monomial(mono: Monomial, params: Truncation, field: Field = QQ, coeff=1) -> "Element":
        return Element({mono: coeff}, params, field)

    @staticmethod
    def random(params: Truncation, rng: random.Random, field: Field = QQ, max_terms: int = 5) -> "Element":
        """Seeded random element, exercising every generator family in bounds."""
        n, K, m = params
        terms: dict[Monomial, object] = {}
        for _ in range(rng.randint(1, max_terms)):
            theta = {l: rng.randint(-2, 2) for l in rng.sample(range(1, n + 1), rng.randint(0, n))}
            e = None
            if rng.random() < 0.5:
                e = rng.sample(range(1, n + 1), rng.randint(0, n))
            budget = rng.randint(0, m - 1)
            h: dict[HKey, int] = {}
            zeta: set[ZetaKey] = set()
            while budget > 0:
                if rng.random() < 0.5:
                    k, l = rng.randint(1, K), rng.randint(1, n)
                    h[(k, l)] = h.get((k, l), 0) + 1
                    budget -= 1
                else:
                    pair = (rng.randint(0, K), rng.randint(1, n))
                    if pair not in zeta:
                        zeta.add(pair)
                        budget -= 1
            mono = make_monomial(theta, e, h, tuple(sorted(zeta)))
            if isinstance(field, PrimeField):
                coeff = field.coerce(rng.randint(1, field.p - 1))
            else:
                num = rng.randint(-6, 6)
                coeff = Fraction(num or 1, rng.randint(1, 4))
            terms[mono] = field.add(terms.get(mono, field.coerce(0)), coeff)
        return Element(terms, params, field)

    # -- ring operations ----------------------------------------------

    def _compatible(self, other: "Element") -> None:
        if self.params != other.params or self.field != other.field:
            raise ValueError(
                f"mismatched elements: {self.params}/{self.field} vs {other.params}/{other.field}"
            )

    def __add__(self, other: "Element") -> "Element":
        self._compatible(other)
        out = dict(self.terms)
        f = self.field
        for mono, c in other.terms.items():
            s = f.add(out.get(mono, f.coerce(0)), c)
            if f.is_zero(s):
                out.pop(mono, None)
            else:
                out[mono] = s
        return Element(out, self.params, f, _trusted=True)

    def __neg__(self) -> "Element":
        f = self.field
        return Element({m: f.neg(c) for m, c in self.terms.items()}, self.params, f, _trusted=True)

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, scalar) -> "Element":
        f = self.field
        s = f.coerce(scalar)
        if f.is_zero(s):
            return Element.zero(self.params, f)
        return Element({m: f.mul(c, s) for m, c in self.terms.items()}, self.params, f, _trusted=True)

    def __mul__(self, other: "Element") -> "Element":
        self._compatible(other)
        f = self.field
        out: dict[Monomial, object] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                prod = mono_mul(ma, mb, self.params)
                if prod is None:
                    continue
                sign, mono = prod
                c = f.mul(ca, cb)
                if sign < 0:
                    c = f.neg(c)
                s = f.add(out.get(mono, f.coerce(0)), c)
                if f.is_zero(s):
                    out.pop(mono, None)
                else:
                    out[mono] = s
        return Element(out, self.params, f, _trusted=True)

    # -- structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash((self.field, frozenset(self.terms.items())))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: t[0].sort_key())

    def truncate(self, m_new: int) -> "Element":
        """Project onto the smaller window with degree bound m_new <= m."""
        if m_new > self.params.m:
            raise ValueError("truncate only shrinks the degree bound")
        params = self.params.resize(m=m_new)
        return Element(
            {mono: c for mono, c in self.terms.items() if mono.degree < m_new},
            params,
            self.field,
            _trusted=True,
        )

    def with_params(self, params: Truncation) -> "Element":
        """Re-tag with a window that must contain every present monomial."""
        return Element(self.terms, params, self.field)

    def __repr__(self) -> str:
        from .serialize import to_text

        return f"Element({to_text(self)!r})"


# -- generator elements ------------------------------------------------


def theta_gen(l: int, params: Truncation, field: Field = QQ, exp: int = 1) -> Element:
    return Element.monomial(make_monomial(theta={l: exp}), params, field)


def e_gen(I: Iterable[int], params: Truncation, field: Field = QQ) -> Element:
    return Element.monomial(make_monomial(e=tuple(I)), params, field)


def h_gen(k: int, l: int, params: Truncation, field: Field = QQ) -> Element:
    return Element.monomial(make_monomial(h={(k, l): 1}), params, field)


def zeta_gen(k: int, l: int, params: Truncation, field: Field = QQ) -> Element:
    return Element.monomial(make_monomial(zeta=((k, l),)), params, field)


def elem_add(a: Element, b: Element) -> Element:
    return a + b


def elem_mul(a: Element, b: Element) -> Element:
    return a * b


_EXP_CACHE: dict[tuple[Truncation, object], Element] = {}


def exp_theta_h(params: Truncation, field: Field = QQ) -> Element:
    """The element sum_q (sum_{l=1..n} theta_l h_{1,l})^q / q! for q < m.

    Finite because every factor has h-degree one, so all terms with q >= m die
    in the truncation.
    """
    key = (params, field)
    cached = _EXP_CACHE.get(key)
    if cached is not None:
        return cached
    x = Element.zero(params, field)
    if params.m > 1:
        for l in range(1, params.n + 1):
            x = x + Element.monomial(make_monomial(theta={l: 1}, h={(1, l): 1}), params, field)
    acc = Element.one(params, field)
    term = Element.one(params, field)
    for q in range(1, params.m):
        term = (term * x).scale(Fraction(1, q))
        if term.is_zero():
            break
        acc = acc + term
    _EXP_CACHE[key] = acc
    return acc


def divided_h_element(h: dict[HKey, int], params: Truncation, field: Field = QQ) -> Element:
    """The divided-power monomial prod h_{k,l}^{j}/j! as an element."""
    denom = 1
    for j in h.values():
        denom *= factorial(j)
    return Element.monomial(make_monomial(h=h), params, field, coeff=Fraction(1, denom))
