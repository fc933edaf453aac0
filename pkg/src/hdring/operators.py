"""Differential and shift operators on the truncated ring, the coefficient
pairing against the divided-power basis, and the closed-form adjoints."""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Iterator, NamedTuple

from .fields import QQ, Field
from .params import Truncation
from .ring import (
    Element,
    HKey,
    Monomial,
    ZetaKey,
    exp_theta_h,
    make_monomial,
    theta_gen,
)


def _insert_zeta_left(zeta: tuple[ZetaKey, ...], pair: ZetaKey):
    """Multiply a single odd generator from the left into a sorted tuple;
    returns (sign, tuple) or None on a repeat."""
    if pair in zeta:
        return None
    pos = 0
    while pos < len(zeta) and zeta[pos] < pair:
        pos += 1
    sign = -1 if pos % 2 else 1
    return sign, zeta[:pos] + (pair,) + zeta[pos:]


def op_d(x: Element) -> Element:
    """The unique continuous derivation with d(theta) = d(e) = d(zeta) = 0 and
    d h_{k,l} = zeta_{k,l} - zeta_{k-1,l}, signed by the parity of the odd
    part to its left."""
    f = x.field
    out: dict[Monomial, object] = {}
    for mono, coeff in x.terms.items():
        for idx, ((k, l), exp) in enumerate(mono.h):
            if exp == 1:
                new_h = mono.h[:idx] + mono.h[idx + 1 :]
            else:
                new_h = mono.h[:idx] + (((k, l), exp - 1),) + mono.h[idx + 1 :]
            for row, branch_sign in ((k, 1), (k - 1, -1)):
                ins = _insert_zeta_left(mono.zeta, (row, l))
                if ins is None:
                    continue
                sign, new_zeta = ins
                c = f.mul(coeff, f.coerce(exp * sign * branch_sign))
                key = Monomial(mono.theta, mono.e, new_h, new_zeta)
                s = f.add(out.get(key, f.coerce(0)), c)
                if f.is_zero(s):
                    out.pop(key, None)
                else:
                    out[key] = s
    return Element(out, x.params, f, _trusted=True)


_NABLA_CACHE: dict[tuple[Truncation, object], Element] = {}


def nabla_multiplier(params: Truncation, field: Field = QQ) -> Element:
    """The left-multiplication part of nabla: sum_l theta_l zeta_{0,l}."""
    key = (params, field)
    if key not in _NABLA_CACHE:
        acc = Element.zero(params, field)
        for l in range(1, params.n + 1):
            acc = acc + Element.monomial(
                make_monomial(theta={l: 1}, zeta=((0, l),)), params, field
            )
        _NABLA_CACHE[key] = acc
    return _NABLA_CACHE[key]


def op_nabla(x: Element) -> Element:
    return op_d(x) + nabla_multiplier(x.params, x.field) * x


def op_theta(x: Element) -> Element:
    """Alternating theta-weighted index deletion on the (unique) e-factor of
    each monomial: e_I maps to sum_t (-1)^{t-1} theta_{i_t} e_{I minus i_t}
    over the sorted indices of I.  Monomials without an e-factor, or with the
    empty-set e-factor, map to 0."""
    f = x.field
    out: dict[Monomial, object] = {}
    for mono, coeff in x.terms.items():
        if mono.e is None:
            continue
        for t, col in enumerate(mono.e):
            sign = 1 if t % 2 == 0 else -1
            theta = dict(mono.theta)
            theta[col] = theta.get(col, 0) + 1
            key = Monomial(
                tuple(sorted((l, exp) for l, exp in theta.items() if exp)),
                mono.e[:t] + mono.e[t + 1 :],
                mono.h,
                mono.zeta,
            )
            c = f.mul(coeff, f.coerce(sign))
            s = f.add(out.get(key, f.coerce(0)), c)
            if f.is_zero(s):
                out.pop(key, None)
            else:
                out[key] = s
    return Element(out, x.params, f, _trusted=True)


def op_shift(s: int, x: Element) -> Element:
    """The ring endomorphism shifting row indices past level s.

    s = 0 raises every h and zeta row by one; s > 0 fixes rows below s, sends
    h row s to the binomially expanded sum of rows s and s+1, and raises the
    rows above.  A resulting row above K means the window is too small.
    """
    if s < 0:
        raise ValueError("shift level must be >= 0")
    f = x.field
    K = x.params.K
    out: dict[Monomial, object] = {}
    for mono, coeff in x.terms.items():
        new_zeta: list[ZetaKey] = []
        for k, l in mono.zeta:
            nk = k + 1 if (s == 0 or k >= s) else k
            if nk > K:
                raise ValueError(f"shift_{s} pushes zeta row {k} past K={K}")
            new_zeta.append((nk, l))
        fixed_h: dict[HKey, int] = {}
        split_cols: list[tuple[int, int]] = []
        for (k, l), exp in mono.h:
            if s == 0 or k > s:
                nk = k + 1
            elif k < s:
                nk = k
            else:
                split_cols.append((l, exp))
                continue
            if nk > K:
                raise ValueError(f"shift_{s} pushes h row {k} past K={K}")
            fixed_h[(nk, l)] = fixed_h.get((nk, l), 0) + exp
        if split_cols and s + 1 > K:
            raise ValueError(f"shift_{s} pushes h row {s} past K={K}")

        def splits(idx: int, h_acc: dict[HKey, int], mult: int):
            if idx == len(split_cols):
                key = Monomial(mono.theta, mono.e, tuple(sorted(h_acc.items())), tuple(new_zeta))
                c = f.mul(coeff, f.coerce(mult))
                prev = out.get(key, f.coerce(0))
                tot = f.add(prev, c)
                if f.is_zero(tot):
                    out.pop(key, None)
                else:
                    out[key] = tot
                return
            l, exp = split_cols[idx]
            for a in range(exp + 1):
                nxt = dict(h_acc)
                if a:
                    nxt[(s, l)] = nxt.get((s, l), 0) + a
                if exp - a:
                    nxt[(s + 1, l)] = nxt.get((s + 1, l), 0) + (exp - a)
                splits(idx + 1, nxt, mult * comb(exp, a))

        splits(0, fixed_h, 1)
    return Element(out, x.params, f, _trusted=True)


def op_delta(s: int, x: Element) -> Element:
    """delta_0 multiplies the shifted element by exp(sum theta_l h_{1,l});
    delta_s for s > 0 is the plain shift."""
    if s == 0:
        return exp_theta_h(x.params, x.field) * op_shift(0, x)
    return op_shift(s, x)


def op_D(phi, r: int, s: int) -> Element:
    """The discrete two-variable operator: nabla phi(r, s-1)
    + (-1)^s sum_{k=0..r} (-1)^k delta_k phi(r-1, s) - Theta phi(r, s)."""
    acc = op_nabla(phi.get(r, s - 1))
    alt = phi.get(r - 1, s)
    for k in range(0, r + 1):
        term = op_delta(k, alt)
        if (s + k) % 2:
            term = -term
        acc = acc + term
    return acc - op_theta(phi.get(r, s))


# -- divided-power basis and the pairing --------------------------------


class VBasis(NamedTuple):
    """Basis vector h^[jmat] zeta_set of the divided-power pairing space."""

    h: tuple[tuple[HKey, int], ...]
    zeta: tuple[ZetaKey, ...]

    @property
    def degree(self) -> int:
        return sum(x for _, x in self.h) + len(self.zeta)


def vbasis_element(v: VBasis, params: Truncation, field: Field = QQ) -> Element:
    """The basis vector as a ring element (raw powers divided by factorials)."""
    denom = 1
    for _, exp in v.h:
        denom *= factorial(exp)
    return Element.monomial(
        Monomial((), None, v.h, v.zeta), params, field, coeff=Fraction(1, denom)
    )


def decompose(b: Element) -> dict[VBasis, Element]:
    """Unique expansion of an element over the divided-power basis, with
    coefficients in the closed subring generated by theta and e.

    Raw h-exponents scale by the product of their factorials when read in the
    divided basis.
    """
    f = b.field
    out: dict[VBasis, dict[Monomial, object]] = {}
    for mono, coeff in b.terms.items():
        key = VBasis(mono.h, mono.zeta)
        scale = 1
        for _, exp in mono.h:
            scale *= factorial(exp)
        s_mono = Monomial(mono.theta, mono.e, (), ())
        bucket = out.setdefault(key, {})
        c = f.mul(coeff, f.coerce(scale))
        tot = f.add(bucket.get(s_mono, f.coerce(0)), c)
        if f.is_zero(tot):
            bucket.pop(s_mono, None)
        else:
            bucket[s_mono] = tot
    return {
        key: Element(bucket, b.params, f, _trusted=True)
        for key, bucket in out.items()
        if bucket
    }


def pairing(b: Element, v: VBasis) -> Element:
    """Coefficient of the basis vector v in b, an element of the theta/e
    subring."""
    return decompose(b).get(VBasis(tuple(v.h), tuple(v.zeta)), Element.zero(b.params, b.field))


def pairing_combo(b: Element, combo: dict[VBasis, Element]) -> Element:
    """Pairing against a linear combination of basis vectors with theta/e
    coefficients."""
    table = decompose(b)
    acc = Element.zero(b.params, b.field)
    for v, s_coeff in combo.items():
        hit = table.get(v)
        if hit is not None:
            acc = acc + hit * s_coeff
    return acc


def enumerate_vbasis(params: Truncation, field: Field = QQ) -> Iterator[VBasis]:
    """All divided-power basis vectors inside the window, in a fixed order."""
    n, K, m = params
    zeta_pairs = [(k, l) for k in range(0, K + 1) for l in range(1, n + 1)]
    h_cells = [(k, l) for k in range(1, K + 1) for l in range(1, n + 1)]

    def h_exponents(degree: int, cells: list[HKey]) -> Iterator[tuple[tuple[HKey, int], ...]]:
        if not cells:
            if degree == 0:
                yield ()
            return
        head = cells[0]
        for x in range(degree + 1):
            for rest in h_exponents(degree - x, cells[1:]):
                yield (((head, x),) + rest) if x else rest

    for zdeg in range(0, m):
        for zs in combinations(zeta_pairs, zdeg):
            for hdeg in range(0, m - zdeg):
                for h in h_exponents(hdeg, h_cells):
                    yield VBasis(tuple(sorted(h)), tuple(zs))


# -- closed-form adjoints ------------------------------------------------


def _bump(h: tuple[tuple[HKey, int], ...], cell: HKey) -> tuple[tuple[HKey, int], ...]:
    d = dict(h)
    d[cell] = d.get(cell, 0) + 1
    return tuple(sorted(d.items()))


def _accumulate(out: dict[VBasis, Element], key: VBasis, value: Element) -> None:
    if key in out:
        out[key] = out[key] + value
    else:
        out[key] = value
    if out[key].is_zero():
        del out[key]


def nabla_star_level(k: int, v: VBasis, params: Truncation, field: Field = QQ) -> dict[VBasis, Element]:
    """Row-k piece of the adjoint of nabla on a basis vector.

    Each odd factor (k, col) at flat position p contributes with sign (-1)^p:
    for k = 0 the pair theta_col * (same h) minus (h bumped at (1, col)); for
    k >= 1 the difference of the h-bumps at (k, col) and (k+1, col).  Bumps
    past row K are orthogonal to the window and dropped.
    """
    out: dict[VBasis, Element] = {}
    one = Element.one(params, field)
    for pos, (row, col) in enumerate(v.zeta):
        if row != k:
            continue
        sign = -1 if pos % 2 else 1
        rest = v.zeta[:pos] + v.zeta[pos + 1 :]
        signed_one = one.scale(sign)
        if row == 0:
            _accumulate(out, VBasis(v.h, rest), theta_gen(col, params, field).scale(sign))
            _accumulate(out, VBasis(_bump(v.h, (1, col)), rest), signed_one.scale(-1))
        else:
            _accumulate(out, VBasis(_bump(v.h, (row, col)), rest), signed_one)
            if row + 1 <= params.K:
                _accumulate(out, VBasis(_bump(v.h, (row + 1, col)), rest), signed_one.scale(-1))
    return out


def nabla_star(v: VBasis, params: Truncation, field: Field = QQ) -> dict[VBasis, Element]:
    """Adjoint of nabla: the sum of its row pieces over every odd row of v."""
    out: dict[VBasis, Element] = {}
    for k in sorted({row for row, _ in v.zeta}):
        for key, value in nabla_star_level(k, v, params, field).items():
            _accumulate(out, key, value)
    return out


def delta_star(k: int, v: VBasis, params: Truncation, field: Field = QQ) -> dict[VBasis, Element]:
    """Adjoint of delta_k on a basis vector: zero when the vector carries an
    odd factor in row k; otherwise row surgery on the h-part (delete row 1
    against the exp factor for k = 0, merge rows k and k+1 for k > 0) and a
    downward shift of the odd rows above k."""
    if k < 0:
        raise ValueError("delta level must be >= 0")
    if any(row == k for row, _ in v.zeta):
        return {}
    if k == 0:
        coeff = Element.one(params, field)
        new_h: dict[HKey, int] = {}
        for (row, col), exp in v.h:
            if row == 1:
                coeff = coeff * theta_gen(col, params, field, exp=exp)
            else:
                new_h[(row - 1, col)] = exp
        new_zeta = tuple((row - 1, col) for row, col in v.zeta)
        return {VBasis(tuple(sorted(new_h.items())), new_zeta): coeff}
    new_h = {}
    for (row, col), exp in v.h:
        nr = row if row <= k else row - 1
        new_h[(nr, col)] = new_h.get((nr, col), 0) + exp
    new_zeta = tuple((row if row < k else row - 1, col) for row, col in v.zeta)
    return {VBasis(tuple(sorted(new_h.items())), new_zeta): Element.one(params, field)}
