"""Independent brute-force implementations used only by tests.

Shares only the Monomial container with the fast path; products, signs,
counts and adjoints are all re-derived here from first principles.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .combinatorics import JMat, compositions
from .fields import QQ
from .operators import VBasis, decompose, enumerate_vbasis, op_delta, op_nabla, vbasis_element
from .params import Truncation
from .ring import Element, Monomial


def _bubble_sign(seq):
    """Sort an odd-generator list by bubble sort, counting swaps; None on a
    repeated pair."""
    items = list(seq)
    sign = 1
    for i in range(len(items)):
        for j in range(len(items) - 1 - i):
            if items[j] == items[j + 1]:
                return None
            if items[j] > items[j + 1]:
                items[j], items[j + 1] = items[j + 1], items[j]
                sign = -sign
    if any(items[t] == items[t + 1] for t in range(len(items) - 1)):
        return None
    return sign, tuple(items)


_SIGN_TABLES: dict[Truncation, dict] = {}


def zeta_sign_table(params: Truncation):
    """Signs for every ordered pair of odd subsets inside the window."""
    if params in _SIGN_TABLES:
        return _SIGN_TABLES[params]
    pairs = [(k, l) for k in range(0, params.K + 1) for l in range(1, params.n + 1)]
    subsets = []
    for size in range(0, params.m):
        subsets.extend(combinations(pairs, size))
    table = {}
    for za in subsets:
        for zb in subsets:
            table[(za, zb)] = _bubble_sign(za + zb)
    _SIGN_TABLES[params] = table
    return table


def shape_basis(params: Truncation):
    """Every (e, h, zeta) monomial shape in the window (theta-free)."""
    n, K, m = params
    e_opts = [None] + [tuple(sorted(sub)) for size in range(0, n + 1) for sub in combinations(range(1, n + 1), size)]
    h_cells = [(k, l) for k in range(1, K + 1) for l in range(1, n + 1)]
    z_pairs = [(k, l) for k in range(0, K + 1) for l in range(1, n + 1)]
    out = []
    for zdeg in range(0, m):
        for zs in combinations(z_pairs, zdeg):
            for hdeg in range(0, m - zdeg):
                for comp in compositions(hdeg, len(h_cells)):
                    h = tuple((cell, x) for cell, x in zip(h_cells, comp) if x)
                    for e in e_opts:
                        out.append(Monomial((), e, h, zs))
    return out


def theta_window_basis(params: Truncation, lo: int = -1, hi: int = 1):
    """Pure theta monomials with every exponent in the window."""
    out = []
    def rec(col, acc):
        if col > params.n:
            out.append(Monomial(tuple((l, x) for l, x in acc if x), None, (), ()))
            return
        for x in range(lo, hi + 1):
            rec(col + 1, acc + [(col, x)])
    rec(1, [])
    return out


def dense_mul(a: Element, b: Element, params: Truncation) -> Element:
    """Monomial-by-monomial product via the explicit sign table; no reuse of
    the fast-path merge."""
    table = zeta_sign_table(params)
    out: dict[Monomial, Fraction] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            if ma.e is not None and mb.e is not None:
                continue
            hit = table.get((ma.zeta, mb.zeta))
            if hit is None:
                hit = _bubble_sign(ma.zeta + mb.zeta)
            if hit is None:
                continue
            sign, zz = hit
            h = dict(ma.h)
            for kl, x in mb.h:
                h[kl] = h.get(kl, 0) + x
            if sum(h.values()) + len(zz) >= params.m:
                continue
            th = dict(ma.theta)
            for l, x in mb.theta:
                th[l] = th.get(l, 0) + x
                if th[l] == 0:
                    del th[l]
            mono = Monomial(tuple(sorted(th.items())), ma.e if ma.e is not None else mb.e, tuple(sorted(h.items())), zz)
            tot = out.get(mono, Fraction(0)) + Fraction(sign) * Fraction(ca) * Fraction(cb)
            if tot:
                out[mono] = tot
            else:
                out.pop(mono, None)
    return Element(out, params, QQ)


def adjoint_via_linear_solve(op_name: str, level: int, params: Truncation):
    """Derive the adjoint of nabla or delta_level from the operator itself and
    the pairing: the (v, v') entry is the v-coefficient of op applied to the
    v' basis vector.  Uniqueness of the adjoint makes this well posed.

    Returns dict v -> dict v' -> theta/e coefficient, with zero entries
    dropped.  Row bookkeeping is done in an enlarged window so shifts never
    overflow; components outside the original window pair to zero and vanish.
    """
    vbasis = list(enumerate_vbasis(params))
    big = params.resize(K=params.K + 1)
    out: dict[VBasis, dict[VBasis, Element]] = {v: {} for v in vbasis}
    for vp in vbasis:
        b = vbasis_element(vp, big)
        image = op_nabla(b) if op_name == "nabla" else op_delta(level, b)
        for key, s_coeff in decompose(image).items():
            small = VBasis(key.h, key.zeta)
            if small in out:
                out[small][vp] = s_coeff.with_params(params)
    return out


def compare_adjoints(op_name: str, level: int | None, params: Truncation) -> list[str]:
    """Entry-wise comparison of the closed-form adjoints against the derived
    ones; returns a description of every mismatch."""
    from .operators import delta_star, nabla_star

    derived = adjoint_via_linear_solve(op_name, level or 0, params)
    mismatches: list[str] = []
    for v in enumerate_vbasis(params):
        closed = nabla_star(v, params) if op_name == "nabla" else delta_star(level or 0, v, params)
        closed = {key: val for key, val in closed.items() if not val.is_zero()}
        want = derived.get(v, {})
        if set(closed) != set(want):
            mismatches.append(f"{op_name} at {v}: keys {sorted(set(closed) ^ set(want))}")
            continue
        for key, val in closed.items():
            if val != want[key]:
                mismatches.append(f"{op_name} at {v}, component {key}")
    return mismatches


def brute_count_T(r: int, s: int, params: Truncation) -> int:
    """Count the solution index triples by filtering a full cartesian space:
    all jmat fillings with supported rows, all dense multiplicity vectors,
    all strictly increasing block choices, degree below m."""
    n, _, m = params
    count = 0
    cells = [(k, l) for k in range(1, r + 1) for l in range(1, n + 1)]
    for jdeg in range(0, m):
        for comp in compositions(jdeg, len(cells)):
            j: JMat = {cell: x for cell, x in zip(cells, comp) if x}
            if any(all(j.get((k, l), 0) == 0 for l in range(1, n + 1)) for k in range(1, r + 1)):
                continue
            for svec in compositions(s, r + 1):
                if jdeg + s >= m:
                    continue
                blocks = 1
                for sl in svec:
                    choices = 0
                    for _ in combinations(range(1, n + 1), sl):
                        choices += 1
                    blocks *= choices
                count += blocks
    return count
