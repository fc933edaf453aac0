"""Prime-localized shadow of the solution: integrality of the truncated
coefficients, reduction to a prime field, the vanishing identity over F_p,
and the regrouped coefficient extraction."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import factorial

from .combinatorics import (
    SVec,
    e_symbol,
    normalize_svec,
    weight_from_row_sums,
    compositions,
    iseq_blocks,
)
from .fields import GF, QQ
from .operators import op_D
from .params import Truncation
from .reports import CheckResult
from .ring import Element, Monomial, make_monomial
from .solution import phi_infinity, zeta_pairs


def check_p_integrality(e: Element, p: int):
    """True iff every coefficient's denominator is coprime to p; also returns
    the offending monomials."""
    bad = []
    for mono, coeff in e.sorted_terms():
        c = coeff if isinstance(coeff, Fraction) else Fraction(coeff)
        if c.denominator % p == 0:
            bad.append((mono, c))
    return not bad, bad


def reduce_mod_p(e: Element, p: int) -> Element:
    """Coefficient-wise image a/b -> a * b^{-1} mod p; requires integrality."""
    ok, bad = check_p_integrality(e, p)
    if not ok:
        raise ValueError(f"element is not {p}-integral: {bad[0]}")
    fp = GF(p)
    return Element({mono: fp.coerce(c) for mono, c in e.terms.items()}, e.params, fp)


class ModpPhiTable:
    """Solution table over F_p: rational entries truncated at m = p, checked
    for integrality, then reduced."""

    def __init__(self, p: int, params: Truncation):
        if params.m != p:
            raise ValueError("mod-p work pins the degree bound m to p")
        self.p = p
        self.params = params
        self.field = GF(p)
        self._cache: dict[tuple[int, int], Element] = {}

    def get(self, r: int, s: int) -> Element:
        if r < 0 or s < 0:
            return Element.zero(self.params, self.field)
        key = (r, s)
        if key not in self._cache:
            rational = phi_infinity(r, s, self.params, QQ)
            self._cache[key] = reduce_mod_p(rational, self.p)
        return self._cache[key]


def verify_theorem_mod_p(p: int, max_r: int, max_s: int, params: Truncation) -> list[CheckResult]:
    """Integrality of every solution entry on the grid, then the vanishing of
    the discrete operator with all arithmetic in F_p."""
    params = params.resize(m=p)
    results: list[CheckResult] = []
    for r in range(0, max_r + 1):
        for s in range(0, max_s + 1):
            ok, bad = check_p_integrality(phi_infinity(r, s, params, QQ), p)
            detail = None if ok else f"non-integral coefficient {bad[0][1]} at {bad[0][0]}"
            results.append(CheckResult("p-integrality", r=r, s=s, passed=ok, prime=p, detail=detail))
    if not all(res.passed for res in results):
        return results
    table = ModpPhiTable(p, params)
    for r in range(0, max_r + 1):
        for s in range(0, max_s + 1):
            residual = op_D(table, r, s)
            results.append(
                CheckResult(
                    "D-vanishes-mod-p",
                    r=r,
                    s=s,
                    passed=residual.is_zero(),
                    residual=None if residual.is_zero() else residual,
                    prime=p,
                )
            )
    return results


# -- regrouped form --------------------------------------------------------


@dataclass
class RegroupedForm:
    """The solution at (r, s) rewritten as sum over (jvec, svec) of
    a'(jvec, svec) times the divided power of (sum_l theta_l h_{k,l}) per row
    times the symmetric factor.

    jvec lists the extra divided exponents per row 1..r; every row also
    carries one obligatory h from the symmetric factor, so the total h-degree
    of row k is jvec[k-1] + 1.
    """

    r: int
    s: int
    params: Truncation
    entries: dict[tuple[tuple[int, ...], SVec], Fraction] = dc_field(default_factory=dict)

    def row_degrees(self, jvec: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(x + 1 for x in jvec)

    def reassemble(self) -> Element:
        acc = Element.zero(self.params, QQ)
        for (jvec, svec), a in self.entries.items():
            acc = acc + regroup_block(self.r, jvec, svec, self.params).scale(a)
        return acc

    def integrality_report(self, primes: list[int]) -> list[CheckResult]:
        """For each prime p, every entry of total degree s + sum(row degrees)
        below p must be p-integral."""
        out = []
        for p in primes:
            bad = []
            for (jvec, svec), a in sorted(self.entries.items()):
                degree = sum(self.row_degrees(jvec)) + sum(svec)
                if degree < p and a.denominator % p == 0:
                    bad.append((jvec, svec, a))
            detail = None if not bad else f"a'={bad[0][2]} at j={bad[0][0]} s={list(bad[0][1])}"
            out.append(
                CheckResult("regrouped-p-integrality", r=self.r, s=self.s, passed=not bad, prime=p, detail=detail)
            )
        return out

    def to_obj(self) -> dict:
        rows = []
        for (jvec, svec), a in sorted(self.entries.items()):
            rows.append(
                {
                    "j": list(jvec),
                    "rowDegrees": list(self.row_degrees(jvec)),
                    "s": list(svec),
                    "aPrime": str(a),
                }
            )
        return {"r": self.r, "s": self.s, "entries": rows}


def symmetric_factor(r: int, svec: SVec, params: Truncation) -> Element:
    """Sum over increasing odd blocks and upper sequences of the signed
    e-generator times the odd monomial times one h per row."""
    n = params.n
    out: dict[Monomial, object] = {}
    svec = normalize_svec(svec)
    uppers = [()]
    for _ in range(r):
        uppers = [u + (c,) for u in uppers for c in range(1, n + 1)]
    for iseq in iseq_blocks(svec, n):
        flat_vals = tuple(i for block in iseq for i in block)
        z_part = zeta_pairs(iseq)
        for upper in uppers:
            es = e_symbol(flat_vals, upper)
            if es is None:
                continue
            sign, eset = es
            h: dict[tuple[int, int], int] = {}
            for idx, col in enumerate(upper):
                h[(idx + 1, col)] = h.get((idx + 1, col), 0) + 1
            mono = make_monomial(e=eset, h=h, zeta=z_part)
            prev = out.get(mono, Fraction(0))
            tot = prev + sign
            if tot:
                out[mono] = tot
            else:
                out.pop(mono, None)
    return Element(out, params, QQ)


def divided_theta_h_power(k: int, j: int, params: Truncation) -> Element:
    """(sum_l theta_l h_{k,l})^{[j]}: all column multidegrees of size j with
    divided coefficients."""
    acc: dict[Monomial, object] = {}
    for comp in compositions(j, params.n):
        denom = 1
        h: dict[tuple[int, int], int] = {}
        theta: dict[int, int] = {}
        for col0, x in enumerate(comp):
            if not x:
                continue
            col = col0 + 1
            denom *= factorial(x)
            h[(k, col)] = x
            theta[col] = x
        acc[make_monomial(theta=theta, h=h)] = Fraction(1, denom)
    return Element(acc, params, QQ)


def regroup_block(r: int, jvec: tuple[int, ...], svec: SVec, params: Truncation) -> Element:
    """The ansatz block: product over rows of the divided theta-h power times
    the symmetric factor."""
    acc = symmetric_factor(r, svec, params)
    for k in range(1, r + 1):
        if jvec[k - 1]:
            acc = divided_theta_h_power(k, jvec[k - 1], params) * acc
    return acc


def predicted_a_prime(r: int, jvec: tuple[int, ...], svec: SVec) -> Fraction:
    """Closed-form prediction: the solution weight evaluated at row sums
    jvec[k-1] + 1."""
    rows = {k: jvec[k - 1] + 1 for k in range(1, r + 1)}
    return weight_from_row_sums(rows, normalize_svec(svec))


class RegroupError(ValueError):
    pass


def extract_regrouped(r: int, s: int, params: Truncation) -> RegroupedForm:
    """Solve for the regrouped coefficients by matching canonical monomials
    of the solution against the expanded ansatz, then confirm the exact
    reassembly.  A failure would falsify the regrouping at this window."""
    if r < 0 or s < 0:
        raise ValueError("need r, s >= 0")
    phi = phi_infinity(r, s, params, QQ)
    form = RegroupedForm(r, s, params)
    remaining = phi
    for svec_raw in compositions(s, r + 1):
        svec = normalize_svec(svec_raw)
        for jtot in range(0, max(0, params.m - s - r)):
            for jvec in compositions(jtot, r):
                block = regroup_block(r, jvec, svec, params)
                if block.is_zero():
                    continue
                witness_mono, witness_coeff = block.sorted_terms()[0]
                phi_coeff = phi.terms.get(witness_mono, Fraction(0))
                a = Fraction(phi_coeff) / Fraction(witness_coeff)
                if a:
                    form.entries[(tuple(jvec), svec)] = a
                    remaining = remaining - block.scale(a)
    if not remaining.is_zero():
        witness = remaining.sorted_terms()[0]
        raise RegroupError(
            f"regrouped ansatz cannot reproduce the solution at ({r},{s}); "
            f"witness monomial {witness[0]} with residue {witness[1]}"
        )
    return form
