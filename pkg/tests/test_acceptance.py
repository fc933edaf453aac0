"""Acceptance gate: every criterion at its stated window, exact equality.

Run with `pytest tests/test_acceptance.py -v -s` to see one line per
criterion.
"""
import random
import time
from fractions import Fraction
from itertools import combinations

from hdring.combinatorics import solution_indices
from hdring.fields import QQ
from hdring.modp import extract_regrouped, verify_theorem_mod_p
from hdring.operators import (
    VBasis,
    decompose,
    delta_star,
    enumerate_vbasis,
    nabla_star,
    op_D,
    op_delta,
    op_nabla,
    op_theta,
)
from hdring.oracle import brute_count_T, compare_adjoints, dense_mul, shape_basis, theta_window_basis
from hdring.params import Truncation
from hdring.ring import Element, e_gen, make_monomial
from hdring.skewforms import higgs_extend, rho1_symmetrize
from hdring.solution import PhiTable, phi_infinity, phi_initial, verify_lemma_cell


def _report(num: int, ok: bool, text: str) -> None:
    print(f"[{num:2d}] {'PASS' if ok else 'FAIL'}  {text}")
    assert ok, f"criterion {num}: {text}"


def test_01_theorem_identity_grids():
    t0 = time.time()
    ok = True
    for params in (Truncation(2, 3, 5), Truncation(3, 3, 4)):
        phi = PhiTable(params)
        for r in range(0, 4):
            for s in range(0, 4):
                if not op_D(phi, r, s).is_zero():
                    ok = False
    elapsed = time.time() - t0
    ok = ok and elapsed < 300
    _report(1, ok, f"D(phi)=0 exactly for 0<=r,s<=3 at (2,3,5) and (3,3,4) [{elapsed:.1f}s]")


def test_02_initial_condition():
    params = Truncation(3, 1, 4)
    ok = True
    for s in range(0, 4):
        explicit_terms = {}
        for I in combinations(range(1, 4), s):
            explicit_terms[make_monomial(e=I, zeta=[(0, i) for i in I])] = 1
        explicit = Element(explicit_terms, params)
        ok = ok and phi_infinity(0, s, params) == phi_initial(s, params) == explicit
    _report(2, ok, "phi(0,s) equals the sum of e_I zeta_{0,I} over |I|=s, s=0..3, n=3")


def test_03_operator_nilpotency():
    params = Truncation(2, 2, 4)
    rng = random.Random(2024)
    ok = True
    for _ in range(500):
        x = Element.random(params, rng)
        if not op_nabla(op_nabla(x)).is_zero() or not op_theta(op_theta(x)).is_zero():
            ok = False
    _report(3, ok, "nabla^2 = 0 and Theta^2 = 0 on 500 random elements at (2,2,4)")


def test_04_adjointness():
    params = Truncation(2, 2, 4)
    big = params.resize(K=params.K + 1)
    vbasis = list(enumerate_vbasis(params))
    nstars = {v: nabla_star(v, params) for v in vbasis}
    dstars = {(k, v): delta_star(k, v, params) for k in (0, 1, 2) for v in vbasis}
    zero = Element.zero(params, QQ)
    zero_big = Element.zero(big, QQ)
    rng = random.Random(4096)
    ok = True
    for _ in range(100):
        b = Element.random(params, rng)
        db = decompose(b)
        dn = decompose(op_nabla(b))
        for v in vbasis:
            lhs = dn.get(v, zero)
            rhs = zero
            for key, coeff in nstars[v].items():
                hit = db.get(key)
                if hit is not None:
                    rhs = rhs + hit * coeff
            if lhs != rhs:
                ok = False
        b_big = b.with_params(big)
        for k in (0, 1, 2):
            dd = decompose(op_delta(k, b_big))
            for v in vbasis:
                lhs = dd.get(VBasis(v.h, v.zeta), zero_big)
                rhs = zero
                for key, coeff in dstars[(k, v)].items():
                    hit = db.get(key)
                    if hit is not None:
                        rhs = rhs + hit * coeff
                if lhs != rhs.with_params(big):
                    ok = False
    ok = ok and compare_adjoints("nabla", None, params) == []
    for k in (0, 1, 2):
        ok = ok and compare_adjoints("delta", k, params) == []
    _report(4, ok, "pairing adjointness for every basis vector at (2,2,4), 100 random b, "
                   "k=0..2; closed forms equal derived adjoints entry-wise")


def _lemma_grid_results():
    params = Truncation(2, 2, 4)
    phi = PhiTable(params)
    out = {}
    for r, s in ((1, 0), (1, 1), (2, 0), (2, 1)):
        for check in verify_lemma_cell(r, s, params, phi):
            out.setdefault(check.name, []).append(check.passed)
    return out


def test_05_level_decomposition():
    results = _lemma_grid_results()
    ok = all(results["Mk-decomposition"])
    _report(5, ok, "M_k = A_k + B_k^- + B_k^+ for all k<=r and all basis vectors, "
                   "(r,s) in {(1,0),(1,1),(2,0),(2,1)}, n=2, m=4")


def test_06_aggregation_identities():
    results = _lemma_grid_results()
    ok = all(all(results[name]) for name in ("expression-A", "expression-B", "B-tail", "final-coincidence"))
    _report(6, ok, "regrouping displays and the final coincidence on the same grid")


def test_07_mod_p_grid():
    ok = True
    for p in (2, 3, 5):
        res = verify_theorem_mod_p(p, 2, 2, Truncation(2, 2, p))
        ok = ok and all(c.passed for c in res)
    _report(7, ok, "p-integrality and the identity over F_p for p in {2,3,5}, r,s<=2, n=2, m=p")


def test_08_regrouping():
    ok = True
    for r in range(0, 3):
        for s in range(0, 3):
            form = extract_regrouped(r, s, Truncation(2, max(1, r), 5))
            if form.reassemble() != phi_infinity(r, s, Truncation(2, max(1, r), 5)):
                ok = False
            if not all(c.passed for c in form.integrality_report([2, 3, 5])):
                ok = False
    degree_law = extract_regrouped(1, 0, Truncation(1, 1, 4))
    table = {form_j[0] + 1: a for (form_j, _), a in degree_law.entries.items()}
    ok = ok and table == {1: Fraction(1), 2: Fraction(1, 2), 3: Fraction(1, 3)}
    _report(8, ok, "regrouped form reassembles exactly for (r,s)<=(2,2); a' = 1/degree at (1,0); "
                   "all surviving a' p-integral for p in {2,3,5}")


def test_09_closed_form_r1():
    params = Truncation(1, 1, 4)
    want = (
        Element.monomial(make_monomial(e=(1,), h={(1, 1): 1}), params)
        + Element.monomial(make_monomial(theta={1: 1}, e=(1,), h={(1, 1): 2}), params, coeff=Fraction(1, 2))
        + Element.monomial(make_monomial(theta={1: 2}, e=(1,), h={(1, 1): 3}), params, coeff=Fraction(1, 6))
    )
    ok = phi_infinity(1, 0, params) == want
    _report(9, ok, "phi(1,0) at n=1, m=4 equals e(h + th*h^2/2 + th^2*h^3/6), the divided-power pattern")


def test_10_oracle_equivalence():
    params = Truncation(2, 2, 3)
    ok = True
    shape = [Element({m: 1}, params) for m in shape_basis(params)]
    for a in shape:
        for b in shape:
            if dense_mul(a, b, params) != a * b:
                ok = False
    window = [Element({m: 1}, params) for m in theta_window_basis(params)]
    for a in window:
        for b in window:
            if dense_mul(a, b, params) != a * b:
                ok = False
    for n in (1, 2, 3):
        for m in (2, 3):
            grid_params = Truncation(n, 3, m)
            for r in range(0, 4):
                for s in range(0, 4):
                    if brute_count_T(r, s, grid_params) != len(list(solution_indices(r, s, grid_params))):
                        ok = False
    _report(10, ok, "dense product equals the sparse product exhaustively at (2,2,3); "
                    "brute index counts match the stream")


def test_11_skew_symmetry():
    ok = True
    for n in (1, 2, 3):
        params = Truncation(n, 1, 4)
        for q in range(0, 4):
            values = {idx: e_gen(idx, params) for idx in combinations(range(1, n + 1), q)}
            fam = rho1_symmetrize(q, values, params)
            if not higgs_extend(fam).is_skew():
                ok = False
    _report(11, ok, "theta-extension output is skew under all permutations for q+1<=4, n<=3")
