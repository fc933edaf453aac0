import random
from fractions import Fraction

import pytest

from hdring.fields import QQ
from hdring.operators import (
    VBasis,
    decompose,
    delta_star,
    nabla_star,
    op_D,
    op_d,
    op_delta,
    op_nabla,
    op_shift,
    op_theta,
    pairing,
    pairing_combo,
    enumerate_vbasis,
    vbasis_element,
)
from hdring.params import Truncation
from hdring.ring import Element, e_gen, h_gen, make_monomial, theta_gen, zeta_gen
from hdring.solution import PhiTable, phi_initial

P = Truncation(2, 2, 4)


def elem(params=P, coeff=1, **kw):
    return Element.monomial(make_monomial(**kw), params, coeff=coeff)


class TestD:
    def test_h_generator(self):
        assert op_d(h_gen(1, 1, P)) == zeta_gen(1, 1, P) - zeta_gen(0, 1, P)

    def test_kills_theta_and_e(self):
        p3 = Truncation(3, 2, 4)
        assert op_d(elem(p3, theta={3: 1}, e=(1, 2))).is_zero()

    def test_leibniz_sign_past_odd_factor(self):
        x = elem(zeta=[(0, 1)], h={(1, 1): 1})
        assert op_d(x) == -elem(zeta=[(0, 1), (1, 1)])

    def test_squares_to_zero(self):
        rng = random.Random(3)
        for _ in range(100):
            x = Element.random(P, rng)
            assert op_d(op_d(x)).is_zero()


class TestNabla:
    def test_on_e_empty(self):
        got = op_nabla(e_gen((), P))
        want = elem(theta={1: 1}, e=(), zeta=[(0, 1)]) + elem(theta={2: 1}, e=(), zeta=[(0, 2)])
        assert got == want

    def test_on_one(self):
        got = op_nabla(Element.one(P, QQ))
        want = elem(theta={1: 1}, zeta=[(0, 1)]) + elem(theta={2: 1}, zeta=[(0, 2)])
        assert got == want

    def test_nilpotent_on_200_random(self):
        rng = random.Random(17)
        for _ in range(200):
            x = Element.random(P, rng)
            assert op_nabla(op_nabla(x)).is_zero()


class TestTheta:
    def test_two_element_set(self):
        got = op_theta(e_gen((1, 2), P))
        want = elem(theta={1: 1}, e=(2,)) - elem(theta={2: 1}, e=(1,))
        assert got == want

    def test_empty_set_killed(self):
        assert op_theta(e_gen((), P) * zeta_gen(0, 1, P)).is_zero()

    def test_nilpotent(self):
        p3 = Truncation(3, 2, 4)
        assert op_theta(op_theta(e_gen((1, 2, 3), p3))).is_zero()
        rng = random.Random(23)
        for _ in range(100):
            x = Element.random(P, rng)
            assert op_theta(op_theta(x)).is_zero()


class TestShiftDelta:
    def test_shift0_zeta(self):
        assert op_shift(0, zeta_gen(0, 1, P)) == zeta_gen(1, 1, P)

    def test_shift1_h_splits(self):
        assert op_shift(1, h_gen(1, 1, P)) == h_gen(1, 1, P) + h_gen(2, 1, P)

    def test_shift1_h_square_binomial(self):
        got = op_shift(1, elem(h={(1, 1): 2}))
        want = elem(h={(1, 1): 2}) + elem(h={(1, 1): 1, (2, 1): 1}, coeff=2) + elem(h={(2, 1): 2})
        assert got == want

    def test_row_overflow_is_an_error(self):
        with pytest.raises(ValueError):
            op_shift(0, h_gen(2, 1, P))
        with pytest.raises(ValueError):
            op_shift(1, zeta_gen(2, 1, P))

    def test_delta0_on_e_empty(self):
        p = Truncation(1, 1, 3)
        got = op_delta(0, e_gen((), p))
        want = (
            e_gen((), p)
            + elem(p, theta={1: 1}, e=(), h={(1, 1): 1})
            + elem(p, coeff=Fraction(1, 2), theta={1: 2}, e=(), h={(1, 1): 2})
        )
        assert got == want

    def test_delta_above_rows_is_identity(self):
        assert op_delta(2, zeta_gen(1, 1, P)) == zeta_gen(1, 1, P)

    def test_delta1_shifts_row(self):
        assert op_delta(1, zeta_gen(1, 1, P)) == zeta_gen(2, 1, P)


class ZeroTable:
    def __init__(self, params):
        self.params, self.field = params, QQ

    def get(self, r, s):
        return Element.zero(self.params, self.field)


class InitialOnlyTable(ZeroTable):
    def get(self, r, s):
        if r == 0 and s >= 0:
            return phi_initial(s, self.params, self.field)
        return Element.zero(self.params, self.field)


class TestOpD:
    def test_zero_table(self):
        table = ZeroTable(P)
        for r in range(3):
            for s in range(3):
                assert op_D(table, r, s).is_zero()

    def test_initial_data_at_origin(self):
        assert op_D(InitialOnlyTable(P), 0, 0).is_zero()

    def test_solution_table_later_cells(self):
        phi = PhiTable(P)
        assert op_D(phi, 1, 1).is_zero()


class TestPairing:
    def test_h_against_divided_basis(self):
        b = theta_gen(1, P) * h_gen(1, 1, P) * zeta_gen(0, 1, P)
        v = VBasis((((1, 1), 1),), ((0, 1),))
        assert pairing(b, v) == theta_gen(1, P)

    def test_divided_power_scaling(self):
        b = elem(h={(1, 1): 2})
        v = VBasis((((1, 1), 2),), ())
        assert pairing(b, v) == Element.one(P, QQ).scale(2)

    def test_basis_mismatch(self):
        b = e_gen((1,), P) * zeta_gen(0, 1, P)
        assert pairing(b, VBasis((), ((0, 2),))).is_zero()

    def test_decompose_is_faithful(self):
        rng = random.Random(8)
        for _ in range(30):
            b = Element.random(P, rng)
            rebuilt = Element.zero(P, QQ)
            for v, coeff in decompose(b).items():
                rebuilt = rebuilt + coeff * vbasis_element(v, P)
            assert rebuilt == b


class TestAdjointClosedForms:
    def test_nabla_star_row0(self):
        v = VBasis((), ((0, 1),))
        got = nabla_star(v, P)
        assert got == {
            VBasis((), ()): theta_gen(1, P),
            VBasis((((1, 1), 1),), ()): -Element.one(P, QQ),
        }

    def test_nabla_star_row1(self):
        v = VBasis((), ((1, 1),))
        got = nabla_star(v, P)
        assert got == {
            VBasis((((1, 1), 1),), ()): Element.one(P, QQ),
            VBasis((((2, 1), 1),), ()): -Element.one(P, QQ),
        }

    def test_delta_star_examples(self):
        v = VBasis((((1, 1), 1),), ((1, 2),))
        assert delta_star(0, v, P) == {VBasis((), ((0, 2),)): theta_gen(1, P)}
        v2 = VBasis((((1, 1), 2),), ())
        assert delta_star(1, v2, P) == {v2: Element.one(P, QQ)}
        assert delta_star(0, VBasis((), ((0, 1),)), P) == {}

    def test_adjointness_200_random_pairs(self):
        rng = random.Random(31)
        vbasis = list(enumerate_vbasis(P))
        big = P.resize(K=P.K + 1)
        for _ in range(200):
            b = Element.random(P, rng)
            v = vbasis[rng.randrange(len(vbasis))]
            lhs = pairing(op_nabla(b), v)
            rhs = pairing_combo(b, nabla_star(v, P))
            assert lhs == rhs
            k = rng.randrange(0, 3)
            lhs = pairing(op_delta(k, b.with_params(big)), VBasis(v.h, v.zeta))
            rhs = pairing_combo(b, delta_star(k, v, P)).with_params(big)
            assert lhs == rhs


class TestTruncationDescent:
    def test_operators_descend(self):
        rng = random.Random(41)
        p5 = Truncation(2, 2, 5)
        ops = [
            op_d,
            op_nabla,
            op_theta,
            lambda x: op_shift(1, x),
            lambda x: op_delta(0, x),
            lambda x: op_delta(1, x),
        ]
        for _ in range(25):
            x = Element.random(Truncation(2, 1, 5), rng).with_params(p5)
            for m_small in (3, 4):
                for op in ops:
                    lhs = op(x).truncate(m_small)
                    rhs = op(x.truncate(m_small))
                    assert lhs == rhs
