from itertools import combinations

import pytest

from hdring.params import Truncation
from hdring.ring import e_gen, theta_gen
from hdring.skewforms import SkewFamily, higgs_extend, rho1_symmetrize

P3 = Truncation(3, 1, 4)


def generic_family(q: int, params: Truncation) -> SkewFamily:
    values = {
        idx: e_gen(idx, params)
        for idx in combinations(range(1, params.n + 1), q)
    }
    return rho1_symmetrize(q, values, params)


class TestRho1:
    def test_sign_extension(self):
        fam = generic_family(2, P3)
        v = fam.value((1, 2))
        assert fam.value((2, 1)) == -v
        assert fam.value((1, 1)).is_zero()

    def test_degree_one_is_identity(self):
        fam = generic_family(1, P3)
        assert fam.value((2,)) == e_gen((2,), P3)

    def test_round_trip_on_increasing_tuples(self):
        values = {(1, 2): theta_gen(1, P3), (1, 3): theta_gen(2, P3)}
        fam = rho1_symmetrize(2, values, P3)
        for idx, val in values.items():
            assert fam.value(idx) == val

    def test_rejects_non_increasing_input(self):
        with pytest.raises(ValueError):
            rho1_symmetrize(2, {(2, 1): theta_gen(1, P3)}, P3)


class TestHiggsExtend:
    def test_degree_zero(self):
        fam = rho1_symmetrize(0, {(): e_gen((), P3)}, P3)
        ext = higgs_extend(fam)
        for i in (1, 2, 3):
            assert ext.value((i,)) == theta_gen(i, P3) * e_gen((), P3)

    def test_two_term_alternating_sum(self):
        fam = generic_family(1, Truncation(2, 1, 4))
        ext = higgs_extend(fam)
        p = Truncation(2, 1, 4)
        want = theta_gen(1, p) * e_gen((2,), p) - theta_gen(2, p) * e_gen((1,), p)
        assert ext.value((1, 2)) == want
        assert ext.value((2, 1)) == -want

    @pytest.mark.parametrize("q", [0, 1, 2, 3])
    def test_extension_is_skew(self, q):
        fam = generic_family(q, P3)
        assert higgs_extend(fam).is_skew()

    @pytest.mark.parametrize("q", [0, 1, 2])
    def test_double_extension_vanishes(self, q):
        fam = generic_family(q, P3)
        twice = higgs_extend(higgs_extend(fam))
        assert all(v.is_zero() for v in twice.increasing.values())
        assert twice.is_skew()
