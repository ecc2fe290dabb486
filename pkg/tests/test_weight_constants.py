import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import models, positive_array, sequences
from dyadlab.dyadic_model import EXACT, CubeId, DyadicModel
from dyadlab.exact import PowerProduct
from dyadlab.exponents import ExponentSequence, Geometric
from dyadlab.function_vectors import WeightVector, make_weight_vector, trivial_weights
from dyadlab.sampling import make_rng, random_carleson, random_weight_vector
from dyadlab.weight_constants import (
    CarlesonFamily,
    a_star_constant,
    a_star_from_weights,
    ap_product_constant,
    carleson_constant,
    classical_ap,
    nu_sigma,
    rh_constant,
    sp_testing_constant,
    subtree_sums,
)

TWO_TWO = ExponentSequence((Fraction(2), Fraction(2)))
ROOT1 = CubeId(0, (0,))


def random_weights(draw, m, seq):
    omega = [positive_array(draw, m.leaf_count) for _ in range(seq.N)]
    return make_weight_vector(m, omega, positive_array(draw, m.leaf_count), seq)


class TestApProduct:
    def test_trivial(self):
        m = DyadicModel(2, 2)
        assert ap_product_constant(m, trivial_weights(m, TWO_TWO)).value == pytest.approx(1.0)

    def test_hand_instance(self):
        m = DyadicModel(1, 1)
        W = make_weight_vector(m, [[1, 4], [1, 1]], [1, 2], TWO_TWO)
        rep = ap_product_constant(m, W)
        assert rep.value == pytest.approx(1.5 * 0.625**0.5, rel=1e-12)
        assert rep.value == pytest.approx(1.185854, abs=1e-6)
        assert str(rep.attaining_cube) == "0:0"

    def test_hand_instance_exact(self):
        m = DyadicModel(1, 1)
        W = make_weight_vector(m, [[1, 4], [1, 1]], [1, 2], TWO_TWO, EXACT)
        rep = ap_product_constant(m, W)
        assert rep.value == PowerProduct.of(Fraction(5, 8)) ** Fraction(1, 2) * Fraction(3, 2)
        assert rep.to_dict()["exact"] == "(5/8)^(1/2)*(3/2)"

    def test_second_instance(self):
        m = DyadicModel(1, 1)
        W = make_weight_vector(m, [[1, 4], [1, 4]], [1, 4], TWO_TWO)
        assert ap_product_constant(m, W).value == pytest.approx(1.5625)

    @given(models(max_leaves=64), sequences(), st.data())
    def test_against_oracle(self, m, seq, data):
        W = random_weights(data.draw, m, seq)
        rep = ap_product_constant(m, W)
        value, (k, idx) = oracles.ap_product(m, W)
        assert rep.value == pytest.approx(value, rel=1e-12)

    @given(models(max_leaves=64), sequences(), st.floats(0.1, 10), st.data())
    def test_homogeneity(self, m, seq, c, data):
        W = random_weights(data.draw, m, seq)
        base = ap_product_constant(m, W)
        scaled_v = ap_product_constant(m, WeightVector(W.omega, c * W.v, seq))
        assert scaled_v.value == pytest.approx(c ** float(seq.inv_p) * base.value, rel=1e-10)
        j = data.draw(st.integers(0, seq.N - 1))
        omega = list(W.omega)
        omega[j] = c * omega[j]
        scaled_w = ap_product_constant(m, WeightVector(tuple(omega), W.v, seq))
        assert scaled_w.value == pytest.approx(c ** (-1 / float(seq.head[j])) * base.value, rel=1e-10)

    @pytest.mark.parametrize("n, K", [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2)])
    def test_exact_against_oracle(self, n, K):
        m = DyadicModel(n, K)
        W = random_weight_vector(make_rng(8, n, K), m, TWO_TWO, EXACT)
        rep = ap_product_constant(m, W)
        value, (k, idx) = oracles.ap_product(m, W, exact=True)
        assert rep.value == value
        assert rep.attaining_cube == CubeId(k, idx)


class TestClassicalAp:
    @pytest.mark.parametrize("p, expect", [(2, 1.5625), (3, 1.40625)])
    def test_examples(self, p, expect):
        rep = classical_ap(DyadicModel(1, 1), np.array([1.0, 4.0]), p)
        assert rep.value == pytest.approx(expect)
        assert rep.attaining_cube == ROOT1

    def test_exact(self):
        m = DyadicModel(1, 1)
        w = np.array([Fraction(1), Fraction(4)], dtype=object)
        assert classical_ap(m, w, 2).value == Fraction(25, 16)

    def test_trivial(self):
        assert classical_ap(DyadicModel(1, 3), np.ones(8), Fraction(3, 2)).value == pytest.approx(1.0)

    @given(models(max_leaves=64), st.sampled_from([Fraction(3, 2), Fraction(2), Fraction(3)]), st.data())
    def test_at_least_one_and_oracle(self, m, p, data):
        w = positive_array(data.draw, m.leaf_count)
        rep = classical_ap(m, w, p)
        assert rep.value >= 1 - 1e-12
        assert rep.value == pytest.approx(oracles.classical_ap(m, w, p)[0], rel=1e-12)


class TestAStar:
    def test_examples(self):
        assert a_star_constant([(1.0, 2), (1.0, 3)]) == 1.0
        assert a_star_constant([(1.5625, 2)]) == pytest.approx(1.25)
        assert a_star_constant([(1.5625, 2), (1.5625, 2)]) == pytest.approx(1.5625)

    def test_from_weights_exact(self):
        m = DyadicModel(1, 1)
        W = make_weight_vector(m, [[1, 4], [1, 1]], [1, 1], TWO_TWO, EXACT)
        value, _ = a_star_from_weights(m, W)
        assert value == Fraction(5, 4)


class TestReverseHolder:
    def test_example(self):
        m = DyadicModel(1, 1)
        W = make_weight_vector(m, [[1, 4], [4, 1]], [1, 1], TWO_TWO)
        rep = rh_constant(m, W)
        assert rep.value == pytest.approx(1.25)
        assert rep.attaining_cube == ROOT1

    def test_equal_sigmas(self):
        m = DyadicModel(1, 3)
        w = np.linspace(1, 3, 8)
        assert rh_constant(m, make_weight_vector(m, [w, w], np.ones(8), TWO_TWO)).value == pytest.approx(1.0)

    @given(models(max_leaves=64), sequences(), st.data())
    def test_at_least_one(self, m, seq, data):
        W = random_weights(data.draw, m, seq)
        assert rh_constant(m, W).value >= 1 - 1e-12

    def test_nu(self):
        m = DyadicModel(1, 1)
        W = make_weight_vector(m, [[1, 4], [4, 1]], [1, 1], TWO_TWO)
        assert np.allclose(nu_sigma(W), [0.5, 0.5])


class TestSpTesting:
    def test_trivial(self):
        m = DyadicModel(2, 2)
        seq = ExponentSequence((Fraction(2), Fraction(2)), Geometric(2, 1))
        assert sp_testing_constant(m, trivial_weights(m, seq)).value == pytest.approx(1.0)

    def test_hand_instance_against_oracle(self):
        m = DyadicModel(1, 1)
        W = make_weight_vector(m, [[1, 4], [1, 1]], [1, 2], TWO_TWO, EXACT)
        rep = sp_testing_constant(m, W)
        value, (k, idx) = oracles.sp_testing(m, W, exact=True)
        assert rep.value == value and rep.attaining_cube == CubeId(k, idx)

    @given(models(max_leaves=32), sequences(), st.data())
    def test_against_oracle(self, m, seq, data):
        W = random_weights(data.draw, m, seq)
        value, _ = oracles.sp_testing(m, W)
        assert sp_testing_constant(m, W).value == pytest.approx(value, rel=1e-10)


class TestCarleson:
    def test_leaves_only(self):
        m = DyadicModel(1, 3)
        a = CarlesonFamily.zeros(m)
        a.levels[m.K][:] = m.cube_measure(m.K)
        assert carleson_constant(m, a, np.ones(8)).value == pytest.approx(1.0)

    @pytest.mark.parametrize("K", [0, 1, 3, 5])
    def test_all_cubes(self, K):
        m = DyadicModel(1, K)
        a = CarlesonFamily(m, [np.full(m.level_shape(k), m.cube_measure(k)) for k in range(K + 1)])
        rep = carleson_constant(m, a, np.ones(m.leaf_count))
        assert rep.value == pytest.approx(K + 1)
        assert rep.attaining_cube == CubeId(0, (0,))

    def test_zero(self):
        m = DyadicModel(2, 2)
        assert carleson_constant(m, CarlesonFamily.zeros(m), np.ones(16)).value == 0

    def test_infinite(self):
        m = DyadicModel(1, 1)
        a = CarlesonFamily.from_mapping(m, {"1:1": 1})
        assert carleson_constant(m, a, np.array([1.0, 0.0])).value == math.inf

    def test_negative_rejected(self):
        m = DyadicModel(1, 1)
        with pytest.raises(ValueError):
            CarlesonFamily.from_mapping(m, {"1:1": -1})

    def test_exact(self):
        m = DyadicModel(1, 1)
        a = CarlesonFamily.from_mapping(m, {"0:0": "1/2", "1:0": "1/4"}, EXACT)
        nu = np.array([Fraction(1), Fraction(3)], dtype=object)
        assert carleson_constant(m, a, nu).value == Fraction(1, 2)

    @given(models(max_leaves=64), st.integers(0, 2**32 - 1), st.data())
    def test_against_double_enumeration(self, m, seed, data):
        a = random_carleson(make_rng(seed), m)
        nu = positive_array(data.draw, m.leaf_count)
        value, _ = oracles.carleson(m, lambda k, idx: float(a.levels[k][idx]), nu)
        assert carleson_constant(m, a, nu).value == pytest.approx(value, rel=1e-12)

    @given(models(max_leaves=64), st.integers(0, 2**32 - 1))
    def test_subtree_root_is_total(self, m, seed):
        a = random_carleson(make_rng(seed), m)
        assert subtree_sums(m, a)[0].reshape(-1)[0] == pytest.approx(sum(float(x.sum()) for x in a.levels))
