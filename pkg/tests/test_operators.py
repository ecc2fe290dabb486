from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import SMALL_MODELS, models, nonneg_array, positive_array, sequences
from dyadlab.dyadic_model import EXACT, CubeId, DyadicModel, as_leaf_function
from dyadlab.exponents import ExponentSequence, Geometric
from dyadlab.function_vectors import FunctionVector, make_function_vector
from dyadlab.operators import (
    band_index,
    cubes_union_mask,
    maximal,
    product_maximal,
    stopping_decomposition,
    superlevel_maximal_cubes,
    superlevel_measure,
)
from dyadlab.sampling import make_rng, random_function, random_function_vector, random_weight

TWO_TWO = ExponentSequence((Fraction(2), Fraction(2)))
ONE_HEAD_TAIL = ExponentSequence((Fraction(2),), Geometric(2, 1))
SINGLE = ExponentSequence((Fraction(2),))


def random_vector(draw, m, seq):
    head = tuple(nonneg_array(draw, m.leaf_count) for _ in range(seq.N))
    support = None
    if seq.tail is not None and draw(st.booleans()):
        support = np.array(draw(st.lists(st.booleans(), min_size=m.leaf_count, max_size=m.leaf_count)))
    return FunctionVector(head, seq, support)


class TestMaximal:
    def test_lebesgue(self):
        assert maximal(DyadicModel(1, 1), np.array([1.0, 3.0])).tolist() == [2.0, 3.0]

    def test_constant(self):
        assert np.all(maximal(DyadicModel(2, 3), np.full(64, 1.7)) == 1.7)

    def test_weighted(self):
        out = maximal(DyadicModel(1, 1), np.array([3.0, 1.0]), np.array([1.0, 3.0]))
        assert out.tolist() == [3.0, 1.5]

    def test_ratio_example(self):
        out = maximal(DyadicModel(1, 2), np.array([4.0, 0, 0, 0]))
        assert out.tolist() == [4.0, 2.0, 1.0, 1.0]

    @given(models(max_leaves=64), st.data())
    def test_against_oracle(self, m, data):
        f = nonneg_array(data.draw, m.leaf_count)
        mu = positive_array(data.draw, m.leaf_count) if data.draw(st.booleans()) else None
        assert np.allclose(maximal(m, f, mu), oracles.maximal(m, f, mu), rtol=1e-12, atol=1e-15)

    @pytest.mark.parametrize("n, K", SMALL_MODELS)
    def test_exact_against_oracle(self, n, K):
        m = DyadicModel(n, K)
        rng = make_rng(3, n, K)
        f = as_leaf_function(m, [Fraction(int(x), 7) for x in rng.integers(0, 20, m.leaf_count)], EXACT)
        mu = as_leaf_function(m, [Fraction(int(x)) for x in rng.integers(1, 9, m.leaf_count)], EXACT)
        assert list(maximal(m, f)) == oracles.maximal(m, f, exact=True)
        assert list(maximal(m, f, mu)) == oracles.maximal(m, f, mu, exact=True)

    @given(models(max_leaves=64), st.sampled_from([Fraction(3, 2), Fraction(2), Fraction(3)]), st.data())
    def test_universal_weighted_bound(self, m, p, data):
        from dyadlab.function_vectors import weighted_lp_norm

        mu = positive_array(data.draw, m.leaf_count)
        f = nonneg_array(data.draw, m.leaf_count)
        lhs = weighted_lp_norm(m, maximal(m, f, mu), p, mu)
        assert lhs <= float(p / (p - 1)) * weighted_lp_norm(m, f, p, mu) * (1 + 1e-9)


class TestProductMaximal:
    def test_two_heads(self):
        m = DyadicModel(1, 1)
        F = make_function_vector(m, [[1, 3], [2, 0]], None, TWO_TWO)
        assert product_maximal(m, F).tolist() == [2.0, 2.0]

    def test_all_ones(self):
        m = DyadicModel(2, 2)
        F = make_function_vector(m, [np.ones(16)], None, ONE_HEAD_TAIL)
        assert np.all(product_maximal(m, F) == 1.0)

    def test_tail_kills_root(self):
        m = DyadicModel(1, 1)
        F = make_function_vector(m, [[1, 3]], [1, 0], ONE_HEAD_TAIL)
        assert product_maximal(m, F).tolist() == [1.0, 0.0]

    def test_level_floor(self):
        m = DyadicModel(1, 1)
        F = make_function_vector(m, [[1, 3], [2, 0]], None, TWO_TWO)
        assert product_maximal(m, F, max_level_floor=1).tolist() == [2.0, 0.0]

    @given(models(max_leaves=64), sequences(), st.data())
    def test_against_oracle(self, m, seq, data):
        F = random_vector(data.draw, m, seq)
        assert np.allclose(product_maximal(m, F), oracles.product_maximal(m, F), rtol=1e-12, atol=1e-300)

    @pytest.mark.parametrize("n, K", SMALL_MODELS)
    def test_exact_against_oracle(self, n, K):
        m = DyadicModel(n, K)
        rng = make_rng(4, n, K)
        head = [as_leaf_function(m, [Fraction(int(x), 3) for x in rng.integers(0, 9, m.leaf_count)], EXACT)
                for _ in range(2)]
        support = rng.random(m.leaf_count) < 0.7
        for seq, sup in ((TWO_TWO, None), (ExponentSequence((Fraction(4), Fraction(4)), Geometric(2, 1)), support)):
            F = FunctionVector(tuple(head), seq, None if sup is None or sup.all() else sup)
            assert list(product_maximal(m, F)) == oracles.product_maximal(m, F, exact=True)

    @given(models(max_leaves=64), sequences(), st.data())
    def test_dominated_by_product_of_maximals(self, m, seq, data):
        F = random_vector(data.draw, m, seq)
        bound = np.prod([maximal(m, f) for f in F.head], axis=0)
        assert np.all(product_maximal(m, F) <= bound * (1 + 1e-12))

    @given(models(max_leaves=64), sequences(), st.data())
    def test_homogeneous(self, m, seq, data):
        F = random_vector(data.draw, m, seq)
        j = data.draw(st.integers(0, seq.N - 1))
        c = data.draw(st.floats(0, 10))
        assert np.allclose(product_maximal(m, F.scaled(j, c)), c * product_maximal(m, F), rtol=1e-12, atol=1e-300)

    @given(models(max_leaves=64), sequences(), st.data())
    def test_weighted_against_oracle(self, m, seq, data):
        F = random_vector(data.draw, m, seq)
        measures = [positive_array(data.draw, m.leaf_count) for _ in range(seq.N)]
        got = product_maximal(m, F, measures)
        assert np.allclose(got, oracles.product_maximal(m, F, measures=measures), rtol=1e-12, atol=1e-300)


class TestSuperlevelCubes:
    def setup_method(self):
        self.m = DyadicModel(1, 1)
        self.F = make_function_vector(self.m, [[1, 3]], None, SINGLE)

    def test_right_leaf(self):
        assert superlevel_maximal_cubes(self.m, self.F, 2.5) == [CubeId(1, (1,))]

    def test_root(self):
        assert superlevel_maximal_cubes(self.m, self.F, 0.5) == [CubeId(0, (0,))]

    def test_empty(self):
        assert superlevel_maximal_cubes(self.m, self.F, 10) == []

    def test_non_strict(self):
        assert superlevel_maximal_cubes(self.m, self.F, 2, strict=True) == [CubeId(1, (1,))]
        assert superlevel_maximal_cubes(self.m, self.F, 2, strict=False) == [CubeId(0, (0,))]

    def test_lambda_positive(self):
        with pytest.raises(ValueError):
            superlevel_maximal_cubes(self.m, self.F, 0)

    @given(models(max_leaves=64), sequences(), st.floats(0.01, 20), st.booleans(), st.data())
    def test_cover_geometry(self, m, seq, lam, strict, data):
        F = random_vector(data.draw, m, seq)
        cubes = superlevel_maximal_cubes(m, F, lam, strict)
        for i, a in enumerate(cubes):
            for b in cubes[i + 1:]:
                assert not (a.contains(b) or b.contains(a))
        values = product_maximal(m, F)
        level = values > lam if strict else values >= lam
        assert np.array_equal(cubes_union_mask(m, cubes), level)
        v = positive_array(data.draw, m.leaf_count)
        total = sum(float(np.sum(v[m.cube_mask(c)])) for c in cubes) / m.leaf_count
        assert superlevel_measure(m, values, lam, v, strict) == pytest.approx(total, rel=1e-12)


class TestStoppingDecomposition:
    def test_bands(self):
        m = DyadicModel(1, 1)
        F = make_function_vector(m, [[1, 3]], None, SINGLE)
        dec = stopping_decomposition(m, F, 2)
        assert dec.bands[0].tolist() == [True, False]
        assert dec.bands[1].tolist() == [False, True]

    def test_negative_band(self):
        m = DyadicModel(1, 2)
        F = make_function_vector(m, [np.ones(4)], None, SINGLE)
        dec = stopping_decomposition(m, F, 2)
        assert list(dec.bands) == [-1]

    @pytest.mark.parametrize("value, alpha, k", [(1, 2, -1), (2, 2, 0), (3, 2, 1), (Fraction(4), Fraction(2), 1),
                                                  (Fraction(1, 3), Fraction(3, 2), -3)])
    def test_band_index(self, value, alpha, k):
        assert band_index(value, alpha) == k
        assert alpha**k < value <= alpha ** (k + 1)

    @given(models(max_leaves=64), sequences(), st.floats(1.1, 4), st.data())
    def test_invariants(self, m, seq, alpha, data):
        F = random_vector(data.draw, m, seq)
        dec = stopping_decomposition(m, F, alpha)
        values = product_maximal(m, F)
        union = np.zeros(m.leaf_count, dtype=bool)
        for k, S in dec.bands.items():
            assert not (union & S).any()
            union |= S
            assert np.all((alpha**k < values[S]) & (values[S] <= alpha ** (k + 1) * (1 + 1e-12)))
            pieces = dec.pieces[k]
            covered = np.zeros(m.leaf_count, dtype=bool)
            for cube, E in zip(dec.selected[k], pieces):
                assert not (covered & E).any()
                covered |= E
                assert np.all(m.cube_mask(cube)[E])
                F_avg = np.prod([f[m.cube_mask(cube)].mean() for f in F.head])
                assert F_avg > alpha**k
            assert np.array_equal(covered, S)
        assert np.array_equal(union, values > 0)

    def test_exact_bands(self):
        m = DyadicModel(1, 2)
        F = make_function_vector(m, [[1, 2, 3, 4]], None, SINGLE, EXACT)
        dec = stopping_decomposition(m, F, Fraction(3, 2))
        assert sum(int(S.sum()) for S in dec.bands.values()) == 4


class TestSampling:
    def test_generators_deterministic(self):
        m = DyadicModel(2, 2)
        a = random_function(make_rng(5, 1), m)
        b = random_function(make_rng(5, 1), m)
        assert np.array_equal(a, b)
        assert np.all(random_weight(make_rng(5, 2), m) > 0)

    def test_function_vector_shapes(self):
        m = DyadicModel(1, 3)
        F = random_function_vector(make_rng(1), m, ExponentSequence((Fraction(2),), Geometric(2, 1)))
        assert F.N == 1 and F.head[0].shape == (8,)
