import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ambiconv import (
    LiftedConvOp,
    ToleranceProfile,
    antidiagonal_shift,
    as_matrix,
    as_signal,
    convolve,
    hankel_basis,
    lift_apply,
    matrix_from_json,
    matrix_to_json,
    outer,
    rank_estimate,
    signal_from_json,
    signal_to_json,
)
from ambiconv.nullspace import n0_element
from oracles import antidiagonal_sums_brute, convolve_brute, rank_fraction

X1 = [1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 1]
Y1 = [1, 0, 0, 0, 1, 0, 0]
Z_COMMON = [1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 0]

signal_entries = st.lists(
    st.floats(min_value=-10, max_value=10, allow_nan=False), min_size=1, max_size=9
)


class TestValidation:
    def test_signal_rejects_nan(self):
        with pytest.raises(ValueError):
            as_signal([1.0, float("nan")])

    def test_signal_rejects_inf(self):
        with pytest.raises(ValueError):
            as_signal([float("inf")])

    def test_signal_rejects_empty_and_2d(self):
        with pytest.raises(ValueError):
            as_signal([])
        with pytest.raises(ValueError):
            as_signal([[1.0, 2.0]])

    def test_matrix_rejects_nonfinite_and_1d(self):
        with pytest.raises(ValueError):
            as_matrix([[1.0, float("nan")]])
        with pytest.raises(ValueError):
            as_matrix([1.0, 2.0])

    def test_signals_are_immutable(self):
        x = as_signal([1.0, 2.0])
        with pytest.raises(ValueError):
            x[0] = 3.0

    def test_tolerance_profile_rejects_negative(self):
        with pytest.raises(ValueError):
            ToleranceProfile(abs_tol=-1.0)

    def test_tolerance_threshold_scales_with_operands(self):
        tol = ToleranceProfile(abs_tol=1e-12, rel_tol=1e-9)
        assert tol.threshold(np.zeros(3)) == 1e-12
        assert tol.threshold([2.0], [-8.0]) == pytest.approx(1e-12 + 8e-9)


class TestConvolve:
    def test_published_integer_example_is_exact(self):
        assert np.array_equal(convolve(X1, Y1), np.array(Z_COMMON, dtype=float))

    def test_scalar_kernel_is_identity(self):
        x = [3.0, -1.0, 2.0, 7.0]
        assert np.array_equal(convolve(x, [1.0]), np.array(x))

    def test_scaling_pair_invariance_exact_on_integers(self):
        rng = np.random.default_rng(5)
        x = rng.integers(-9, 10, 6).astype(float)
        y = rng.integers(-9, 10, 4).astype(float)
        assert np.array_equal(convolve(2.0 * x, y / 2.0), convolve(x, y))

    def test_matches_brute_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            x = rng.uniform(-1, 1, rng.integers(1, 9))
            y = rng.uniform(-1, 1, rng.integers(1, 9))
            got = convolve(x, y)
            want = convolve_brute(x, y)
            assert np.max(np.abs(got - want)) <= 1e-14 * max(1.0, np.max(np.abs(want)))

    @settings(max_examples=60, deadline=None)
    @given(signal_entries, signal_entries)
    def test_commutative(self, x, y):
        assert np.allclose(convolve(x, y), convolve(y, x), rtol=1e-12, atol=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_bilinear_in_first_argument(self, data):
        m = data.draw(st.integers(1, 8))
        entry = st.floats(min_value=-10, max_value=10, allow_nan=False)
        x1 = data.draw(st.lists(entry, min_size=m, max_size=m))
        x2 = data.draw(st.lists(entry, min_size=m, max_size=m))
        y = data.draw(signal_entries)
        lhs = convolve(np.add(x1, x2), y)
        rhs = convolve(x1, y) + convolve(x2, y)
        assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-9)


class TestLiftApply:
    def test_fig_case_3x4_matches_brute(self):
        rng = np.random.default_rng(0)
        w = rng.uniform(-1, 1, (3, 4))
        assert np.array_equal(lift_apply(w), antidiagonal_sums_brute(w))

    def test_zero_matrix(self):
        assert np.array_equal(lift_apply(np.zeros((4, 5))), np.zeros(8))

    def test_outer_lift_equals_convolution(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            m, n = rng.integers(1, 13, size=2)
            x = rng.uniform(-1, 1, m)
            y = rng.uniform(-1, 1, n)
            gap = np.max(np.abs(lift_apply(outer(x, y)) - convolve(x, y)))
            assert gap <= 1e-12

    def test_operator_validates_shape(self):
        op = LiftedConvOp(3, 4)
        assert op.output_len == 6
        with pytest.raises(ValueError):
            op.apply(np.zeros((2, 2)))
        w = np.arange(12.0).reshape(3, 4)
        assert np.array_equal(op.apply(w), lift_apply(w))

    def test_operator_rejects_bad_dims(self):
        with pytest.raises(ValueError):
            LiftedConvOp(0, 3)


class TestHankelBasis:
    def test_3x4_matrix_j3(self):
        s3 = hankel_basis(3, 4)[2]
        want = np.array([[0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]], dtype=float)
        assert np.array_equal(s3, want)

    def test_single_row_gives_identity_decomposition(self):
        basis = hankel_basis(1, 5)
        stacked = np.vstack([s[0] for s in basis])
        assert np.array_equal(stacked, np.eye(5))

    def test_disjoint_supports_sum_to_all_ones(self):
        total = sum(hankel_basis(5, 7))
        assert np.array_equal(total, np.ones((5, 7)))

    def test_trace_inner_product_reproduces_lift(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            m, n = rng.integers(1, 11, size=2)
            w = rng.uniform(-1, 1, (m, n))
            basis = hankel_basis(m, n)
            via_inner = np.array([float(np.sum(s * w)) for s in basis])
            assert np.max(np.abs(via_inner - lift_apply(w))) <= 1e-12


class TestAntidiagonalShift:
    def test_single_cell(self):
        w1, w2 = antidiagonal_shift([[1.0]])
        assert np.array_equal(w1, [[0.0, 1.0], [0.0, 0.0]])
        assert np.array_equal(w2, [[0.0, 0.0], [1.0, 0.0]])
        assert np.array_equal(lift_apply(w1), [0.0, 1.0, 0.0])

    def test_shift_preserves_lift_exactly(self):
        rng = np.random.default_rng(9)
        wp = rng.uniform(-1, 1, (2, 3))
        w1, w2 = antidiagonal_shift(wp)
        assert np.array_equal(lift_apply(w1), lift_apply(w2))
        inner = np.concatenate(([0.0], lift_apply(wp), [0.0]))
        assert np.array_equal(lift_apply(w1), inner)

    def test_zero_block(self):
        w1, w2 = antidiagonal_shift(np.zeros((3, 3)))
        assert not w1.any() and not w2.any()


class TestOuterAndRank:
    def test_outer_example(self):
        assert np.array_equal(outer([1, 0], [0, 1]), [[0, 1], [0, 0]])

    def test_outer_zero_factor(self):
        assert not outer([0.0, 0.0], [1.0, 2.0]).any()

    def test_rank_zero_matrix(self):
        assert rank_estimate(np.zeros((4, 6))) == 0

    def test_rank_one_outer(self):
        assert rank_estimate(outer([1.0, 2.0, 3.0], [4.0, 5.0])) == 1

    def test_rank_two_bordered_product_vs_fraction_oracle(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            m, n = rng.integers(3, 7, size=2)
            u = rng.integers(-5, 6, m - 1).astype(float)
            v = rng.integers(-5, 6, n - 1).astype(float)
            q = n0_element(u, v)
            assert rank_estimate(q) == rank_fraction(q) <= 2


class TestJson:
    def test_signal_round_trip(self):
        x = as_signal([1.5, -2.0, 0.0])
        obj = signal_to_json(x)
        assert obj == {"len": 3, "entries": [1.5, -2.0, 0.0]}
        assert np.array_equal(signal_from_json(json.loads(json.dumps(obj))), x)

    def test_matrix_round_trip(self):
        w = as_matrix([[1.0, 2.0], [3.0, 4.0]])
        obj = matrix_to_json(w)
        assert obj["m"] == 2 and obj["n"] == 2
        assert np.array_equal(matrix_from_json(obj), w)

    def test_signal_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            signal_from_json({"len": 4, "entries": [1.0, 2.0]})

    def test_matrix_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            matrix_from_json({"m": 3, "n": 2, "entries": [[1.0, 2.0]]})

    def test_missing_keys_rejected(self):
        with pytest.raises(ValueError):
            signal_from_json({"entries": [1.0]})
        with pytest.raises(ValueError):
            matrix_from_json({"entries": [[1.0]]})
