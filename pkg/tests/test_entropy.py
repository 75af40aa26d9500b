import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsallis_tree.entropy import (
    JointDistribution,
    ProbabilityDistribution,
    q_exp,
    q_log,
    shannon_entropy,
    tsallis_conditional_entropy,
    tsallis_conditional_entropy_pointwise,
    tsallis_entropy,
    tsallis_joint_entropy,
    tsallis_mutual_information,
)
from tsallis_tree.errors import DomainError, InvalidDistribution, NonFiniteOrder


@st.composite
def distributions(draw, min_size=1, max_size=8):
    weights = draw(st.lists(st.floats(0.0, 1.0), min_size=min_size, max_size=max_size))
    if sum(weights) == 0:
        weights[0] = 1.0
    total = math.fsum(weights)
    return [w / total for w in weights]


def random_joint(rng, rows, cols, zeros=True):
    cells = rng.random((rows, cols))
    if zeros:
        cells[rng.random((rows, cols)) < 0.2] = 0.0
    if cells.sum() == 0:
        cells[0, 0] = 1.0
    return cells / cells.sum()


def mp_shannon(probs):
    mpmath.mp.dps = 40
    return float(-mpmath.fsum(mpmath.mpf(p) * mpmath.log(p) for p in probs if p > 0))


class TestShannon:
    def test_degenerate(self):
        assert shannon_entropy([1.0]) == 0.0

    def test_uniform_two(self):
        assert shannon_entropy([0.5, 0.5]) == pytest.approx(math.log(2), abs=1e-15)

    def test_skewed_against_high_precision(self):
        # the expected value is 0.610864 to six places
        assert shannon_entropy([0.3, 0.7]) == pytest.approx(mp_shannon([0.3, 0.7]), abs=1e-15)
        assert round(shannon_entropy([0.3, 0.7]), 6) == 0.610864

    def test_zero_terms_skipped(self):
        assert shannon_entropy([0.5, 0.0, 0.5]) == shannon_entropy([0.5, 0.5])

    @given(distributions())
    def test_bounds(self, probs):
        h = shannon_entropy(probs)
        assert -1e-12 <= h <= math.log(len(probs)) + 1e-12

    @pytest.mark.parametrize(
        "bad", [[], [0.5, 0.6], [-0.1, 1.1], [float("nan"), 1.0], [0.5, 0.5 + 2e-9]]
    )
    def test_invalid(self, bad):
        with pytest.raises(InvalidDistribution):
            shannon_entropy(bad)

    def test_within_tolerance_accepted(self):
        shannon_entropy([0.5, 0.5 + 5e-10])


class TestTsallis:
    def test_q2_half(self):
        assert tsallis_entropy([0.5, 0.5], 2) == 0.5

    def test_q2_gini(self):
        assert tsallis_entropy([0.2, 0.3, 0.5], 2) == pytest.approx(1 - (0.04 + 0.09 + 0.25), abs=1e-15)

    def test_q1_is_shannon_bitwise(self):
        assert tsallis_entropy([0.3, 0.7], 1.0) == shannon_entropy([0.3, 0.7])
        assert tsallis_entropy([0.3, 0.7], 1) == shannon_entropy([0.3, 0.7])

    @pytest.mark.parametrize("q", [0.1, 0.5, 1.0, 2.0, 7.5])
    def test_pure(self, q):
        assert tsallis_entropy([1.0, 0.0, 0.0], q) == 0.0

    @pytest.mark.parametrize("q", [float("nan"), float("inf"), -float("inf")])
    def test_nonfinite_order(self, q):
        with pytest.raises(NonFiniteOrder):
            tsallis_entropy([0.5, 0.5], q)

    def test_negative_order_allowed(self):
        # q <= 0 is permitted; no sign guarantee
        assert math.isfinite(tsallis_entropy([0.25, 0.75], -1.0))

    def test_against_q_log_form(self):
        probs = [0.1, 0.2, 0.3, 0.4]
        for q in (0.3, 0.9, 1.7, 4.0):
            direct = -sum(p**q * q_log(p, q) for p in probs)
            assert tsallis_entropy(probs, q) == pytest.approx(direct, abs=1e-12)

    @given(distributions(), st.floats(0.05, 10.0))
    def test_nonnegative(self, probs, q):
        assert tsallis_entropy(probs, q) >= -1e-12

    @given(distributions(), st.floats(0.05, 10.0))
    def test_gini_and_uniform_bound(self, probs, q):
        uniform = [1.0 / len(probs)] * len(probs)
        assert tsallis_entropy(probs, q) <= tsallis_entropy(uniform, q) + 1e-12

    def test_uniform_is_max_against_1000_samples(self, rng):
        for q in (0.5, 1.0, 2.0, 3.5):
            top = tsallis_entropy([0.2] * 5, q)
            for _ in range(1000):
                p = rng.dirichlet(np.ones(5))
                assert tsallis_entropy(p, q) <= top + 1e-12

    @given(distributions(min_size=2))
    def test_limit_q_to_one(self, probs):
        h = shannon_entropy(probs)
        for q in (1 - 1e-4, 1 + 1e-4):
            assert abs(tsallis_entropy(probs, q) - h) <= 1e-3

    def test_pdistribution_type_accepted(self):
        d = ProbabilityDistribution((0.25, 0.75))
        assert tsallis_entropy(d, 2) == tsallis_entropy([0.25, 0.75], 2)
        assert ProbabilityDistribution.from_counts([1, 3]) == d


class TestQLogExp:
    @pytest.mark.parametrize("q", [-1.0, 0.0, 0.5, 1.0, 2.0, 5.0])
    def test_log_of_one(self, q):
        assert q_log(1.0, q) == 0.0

    def test_log_2_2(self):
        assert q_log(2.0, 2.0) == 0.5

    def test_q1_natural_log(self):
        for x in (0.1, 1.0, 2.5, 100.0):
            assert q_log(x, 1.0) == math.log(x)
            assert q_log(x, 1.0 + 1e-7) == pytest.approx(math.log(x), rel=1e-5)

    def test_domain(self):
        with pytest.raises(DomainError):
            q_log(-1.0, 0.5)
        with pytest.raises(DomainError):
            q_log(0.0, 1.0)
        with pytest.raises(DomainError):
            q_log(0.0, 2.0)
        assert q_log(0.0, 0.5) == -2.0

    @pytest.mark.parametrize("q", [-2.0, 0.5, 1.0, 3.0])
    def test_exp_of_zero(self, q):
        assert q_exp(0.0, q) == 1.0

    def test_exp_cutoff_branch(self):
        assert q_exp(1.0, 3.0) == 0.0

    def test_exp_q1(self):
        assert q_exp(0.7, 1.0) == math.exp(0.7)

    def test_exp_nonfinite(self):
        with pytest.raises(DomainError):
            q_exp(float("inf"), 2.0)

    @settings(max_examples=300)
    @given(st.floats(1e-6, 10.0), st.floats(0.1, 5.0))
    def test_inverse_pair(self, x, q):
        assert q_exp(q_log(x, q), q) == pytest.approx(x, rel=1e-9)


class TestJoint:
    def test_uniform_2x2(self):
        j = [[0.25, 0.25], [0.25, 0.25]]
        assert tsallis_joint_entropy(j, 2) == 0.75
        assert tsallis_conditional_entropy(j, 2) == 0.25
        assert tsallis_mutual_information(j, 2) == 0.25

    def test_diagonal(self):
        j = [[0.5, 0.0], [0.0, 0.5]]
        assert tsallis_conditional_entropy(j, 2) == 0.0
        assert tsallis_mutual_information(j, 2) == 0.5

    def test_single_cell(self):
        j = [[0.0, 0.0], [0.0, 1.0]]
        for q in (0.5, 1.0, 2.0):
            assert tsallis_joint_entropy(j, q) == 0.0

    def test_joint_q2_is_one_minus_squares(self, rng):
        for _ in range(20):
            j = random_joint(rng, 3, 4)
            assert tsallis_joint_entropy(j, 2) == pytest.approx(1 - (j**2).sum(), abs=1e-12)

    def test_q1_joint_is_shannon_of_cells(self, rng):
        j = random_joint(rng, 3, 3)
        assert tsallis_joint_entropy(j, 1.0) == shannon_entropy(j.ravel())

    def test_deterministic_function_has_zero_conditional(self):
        # X = f(Y): each column has one nonzero cell
        j = [[0.2, 0.0, 0.3], [0.0, 0.5, 0.0]]
        for q in (0.5, 1.0, 2.0, 4.0):
            assert tsallis_conditional_entropy(j, q) == 0.0

    def test_q1_conditional_matches_shannon_oracle(self, rng):
        for _ in range(50):
            j = random_joint(rng, 3, 3)
            py = j.sum(axis=0)
            # H(X|Y) = H(X,Y) - H(Y), evaluated in high precision
            oracle = mp_shannon(j.ravel()) - mp_shannon(py)
            assert tsallis_conditional_entropy(j, 1.0) == pytest.approx(oracle, abs=1e-12)

    def test_two_conditional_forms_agree(self, rng):
        for q in (0.3, 1.0, 2.0, 3.7):
            for _ in range(50):
                j = random_joint(rng, 4, 3)
                a = tsallis_conditional_entropy(j, q)
                b = tsallis_conditional_entropy_pointwise(j, q)
                assert a == pytest.approx(b, abs=1e-9)

    def test_independent_mi_zero_at_q1(self, rng):
        px, py = rng.dirichlet(np.ones(3)), rng.dirichlet(np.ones(4))
        assert tsallis_mutual_information(np.outer(px, py), 1.0) == pytest.approx(0.0, abs=1e-12)

    def test_product_mi_closed_form(self, rng):
        # for product joints I_q = (q - 1) S_q(X) S_q(Y)
        for q in (0.5, 2.0, 3.0):
            px, py = rng.dirichlet(np.ones(3)), rng.dirichlet(np.ones(2))
            expected = (q - 1) * tsallis_entropy(px, q) * tsallis_entropy(py, q)
            assert tsallis_mutual_information(np.outer(px, py), q) == pytest.approx(expected, abs=1e-12)

    def test_decomposition(self, rng):
        for q in (0.5, 1.0, 2.0, 3.0):
            for _ in range(50):
                j = JointDistribution(random_joint(rng, 3, 5))
                lhs = tsallis_joint_entropy(j, q)
                rhs = tsallis_entropy(j.marginal_x(), q) + tsallis_conditional_entropy(j.transpose(), q)
                assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_duality_with_x_given_y_information(self, rng):
        # S(Y|X) + S(X|Y) = S(X,Y) - I(X;Y) with I(X;Y) = S(X) - S(X|Y); exact for every q
        for q in (0.5, 1.0, 2.0, 3.0):
            for _ in range(50):
                j = JointDistribution(random_joint(rng, 4, 3))
                lhs = tsallis_conditional_entropy(j.transpose(), q) + tsallis_conditional_entropy(j, q)
                rhs = tsallis_joint_entropy(j, q) - tsallis_mutual_information(j, q)
                assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_information_is_symmetric(self, rng):
        # S_q(X|Y) = S_q(X,Y) - S_q(Y) makes I_q(X;Y) = S_q(X) + S_q(Y) - S_q(X,Y)
        for q in (0.5, 1.0, 2.0, 3.0):
            j = JointDistribution(random_joint(rng, 3, 4, zeros=False))
            a = tsallis_mutual_information(j, q)
            b = tsallis_mutual_information(j.transpose(), q)
            assert a == pytest.approx(b, abs=1e-12)

    @pytest.mark.parametrize("bad", [[[0.5, 0.6]], [[-0.5, 1.5]], [], [[[0.5]], [[0.5]]]])
    def test_invalid_joint(self, bad):
        with pytest.raises(InvalidDistribution):
            tsallis_joint_entropy(bad, 2.0)

    def test_zero_column_contributes_nothing(self):
        with_zero = [[0.25, 0.0, 0.25], [0.25, 0.0, 0.25]]
        without = [[0.25, 0.25], [0.25, 0.25]]
        for q in (0.5, 1.0, 2.0):
            assert tsallis_conditional_entropy(with_zero, q) == tsallis_conditional_entropy(without, q)

    def test_small_grid_by_enumeration(self):
        # brute-force pseudo-additivity on a 2x2 product over a coarse probability grid
        for a, b in itertools.product([0.1, 0.5, 0.9], repeat=2):
            j = np.outer([a, 1 - a], [b, 1 - b])
            sx, sy = tsallis_entropy([a, 1 - a], 3.0), tsallis_entropy([b, 1 - b], 3.0)
            assert tsallis_joint_entropy(j, 3.0) == pytest.approx(sx + sy - 2 * sx * sy, abs=1e-12)
