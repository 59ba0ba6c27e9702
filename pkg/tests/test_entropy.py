import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from catalytic.entropy import (
    ALPHA_GRID, majorizes, mutual_information, partial_sum_gaps, random_majorizing_pair, rank_of,
    renyi_entropy, renyi_monotone, shannon, trumping_check,
)
from catalytic.quantum import DensityMatrix, random_density_matrix, tensor_q

RHO = [0, F(1, 2), F(1, 2)]
RHO_P = [F(1, 6), F(1, 6), F(2, 3)]


def test_min_entropy_of_qutrit_pair():
    assert renyi_entropy(RHO, math.inf).value == pytest.approx(math.log(2))
    assert renyi_entropy(RHO_P, math.inf).value == pytest.approx(math.log(3 / 2))


def test_shannon_by_direct_sum():
    expected = -(2 * (1 / 6) * math.log(1 / 6) + (2 / 3) * math.log(2 / 3))
    assert shannon(RHO_P) == pytest.approx(expected, abs=1e-14)
    assert shannon(RHO_P) == pytest.approx(0.8676, abs=1e-4)


def test_bits_and_limits():
    assert renyi_entropy([F(1, 4)] * 4, 1, "bits").value == pytest.approx(2.0)
    assert renyi_entropy(RHO, 0).value == pytest.approx(math.log(2))
    low = renyi_entropy(RHO_P, -math.inf)
    assert low.infinite is False
    assert renyi_entropy(RHO, -1).infinite


def test_monotone_sign_for_negative_orders():
    assert renyi_monotone([0.5, 0.5], -2) == -renyi_entropy([0.5, 0.5], -2).value
    assert renyi_monotone([0.5, 0.5], 2) == renyi_entropy([0.5, 0.5], 2).value


def test_rank_uses_cutoff():
    assert rank_of([1 - 1e-12, 1e-12]) == 1
    assert rank_of(RHO) == 2


def test_qutrit_pair_is_incomparable():
    a, b = [F(1, 2), F(1, 2), 0], [F(2, 3), F(1, 6), F(1, 6)]
    assert not majorizes(a, b) and not majorizes(b, a)
    assert partial_sum_gaps(a, b) == [F(-1, 6), F(1, 6), 0]


def test_trumping_verdicts():
    v = trumping_check(RHO, RHO_P)
    assert not v.passed
    assert math.inf in [a for a, *_ in v.violations]
    assert trumping_check([F(3, 4), F(1, 4)], [F(1, 2), F(1, 2)]).passed


def test_mutual_information_product_and_bell():
    rng = np.random.default_rng(2)
    prod = tensor_q(random_density_matrix(2, rng), random_density_matrix(3, rng))
    assert abs(mutual_information(prod, [0], [1])) <= 1e-9
    bell = DensityMatrix.pure(np.array([1, 0, 0, 1]) / math.sqrt(2), dims=[2, 2])
    assert mutual_information(bell, [0], [1]) == pytest.approx(2.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_entropy_additive(seed):
    rng = np.random.default_rng(seed)
    a, b = random_density_matrix(2, rng), random_density_matrix(3, rng)
    ab = tensor_q(a, b)
    for alpha in (0.5, 1, 2, math.inf):
        lhs = renyi_entropy(ab, alpha).value
        assert lhs == pytest.approx(renyi_entropy(a, alpha).value + renyi_entropy(b, alpha).value, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_majorizing_pairs_raise_every_monotone(n, seed):
    x, y = random_majorizing_pair(n, np.random.default_rng(seed))
    assert majorizes(x, y, 1e-12)
    for alpha in ALPHA_GRID:
        assert renyi_monotone(y, alpha) >= renyi_monotone(x, alpha) - 1e-9


@given(st.lists(st.integers(0, 8), min_size=1, max_size=6).filter(lambda w: sum(w) > 0))
def test_majorization_is_reflexive_and_uniform_is_bottom(w):
    p = [F(v, sum(w)) for v in w]
    assert majorizes(p, p)
    assert majorizes(p, [F(1, len(p))] * len(p))
