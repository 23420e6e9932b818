import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from gammapolymer.polymer import (
    BudgetError,
    PolymerInstance,
    brute_force_fpp,
    brute_force_partition,
    enumerate_paths,
    fpp_dp,
    fpp_min,
    general_shape_matrix,
    log_partition_dp,
    partition_log,
    sample_fpp,
    sample_instance,
    sample_instance_general,
    sample_log_partition,
)
from gammapolymer.rng import stream
from gammapolymer.specfn import DomainError, gamma_sample, log_gamma_sample
from gammapolymer.stats import ks_two_sample

dims = st.integers(1, 6)


def test_unit_weights_count_paths():
    for m in range(1, 9):
        for n in range(1, 9):
            inst = PolymerInstance(np.zeros((m, n)))
            assert partition_log(inst) == pytest.approx(math.log(math.comb(n + m - 1, m)), abs=1e-12)


def test_hand_enumerated_2x2():
    inst = PolymerInstance.from_weights([[1.0, 2.0], [3.0, 4.0]])
    assert brute_force_partition(inst) == pytest.approx(math.log(15.0), rel=1e-15)
    assert partition_log(inst) == pytest.approx(math.log(15.0), rel=1e-15)


def test_single_row_is_a_sum():
    w = np.array([[0.3, 1.7, 2.2, 0.05]])
    inst = PolymerInstance.from_weights(w)
    assert partition_log(inst) == pytest.approx(math.log(w.sum()), rel=1e-14)
    assert brute_force_partition(inst) == pytest.approx(math.log(w.sum()), rel=1e-14)
    assert fpp_min(w) == pytest.approx(w.min())


def test_path_enumeration_count_and_order():
    paths = enumerate_paths(3, 3)
    assert len(paths) == math.comb(5, 3)
    assert np.all(np.diff(paths, axis=1) >= 0)
    as_tuples = [tuple(p) for p in paths]
    assert as_tuples == sorted(as_tuples)


def test_enumeration_budget():
    with pytest.raises(BudgetError):
        enumerate_paths(20, 20)


def test_dp_matches_enumeration_random(rng):
    for _ in range(100):
        m, n = rng.integers(1, 7, size=2)
        inst = sample_instance(int(m), int(n), float(rng.uniform(0.1, 3)), rng)
        a, b = partition_log(inst), brute_force_partition(inst)
        assert abs(a - b) <= 1e-12 * max(1.0, abs(b))
        costs = rng.standard_exponential((m, n))
        assert fpp_min(costs) == brute_force_fpp(costs)


@settings(max_examples=60, deadline=None)
@given(dims, dims, st.integers(0, 2**32), st.floats(-3, 3))
def test_single_weight_monotonicity(m, n, seed, bump):
    g = stream(seed, 0)
    lw = g.normal(size=(m, n))
    i, j = g.integers(0, m), g.integers(0, n)
    up = lw.copy()
    up[i, j] += abs(bump) + 1e-3
    assert partition_log(up) > partition_log(lw)
    costs = np.exp(lw)
    down = costs.copy()
    down[i, j] *= 0.5
    assert fpp_min(down) <= fpp_min(costs)


@settings(max_examples=40, deadline=None)
@given(dims, dims, st.integers(0, 2**32))
def test_unit_costs_give_m(m, n, seed):
    assert fpp_min(np.ones((m, n))) == m


def test_large_n_does_not_underflow():
    lz = sample_log_partition(400, 400, 0.05, stream(9, 0), 4)
    assert np.all(np.isfinite(lz)) and np.all(lz < -1000)


def test_instance_validation():
    with pytest.raises(DomainError):
        sample_instance(0, 3, 1.0, stream(0))
    with pytest.raises(DomainError):
        sample_instance(2, 3, 0.0, stream(0))
    with pytest.raises(DomainError):
        PolymerInstance.from_weights([[1.0, -2.0]])
    with pytest.raises(DomainError):
        fpp_min([[1.0, 0.0]])


def test_instance_is_immutable():
    inst = sample_instance(2, 2, 1.0, stream(0))
    with pytest.raises(ValueError):
        inst.log_weights[0, 0] = 1.0


def test_exponential_entries_mean():
    reps = 2000
    w = np.stack([sample_instance(3, 4, 1.0, stream(1, k)).weights for k in range(reps)])
    assert abs(w.mean() - 1.0) < 4 / math.sqrt(12 * reps)


def test_entrywise_marginals_ks():
    reps = 10**5
    draws = np.exp(_instance_log_weight_draws(reps))
    ref = gamma_sample(0.5, stream(21, 1), reps)
    crit = 1.63 * math.sqrt(2 / reps)
    for i in range(2):
        for j in range(3):
            assert ks_two_sample(draws[:, i, j], ref) < crit
    assert stats.kstest(draws[:, 0, 0], stats.gamma(0.5).cdf).statistic < crit


def _instance_log_weight_draws(reps):
    g = stream(21, 0)
    return np.stack([sample_instance(2, 3, 0.5, g).log_weights for _ in range(reps)])


def test_general_shape_matrix_index_map():
    a = np.array([0.1, 0.2])
    b = np.array([0.5, 0.6, 0.7])
    sm = general_shape_matrix(a, b)
    n, h = 2, 3
    m = h - n + 1
    expected = np.array([[a[n - j] + b[i + j - 2] for j in range(1, n + 1)] for i in range(1, m + 1)])
    assert np.allclose(sm, expected)
    assert np.allclose(sm, [[0.7, 0.7], [0.8, 0.8]])


def test_general_reduces_to_iid():
    gamma, eps = 0.5, 0.01
    sm = general_shape_matrix([eps] * 3, [gamma - eps] * 5)
    assert sm.shape == (3, 3) and np.allclose(sm, gamma)


def test_general_single_entry():
    inst = sample_instance_general([0.3], [0.7], stream(0))
    assert inst.shape_matrix.shape == (1, 1)
    assert inst.shape_matrix[0, 0] == pytest.approx(1.0)


def test_general_errors():
    with pytest.raises(DomainError):
        general_shape_matrix([0.1, 0.2], [0.5])
    with pytest.raises(DomainError):
        general_shape_matrix([-1.0], [0.5])


def test_tropical_limit():
    gamma, reps = 1e-3, 10**4
    lw = log_gamma_sample(gamma, stream(31, 0), size=(reps, 5, 5))
    lhs = -gamma * log_partition_dp(lw)
    rhs = fpp_dp(-gamma * lw)
    assert ks_two_sample(lhs, rhs) < 0.05


def test_lln_exponential_fpp_small():
    # m = 2n at moderate n: f/n already within a few percent of (sqrt 3 - 1)^2
    f = sample_fpp(1000, 500, stream(41, 0), 50) / 500
    assert f.mean() == pytest.approx(4 - 2 * math.sqrt(3), rel=0.05)
