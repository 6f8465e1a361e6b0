import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats as sps

from persistkit.lattice import (
    WalkSpec,
    occupation_stats,
    pack_site,
    sample_stable_step,
    sample_walk,
    stable_draws,
    visit_counts,
)
from persistkit.rng import trial_seed
from persistkit.rwrs import running_extremes


def test_walk_spec_validation():
    with pytest.raises(ValueError):
        WalkSpec(4)
    with pytest.raises(ValueError):
        WalkSpec(2, "stable", alpha=1.5)
    with pytest.raises(ValueError):
        WalkSpec(1, "stable", alpha=1.0)
    with pytest.raises(ValueError):
        WalkSpec(1, "lazy", hold=1.0)
    with pytest.raises(ValueError):
        WalkSpec(1, "hopping")
    assert WalkSpec(1, "stable", alpha=1.5).index == 1.5
    assert WalkSpec(2).index == 2.0


def first_positions(spec, trials, seed):
    top, _ = running_extremes(spec, [1], trials, seed)
    return top[:, 0]


def test_simple_first_step_fair():
    s1 = first_positions(WalkSpec(1, length=1), 100_000, 1)
    assert set(np.unique(s1)) == {-1.0, 1.0}
    assert abs(np.mean(s1 == 1) - 0.5) < 3 * math.sqrt(0.25 / s1.size)


def test_lazy_hold_probability():
    s1 = first_positions(WalkSpec(1, "lazy", hold=1 / 3, length=1), 100_000, 2)
    p0 = np.mean(s1 == 0)
    assert abs(p0 - 1 / 3) < 3 * math.sqrt(2 / 9 / s1.size)
    assert abs(np.mean(s1 == 1) - 1 / 3) < 3 * math.sqrt(2 / 9 / s1.size)


def test_kernel_and_single_path_agree():
    spec = WalkSpec(2, length=50)
    top, bottom = running_extremes(WalkSpec(1, "lazy", hold=0.2, length=50), [50], 20, 9)
    for t in range(20):
        s = sample_walk(WalkSpec(1, "lazy", hold=0.2, length=50), trial_seed(9, t))[:, 0]
        assert top[t, 0] == s[1:].max() and bottom[t, 0] == s[1:].min()
    path = sample_walk(spec, 5)
    assert path.shape == (51, 2)
    assert np.all(np.abs(np.diff(path, axis=0)).sum(axis=1) == 1)


@pytest.mark.parametrize("kind", ["simple", "lazy"])
@pytest.mark.parametrize("d", [1, 2, 3])
def test_nearest_neighbour_steps(kind, d):
    path = sample_walk(WalkSpec(d, kind, hold=0.4, length=500), 3)
    assert np.all(path[0] == 0)
    steps = np.abs(np.diff(path, axis=0)).sum(axis=1)
    assert set(np.unique(steps)) <= ({1} if kind == "simple" else {0, 1})


def test_stable_alpha2_is_gaussian_variance_two():
    x = stable_draws(2.0, 100_000, 4)
    se = 2.0 * math.sqrt(2.0 / x.size)
    assert abs(x.var() - 2.0) < 3 * se
    ref = np.sqrt(2.0) * np.random.default_rng(4).standard_normal(x.size)
    assert sps.ks_2samp(x, ref).pvalue > 1e-3


@pytest.mark.parametrize("alpha", [1.2, 1.5, 2.0])
def test_stable_symmetry(alpha):
    x = stable_draws(alpha, 100_000, 5)
    assert abs(np.mean(x > 0) - 0.5) < 3 * math.sqrt(0.25 / x.size)
    # median within the 99.7% order-statistic band of 0
    k = int(x.size / 2 - 3 * math.sqrt(x.size) / 2)
    s = np.sort(x)
    assert s[k] < 0 < s[-k]


def test_stable_tail_constant():
    alpha = 1.5
    x = np.abs(stable_draws(alpha, 2_000_000, 6))
    # P(|X| > t) ~ 2 Gamma(alpha) sin(pi alpha / 2) / pi * t^-alpha
    c = 2 * math.gamma(alpha) * math.sin(math.pi * alpha / 2) / math.pi
    for t in (10.0, 30.0, 100.0):
        assert np.mean(x > t) * t**alpha == pytest.approx(c, rel=0.12)


def test_rounded_stable_walk_tail():
    alpha = 1.5
    path = sample_walk(WalkSpec(1, "stable", alpha=alpha, length=1_000_000), 8)[:, 0]
    steps = np.abs(np.diff(path))
    c = 2 * math.gamma(alpha) * math.sin(math.pi * alpha / 2) / math.pi
    vals = [np.mean(steps > t) * t**alpha for t in (10, 30, 100)]
    assert all(v == pytest.approx(c, rel=0.15) for v in vals)


def test_sample_stable_step_reproducible():
    assert sample_stable_step(1.5, 3) == sample_stable_step(1.5, 3)
    with pytest.raises(ValueError):
        sample_stable_step(0.9, 3)


def test_occupation_example():
    path = np.array([0, 1, 0, 1])
    occ = occupation_stats(path)
    assert occ.walk_range == 2 and occ.self_intersections == 5
    assert visit_counts(path) == {(0,): 1, (1,): 2}


@given(st.lists(st.sampled_from([(1, 0), (-1, 0), (0, 1), (0, -1)]), min_size=1, max_size=80),
       st.floats(0.5, 3.0))
def test_occupation_invariants(steps, beta):
    path = np.vstack([[0, 0], np.cumsum(np.array(steps), axis=0)])
    n = len(steps)
    counts = visit_counts(path)
    occ = occupation_stats(path, beta)
    assert sum(counts.values()) == n
    assert occ.walk_range == len({tuple(p) for p in path[1:]}) >= 1
    assert occ.self_intersections == sum(v * v for v in counts.values()) >= n
    assert occupation_stats(path, 1.0).v_beta == n
    assert occupation_stats(path, 2.0).v_beta == occ.self_intersections
    assert occ.v_beta == pytest.approx(sum(v**beta for v in counts.values()))


def exact_mean_v(n):
    # E V_n = sum_{i,j} P(S_i = S_j) = n + 2 sum_k (n - k) P(S_k = 0)
    k = np.arange(2, n, 2)
    p0 = np.exp([math.lgamma(j + 1) - 2 * math.lgamma(j // 2 + 1) - j * math.log(2) for j in k])
    return n + 2 * float(np.sum((n - k) * p0))


def test_exact_mean_v_small_n():
    # S_1 != S_2 always, so V_2 = 2
    assert exact_mean_v(2) == 2
    # S_3 = S_1 with probability 1/2, giving V = 2^2 + 1 = 5, else 3
    assert exact_mean_v(3) == pytest.approx(4.0)


def test_mean_self_intersections_simple_walk():
    n, trials = 10_000, 300
    v = [occupation_stats(sample_walk(WalkSpec(1, length=n), trial_seed(3, t))).self_intersections
         for t in range(trials)]
    mean, se = np.mean(v), np.std(v) / math.sqrt(trials)
    assert abs(mean - exact_mean_v(n)) < 4 * se
    # n^(3/2) law: the exact constant at 10^3 and 10^4 agrees to within 15%
    assert exact_mean_v(10**4) / 10**6 == pytest.approx(exact_mean_v(10**3) / 10**4.5, rel=0.15)


def test_transient_range_per_step_converges():
    def mean_ratio(n, trials):
        return np.mean([occupation_stats(sample_walk(WalkSpec(3, length=n), trial_seed(4, t)))
                        .walk_range / n for t in range(trials)])

    assert mean_ratio(10**5, 10) == pytest.approx(mean_ratio(10**4, 40), rel=0.05)


@given(st.lists(st.integers(-(2**20), 2**20 - 1), min_size=3, max_size=3),
       st.lists(st.integers(-(2**20), 2**20 - 1), min_size=3, max_size=3))
def test_packed_sites_distinct(a, b):
    pa, pb = np.array(a, dtype=np.int64), np.array(b, dtype=np.int64)
    for d in (1, 2, 3):
        same = np.array_equal(pa[:d], pb[:d])
        assert (pack_site(d, pa) == pack_site(d, pb)) == same
