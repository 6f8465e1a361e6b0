import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from persistkit.core import CENSORED
from persistkit.mdm import (
    MdmSpec,
    line_orientation,
    mdm_constants,
    mdm_event_times,
    mdm_path,
    mdm_running_extremes,
    paired_counts,
    sample_mdm,
)
from persistkit.rng import trial_seed
from persistkit.stats.oracle import brute_force_survival


def test_spec_validation():
    for p in (0.0, 1.0, 1.5):
        with pytest.raises(ValueError):
            MdmSpec(p)


def test_one_step_law():
    p, trials = 1 / 3, 100_000
    x1 = mdm_running_extremes(MdmSpec(p, 1), [1], trials, 1)[0][:, 0]
    for value, prob in ((-1, p / 2), (0, 1 - p), (1, p / 2)):
        assert abs(np.mean(x1 == value) - prob) < 3 * math.sqrt(prob * (1 - prob) / trials)


def test_two_step_survival_against_enumeration():
    exact = float(brute_force_survival(MdmSpec(1 / 3), 2).probability)
    trials = 100_000
    t0, _ = mdm_event_times(MdmSpec(1 / 3, 2), trials, 2)
    p_hat = np.mean(t0 > 2)
    assert abs(p_hat - exact) < 3 * math.sqrt(exact * (1 - exact) / trials)


def test_constants():
    k, kappa = mdm_constants(1 / 3, 0.54)
    assert k == pytest.approx(0.36889, abs=1e-5)
    assert 1.5 * k == pytest.approx((3 / 2**5) ** 0.25, rel=1e-12)
    assert kappa == pytest.approx(0.2988, abs=1e-4)
    ks = [mdm_constants(p, 1.0)[0] for p in np.linspace(0.01, 0.99, 50)]
    assert np.all(np.diff(ks) > 0)
    with pytest.raises(ValueError):
        mdm_constants(1.2, 0.5)
    with pytest.raises(ValueError):
        mdm_constants(0.5, 0.0)


def test_trial_record_consistency():
    for seed in range(20):
        trial = sample_mdm(MdmSpec(0.4, 200), seed)
        st_ = trial.first_coord_stats
        assert trial.t0_first == st_.first_return
        x, _ = mdm_path(MdmSpec(0.4, 200), seed)
        assert trial.vertical_line_range == x.max() - x.min() + 1 >= 1


def test_environment_consistency():
    spec = MdmSpec(0.5, 2000)
    for seed in range(5):
        x, y = mdm_path(spec, seed)
        dx = np.diff(x)
        moved = dx != 0
        for line in np.unique(y[:-1][moved]):
            dirs = dx[moved & (y[:-1] == line)]
            assert np.all(dirs == dirs[0])
            assert dirs[0] == line_orientation(seed, int(line))
        assert np.all((dx == 0) == (np.diff(y) != 0))


@given(st.integers(0, 2**40))
def test_flip_negates_first_coordinate(seed):
    spec = MdmSpec(1 / 3, 300)
    x, y = mdm_path(spec, seed)
    xf, yf = mdm_path(spec, seed, flip=True)
    assert np.array_equal(xf, -x) and np.array_equal(yf, y)


def test_kernels_match_single_paths():
    spec = MdmSpec(1 / 3, 400)
    t0, above = mdm_event_times(spec, 150, 5, level=-1.0)
    top, bottom = mdm_running_extremes(spec, [100, 400], 150, 5)
    for t in range(0, 150, 7):
        x, _ = mdm_path(spec, trial_seed(5, t))
        ret = sample_mdm(spec, trial_seed(5, t)).t0_first
        assert t0[t] == (401 if ret is CENSORED else ret)
        hit = np.flatnonzero(x[1:] > -1)
        if t0[t] > 400:
            assert above[t] == (hit[0] + 1 if hit.size else 401)
        else:
            # the kernel stops at T_0, which already crosses level -1
            assert above[t] <= t0[t]
        assert top[t, 0] == x[1:101].max() and bottom[t, 1] == x[1:].min()


@given(st.integers(1, 300), st.integers(0, 2**32))
def test_paired_half_identity_is_exact(n, seed):
    c = paired_counts(MdmSpec(1 / 3, n), 300, seed)
    assert c["below_original"] + c["below_flipped"] == c["survivors_original"]
    assert c["survivors_original"] == c["survivors_flipped"]
