import math

import numpy as np
import pytest

from pixent.pipeline import simulate_dataset, parse_bases, plan_witness
from pixent.state import BasisPair, CountMatrix, apply_isotropic_noise, phi_plus
from pixent.stats import BootstrapError, poisson_bootstrap, resample


def _single(n):
    return [CountMatrix(1, BasisPair.matched("std"), np.array([[n]]))]


def test_constant_estimator_has_zero_spread():
    res = poisson_bootstrap(_single(100), lambda cs: 3.0, n_resamples=50)
    assert res.std == 0.0 and res.mean == 3.0


def test_total_count_relative_error():
    res = poisson_bootstrap(_single(10**6), lambda cs: float(cs[0].total), n_resamples=2000, seed=2)
    assert res.std / res.mean == pytest.approx(1e-3, rel=0.1)


def test_determinism_and_seed_independence():
    data = _single(10**4)
    est = lambda cs: float(cs[0].total)  # noqa: E731
    a = poisson_bootstrap(data, est, 300, seed=9, keep_samples=True)
    b = poisson_bootstrap(data, est, 300, seed=9, keep_samples=True)
    assert np.array_equal(a.samples, b.samples) and a.std == b.std
    c = poisson_bootstrap(data, est, 300, seed=10)
    se = math.hypot(a.std, c.std) / math.sqrt(300)
    assert abs(a.mean - c.mean) < 5 * se
    assert b.samples is not None and c.samples is None


def test_resample_leaves_input_untouched():
    data = _single(50)
    before = data[0].counts.copy()
    out = resample(data, 1, 0)
    assert np.array_equal(data[0].counts, before)
    assert out[0] is not data[0]
    assert np.array_equal(resample(data, 1, 3)[0].counts, resample(data, 1, 3)[0].counts)


def test_estimator_failure_reports_index():
    calls = {"n": 0}

    def est(cs):
        calls["n"] += 1
        if calls["n"] == 4:
            raise ZeroDivisionError("boom")
        return 0.0

    with pytest.raises(BootstrapError) as info:
        poisson_bootstrap(_single(10), est, 10)
    assert info.value.index == 3


def test_needs_two_resamples():
    with pytest.raises(ValueError):
        poisson_bootstrap(_single(10), lambda cs: 0.0, 1)


def test_d19_fidelity_sigma_order_of_magnitude():
    d = 19
    state = apply_isotropic_noise(phi_plus(d), 0.04)
    settings = simulate_dataset(state, parse_bases("wf:0,wf:1"), 2e4, seed=1)
    plan = plan_witness(settings, d)
    res = poisson_bootstrap(settings, lambda cs: plan.fidelity(cs).value, 200, seed=0)
    assert 1e-3 <= res.std <= 1e-2
