import math

import numpy as np
import pytest

import lrdchain as lc


def test_params_and_threshold():
    p = lc.ModelParams(0.5, 0.5, seed=3)
    assert p.hurst == pytest.approx(0.75)
    assert p.mean == pytest.approx(0.5)
    assert lc.validity_threshold(0.5) == pytest.approx(0.22654091966098644, rel=1e-14)
    q = lc.ModelParams.from_mean_hurst(0.5, 0.75)
    assert q.alpha == pytest.approx(0.5)


def test_invalid_region_raises_with_code():
    with pytest.raises(lc.LrdError) as info:
        lc.ModelParams(0.1, 0.9)
    assert info.value.args[0] == "InvalidRegion"
    assert isinstance(info.value, ValueError)


def test_law_values():
    p = lc.ModelParams(0.5, 0.5)
    assert lc.jump_prob(0, p) == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    assert lc.equilibrium_pi(1, p) == pytest.approx(0.14644660940672624, rel=1e-14)
    # Balance: pi_k = pi_{k+1} + pi0 f_k
    for k in (0, 5, 1000):
        lhs = lc.equilibrium_pi(k, p)
        rhs = lc.equilibrium_pi(k + 1, p) + p.pi0 * lc.jump_prob(k, p)
        assert lhs == pytest.approx(rhs, rel=1e-12)
    assert all(passed for _, passed, _, _ in lc.law_checks(p, 10000))


def test_generate_is_deterministic_binary():
    p = lc.ModelParams(0.5, 0.5, seed=7)
    a = lc.generate(p, 100_000)
    b = lc.generate(p, 100_000)
    assert a.dtype == np.uint8
    assert np.array_equal(a, b)
    assert set(np.unique(a)) <= {0, 1}
    assert abs(a.mean() - 0.5) < 0.1


def test_estimators_on_fgn():
    x = lc.fgn_generate(0.75, 1 << 16, 11)
    assert x.shape == (1 << 16,)
    out = lc.estimate_all(x)
    assert set(out) == set(lc.methods())
    for name, est in out.items():
        assert est is not None, name
        assert 0.6 < est["h"] < 0.9, name
    lw = lc.estimate(x, "local_whittle")
    assert lw["ci_low"] < lw["h"] < lw["ci_high"]
    with pytest.raises(ValueError):
        lc.estimate(x, "nonsense")


def test_estimator_errors_map_to_codes():
    with pytest.raises(lc.LrdError) as info:
        lc.estimate(np.ones(10000), "periodogram")
    assert info.value.args[0] == "ConstantSeries"


def test_map_generator_and_acf():
    s = lc.map_generate(0.75, 50_000, seed=2)
    assert s.dtype == np.uint8
    rho = lc.acf(s.astype(float), 20)
    assert rho[0] == pytest.approx(1.0)
    assert rho[20] > 0
