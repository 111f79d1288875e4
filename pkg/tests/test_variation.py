import numpy as np
import pytest

from iemo.variation import VariationParams, polynomial_mutation, sbx

DEFAULTS = VariationParams()


def test_params_validation():
    with pytest.raises(ValueError):
        VariationParams(p_c=1.5)
    with pytest.raises(ValueError):
        VariationParams(p_m=-0.1)
    with pytest.raises(ValueError):
        VariationParams(eta_c=0)


def test_sbx_identical_parents_identical_children():
    rng = np.random.default_rng(0)
    p = np.array([0.2, 0.7, 0.5])
    for _ in range(50):
        c1, c2 = sbx(p, p, DEFAULTS, rng)
        assert np.array_equal(c1, p)
        assert np.array_equal(c2, p)


def test_sbx_skipped_when_pc_zero():
    rng = np.random.default_rng(1)
    params = VariationParams(p_c=0.0)
    p1, p2 = np.array([0.1, 0.9]), np.array([0.4, 0.3])
    c1, c2 = sbx(p1, p2, params, rng)
    assert np.array_equal(c1, p1)
    assert np.array_equal(c2, p2)


def test_sbx_midpoint_preserved_monte_carlo():
    rng = np.random.default_rng(7)
    p1 = np.array([0.3, 0.45, 0.6])
    p2 = np.array([0.5, 0.55, 0.4])
    mid = (p1 + p2) / 2
    acc = np.zeros(3)
    trials = 100_000
    for _ in range(trials):
        c1, c2 = sbx(p1, p2, DEFAULTS, rng)
        acc += (c1 + c2) / 2
    assert np.allclose(acc / trials, mid, atol=1e-2)


def test_sbx_closure_at_boundary():
    rng = np.random.default_rng(3)
    p1 = np.array([0.0, 1.0, 0.0, 1.0])
    p2 = np.array([1.0, 0.0, 0.02, 0.98])
    for _ in range(2000):
        c1, c2 = sbx(p1, p2, DEFAULTS, rng)
        for c in (c1, c2):
            assert np.all(c >= 0.0) and np.all(c <= 1.0)


def test_mutation_skipped_when_pm_zero():
    rng = np.random.default_rng(2)
    params = VariationParams(p_m=0.0)
    x = np.array([0.25, 0.75, 0.5])
    assert np.array_equal(polynomial_mutation(x, params, rng), x)


def test_mutation_bounded_over_random_inputs():
    rng = np.random.default_rng(11)
    params = VariationParams(p_m=1.0)
    for _ in range(100_000):
        x = rng.random(4)
        y = polynomial_mutation(x, params, rng)
        assert np.all(y >= 0.0) and np.all(y <= 1.0)


def test_mutation_boundary_inputs_stay_bounded():
    rng = np.random.default_rng(4)
    params = VariationParams(p_m=1.0, per_variable_gate=True)
    x = np.array([0.0, 1.0, 0.0, 1.0, 0.5])
    for _ in range(5000):
        y = polynomial_mutation(x, params, rng)
        assert np.all(y >= 0.0) and np.all(y <= 1.0)


def test_mutation_symmetric_at_center():
    rng = np.random.default_rng(5)
    params = VariationParams(p_m=1.0, per_variable_gate=True)
    x = np.full(1, 0.5)
    total = 0.0
    trials = 100_000
    for _ in range(trials):
        total += polynomial_mutation(x, params, rng)[0] - 0.5
    assert abs(total / trials) < 1e-2


def test_operators_deterministic_given_seed():
    p1, p2 = np.array([0.2, 0.8, 0.5]), np.array([0.6, 0.1, 0.9])
    a = sbx(p1, p2, DEFAULTS, np.random.default_rng(42))
    b = sbx(p1, p2, DEFAULTS, np.random.default_rng(42))
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    ma = polynomial_mutation(p1, DEFAULTS, np.random.default_rng(9))
    mb = polynomial_mutation(p1, DEFAULTS, np.random.default_rng(9))
    assert np.array_equal(ma, mb)


def test_two_level_gate_vs_per_variable_rate():
    # gated: many solutions pass through untouched; per-variable: almost none
    rng = np.random.default_rng(6)
    gated = VariationParams(p_m=0.5)
    x = np.full(12, 0.5)
    untouched = sum(np.array_equal(polynomial_mutation(x, gated, rng), x) for _ in range(2000))
    assert 800 < untouched < 1600  # gate skips ~half, inner 1/n leaves some more
    per_var = VariationParams(p_m=0.9, per_variable_gate=True)
    untouched_pv = sum(
        np.array_equal(polynomial_mutation(x, per_var, rng), x) for _ in range(2000)
    )
    assert untouched_pv < 50
