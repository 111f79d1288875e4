import numpy as np
import pytest

from iemo.problems import (
    GoldenSpec,
    NoiseSpec,
    ProblemSpec,
    evaluate,
    golden_point,
    psi,
    psi_noisy,
)


def pf_samples(spec, count, rng):
    """Points on the true front: random position variables, distance
    variables at their optimum 0.5."""
    x = np.full((count, spec.n), 0.5)
    x[:, : spec.m - 1] = rng.random((count, spec.m - 1))
    return evaluate(spec, x)


def test_dtlz1_hand_value():
    spec = ProblemSpec("DTLZ1", 3)
    f = evaluate(spec, np.full(spec.n, 0.5))
    assert np.allclose(f, [0.125, 0.125, 0.25], atol=1e-12)


def test_dtlz2_hand_value():
    spec = ProblemSpec("DTLZ2", 3)
    x = np.full(spec.n, 0.5)
    x[:2] = 0.0
    assert np.allclose(evaluate(spec, x), [1.0, 0.0, 0.0], atol=1e-12)


def test_dtlz3_matches_dtlz2_at_optimal_distance():
    rng = np.random.default_rng(0)
    s2, s3 = ProblemSpec("DTLZ2", 3), ProblemSpec("DTLZ3", 3)
    x = np.full((20, s2.n), 0.5)
    x[:, :2] = rng.random((20, 2))
    assert np.allclose(evaluate(s2, x), evaluate(s3, x), atol=1e-12)


def test_dtlz4_endpoints_match_dtlz2():
    rng = np.random.default_rng(1)
    s2, s4 = ProblemSpec("DTLZ2", 3), ProblemSpec("DTLZ4", 3, alpha=100.0)
    x = np.full((16, s2.n), 0.5)
    x[:, :2] = rng.integers(0, 2, size=(16, 2)).astype(float)
    assert np.allclose(evaluate(s2, x), evaluate(s4, x), atol=1e-12)


def test_out_of_box_rejected():
    spec = ProblemSpec("DTLZ2", 3)
    x = np.full(spec.n, 0.5)
    x[0] = 1.2
    with pytest.raises(ValueError):
        evaluate(spec, x)
    with pytest.raises(ValueError):
        evaluate(spec, np.full(spec.n + 1, 0.5))


@pytest.mark.parametrize("pid", ["DTLZ1", "DTLZ2", "DTLZ3", "DTLZ4"])
@pytest.mark.parametrize("m", [3, 5, 8])
def test_front_residuals(pid, m):
    rng = np.random.default_rng(42)
    spec = ProblemSpec(pid, m)
    f = pf_samples(spec, 200, rng)
    assert np.all(f >= 0)
    if pid == "DTLZ1":
        assert np.allclose(f.sum(axis=1), 0.5, atol=1e-9)
    else:
        assert np.allclose((f * f).sum(axis=1), 1.0, atol=1e-9)


@pytest.mark.parametrize("pid,expected", [
    ("DTLZ1", [1 / 6, 1 / 6, 1 / 6]),
    ("DTLZ2", [0.57735, 0.57735, 0.57735]),
])
def test_golden_point_center(pid, expected):
    spec = ProblemSpec(pid, 3)
    g = GoldenSpec.for_roi(3, "center")
    assert np.allclose(golden_point(spec, g), expected, atol=1e-5)


def test_golden_point_residual_and_ray_property():
    for pid in ("DTLZ1", "DTLZ2", "DTLZ3", "DTLZ4"):
        for roi in ("center", "boundary"):
            for m in (3, 5, 10):
                spec = ProblemSpec(pid, m)
                g = GoldenSpec.for_roi(m, roi)
                zr = golden_point(spec, g)
                if pid == "DTLZ1":
                    assert abs(zr.sum() - 0.5) < 1e-9
                else:
                    assert abs((zr * zr).sum() - 1.0) < 1e-9
                ratios = zr / g.w
                assert np.max(ratios) - np.min(ratios) < 1e-9


def test_golden_point_against_dense_front_sampling():
    # independent oracle: minimize the value function over a dense front sample
    rng = np.random.default_rng(5)
    spec = ProblemSpec("DTLZ2", 3)
    g = GoldenSpec((0.7, 0.15, 0.15))
    f = pf_samples(spec, 1_000_000, rng)
    best = f[np.argmin(psi(f, g))]
    zr = golden_point(spec, g)
    assert np.allclose(zr, [0.95694, 0.20506, 0.20506], atol=1e-3)
    assert np.linalg.norm(best - zr) < 1e-3
    assert psi(zr, g) <= psi(best, g) + 1e-9


def test_psi_examples():
    assert psi((0.2, 0.4), GoldenSpec((0.5, 0.5))) == pytest.approx(0.8)
    g = GoldenSpec((0.5, 0.5), reference=(0.3, 0.1))
    assert psi((0.3, 0.1), g) == 0.0
    assert psi((0.1, 0.1, 0.1), GoldenSpec.for_roi(3, "center")) == pytest.approx(0.3)


def test_psi_positively_homogeneous():
    rng = np.random.default_rng(9)
    g = GoldenSpec.for_roi(3, "boundary")
    f = rng.random(3)
    for t in (0.0, 0.5, 2.0, 7.5):
        assert psi(t * f, g) == pytest.approx(t * psi(f, g), rel=1e-12)


def test_psi_noisy_zero_noise_and_horizon_are_exact():
    g = GoldenSpec.for_roi(3, "center")
    ns0 = NoiseSpec(0.0, 100)
    ns5 = NoiseSpec(0.5, 100)
    rng = np.random.default_rng(0)
    f = (0.2, 0.3, 0.1)
    assert psi_noisy(f, g, ns0, 17, rng) == psi(f, g)
    assert psi_noisy(f, g, ns5, 100, rng) == psi(f, g)


def test_psi_noisy_monte_carlo_moments():
    g = GoldenSpec((0.5, 0.5))
    f = (0.5, 0.3)  # psi == 1 exactly
    assert psi(f, g) == 1.0
    ns = NoiseSpec(0.5, 100)
    rng = np.random.default_rng(123)
    draws = np.array([psi_noisy(f, g, ns, 0, rng) for _ in range(100_000)])
    assert 0.995 <= draws.mean() <= 1.005
    assert 0.49 <= draws.std() <= 0.51


def test_psi_noisy_deterministic_given_seed():
    g = GoldenSpec.for_roi(3, "center")
    ns = NoiseSpec(0.1, 50)
    a = psi_noisy((0.1, 0.2, 0.3), g, ns, 5, np.random.default_rng(11))
    b = psi_noisy((0.1, 0.2, 0.3), g, ns, 5, np.random.default_rng(11))
    assert a == b
    with pytest.raises(ValueError):
        psi_noisy((0.1, 0.2, 0.3), g, ns, 51, np.random.default_rng(0))


def test_golden_spec_validation():
    with pytest.raises(ValueError):
        GoldenSpec((0.0, 1.0))
    with pytest.raises(ValueError):
        GoldenSpec((0.9, 0.3))
    with pytest.raises(ValueError):
        GoldenSpec.for_roi(3, "corner")


def test_problem_spec_validation():
    with pytest.raises(ValueError):
        ProblemSpec("DTLZ9", 3)
    with pytest.raises(ValueError):
        ProblemSpec("DTLZ1", 1)
    assert ProblemSpec("DTLZ1", 3).n == 7
    assert ProblemSpec("DTLZ2", 3).n == 12
