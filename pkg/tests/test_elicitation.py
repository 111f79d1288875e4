import numpy as np
import pytest

from iemo.elicitation import (
    BestRecord,
    PromisingSet,
    elicit,
    identify_promising,
    move_point,
    resolve_best,
)
from iemo.learning import Candidate, ScoredRecord
from iemo.refpoints import das_dennis


class StubModel:
    """Deterministic surrogate: looks scores up by nearest known vector."""

    def __init__(self, table):
        self.keys = np.asarray([k for k, _ in table], dtype=float)
        self.vals = np.asarray([v for _, v in table], dtype=float)

    def predict(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        idx = np.argmin(np.linalg.norm(X[:, None, :] - self.keys[None, :, :], axis=2), axis=1)
        return self.vals[idx]


def test_identify_promising_bijective_association():
    pop_f = np.array([[0.5, 0.5], [0.1, 0.9], [0.9, 0.1], [0.3, 0.7]])
    model = StubModel([(f, s) for f, s in zip(pop_f, [3.0, 1.0, 4.0, 2.0])])
    got = identify_promising(pop_f, np.arange(4), model, mu=3)
    assert list(got.ref_indices) == [1, 3, 0]
    assert np.array_equal(got.solution_objectives[0], pop_f[1])


def test_identify_promising_collapses_shared_reference():
    pop_f = np.array([[0.2, 0.2], [0.21, 0.2], [0.9, 0.9]])
    model = StubModel([(f, s) for f, s in zip(pop_f, [1.0, 1.5, 9.0])])
    got = identify_promising(pop_f, np.array([4, 4, 2]), model, mu=2)
    assert list(got.ref_indices) == [4]
    assert len(got) == 1


def test_identify_promising_hand_order():
    rng = np.random.default_rng(0)
    pop_f = rng.random((10, 2))
    scores = np.array([5.0, 2.0, 8.0, 1.0, 9.0, 3.0, 7.0, 4.0, 6.0, 0.5])
    model = StubModel(list(zip(pop_f, scores)))
    got = identify_promising(pop_f, np.arange(10), model, mu=4)
    assert list(got.ref_indices) == [9, 3, 1, 5]


def test_move_point_examples():
    assert np.allclose(move_point((0.2, 0.8), (0.6, 0.4), 0.5), (0.4, 0.6))
    assert np.allclose(move_point((0.2, 0.8), (0.6, 0.4), 0.0), (0.2, 0.8))
    assert np.allclose(move_point((0.2, 0.8), (0.6, 0.4), 1.0), (0.6, 0.4))


def guard_pass_model(points, u_idx, best_f):
    # promising solution scores strictly below the best record's score
    return StubModel([(points[u_idx], 0.1), (best_f, 5.0)])


def test_elicit_single_attractor():
    points = das_dennis(2, 8)
    target = points[4].copy()
    best_f = np.array([9.0, 9.0])
    model = guard_pass_model(points, 4, best_f)
    promising = PromisingSet(np.array([4]), points[[4]])
    best = BestRecord(best_f, 5.0, 4, points[4].copy())
    out = elicit(points, promising, best, model, np.zeros(2), eta=0.5)
    assert np.array_equal(out[4], target)
    for i in range(9):
        if i == 4:
            continue
        assert np.allclose(out[i], points[i] + 0.5 * (target - points[i]), atol=1e-15)
    assert np.allclose(out.sum(axis=1), 1.0, atol=1e-12)
    assert np.all(out >= -1e-15)


def test_elicit_guard_failure_moves_everything_to_best():
    points = das_dennis(2, 8)
    best_point = points[7].copy()
    # promising solution scores worse than the best record: guard must fail
    model = StubModel([(np.array([0.0, 0.0]), 9.0), (np.array([9.0, 9.0]), 1.0)])
    promising = PromisingSet(np.array([2]), np.array([[0.0, 0.0]]))
    best = BestRecord(np.array([9.0, 9.0]), 1.0, 7, best_point)
    out = elicit(points, promising, best, model, np.zeros(2), eta=0.5, guard="rescored")
    assert np.array_equal(out[2], points[2])  # promising never moves
    for i in range(9):
        if i == 2:
            continue
        assert np.allclose(out[i], points[i] + 0.5 * (best_point - points[i]), atol=1e-15)


def test_elicit_hand_run_three_promising():
    # nine points on the two-objective line; three promising, quota = 2 each
    points = das_dennis(2, 8)
    pf = np.array([[0.1, 0.1], [0.2, 0.2], [0.3, 0.3]])
    model = StubModel([(pf[0], 0.1), (pf[1], 0.2), (pf[2], 0.3), (np.array([9.0, 9.0]), 8.0)])
    promising = PromisingSet(np.array([0, 4, 8]), pf)
    best = BestRecord(np.array([9.0, 9.0]), 8.0, 0, points[0].copy())
    out = elicit(points, promising, best, model, np.zeros(2), eta=0.5)
    # hand-run of the greedy clustering:
    #   idx0 attracts idx1, idx2; idx4 attracts idx3, idx5; idx8 takes idx6, idx7
    expected = points.copy()
    for companion, attractor in [(1, 0), (2, 0), (3, 4), (5, 4), (6, 8), (7, 8)]:
        expected[companion] = points[companion] + 0.5 * (points[attractor] - points[companion])
    assert np.allclose(out, expected, atol=1e-15)


def test_elicit_simplex_closure_and_contraction():
    rng = np.random.default_rng(1)
    points = das_dennis(3, 5)  # 21 points
    n = points.shape[0]
    sol = rng.random((3, 3))
    model = StubModel([(sol[0], 0.1), (sol[1], 0.2), (sol[2], 0.3), (np.ones(3), 7.0)])
    promising = PromisingSet(np.array([0, 10, 20]), sol)
    best = BestRecord(np.ones(3), 7.0, 0, points[0].copy())
    eta = 0.7
    out = elicit(points, promising, best, model, np.zeros(3), eta=eta)
    assert out.shape == points.shape
    assert np.allclose(out.sum(axis=1), 1.0, atol=1e-12)
    assert np.all(out >= -1e-12)
    for u in (0, 10, 20):
        assert np.array_equal(out[u], points[u])
    # each moved point contracted by exactly (1 - eta) toward its attractor
    moved = [i for i in range(n) if not np.array_equal(out[i], points[i])]
    assert len(moved) == n - 3
    for i in moved:
        dists_before = np.linalg.norm(points[[0, 10, 20]] - points[i], axis=1)
        dists_after = np.linalg.norm(points[[0, 10, 20]] - out[i], axis=1)
        assert np.min(np.abs(dists_after - (1 - eta) * dists_before)) < 1e-12


def test_elicit_no_point_attracted_twice():
    points = das_dennis(2, 6)  # 7 points, two promising -> quota 3
    pf = np.array([[0.1, 0.1], [0.2, 0.2]])
    model = StubModel([(pf[0], 0.1), (pf[1], 0.2), (np.ones(2), 5.0)])
    promising = PromisingSet(np.array([0, 6]), pf)
    best = BestRecord(np.ones(2), 5.0, 0, points[0].copy())
    out = elicit(points, promising, best, model, np.zeros(2), eta=0.5)
    # five companions, quota 3: first attractor takes 3, the last takes the rest
    moved_toward_0 = [i for i in (1, 2, 3) if np.allclose(out[i], (points[i] + points[0]) / 2)]
    moved_toward_6 = [i for i in (4, 5) if np.allclose(out[i], (points[i] + points[6]) / 2)]
    assert len(moved_toward_0) == 3 and len(moved_toward_6) == 2


def test_elicit_requires_promising():
    points = das_dennis(2, 4)
    best = BestRecord(np.ones(2), 1.0, 0, points[0].copy())
    with pytest.raises(ValueError):
        elicit(points, PromisingSet(np.array([], dtype=int), np.empty((0, 2))), best, None, np.zeros(2), 0.5)


def records_and_candidates(scores):
    recs, cands = [], []
    for i, s in enumerate(scores):
        f = (0.1 * i, 0.2)
        recs.append(ScoredRecord(f, s, 1))
        cands.append(Candidate(i, np.asarray(f), 10 + i, np.array([0.5, 0.5])))
    return recs, cands


def test_resolve_best_examples():
    recs, cands = records_and_candidates([0.4])
    assert resolve_best(recs, cands).ref_index == 10
    recs, cands = records_and_candidates([0.5, 0.2, 0.9])
    best = resolve_best(recs, cands)
    assert best.ref_index == 11 and best.score == 0.2
    recs, cands = records_and_candidates([0.2, 0.2])
    assert resolve_best(recs, cands).ref_index == 10  # tie keeps candidate order


def test_resolve_best_requires_history():
    with pytest.raises(ValueError):
        resolve_best([], [])
