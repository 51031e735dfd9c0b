import numpy as np
import pytest

from flatcrane.metrics import (
    IDENTITY_SCALE,
    Normalization,
    ParetoFront,
    RunStats,
    aggregate_stats,
    fe_to_converge,
    hyperarea,
    nondominated,
    spacing,
)


def front(*pts):
    return ParetoFront(np.array(pts))


def random_front(rng, n_max=40):
    f1 = np.sort(rng.uniform(0.05, 0.9, size=rng.integers(2, n_max)))
    pts = np.column_stack([f1, rng.uniform(0.05, 0.9, size=f1.size)])
    return ParetoFront(nondominated(pts))


class TestParetoFront:
    def test_sorts_input(self):
        f = front((0.8, 0.2), (0.2, 0.8))
        assert np.array_equal(f.f1, [0.2, 0.8])

    def test_rejects_dominated_member(self):
        with pytest.raises(ValueError):
            front((0.2, 0.2), (0.8, 0.8))

    def test_rejects_duplicate_f1(self):
        with pytest.raises(ValueError):
            front((0.2, 0.8), (0.2, 0.5))

    def test_len_and_iter(self):
        f = front((0.2, 0.8), (0.8, 0.2))
        assert len(f) == 2
        assert [tuple(p) for p in f] == [(0.2, 0.8), (0.8, 0.2)]


class TestNondominated:
    def test_filters_and_dedupes(self):
        pts = np.array([(0.5, 0.5), (0.2, 0.8), (0.5, 0.5), (0.6, 0.9),
                        (0.8, 0.2), (0.3, 0.9)])
        out = nondominated(pts)
        assert [tuple(p) for p in out] == [(0.2, 0.8), (0.5, 0.5), (0.8, 0.2)]

    def test_empty(self):
        assert nondominated(np.empty((0, 2))).shape == (0, 2)


class TestHyperarea:
    def test_single_point(self):
        assert hyperarea(front((0.5, 0.5))) == pytest.approx(0.25, abs=1e-9)

    def test_empty_front(self):
        assert hyperarea(ParetoFront(np.empty((0, 2)))) == 0.0

    def test_two_point_sweep(self):
        assert hyperarea(front((0.2, 0.8), (0.8, 0.2))) == pytest.approx(0.28, abs=1e-9)

    def test_normalization(self):
        f = front((4.0, 1.0))
        assert hyperarea(f, scale=Normalization(8.0, 2.0)) == pytest.approx(0.25, abs=1e-9)

    def test_rejects_point_outside_box(self):
        with pytest.raises(ValueError):
            hyperarea(front((1.2, 0.5)))

    def test_monotone_under_nondominated_insertion(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            base = random_front(rng, 12)
            extra = rng.uniform(0.0, 1.0, size=2)
            merged = ParetoFront(nondominated(np.vstack([base.points, extra[None, :]])))
            assert hyperarea(merged) >= hyperarea(base) - 1e-15


class TestSpacing:
    def test_equally_spaced_front(self):
        f = front(*[(0.1 * i, 1.0 - 0.1 * i) for i in range(8)])
        assert spacing(f) == pytest.approx(0.0, abs=1e-12)

    def test_single_member(self):
        assert spacing(front((0.4, 0.4))) == 0.0

    def test_three_point_oracle(self):
        # nearest-neighbour Manhattan gaps (0.1, 0.1, 0.3)
        f = front((0.0, 0.30), (0.05, 0.25), (0.2, 0.10))
        assert spacing(f) == pytest.approx(0.11547005383792516, abs=1e-9)

    def test_shift_invariance(self):
        rng = np.random.default_rng(1)
        for _ in range(1000):
            base = random_front(rng, 10)
            shift = rng.uniform(-5.0, 5.0, size=2)
            moved = ParetoFront(base.points + shift)
            assert spacing(moved) == pytest.approx(spacing(base), abs=1e-12)


class TestFeToConverge:
    def test_first_front_already_final(self):
        pts = np.array([(0.5, 0.5)])
        history = [(100, pts), (200, pts), (300, pts)]
        assert fe_to_converge(history) == 100

    def test_synthetic_threshold_crossing(self):
        def pt(area):
            v = 1.0 - np.sqrt(area)
            return np.array([(v, v)])
        areas = [0.20, 0.22, 0.24, 0.246, 0.2485, 0.249, 0.2495, 0.2499, 0.25, 0.25]
        history = [(100 * (i + 1), pt(a)) for i, a in enumerate(areas)]
        assert fe_to_converge(history) == 500

    def test_never_exceeds_budget(self):
        rng = np.random.default_rng(2)
        history = [(100 * (i + 1), random_front(rng, 6).points) for i in range(10)]
        assert fe_to_converge(history) <= 1000

    def test_empty_history_rejected(self):
        with pytest.raises(ValueError):
            fe_to_converge([])


class TestAggregateStats:
    def test_textbook_set(self):
        s = aggregate_stats([1, 2, 3, 4, 5])
        assert s.mean == 3.0
        assert s.std == pytest.approx(1.5811388300841898, rel=1e-12)
        assert (s.q0, s.q1, s.q2, s.q3, s.q4) == (1.0, 2.0, 3.0, 4.0, 5.0)

    def test_constant_values(self):
        s = aggregate_stats([2.5] * 10)
        assert s.std == 0.0
        assert s.q0 == s.q4 == 2.5

    def test_needs_two_runs(self):
        with pytest.raises(ValueError):
            aggregate_stats([1.0])

    def test_quartiles_ordered(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            s = aggregate_stats(rng.normal(size=25))
            assert s.q0 <= s.q1 <= s.q2 <= s.q3 <= s.q4
            assert s.std >= 0.0


def test_identity_scale_is_noop():
    pts = np.array([(0.3, 0.4)])
    assert np.array_equal(IDENTITY_SCALE.apply(pts), pts)


def test_runstats_is_plain_record():
    s = RunStats(1, 0, 1, 1, 1, 1, 1)
    assert s.mean == 1
