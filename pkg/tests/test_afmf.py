import numpy as np
import pytest

from flatcrane.afmf import afmf_select
from flatcrane.metrics import ParetoFront
from flatcrane.motop import sweep_front


def test_two_point_front_ties_to_faster_operation():
    front = ParetoFront(np.array([(6.36, 0.97), (8.0, 0.22)]))
    result = afmf_select(front)
    assert result.scores == pytest.approx([0.5, 0.5])
    assert result.index == 0
    assert front.points[result.index][0] == 6.36


def test_extreme_memberships():
    front = ParetoFront(np.array([(6.0, 1.0), (7.0, 0.6), (8.0, 0.2)]))
    result = afmf_select(front)
    assert result.lambda1[0] == 1.0 and result.lambda1[-1] == 0.0
    assert result.lambda2[0] == 0.0 and result.lambda2[-1] == 1.0
    assert np.all(result.scores >= 0.0) and np.all(result.scores <= 1.0)


def test_single_point_front_uses_degenerate_convention():
    front = ParetoFront(np.array([(7.0, 0.5)]))
    result = afmf_select(front)
    assert result.index == 0
    assert result.score == 1.0
    assert result.lambda1[0] == 1.0 and result.lambda2[0] == 1.0


def test_affine_invariance_of_selection():
    rng = np.random.default_rng(9)
    for _ in range(50):
        f1 = np.sort(rng.uniform(0, 1, size=12))
        f2 = np.sort(rng.uniform(0, 1, size=12))[::-1]
        front = ParetoFront(np.column_stack([f1, f2]))
        base = afmf_select(front).index
        a1, b1 = rng.uniform(0.1, 5.0), rng.uniform(-3.0, 3.0)
        a2, b2 = rng.uniform(0.1, 5.0), rng.uniform(-3.0, 3.0)
        moved = ParetoFront(np.column_stack([a1 * f1 + b1, a2 * f2 + b2]))
        assert afmf_select(moved).index == base


def test_empty_front_rejected():
    with pytest.raises(ValueError):
        afmf_select(ParetoFront(np.empty((0, 2))))


def test_dense_trolley_selection(trolley_op, limits, params):
    front = sweep_front(trolley_op, limits, params)
    result = afmf_select(front)
    t_sel, f2_sel = front.points[result.index]
    assert result.score == pytest.approx(0.64, abs=0.02)
    assert t_sel == pytest.approx(7.0, abs=0.15)
    assert f2_sel == pytest.approx(0.46, abs=0.03)


def test_dense_slew_selection(slew_op, limits, params):
    front = sweep_front(slew_op, limits, params)
    result = afmf_select(front)
    t_sel, f2_sel = front.points[result.index]
    assert result.score == pytest.approx(0.69, abs=0.02)
    assert t_sel == pytest.approx(6.51, abs=0.15)
    assert f2_sel == pytest.approx(0.48, abs=0.03)
