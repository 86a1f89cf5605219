import numpy as np
import pytest

from dlcurves.curves import enumerate_points, infinity_point
from dlcurves.variety_checks import (NotOnVariety, batched_rank, jacobian_rank, jacobian_rank_many, normalize,
                                     normalize_many, on_variety, sample_points, sweep)
from dlcurves.finite_field import GF


def test_normalize(ree):
    F = ree.field
    pt = [0, 5, 7]
    n = normalize(pt, F)
    assert n[1] == 1
    assert normalize_many(np.array([pt]), F).tolist() == [list(n)]
    with pytest.raises(ValueError):
        normalize([0, 0], F)


def test_batched_rank_matches_known_matrices():
    F = GF(3, 2)
    M = np.array([
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[1, 2, 0], [2, 1, 0], [0, 0, 0]],   # second row is 2 * first over GF(3)
        [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
    ])
    assert batched_rank(M, F).tolist() == [3, 1, 0]


def test_suzuki_sweep(suzuki_system):
    res = sweep(suzuki_system)
    assert res == {"points": 65, "on_variety": 65, "rank_expected": 3, "rank_counts": {3: 65}, "ok": True}


def test_hermitian_sweep(hermitian):
    from dlcurves.graph_equations import generate_equations
    res = sweep(generate_equations(hermitian))
    assert res["ok"] and res["points"] == 28 and res["rank_counts"] == {1: 28}


def test_point_off_the_variety(ree_system, ree):
    pt = np.ones(ree.ncoords, dtype=np.int64)
    assert not on_variety(pt, ree_system)
    with pytest.raises(NotOnVariety):
        jacobian_rank(ree_system, pt)


def test_rank_at_infinity(ree_system, ree):
    assert jacobian_rank(ree_system, infinity_point(ree)) == 12


def test_sampled_points_lie_in_extension(suzuki_system, suzuki):
    F, pts = sample_points(suzuki, 2, 20, seed=3)
    assert F.order == 64
    ranks = jacobian_rank_many(suzuki_system, pts, F)
    assert ranks.tolist() == [3] * 20


def test_sampling_is_seeded(suzuki):
    a = sample_points(suzuki, 2, 10, seed=5)[1]
    b = sample_points(suzuki, 2, 10, seed=5)[1]
    assert np.array_equal(a, b)
