import math

import numpy as np
import pytest

from dlcurves.curves import (CurveError, coordinate_functions, enumerate_points, infinity_point, make_curve,
                             point_count_by_recurrence, rational_point_count_formula, top_coordinate)
from dlcurves.finite_field import FieldArray


@pytest.mark.parametrize("family,r", [("hermitian", 1), ("hermitian", 2), ("suzuki", 1), ("suzuki", 2),
                                      ("suzuki", 3)])
def test_enumeration_matches_both_formulas(family, r):
    c = make_curve(family, 1)
    n = len(enumerate_points(c, r))
    assert n == rational_point_count_formula(c, r) == point_count_by_recurrence(c, r)


@pytest.mark.parametrize("family", ["hermitian", "suzuki", "ree"])
@pytest.mark.parametrize("r", range(1, 9))
def test_hasse_weil_bound(family, r):
    c = make_curve(family, 1)
    n = rational_point_count_formula(c, r)
    assert n == point_count_by_recurrence(c, r)
    assert (n - c.q**r - 1) ** 2 <= 4 * c.genus**2 * c.q**r


def test_hermitian_is_maximal(hermitian):
    assert len(enumerate_points(hermitian, 1)) == hermitian.q0**3 + 1


def test_affine_points_satisfy_defining_equations(suzuki):
    P = enumerate_points(suzuki, 1)
    F = P.field
    x, y = FieldArray(F, P.affine[:, 1]), FieldArray(F, P.affine[:, 2])
    lhs = (y ** suzuki.q - y).values
    rhs = ((x ** suzuki.q0) * (x ** suzuki.q - x)).values
    assert np.array_equal(lhs, rhs)


def test_ree_coordinate_functions_are_consistent(ree_points, ree):
    P = ree_points
    F = P.field
    names = list(ree.coords)
    x, y1, y2 = (FieldArray(F, P.affine[:, names.index(n)]) for n in ("x", "y1", "y2"))
    funcs = coordinate_functions(ree, x, y1, y2)
    for n in ree.affine_coords:
        assert np.array_equal(funcs[n].values, P.affine[:, names.index(n)])


def test_infinity_point_in_top_coordinate(ree, suzuki, hermitian):
    assert top_coordinate(ree) == "w8"
    assert top_coordinate(suzuki) == "w"
    assert top_coordinate(hermitian) == "y"
    pt = infinity_point(ree)
    assert pt.sum() == 1 and pt[ree.coords.index("w8")] == 1


def test_pole_orders_and_origin_valuations_are_paired(ree):
    # nu0(c) + pole(partner) = m under the involution
    from dlcurves.local_series import involution_data
    partner, _ = involution_data(ree)
    po, nu = ree.pole_orders(), ree.origin_valuations()
    for c in ree.coords:
        assert nu[c] + po[partner[c]] == ree.m_infinity


def test_genus_from_l_polynomial_degree(ree, suzuki):
    # a + b = g for the Ree exponent pair
    q, q0 = ree.q, ree.q0
    assert q0 * (q * q - 1) + q0 * (q - 1) * (q + 3 * q0 + 1) // 2 == ree.genus
    assert suzuki.genus == 14


def test_curve_errors():
    with pytest.raises(CurveError):
        make_curve("klein", 1)
    with pytest.raises(CurveError):
        make_curve("ree", 0)
    with pytest.raises(CurveError):
        enumerate_points(make_curve("ree", 1), 5)
    with pytest.raises(CurveError):
        rational_point_count_formula(make_curve("ree", 1), 0)
