"""Membership and smoothness tests for points of the embedded curves.

Points are rows of encoded homogeneous coordinates over some GF(q^r).  The
equations have prime-field coefficients, whose encoding is the same in every
extension, so they evaluate directly in the point's field.
"""

from __future__ import annotations

import numpy as np

from .curves import Curve, PointSet, artin_schreier_solver, coordinate_functions, enumerate_points
from .finite_field import FieldArray, FiniteField, LinearizedSolver
from .graph_equations import EquationSystem
from .multipoly import MultiPoly


class NotOnVariety(ValueError):
    pass


def normalize(point, field: FiniteField) -> tuple[int, ...]:
    """Scale a projective representative so its first nonzero entry is 1."""
    pt = [int(v) for v in point]
    for v in pt:
        if v:
            inv = field.inv(v)
            return tuple(field.mul(inv, a) for a in pt)
    raise ValueError("the zero vector is not a projective point")


def normalize_many(points: np.ndarray, field: FiniteField) -> np.ndarray:
    pts = np.asarray(points, dtype=np.int64)
    nz = pts != 0
    if not nz.any(axis=1).all():
        raise ValueError("the zero vector is not a projective point")
    lead = pts[np.arange(len(pts)), np.argmax(nz, axis=1)]
    inv = field._np_exp[(-field._np_log[lead]) % (field.order - 1)]
    return field.mul_arr(pts, inv[:, None])


def residuals(system: EquationSystem, points: np.ndarray, field: FiniteField) -> np.ndarray:
    """Values of every equation at every point, shape (points, equations)."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.int64))
    return np.stack([f.evaluate_many(pts, field) for f in system.equations], axis=1)


def on_variety_many(system: EquationSystem, points: np.ndarray, field: FiniteField) -> np.ndarray:
    return ~np.any(residuals(system, points, field), axis=1)


def on_variety(point, system: EquationSystem, field: FiniteField | None = None) -> bool:
    F = field or system.curve.field
    return bool(on_variety_many(system, np.array([point]), F)[0])


_GRADIENT_CACHE: dict[int, list[list[MultiPoly]]] = {}


def jacobian(system: EquationSystem) -> list[list[MultiPoly]]:
    key = id(system)
    if key not in _GRADIENT_CACHE:
        _GRADIENT_CACHE[key] = [f.gradient() for f in system.equations]
    return _GRADIENT_CACHE[key]


def jacobian_matrices(system: EquationSystem, points: np.ndarray, field: FiniteField) -> np.ndarray:
    """Formal Jacobian at each point, shape (points, equations, coords)."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.int64))
    J = jacobian(system)
    out = np.zeros((len(pts), len(J), len(system.curve.coords)), dtype=np.int64)
    for i, row in enumerate(J):
        for j, d in enumerate(row):
            if not d.is_zero():
                out[:, i, j] = d.evaluate_many(pts, field)
    return out


def batched_rank(M: np.ndarray, field: FiniteField) -> np.ndarray:
    """Rank over `field` of each matrix in the stack M (shape (P, R, C))."""
    M = np.array(M, dtype=np.int64)
    P = len(M)
    rank = np.zeros(P, dtype=np.int64)
    ar = np.arange(P)
    minus_one = field.neg(1)
    for c in range(M.shape[2]):
        col = M[:, :, c]
        nz = col != 0
        has = nz.any(axis=1)
        if not has.any():
            continue
        piv = np.argmax(nz, axis=1)
        prow = M[ar, piv, :]
        lead = prow[:, c]
        inv = field._np_exp[np.where(lead == 0, -1, (-field._np_log[lead]) % (field.order - 1))]
        prow = field.mul_arr(prow, inv[:, None])
        factor = field.mul_arr(col, np.full_like(col, minus_one))
        M = field.add_arr(M, field.mul_arr(factor[:, :, None], prow[:, None, :]))
        rank += has
    return rank


def jacobian_rank_many(system: EquationSystem, points: np.ndarray, field: FiniteField,
                       chunk: int = 1024, check: bool = True) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=np.int64))
    if check:
        off = ~on_variety_many(system, pts, field)
        if off.any():
            raise NotOnVariety(f"point {pts[np.argmax(off)].tolist()} is not on the variety")
    ranks = [batched_rank(jacobian_matrices(system, pts[s:s + chunk], field), field)
             for s in range(0, len(pts), chunk)]
    return np.concatenate(ranks) if ranks else np.zeros(0, dtype=np.int64)


def jacobian_rank(system: EquationSystem, point, field: FiniteField | None = None) -> int:
    F = field or system.curve.field
    return int(jacobian_rank_many(system, np.array([point]), F)[0])


def sample_points(curve: Curve, r: int, samples: int, seed: int) -> tuple[FiniteField, np.ndarray]:
    """Random affine points over GF(q^r): random x, then random solutions of the
    Artin-Schreier chain.  Returns the field and homogeneous rows (t = 1)."""
    F = curve.extension(r)
    rng = np.random.default_rng(seed)
    q, q0 = curve.q, curve.q0
    if curve.family == "hermitian":
        solver = LinearizedSolver(F, lambda y: F.add(F.pow(y, q0), y))
    else:
        solver = artin_schreier_solver(F, q)
    rows = []
    while len(rows) < samples:
        x = int(rng.integers(F.order))
        if curve.family == "hermitian":
            ys = solver.solve(F.pow(x, q0 + 1))
            if ys:
                rows.append((x, ys[int(rng.integers(len(ys)))]))
            continue
        c1 = F.mul(F.pow(x, q0), F.sub(F.pow(x, q), x))
        s1 = solver.solve(c1)
        if not s1:
            continue
        y1 = s1[int(rng.integers(len(s1)))]
        if curve.family == "suzuki":
            rows.append((x, y1))
            continue
        s2 = solver.solve(F.mul(F.pow(x, q0), c1))
        rows.append((x, y1, s2[int(rng.integers(len(s2)))]))
    base = np.array(rows, dtype=np.int64)
    args = [FieldArray(F, base[:, i]) for i in range(base.shape[1])]
    funcs = coordinate_functions(curve, *args)
    cols = [np.ones(len(base), dtype=np.int64)] + [funcs[c].values for c in curve.affine_coords]
    return F, np.stack(cols, axis=1)


def sweep(system: EquationSystem, points: PointSet | None = None) -> dict:
    """Membership and Jacobian rank at every rational point."""
    pts = points or enumerate_points(system.curve, 1)
    member = on_variety_many(system, pts.all, pts.field)
    ranks = jacobian_rank_many(system, pts.all[member], pts.field, check=False)
    target = system.curve.ncoords - 2
    return {
        "points": len(pts),
        "on_variety": int(member.sum()),
        "rank_expected": target,
        "rank_counts": {int(k): int(v) for k, v in zip(*np.unique(ranks, return_counts=True))},
        "ok": bool(member.all() and np.all(ranks == target)),
    }
