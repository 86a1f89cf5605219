"""The Hermitian, Suzuki and Ree curves: parameters, coordinates and points.

Coordinate formulas are written once against a minimal ring interface
(+, -, *, integer powers) so they apply to scalars (FieldElement), vectors of
points (FieldArray) and power series at P000 (PowerSeries) alike.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .finite_field import GF, FieldArray, FiniteField, artin_schreier_solver, LinearizedSolver

FAMILIES = ("hermitian", "suzuki", "ree")

REE_COORDS = ("t", "x", "y1", "y2", "w1", "w2", "w3", "w4", "w5", "w6", "w7", "w8", "w9", "w10")
SUZUKI_COORDS = ("t", "x", "y", "z", "w")
HERMITIAN_COORDS = ("t", "x", "y")

ENUMERATION_LIMIT = 1 << 20


class CurveError(ValueError):
    pass


@dataclass(frozen=True)
class Curve:
    """One member of a family.  For Suzuki/Ree q0 = p^m, q = p*q0^2 = p^(2m+1).

    For the Hermitian curve y^q0 + y = x^(q0+1) the base field is GF(q0^2),
    so `q` is q0^2 there.
    """

    family: str
    p: int
    q0: int
    q: int
    coords: tuple[str, ...] = dc_field(repr=False)

    @property
    def field(self) -> FiniteField:
        n = _log_int(self.q, self.p)
        return GF(self.p, n)

    def extension(self, r: int) -> FiniteField:
        n = _log_int(self.q, self.p) * r
        return GF(self.p, n)

    @property
    def genus(self) -> int:
        q, q0 = self.q, self.q0
        if self.family == "hermitian":
            return q0 * (q0 - 1) // 2
        if self.family == "suzuki":
            return q0 * (q - 1)
        return 3 * q0 * (q - 1) * (q + q0 + 1) // 2

    @property
    def m_infinity(self) -> int:
        """Degree of the hyperplane divisor, i.e. the largest coordinate pole order."""
        q, q0 = self.q, self.q0
        if self.family == "hermitian":
            return q0 + 1
        if self.family == "suzuki":
            return q + 2 * q0 + 1
        return q * q + 3 * q0 * q + 2 * q + 3 * q0 + 1

    @property
    def ncoords(self) -> int:
        return len(self.coords)

    @property
    def affine_coords(self) -> tuple[str, ...]:
        return self.coords[1:]

    def pole_orders(self) -> dict[str, int]:
        """Pole order at P_infinity of each coordinate (t has none)."""
        q, q0 = self.q, self.q0
        if self.family == "hermitian":
            return {"t": 0, "x": q0, "y": q0 + 1}
        if self.family == "suzuki":
            return {"t": 0, "x": q, "y": q + q0, "z": q + 2 * q0, "w": q + 2 * q0 + 1}
        r = {
            "t": 0,
            "x": q * q,
            "y1": q * q + q0 * q,
            "y2": q * q + 2 * q0 * q,
            "w1": q * q + 3 * q0 * q,
            "w2": q * q + 3 * q0 * q + q,
            "w3": q * q + 3 * q0 * q + 2 * q,
            "w4": q * q + 2 * q0 * q + q,
            "w5": q * q + 3 * q0 * q + q + q0,
            "w6": q * q + 3 * q0 * q + 2 * q + 3 * q0,
            "w7": q * q + 2 * q0 * q + q + q0,
            "w8": q * q + 3 * q0 * q + 2 * q + 3 * q0 + 1,
            "w9": q * q + 3 * q0 * q + 2 * q + q0,
            "w10": q * q + 3 * q0 * q + 2 * q + 2 * q0,
        }
        return r

    def origin_valuations(self) -> dict[str, int]:
        """Valuation at P000 of each coordinate, by the closed forms."""
        q, q0 = self.q, self.q0
        if self.family == "hermitian":
            return {"t": 0, "x": 1, "y": q0 + 1}
        if self.family == "suzuki":
            return {"t": 0, "x": 1, "y": q0 + 1, "z": 2 * q0 + 1, "w": q + 2 * q0 + 1}
        return {
            "t": 0,
            "x": 1,
            "y1": q0 + 1,
            "y2": 2 * q0 + 1,
            "w1": 3 * q0 + 1,
            "w2": q + 3 * q0 + 1,
            "w3": 2 * q + 3 * q0 + 1,
            "w4": q + 2 * q0 + 1,
            "w5": q0 * q + q + 3 * q0 + 1,
            "w6": 3 * q0 * q + 2 * q + 3 * q0 + 1,
            "w7": q0 * q + q + 2 * q0 + 1,
            "w8": self.m_infinity,
            "w9": q0 * q + 2 * q + 3 * q0 + 1,
            "w10": 2 * q0 * q + 2 * q + 3 * q0 + 1,
        }

    def to_dict(self) -> dict:
        return {"family": self.family, "p": self.p, "q0": self.q0, "q": self.q,
                "coords": list(self.coords)}


def _log_int(n: int, p: int) -> int:
    k = 0
    while n > 1:
        if n % p:
            raise CurveError(f"{n} is not a power of {p}")
        n //= p
        k += 1
    return k


def make_curve(family: str, m: int = 1, q0: int | None = None) -> Curve:
    """Curve of the family with q0 = p^m (Hermitian: q0 given, or 3^m)."""
    family = family.lower()
    if family not in FAMILIES:
        raise CurveError(f"unknown family {family!r}")
    if family == "hermitian":
        if q0 is None:
            q0 = 3**m
        p = 2 if q0 % 2 == 0 else 3
        _log_int(q0, p)
        return Curve("hermitian", p, q0, q0 * q0, HERMITIAN_COORDS)
    if m < 1:
        raise CurveError("m must be at least 1")
    p = 2 if family == "suzuki" else 3
    q0v = p**m
    return Curve(family, p, q0v, p * q0v * q0v, SUZUKI_COORDS if family == "suzuki" else REE_COORDS)


# ----- coordinate formulas ------------------------------------------------

def suzuki_functions(x, y, q0: int) -> dict:
    z = x ** (2 * q0 + 1) - y ** (2 * q0)
    w = x * y ** (2 * q0) - z ** (2 * q0)
    return {"x": x, "y": y, "z": z, "w": w}


def ree_functions(x, y1, y2, q0: int) -> dict:
    """The thirteen affine coordinate functions of the Ree curve, plus v."""
    e = 3 * q0
    w1 = x ** (e + 1) - y1**e
    w2 = x * y1**e - y2**e
    w3 = x * y2**e - w1**e
    w4 = x * w2**q0 - y1 * w1**q0
    v = x * w3**q0 - y2 * w1**q0
    w5 = y1 * w3**q0 - y2 * w2**q0
    w6 = v**e - w2**e + x * w4**e
    w7 = w2 + v
    w8 = w2 * w2 - x * w6 - w1 * w3
    w9 = w4 * w2**q0 - y1 * w6**q0
    w10 = y2 * w6**q0 - w3**q0 * w4
    return {"x": x, "y1": y1, "y2": y2, "w1": w1, "w2": w2, "w3": w3, "w4": w4,
            "w5": w5, "w6": w6, "w7": w7, "w8": w8, "w9": w9, "w10": w10, "v": v}


def coordinate_functions(curve: Curve, *affine) -> dict:
    """Map the defining affine values (x, y) or (x, y1, y2) to all coordinates."""
    if curve.family == "hermitian":
        x, y = affine
        return {"x": x, "y": y}
    if curve.family == "suzuki":
        return suzuki_functions(*affine, curve.q0)
    return ree_functions(*affine, curve.q0)


# ----- points ---------------------------------------------------------------

@dataclass
class PointSet:
    """Projective points as rows of encoded coordinates (t first)."""

    curve: Curve
    field: FiniteField
    affine: np.ndarray
    infinity: np.ndarray

    @cached_property
    def all(self) -> np.ndarray:
        return np.vstack([self.affine, self.infinity[None, :]])

    def __len__(self) -> int:
        return len(self.affine) + 1


def _hermitian_solver(F: FiniteField, q0: int) -> LinearizedSolver:
    return LinearizedSolver(F, lambda y: F.add(F.pow(y, q0), y))


def affine_solutions(curve: Curve, F: FiniteField) -> list[tuple[int, ...]]:
    """All (x, y) or (x, y1, y2) over F satisfying the defining equations."""
    q, q0 = curve.q, curve.q0
    out: list[tuple[int, ...]] = []
    if curve.family == "hermitian":
        solver = _hermitian_solver(F, q0)
        for x in range(F.order):
            for y in solver.solve(F.pow(x, q0 + 1)):
                out.append((x, y))
        return out
    solver = artin_schreier_solver(F, q)
    for x in range(F.order):
        c1 = F.mul(F.pow(x, q0), F.sub(F.pow(x, q), x))
        s1 = solver.solve(c1)
        if not s1:
            continue
        if curve.family == "suzuki":
            out.extend((x, y) for y in s1)
            continue
        # y1^q - y1 = c1 for every y1 in s1, so the second right-hand side is x^q0 c1
        s2 = solver.solve(F.mul(F.pow(x, q0), c1))
        out.extend((x, a, b) for a in s1 for b in s2)
    return out


def top_coordinate(curve: Curve) -> str:
    """The coordinate of largest pole order; only it is nonzero at P_infinity."""
    po = curve.pole_orders()
    return max(curve.coords, key=lambda c: po[c])


def infinity_point(curve: Curve) -> np.ndarray:
    pt = np.zeros(curve.ncoords, dtype=np.int64)
    pt[curve.coords.index(top_coordinate(curve))] = 1
    return pt


def enumerate_points(curve: Curve, r: int = 1) -> PointSet:
    """All GF(q^r)-rational points, as homogeneous coordinate rows."""
    if curve.q**r > ENUMERATION_LIMIT:
        raise CurveError(f"enumeration over GF({curve.q}^{r}) exceeds the 2^20 guard")
    F = curve.extension(r)
    sols = affine_solutions(curve, F)
    return PointSet(curve, F, affine_rows(curve, F, np.array(sols, dtype=np.int64).reshape(-1, len(sols[0]) if sols else 1)),
                    infinity_point(curve))


def affine_rows(curve: Curve, F: FiniteField, base: np.ndarray) -> np.ndarray:
    """Homogeneous coordinates (t = 1) for rows of defining affine values."""
    args = [FieldArray(F, base[:, i]) for i in range(base.shape[1])]
    funcs = coordinate_functions(curve, *args)
    rows = [np.ones(len(base), dtype=np.int64)]
    rows += [funcs[c].values for c in curve.affine_coords]
    return np.stack(rows, axis=1)


def point_from_affine(curve: Curve, F: FiniteField, *affine: int) -> tuple[int, ...]:
    row = affine_rows(curve, F, np.array([affine], dtype=np.int64))[0]
    return tuple(int(v) for v in row)


# ----- point-count formulas -------------------------------------------------

def _sqrt3_power(r: int) -> tuple[Fraction, Fraction]:
    """(sqrt 3)^r as a + b*sqrt3."""
    return (Fraction(3 ** (r // 2)), Fraction(0)) if r % 2 == 0 else (Fraction(0), Fraction(3 ** (r // 2)))


# cos(k*pi/6) for k mod 12, as a + b*sqrt3
_COS_SIXTHS = {
    0: (1, 0), 1: (0, Fraction(1, 2)), 2: (Fraction(1, 2), 0), 3: (0, 0),
    4: (Fraction(-1, 2), 0), 5: (0, Fraction(-1, 2)), 6: (-1, 0), 7: (0, Fraction(-1, 2)),
    8: (Fraction(-1, 2), 0), 9: (0, 0), 10: (Fraction(1, 2), 0), 11: (0, Fraction(1, 2)),
}


def _qmul(a: tuple, b: tuple) -> tuple[Fraction, Fraction]:
    return (Fraction(a[0]) * b[0] + 3 * Fraction(a[1]) * b[1], Fraction(a[0]) * b[1] + Fraction(a[1]) * b[0])


def rational_point_count_formula(curve: Curve, r: int) -> int:
    """Exact N_r from the L-polynomial of the family.

    Ree: N_r = q^r + 1 - 2 q^(r/2) [a cos(5 r pi/6) + b cos(r pi/2)] with
    a = q0(q^2-1), b = q0(q-1)(q+3q0+1)/2 and q^(r/2) = (sqrt3 q0)^r.  The sum
    is carried out in Q(sqrt3); a nonzero sqrt3 part means a transcription
    error and raises.
    """
    q, q0, g = curve.q, curve.q0, curve.genus
    if r < 1:
        raise CurveError("r must be positive")
    if curve.family == "hermitian":
        return q**r + 1 - 2 * g * (-q0) ** r
    if curve.family == "suzuki":
        # (-1+i)^r + (-1-i)^r = 2 Re((-1+i)^r)
        re, im = 1, 0
        for _ in range(r):
            re, im = -re - im, re - im
        return q**r + 1 - g * q0**r * 2 * re
    a = q0 * (q * q - 1)
    b = q0 * (q - 1) * (q + 3 * q0 + 1) // 2
    c5 = _COS_SIXTHS[(5 * r) % 12]
    c3 = _COS_SIXTHS[(3 * r) % 12]
    inner = (a * Fraction(c5[0]) + b * Fraction(c3[0]), a * Fraction(c5[1]) + b * Fraction(c3[1]))
    s = _sqrt3_power(r)
    scaled = _qmul(s, inner)
    scaled = (scaled[0] * q0**r, scaled[1] * q0**r)
    val = (q**r + 1 - 2 * scaled[0], -2 * scaled[1])
    if val[1] != 0 or val[0].denominator != 1:
        raise CurveError("point-count formula did not produce an integer")
    return int(val[0])


def point_count_by_recurrence(curve: Curve, r: int) -> int:
    """Independent check: power sums of the L-polynomial's reciprocal roots."""
    q, q0, g = curve.q, curve.q0, curve.genus

    def power_sum(c1: int, c2: int, k: int) -> int:
        # roots of 1 + c1 T + c2 T^2 reversed: omega^2 + c1 omega + c2 = 0
        s_prev, s = 2, -c1
        if k == 0:
            return 2
        for _ in range(k - 1):
            s_prev, s = s, -c1 * s - c2 * s_prev
        return s

    if curve.family == "hermitian":
        return q**r + 1 - 2 * g * (-q0) ** r
    if curve.family == "suzuki":
        # 1 + 2 q0 T + q T^2, multiplicity g
        return q**r + 1 - g * power_sum(2 * q0, q, r)
    a = q0 * (q * q - 1)
    b = q0 * (q - 1) * (q + 3 * q0 + 1) // 2
    return q**r + 1 - a * power_sum(3 * q0, q, r) - b * power_sum(0, q, r)
