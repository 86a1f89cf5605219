"""The stabilizer of P_infinity and the involution, on points and on coordinates.

An element psi of the stabilizer is given by parameters (alpha, beta, gamma,
delta) (Suzuki: no delta) and acts on the defining functions by affine
formulas.  As a map on points, psi sends P to the point whose defining
coordinates are psi(x)(P), psi(y1)(P), ...; every coordinate function then
transforms linearly, c(psi P) = sum_k M[c, k] k(P), and M is the matrix of
psi on the span of the coordinates.

The Ree rows of M come from a transcribed table of formulas.  They are
checked against the point action and any row that disagrees is replaced by
the row obtained from a linear solve on point evaluations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .curves import Curve, FieldArray, coordinate_functions, enumerate_points, infinity_point
from .finite_field import FiniteField, embedding
from .fixtures import load_json
from .graph_equations import EquationSystem, generate_equations
from .local_series import involution_data
from .multipoly import MultiPoly, parse_poly
from .variety_checks import on_variety_many

PARAM_NAMES = ("a", "b", "c", "d")


class AutomorphismError(ValueError):
    pass


@dataclass(frozen=True)
class AutParams:
    alpha: int
    beta: int
    gamma: int
    delta: int = 0

    def __post_init__(self):
        if self.alpha == 0:
            raise AutomorphismError("alpha must be nonzero")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.alpha, self.beta, self.gamma, self.delta)


IDENTITY = AutParams(1, 0, 0, 0)


def _check_family(curve: Curve) -> None:
    if curve.family not in ("ree", "suzuki"):
        raise AutomorphismError(f"no stabilizer action implemented for the {curve.family} curve")


def random_params(curve: Curve, rng: random.Random) -> AutParams:
    q = curve.q
    d = rng.randrange(q) if curve.family == "ree" else 0
    return AutParams(rng.randrange(1, q), rng.randrange(q), rng.randrange(q), d)


# ----- point action ---------------------------------------------------------------

def apply_affine(curve: Curve, psi: AutParams, affine: np.ndarray, field: FiniteField | None = None) -> np.ndarray:
    """Images of rows of defining values (x, y) or (x, y1, y2) over `field`."""
    _check_family(curve)
    F = field or curve.field
    emb = embedding(curve.field, F) if F != curve.field else None
    a, b, c, d = (emb[v] if emb else v for v in psi.as_tuple())
    q0 = curve.q0
    rows = np.atleast_2d(np.asarray(affine, dtype=np.int64))
    x = FieldArray(F, rows[:, 0])
    y1 = FieldArray(F, rows[:, 1])
    A = F.element(a)
    B = F.element(b)
    nx = x * A + B
    ny1 = y1 * (A ** (q0 + 1)) + x * (A * B**q0) + F.element(c)
    if curve.family == "suzuki":
        return np.stack([nx.values, ny1.values], axis=1)
    y2 = FieldArray(F, rows[:, 2])
    ny2 = y2 * (A ** (2 * q0 + 1)) - y1 * (A ** (q0 + 1) * B**q0) + x * (A * B ** (2 * q0)) + F.element(d)
    return np.stack([nx.values, ny1.values, ny2.values], axis=1)


def compose(curve: Curve, second: AutParams, first: AutParams) -> AutParams:
    """Parameters of the point map P -> second(first(P)).

    The alpha-parts multiply, and the translation part is the image of
    P000 = (0, 0, 0), which psi sends to (beta, gamma, delta).
    """
    F = curve.field
    img = apply_affine(curve, second, np.array([[first.beta, first.gamma, first.delta][: 3 if curve.family == "ree" else 2]]))[0]
    delta = int(img[2]) if curve.family == "ree" else 0
    return AutParams(F.mul(first.alpha, second.alpha), int(img[0]), int(img[1]), delta)


def coordinate_rows(curve: Curve, affine: np.ndarray, field: FiniteField) -> np.ndarray:
    """Homogeneous coordinate vectors (t = 1) of affine points."""
    rows = np.atleast_2d(np.asarray(affine, dtype=np.int64))
    args = [FieldArray(field, rows[:, i]) for i in range(rows.shape[1])]
    funcs = coordinate_functions(curve, *args)
    cols = [np.ones(len(rows), dtype=np.int64)] + [funcs[c].values for c in curve.affine_coords]
    return np.stack(cols, axis=1)


# ----- matrices -----------------------------------------------------------------------

def matmul(F: FiniteField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Matrix product over F of encoded matrices (also matrix @ column block)."""
    prod = F.mul_arr(A[:, :, None], B[None, :, :])
    out = prod[:, 0, :]
    for k in range(1, A.shape[1]):
        out = F.add_arr(out, prod[:, k, :])
    return out


def apply_matrix(F: FiniteField, M: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """M applied to each row vector: returns rows (M v)^T."""
    return matmul(F, M, np.asarray(vectors, dtype=np.int64).T).T


def solve_linear(F: FiniteField, A: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution of A x = b over F (Gaussian elimination), or None."""
    A = [[int(v) for v in row] for row in A]
    b = [int(v) for v in b]
    rows, cols = len(A), len(A[0])
    M = [A[i] + [b[i]] for i in range(rows)]
    piv_cols = []
    r = 0
    for c in range(cols):
        k = next((i for i in range(r, rows) if M[i][c]), None)
        if k is None:
            continue
        M[r], M[k] = M[k], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(inv, v) for v in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [F.sub(u, F.mul(f, v)) for u, v in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
        if r == rows:
            break
    if any(M[i][cols] for i in range(r, rows)):
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(piv_cols):
        x[c] = M[i][cols]
    return x


@lru_cache(maxsize=None)
def _formula_rows(q0: int) -> dict[str, dict[str, MultiPoly]]:
    """Transcribed Ree formulas as {coord: {basis coord: polynomial in a, b, c, d}}."""
    from .curves import make_curve
    from .finite_field import GF

    F = GF(3, 1)
    ring = ("t", "x", "y1", "y2", "w1", "w2", "w3", "w4", "w5", "w6", "w7", "w8", "w9", "w10", "v") + PARAM_NAMES
    coord_idx = {c: i for i, c in enumerate(ring[:15])}
    data = load_json("ree_psi_action.json")
    out: dict[str, dict[str, MultiPoly]] = {}
    texts = {r["coord"]: r["text"] for r in data["rows"]}
    for name, text in texts.items():
        if text.startswith("psi("):
            continue
        poly = parse_poly(text, F, ring, {"q0": q0})
        row: dict[str, MultiPoly] = {}
        for e, c in poly.terms.items():
            lin = [(k, a) for k, a in enumerate(e[:15]) if a]
            if len(lin) > 1 or (lin and lin[0][1] > 1):
                raise AutomorphismError(f"row {name} is not linear in the coordinates")
            target = ring[lin[0][0]] if lin else "t"
            pe = (0,) * 15 + e[15:]
            row.setdefault(target, MultiPoly.zero(F, ring))
            row[target] = row[target] + MultiPoly(F, ring, {pe: c})
        # v = w7 - w2
        if "v" in row:
            vpart = row.pop("v")
            row["w7"] = row.get("w7", MultiPoly.zero(F, ring)) + vpart
            row["w2"] = row.get("w2", MultiPoly.zero(F, ring)) - vpart
        out[name] = row
    for name, text in texts.items():
        if text.startswith("psi("):
            refs = [s.strip()[4:-1] for s in text.split("+")]
            row = {}
            for ref in refs:
                for k, poly in out[ref].items():
                    row[k] = row.get(k, MultiPoly.zero(F, ring)) + poly
            out[name] = row
    return out


def formula_matrix(curve: Curve, psi: AutParams) -> np.ndarray:
    """Matrix built from the transcribed formulas (Ree only; unvalidated)."""
    if curve.family != "ree":
        raise AutomorphismError("formula rows exist only for the Ree curve")
    F = curve.field
    rows = _formula_rows(curve.q0)
    params = psi.as_tuple()
    M = np.zeros((curve.ncoords, curve.ncoords), dtype=np.int64)
    for i, c in enumerate(curve.coords):
        for k, poly in rows[c].items():
            j = curve.coords.index(k)
            point = [0] * 15 + list(params)
            M[i, j] = poly.evaluate(point, F)
    return M


@dataclass
class ValidatedMatrix:
    matrix: np.ndarray
    corrected_rows: list[str]
    residual_rows: dict[str, int]


def _sample_affine(points_affine: np.ndarray, n: int, rng: random.Random) -> np.ndarray:
    idx = [rng.randrange(len(points_affine)) for _ in range(n)]
    return points_affine[idx]


@dataclass
class ActionContext:
    """Per-curve data shared by the automorphism checks."""

    curve: Curve
    system: EquationSystem
    affine: np.ndarray      # defining values of the affine rational points
    vectors: np.ndarray     # their homogeneous coordinate vectors
    basis_idx: np.ndarray   # indices of points whose vectors are independent

    @classmethod
    def build(cls, curve: Curve) -> "ActionContext":
        _check_family(curve)
        from .curves import affine_solutions

        F = curve.field
        aff = np.array(affine_solutions(curve, F), dtype=np.int64)
        vec = coordinate_rows(curve, aff, F)
        basis = _independent_rows(F, vec)
        return cls(curve, generate_equations(curve), aff, vec, basis)


def _independent_rows(F: FiniteField, vec: np.ndarray) -> np.ndarray:
    """Indices of rows forming a basis of the span (greedy, in order)."""
    n = vec.shape[1]
    basis: list[list[int]] = []
    pivots: list[int] = []
    chosen = []
    for idx, row in enumerate(vec):
        r = [int(v) for v in row]
        for b, pc in zip(basis, pivots):
            if r[pc]:
                f = r[pc]
                r = [F.sub(u, F.mul(f, v)) for u, v in zip(r, b)]
        pc = next((k for k in range(n) if r[k]), None)
        if pc is None:
            continue
        inv = F.inv(r[pc])
        r = [F.mul(inv, v) for v in r]
        basis.append(r)
        pivots.append(pc)
        chosen.append(idx)
        if len(chosen) == n:
            break
    if len(chosen) < n:
        raise AutomorphismError("rational points do not span the coordinate space")
    return np.array(chosen)


def solved_matrix(ctx: ActionContext, psi: AutParams) -> np.ndarray:
    """Matrix of psi from the point action alone (linear solve on a basis of points)."""
    F = ctx.curve.field
    base = ctx.affine[ctx.basis_idx]
    V = ctx.vectors[ctx.basis_idx]
    img = coordinate_rows(ctx.curve, apply_affine(ctx.curve, psi, base), F)
    M = np.zeros((ctx.curve.ncoords, ctx.curve.ncoords), dtype=np.int64)
    for i in range(ctx.curve.ncoords):
        sol = solve_linear(F, V, img[:, i])
        if sol is None:
            raise AutomorphismError("inconsistent linear system for a matrix row")
        M[i] = sol
    return M


def matrix_on_series(ctx: ActionContext, psi: AutParams, samples: np.ndarray | None = None) -> ValidatedMatrix:
    """Matrix of psi on the coordinate span, validated against the point action.

    Ree rows come from the transcribed formulas; a row that disagrees with
    the point action at any of the `samples` points (default: all rational
    points) is replaced by the solved row.  Suzuki rows are all solved.
    """
    curve = ctx.curve
    F = curve.field
    aff = ctx.affine if samples is None else samples
    vec = coordinate_rows(curve, aff, F)
    img = coordinate_rows(curve, apply_affine(curve, psi, aff), F)
    if curve.family != "ree":
        M = solved_matrix(ctx, psi)
        bad = np.any(apply_matrix(F, M, vec) != img, axis=0)
        if bad.any():
            raise AutomorphismError("solved matrix does not reproduce the point action")
        return ValidatedMatrix(M, [], {})
    M = formula_matrix(curve, psi)
    pred = apply_matrix(F, M, vec)
    wrong = np.any(pred != img, axis=0)
    corrected, residual = [], {}
    if wrong.any():
        S = solved_matrix(ctx, psi)
        for i in np.flatnonzero(wrong):
            name = curve.coords[i]
            corrected.append(name)
            residual[name] = int(np.count_nonzero(pred[:, i] != img[:, i]))
            M[i] = S[i]
        if np.any(apply_matrix(F, M, vec) != img):
            raise AutomorphismError("corrected matrix does not reproduce the point action")
    return ValidatedMatrix(M, corrected, residual)


def triangular_order(curve: Curve) -> list[int]:
    """Coordinate indices by ascending pole order (t first)."""
    po = curve.pole_orders()
    return sorted(range(curve.ncoords), key=lambda i: (po[curve.coords[i]], i))


def is_lower_triangular(curve: Curve, M: np.ndarray) -> bool:
    order = triangular_order(curve)
    P = M[np.ix_(order, order)]
    return not np.any(np.triu(P, 1))


def projectively_equal(F: FiniteField, A: np.ndarray, B: np.ndarray) -> bool:
    a, b = A.ravel(), B.ravel()
    if (a == 0).any() != (b == 0).any() or np.any((a == 0) != (b == 0)):
        return False
    k = int(np.flatnonzero(a)[0])
    lam = F.div(int(b[k]), int(a[k]))
    return bool(np.array_equal(F.mul_arr(a, np.full_like(a, lam)), b))


# ----- involution --------------------------------------------------------------------

def involution_matrix(curve: Curve) -> np.ndarray:
    """Signed permutation matrix of the involution swapping P000 and P_infinity."""
    partner, signs = involution_data(curve)
    F = curve.field
    M = np.zeros((curve.ncoords, curve.ncoords), dtype=np.int64)
    for i, c in enumerate(curve.coords):
        M[i, curve.coords.index(partner[c])] = F.from_int(signs[c])
    return M


def origin_point(curve: Curve) -> np.ndarray:
    pt = np.zeros(curve.ncoords, dtype=np.int64)
    pt[0] = 1
    return pt


# ----- the full check ------------------------------------------------------------------

def verify_group_action(curve: Curve, psi_samples: int = 1000, point_samples: int = 100,
                        seed: int = 7, ctx: ActionContext | None = None) -> dict:
    """Variety stability, triangularity, composition and orbit checks."""
    ctx = ctx or ActionContext.build(curve)
    F = curve.field
    rng = random.Random(seed)
    checks: dict[str, dict] = {}
    point_set = {tuple(r) for r in ctx.affine.tolist()}

    stable = triangular = composition = 0
    corrections: dict[str, int] = {}
    failures: list[dict] = []
    for _ in range(psi_samples):
        psi = random_params(curve, rng)
        img = apply_affine(curve, psi, ctx.affine)
        perm_ok = {tuple(r) for r in img.tolist()} == point_set
        pts = _sample_affine(ctx.affine, point_samples, rng)
        on = on_variety_many(ctx.system, coordinate_rows(curve, apply_affine(curve, psi, pts), F), F)
        if perm_ok and on.all():
            stable += 1
        elif len(failures) < 5:
            failures.append({"check": "variety", "psi": psi.as_tuple()})
        vm = matrix_on_series(ctx, psi, pts)
        for name in vm.corrected_rows:
            corrections[name] = corrections.get(name, 0) + 1
        if is_lower_triangular(curve, vm.matrix):
            triangular += 1
        elif len(failures) < 5:
            failures.append({"check": "triangular", "psi": psi.as_tuple()})
        psi2 = random_params(curve, rng)
        M2 = matrix_on_series(ctx, psi2, pts).matrix
        M12 = matrix_on_series(ctx, compose(curve, psi2, psi), pts).matrix
        pt = _sample_affine(ctx.affine, 1, rng)
        pointwise = np.array_equal(apply_affine(curve, psi2, apply_affine(curve, psi, pt)),
                                   apply_affine(curve, compose(curve, psi2, psi), pt))
        if pointwise and projectively_equal(F, matmul(F, M2, vm.matrix), M12):
            composition += 1
        elif len(failures) < 5:
            failures.append({"check": "composition", "psi": [psi.as_tuple(), psi2.as_tuple()]})
    checks["variety_preserved"] = {"passed": stable, "of": psi_samples}
    checks["lower_triangular"] = {"passed": triangular, "of": psi_samples}
    checks["composition"] = {"passed": composition, "of": psi_samples}
    checks["formula_rows"] = {"rows_corrected": sorted(corrections),
                              "corrections": corrections,
                              "correction_count": len(corrections)}

    ident = matrix_on_series(ctx, IDENTITY).matrix
    checks["identity"] = {"ok": bool(np.array_equal(ident, np.eye(curve.ncoords, dtype=np.int64)))}

    # translations psi_(1, b, c, d) move P000 to every affine point
    ndef = ctx.affine.shape[1]
    orbit = {tuple(int(v) for v in r) for r in ctx.affine.tolist()}
    reached = set()
    zero = np.zeros((1, ndef), dtype=np.int64)
    for r in ctx.affine.tolist():
        psi = AutParams(1, *r) if ndef == 3 else AutParams(1, r[0], r[1])
        reached.add(tuple(int(v) for v in apply_affine(curve, psi, zero)[0]))
    checks["orbit_of_origin"] = {"size": len(reached), "expected": curve.q ** ndef,
                                 "ok": reached == orbit and len(reached) == curve.q ** ndef}

    # involution sweep
    P = enumerate_points(curve, 1)
    J = involution_matrix(curve)
    img = apply_matrix(F, J, P.all)
    on = on_variety_many(ctx.system, img, F)
    inf, org = infinity_point(curve), origin_point(curve)
    swap = (projectively_equal(F, apply_matrix(F, J, inf[None, :])[0], org)
            and projectively_equal(F, apply_matrix(F, J, org[None, :])[0], inf))
    square = projectively_equal(F, matmul(F, J, J), np.eye(curve.ncoords, dtype=np.int64))
    checks["involution"] = {"points": len(P), "on_variety": int(on.sum()), "swaps_origin_and_infinity": swap,
                            "square_is_identity": square, "ok": bool(on.all() and swap and square)}

    ok = (stable == triangular == composition == psi_samples and checks["identity"]["ok"]
          and checks["orbit_of_origin"]["ok"] and checks["involution"]["ok"])
    return {"ok": bool(ok), "seed": seed, "psi_samples": psi_samples, "point_samples": point_samples,
            "checks": checks, "failures": failures}
