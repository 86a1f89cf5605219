"""Defining equations read off edge-labelled complete graphs.

Each curve carries a complete graph whose vertices are signed coordinate
functions and whose edge (i, j) is labelled by a function f with
f^(q0) (Hermitian, Suzuki) or f^(3 q0) (Ree) proportional to the Pluecker
coordinate [v_i, v_j] = v_i v_j^q - v_j v_i^q.  Labels are antisymmetric.
The constant function 1 is the homogenizing coordinate t, so all generated
equations come out homogeneous.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from .curves import Curve
from .fixtures import load_json
from .multipoly import MultiPoly, parse_poly


class EquationError(ValueError):
    pass


# Rows/columns follow REE_VERTICES.  The (-w3, 1) cell is printed as -y2 in
# the source table; antisymmetry and the Pluecker identity both give +y2.
REE_VERTICES = ("1", "-w6", "-w3", "w2", "-w8", "x", "w1")
REE_LABELS_PRINTED = (
    (None, "-w4", "-y2", "y1", "-w7", "1", "x"),
    ("w4", None, "w10", "w9", "-w8", "-w7-w2", "-w3"),
    ("-y2", "-w10", None, "-w5", "-w6", "w1", "-w7+w2"),
    ("-y1", "-w9", "w5", None, "-w10", "-y2", "w4"),
    ("w7", "w8", "w6", "w10", None, "-w5", "-w9"),
    ("-1", "w7+w2", "-w1", "y2", "w5", None, "y1"),
    ("-x", "w3", "w7-w2", "-w4", "w9", "-y1", None),
)
REE_LABEL_CORRECTIONS = {(2, 0): "y2"}
# endpoints of the three long diagonals; w2 sits at the centre
REE_DIAGONALS = ((0, 4), (1, 5), (2, 6))

SUZUKI_VERTICES = ("1", "x", "z", "w")
SUZUKI_UPPER = {(0, 1): "1", (0, 2): "x", (0, 3): "y", (1, 2): "y", (1, 3): "z", (2, 3): "w"}

HERMITIAN_VERTICES = ("1", "x", "y")
HERMITIAN_UPPER = {(0, 1): "1", (0, 2): "x", (1, 2): "y"}


def _expr(curve: Curve, text: str) -> MultiPoly:
    """Parse a signed label such as '-w7+w2'; '1' is the coordinate t."""
    F = curve.field
    extra = {"v": MultiPoly.variable(F, curve.coords, "w7") - MultiPoly.variable(F, curve.coords, "w2")} \
        if curve.family == "ree" else {}
    text = text.replace("1", "t") if text.strip("-+") == "1" else text
    return parse_poly(text, F, curve.coords, extra=extra)


@dataclass
class LabeledGraph:
    curve: Curve
    vertex_names: tuple[str, ...]
    labels: dict[tuple[int, int], str]
    corrections: dict[tuple[int, int], tuple[str, str]] = dc_field(default_factory=dict)
    diagonals: tuple[tuple[int, int], ...] = ()

    @property
    def size(self) -> int:
        return len(self.vertex_names)

    def vertex(self, i: int) -> MultiPoly:
        return _expr(self.curve, self.vertex_names[i])

    def label(self, i: int, j: int) -> MultiPoly:
        if i == j:
            raise EquationError("no loop edges")
        if (i, j) in self.labels:
            return _expr(self.curve, self.labels[(i, j)])
        return -_expr(self.curve, self.labels[(j, i)])

    def label_text(self, i: int, j: int) -> str:
        return self.labels.get((i, j)) or f"-({self.labels[(j, i)]})"

    def antisymmetry_violations(self) -> list[tuple[int, int]]:
        bad = []
        for i, j in itertools.combinations(range(self.size), 2):
            if (i, j) in self.labels and (j, i) in self.labels:
                if _expr(self.curve, self.labels[(i, j)]) != -_expr(self.curve, self.labels[(j, i)]):
                    bad.append((i, j))
        return bad

    @property
    def label_power(self) -> int:
        """Exponent e in label^e (x^q - x) = v_i v_j^q - v_j v_i^q."""
        c = self.curve
        return c.q0 if c.family == "hermitian" else c.p * c.q0


def ree_table(corrected: bool = True) -> dict[tuple[int, int], str]:
    table = {}
    for i, row in enumerate(REE_LABELS_PRINTED):
        for j, cell in enumerate(row):
            if cell is not None:
                table[(i, j)] = cell
    if corrected:
        table.update(REE_LABEL_CORRECTIONS)
    return table


def build_graph(curve: Curve, corrected: bool = True) -> LabeledGraph:
    if curve.family == "ree":
        corr = {k: (REE_LABELS_PRINTED[k[0]][k[1]], v) for k, v in REE_LABEL_CORRECTIONS.items()} \
            if corrected else {}
        return LabeledGraph(curve, REE_VERTICES, ree_table(corrected), corr, REE_DIAGONALS)
    if curve.family == "suzuki":
        return LabeledGraph(curve, SUZUKI_VERTICES, dict(SUZUKI_UPPER))
    return LabeledGraph(curve, HERMITIAN_VERTICES, dict(HERMITIAN_UPPER))


def pluecker_residuals(g: LabeledGraph, series: dict) -> list[tuple[int, int, int | None]]:
    """Edges where label^e (x^q - x) != v_i v_j^q - v_j v_i^q as series at P000.

    `series` maps coordinate names (t included) to PowerSeries.  Returns
    (i, j, valuation of the difference) for every failing ordered pair.
    """
    from .local_series import PowerSeries

    def ev(poly: MultiPoly) -> PowerSeries:
        total = None
        for e, c in poly.terms.items():
            term = PowerSeries.constant(g.curve.p, c, series["t"].prec)
            for name, a in zip(poly.coords, e):
                if a:
                    term = term * series[name] ** a
            total = term if total is None else total + term
        return total

    q = g.curve.q
    lam = series["x"] ** q - series["x"]
    bad = []
    for i in range(g.size):
        for j in range(g.size):
            if i == j:
                continue
            a, b = ev(g.vertex(i)), ev(g.vertex(j))
            diff = ev(g.label(i, j)) ** g.label_power * lam - (a * b**q - b * a**q)
            if diff.valuation() is not None:
                bad.append((i, j, diff.valuation()))
    return bad


# ----- equation sets --------------------------------------------------------

def triangle_equations(g: LabeledGraph) -> list[MultiPoly]:
    """L(j,k) A^e + L(k,i) B^e + L(i,j) C^e for each triangle i < j < k."""
    e = g.curve.q0
    out = []
    for i, j, k in itertools.combinations(range(g.size), 3):
        A, B, C = g.vertex(i), g.vertex(j), g.vertex(k)
        out.append(g.label(j, k) * A**e + g.label(k, i) * B**e + g.label(i, j) * C**e)
    return out


def twisted_equations(g: LabeledGraph) -> list[MultiPoly]:
    """The triangle equations with the Frobenius power moved onto the labels."""
    e = 3 * g.curve.q0
    out = []
    for i, j, k in itertools.combinations(range(g.size), 3):
        A, B, C = g.vertex(i), g.vertex(j), g.vertex(k)
        out.append(g.label(j, k) ** e * A + g.label(k, i) ** e * B + g.label(i, j) ** e * C)
    return out


def four_cycle_quadrics(g: LabeledGraph) -> tuple[list[MultiPoly], list[MultiPoly]]:
    """Diagonal product plus opposite-edge products for each 4-subset.

    Returns (unique quadrics, duplicates removed), compared in canonical form.
    """
    seen: dict[MultiPoly, MultiPoly] = {}
    dups = []
    for a, b, c, d in itertools.combinations(range(g.size), 4):
        Q = g.label(a, b) * g.label(c, d) + g.label(a, d) * g.label(b, c) + g.label(a, c) * g.label(d, b)
        key = Q.canonical()
        if key in seen:
            dups.append(Q)
        else:
            seen[key] = Q
    return list(seen.values()), dups


def diagonal_quadric(g: LabeledGraph) -> MultiPoly:
    """Centre squared plus the products of the long-diagonal endpoints."""
    used = {i for pair in g.diagonals for i in pair}
    centre = [i for i in range(g.size) if i not in used]
    if len(centre) != 1:
        raise EquationError("long diagonals must leave exactly one centre vertex")
    Q = g.vertex(centre[0]) ** 2
    for i, j in g.diagonals:
        Q = Q + g.vertex(i) * g.vertex(j)
    return Q


@dataclass
class EquationSystem:
    curve: Curve
    sets: dict[str, list[MultiPoly]]
    duplicates: list[MultiPoly] = dc_field(default_factory=list)

    @property
    def equations(self) -> list[MultiPoly]:
        return [f for eqs in self.sets.values() for f in eqs]

    def __len__(self) -> int:
        return sum(len(v) for v in self.sets.values())

    def cardinalities(self) -> dict[str, int]:
        return {k: len(v) for k, v in self.sets.items()}

    def to_json(self) -> dict:
        return {"curve": self.curve.to_dict(),
                "sets": {k: [f.to_json() for f in v] for k, v in self.sets.items()}}


def generate_equations(curve: Curve) -> EquationSystem:
    g = build_graph(curve)
    if curve.family == "hermitian":
        return EquationSystem(curve, {"single": triangle_equations(g)})
    quads, dups = four_cycle_quadrics(g)
    if curve.family == "suzuki":
        return EquationSystem(curve, {"triangles": triangle_equations(g), "quadric": quads})
    if len(dups) != 1:
        raise EquationError(f"expected exactly one duplicated quadric, found {len(dups)}")
    return EquationSystem(curve, {
        "set1": triangle_equations(g),
        "set2": twisted_equations(g),
        "set3": [diagonal_quadric(g)],
        "set4": quads,
    }, dups)


# ----- reference lists --------------------------------------------------------

FIXTURE_FILES = {"ree": "ree_equations.json", "suzuki": "suzuki_equations.json",
                 "hermitian": "hermitian_equations.json"}


@dataclass
class ReferenceEquation:
    label: str
    set: str
    text: str
    poly: MultiPoly
    printed: str | None = None
    note: str | None = None


def load_reference(curve: Curve) -> list[ReferenceEquation]:
    """The published equation list for the curve's family, instantiated at its q0.

    Texts are stored with a symbolic q0; entries whose printed form was
    corrected keep the printed text alongside a note.
    """
    data = load_json(FIXTURE_FILES[curve.family])
    F = curve.field
    extra = {"v": MultiPoly.variable(F, curve.coords, "w7") - MultiPoly.variable(F, curve.coords, "w2")} \
        if curve.family == "ree" else {}
    out = []
    for item in data["equations"]:
        f = parse_poly(item["text"], F, curve.coords, {"q0": curve.q0}, extra)
        if not f.is_homogeneous():
            f = f.homogenize("t", f.degree())
        out.append(ReferenceEquation(item["label"], item["set"], item["text"], f,
                                     item.get("printed"), item.get("note")))
    return out


def verify_against_reference(system: EquationSystem,
                             reference: list[ReferenceEquation] | None = None) -> dict:
    """Match generated and reference equations up to a nonzero scalar."""
    ref = reference if reference is not None else load_reference(system.curve)
    ref_keys: dict[MultiPoly, list[str]] = {}
    for r in ref:
        ref_keys.setdefault(r.poly.canonical(), []).append(r.label)
    matched, unmatched_gen = [], []
    used: set[MultiPoly] = set()
    for name, eqs in system.sets.items():
        for idx, f in enumerate(eqs):
            key = f.canonical()
            if key in ref_keys and key not in used:
                used.add(key)
                matched.append({"generated": f"{name}[{idx}]", "reference": ref_keys[key]})
            else:
                unmatched_gen.append({"generated": f"{name}[{idx}]", "poly": f.to_str()})
    unmatched_ref = [r.label for r in ref if r.poly.canonical() not in used]
    return {
        "matched": len(matched),
        "generated": len(system),
        "reference": len(ref),
        "pairs": matched,
        "unmatched_generated": unmatched_gen,
        "unmatched_fixture": unmatched_ref,
        "corrections_applied": [{"label": r.label, "printed": r.printed, "used": r.text, "note": r.note}
                                for r in ref if r.printed is not None],
        "ok": not unmatched_gen and not unmatched_ref and len(matched) == len(ref),
    }
