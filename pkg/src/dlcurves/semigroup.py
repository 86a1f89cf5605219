"""Numerical semigroups and the Weierstrass semigroup at P_infinity.

The engine works at P000.  The involution swapping P000 and P_infinity
permutes the coordinates (up to sign and a common factor), so the functions
regular away from P_infinity with pole order at most k*m are, after the
swap, the degree-k forms in the coordinates, and a form G of valuation s at
P000 gives a function of pole order k*m - s.  With k = (2g-2)/m the span
V_k of degree-k monomials is reduced to echelon form over GF(p) on series
truncated at k*m + 1; its pivots are exactly the valuations that occur, so
the nongaps below 2g are {k*m - s : s a pivot}.

V_k is grown degree by degree: V_(j+1) is spanned by t*V_j and the products
b*c of a basis element b of V_j with an affine coordinate c.  Each product
is reduced against the current fully reduced basis, a function of equal
leading valuation cancelling the leading term (a difference of two functions
with the same pole order), until it either vanishes or acquires a new
pivot.
"""

from __future__ import annotations

import itertools
import json
import logging
import os
import random
import time
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from .curves import Curve
from .local_series import PowerSeries, expand_coordinates, involution_data, monomial_series, poly_series
from .multipoly import MultiPoly

log = logging.getLogger(__name__)


class SemigroupFailure(RuntimeError):
    """The reduction reached a fixed point whose gap count differs from g."""


# ----- numerical semigroups -------------------------------------------------

@dataclass
class NumericSemigroup:
    """Nongaps of a numerical semigroup inside [0, bound]."""

    bound: int
    nongaps: list[int]

    def __post_init__(self):
        self.nongaps = sorted(set(n for n in self.nongaps if 0 <= n <= self.bound))
        self._set = set(self.nongaps)

    def __contains__(self, n: int) -> bool:
        return n in self._set

    @property
    def gaps(self) -> list[int]:
        return [n for n in range(self.bound + 1) if n not in self._set]

    def gap_count(self, below: int | None = None) -> int:
        b = self.bound + 1 if below is None else below
        return sum(1 for n in range(b) if n not in self._set)

    def residue_counts(self, modulus: int, below: int | None = None) -> dict[int, int]:
        b = self.bound + 1 if below is None else below
        counts = {a: 0 for a in range(modulus)}
        for n in self.nongaps:
            if n < b:
                counts[n % modulus] += 1
        return counts

    def is_closed(self) -> bool:
        return all(a + b not in range(self.bound + 1) or a + b in self._set
                   for a in self.nongaps for b in self.nongaps if a <= b and a + b <= self.bound)


def generate_from(generators: list[int], bound: int) -> NumericSemigroup:
    """Additive closure of the generators inside [0, bound]."""
    reach = np.zeros(bound + 1, dtype=bool)
    reach[0] = True
    for g in sorted(set(generators)):
        if g <= 0:
            raise ValueError("generators must be positive")
        for n in range(g, bound + 1):
            if reach[n - g]:
                reach[n] = True
    return NumericSemigroup(bound, np.flatnonzero(reach).tolist())


def _completed(s: NumericSemigroup, genus: int) -> np.ndarray:
    """Membership up to 2g + smallest positive nongap, everything >= 2g a nongap."""
    pos = [n for n in s.nongaps if n > 0]
    top = 2 * genus + (pos[0] if pos else 1)
    member = np.zeros(top + 1, dtype=bool)
    for n in s.nongaps:
        if n < 2 * genus:
            member[n] = True
    member[2 * genus:] = True
    member[0] = True
    return member


def minimal_generators(s: NumericSemigroup, genus: int) -> list[int]:
    """Nongaps that are not sums of two smaller positive nongaps.

    `s` must be complete below 2*genus; integers >= 2*genus count as nongaps.
    """
    member = _completed(s, genus)
    elems = np.flatnonzero(member)
    gens = []
    for n in elems[1:]:
        smaller = elems[(elems > 0) & (elems < n)]
        if not np.any(member[n - smaller]):
            gens.append(int(n))
    return gens


def symmetry_check(s: NumericSemigroup, genus: int) -> bool:
    """a is a nongap iff 2g-1-a is a gap, for 0 <= a < 2g."""
    top = 2 * genus - 1
    return all((a in s) != ((top - a) in s) for a in range(2 * genus))


def closed_form_semigroup(curve: Curve) -> NumericSemigroup:
    """Semigroup generated by the coordinate pole orders, in [0, 2g - 1]."""
    gens = sorted({v for v in curve.pole_orders().values() if v > 0})
    return generate_from(gens, 2 * curve.genus - 1)


# ----- echelon over GF(p) -----------------------------------------------------

class Echelon:
    """Fully reduced row echelon form of series rows over GF(p).

    Rows are int8 coefficient vectors; the pivot of a row is its valuation
    and every pivot column is zero in all other rows.
    """

    def __init__(self, p: int, width: int):
        self.p = p
        self.width = width
        self.B = np.zeros((0, width), dtype=np.int8)
        self.piv: list[int] = []

    def copy(self) -> "Echelon":
        e = Echelon(self.p, self.width)
        e.B = self.B.copy()
        e.piv = list(self.piv)
        return e

    def __len__(self) -> int:
        return len(self.piv)

    def reduce(self, C: np.ndarray) -> np.ndarray:
        """Reduce rows against the basis; float32 products are exact here
        because every entry is below p and the basis has < 2^24 / p^2 rows."""
        C = np.array(C, dtype=np.int8)
        if self.piv:
            coef = C[:, self.piv].astype(np.float32)
            R = C.astype(np.float32) - coef @ self.B.astype(np.float32)
            C = np.mod(R, self.p).astype(np.int8)
        return C[np.any(C, axis=1)]

    def insert_ordered(self, C: np.ndarray) -> list[int]:
        """Insert rows one at a time in order; returns the indices of rows
        that were independent of the basis and of the earlier rows."""
        p = self.p
        C = np.array(C, dtype=np.int8)
        if self.piv:
            coef = C[:, self.piv].astype(np.float32)
            C = np.mod(C.astype(np.float32) - coef @ self.B.astype(np.float32), p).astype(np.int8)
        taken = []
        live = np.flatnonzero(np.any(C, axis=1))
        while len(live):
            i = int(live[0])
            s = int(np.argmax(C[i] != 0))
            r = (C[i].astype(np.int16) * pow(int(C[i, s]), -1, p)) % p
            rest = live[1:]
            col = C[rest, s]
            hit = rest[col != 0]
            if len(hit):
                C[hit] = ((C[hit].astype(np.int16) - np.outer(C[hit, s].astype(np.int16), r)) % p).astype(np.int8)
            colB = self.B[:, s]
            if colB.any():
                idx = np.flatnonzero(colB)
                self.B[idx] = ((self.B[idx].astype(np.int16)
                                - np.outer(colB[idx].astype(np.int16), r)) % p).astype(np.int8)
            self.B = np.vstack([self.B, r.astype(np.int8)[None, :]])
            self.piv.append(s)
            taken.append(i)
            live = rest[np.any(C[rest], axis=1)] if len(rest) else rest
        return taken

    def insert(self, C: np.ndarray) -> int:
        """Add the span of the rows of C; returns the number of new pivots."""
        p = self.p
        C = self.reduce(C)
        new = 0
        while len(C):
            first = np.argmax(C != 0, axis=1)
            i = int(np.argmin(first))
            s = int(first[i])
            r = C[i].astype(np.int16)
            r = (r * pow(int(r[s]), -1, p)) % p
            C = ((C.astype(np.int16) - np.outer(C[:, s].astype(np.int16), r)) % p).astype(np.int8)
            col = self.B[:, s]
            if col.any():
                idx = np.flatnonzero(col)
                self.B[idx] = ((self.B[idx].astype(np.int16)
                                - np.outer(col[idx].astype(np.int16), r)) % p).astype(np.int8)
            self.B = np.vstack([self.B, r.astype(np.int8)[None, :]])
            self.piv.append(s)
            C = C[np.any(C, axis=1)]
            new += 1
        return new


# ----- the engine -------------------------------------------------------------------

@dataclass
class WeierstrassResult:
    curve: Curve
    semigroup: NumericSemigroup
    degree: int
    stage_pivots: dict[int, list[int]]
    timings: dict[int, float]
    witnesses: dict[int, "Witness"] = dc_field(default_factory=dict)

    @property
    def nongaps(self) -> list[int]:
        return self.semigroup.nongaps


def _coordinate_block(curve: Curve, N: int) -> tuple[list[str], np.ndarray]:
    series = expand_coordinates(curve, N)
    names = list(curve.affine_coords)
    return names, np.stack([series[c].coeffs for c in names]).astype(np.int8)


def _checkpoint_meta(curve: Curve, N: int) -> dict:
    return {"family": curve.family, "q": curve.q, "q0": curve.q0, "N": N}


def compute_weierstrass_semigroup(curve: Curve, checkpoint: str | os.PathLike | None = None,
                                  block: int = 512, extra_degrees: int = 1) -> WeierstrassResult:
    """Nongaps below 2g at P_infinity with per-degree pivot records.

    With `checkpoint`, the echelon is saved after every degree and an
    existing compatible checkpoint is resumed.  If the gap count after degree
    (2g-2)/m differs from g, up to `extra_degrees` further degrees are tried
    before SemigroupFailure is raised.
    """
    g, m, p = curve.genus, curve.m_infinity, curve.p
    if (2 * g - 2) % m:
        raise SemigroupFailure("2g-2 is not a multiple of the hyperplane degree")
    k = (2 * g - 2) // m
    for top in range(k, k + extra_degrees + 1):
        res = _run(curve, top, checkpoint, block)
        if res.semigroup.gap_count(2 * g) == g:
            return res
        log.warning("gap count %d != g = %d after degree %d", res.semigroup.gap_count(2 * g), g, top)
    counts = res.semigroup.residue_counts(curve.q - 1, 2 * g)
    raise SemigroupFailure(f"gap count {res.semigroup.gap_count(2 * g)} != g = {g}; "
                           f"nongaps per residue class mod {curve.q - 1}: {counts}")


def _run(curve: Curve, top: int, checkpoint, block: int) -> WeierstrassResult:
    m, p = curve.m_infinity, curve.p
    N = top * m + 1
    names, coords = _coordinate_block(curve, N)
    L = 1 << (2 * N - 1).bit_length()
    cf = np.fft.rfft(coords.astype(np.float64), L, axis=1)

    def products(rows: np.ndarray, j: int) -> np.ndarray:
        F = np.fft.rfft(rows.astype(np.float64), L, axis=1)
        P = np.fft.irfft(F * cf[j][None, :], L, axis=1)[:, :N]
        return np.mod(np.rint(P), p).astype(np.int8)

    ck = Path(checkpoint) if checkpoint else None
    meta = _checkpoint_meta(curve, N)
    E = Echelon(p, N)
    stage_pivots: dict[int, list[int]] = {}
    timings: dict[int, float] = {}
    start = 1
    if ck and ck.exists():
        data = np.load(ck, allow_pickle=False)
        if json.loads(str(data["meta"])) == meta:
            E.B = data["B"]
            E.piv = data["piv"].tolist()
            stage_pivots = {int(a): list(map(int, b)) for a, b in json.loads(str(data["stages"])).items()}
            start = max(stage_pivots) + 1
            log.info("resumed from %s at degree %d", ck, start)
    for j in range(start, top + 1):
        t0 = time.perf_counter()
        if j == 1:
            E.insert(np.vstack([np.eye(1, N, dtype=np.int8), coords]))
        else:
            prev = E.B.copy()  # t * V_(j-1) is already in the span
            nxt = E.copy()
            for c in range(len(names)):
                for s in range(0, len(prev), block):
                    nxt.insert(products(prev[s:s + block], c))
            E = nxt
        stage_pivots[j] = sorted(E.piv)
        timings[j] = time.perf_counter() - t0
        log.info("degree %d: dim %d (%.1fs)", j, len(E), timings[j])
        if ck:
            tmp = ck.with_suffix(".tmp.npz")
            np.savez(tmp, B=E.B, piv=np.array(E.piv), meta=json.dumps(meta),
                     stages=json.dumps({str(a): b for a, b in stage_pivots.items()}))
            os.replace(tmp, ck)
    nongaps = sorted(top * m - s for s in E.piv)
    return WeierstrassResult(curve, NumericSemigroup(2 * curve.genus - 1, nongaps), top,
                             stage_pivots, timings)


# ----- witnesses ----------------------------------------------------------------

@dataclass
class Witness:
    """A function regular away from P_infinity whose pole order is `value`.

    Generators carry an explicit polynomial in the affine coordinates (found
    as a degree-`degree` form at P000 and moved to P_infinity by the
    involution); other nongaps are products of generator witnesses.
    """

    value: int
    factors: tuple[int, ...]
    poly: MultiPoly | None = None
    degree: int | None = None

    @property
    def ident(self) -> str:
        if self.poly is not None:
            return f"g{self.value}"
        if not self.factors:
            return "one"
        return "*".join(f"g{f}" for f in self.factors)

    def to_json(self) -> dict:
        out = {"value": self.value, "id": self.ident, "factors": list(self.factors)}
        if self.poly is not None:
            out["degree"] = self.degree
            out["poly"] = self.poly.to_json()
        return out


def _swap_to_infinity(curve: Curve, form: MultiPoly) -> MultiPoly:
    """Apply the involution to a form and set t = 1."""
    partner, signs = involution_data(curve)
    F = curve.field
    images = {c: MultiPoly.variable(F, curve.coords, partner[c]).scale(F.from_int(signs[c]))
              for c in curve.coords}
    return form.substitute(images).dehomogenize("t")


def generator_witnesses(curve: Curve, result: WeierstrassResult, targets: list[int],
                        block: int = 1024) -> dict[int, Witness]:
    """Explicit witnesses for the given nongaps, one elimination per degree.

    For a target n the smallest degree j with s = j*m - n a pivot of V_j is
    used.  Degree-j monomials are scanned in order of valuation; the ones
    that enlarge the span are kept, and a second elimination that tracks
    combinations over the kept monomials yields a form of valuation exactly s.
    """
    m, p = curve.m_infinity, curve.p
    nu = curve.origin_valuations()
    nu_vec = np.array([nu[c] for c in curve.coords])
    by_degree: dict[int, dict[int, int]] = {}
    for n in targets:
        for j in sorted(result.stage_pivots):
            s = j * m - n
            if s >= 0 and s in set(result.stage_pivots[j]):
                by_degree.setdefault(j, {})[s] = n
                break
        else:
            raise SemigroupFailure(f"{n} is not a recorded nongap")
    N = max(result.stage_pivots) * m + 1
    series = expand_coordinates(curve, N)
    out: dict[int, Witness] = {}
    from .multipoly import monomials_of_degree
    for j, wanted in sorted(by_degree.items()):
        W = max(wanted) + 1
        mons = [e for e in monomials_of_degree(len(curve.coords), j) if int(nu_vec @ e) < W]
        mons.sort(key=lambda e: (int(nu_vec @ e), tuple(-a for a in e)))
        E = Echelon(p, W)
        kept: list[tuple[int, ...]] = []
        kept_rows = []
        for st in range(0, len(mons), block):
            part = mons[st:st + block]
            rows = monomial_series(series, curve.coords, part, W, p)
            for i in E.insert_ordered(rows):
                kept.append(part[i])
                kept_rows.append(rows[i])
            if set(wanted) <= set(E.piv):
                break
        K = len(kept)
        aug = np.zeros((K, W + K), dtype=np.int8)
        aug[:, :W] = np.stack(kept_rows)
        aug[np.arange(K), W + np.arange(K)] = 1
        E2 = Echelon(p, W + K)
        E2.insert(aug)
        where = {s: i for i, s in enumerate(E2.piv)}
        for s, n in sorted(wanted.items()):
            comb = E2.B[where[s], W:]
            terms = {kept[i]: int(comb[i]) for i in np.flatnonzero(comb)}
            form = MultiPoly(curve.field, curve.coords, terms)
            out[n] = Witness(n, (n,), _swap_to_infinity(curve, form), j)
        log.info("degree %d: %d witnesses from %d kept monomials", j, len(wanted), K)
    return out


def decompose(value: int, generators: list[int], member: np.ndarray) -> tuple[int, ...]:
    """Write a nongap as a sum of generators (largest generator first)."""
    parts = []
    while value:
        for g in sorted(generators, reverse=True):
            if g <= value and member[value - g]:
                parts.append(g)
                value -= g
                break
        else:
            raise SemigroupFailure(f"{value} is not a sum of generators")
    return tuple(parts)


def all_witnesses(curve: Curve, result: WeierstrassResult, gen_witnesses: dict[int, Witness]) -> dict[int, Witness]:
    gens = sorted(gen_witnesses)
    member = np.zeros(2 * curve.genus, dtype=bool)
    member[result.nongaps] = True
    out = {}
    for n in result.nongaps:
        out[n] = gen_witnesses[n] if n in gen_witnesses else Witness(n, decompose(n, gens, member))
    return out


def verify_witnesses(curve: Curve, witnesses: dict[int, Witness], sample: int, seed: int,
                     precision: int | None = None) -> dict:
    """Recompute pole orders of randomly chosen witnesses at a fresh precision.

    Each generator factor is re-expanded from its stored polynomial on new
    series, its pole order read off, and product witnesses are checked by
    multiplying the factor series.
    """
    rng = random.Random(seed)
    pool = sorted(w for w in witnesses if w > 0)
    chosen = sorted(rng.sample(pool, min(sample, len(pool))))
    m = curve.m_infinity
    need = [f for n in chosen for f in witnesses[n].factors]
    top = max((witnesses[f].degree for f in need), default=1)
    N = precision or 2 * (top * m + 1)
    series = expand_coordinates(curve, N)
    partner, signs = involution_data(curve)
    F = curve.field
    images = {c: MultiPoly.variable(F, curve.coords, partner[c]).scale(F.from_int(signs[c]))
              for c in curve.coords}
    factor_series: dict[int, tuple[PowerSeries, int]] = {}
    for f in sorted(set(need)):
        w = witnesses[f]
        d = w.poly.degree()
        numer = w.poly.homogenize("t", d).substitute(images)
        factor_series[f] = (poly_series(series, numer, N), d)
    failures = []
    for n in chosen:
        total = None
        deg = 0
        for f in witnesses[n].factors:
            s, d = factor_series[f]
            total = s if total is None else total * s
            deg += d
        v = total.valuation()
        pole = None if v is None else deg * m - v
        if pole != n:
            failures.append({"value": n, "pole_order": pole})
    return {"checked": len(chosen), "precision": N, "failures": failures, "ok": not failures,
            "values": chosen}
