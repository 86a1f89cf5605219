"""Truncated power series at the origin point P000 and the valuations they give.

The curves here are defined over the prime field and x is a uniformizer at
P000, so every coordinate function expands as a power series in t = x with
coefficients in GF(p).  Coefficients are held in numpy int arrays; products
use an FFT convolution that is exact after rounding for the lengths used.
A p^k-th power of such a series is the substitution t -> t^(p^k).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .finite_field import FiniteField
from .multipoly import MultiPoly

PRECISION_CEILING = 1 << 20


class PrecisionExceeded(RuntimeError):
    """The valuation could not be decided below the precision ceiling."""


def _convolve_mod(a: np.ndarray, b: np.ndarray, n: int, p: int) -> np.ndarray:
    """First n coefficients of a*b mod p."""
    a = a[:n]
    b = b[:n]
    if len(a) == 0 or len(b) == 0:
        return np.zeros(n, dtype=np.int64)
    if min(len(a), len(b)) <= 64:
        full = np.convolve(a, b)
    else:
        size = 1 << (len(a) + len(b) - 1).bit_length()
        fa = np.fft.rfft(a.astype(np.float64), size)
        fb = np.fft.rfft(b.astype(np.float64), size)
        full = np.rint(np.fft.irfft(fa * fb, size)).astype(np.int64)
    out = np.zeros(n, dtype=np.int64)
    m = min(n, len(full))
    out[:m] = full[:m] % p
    return out


class PowerSeries:
    """Truncated series sum c_i t^i, i < prec, with c_i in GF(p)."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs):
        self.p = p
        self.coeffs = np.asarray(coeffs, dtype=np.int64) % p

    @property
    def prec(self) -> int:
        return len(self.coeffs)

    @classmethod
    def monomial(cls, p: int, k: int, prec: int, c: int = 1) -> "PowerSeries":
        arr = np.zeros(prec, dtype=np.int64)
        if k < prec:
            arr[k] = c % p
        return cls(p, arr)

    @classmethod
    def constant(cls, p: int, c: int, prec: int) -> "PowerSeries":
        return cls.monomial(p, 0, prec, c)

    def _coerce(self, other) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            return other
        if isinstance(other, int):
            return PowerSeries.constant(self.p, other, self.prec)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "PowerSeries":
        o = self._coerce(other)
        n = min(self.prec, o.prec)
        return PowerSeries(self.p, self.coeffs[:n] + o.coeffs[:n])

    __radd__ = __add__

    def __neg__(self) -> "PowerSeries":
        return PowerSeries(self.p, -self.coeffs)

    def __sub__(self, other) -> "PowerSeries":
        o = self._coerce(other)
        n = min(self.prec, o.prec)
        return PowerSeries(self.p, self.coeffs[:n] - o.coeffs[:n])

    def __rsub__(self, other) -> "PowerSeries":
        return self._coerce(other) - self

    def __mul__(self, other) -> "PowerSeries":
        if isinstance(other, int):
            return PowerSeries(self.p, self.coeffs * other)
        o = self._coerce(other)
        n = min(self.prec, o.prec)
        va, vb = self.valuation(), o.valuation()
        if va is None or vb is None or va + vb >= n:
            return PowerSeries(self.p, np.zeros(n, dtype=np.int64))
        # strip leading zeros so the FFT only sees the live part
        m = n - va - vb
        prod = _convolve_mod(self.coeffs[va:va + m], o.coeffs[vb:vb + m], m, self.p)
        out = np.zeros(n, dtype=np.int64)
        out[va + vb:] = prod
        return PowerSeries(self.p, out)

    __rmul__ = __mul__

    def frobenius(self, k: int = 1) -> "PowerSeries":
        """self^(p^k) for a series over GF(p): substitute t -> t^(p^k)."""
        step = self.p**k
        out = np.zeros(self.prec, dtype=np.int64)
        src = self.coeffs[: (self.prec - 1) // step + 1]
        out[::step][: len(src)] = src
        return PowerSeries(self.p, out)

    def __pow__(self, e: int) -> "PowerSeries":
        if e < 0:
            raise ValueError("negative exponent")
        k = 0
        while e and e % self.p == 0:
            e //= self.p
            k += 1
        result = PowerSeries.constant(self.p, 1, self.prec)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result.frobenius(k) if k else result

    def truncate(self, n: int) -> "PowerSeries":
        return PowerSeries(self.p, self.coeffs[:n])

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, None if all known ones vanish."""
        nz = np.flatnonzero(self.coeffs)
        return int(nz[0]) if len(nz) else None

    def leading_coefficient(self) -> int:
        v = self.valuation()
        return 0 if v is None else int(self.coeffs[v])

    def shift(self, k: int) -> "PowerSeries":
        """Divide by t^k (the first k coefficients must vanish)."""
        if np.any(self.coeffs[:k]):
            raise ValueError("series is not divisible by t^k")
        return PowerSeries(self.p, self.coeffs[k:])

    def inverse(self) -> "PowerSeries":
        """Multiplicative inverse of a unit, by Newton iteration."""
        c0 = int(self.coeffs[0])
        if c0 == 0:
            raise ZeroDivisionError("series is not a unit")
        inv0 = pow(c0, -1, self.p)
        g = PowerSeries(self.p, [inv0])
        n = 1
        while n < self.prec:
            n = min(2 * n, self.prec)
            f = self.truncate(n)
            g = PowerSeries(self.p, np.concatenate([g.coeffs, np.zeros(n - g.prec, dtype=np.int64)]))
            g = g * (2 - f * g)
        return g

    def __eq__(self, other) -> bool:
        if not isinstance(other, PowerSeries):
            return NotImplemented
        n = min(self.prec, other.prec)
        return self.p == other.p and bool(np.array_equal(self.coeffs[:n], other.coeffs[:n]))

    def __repr__(self) -> str:
        nz = np.flatnonzero(self.coeffs)[:6]
        terms = " + ".join(f"{self.coeffs[i]}*t^{i}" for i in nz)
        return f"PowerSeries({terms or '0'} + O(t^{self.prec}))"


def artin_schreier_series(p: int, rhs: PowerSeries, q: int) -> PowerSeries:
    """The solution y with y(0) = 0 of y^q - y = rhs, where rhs(0) = 0.

    y = -(rhs + rhs^q + rhs^(q^2) + ...), which converges t-adically.
    """
    if rhs.coeffs[0] % p:
        raise ValueError("right-hand side must vanish at the origin")
    total = PowerSeries(p, np.zeros(rhs.prec, dtype=np.int64))
    term = rhs
    k = 0
    while term.valuation() is not None:
        total = total + term
        k += 1
        step = q**k
        if step >= rhs.prec:
            break
        out = np.zeros(rhs.prec, dtype=np.int64)
        src = rhs.coeffs[: (rhs.prec - 1) // step + 1]
        out[::step][: len(src)] = src
        term = PowerSeries(p, out)
    return -total


@dataclass
class SeriesEvaluator:
    """Evaluates polynomials in a curve's coordinates as series at P000."""

    field: FiniteField
    coords: tuple[str, ...]
    series: Mapping[str, PowerSeries]

    def __post_init__(self):
        self._pow_cache: dict[tuple[str, int], PowerSeries] = {}

    @property
    def prec(self) -> int:
        return min(s.prec for s in self.series.values())

    def power(self, name: str, e: int) -> PowerSeries:
        key = (name, e)
        if key not in self._pow_cache:
            self._pow_cache[key] = self.series[name] ** e
        return self._pow_cache[key]

    def components(self, f: MultiPoly) -> list[MultiPoly]:
        """Split f = sum_j X^j f_j with each f_j over the prime field."""
        F = f.field
        parts = []
        for j in range(F.n):
            terms = {e: (c // F.p**j) % F.p for e, c in f.terms.items()}
            parts.append(MultiPoly(F, f.coords, terms))
        return [g for g in parts if not g.is_zero()]

    def evaluate_prime(self, f: MultiPoly) -> PowerSeries:
        """Series of f, which must have prime-field coefficients."""
        p = self.field.p
        total = PowerSeries(p, np.zeros(self.prec, dtype=np.int64))
        idx = [self.coords.index(c) for c in f.coords]
        for e, c in f.terms.items():
            if c >= p:
                raise ValueError("coefficient outside the prime field")
            term = PowerSeries.constant(p, c, self.prec)
            for i, a in zip(idx, e):
                if a:
                    term = term * self.power(self.coords[i], a)
            total = total + term
        return total

    def valuation(self, f: MultiPoly) -> int | None:
        """Valuation at P000; None if the series vanishes to full precision."""
        vals = [self.evaluate_prime(g).valuation() for g in self.components(f)]
        vals = [v for v in vals if v is not None]
        return min(vals) if vals else None


def default_precision(genus: int, m_inf: int) -> int:
    return 2 * (2 * genus - 2) + 2 * m_inf + 1


def random_point_vanishing(f: MultiPoly, points: np.ndarray, samples: int = 200,
                           seed: int = 0) -> bool:
    """True when f vanishes at `samples` randomly chosen rows of `points`."""
    rng = random.Random(seed)
    idx = [rng.randrange(len(points)) for _ in range(samples)]
    vals = f.evaluate_many(points[idx])
    return not np.any(vals)


# ----- coordinate expansions and valuations ----------------------------------

def expand_coordinates(curve, N: int) -> dict[str, PowerSeries]:
    """Series at P000 of every coordinate (t is the constant 1, x = T)."""
    from .curves import coordinate_functions

    if N < 1:
        raise ValueError("precision must be positive")
    p, q, q0 = curve.p, curve.q, curve.q0
    T = PowerSeries.monomial(p, 1, N)
    if curve.family == "hermitian":
        # y = x^(q0+1) - y^q0, i.e. y = sum_k (-1)^k x^((q0+1) q0^k)
        y = PowerSeries(p, np.zeros(N, dtype=np.int64))
        term, sign = T ** (q0 + 1), 1
        while term.valuation() is not None:
            y = y + term * sign
            term, sign = term ** q0, -sign
        affine = (T, y)
    else:
        rhs1 = T**q0 * (T**q - T)
        y1 = artin_schreier_series(p, rhs1, q)
        if curve.family == "suzuki":
            affine = (T, y1)
        else:
            affine = (T, y1, artin_schreier_series(p, T**q0 * rhs1, q))
    funcs = coordinate_functions(curve, *affine)
    out = {"t": PowerSeries.constant(p, 1, N)}
    out.update({c: funcs[c] for c in curve.affine_coords})
    return out


class LocalOracle:
    """Valuations at P000 and P_infinity of polynomials in the coordinates.

    Series are expanded once at the working precision and re-expanded at
    double precision whenever a query vanishes to the current precision,
    up to `ceiling` coefficients.
    """

    def __init__(self, curve, precision: int | None = None, ceiling: int = PRECISION_CEILING):
        self.curve = curve
        self.ceiling = ceiling
        self.precision = precision or default_precision(curve.genus, curve.m_infinity)
        if self.precision > ceiling:
            raise PrecisionExceeded(f"initial precision {self.precision} exceeds ceiling {ceiling}")
        self._evaluators: dict[int, SeriesEvaluator] = {}

    def evaluator(self, N: int) -> SeriesEvaluator:
        if N not in self._evaluators:
            self._evaluators[N] = SeriesEvaluator(self.curve.field, self.curve.coords,
                                                  expand_coordinates(self.curve, N))
        return self._evaluators[N]

    def pole_bound(self, f: MultiPoly) -> int:
        """Upper bound for the pole order at P_infinity of f with t = 1."""
        po = self.curve.pole_orders()
        return max((sum(po[c] * a for c, a in zip(f.coords, e)) for e in f.terms), default=0)

    def valuation_at_origin(self, f: MultiPoly, points: np.ndarray | None = None) -> int | None:
        """nu_0(f), or None when f is the zero function on the curve.

        f is zero once its series vanishes beyond its pole bound D (a
        nonzero function has at most D zeros counted with multiplicity).
        When `points` are given they must also all be zeros of f.
        """
        if f.is_zero():
            return None
        bound = self.pole_bound(f)
        N = self.precision
        while True:
            v = self.evaluator(N).valuation(f)
            if v is not None:
                return v
            if N > bound:
                if points is not None and not random_point_vanishing(f, points):
                    raise RuntimeError("series vanishes but the polynomial does not vanish on the curve")
                return None
            if 2 * N > self.ceiling:
                raise PrecisionExceeded(f"valuation undecided below {N} coefficients")
            N *= 2

    def involution_numerator(self, f: MultiPoly) -> MultiPoly:
        """f composed with the involution, homogenized and multiplied through
        by the partner of t to the total degree of f."""
        partner, signs = involution_data(self.curve)
        d = f.degree()
        images = {}
        for c in self.curve.coords:
            images[c] = MultiPoly.variable(self.curve.field, self.curve.coords, partner[c]).scale(
                self.curve.field.from_int(signs[c]))
        return f.homogenize("t", d).substitute(images)

    def valuation_at_infinity(self, f: MultiPoly) -> int | None:
        """nu_inf(f) = nu_0(phi-numerator) - deg(f) * nu_0(top coordinate)."""
        if f.is_zero():
            return None
        g = self.involution_numerator(f)
        v = self.valuation_at_origin(g)
        if v is None:
            return None
        return v - f.degree() * self.curve.m_infinity

    def pole_order(self, f: MultiPoly) -> int:
        v = self.valuation_at_infinity(f)
        if v is None:
            raise ValueError("the zero function has no pole order")
        return -v


# Coordinates paired by the involution that swaps P000 and P_infinity,
# with the sign each image coordinate carries (t is sent to the top coordinate).
_PAIRS = {
    "hermitian": (("t", "y"), ("x", "x")),
    "suzuki": (("t", "w"), ("x", "z"), ("y", "y")),
    "ree": (("t", "w8"), ("x", "w6"), ("w1", "w3"), ("y1", "w10"), ("y2", "w9"),
            ("w4", "w5"), ("w2", "w2"), ("w7", "w7")),
}
_NEGATED = {"hermitian": (), "suzuki": (), "ree": ("w2", "w7")}


def involution_data(curve) -> tuple[dict[str, str], dict[str, int]]:
    partner = {}
    for a, b in _PAIRS[curve.family]:
        partner[a], partner[b] = b, a
    signs = {c: (-1 if c in _NEGATED[curve.family] else 1) for c in curve.coords}
    return partner, signs


def monomial_series(series: Mapping[str, PowerSeries], coords: tuple[str, ...],
                    exps: list[tuple[int, ...]], N: int, p: int, chunk: int = 256) -> np.ndarray:
    """Series (first N coefficients) of many monomials at once, shape (len(exps), N).

    Monomials are built from shorter prefixes (drop one factor of the last
    variable present), and each level is one batched FFT product per
    coordinate.
    """
    L = 1 << (2 * N - 1).bit_length()
    base = {c: np.asarray(series[c].coeffs[:N], dtype=np.float64) for c in coords}
    spectra: dict[str, np.ndarray] = {}
    cache: dict[tuple[int, ...], np.ndarray] = {}
    zero = tuple(0 for _ in coords)
    one = np.zeros(N, dtype=np.int8)
    one[0] = 1
    cache[zero] = one
    # t-like coordinates whose series is exactly 1 are transparent
    unit = {i for i, c in enumerate(coords) if series[c].coeffs[0] == 1 and not series[c].coeffs[1:N].any()}

    def strip(e):
        return tuple(0 if i in unit else a for i, a in enumerate(e))

    todo = {strip(e) for e in exps}
    levels: dict[int, set] = {}
    stack = list(todo)
    seen = set(stack)
    while stack:
        e = stack.pop()
        if e == zero:
            continue
        levels.setdefault(sum(e), set()).add(e)
        i = max(k for k, a in enumerate(e) if a)
        pre = e[:i] + (e[i] - 1,) + e[i + 1:]
        if pre not in seen:
            seen.add(pre)
            stack.append(pre)
    for d in sorted(levels):
        by_var: dict[int, list] = {}
        for e in sorted(levels[d]):
            i = max(k for k, a in enumerate(e) if a)
            by_var.setdefault(i, []).append(e)
        for i, group in by_var.items():
            c = coords[i]
            if c not in spectra:
                spectra[c] = np.fft.rfft(base[c], L)
            for s in range(0, len(group), chunk):
                part = group[s:s + chunk]
                pres = np.stack([cache[e[:i] + (e[i] - 1,) + e[i + 1:]] for e in part]).astype(np.float64)
                prod = np.fft.irfft(np.fft.rfft(pres, L, axis=1) * spectra[c][None, :], L, axis=1)[:, :N]
                vals = np.mod(np.rint(prod), p).astype(np.int8)
                for e, row in zip(part, vals):
                    cache[e] = row
    return np.stack([cache[strip(e)] for e in exps]) if exps else np.zeros((0, N), dtype=np.int8)


def poly_series(series: Mapping[str, PowerSeries], poly: MultiPoly, N: int) -> PowerSeries:
    """Series of a polynomial with prime-field coefficients, via monomial_series."""
    p = poly.field.p
    exps = list(poly.terms)
    if any(c >= p for c in poly.terms.values()):
        raise ValueError("coefficient outside the prime field")
    rows = monomial_series(series, poly.coords, exps, N, p)
    coef = np.array([poly.terms[e] for e in exps], dtype=np.int64)
    return PowerSeries(p, (coef @ rows.astype(np.int64)) % p if len(exps) else np.zeros(N, dtype=np.int64))
