"""Sparse multivariate polynomials over a FiniteField.

A polynomial is a mapping from exponent tuples to nonzero encoded field
elements, together with the ordered tuple of coordinate names.  Instances are
treated as immutable values.
"""

from __future__ import annotations

import ast
from typing import Iterable, Mapping, Sequence

import numpy as np

from .finite_field import FiniteField

Monomial = tuple[int, ...]


class MultiPoly:
    __slots__ = ("field", "coords", "terms")

    def __init__(self, field: FiniteField, coords: Sequence[str], terms: Mapping[Monomial, int] | None = None):
        self.field = field
        self.coords = tuple(coords)
        clean: dict[Monomial, int] = {}
        if terms:
            n = len(self.coords)
            for exp, c in terms.items():
                if len(exp) != n:
                    raise ValueError(f"exponent {exp} does not match coords {self.coords}")
                if c:
                    clean[tuple(exp)] = c
        self.terms = clean

    # ----- constructors ------------------------------------------------
    @classmethod
    def zero(cls, field: FiniteField, coords: Sequence[str]) -> "MultiPoly":
        return cls(field, coords)

    @classmethod
    def constant(cls, field: FiniteField, coords: Sequence[str], c: int) -> "MultiPoly":
        return cls(field, coords, {(0,) * len(coords): c})

    @classmethod
    def variable(cls, field: FiniteField, coords: Sequence[str], name: str) -> "MultiPoly":
        idx = list(coords).index(name)
        exp = [0] * len(coords)
        exp[idx] = 1
        return cls(field, coords, {tuple(exp): 1})

    @classmethod
    def variables(cls, field: FiniteField, coords: Sequence[str]) -> dict[str, "MultiPoly"]:
        return {c: cls.variable(field, coords, c) for c in coords}

    # ----- basic queries -----------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def monomials(self) -> list[Monomial]:
        return sorted(self.terms, key=grlex_key, reverse=True)

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=grlex_key)

    def _same_ring(self, other: "MultiPoly") -> None:
        if other.field != self.field or other.coords != self.coords:
            raise ValueError("polynomials live in different rings")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.field == other.field and self.coords == other.coords and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.coords, frozenset(self.terms.items())))

    def __len__(self) -> int:
        return len(self.terms)

    # ----- arithmetic --------------------------------------------------
    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._same_ring(other)
            return other
        if isinstance(other, int):
            return MultiPoly.constant(self.field, self.coords, self.field.from_int(other))
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "MultiPoly":
        other = self._lift(other)
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = F.add(out.get(e, 0), c)
        return MultiPoly(F, self.coords, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        F = self.field
        return MultiPoly(F, self.coords, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._lift(other) - self

    def scale(self, c: int) -> "MultiPoly":
        F = self.field
        return MultiPoly(F, self.coords, {e: F.mul(v, c) for e, v in self.terms.items()})

    def __mul__(self, other) -> "MultiPoly":
        other = self._lift(other)
        F = self.field
        out: dict[Monomial, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = F.add(out.get(e, 0), F.mul(c1, c2))
        return MultiPoly(F, self.coords, out)

    __rmul__ = __mul__

    def frobenius_power(self, k: int) -> "MultiPoly":
        """self^(p^k), computed term by term."""
        F = self.field
        e_pow = F.p**k
        return MultiPoly(F, self.coords, {tuple(a * e_pow for a in e): F.pow(c, e_pow)
                                          for e, c in self.terms.items()})

    def __pow__(self, e: int) -> "MultiPoly":
        if e < 0:
            raise ValueError("negative exponent")
        p = self.field.p
        # peel off powers of p with the Frobenius shortcut
        k = 0
        while e and e % p == 0:
            e //= p
            k += 1
        result = MultiPoly.constant(self.field, self.coords, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result.frobenius_power(k) if k else result

    # ----- evaluation and derivatives -----------------------------------
    def evaluate(self, point: Sequence[int], field: FiniteField | None = None,
                 coef_map: Sequence[int] | None = None) -> int:
        """Value at a point with encoded coordinates.

        `field` lets the point live in an extension; `coef_map` then maps the
        polynomial's coefficients into it (see finite_field.embedding).
        """
        F = field or self.field
        total = 0
        for e, c in self.terms.items():
            v = coef_map[c] if coef_map is not None else c
            for x, a in zip(point, e):
                if a:
                    v = F.mul(v, F.pow(x, a))
                    if not v:
                        break
            total = F.add(total, v)
        return total

    def evaluate_many(self, points: np.ndarray, field: FiniteField | None = None,
                      coef_map: Sequence[int] | None = None) -> np.ndarray:
        """Vectorised evaluation; `points` has shape (P, ncoords)."""
        F = field or self.field
        pts = np.asarray(points, dtype=np.int64)
        total = np.zeros(pts.shape[0], dtype=np.int64)
        cache: dict[tuple[int, int], np.ndarray] = {}
        for e, c in self.terms.items():
            v = np.full(pts.shape[0], coef_map[c] if coef_map is not None else c, dtype=np.int64)
            for i, a in enumerate(e):
                if a:
                    key = (i, a)
                    if key not in cache:
                        cache[key] = F.pow_arr(pts[:, i], a)
                    v = F.mul_arr(v, cache[key])
            total = F.add_arr(total, v)
        return total

    def partial(self, var: int | str) -> "MultiPoly":
        """Formal partial derivative; exponents divisible by p drop out."""
        i = self.coords.index(var) if isinstance(var, str) else var
        F = self.field
        out: dict[Monomial, int] = {}
        for e, c in self.terms.items():
            a = e[i]
            if a % F.p == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = F.add(out.get(tuple(ne), 0), F.mul(c, F.from_int(a)))
        return MultiPoly(F, self.coords, out)

    def gradient(self) -> list["MultiPoly"]:
        return [self.partial(i) for i in range(len(self.coords))]

    # ----- coordinate changes ------------------------------------------
    def homogenize(self, var: int | str = 0, degree: int | None = None) -> "MultiPoly":
        """Fill each term up to `degree` (default: total degree) with `var`."""
        i = self.coords.index(var) if isinstance(var, str) else var
        d = self.degree() if degree is None else degree
        out = {}
        for e, c in self.terms.items():
            ne = list(e)
            ne[i] += d - sum(e)
            if ne[i] < 0:
                raise ValueError("degree below the total degree of a term")
            out[tuple(ne)] = c
        return MultiPoly(self.field, self.coords, out)

    def dehomogenize(self, var: int | str = 0) -> "MultiPoly":
        i = self.coords.index(var) if isinstance(var, str) else var
        out: dict[Monomial, int] = {}
        F = self.field
        for e, c in self.terms.items():
            ne = list(e)
            ne[i] = 0
            out[tuple(ne)] = F.add(out.get(tuple(ne), 0), c)
        return MultiPoly(F, self.coords, out)

    def substitute(self, images: Mapping[str, "MultiPoly"], target_coords: Sequence[str] | None = None) -> "MultiPoly":
        """Replace coordinates by polynomials (in a common target ring)."""
        tgt = tuple(target_coords) if target_coords is not None else next(iter(images.values())).coords
        F = self.field
        result = MultiPoly.zero(F, tgt)
        powers: dict[tuple[str, int], MultiPoly] = {}
        for e, c in self.terms.items():
            term = MultiPoly.constant(F, tgt, c)
            for name, a in zip(self.coords, e):
                if a:
                    key = (name, a)
                    if key not in powers:
                        powers[key] = images[name] ** a
                    term = term * powers[key]
            result = result + term
        return result

    def map_coefficients(self, fn) -> "MultiPoly":
        return MultiPoly(self.field, self.coords, {e: fn(c) for e, c in self.terms.items()})

    def rename(self, coords: Sequence[str]) -> "MultiPoly":
        return MultiPoly(self.field, coords, self.terms)

    # ----- canonical form and serialisation ------------------------------
    def canonical(self) -> "MultiPoly":
        """Scale so the grlex-leading coefficient is 1."""
        if not self.terms:
            return self
        lc = self.terms[self.leading_monomial()]
        return self.scale(self.field.inv(lc))

    def to_json(self) -> dict:
        return {
            "coords": list(self.coords),
            "terms": [{"exp": list(e), "coef": self.terms[e]} for e in self.monomials()],
        }

    @classmethod
    def from_json(cls, field: FiniteField, data: Mapping) -> "MultiPoly":
        coords = data["coords"]
        terms: dict[Monomial, int] = {}
        for t in data["terms"]:
            e = tuple(int(a) for a in t["exp"])
            c = int(t["coef"])
            if not 0 <= c < field.order:
                raise ValueError(f"coefficient {c} outside {field}")
            terms[e] = field.add(terms.get(e, 0), c)
        return cls(field, coords, terms)

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in self.monomials():
            c = self.terms[e]
            mono = "*".join(f"{n}^{a}" if a > 1 else n for n, a in zip(self.coords, e) if a)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"MultiPoly({self.to_str()})"


def grlex_key(e: Monomial) -> tuple:
    """Graded order, ties broken lexicographically (first coordinate highest)."""
    return (sum(e), e)


class ParseError(ValueError):
    pass


def parse_poly(text: str, field: FiniteField, coords: Sequence[str],
               constants: Mapping[str, int] | None = None,
               extra: Mapping[str, MultiPoly] | None = None) -> MultiPoly:
    """Parse an arithmetic expression into a MultiPoly.

    Accepts +, -, *, ^ (or **) and parentheses.  Names resolve to
    coordinates, to polynomials given in `extra`, or (inside exponents) to
    integer `constants`.  Integer literals are read modulo p.
    """
    consts = dict(constants or {})
    names = MultiPoly.variables(field, coords)
    if extra:
        names.update(extra)
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc}") from None

    def int_value(node) -> int:
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name) and node.id in consts:
            return consts[node.id]
        if isinstance(node, ast.BinOp):
            a, b = int_value(node.left), int_value(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Pow):
                return a**b
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -int_value(node.operand)
        raise ParseError(f"bad exponent in {text!r}")

    def walk(node) -> MultiPoly:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return MultiPoly.constant(field, coords, field.from_int(node.value))
        if isinstance(node, ast.Name):
            if node.id in names:
                return names[node.id]
            if node.id in consts:
                return MultiPoly.constant(field, coords, field.from_int(consts[node.id]))
            raise ParseError(f"unknown name {node.id!r} in {text!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                return walk(node.left) ** int_value(node.right)
            a, b = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
        raise ParseError(f"unsupported syntax in {text!r}")

    return walk(tree)


def monomials_of_degree(nvars: int, degree: int) -> Iterable[Monomial]:
    """All exponent tuples of the given total degree (reverse lex order)."""
    if nvars == 1:
        yield (degree,)
        return
    for a in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - a):
            yield (a,) + rest
