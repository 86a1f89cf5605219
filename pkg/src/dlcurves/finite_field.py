"""Exact arithmetic in GF(p^n) for small characteristic.

Elements are stored as integers whose base-p digits are the coefficients of
the polynomial representative (lowest degree first).  Multiplication goes
through discrete log / exp tables built from a primitive modulus, addition is
either XOR (p = 2) or digit-wise via a Zech logarithm table.

The modulus for each (p, n) is fixed: for n = 1 it is X (the element is its
own constant term), otherwise it is the first primitive polynomial in the
enumeration order of :func:`primitive_modulus`.  The same field descriptor is
therefore reproduced on every run.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

SUPPORTED_CHARACTERISTICS = (2, 3)
MAX_FIELD_SIZE = 1 << 20


class FieldError(ValueError):
    """Raised for unsupported field parameters or invalid operations."""


def _poly_mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    n = len(mod) - 1
    out = [0] * (2 * n - 1 if n > 0 else 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = (out[i + j] + ai * bj) % p
    for k in range(len(out) - 1, n - 1, -1):
        c = out[k]
        if c:
            for j in range(n + 1):
                out[k - n + j] = (out[k - n + j] - c * mod[j]) % p
    return out[:n]


def _is_primitive(mod: list[int], p: int) -> bool:
    n = len(mod) - 1
    order = p**n - 1
    x = [0] * n
    x[1 % n] = 1 if n > 1 else 0
    cur = [1] + [0] * (n - 1)
    one = list(cur)
    for k in range(1, order + 1):
        cur = _poly_mulmod(cur, x, mod, p)
        if cur == one:
            return k == order
    return False


@lru_cache(maxsize=None)
def primitive_modulus(p: int, n: int) -> tuple[int, ...]:
    """Return the fixed modulus (coefficients c0..cn, monic) for GF(p^n).

    For n >= 2 the candidates X^n + c_{n-1}X^{n-1} + ... + c0 are scanned with
    the integer sum(c_i p^i) increasing, and the first primitive one is used.
    """
    if p not in SUPPORTED_CHARACTERISTICS:
        raise FieldError(f"unsupported characteristic {p}")
    if n < 1:
        raise FieldError("extension degree must be positive")
    if p**n > MAX_FIELD_SIZE:
        raise FieldError(f"GF({p}^{n}) exceeds the table size limit")
    if n == 1:
        return (0, 1)
    for code in range(1, p**n):
        low = [(code // p**i) % p for i in range(n)]
        if low[0] == 0:
            continue
        mod = low + [1]
        if _is_primitive(mod, p):
            return tuple(mod)
    raise FieldError(f"no primitive polynomial found for GF({p}^{n})")  # pragma: no cover


def _primitive_root_mod(p: int) -> int:
    for g in range(1, p):
        if len({pow(g, k, p) for k in range(1, p)}) == p - 1:
            return g
    raise FieldError(f"no primitive root mod {p}")  # pragma: no cover


class FiniteField:
    """The field GF(p^n) with integer-encoded elements."""

    def __init__(self, p: int, n: int):
        self.p = p
        self.n = n
        self.modulus = primitive_modulus(p, n)
        self.order = p**n
        q = self.order
        self._digits_pow = [p**i for i in range(n)]
        exp = [0] * (2 * (q - 1))
        log = [-1] * q
        if n == 1:
            g = _primitive_root_mod(p)
            cur = 1
            for k in range(q - 1):
                exp[k] = cur
                log[cur] = k
                cur = cur * g % p
        else:
            mod = list(self.modulus)
            cur = [1] + [0] * (n - 1)
            xpoly = [0, 1] + [0] * (n - 2)
            for k in range(q - 1):
                val = self.from_coeffs(cur)
                exp[k] = val
                log[val] = k
                cur = _poly_mulmod(cur, xpoly, mod, p)
        for k in range(q - 1, 2 * (q - 1)):
            exp[k] = exp[k - q + 1]
        self._exp = exp
        self._log = log
        # zech[k] = log(1 + g^k), or -1 when 1 + g^k == 0
        if p != 2:
            zech = [-1] * (q - 1)
            for k in range(q - 1):
                s = self._add_digits(1, exp[k])
                zech[k] = log[s] if s else -1
            self._zech = zech
        self._np_exp = np.array(exp + [0], dtype=np.int64)
        log_arr = np.array(log, dtype=np.int64)
        self._np_log = log_arr
        self._np_add: np.ndarray | None = None

    # ----- descriptors -------------------------------------------------
    def __repr__(self) -> str:
        return f"GF({self.p}^{self.n})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.n) == (other.p, other.n)

    def __hash__(self) -> int:
        return hash((self.p, self.n))

    def descriptor(self) -> dict:
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus)}

    # ----- encoding ----------------------------------------------------
    def coeffs(self, a: int) -> list[int]:
        return [(a // d) % self.p for d in self._digits_pow]

    def from_coeffs(self, cs: Sequence[int]) -> int:
        return sum((c % self.p) * d for c, d in zip(cs, self._digits_pow))

    def from_int(self, k: int) -> int:
        """Image of the integer k in the prime subfield."""
        return k % self.p

    def elements(self) -> Iterator[int]:
        return iter(range(self.order))

    def element(self, value: int) -> "FieldElement":
        return FieldElement(self, value)

    def generator(self) -> int:
        return self._exp[1 % (self.order - 1)] if self.order > 2 else 1

    # ----- scalar arithmetic on encoded ints ---------------------------
    def _add_digits(self, a: int, b: int) -> int:
        p = self.p
        out = 0
        d = 1
        while a or b:
            out += ((a % p + b % p) % p) * d
            a //= p
            b //= p
            d *= p
        return out

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % (self.order - 1)]
        if z < 0:
            return 0
        return self._exp[(la + z) % (self.order - 1)]

    def neg(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        # -1 = g^((q-1)/2) in odd characteristic
        return self._exp[self._log[a] + (self.order - 1) // 2]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self._exp[(-self._log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        return self._exp[(self._log[a] * e) % (self.order - 1)]

    def frobenius(self, a: int, k: int = 1) -> int:
        """a -> a^(p^k)."""
        return self.pow(a, self.p ** (k % self.n))

    def in_subfield(self, a: int, d: int) -> bool:
        """True when a lies in GF(p^d) (d must divide n)."""
        if self.n % d:
            raise FieldError(f"GF({self.p}^{d}) is not a subfield of {self}")
        return self.pow(a, self.p**d) == a

    def subfield_elements(self, d: int) -> list[int]:
        return [a for a in range(self.order) if self.in_subfield(a, d)]

    def trace(self, a: int, d: int = 1) -> int:
        """Relative trace to GF(p^d)."""
        out = 0
        cur = a
        for _ in range(self.n // d):
            out = self.add(out, cur)
            cur = self.pow(cur, self.p**d)
        return out

    # ----- vectorised arithmetic on numpy int arrays -------------------
    def add_table(self) -> np.ndarray:
        if self._np_add is None:
            if self.order > 3**7:
                raise FieldError("addition table too large; use add_arr")
            idx = np.arange(self.order)
            digits = [(idx // d) % self.p for d in self._digits_pow]
            tab = np.zeros((self.order, self.order), dtype=np.int32)
            for dg, d in zip(digits, self._digits_pow):
                tab += ((dg[:, None] + dg[None, :]) % self.p * d).astype(np.int32)
            self._np_add = tab
        return self._np_add

    def add_arr(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.order <= 3**7:
            return self.add_table()[a, b]
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        for d in self._digits_pow:
            out += ((a // d + b // d) % self.p) * d
        return out

    def neg_arr(self, a: np.ndarray) -> np.ndarray:
        if self.p == 2:
            return a
        return self.mul_arr(a, np.full_like(a, self.neg(1)))

    def mul_arr(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        la = self._np_log[a]
        lb = self._np_log[b]
        zero = (la < 0) | (lb < 0)
        res = self._np_exp[np.where(zero, -1, la + lb)]
        return res

    def pow_arr(self, a: np.ndarray, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        la = self._np_log[a]
        res = self._np_exp[np.where(la < 0, -1, (la * e) % (self.order - 1))]
        return res

    # ----- linear algebra over GF(p) on the coefficient space ----------
    def linear_map_matrix(self, fn) -> np.ndarray:
        """Matrix (n x n over GF(p)) of a GF(p)-linear map on this field."""
        cols = [self.coeffs(fn(self.from_coeffs([1 if i == j else 0 for i in range(self.n)])))
                for j in range(self.n)]
        return np.array(cols, dtype=np.int64).T % self.p


class FieldElement:
    """An element of a FiniteField supporting the usual operators."""

    __slots__ = ("field", "value")

    def __init__(self, field: FiniteField, value: int):
        if not 0 <= value < field.order:
            raise FieldError(f"{value} is not an element of {field}")
        self.field = field
        self.value = value

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("operands live in different fields")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.div(self.value, o))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def frobenius(self, k: int = 1) -> "FieldElement":
        return FieldElement(self.field, self.field.frobenius(self.value, k))

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == self.field.from_int(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.n, self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"{self.field}({self.value})"


@lru_cache(maxsize=None)
def GF(p: int, n: int = 1) -> FiniteField:
    """Cached constructor: GF(3, 3) is the field with 27 elements."""
    return FiniteField(p, n)


def field_of_order(q: int) -> FiniteField:
    for p in SUPPORTED_CHARACTERISTICS:
        n, r = 0, q
        while r % p == 0:
            r //= p
            n += 1
        if r == 1 and n >= 1:
            return GF(p, n)
    raise FieldError(f"{q} is not a power of 2 or 3")


def embedding(small: FiniteField, big: FiniteField) -> list[int]:
    """Table mapping each element of `small` to its image in `big`.

    The generator X of `small` goes to the smallest root (in integer
    encoding) of small's modulus inside `big`.
    """
    if small.p != big.p or big.n % small.n:
        raise FieldError(f"{small} does not embed in {big}")
    if small.n == 1:
        return list(range(small.order))
    mod = small.modulus
    root = None
    for a in range(big.order):
        acc = 0
        for c in reversed(mod):
            acc = big.add(big.mul(acc, a), c)
        if acc == 0:
            root = a
            break
    assert root is not None
    powers = [big.pow(root, i) for i in range(small.n)]
    table = []
    for a in range(small.order):
        img = 0
        for c, pw in zip(small.coeffs(a), powers):
            for _ in range(c):
                img = big.add(img, pw)
        table.append(img)
    return table


class LinearizedSolver:
    """Solves L(y) = c for a GF(p)-linear map L on a fixed field.

    The map is turned into an n x n matrix over GF(p) once; each solve is a
    reduction of the right-hand side followed by back substitution, and the
    full solution set is a particular solution plus the kernel.
    """

    def __init__(self, field: FiniteField, fn):
        self.field = field
        p, n = field.p, field.n
        mat = field.linear_map_matrix(fn)
        aug = np.concatenate([mat, np.eye(n, dtype=np.int64)], axis=1) % p
        # row reduce [M | I]: rows of the right block record the operations
        pivots = []
        row = 0
        for col in range(n):
            piv = next((r for r in range(row, n) if aug[r, col] % p), None)
            if piv is None:
                continue
            aug[[row, piv]] = aug[[piv, row]]
            inv = pow(int(aug[row, col]), -1, p)
            aug[row] = aug[row] * inv % p
            for r in range(n):
                if r != row and aug[r, col]:
                    aug[r] = (aug[r] - aug[r, col] * aug[row]) % p
            pivots.append(col)
            row += 1
        self._rref = aug[:, :n]
        self._ops = aug[:, n:]
        self._pivots = pivots
        self.rank = len(pivots)
        free = [c for c in range(n) if c not in pivots]
        kernel = []
        for f in free:
            v = np.zeros(n, dtype=np.int64)
            v[f] = 1
            for i, pc in enumerate(pivots):
                v[pc] = (-self._rref[i, f]) % p
            kernel.append(v)
        self._kernel_basis = kernel
        kern = [0]
        for v in kernel:
            e = field.from_coeffs(list(v))
            new = []
            for k in kern:
                acc = k
                for _ in range(p):
                    new.append(acc)
                    acc = field.add(acc, e)
            kern = new
        self.kernel = sorted(set(kern))

    def particular(self, c: int) -> int | None:
        p = self.field.p
        rhs = self._ops @ np.array(self.field.coeffs(c), dtype=np.int64) % p
        if np.any(rhs[self.rank:] % p):
            return None
        y = np.zeros(self.field.n, dtype=np.int64)
        for i, pc in enumerate(self._pivots):
            y[pc] = rhs[i]
        return self.field.from_coeffs(list(y))

    def solve(self, c: int) -> list[int]:
        y0 = self.particular(c)
        if y0 is None:
            return []
        return [self.field.add(y0, k) for k in self.kernel]


@lru_cache(maxsize=None)
def artin_schreier_solver(field: FiniteField, q: int) -> LinearizedSolver:
    """Solver for y^q - y = c in `field`."""
    return LinearizedSolver(field, lambda y: field.sub(field.pow(y, q), y))


def solve_artin_schreier(field: FiniteField, c: int, q: int) -> list[int]:
    """All y in `field` with y^q - y = c (empty list when none exist)."""
    return artin_schreier_solver(field, q).solve(c)


class FieldArray:
    """A numpy vector of elements of one field, with elementwise operators."""

    __slots__ = ("field", "values")

    def __init__(self, field: FiniteField, values):
        self.field = field
        self.values = np.asarray(values, dtype=np.int64)

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, FieldArray):
            return other.values
        if isinstance(other, FieldElement):
            return np.full_like(self.values, other.value)
        if isinstance(other, int):
            return np.full_like(self.values, self.field.from_int(other))
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        return FieldArray(self.field, self.field.add_arr(self.values, self._coerce(other)))

    __radd__ = __add__

    def __neg__(self):
        return FieldArray(self.field, self.field.neg_arr(self.values))

    def __sub__(self, other):
        return self + (-FieldArray(self.field, self._coerce(other)))

    def __rsub__(self, other):
        return FieldArray(self.field, self._coerce(other)) - self

    def __mul__(self, other):
        return FieldArray(self.field, self.field.mul_arr(self.values, self._coerce(other)))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return FieldArray(self.field, self.field.pow_arr(self.values, e))

    def __len__(self) -> int:
        return len(self.values)

    def __repr__(self) -> str:
        return f"FieldArray({self.field}, {self.values!r})"
