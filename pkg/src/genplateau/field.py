"""Finite fields GF(p^m) in a polynomial basis.

Elements are encoded as integers ``code = c_0 + c_1 p + ... + c_{m-1} p^{m-1}``
where ``c_i`` is the coefficient of ``z^i`` and ``z`` is a root of the
modulus.  Written high degree first, ``(c_{m-1}, ..., c_0)`` is exactly the
lexicographic position of the element, so the code doubles as the
lexicographic index used for truth tables.

All bulk operations accept numpy integer arrays of codes and are backed by
exp/log tables; the scalar :class:`FieldElem` wrapper is for readable
one-off arithmetic and tests.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ContextMismatch, NotInvertible, PreconditionError

# Moduli fixed by the worked-example corpus; used when an example names a
# primitive element of the same field without giving a modulus.
CORPUS_MODULI = {
    (3, 4): (1, 2, 0, 0, 2),  # xi^4 + 2 xi^3 + 2
}
# Conway polynomials for every other small field.
CONWAY_MODULI = {
    (2, 1): (1, 1),
    (3, 1): (1, 1),
    (5, 1): (1, 3),
    (7, 1): (1, 4),
    (3, 3): (1, 0, 2, 1),
    (2, 3): (1, 0, 1, 1),
    (5, 2): (1, 4, 2),
    (7, 2): (1, 6, 3),
}


class ProvenanceWarning(UserWarning):
    """A parameter the source leaves open was filled in by a default."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _poly_rem(num: list[int], den: list[int], p: int) -> list[int]:
    """Remainder of low-to-high coefficient lists over F_p (den monic)."""
    num = list(num)
    dd = len(den) - 1
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] % p
        if c:
            for j in range(dd + 1):
                num[i - dd + j] = (num[i - dd + j] - c * den[j]) % p
    rem = [c % p for c in num[:dd]]
    return rem + [0] * (dd - len(rem))


def is_irreducible(modulus_low: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= m/2."""
    m = len(modulus_low) - 1
    if m <= 1:
        return m == 1
    if modulus_low[0] % p == 0:
        return False
    for d in range(1, m // 2 + 1):
        for tail in range(p**d):
            cand = [(tail // p**i) % p for i in range(d)] + [1]
            if not any(_poly_rem(modulus_low, cand, p)):
                return False
    return True


@dataclass(frozen=True)
class FieldCtx:
    """GF(p^m) with a fixed monic irreducible modulus.

    ``modulus`` lists coefficients from the leading term down,
    ``(1, c_{m-1}, ..., c_0)``.  ``generator`` (optional) is the code of an
    element declared primitive; it is checked to have order p^m - 1.
    """

    p: int
    m: int
    modulus: tuple[int, ...]
    generator: int | None = None
    note: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "modulus", tuple(int(c) % self.p for c in self.modulus))
        if not is_prime(self.p):
            raise PreconditionError(f"{self.p} is not prime")
        if self.m < 1 or len(self.modulus) != self.m + 1 or self.modulus[0] != 1:
            raise PreconditionError("modulus must be monic of degree m", modulus=list(self.modulus))
        if not is_irreducible(list(reversed(self.modulus)), self.p):
            raise PreconditionError("modulus is reducible over F_p", modulus=list(self.modulus))
        if self.generator is not None:
            if not 0 < self.generator < self.q or self.order(self.generator) != self.q - 1:
                raise PreconditionError("declared generator is not primitive", witness=self.generator)

    # -- construction helpers -------------------------------------------------

    @classmethod
    def prime(cls, p: int) -> FieldCtx:
        return cls(p, 1, (1, 0))

    @classmethod
    def default(cls, p: int, m: int) -> FieldCtx:
        """Field with a default modulus, emitting a :class:`ProvenanceWarning`."""
        if (p, m) in CORPUS_MODULI:
            mod, note = CORPUS_MODULI[(p, m)], "modulus reused from another example of the same field"
        elif (p, m) in CONWAY_MODULI:
            mod, note = CONWAY_MODULI[(p, m)], "Conway polynomial"
        else:
            mod, note = _first_primitive(p, m), "lexicographically first primitive polynomial"
        warnings.warn(f"GF({p}^{m}): no modulus given, using {list(mod)} ({note})", ProvenanceWarning, stacklevel=2)
        return cls(p, m, mod, note=note)

    # -- sizes and encoding ----------------------------------------------------

    @property
    def q(self) -> int:
        return self.p**self.m

    def elem(self, coeffs) -> FieldElem:
        """Element from coordinates listed high degree first."""
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) != self.m or any(not 0 <= c < self.p for c in coeffs):
            raise PreconditionError("bad coordinate vector", witness=coeffs)
        code = 0
        for c in coeffs:
            code = code * self.p + c
        return FieldElem(self, code)

    def __call__(self, code: int) -> FieldElem:
        return FieldElem(self, int(code) % self.q)

    @property
    def z(self) -> FieldElem:
        """The class of the indeterminate (a root of the modulus)."""
        if self.m == 1:
            return self(-self.modulus[1] % self.p)
        return self(self.p)

    def digits(self, codes) -> np.ndarray:
        """Coefficients low degree first, shape ``codes.shape + (m,)``."""
        codes = np.asarray(codes, dtype=np.int64)
        return (codes[..., None] // self._powers) % self.p

    def from_digits(self, digs) -> np.ndarray:
        return (np.asarray(digs, dtype=np.int64) % self.p) @ self._powers

    @cached_property
    def _powers(self) -> np.ndarray:
        return self.p ** np.arange(self.m, dtype=np.int64)

    # -- scalar polynomial multiplication (table construction only) ------------

    def _mul_slow(self, a: int, b: int) -> int:
        p = self.p
        da = [(a // p**i) % p for i in range(self.m)]
        db = [(b // p**i) % p for i in range(self.m)]
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        rem = _poly_rem(prod, list(reversed(self.modulus)), p)
        return sum(c * p**i for i, c in enumerate(rem))

    def _pow_slow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._mul_slow(r, a)
            a = self._mul_slow(a, a)
            e >>= 1
        return r

    def order(self, a: int) -> int:
        if a % self.q == 0:
            raise NotInvertible("zero has no multiplicative order")
        n = self.q - 1
        for r in _prime_factors(self.q - 1):
            while n % r == 0 and self._pow_slow(a, n // r) == 1:
                n //= r
        return n

    @cached_property
    def primitive(self) -> int:
        """Code of the declared generator, else of the smallest primitive element."""
        if self.generator is not None:
            return self.generator
        for a in range(1, self.q):
            if self.order(a) == self.q - 1:
                return a
        raise AssertionError("no primitive element")  # unreachable for a field

    @cached_property
    def _exp_log(self) -> tuple[np.ndarray, np.ndarray]:
        q, g = self.q, self.primitive
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._mul_slow(x, g)
        return exp, log

    # -- bulk arithmetic on code arrays ---------------------------------------

    def add(self, a, b):
        return self.from_digits(self.digits(a) + self.digits(b))

    def sub(self, a, b):
        return self.from_digits(self.digits(a) - self.digits(b))

    def neg(self, a):
        return self.from_digits(-self.digits(a))

    def smul(self, c, a):
        """Multiply by prime-field scalars ``c``."""
        return self.from_digits(np.asarray(c, dtype=np.int64)[..., None] * self.digits(a))

    def mul(self, a, b):
        exp, log = self._exp_log
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = exp[(log[a] + log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def pow(self, a, e: int):
        """``a**e`` with the convention ``0**e = 0`` for ``e > 0``."""
        if e < 0:
            return self.pow(self.inv(a), -e)
        exp, log = self._exp_log
        a = np.asarray(a, dtype=np.int64)
        out = exp[(log[a] * e) % (self.q - 1)]
        if e == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, out)

    def inv(self, a):
        exp, log = self._exp_log
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise NotInvertible("inverse of zero")
        return exp[(-log[a]) % (self.q - 1)]

    @cached_property
    def trace_table(self) -> np.ndarray:
        """Absolute trace of every element, indexed by code."""
        codes = np.arange(self.q, dtype=np.int64)
        acc = np.zeros(self.q, dtype=np.int64)
        x = codes
        for _ in range(self.m):
            acc = self.add(acc, x)
            x = self.pow(x, self.p)
        if np.any(acc >= self.p):
            raise AssertionError("trace left the prime field")
        return acc

    def trace(self, a):
        return self.trace_table[np.asarray(a, dtype=np.int64)]

    def power_of_primitive(self, e: int) -> int:
        return int(self._exp_log[0][e % (self.q - 1)])

    def to_dict(self) -> dict:
        out = {"p": self.p, "m": self.m, "modulus": list(self.modulus)}
        if self.generator is not None:
            out["generator"] = self(self.generator).coeffs
        return out

    @classmethod
    def from_dict(cls, d: dict) -> FieldCtx:
        ctx = cls(int(d["p"]), int(d["m"]), tuple(d["modulus"]))
        if d.get("generator") is not None:
            ctx = cls(ctx.p, ctx.m, ctx.modulus, ctx.elem(d["generator"]).code)
        return ctx


def _first_primitive(p: int, m: int) -> tuple[int, ...]:
    for tail in range(p**m):
        low = [(tail // p**i) % p for i in range(m)] + [1]
        if low[0] and is_irreducible(low, p):
            ctx = FieldCtx(p, m, tuple(reversed(low)))
            if ctx.order(ctx.z.code) == ctx.q - 1:
                return ctx.modulus
    raise AssertionError("no primitive polynomial found")


@dataclass(frozen=True)
class FieldElem:
    """A single element of ``ctx``; ``coeffs`` lists coordinates high degree first."""

    ctx: FieldCtx
    code: int

    @property
    def coeffs(self) -> list[int]:
        p, m = self.ctx.p, self.ctx.m
        return [(self.code // p ** (m - 1 - i)) % p for i in range(m)]

    def _other(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.ctx != self.ctx:
                raise ContextMismatch("operands live in different fields")
            return other.code
        return int(self.ctx.from_digits([int(other)] + [0] * (self.ctx.m - 1)))

    def __add__(self, other):
        return FieldElem(self.ctx, int(self.ctx.add(self.code, self._other(other))))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.ctx, int(self.ctx.sub(self.code, self._other(other))))

    def __rsub__(self, other):
        return FieldElem(self.ctx, int(self.ctx.sub(self._other(other), self.code)))

    def __neg__(self):
        return FieldElem(self.ctx, int(self.ctx.neg(self.code)))

    def __mul__(self, other):
        return FieldElem(self.ctx, int(self.ctx.mul(self.code, self._other(other))))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * FieldElem(self.ctx, self._other(other)).inverse()

    def __pow__(self, e: int):
        return FieldElem(self.ctx, int(self.ctx.pow(self.code, int(e))))

    def inverse(self) -> FieldElem:
        return FieldElem(self.ctx, int(self.ctx.inv(self.code)))

    def trace(self) -> int:
        return int(self.ctx.trace(self.code))

    def is_zero(self) -> bool:
        return self.code == 0

    def __repr__(self) -> str:
        return f"FieldElem(GF({self.ctx.p}^{self.ctx.m}), {self.coeffs})"


def trace(ctx: FieldCtx, x: FieldElem) -> int:
    if x.ctx != ctx:
        raise ContextMismatch("element does not belong to this field")
    return x.trace()


def field_arith(ctx: FieldCtx, op: str, *args) -> FieldElem:
    """Dispatch ``mul``, ``inv``, ``pow``, ``add``, ``sub`` on scalar elements."""
    for a in args:
        if isinstance(a, FieldElem) and a.ctx != ctx:
            raise ContextMismatch("operand from another field")
    if op == "mul":
        return args[0] * args[1]
    if op == "inv":
        return args[0].inverse()
    if op == "pow":
        return args[0] ** args[1]
    if op == "add":
        return args[0] + args[1]
    if op == "sub":
        return args[0] - args[1]
    raise PreconditionError(f"unknown field operation {op!r}")


def linearly_independent(ctx: FieldCtx, elems) -> bool:
    """F_p-linear independence of field elements (given as codes or FieldElem)."""
    codes = [e.code if isinstance(e, FieldElem) else int(e) for e in elems]
    return rank_mod_p(ctx.digits(np.array(codes, dtype=np.int64)).reshape(len(codes), ctx.m), ctx.p) == len(codes)


def rank_mod_p(mat, p: int) -> int:
    """Rank of an integer matrix over F_p (Gaussian elimination)."""
    a = np.array(mat, dtype=np.int64) % p
    if a.size == 0:
        return 0
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        piv = np.nonzero(a[r:, c])[0]
        if piv.size == 0:
            continue
        i = r + piv[0]
        a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, c], a[r])) % p
        r += 1
        if r == rows:
            break
    return r


def solve_mod_p(mat, rhs, p: int) -> np.ndarray:
    """Inverse-based solve of ``x @ mat = rhs`` for square invertible ``mat`` over F_p."""
    return (np.asarray(rhs, dtype=np.int64) @ inv_mod_p(mat, p)) % p


def inv_mod_p(mat, p: int) -> np.ndarray:
    a = np.array(mat, dtype=np.int64) % p
    n = a.shape[0]
    if a.shape != (n, n):
        raise PreconditionError("matrix is not square")
    aug = np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1)
    for c in range(n):
        piv = np.nonzero(aug[c:, c])[0]
        if piv.size == 0:
            raise NotInvertible("matrix is singular over F_p")
        i = c + piv[0]
        aug[[c, i]] = aug[[i, c]]
        aug[c] = (aug[c] * pow(int(aug[c, c]), -1, p)) % p
        for r in range(n):
            if r != c and aug[r, c]:
                aug[r] = (aug[r] - aug[r, c] * aug[c]) % p
    return aug[:, n:]
