"""Exact arithmetic in Z[zeta] with zeta = exp(2 pi i / p^k).

Canonical form is the power basis zeta^0, ..., zeta^(phi-1) with
phi = p^(k-1) (p-1).  Internally a value is often carried as a length-p^k
vector of exponent counts (the group ring of Z_{p^k}); :func:`fold` reduces
that to canonical coordinates using

    zeta^((p-1) p^(k-1) + r) = - sum_{i<p-1} zeta^(i p^(k-1) + r).

Units of the form delta * G^half * zeta^t, with G the quadratic Gauss sum,
are the building blocks of every plateaued Walsh value.  Square roots of -1
are tracked as powers of i in Z_4; with the Gauss sum convention used here
G = sqrt(p) for p = 1 (mod 4) and G = i sqrt(p) for p = 3 (mod 4).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ContextMismatch, NonScalarNorm, NotPlateauForm, PreconditionError

UNITY, MINUS_ONE, OTHER = "Unity", "MinusOne", "Other"


def phi(p: int, k: int) -> int:
    return p ** (k - 1) * (p - 1)


def fold(counts: np.ndarray, p: int, k: int) -> np.ndarray:
    """Reduce exponent counts (last axis length p^k) to canonical coordinates."""
    counts = np.asarray(counts)
    q1 = p ** (k - 1)
    c = counts.reshape(counts.shape[:-1] + (p, q1))
    out = c[..., : p - 1, :] - c[..., p - 1 : p, :]
    return out.reshape(counts.shape[:-1] + ((p - 1) * q1,))


def lift(coeffs: np.ndarray, p: int, k: int) -> np.ndarray:
    """Canonical coordinates padded to exponent counts of length p^k."""
    coeffs = np.asarray(coeffs)
    pad = np.zeros(coeffs.shape[:-1] + (p ** (k - 1),), dtype=coeffs.dtype)
    return np.concatenate([coeffs, pad], axis=-1)


@dataclass(frozen=True)
class CycInt:
    p: int
    k: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != phi(self.p, self.k):
            raise PreconditionError("coefficient vector has the wrong length")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    # -- constructors -----------------------------------------------------------

    @classmethod
    def from_counts(cls, counts, p: int, k: int) -> CycInt:
        counts = [int(c) for c in counts]
        q1 = p ** (k - 1)
        last = counts[(p - 1) * q1 :]
        return cls(p, k, tuple(counts[j] - last[j % q1] for j in range((p - 1) * q1)))

    @classmethod
    def integer(cls, c: int, p: int, k: int) -> CycInt:
        return cls(p, k, (int(c),) + (0,) * (phi(p, k) - 1))

    @classmethod
    def zero(cls, p: int, k: int) -> CycInt:
        return cls.integer(0, p, k)

    @classmethod
    def root_power(cls, j: int, p: int, k: int) -> CycInt:
        """Canonical form of zeta^j."""
        counts = [0] * p**k
        counts[j % p**k] = 1
        return cls.from_counts(counts, p, k)

    @property
    def q(self) -> int:
        return self.p**self.k

    def counts(self) -> list[int]:
        return list(self.coeffs) + [0] * self.p ** (self.k - 1)

    def _check(self, other) -> CycInt:
        if isinstance(other, int):
            return CycInt.integer(other, self.p, self.k)
        if not isinstance(other, CycInt):
            raise TypeError(f"cannot combine CycInt with {type(other).__name__}")
        if (other.p, other.k) != (self.p, self.k):
            raise ContextMismatch("operands live in different cyclotomic rings")
        return other

    # -- ring operations ----------------------------------------------------------

    def __add__(self, other) -> CycInt:
        other = self._check(other)
        return CycInt(self.p, self.k, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> CycInt:
        return CycInt(self.p, self.k, tuple(-a for a in self.coeffs))

    def __sub__(self, other) -> CycInt:
        return self + (-self._check(other))

    def __rsub__(self, other) -> CycInt:
        return self._check(other) - self

    def __mul__(self, other) -> CycInt:
        if isinstance(other, int):
            return CycInt(self.p, self.k, tuple(a * other for a in self.coeffs))
        other = self._check(other)
        q = self.q
        out = [0] * q
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[(i + j) % q] += a * b
        return CycInt.from_counts(out, self.p, self.k)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> CycInt:
        if e < 0:
            raise PreconditionError("negative powers are not defined in the ring")
        out, base = CycInt.integer(1, self.p, self.k), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conj(self) -> CycInt:
        """Complex conjugation zeta^j -> zeta^-j."""
        q = self.q
        out = [0] * q
        for j, a in enumerate(self.coeffs):
            out[-j % q] += a
        return CycInt.from_counts(out, self.p, self.k)

    def times_root(self, j: int) -> CycInt:
        q = self.q
        out = [0] * q
        for i, a in enumerate(self.coeffs):
            out[(i + j) % q] += a
        return CycInt.from_counts(out, self.p, self.k)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def rational(self) -> int | None:
        """The value as an integer when it lies in Z, else None."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def to_complex(self) -> complex:
        """Floating point value, for display only."""
        z = np.exp(2j * np.pi / self.q)
        return complex(sum(c * z**j for j, c in enumerate(self.coeffs)))

    def to_dict(self) -> dict:
        return {"p": self.p, "k": self.k, "coeffs": list(self.coeffs)}

    @classmethod
    def from_dict(cls, d: dict) -> CycInt:
        return cls(int(d["p"]), int(d["k"]), tuple(d["coeffs"]))

    def __repr__(self) -> str:
        terms = [f"{c}*z^{j}" if j else str(c) for j, c in enumerate(self.coeffs) if c]
        return f"CycInt(p={self.p}, k={self.k}: {' + '.join(terms) or '0'})"


def cyc_arith(op: str, *args):
    """Dispatch add, sub, mul, neg, conj, root_power, int_scale."""
    if op == "root_power":
        j, p, k = args
        return CycInt.root_power(j, p, k)
    if op == "add":
        return args[0] + args[1]
    if op == "sub":
        return args[0] - args[1]
    if op == "mul":
        return args[0] * args[1]
    if op == "neg":
        return -args[0]
    if op == "conj":
        return args[0].conj()
    if op == "int_scale":
        return args[0] * int(args[1])
    raise PreconditionError(f"unknown cyclotomic operation {op!r}")


def norm_sq(z: CycInt) -> int:
    """z * conj(z) as an integer; raises NonScalarNorm if it is not rational."""
    prod = z * z.conj()
    val = prod.rational()
    if val is None:
        raise NonScalarNorm("z * conj(z) is not a rational integer", value=prod)
    return val


def gauss_sum(p: int, k: int = 1) -> CycInt:
    """sum_{x in F_p} zeta_p^(x^2) inside Z[zeta_{p^k}]."""
    if p == 2:
        raise PreconditionError("sqrt(2) has no Gauss sum representative here")
    counts = [0] * p**k
    for x in range(p):
        counts[(x * x % p) * p ** (k - 1)] += 1
    return CycInt.from_counts(counts, p, k)


def sqrt_minus_one_power(p: int) -> int:
    """Power of i carried by G / sqrt(p): 0 for p = 1 (mod 4), 1 for p = 3 (mod 4)."""
    return 1 if p % 4 == 3 else 0


@dataclass(frozen=True)
class PolarForm:
    """delta * G^half * p^r * zeta^t."""

    delta: int
    half: bool
    r: int
    t: int

    def value(self, p: int, k: int) -> CycInt:
        z = CycInt.root_power(self.t, p, k) * (self.delta * p**self.r)
        return z * gauss_sum(p, k) if self.half else z

    def mu_power(self, p: int) -> int:
        """mu as a power of i: 0 -> +1, 1 -> +i, 2 -> -1, 3 -> -i."""
        e = 0 if self.delta == 1 else 2
        if self.half:
            e += sqrt_minus_one_power(p)
        return e % 4

    def to_dict(self) -> dict:
        return {"delta": self.delta, "half": self.half, "r": self.r, "t": self.t}


def polar_decompose(z: CycInt, n_plus_s: int) -> PolarForm:
    """Find delta, t with z = delta * G^(n_plus_s mod 2) * p^(n_plus_s // 2) * zeta^t."""
    p, k = z.p, z.k
    r, half = n_plus_s // 2, bool(n_plus_s % 2)
    if p == 2 and half:
        raise NotPlateauForm("odd exponent has no polar form for p = 2", witness=z.to_dict())
    hit = match_polar(np.array([z.coeffs], dtype=object), p, k, n_plus_s)
    if not hit[0][0]:
        raise NotPlateauForm("value is not a signed root of unity times the plateau magnitude", witness=z.to_dict())
    return PolarForm(int(hit[1][0]), half, r, int(hit[2][0]))


def pk_power_unity(z: CycInt, n: int, s: int, imag: bool = False) -> str:
    """Decide whether (p^((s-n)/2) * (i if imag else 1) * z)^(p^k) is 1, -1 or neither."""
    p, k = z.p, z.k
    try:
        mag = norm_sq(z)
    except NonScalarNorm:
        mag = None
    if mag != p ** (n - s):
        raise NotPlateauForm("sum does not have the plateau magnitude", witness=z.to_dict(), norm=mag)
    try:
        pol = polar_decompose(z, n - s)
    except NotPlateauForm:
        return OTHER
    return unit_power_class(pol.delta, pol.half, p, k, imag)


def unit_power_class(delta, half, p: int, k: int, imag=False):
    """Classify (delta * (G/sqrt p)^half * i^imag * zeta^t)^(p^k); array friendly."""
    e = (np.asarray(half, dtype=np.int64) * sqrt_minus_one_power(p) + np.asarray(imag, dtype=np.int64)) % 4
    e = (e * (p**k % 4)) % 4 if p != 2 else e
    sign = np.where(e == 2, -1, 1) * np.asarray(delta)
    out = np.where(e % 2 == 1, OTHER, np.where(sign == 1, UNITY, MINUS_ONE))
    return str(out) if out.ndim == 0 else out


# -- vectorized polar matching ------------------------------------------------------


@lru_cache(maxsize=None)
def unit_table(p: int, k: int, half: bool) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Canonical coordinates of every delta * G^half * zeta^t, with delta and t labels."""
    deltas = (1,) if p == 2 else (1, -1)
    rows, ds, ts = [], [], []
    base = gauss_sum(p, k) if half else CycInt.integer(1, p, k)
    for d in deltas:
        for t in range(p**k):
            rows.append((base.times_root(t) * d).coeffs)
            ds.append(d)
            ts.append(t)
    return np.array(rows, dtype=np.int64), np.array(ds, dtype=np.int64), np.array(ts, dtype=np.int64)


_HASH = np.random.default_rng(20240607).integers(1, 2**62, size=4096, dtype=np.int64)


def match_polar(values: np.ndarray, p: int, k: int, n_plus_s: int):
    """Match rows of canonical coordinates against delta * G^half * p^r * zeta^t.

    Returns ``(ok, delta, t)`` arrays; ``ok`` is False where no unit matches.
    Rows are hashed with a fixed random vector and every hit is verified exactly.
    """
    r, half = n_plus_s // 2, bool(n_plus_s % 2)
    nrows = values.shape[0]
    ok = np.zeros(nrows, dtype=bool)
    delta = np.zeros(nrows, dtype=np.int64)
    t = np.zeros(nrows, dtype=np.int64)
    if p == 2 and half:
        return ok, delta, t
    scale = p**r
    if values.dtype == object:
        divisible = np.array([all(int(c) % scale == 0 for c in row) for row in values], dtype=bool)
        small = np.zeros(values.shape, dtype=np.int64)
        fits = np.array([all(abs(int(c)) // scale < 2**62 for c in row) for row in values], dtype=bool)
        sel = divisible & fits
        if sel.any():
            small[sel] = np.array([[int(c) // scale for c in row] for row in values[sel]], dtype=np.int64)
    else:
        divisible = np.all(values % scale == 0, axis=1)
        small = values // scale
        sel = divisible
    units, ds, ts = unit_table(p, k, half)
    h = _HASH[: values.shape[1]]
    ukeys = units @ h
    order = np.argsort(ukeys)
    skeys = ukeys[order]
    keys = small @ h
    pos = np.clip(np.searchsorted(skeys, keys), 0, len(skeys) - 1)
    cand = order[pos]
    hit = sel & (skeys[pos] == keys)
    hit &= np.all(units[cand] == small, axis=1)
    ok[hit] = True
    delta[hit] = ds[cand[hit]]
    t[hit] = ts[cand[hit]]
    return ok, delta, t


def times_conj_many(values: np.ndarray, p: int, k: int) -> np.ndarray:
    """Row-wise z * conj(z) in canonical coordinates (object dtype, exact)."""
    q = p**k
    a = lift(np.asarray(values, dtype=object), p, k)
    conj = np.concatenate([a[:, :1], a[:, :0:-1]], axis=1)
    acc = np.zeros_like(a)
    for j in range(q):
        acc = acc + a[:, j : j + 1] * np.roll(conj, j, axis=1)
    return fold(acc, p, k)


def norm_sq_many(values: np.ndarray, p: int, k: int) -> np.ndarray:
    """Row-wise z * conj(z); rows with a non-rational product get -1."""
    prod = times_conj_many(values, p, k)
    rational = np.all(prod[:, 1:] == 0, axis=1)
    return np.where(rational, prod[:, 0], -1)
