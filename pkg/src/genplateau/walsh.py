"""Generalized Walsh transforms and plateau classification.

For f: V_n -> Z_{p^k} the transform is

    W_f(a) = sum_x zeta^f(x) * zeta_p^(-<a, x>),   zeta = zeta_{p^k}.

Multiplying by a power of zeta_p cyclically shifts exponent counts by a
multiple of p^(k-1), so the exponent residue mod p^(k-1) never changes.  The
fast transform therefore runs p^(k-1) independent radix-p transforms on
integer arrays of shape (p,)*n + (p,), one stage per coordinate.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .cyclotomic import CycInt, fold, lift, match_polar, norm_sq_many, phi, times_conj_many
from .errors import InconsistentSpectrum, NotPlateaued, PreconditionError
from .space import SpaceDesc

MU_LABELS = {0: "+1", 1: "+i", 2: "-1", 3: "-i"}


@dataclass(frozen=True, eq=False)
class GenFunction:
    """A total map V_n -> Z_{p^k} stored as a table in index order."""

    space: SpaceDesc
    k: int
    table: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        t = np.asarray(self.table, dtype=np.int64).reshape(-1)
        if t.shape[0] != self.space.size:
            raise PreconditionError(f"table has {t.shape[0]} entries, domain has {self.space.size}")
        if self.k < 1:
            raise PreconditionError("level k must be at least 1")
        t = t % self.modulus
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def p(self) -> int:
        return self.space.p

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def modulus(self) -> int:
        return self.space.p**self.k

    @classmethod
    def from_callable(cls, space: SpaceDesc, k: int, fn: Callable, **meta) -> GenFunction:
        """Tabulate ``fn`` called on the variable arrays of ``space``."""
        return cls(space, k, space.tabulate(fn, space.p**k), dict(meta))

    def __call__(self, pt) -> int:
        return int(self.table[self.space.lex_index(pt)])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GenFunction)
            and self.space == other.space
            and self.k == other.k
            and np.array_equal(self.table, other.table)
        )

    __hash__ = None

    def with_table(self, table, k: int | None = None) -> GenFunction:
        return GenFunction(self.space, self.k if k is None else k, table, dict(self.meta))

    def __add__(self, other: GenFunction) -> GenFunction:
        return self.with_table(self.table + other.table)

    def __sub__(self, other: GenFunction) -> GenFunction:
        return self.with_table(self.table - other.table)

    def scaled(self, c: int) -> GenFunction:
        return self.with_table(self.table * int(c))

    def to_dict(self) -> dict:
        out = {"p": self.p, "k": self.k, "space": self.space.to_dict(), "table": self.table.tolist()}
        if self.meta:
            out["meta"] = self.meta
        return out

    @classmethod
    def from_dict(cls, d: dict) -> GenFunction:
        space = SpaceDesc.from_dict(d["space"])
        if int(d.get("p", space.p)) != space.p:
            raise PreconditionError("p disagrees with the space descriptor")
        return cls(space, int(d["k"]), np.array(d["table"], dtype=np.int64), dict(d.get("meta", {})))

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass(frozen=True, eq=False)
class WalshSpectrum:
    """W_f(a) for every a, as canonical cyclotomic coordinates of shape (N, phi)."""

    space: SpaceDesc
    k: int
    values: np.ndarray

    @property
    def p(self) -> int:
        return self.space.p

    def __getitem__(self, idx) -> CycInt:
        if not isinstance(idx, (int, np.integer)):
            idx = self.space.lex_index(idx)
        return CycInt(self.p, self.k, tuple(int(c) for c in self.values[idx]))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WalshSpectrum)
            and self.space == other.space
            and self.k == other.k
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def nonzero(self) -> np.ndarray:
        return np.nonzero(np.any(self.values != 0, axis=1))[0]

    def norms(self, idx=None) -> np.ndarray:
        vals = self.values if idx is None else self.values[idx]
        return norm_sq_many(vals, self.p, self.k)

    def parseval_sum(self) -> CycInt:
        """sum_a W(a) * conj(W(a)), exactly; equals p^(2n) for every f."""
        tot = times_conj_many(self.values, self.p, self.k).sum(axis=0)
        return CycInt(self.p, self.k, tuple(int(c) for c in tot))

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "space": self.space.to_dict(),
            "values": [[int(c) for c in row] for row in self.values],
        }

    @classmethod
    def from_dict(cls, d: dict) -> WalshSpectrum:
        space = SpaceDesc.from_dict(d["space"])
        vals = np.array(d["values"], dtype=object)
        try:
            vals = vals.astype(np.int64)
        except OverflowError:
            pass
        return cls(space, int(d["k"]), vals.reshape(space.size, phi(space.p, int(d["k"]))))


# -- transforms ----------------------------------------------------------------------


def _pick_dtype(bound: int):
    if bound < 2**31:
        return np.int32
    if bound < 2**62:
        return np.int64
    return object


def _radix_stages(A: np.ndarray, p: int, n: int, sign: int, threads: int) -> np.ndarray:
    """In-place style radix-p transform over the first n axes of A (shape (p,)*n + (p,)).

    out[.., a_j, .., i] = sum_{x_j} A[.., x_j, .., (i - sign * a_j * x_j) mod p]
    """
    ar = np.arange(p)
    # rolled[c] picks the exponent index shifted by c: B[..., i] = A[..., (i - c) % p]
    perms = [(ar - c) % p for c in range(p)]
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        for j in range(n):
            X = np.moveaxis(A, j, 0)

            def one(a, X=X):
                acc = X[0].copy()
                for x in range(1, p):
                    acc += X[x][..., perms[(sign * a * x) % p]]
                return acc

            outs = list(pool.map(one, range(p))) if pool else [one(a) for a in range(p)]
            A = np.moveaxis(np.stack(outs, axis=0), 0, j)
    finally:
        if pool:
            pool.shutdown()
    return A


def dot_transform_counts(counts: np.ndarray, p: int, k: int, n: int, sign: int = -1, threads: int = 1) -> np.ndarray:
    """sum_x counts[x] * zeta_p^(sign <a, x>) with the plain dot product.

    ``counts`` has shape (p^n, p^k) (exponent counts per point); the result has
    the same shape, still as exponent counts (not folded).
    """
    q1 = p ** (k - 1)
    N = p**n
    bound = N * int(np.max(np.abs(counts))) if counts.size else 0
    dt = _pick_dtype(bound)
    out = np.empty(counts.shape, dtype=dt)
    for r in range(q1):
        A = np.ascontiguousarray(counts[:, r::q1].astype(dt)).reshape((p,) * n + (p,))
        out[:, r::q1] = _radix_stages(A, p, n, sign, threads).reshape(N, p)
    return out


def walsh_transform(f: GenFunction, method: str = "fast", threads: int = 1) -> WalshSpectrum:
    if method == "naive":
        return _walsh_naive(f)
    if method != "fast":
        raise PreconditionError(f"unknown transform method {method!r}")
    p, k, space = f.p, f.k, f.space
    q1 = p ** (k - 1)
    N = space.size
    dt = _pick_dtype(N)
    vals = np.empty((N, phi(p, k)), dtype=dt)
    for r in range(q1):
        onehot = np.zeros((N, p), dtype=dt)
        sel = np.nonzero(f.table % q1 == r)[0]
        onehot[sel, f.table[sel] // q1] = 1
        D = _radix_stages(onehot.reshape(space.shape + (p,)), p, space.n, -1, threads).reshape(N, p)
        vals[:, r::q1] = D[:, : p - 1] - D[:, p - 1 : p]
    if not space.is_dot:
        vals = vals[space.gram_perm]
    return WalshSpectrum(space, k, vals.astype(np.int64) if dt is not object else vals)


def _walsh_naive(f: GenFunction, chunk: int = 256) -> WalshSpectrum:
    """Direct double sum with field-arithmetic inner products (test oracle)."""
    p, k, space = f.p, f.k, f.space
    q, q1 = p**k, p ** (k - 1)
    N = space.size
    pts = space.coords()
    vals = np.zeros((N, phi(p, k)), dtype=np.int64)
    for start in range(0, N, chunk):
        a = pts[start : start + chunk]
        ip = space.inner_product_many(a, pts)
        ex = (f.table[None, :] - q1 * ip) % q
        counts = np.stack([np.bincount(row, minlength=q) for row in ex])
        vals[start : start + chunk] = fold(counts, p, k)
    return WalshSpectrum(space, k, vals)


def inverse_walsh(spec: WalshSpectrum, k: int | None = None, threads: int = 1) -> GenFunction:
    """Recover f from its spectrum; fails with the first point whose value is not a root of unity."""
    k = spec.k if k is None else k
    if k != spec.k:
        raise PreconditionError("level differs from the spectrum's level")
    space, p = spec.space, spec.p
    vals = spec.values
    if not space.is_dot:
        scattered = np.empty_like(vals)
        scattered[space.gram_perm] = vals
        vals = scattered
    counts = dot_transform_counts(lift(vals, p, k), p, k, space.n, sign=+1, threads=threads)
    canon = fold(counts, p, k)
    N = space.size
    if canon.dtype == object:
        bad = np.array([any(int(c) % N for c in row) for row in canon], dtype=bool)
    else:
        bad = np.any(canon % N != 0, axis=1)
    if bad.any():
        x = int(np.nonzero(bad)[0][0])
        raise InconsistentSpectrum("sum is not divisible by p^n", witness=list(space.lex_elem(x)))
    unit = canon // N
    ok, delta, t = match_polar(unit if unit.dtype != object else unit.astype(np.int64), p, k, 0)
    good = ok & (delta == 1)
    if not good.all():
        x = int(np.nonzero(~good)[0][0])
        raise InconsistentSpectrum("value is not a root of unity", witness=list(space.lex_elem(x)))
    return GenFunction(space, k, t)


# -- classification -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PlateauReport:
    """Result of :func:`classify`.

    ``support`` holds sorted indices; ``dual``, ``mu`` and ``delta`` are aligned
    with it.  ``mu`` is stored as a power of i (see ``MU_LABELS``).  For p = 2
    with n + s odd the magnitudes are checked but no dual exists, so
    ``dual``/``mu`` are None and regularity is "n/a".
    """

    space: SpaceDesc
    k: int
    s: int | None
    support: np.ndarray
    dual: np.ndarray | None
    mu: np.ndarray | None
    delta: np.ndarray | None
    half: bool
    regularity: str
    balanced: bool
    spectrum: WalshSpectrum | None = None

    @property
    def plateaued(self) -> bool:
        return self.s is not None

    @property
    def bent(self) -> bool:
        return self.s == 0

    def support_coords(self) -> np.ndarray:
        return self.space.unindex(self.support)

    def mu_labels(self) -> list[str]:
        return [MU_LABELS[int(e)] for e in self.mu] if self.mu is not None else []

    def mu_constant(self) -> int | None:
        if self.mu is None or len(set(self.mu.tolist())) != 1:
            return None
        return int(self.mu[0])

    def dual_map(self) -> dict[int, int]:
        return dict(zip(self.support.tolist(), self.dual.tolist())) if self.dual is not None else {}

    def dual_function(self) -> GenFunction:
        """f* as a GenFunction; only total when f is bent."""
        if self.s != 0 or self.dual is None:
            raise PreconditionError("dual is a total function only for bent input with a polar form")
        tab = np.zeros(self.space.size, dtype=np.int64)
        tab[self.support] = self.dual
        return GenFunction(self.space, self.k, tab)

    def mu_function(self) -> np.ndarray:
        """mu as i-powers over all of V_n (bent input only)."""
        if self.s != 0 or self.mu is None:
            raise PreconditionError("mu is a total function only for bent input")
        out = np.zeros(self.space.size, dtype=np.int64)
        out[self.support] = self.mu
        return out

    def is_affine_support(self) -> bool:
        return is_affine_set(self.support_coords(), self.space.p)

    def to_dict(self, full: bool = False) -> dict:
        out = {
            "s": self.s,
            "plateaued": self.plateaued,
            "support_size": int(len(self.support)),
            "regularity": self.regularity,
            "balanced": self.balanced,
            "balanced_meaning": "W(0) = 0" if self.k == 1 else "zero correlation with constants",
        }
        if self.mu is not None:
            counts = {MU_LABELS[e]: int(np.sum(self.mu == e)) for e in range(4) if np.any(self.mu == e)}
            out["mu_counts"] = counts
        if full:
            out["support"] = self.support.tolist()
            out["dual"] = None if self.dual is None else self.dual.tolist()
            out["mu"] = self.mu_labels()
        return out

    def require_plateaued(self, s: int | None = None) -> PlateauReport:
        if s is not None and self.s != s:
            raise NotPlateaued(f"expected s = {s}, got {self.s}")
        return self


def _log_p(x: int, p: int) -> int | None:
    e = 0
    while x > 1 and x % p == 0:
        x //= p
        e += 1
    return e if x == 1 else None


def classify(f: GenFunction, spectrum: WalshSpectrum | None = None, threads: int = 1) -> PlateauReport:
    """Plateau order, support, dual and mu of f; raises NotPlateaued otherwise."""
    spec = walsh_transform(f, threads=threads) if spectrum is None else spectrum
    p, k, n = f.p, f.k, f.n
    support = spec.nonzero()
    e = _log_p(len(support), p)
    if e is None or e > n:
        raise NotPlateaued(f"support size {len(support)} is not a power of {p}", support_size=len(support))
    s = n - e
    balanced = not bool(np.any(spec.values[0] != 0))
    vals = spec.values[support]
    if p == 2 and (n + s) % 2:
        norms = norm_sq_many(vals, p, k)
        bad = np.nonzero(norms != 2 ** (n + s))[0]
        if bad.size:
            raise NotPlateaued("mixed magnitudes", witness=[list(spec.space.lex_elem(int(support[i]))) for i in bad[:4]])
        return PlateauReport(f.space, k, s, support, None, None, None, True, "n/a", balanced, spec)
    if vals.dtype == object:
        vals = vals.astype(np.int64)
    ok, delta, t = match_polar(vals, p, k, n + s)
    if not ok.all():
        bad = np.nonzero(~ok)[0][:4]
        raise NotPlateaued(
            "Walsh values do not all have magnitude p^((n+s)/2)",
            witness=[list(spec.space.lex_elem(int(support[i]))) for i in bad],
            s_from_support=s,
        )
    half = bool((n + s) % 2)
    mu = np.where(delta == 1, 0, 2) + (1 if half and p % 4 == 3 else 0)
    mu = mu % 4
    if np.all(mu == 0):
        reg = "regular"
    elif np.all(mu == mu[0]):
        reg = "weakly_regular"
    else:
        reg = "non_weakly_regular"
    return PlateauReport(f.space, k, s, support, t, mu, delta, half, reg, balanced, spec)


def is_affine_set(pts: np.ndarray, p: int) -> bool:
    """True iff the rows form a coset of an F_p-subspace."""
    from .field import rank_mod_p

    pts = np.asarray(pts, dtype=np.int64)
    size = pts.shape[0]
    d = _log_p(size, p)
    if d is None:
        return False
    diffs = (pts - pts[0]) % p
    return rank_mod_p(diffs, p) == d


def disjoint_spectra(fs: list[GenFunction], threads: int = 1) -> bool:
    if not fs:
        return True
    if any(f.space != fs[0].space or f.k != fs[0].k for f in fs):
        raise PreconditionError("functions must share domain and level")
    seen = np.zeros(fs[0].space.size, dtype=bool)
    for f in fs:
        sup = np.any(walsh_transform(f, threads=threads).values != 0, axis=1)
        if np.any(seen & sup):
            return False
        seen |= sup
    return True


def digit_decompose(f: GenFunction) -> list[GenFunction]:
    """Base-p digits f_0, ..., f_{k-1} with f = sum p^(k-1-i) f_i (f_0 most significant)."""
    p, k = f.p, f.k
    return [GenFunction(f.space, 1, (f.table // p ** (k - 1 - i)) % p) for i in range(k)]


def digit_compose(digits: list[GenFunction]) -> GenFunction:
    p, k = digits[0].p, len(digits)
    total = sum(d.table.astype(np.int64) * p ** (k - 1 - i) for i, d in enumerate(digits))
    return GenFunction(digits[0].space, k, total)
