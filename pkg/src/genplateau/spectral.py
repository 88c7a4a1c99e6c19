"""Designing plateaued functions from their Walsh spectrum.

A design fixes an ordered support w_0, ..., w_{p^(n-s)-1} in F_p^n, a
candidate dual d on V_{n-s} and unit signs mu.  Row i of the support belongs
to the i-th point of V_{n-s} in index order.  The candidate spectrum is

    W(w_i) = mu(v_i) * p^((n+s)/2) * zeta^d(v_i),   W(a) = 0 off the support,

and it is a genuine Walsh spectrum exactly when every normalized sum
p^((s-n)/2) * sum_x mu(x) zeta^(d(x) + p^(k-1) psi_a(x)) is a p^k-th root of
unity; that root of unity is then zeta^f(a).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cyclotomic import UNITY, match_polar, norm_sq_many, unit_power_class
from .errors import NotPlateaued, PreconditionError, VerificationError
from .field import inv_mod_p, rank_mod_p
from .space import SpaceDesc
from .walsh import GenFunction, PlateauReport, _radix_stages, classify, is_affine_set

MU_TAGS = {"+1": 0, "+i": 1, "-1": 2, "-i": 3}


def allowed_mu(p: int, n_plus_s: int) -> set[int]:
    if p == 2:
        return {0}
    if p % 4 == 3 and n_plus_s % 2:
        return {1, 3}
    return {0, 2}


@dataclass(frozen=True, eq=False)
class SpectralDesign:
    n: int
    s: int
    p: int
    k: int
    support: np.ndarray  # (p^(n-s), n), row i is w_i
    d: GenFunction  # on V_{n-s}
    mu: np.ndarray  # powers of i, aligned with d's table
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        sup = np.asarray(self.support, dtype=np.int64) % self.p
        mu = np.broadcast_to(np.asarray(self.mu, dtype=np.int64) % 4, (self.d.space.size,)).copy()
        object.__setattr__(self, "support", sup)
        object.__setattr__(self, "mu", mu)
        if not 0 <= self.s <= self.n:
            raise PreconditionError("need 0 <= s <= n")
        if self.d.space.n != self.n - self.s or self.d.p != self.p or self.d.k != self.k:
            raise PreconditionError("d must map V_{n-s} to Z_{p^k}")
        if sup.shape != (self.p ** (self.n - self.s), self.n):
            raise PreconditionError(f"support must have shape {(self.p ** (self.n - self.s), self.n)}", shape=list(sup.shape))
        if len(np.unique(self.points)) != sup.shape[0]:
            raise PreconditionError("support entries are not distinct", witness=_first_duplicate(sup, self.p))
        if self.p == 2 and (self.n + self.s) % 2:
            raise PreconditionError("p = 2 needs n + s even")
        bad = set(mu.tolist()) - allowed_mu(self.p, self.n + self.s)
        if bad:
            raise PreconditionError("mu takes values outside the admissible units", witness=sorted(bad))

    @property
    def space(self) -> SpaceDesc:
        return SpaceDesc.vector(self.p, self.n)

    @property
    def points(self) -> np.ndarray:
        """Indices of w_0, w_1, ... in F_p^n."""
        return self.space.index(self.support)

    def to_dict(self) -> dict:
        inv = {v: k for k, v in MU_TAGS.items()}
        return {
            "n": self.n,
            "s": self.s,
            "p": self.p,
            "k": self.k,
            "support": self.support.tolist(),
            "d": self.d.to_dict(),
            "mu": [inv[int(e)] for e in self.mu],
        }

    @classmethod
    def from_dict(cls, dct: dict) -> SpectralDesign:
        mu = [MU_TAGS[m] if isinstance(m, str) else int(m) for m in dct["mu"]]
        return cls(dct["n"], dct["s"], dct["p"], dct["k"], np.array(dct["support"]), GenFunction.from_dict(dct["d"]), np.array(mu))


def _first_duplicate(rows: np.ndarray, p: int):
    seen = {}
    for i, row in enumerate(map(tuple, rows.tolist())):
        if row in seen:
            return [seen[row], i]
        seen[row] = i
    return None


# -- lexicographic ordering of subspaces -----------------------------------------------


def lex_subspace(E_basis, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Elements of span(E_basis) in lexicographic order and the matrix R.

    R has rows e_{p^(m-1)}, ..., e_{p^0}; then e_i = v_i R for every i, where
    v_i is the i-th vector of F_p^m.
    """
    B = np.atleast_2d(np.asarray(E_basis, dtype=np.int64)) % p
    m, n = B.shape
    if rank_mod_p(B, p) != m:
        raise PreconditionError("generators are linearly dependent", witness=B.tolist())
    V = SpaceDesc.vector(p, m).coords()
    elems = (V @ B) % p
    idx = SpaceDesc.vector(p, n).index(elems)
    elems = elems[np.argsort(idx)]
    R = elems[[p ** (m - 1 - j) for j in range(m)]]
    if not np.array_equal((V @ R) % p, elems):
        raise VerificationError("e_i = v_i R failed")  # cannot happen for a subspace
    return elems, R


def psi(a, design: SpectralDesign) -> GenFunction:
    """psi_a(v_i) = a . w_i as a function on V_{n-s}."""
    a = np.asarray(a, dtype=np.int64)
    return GenFunction(design.d.space, 1, (design.support @ a) % design.p)


# -- root-of-unity verification of designs ------------------------------------------


@dataclass(frozen=True, eq=False)
class Prop1Result:
    ok: bool
    f: GenFunction | None = None
    witness: list | None = None
    failure: str | None = None  # "magnitude", "minus_one" or "other"
    report: PlateauReport | None = None

    def to_dict(self) -> dict:
        out = {"ok": self.ok}
        if self.witness is not None:
            out["witness"] = self.witness
            out["failure"] = self.failure
        if self.report is not None:
            out["classification"] = self.report.to_dict()
        return out


def design_sums(design: SpectralDesign, threads: int = 1) -> tuple[np.ndarray, bool]:
    """sum_x mu(x) zeta^(d(x) + p^(k-1) psi_a(x)) for every a, with i factored out.

    Returns canonical coordinates of shape (p^n, phi) and whether a common
    factor i was removed (mu valued in {+i, -i}).
    """
    p, k, n = design.p, design.k, design.n
    mu = design.mu
    imag = bool(mu[0] % 2)
    if np.any(mu % 2 != mu[0] % 2):
        raise PreconditionError("mu mixes real and imaginary units")
    eps = np.where((mu - (1 if imag else 0)) % 4 == 0, 1, -1)
    q1 = p ** (k - 1)
    N = p**n
    pts = design.points
    d = design.d.table
    vals = np.zeros((N, (p - 1) * q1), dtype=np.int64)
    size = design.d.space.size
    dt = np.int32 if size < 2**31 else np.int64
    for r in range(q1):
        A = np.zeros((N, p), dtype=dt)
        sel = np.nonzero(d % q1 == r)[0]
        np.add.at(A, (pts[sel], d[sel] // q1), eps[sel])
        D = _radix_stages(A.reshape((p,) * n + (p,)), p, n, +1, threads).reshape(N, p)
        vals[:, r::q1] = D[:, : p - 1] - D[:, p - 1 : p]
    return vals, imag


def prop1_verify(design: SpectralDesign, threads: int = 1, check: bool = True) -> Prop1Result:
    """Test the root-of-unity condition at every a; on success synthesize f."""
    p, k, n, s = design.p, design.k, design.n, design.s
    sums, imag = design_sums(design, threads)
    ok, delta, t = match_polar(sums, p, k, n - s)
    space = design.space
    if not ok.all():
        bad = int(np.nonzero(~ok)[0][0])
        norm = int(norm_sq_many(sums[bad : bad + 1], p, k)[0])
        kind = "magnitude" if norm != p ** (n - s) else "other"
        return Prop1Result(False, witness=list(space.lex_elem(bad)), failure=kind)
    cls = unit_power_class(delta, bool((n - s) % 2), p, k, imag)
    good = cls == UNITY
    if not good.all():
        bad = int(np.nonzero(~good)[0][0])
        kind = "minus_one" if cls[bad] == "MinusOne" else "other"
        return Prop1Result(False, witness=list(space.lex_elem(bad)), failure=kind)
    # unity means the unit is exactly zeta^t, so f(a) = t
    f = GenFunction(space, k, t, {"construction": "spectral design", **design.meta})
    if not check:
        return Prop1Result(True, f)
    report = classify(f, threads=threads)
    _check_round_trip(design, report)
    return Prop1Result(True, f, report=report)


def _check_round_trip(design: SpectralDesign, report: PlateauReport) -> None:
    if report.s != design.s:
        raise VerificationError(f"synthesized function has s = {report.s}, expected {design.s}")
    order = np.argsort(design.points)
    if not np.array_equal(report.support, design.points[order]):
        raise VerificationError("support of the synthesized function differs from the design")
    if not np.array_equal(report.dual, design.d.table[order]):
        raise VerificationError("dual of the synthesized function differs from d")
    if not np.array_equal(report.mu, design.mu[order]):
        raise VerificationError("mu of the synthesized function differs from the design")


def corollary1_synthesize(design: SpectralDesign, threads: int = 1) -> GenFunction:
    """f(a) = g_a*(0) with g_a = d + p^(k-1) psi_a, after checking the hypotheses."""
    p, k = design.p, design.k
    space = design.space
    q1 = p ** (k - 1)
    out = np.zeros(space.size, dtype=np.int64)
    u_seen = None
    for ai, a in enumerate(space.coords()):
        ga = design.d.with_table(design.d.table + q1 * ((design.support @ a) % p))
        try:
            rep = classify(ga, threads=threads)
        except NotPlateaued as exc:
            raise PreconditionError("g_a is not bent", witness=a.tolist()) from exc
        if rep.s != 0 or rep.mu_constant() is None:
            raise PreconditionError("g_a is not weakly regular bent", witness=a.tolist())
        u = rep.mu_constant()
        if u_seen is None:
            u_seen = u
            if np.any(design.mu != (-u) % 4):
                raise PreconditionError("mu is not the inverse of the common mu of g_a", witness=a.tolist())
        elif u != u_seen:
            raise PreconditionError("mu of g_a depends on a", witness=a.tolist())
        out[ai] = rep.dual[0]
    return GenFunction(space, k, out, {"construction": "g_a dual at zero"})


# -- affine supports --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AffineSupportSpec:
    E_basis: np.ndarray
    M: np.ndarray
    t: np.ndarray
    g: GenFunction  # bent on F_p^(n-s)

    @property
    def p(self) -> int:
        return self.g.p

    @property
    def n(self) -> int:
        return int(np.asarray(self.M).shape[0])


def theorem1_construct(spec: AffineSupportSpec, threads: int = 1) -> tuple[GenFunction, SpectralDesign]:
    """f(x) = g(x M^T R^T) + p^(k-1) x.t with support t + E M."""
    g, p, k = spec.g, spec.p, spec.g.k
    M = np.asarray(spec.M, dtype=np.int64) % p
    t = np.asarray(spec.t, dtype=np.int64) % p
    n = M.shape[0]
    if M.shape != (n, n) or rank_mod_p(M, p) != n:
        raise PreconditionError("M must be an invertible n x n matrix", witness=M.tolist())
    inv_mod_p(M, p)
    elems, R = lex_subspace(spec.E_basis, p)
    m = R.shape[0]
    if g.space != SpaceDesc.vector(p, m):
        raise PreconditionError(f"g must be defined on F_{p}^{m}")
    try:
        grep = classify(g, threads=threads)
    except NotPlateaued as exc:
        raise PreconditionError("g is not bent") from exc
    if grep.s != 0:
        raise PreconditionError("g is not bent", s=grep.s)
    if grep.mu is None:
        raise PreconditionError("g has no dual (p = 2 with odd dimension)")
    support = (t + elems @ M) % p
    design = SpectralDesign(n, n - m, p, k, support, grep.dual_function(), grep.mu_function(), {"theorem": "T1"})
    X = SpaceDesc.vector(p, n).coords()
    Y = (X @ M.T @ R.T) % p
    table = g.table[SpaceDesc.vector(p, m).index(Y)] + p ** (k - 1) * ((X @ t) % p)
    f = GenFunction(SpaceDesc.vector(p, n), k, table, {"theorem": "T1"})
    res = prop1_verify(design, threads)
    if not res.ok or res.f != f:
        raise VerificationError("closed form disagrees with the spectral synthesis")
    return f, design


# -- support matrices --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SupportMatrix:
    rows: np.ndarray
    domain: SpaceDesc  # V_{n-s}, indexing the rows
    column_affine: np.ndarray

    @property
    def affine_column_count(self) -> int:
        return int(self.column_affine.sum())

    def column_functions(self) -> list[GenFunction]:
        return [GenFunction(self.domain, 1, self.rows[:, j]) for j in range(self.rows.shape[1])]

    def to_dict(self) -> dict:
        return {
            "shape": list(self.rows.shape),
            "column_affine": self.column_affine.tolist(),
            "affine_column_count": self.affine_column_count,
        }


def is_affine_function(table: np.ndarray, space: SpaceDesc) -> bool:
    """phi is affine iff every D_{e_i} phi is constant (e_i the coordinate vectors)."""
    p = space.p
    t = np.asarray(table, dtype=np.int64).reshape(space.shape)
    for axis in range(space.n):
        diff = (np.roll(t, -1, axis=axis) - t) % p
        if np.any(diff != diff.flat[0]):
            return False
    return True


def support_matrix_analyze(obj, threads: int = 1) -> tuple[SupportMatrix, int, bool]:
    """Support matrix, number of affine columns and whether the support is a coset.

    ``obj`` is a SpectralDesign (rows in design order), a PlateauReport or a
    GenFunction (rows in lexicographic order, indexed by F_p^(n-s)).
    """
    if isinstance(obj, SpectralDesign):
        rows, dom = obj.support, obj.d.space
    else:
        rep = obj if isinstance(obj, PlateauReport) else classify(obj, threads=threads)
        if rep.s is None:
            raise NotPlateaued("input is not plateaued")
        rows = rep.space.unindex(rep.support)
        dom = SpaceDesc.vector(rep.space.p, rep.space.n - rep.s)
    aff = np.array([is_affine_function(rows[:, j], dom) for j in range(rows.shape[1])], dtype=bool)
    sm = SupportMatrix(rows, dom, aff)
    return sm, sm.affine_column_count, is_affine_set(rows, dom.p)
