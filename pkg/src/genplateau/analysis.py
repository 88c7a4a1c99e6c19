"""Structural predicates on truth tables.

Derivatives, linear structures, partial bentness, WRP membership,
vectorial plateau checks and the line test that refutes membership in the
completed generalized Maiorana-McFarland class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .errors import NotPlateaued, PreconditionError, SizeGuardExceeded, VerificationError
from .space import SpaceDesc
from .walsh import GenFunction, PlateauReport, classify


@dataclass
class DerivativeQuery:
    f: GenFunction
    directions: list = field(default_factory=list)

    def __post_init__(self) -> None:
        n = self.f.n
        self.directions = [_as_coords(self.f.space, a) for a in self.directions]
        for a in self.directions:
            if a.shape != (n,):
                raise PreconditionError("direction outside the domain", witness=a.tolist())

    def evaluate(self) -> GenFunction:
        return higher_derivative(self.f, self.directions)


def _as_coords(space: SpaceDesc, a) -> np.ndarray:
    if isinstance(a, (int, np.integer)):
        return space.unindex(np.array([a]))[0]
    return np.asarray(a, dtype=np.int64) % space.p


def _shift_index(space: SpaceDesc, a: np.ndarray) -> np.ndarray:
    """idx(x + a) for every x (coordinatewise addition)."""
    return space.index((space.coords() + a) % space.p)


def derivative(f: GenFunction, a) -> GenFunction:
    """D_a f(x) = f(x + a) - f(x) in Z_{p^k}."""
    a = _as_coords(f.space, a)
    return f.with_table(f.table[_shift_index(f.space, a)] - f.table)


def higher_derivative(f: GenFunction, directions) -> GenFunction:
    out = f
    for a in directions:
        out = derivative(out, a)
    return out


def _derivative_tables(f: GenFunction, chunk: int = 64):
    """Yield (a_indices, D_a f tables) over all directions a, in chunks."""
    space = f.space
    X = space.coords()
    A = X
    for start in range(0, space.size, chunk):
        a = A[start : start + chunk]
        idx = space.index(((X[None, :, :] + a[:, None, :]) % space.p).reshape(-1, space.n)).reshape(len(a), -1)
        yield np.arange(start, start + len(a)), (f.table[idx] - f.table[None, :]) % f.modulus


def linear_structures(f: GenFunction) -> np.ndarray:
    """Coordinates of all a with D_a f constant (always includes 0)."""
    hits = []
    for ids, D in _derivative_tables(f):
        const = np.all(D == D[:, :1], axis=1)
        hits.extend(ids[const].tolist())
    pts = f.space.unindex(np.array(hits, dtype=np.int64))
    if f.k == 1:
        _check_subgroup(f.space, hits)
    return pts


def _check_subgroup(space: SpaceDesc, hits: list[int]) -> None:
    members = set(hits)
    pts = space.unindex(np.array(hits, dtype=np.int64))
    for a in pts:
        sums = space.index((pts + a) % space.p)
        if not members.issuperset(sums.tolist()):
            raise VerificationError("linear structures are not closed under addition")


def partially_bent_test(f: GenFunction, report: PlateauReport | None = None, cross_check: bool = True) -> bool:
    """True iff every derivative is balanced or constant (k = 1).

    With ``cross_check`` the answer is compared to whether the Walsh support
    is an affine subspace, and a disagreement raises.
    """
    if f.k != 1:
        raise PreconditionError("partial bentness is only tested for k = 1")
    p, N = f.p, f.space.size
    result = True
    for _ids, D in _derivative_tables(f):
        const = np.all(D == D[:, :1], axis=1)
        counts = np.stack([(D == v).sum(axis=1) for v in range(p)], axis=1)
        balanced = np.all(counts == N // p, axis=1)
        if not np.all(const | balanced):
            result = False
            break
    if cross_check:
        try:
            rep = report or classify(f)
            affine = rep.is_affine_support()
        except NotPlateaued:
            affine = False
        if affine != result:
            raise VerificationError("partial bentness disagrees with the shape of the Walsh support")
    return result


def scalar_exponents(f: GenFunction) -> list[int]:
    """Even h in [2, p-1] with gcd(h-1, p-1) = 1 and f(ax) = a^h f(x) for all a != 0."""
    p = f.p
    out = []
    for h in range(2, p, 2):
        if gcd(h - 1, p - 1) != 1:
            continue
        if all(np.array_equal(f.table[f.space.scale(a)], (pow(a, h, p) * f.table) % p) for a in range(2, p)):
            out.append(h)
    return out


def wrp_membership(f: GenFunction, report: PlateauReport | None = None) -> dict:
    """Membership in WRP: unbalanced, weakly regular plateaued, f(0) = 0 and scalar homogeneous."""
    if f.p == 2 or f.k != 1:
        raise PreconditionError("WRP is defined for p odd and k = 1")
    reasons = []
    try:
        rep = report or classify(f)
    except NotPlateaued:
        return {"member": False, "reasons": ["not plateaued"], "exponents": []}
    if rep.mu_constant() is None:
        reasons.append("not weakly regular")
    if rep.balanced:
        reasons.append("balanced")
    if f.table[0] != 0:
        reasons.append("f(0) != 0")
    exps = scalar_exponents(f)
    if not exps:
        reasons.append("no admissible homogeneity exponent")
    out = {"member": not reasons, "exponents": exps, "reasons": reasons, "s": rep.s}
    if exps:
        out["h_exp"] = min(exps)
    return out


def vectorial_check(H: list[GenFunction], threads: int = 1) -> dict:
    """Classify every nonzero F_p-combination of the components."""
    if not H:
        raise PreconditionError("empty vectorial function")
    space, p = H[0].space, H[0].p
    if any(h.space != space or h.k != 1 for h in H):
        raise PreconditionError("components must be p-ary on a common domain")
    rows = []
    for a in SpaceDesc.vector(p, len(H)).coords()[1:]:
        tab = sum(int(c) * h.table for c, h in zip(a, H))
        f = GenFunction(space, 1, tab)
        try:
            rep = classify(f, threads=threads)
            rows.append({"a": a.tolist(), "s": rep.s, "regularity": rep.regularity, "plateaued": True})
        except NotPlateaued:
            rows.append({"a": a.tolist(), "s": None, "regularity": None, "plateaued": False})
    return {
        "all_plateaued": all(r["plateaued"] for r in rows),
        "orders": sorted({r["s"] for r in rows if r["s"] is not None}),
        "regularities": sorted({r["regularity"] for r in rows if r["regularity"]}),
        "combinations": rows,
    }


def nonquadratic_witness(f: GenFunction, tries: int = 2000, seed: int = 0):
    """Directions (a, b, c) with D_a D_b D_c f not identically zero, or None.

    Coordinate-vector triples are tried first, then random triples.
    """
    space = f.space
    n = space.n
    eye = np.eye(n, dtype=np.int64)

    def nonzero(dirs) -> bool:
        return bool(np.any(higher_derivative(f, dirs).table))

    for i in range(n):
        for j in range(i, n):
            for l in range(j, n):
                dirs = [eye[i], eye[j], eye[l]]
                if nonzero(dirs):
                    return [d.tolist() for d in dirs]
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        dirs = list(rng.integers(0, space.p, size=(3, n)))
        if nonzero(dirs):
            return [d.tolist() for d in dirs]
    return None


def projective_points(p: int, n: int) -> np.ndarray:
    """One representative per line through 0: first nonzero coordinate equal to 1."""
    X = SpaceDesc.vector(p, n).coords()[1:]
    lead = X[np.arange(len(X)), np.argmax(X != 0, axis=1)]
    return X[lead == 1]


def gmm_line_obstruction(h: GenFunction, max_size: int = 3**9) -> dict:
    """Lines span(a) with D_{alpha a} D_{beta a} h = 0 for all alpha, beta in F_p.

    When no line survives no subspace of positive dimension has vanishing
    second derivatives, which refutes membership in the completed
    generalized Maiorana-McFarland class.
    """
    if h.k != 1:
        raise PreconditionError("the line test needs k = 1")
    space, p = h.space, h.p
    if space.size > max_size:
        raise SizeGuardExceeded(f"domain size {space.size} exceeds {max_size}", max_size=max_size)
    X = space.coords()
    tab = h.table
    surviving = []
    lines = projective_points(p, space.n)
    for a in lines:
        shifts = [tab[space.index((X + al * a) % p)] for al in range(p)]
        ok = True
        for al in range(1, p):
            for be in range(al, p):
                d2 = shifts[(al + be) % p] - shifts[al] - shifts[be] + tab
                if np.any(d2 % p):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            surviving.append(a.tolist())
    return {"obstructed": not surviving, "lines_checked": int(len(lines)), "surviving_lines": surviving}


def analyze(f: GenFunction, threads: int = 1, max_line_size: int = 3**9) -> dict:
    """The full predicate battery as a JSON-ready dict."""
    out: dict = {}
    try:
        rep = classify(f, threads=threads)
        out["classification"] = rep.to_dict()
        out["affine_support"] = rep.is_affine_support()
    except NotPlateaued as exc:
        rep = None
        out["classification"] = {"plateaued": False, "detail": exc.to_dict()}
    ls = linear_structures(f)
    out["linear_structures"] = {"count": int(len(ls)), "points": ls.tolist() if len(ls) <= 64 else None}
    if f.k == 1:
        out["partially_bent"] = partially_bent_test(f, rep, cross_check=rep is not None)
        w = nonquadratic_witness(f)
        out["nonquadratic_witness"] = w
        if f.p != 2:
            out["wrp"] = wrp_membership(f, rep) if rep is not None else {"member": False, "reasons": ["not plateaued"]}
        if f.space.size <= max_line_size:
            out["gmm_lines"] = gmm_line_obstruction(f, max_line_size)
    return out
