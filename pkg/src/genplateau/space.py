"""Domains V_n = V_{n_1} x ... x V_{n_s} with their inner products.

A point flattens component by component, left to right; a field component
contributes its polynomial coordinates highest degree first.  The position of
a point in the lexicographic order of the flattened vector is its index into
every truth table and spectrum in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ContextMismatch, DimensionMismatch, PreconditionError
from .field import FieldCtx, FieldElem, is_prime


@dataclass(frozen=True)
class Component:
    kind: str  # "vector" or "field"
    degree: int
    ctx: FieldCtx | None = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "degree": self.degree}
        if self.ctx is not None:
            out["ctx"] = self.ctx.to_dict()
        return out


@dataclass(frozen=True)
class SpaceDesc:
    p: int
    components: tuple[Component, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))
        if not is_prime(self.p):
            raise PreconditionError(f"{self.p} is not prime")
        if not self.components:
            raise PreconditionError("a space needs at least one component")
        for c in self.components:
            if c.kind == "vector":
                if c.degree < 1 or c.ctx is not None:
                    raise PreconditionError("bad vector component", witness=c.to_dict())
            elif c.kind == "field":
                if c.ctx is None or c.ctx.p != self.p or c.ctx.m != c.degree:
                    raise ContextMismatch("field component disagrees with its context", witness=c.to_dict())
            else:
                raise PreconditionError(f"unknown component kind {c.kind!r}")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def vector(cls, p: int, n: int) -> SpaceDesc:
        return cls(p, (Component("vector", n),))

    @classmethod
    def field(cls, ctx: FieldCtx) -> SpaceDesc:
        return cls(ctx.p, (Component("field", ctx.m, ctx),))

    @classmethod
    def product(cls, *parts: SpaceDesc | FieldCtx | int, p: int | None = None) -> SpaceDesc:
        """Concatenate spaces; a FieldCtx stands for one field, an int for F_p^int."""
        comps: list[Component] = []
        for part in parts:
            if isinstance(part, SpaceDesc):
                comps.extend(part.components)
                p = part.p if p is None else p
            elif isinstance(part, FieldCtx):
                comps.append(Component("field", part.m, part))
                p = part.p if p is None else p
            else:
                comps.append(Component("vector", int(part)))
        if p is None:
            raise PreconditionError("cannot infer p for a pure vector product")
        return cls(p, tuple(comps))

    def to_dict(self) -> dict:
        return {"p": self.p, "components": [c.to_dict() for c in self.components]}

    @classmethod
    def from_dict(cls, d: dict) -> SpaceDesc:
        comps = []
        for c in d["components"]:
            ctx = FieldCtx.from_dict(c["ctx"]) if c.get("ctx") else None
            comps.append(Component(c["kind"], int(c["degree"]), ctx))
        return cls(int(d["p"]), tuple(comps))

    # -- sizes ------------------------------------------------------------------

    @property
    def n(self) -> int:
        return sum(c.degree for c in self.components)

    @property
    def size(self) -> int:
        return self.p**self.n

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.p,) * self.n

    def __repr__(self) -> str:
        parts = []
        for c in self.components:
            parts.append(f"F_{self.p}^{c.degree}" if c.kind == "vector" else f"F_{{{self.p}^{c.degree}}}")
        return "SpaceDesc(" + " x ".join(parts) + ")"

    # -- indexing ---------------------------------------------------------------

    @cached_property
    def _weights(self) -> np.ndarray:
        return self.p ** np.arange(self.n - 1, -1, -1, dtype=np.int64)

    def coords(self) -> np.ndarray:
        """All points as an (N, n) array of F_p coordinates in index order."""
        return self.unindex(np.arange(self.size, dtype=np.int64))

    def index(self, coords) -> np.ndarray:
        """Index of flattened coordinate rows (any leading shape)."""
        coords = np.asarray(coords, dtype=np.int64)
        if coords.shape[-1] != self.n:
            raise DimensionMismatch(f"expected {self.n} coordinates, got {coords.shape[-1]}")
        return (coords % self.p) @ self._weights

    def unindex(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        return (idx[..., None] // self._weights) % self.p

    def flatten(self, pt) -> list[int]:
        """Flatten a point given per component or already flat.

        Per component: a FieldElem (or code) for field parts, a sequence for
        vector parts; a vector part of degree 1 may also be a bare int.
        """
        if len(pt) == self.n and all(isinstance(v, (int, np.integer)) for v in pt):
            out = [int(v) for v in pt]
        else:
            if len(pt) != len(self.components):
                raise DimensionMismatch("point does not match the component structure", witness=list(map(str, pt)))
            out = []
            for comp, part in zip(self.components, pt):
                if comp.kind == "field":
                    if isinstance(part, FieldElem):
                        if part.ctx != comp.ctx:
                            raise ContextMismatch("field element from another field")
                        out.extend(part.coeffs)
                    else:
                        out.extend(comp.ctx(int(part)).coeffs)
                else:
                    vals = [part] if isinstance(part, (int, np.integer)) else list(part)
                    if len(vals) != comp.degree:
                        raise DimensionMismatch("vector component has the wrong length")
                    out.extend(int(v) for v in vals)
        if any(not 0 <= v < self.p for v in out):
            raise DimensionMismatch("coordinate outside F_p", witness=out)
        return out

    def lex_index(self, pt) -> int:
        return int(self.index(self.flatten(pt)))

    def lex_elem(self, idx: int) -> tuple[int, ...]:
        if not 0 <= idx < self.size:
            raise DimensionMismatch(f"index {idx} outside [0, {self.size})")
        return tuple(int(v) for v in self.unindex(idx))

    def split(self, pt_flat) -> list:
        """Structured form of a flat point: tuples for vectors, FieldElem for fields."""
        pt_flat = list(pt_flat)
        out, pos = [], 0
        for comp in self.components:
            block = pt_flat[pos : pos + comp.degree]
            pos += comp.degree
            out.append(comp.ctx.elem(block) if comp.kind == "field" else tuple(block))
        return out

    # -- per component views of all points -----------------------------------------

    def variables(self) -> list[np.ndarray]:
        """One array per variable over all points, in index order.

        Vector components contribute one array per coordinate; field components
        contribute a single array of element codes.
        """
        cols = self.coords()
        out, pos = [], 0
        for comp in self.components:
            block = cols[:, pos : pos + comp.degree]
            pos += comp.degree
            if comp.kind == "field":
                out.append(block @ (self.p ** np.arange(comp.degree - 1, -1, -1, dtype=np.int64)))
            else:
                out.extend(block[:, i] for i in range(comp.degree))
        return out

    def tabulate(self, fn, k_mod: int | None = None) -> np.ndarray:
        """Evaluate ``fn`` on all points (vectorized over the variable arrays)."""
        vals = np.asarray(fn(*self.variables()), dtype=np.int64)
        vals = np.broadcast_to(vals, (self.size,)).copy()
        return vals % k_mod if k_mod else vals

    # -- inner product ----------------------------------------------------------

    @cached_property
    def gram(self) -> np.ndarray:
        """Matrix B with <a, b> = a B b^T on flattened coordinates."""
        B = np.zeros((self.n, self.n), dtype=np.int64)
        pos = 0
        for comp in self.components:
            m = comp.degree
            if comp.kind == "vector":
                B[pos : pos + m, pos : pos + m] = np.eye(m, dtype=np.int64)
            else:
                ctx = comp.ctx
                basis = np.array([self.p ** (m - 1 - i) for i in range(m)], dtype=np.int64)
                prod = ctx.mul(basis[:, None], basis[None, :])
                B[pos : pos + m, pos : pos + m] = ctx.trace(prod)
            pos += m
        return B

    @cached_property
    def is_dot(self) -> bool:
        return bool(np.array_equal(self.gram, np.eye(self.n, dtype=np.int64)))

    def inner_product(self, a, b) -> int:
        """<a, b>: dot product on vector parts, Tr(ab) on field parts."""
        fa, fb = self.split(self.flatten(a)), self.split(self.flatten(b))
        total = 0
        for comp, x, y in zip(self.components, fa, fb):
            if comp.kind == "field":
                total += (x * y).trace()
            else:
                total += sum(u * v for u, v in zip(x, y))
        return total % self.p

    def inner_product_many(self, a_coords, x_coords) -> np.ndarray:
        """Pairwise table <a_i, x_j> for coordinate arrays computed with field arithmetic."""
        a_coords = np.atleast_2d(np.asarray(a_coords, dtype=np.int64))
        x_coords = np.atleast_2d(np.asarray(x_coords, dtype=np.int64))
        total = np.zeros((a_coords.shape[0], x_coords.shape[0]), dtype=np.int64)
        pos = 0
        for comp in self.components:
            m = comp.degree
            ab, xb = a_coords[:, pos : pos + m], x_coords[:, pos : pos + m]
            if comp.kind == "vector":
                total += ab @ xb.T
            else:
                w = self.p ** np.arange(m - 1, -1, -1, dtype=np.int64)
                total += comp.ctx.trace(comp.ctx.mul((ab @ w)[:, None], (xb @ w)[None, :]))
            pos += m
        return total % self.p

    @cached_property
    def gram_perm(self) -> np.ndarray:
        """perm[idx(a)] = idx(a B): converts a dot-product spectrum to this space's."""
        return self.index((self.coords() @ self.gram) % self.p)

    # -- affine maps on indices ---------------------------------------------------

    def translate(self, a) -> np.ndarray:
        """Array t with t[idx(x)] = idx(x + a)."""
        a = np.asarray(self.flatten(a) if not isinstance(a, np.ndarray) else a, dtype=np.int64)
        return self.index((self.coords() + a) % self.p)

    def scale(self, c: int) -> np.ndarray:
        """Array t with t[idx(x)] = idx(c x) for c in F_p."""
        return self.index((self.coords() * int(c)) % self.p)

    def shift_table(self, table: np.ndarray, a_coords) -> np.ndarray:
        """table(x + a) as a flat array, via rolls on the (p,)*n view."""
        t = table.reshape(self.shape)
        for axis, ai in enumerate(np.asarray(a_coords, dtype=np.int64) % self.p):
            if ai:
                t = np.roll(t, -int(ai), axis=axis)
        return t.reshape(-1)
