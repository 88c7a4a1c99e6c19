"""Vectorized evaluation of small arithmetic formulas over truth tables.

Formulas are parsed with :mod:`ast` and evaluated on whole arrays at once.
Names resolve to field-valued arrays (:class:`FieldVal`), integer arrays or
Python callables; ``Tr`` is the absolute trace.  Integer arithmetic is exact
and unreduced, so the caller reduces into F_p or Z_{p^k} at the end.

    >>> ctx = FieldCtx(3, 2, (1, 2, 2))
    >>> env = field_env(ctx, x=np.arange(9))
    >>> evaluate("Tr(z*x)", env)  # doctest: +SKIP
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ContextMismatch, PreconditionError
from .field import FieldCtx
from .space import SpaceDesc


@dataclass(frozen=True, eq=False)
class FieldVal:
    ctx: FieldCtx
    codes: np.ndarray

    __array_ufunc__ = None  # make numpy defer to the reflected operators

    def _lift(self, other) -> FieldVal:
        if isinstance(other, FieldVal):
            if other.ctx != self.ctx:
                raise ContextMismatch("formula mixes elements of different fields")
            return other
        return FieldVal(self.ctx, np.asarray(other, dtype=np.int64) % self.ctx.p)

    def __add__(self, o):
        o = self._lift(o)
        return FieldVal(self.ctx, self.ctx.add(self.codes, o.codes))

    __radd__ = __add__

    def __sub__(self, o):
        o = self._lift(o)
        return FieldVal(self.ctx, self.ctx.sub(self.codes, o.codes))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        return FieldVal(self.ctx, self.ctx.mul(self.codes, o.codes))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldVal(self.ctx, self.ctx.neg(self.codes))

    def __pow__(self, e):
        if isinstance(e, FieldVal) or np.ndim(e) != 0:
            raise PreconditionError("field powers need a constant integer exponent")
        e = int(e)
        if e < 0:
            return FieldVal(self.ctx, self.ctx.pow(self.ctx.inv(self.codes), -e))
        return FieldVal(self.ctx, self.ctx.pow(self.codes, e))


def _trace(v):
    if not isinstance(v, FieldVal):
        raise PreconditionError("Tr expects a field element")
    return v.ctx.trace(v.codes)


def _field_inv(v):
    if not isinstance(v, FieldVal):
        raise PreconditionError("inv expects a field element")
    return FieldVal(v.ctx, v.ctx.inv(v.codes))


BUILTINS: dict[str, Callable] = {"Tr": _trace, "inv": _field_inv}


def field_env(ctx: FieldCtx, name: str = "z", **arrays) -> dict:
    """Environment with the field generator bound to ``name`` and field-valued arrays."""
    env = {name: FieldVal(ctx, np.asarray(ctx.z.code))}
    for key, codes in arrays.items():
        env[key] = FieldVal(ctx, np.asarray(codes, dtype=np.int64))
    return env


def space_env(space: SpaceDesc, names=None, const: str | None = "z") -> dict:
    """Bind the variables of ``space`` (coordinates or field elements).

    Default names are x1, x2, ... in variable order.  The generator of the
    first field component, if any, is bound to ``const``.
    """
    kinds = []
    for comp in space.components:
        kinds.extend([None] * comp.degree if comp.kind == "vector" else [comp.ctx])
    vals = space.variables()
    names = list(names) if names is not None else [f"x{i + 1}" for i in range(len(vals))]
    if len(names) != len(vals):
        raise PreconditionError(f"expected {len(vals)} variable names, got {len(names)}")
    env = {}
    if len(vals) == 1 and kinds[0] is not None:
        env["x"] = FieldVal(kinds[0], vals[0])  # a lone field variable may also be written x
    for nm, ctx, v in zip(names, kinds, vals):
        env[nm] = FieldVal(ctx, v) if ctx is not None else v
    if const:
        ctxs = [k for k in kinds if k is not None]
        if ctxs:
            env.setdefault(const, FieldVal(ctxs[0], np.asarray(ctxs[0].z.code)))
    return env


_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Pow: lambda a, b: a**b,
    ast.Mod: lambda a, b: a % b,
}


def _eval(node, env):
    if isinstance(node, ast.Expression):
        return _eval(node.body, env)
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return node.value
    if isinstance(node, ast.Name):
        if node.id in env:
            return env[node.id]
        raise PreconditionError(f"unknown name {node.id!r} in formula")
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        a, b = _eval(node.left, env), _eval(node.right, env)
        if isinstance(node.op, ast.Pow) and isinstance(a, np.ndarray):
            return np.asarray(a, dtype=np.int64) ** int(b)
        if isinstance(node.op, ast.Mod) and isinstance(a, FieldVal):
            raise PreconditionError("% is only defined for integers")
        return _BINOPS[type(node.op)](a, b)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, env)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        fn = env.get(node.func.id, BUILTINS.get(node.func.id))
        if not callable(fn):
            raise PreconditionError(f"unknown function {node.func.id!r} in formula")
        return fn(*[_eval(a, env) for a in node.args])
    raise PreconditionError(f"unsupported syntax in formula: {ast.dump(node)[:60]}")


def evaluate(text: str, env: dict):
    """Evaluate a formula; the result is an int array, a FieldVal or a scalar."""
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise PreconditionError(f"cannot parse formula {text!r}") from exc
    return _eval(tree, env)


def table_of(spec, space: SpaceDesc, modulus: int, env: dict | None = None, names=None) -> np.ndarray:
    """Truth table of a formula, callable, constant or explicit table, reduced mod ``modulus``.

    Callables receive the variables of ``space`` positionally (field
    components as code arrays).
    """
    if isinstance(spec, str):
        full = space_env(space, names)
        if env:
            full.update(env)
        val = evaluate(spec, full)
        if isinstance(val, FieldVal):
            raise PreconditionError(f"formula {spec!r} is field valued; wrap it in Tr(...)")
    elif callable(spec):
        val = spec(*space.variables())
    else:
        val = np.asarray(spec, dtype=np.int64)
        if val.ndim and val.shape != (space.size,):
            raise PreconditionError(f"table must have {space.size} entries", got=list(val.shape))
    return np.broadcast_to(np.asarray(val, dtype=np.int64) % modulus, (space.size,)).copy()


def table_lookup(table, ctx: FieldCtx) -> Callable:
    """Wrap a table over F_{p^m} (indexed by element code) as a formula function."""
    tab = np.asarray(table, dtype=np.int64)

    def fn(v):
        if not isinstance(v, FieldVal):
            raise PreconditionError("table function expects a field element")
        return FieldVal(ctx, tab[v.codes])

    return fn
