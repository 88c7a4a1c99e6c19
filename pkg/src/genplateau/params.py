"""JSON parameter files for the builders.

A parameter file is a JSON object with a ``theorem`` id and the ingredients
of that construction.  Shared conventions:

* ``fields``: named finite fields, ``{"F9": {"p": 3, "m": 2, "modulus": [1, 2, 2]}}``.
  A field without ``modulus`` uses the library default (with a warning).
* spaces: ``{"vector": n, "p": p}``, ``{"field": "F9"}``, ``{"product": [...]}``
  or a full space descriptor as written by :meth:`SpaceDesc.to_dict`.
* field elements: formulas in ``z`` (``"z**2+1"``), codes or coordinate lists.
* functions: formula strings evaluated over the relevant domain, or explicit
  tables; a function object ``{"space": ..., "k": k, "formula": ...}`` (or
  ``"table"``) where the domain is not implied.

:func:`build` runs the construction and returns a :class:`BuildResult`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import builders as B
from .errors import PreconditionError
from .expr import table_of
from .field import FieldCtx
from .space import SpaceDesc
from .spectral import AffineSupportSpec, SpectralDesign, theorem1_construct
from .walsh import GenFunction, PlateauReport

THEOREMS = ("T1", "T2", "T3", "T4", "T5", "T6", "T7", "P3", "C3")


@dataclass
class BuildResult:
    theorem: str
    functions: list  # one GenFunction, or the components of a vectorial function
    design: SpectralDesign | None = None
    report: PlateauReport | None = None
    extra: dict = field(default_factory=dict)

    @property
    def f(self) -> GenFunction:
        return self.functions[0]


class ParamReader:
    """Resolves fields, spaces and functions inside one parameter file."""

    def __init__(self, doc: dict) -> None:
        self.doc = doc
        self.fields = {name: self._make_field(spec) for name, spec in doc.get("fields", {}).items()}

    @staticmethod
    def _make_field(spec) -> FieldCtx:
        if spec.get("modulus") is None:
            return FieldCtx.default(int(spec["p"]), int(spec["m"]))
        return FieldCtx(int(spec["p"]), int(spec["m"]), tuple(spec["modulus"]))

    def field_ctx(self, spec) -> FieldCtx:
        if isinstance(spec, str):
            if spec not in self.fields:
                raise PreconditionError(f"unknown field {spec!r}")
            return self.fields[spec]
        return self._make_field(spec)

    def space(self, spec) -> SpaceDesc:
        if isinstance(spec, SpaceDesc):
            return spec
        if "components" in spec:
            return SpaceDesc.from_dict(spec)
        if "vector" in spec:
            return SpaceDesc.vector(int(spec["p"]), int(spec["vector"]))
        if "field" in spec:
            return SpaceDesc.field(self.field_ctx(spec["field"]))
        if "product" in spec:
            return SpaceDesc.product(*[self.space(s) for s in spec["product"]])
        raise PreconditionError("cannot read space descriptor", witness=spec)

    def function(self, spec, space: SpaceDesc | None = None, k: int | None = None, names=None) -> GenFunction:
        if isinstance(spec, dict):
            if "table" in spec and "space" in spec and "formula" not in spec and "components" in spec.get("space", {}):
                return GenFunction.from_dict(spec)
            space = self.space(spec["space"]) if "space" in spec else space
            k = int(spec.get("k", k or 1))
            names = spec.get("names", names)
            spec = spec.get("formula", spec.get("table"))
        if space is None or k is None:
            raise PreconditionError("function needs a domain and a level")
        return GenFunction(space, k, table_of(spec, space, space.p**k, names=names))

    def family(self, spec, default_space=None, default_k=None) -> list[GenFunction]:
        """A list of functions: ``{"space", "k", "formulas": [...]}`` or a list of function objects."""
        if isinstance(spec, dict) and "formulas" in spec:
            space = self.space(spec["space"])
            k = int(spec.get("k", 1))
            return [self.function(f, space, k, spec.get("names")) for f in spec["formulas"]]
        return [self.function(f, default_space, default_k) for f in spec]


def load(path) -> dict:
    return json.loads(Path(path).read_text())


def build(doc: dict, threads: int = 1) -> BuildResult:
    theorem = doc.get("theorem")
    if theorem not in THEOREMS:
        raise PreconditionError(f"unknown theorem id {theorem!r}", allowed=list(THEOREMS))
    rd = ParamReader(doc)
    return _BUILDERS[theorem](rd, doc, threads)


def _t1(rd: ParamReader, doc: dict, threads: int) -> BuildResult:
    p = int(doc["p"])
    E = np.asarray(doc["E"], dtype=np.int64)
    g = rd.function(doc["g"], SpaceDesc.vector(p, E.shape[0]), int(doc.get("k", 1)))
    spec = AffineSupportSpec(E, np.asarray(doc["M"]), np.asarray(doc["t"]), g)
    f, design = theorem1_construct(spec, threads)
    return BuildResult("T1", [f], design)


def _t2(rd: ParamReader, doc: dict, threads: int) -> BuildResult:
    ctx = rd.field_ctx(doc["field"])
    hs = [B.HSpec(h["L"], h.get("d", []), h.get("F", 0), int(h.get("b", 0))) for h in doc["h"]]
    params = B.Thm2Params(
        ctx, int(doc["k"]), int(doc["s"]), doc["alphas"], doc.get("c", []), hs,
        pi=doc.get("pi"), g=doc.get("g", 0), g_i=doc.get("g_i"), A=doc.get("A"),
    )
    f, design = B.theorem2_build(params, threads)
    return BuildResult("T2", [f], design)


def _t3(rd: ParamReader, doc: dict, threads: int) -> BuildResult:
    params = B.Thm3Params(
        rd.space(doc["space"]), int(doc["k"]), int(doc["s"]), int(doc["t"]), doc["g"],
        doc["F"], doc["H"], doc["L"], doc.get("b"), doc.get("G", 0),
    )
    f, design = B.theorem3_build(params, threads)
    return BuildResult("T3", [f], design)


def _t4(rd: ParamReader, doc: dict, threads: int) -> BuildResult:
    params = B.Thm4Params(
        rd.space(doc["space"]), int(doc["s"]), doc["g"], doc["L"], doc.get("c"), doc.get("A"), doc.get("d"), doc.get("b"),
    )
    f, design = B.theorem4_build(params, threads)
    return BuildResult("T4", [f], design)


def _p3(rd: ParamReader, doc: dict, threads: int) -> BuildResult:
    fam = rd.family(doc["family"])
    F = B.prop3_glue(fam, doc["M"], doc.get("pi"), threads)
    return BuildResult("P3", [F])


def _outer(doc: dict):
    return doc.get("g_outer", 0)


def _t5(rd: ParamReader, doc: dict, threads: int) -> BuildResult:
    fam = rd.family(doc["family"])
    gs = rd.family(doc["g_list"])
    spec = B.IndirectSumSpec(fam, gs, _outer(doc))
    h, rep = B.theorem5_build(spec, threads, report=True)
    return BuildResult("T5", [h], report=rep, extra={"spec": spec})


def _psap(rd: ParamReader, doc: dict) -> B.PSapBentSpec:
    return B.PSapBentSpec(rd.field_ctx(doc["field"]), doc["alphas"], doc.get("G"))


def _c3(rd: ParamReader, doc: dict, threads: int) -> BuildResult:
    psap = _psap(rd, doc)
    fam = rd.family(doc["family"])
    h, rep = B.corollary3_build(psap, fam, _outer(doc), threads, report=True)
    gs = [B.psap_bent(psap, i, check=False)[0] for i in range(len(psap.alphas))]
    return BuildResult("C3", [h], report=rep, extra={"spec": B.IndirectSumSpec(fam, gs, _outer(doc))})


def _t6(rd: ParamReader, doc: dict, threads: int) -> BuildResult:
    psap = _psap(rd, doc)
    fam = rd.family(doc["family"])
    h = B.theorem6_wrp_build(B.Thm6Params(psap, fam, doc.get("g_outer")), threads)
    return BuildResult("T6", [h])


def _t7(rd: ParamReader, doc: dict, threads: int) -> BuildResult:
    fam = rd.family(doc["family"])
    params = B.Thm7Params(rd.field_ctx(doc["field"]), doc["alphas"], fam, doc.get("G"))
    H = B.theorem7_vectorial_build(params, threads)
    return BuildResult("T7", H)


_BUILDERS = {"T1": _t1, "T2": _t2, "T3": _t3, "T4": _t4, "T5": _t5, "T6": _t6, "T7": _t7, "P3": _p3, "C3": _c3}


def output_size(doc: dict) -> int:
    """Number of points of the domain the construction will produce, without building it."""
    rd = ParamReader(doc)
    th = doc.get("theorem")
    if th == "T1":
        return int(doc["p"]) ** len(doc["M"])
    if th == "T2":
        ctx = rd.field_ctx(doc["field"])
        return ctx.p ** (2 * ctx.m + int(doc["s"]))
    if th in ("T3", "T4"):
        V = rd.space(doc["space"])
        return V.p ** (V.n + int(doc["s"]))
    fam = doc["family"]
    V = rd.space(fam["space"]) if isinstance(fam, dict) else rd.space(fam[0]["space"])
    if th == "P3":
        return V.p ** len(doc["M"][0])
    if th == "T5":
        gl = doc["g_list"]
        W = rd.space(gl["space"]) if isinstance(gl, dict) else rd.space(gl[0]["space"])
        return V.size * W.size
    if th in ("C3", "T6", "T7"):
        ctx = rd.field_ctx(doc["field"])
        return V.size * ctx.q**2
    raise PreconditionError(f"unknown theorem id {th!r}", allowed=list(THEOREMS))
