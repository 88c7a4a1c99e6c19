"""Exact construction and verification of generalized plateaued functions V_n -> Z_{p^k}."""

from __future__ import annotations

from .analysis import (
    analyze,
    derivative,
    gmm_line_obstruction,
    linear_structures,
    partially_bent_test,
    vectorial_check,
    wrp_membership,
)
from .cyclotomic import CycInt, gauss_sum, norm_sq, polar_decompose
from .errors import NotPlateaued, PlateauError, PreconditionError, VerificationError
from .field import FieldCtx
from .params import BuildResult, build, load
from .space import SpaceDesc
from .spectral import AffineSupportSpec, SpectralDesign, prop1_verify, theorem1_construct
from .walsh import GenFunction, PlateauReport, WalshSpectrum, classify, inverse_walsh, walsh_transform

__version__ = "0.1.0"

__all__ = [
    "AffineSupportSpec",
    "BuildResult",
    "CycInt",
    "FieldCtx",
    "GenFunction",
    "NotPlateaued",
    "PlateauError",
    "PlateauReport",
    "PreconditionError",
    "SpaceDesc",
    "SpectralDesign",
    "VerificationError",
    "WalshSpectrum",
    "analyze",
    "build",
    "classify",
    "derivative",
    "gauss_sum",
    "gmm_line_obstruction",
    "inverse_walsh",
    "linear_structures",
    "load",
    "norm_sq",
    "partially_bent_test",
    "polar_decompose",
    "prop1_verify",
    "theorem1_construct",
    "vectorial_check",
    "walsh_transform",
    "wrp_membership",
]
