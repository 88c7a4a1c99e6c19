"""Structured exceptions.

Every error carries a short machine-readable ``kind`` and an optional
``witness`` payload so the CLI can serialize failures as JSON.
"""

from __future__ import annotations

from typing import Any


class PlateauError(Exception):
    kind = "error"

    def __init__(self, message: str, witness: Any = None, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.witness = witness
        self.details = details

    def to_dict(self) -> dict:
        out = {"error": self.kind, "message": self.message}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        for key, val in self.details.items():
            out[key] = _jsonable(val)
        return out


class DimensionMismatch(PlateauError):
    kind = "dimension_mismatch"


class ContextMismatch(PlateauError):
    kind = "context_mismatch"


class NotInvertible(PlateauError):
    kind = "not_invertible"


class NonScalarNorm(PlateauError):
    """z * conj(z) is not a rational integer; ``value`` holds the product."""

    kind = "non_scalar_norm"

    def __init__(self, message: str, value: Any) -> None:
        super().__init__(message)
        self.value = value


class NotPlateauForm(PlateauError):
    kind = "not_plateau_form"


class NotPlateaued(PlateauError):
    kind = "not_plateaued"


class InconsistentSpectrum(PlateauError):
    kind = "inconsistent_spectrum"


class PreconditionError(PlateauError):
    kind = "precondition"


class VerificationError(PlateauError):
    """A constructed object failed its post-construction check."""

    kind = "verification"


class SizeGuardExceeded(PlateauError):
    kind = "size_guard"


def _jsonable(obj: Any) -> Any:
    import numpy as np

    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    return obj
