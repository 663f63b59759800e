"""Error taxonomy shared by every module.

Each exception carries a stable ``code`` string and the CLI exit status it
maps to, so the command-line frontend can emit machine-readable errors.
"""
from __future__ import annotations

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_VALIDATION = 2
EXIT_PRECISION = 3
EXIT_UNDECIDABLE = 4


class FracOrbitError(Exception):
    code = "FracOrbitError"
    exit_code = EXIT_INTERNAL

    def to_json(self) -> dict[str, object]:
        return {"error": self.code, "message": str(self), "exit_code": self.exit_code}


class ValidationError(FracOrbitError, ValueError):
    code = "ValidationError"
    exit_code = EXIT_VALIDATION


class NotIrreducible(ValidationError):
    code = "NotIrreducible"


class NoRootAboveOne(ValidationError):
    code = "NoRootAboveOne"


class DegreeTooLarge(ValidationError):
    code = "DegreeTooLarge"


class EtaTooLarge(ValidationError):
    code = "EtaTooLarge"


class UnsupportedLeaf(ValidationError):
    code = "UnsupportedLeaf"


class NoOutsideConjugate(ValidationError):
    code = "NoOutsideConjugate"


class GcdNotOne(ValidationError):
    code = "GcdNotOne"


class NotProbabilityVector(ValidationError):
    code = "NotProbabilityVector"


class AtomicDegenerate(ValidationError):
    code = "AtomicDegenerate"


class NoEqualExponentPair(ValidationError):
    code = "NoEqualExponentPair"


class PrecisionCapExceeded(FracOrbitError):
    code = "PrecisionCapExceeded"
    exit_code = EXIT_PRECISION


class RefinementCapExceeded(PrecisionCapExceeded):
    code = "RefinementCapExceeded"


class ToleranceUnreachable(PrecisionCapExceeded):
    code = "ToleranceUnreachable"


class UndecidableRounding(FracOrbitError):
    code = "UndecidableRounding"
    exit_code = EXIT_UNDECIDABLE


class UncertainPoints(UndecidableRounding):
    code = "UncertainPoints"


class ReconstructionMismatch(FracOrbitError):
    code = "ReconstructionMismatch"
    exit_code = EXIT_INTERNAL


ALL_ERRORS: tuple[type[FracOrbitError], ...] = (
    FracOrbitError,
    ValidationError,
    NotIrreducible,
    NoRootAboveOne,
    DegreeTooLarge,
    EtaTooLarge,
    UnsupportedLeaf,
    NoOutsideConjugate,
    GcdNotOne,
    NotProbabilityVector,
    AtomicDegenerate,
    NoEqualExponentPair,
    PrecisionCapExceeded,
    RefinementCapExceeded,
    ToleranceUnreachable,
    UndecidableRounding,
    UncertainPoints,
    ReconstructionMismatch,
)
