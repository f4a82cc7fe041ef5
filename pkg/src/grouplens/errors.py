"""
Error hierarchy for GroupLens.

Every error carries an optional JSON-serializable witness and the process
exit code the CLI uses for it.
"""
from typing import Any, Optional


class GroupLensError(Exception):
    """Base class for all library errors."""

    exit_code = 1
    kind = "error"

    def __init__(self, message: str, witness: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.witness = witness

    def __str__(self) -> str:
        if self.witness:
            return f"{self.message} (witness={self.witness})"
        return self.message

    def to_dict(self) -> dict[str, Any]:
        return {"error": self.kind, "message": self.message, "witness": self.witness}


class PreconditionError(GroupLensError):
    kind = "precondition"


class ElementRangeError(PreconditionError):
    kind = "element-range"


class InvalidOrderError(PreconditionError):
    kind = "invalid-order"


class GroupValidationError(PreconditionError):
    kind = "validation"


class SpecParseError(PreconditionError):
    kind = "spec-parse"

    def __init__(self, message: str, expression: str, position: int):
        super().__init__(
            f"{message} at position {position} in {expression!r}",
            {"expression": expression, "position": position},
        )
        self.position = position


class NormalityError(PreconditionError):
    kind = "normality"


class CoprimalityError(PreconditionError):
    kind = "coprimality"


class AbelianError(PreconditionError):
    kind = "abelian"


class ContainmentError(PreconditionError):
    kind = "containment"


class ShapeError(PreconditionError):
    kind = "shape"


class SolubilityError(PreconditionError):
    kind = "solubility"


class NotCotwistedError(PreconditionError):
    kind = "not-cotwisted"


class CertificationError(PreconditionError):
    kind = "certification"


class ExtensionError(PreconditionError):
    kind = "extension"


class InvariantViolationError(GroupLensError):
    exit_code = 2
    kind = "invariant-violation"


class SizeLimitError(GroupLensError):
    exit_code = 3
    kind = "size-limit"
