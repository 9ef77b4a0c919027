"""
errors.py - Exception hierarchy for gradmult
============================================

Every failure the engine can report derives from GradmultError. The CLI maps
the `exit_code` attribute straight to the process exit status:

    0  pass
    1  failed check
    2  usage / parse error
    3  computation cap exceeded
"""

from typing import Any, Dict, Optional


class GradmultError(Exception):
    """Base class for all engine errors."""

    exit_code = 1
    kind = "error"

    def to_dict(self) -> Dict[str, Any]:
        return {"error": str(self), "kind": self.kind}


class DimensionMismatchError(GradmultError):
    kind = "dimension-mismatch"


class ZeroIdealError(GradmultError):
    kind = "zero-ideal"


class InfiniteColengthError(GradmultError):
    kind = "infinite-colength"


class PreconditionError(GradmultError):
    kind = "precondition"


class NotSquarefreeError(PreconditionError):
    kind = "not-squarefree"


class UnsupportedDimensionError(GradmultError):
    kind = "unsupported-dimension"


class SingularSystemError(GradmultError):
    kind = "singular-system"


class StructuralCheckError(GradmultError):
    """A general family table produced a nonzero term free of t0."""

    kind = "structural-check"


class FitNotStabilizedError(GradmultError):
    """Two interpolation windows never agreed before the offset cap."""

    exit_code = 3
    kind = "fit-not-stabilized"

    def __init__(self, message: str, first: Optional[Dict] = None, second: Optional[Dict] = None):
        super().__init__(message)
        self.first = first or {}
        self.second = second or {}

    def to_dict(self) -> Dict[str, Any]:
        payload = super().to_dict()
        payload["fits"] = [self.first, self.second]
        return payload


class WorkspaceError(GradmultError):
    """Invalid workspace document; `path` points at the offending entry."""

    exit_code = 2
    kind = "workspace"

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class UsageError(GradmultError):
    """Bad command-line arguments."""

    exit_code = 2
    kind = "usage"
