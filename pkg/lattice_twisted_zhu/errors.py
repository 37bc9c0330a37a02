"""Exception hierarchy shared by every module of the engine.

Validation errors mean the input was rejected (CLI exit code 1);
inconsistency errors mean an internal cross-check failed (exit code 2).
"""
from dataclasses import dataclass, field
from typing import Any, Optional


class LatticeVOAError(Exception):
    """Base class of all engine errors."""

    exit_code = 2


class ValidationError(LatticeVOAError):
    exit_code = 1


class NotSymmetric(ValidationError):
    pass


class NotEven(ValidationError):
    pass


class NotPositiveDefinite(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class SectorMismatch(ValidationError):
    pass


class NotHomogeneous(ValidationError):
    pass


class UnknownEigenvalue(ValidationError):
    pass


class BadIndices(ValidationError):
    pass


class InconsistencyError(LatticeVOAError):
    exit_code = 2


class NotClosed(InconsistencyError):
    pass


class SectionAdjustmentFailed(InconsistencyError):
    pass


class InductionNotIrreducible(InconsistencyError):
    pass


class LiftInconsistent(InconsistencyError):
    pass


class NoDescentStep(InconsistencyError):
    pass


class TableInconsistent(InconsistencyError):
    pass


class NotIsomorphic(InconsistencyError):
    pass


class NotNilpotent(InconsistencyError):
    pass


class TraceIncomplete(InconsistencyError):
    pass


class HypothesisFailed(InconsistencyError):

    def __init__(self, name: str, detail: str = ''):
        self.name = name
        super().__init__(f'{name}: {detail}' if detail else name)


@dataclass
class Counterexample:
    """A violated instance returned (not raised) by verification routines."""
    check: str
    u: Any = None
    n: Any = None
    v: Any = None
    detail: Optional[str] = None
    extra: dict = field(default_factory=dict)

    def __str__(self):
        return f'{self.check} failed at u={self.u!r}, n={self.n!r}, v={self.v!r}: {self.detail}'
