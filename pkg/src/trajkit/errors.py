"""Exception hierarchy shared across the toolkit.

Every error carries a machine-readable ``code`` (the class name) and an
``exit_code`` used by the command-line layer: 2 for data errors, 3 for
violated numerical invariants.
"""

from __future__ import annotations


class TrajkitError(Exception):
    exit_code = 2

    @property
    def code(self) -> str:
        return type(self).__name__


# --- checkpoint store ---

class InvalidTensor(TrajkitError):
    pass


class InvalidCheckpoint(TrajkitError):
    pass


class BadMagic(TrajkitError):
    pass


class UnsupportedVersion(TrajkitError):
    pass


class TruncatedFile(TrajkitError):
    pass


class LayoutMismatch(TrajkitError):
    pass


class DuplicateIndex(TrajkitError):
    pass


class EmptySelection(TrajkitError):
    pass


# --- kernel / hallmarks ---

class OriginOutOfRange(TrajkitError):
    pass


class EmptyTrajectory(TrajkitError):
    pass


class DegenerateVector(TrajkitError):
    pass


class InsufficientPoints(TrajkitError):
    pass


# --- spectral ---

class NotSymmetric(TrajkitError):
    pass


class NoConvergence(TrajkitError):
    exit_code = 3


class NegativeGramEigenvalue(TrajkitError):
    exit_code = 3


# --- theory / training ---

class NonFiniteIterate(TrajkitError):
    pass


class BoundViolation(TrajkitError):
    exit_code = 3


class NonFiniteLoss(TrajkitError):
    pass


# --- reporting ---

class InvalidStyle(TrajkitError):
    pass


class NoMeasuresRequested(TrajkitError):
    pass
