"""Exception types shared across the package."""

from __future__ import annotations


class RankIntersectError(Exception):
    """Base class for all package errors."""


# --- field construction ---

class NonPrimeCharacteristic(RankIntersectError):
    pass


class ReducibleModulus(RankIntersectError):
    pass


class DegreeMismatch(RankIntersectError):
    pass


# --- linear algebra ---

class AmbientMismatch(RankIntersectError):
    pass


class DependentInput(RankIntersectError):
    pass


class EnumerationCapExceeded(RankIntersectError):
    pass


class SingularMatrix(RankIntersectError):
    pass


# --- codes ---

class RankDeficientGenerator(RankIntersectError):
    pass


class DegenerateCode(RankIntersectError):
    pass


class ZeroMessage(RankIntersectError):
    pass


# --- constructions ---

class DependentPoints(RankIntersectError):
    pass


class LengthExceedsDegree(RankIntersectError):
    pass


class DegreeTooSmall(RankIntersectError):
    pass


class NotHyperplaneScattered(RankIntersectError):
    pass


class ExtensionTooLarge(RankIntersectError):
    pass


class UnknownExample(RankIntersectError):
    pass


# --- properties / feasibility ---

class InvalidParameters(RankIntersectError):
    pass


class NoIntegralSolution(RankIntersectError):
    pass


# --- search harness ---

class ArityMismatch(RankIntersectError):
    pass


class ZeroExtension(RankIntersectError):
    pass


class DimensionMismatch(RankIntersectError):
    pass


class CorruptCheckpoint(RankIntersectError):
    pass


class InvalidRange(RankIntersectError):
    pass


# --- file I/O ---

class SchemaError(RankIntersectError):
    pass


class FieldMismatch(RankIntersectError):
    pass
