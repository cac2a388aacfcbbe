"""Exception hierarchy shared across the package.

Domain errors (bad but well-formed inputs) derive from NomoforgeError;
file/format problems derive from InputFormatError so callers can map them
to distinct exit codes.
"""

from __future__ import annotations


class NomoforgeError(Exception):
    """Base class for all domain errors raised by this package."""


class GridTooLarge(NomoforgeError):
    """Numeric step would produce more grid points than the configured cap."""


class UnsupportedKind(NomoforgeError):
    """The requested nomogram kind is undefined for this feature space."""


class KindMismatch(NomoforgeError):
    """An operation received outputs of the wrong kind (probability vs estimate)."""


class MissingExplainability(NomoforgeError):
    """A third (explainability) panel was requested without explainability values."""


class PartitionViolation(NomoforgeError):
    """A sample matched zero or multiple rules; signals an internal bug."""


class OutOfRange(NomoforgeError):
    """A numeric sample value lies outside the grid's [min, max] range."""


class InvalidFeatureSpace(NomoforgeError):
    """The feature definitions violate a structural constraint.

    Carries the validation findings that explain the rejection so CLIs and
    services can surface them without re-deriving anything.
    """

    def __init__(self, message: str, findings=()):
        super().__init__(message)
        self.findings = tuple(findings)


class ValidationFailed(NomoforgeError):
    """Input tables failed the structural gate; `.report` holds the findings."""

    def __init__(self, report):
        super().__init__(f"input validation failed with {len(report.findings)} finding(s)")
        self.report = report


class InputFormatError(Exception):
    """A file could not be read or parsed (usage/IO error, not a domain error)."""
