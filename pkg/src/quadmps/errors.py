"""Error taxonomy shared by the whole package.

Three families matter to callers (the CLI maps each family to an exit
code): input that cannot be parsed, mathematically meaningless requests,
and case dispatch that no parameter regime satisfies.
"""

from __future__ import annotations


class QuadmpsError(Exception):
    """Base class for every error raised deliberately by this package."""


class ParseError(QuadmpsError):
    """Malformed textual input: rationals, JSON payloads, CLI values."""


class MathDomainError(QuadmpsError):
    """Request that is meaningless for the given mathematical data."""


class RangeError(MathDomainError):
    """Coefficient data exhausted before the requested index."""


class InvalidSequenceError(MathDomainError):
    """Input polynomials are not a monic sequence with deg W_n = n."""


class RegularityError(MathDomainError):
    """A coefficient that must stay nonzero vanished."""


class DegenerateCaseError(MathDomainError):
    """Parameters sit on a hyperplane excluded by the requested regime."""


class NotNormalizableError(MathDomainError):
    """Secondary sequence has no constant degree offset, so no monic
    sequence can be extracted from it."""


class DispatchError(QuadmpsError):
    """Requested case does not match the supplied parameters."""
