"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class BabelError(Exception):
    """Base class for all library errors."""


class InputError(BabelError):
    """Malformed input (bad JSON, wrong dimensions, unknown tags)."""


class UnsupportedType(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class DatumMismatch(InputError):
    pass


class NotARoot(InputError):
    pass


class NegativeRadicand(BabelError):
    pass


class NotInApartment(BabelError):
    pass


class DegenerateBasis(BabelError):
    pass


class EmptyOmega(InputError):
    pass


class Disjoint(BabelError):
    """Sector intersection is empty."""


class NotASector(BabelError):
    """Sector intersection is non-empty but is not a canonical-direction sector."""


class MixedLevels(BabelError):
    """Point set spans more than one real component."""


class PreconditionViolated(BabelError):
    pass


class InvalidConfiguration(InputError):
    pass


class PrecisionExhausted(BabelError):
    """A comparison or pivot could not be decided at the tracked precision."""


class ZeroToPrecision(PrecisionExhausted):
    """Valuation requested for an element indistinguishable from zero."""


class NotInScrOF(BabelError):
    """Element has a negative t2-order and admits no residue."""


class NotMonomial(BabelError):
    pass


class UnknownSuite(InputError):
    pass
