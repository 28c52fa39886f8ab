"""Exception hierarchy shared by the library and the CLI."""


class GlabError(Exception):
    """Base class for every error raised by glab."""


class UnsupportedRingError(GlabError):
    """The operation is not defined (or not implemented) over the given ring."""


class DimensionError(GlabError, ValueError):
    pass


class InvalidCharacteristicError(GlabError, ValueError):
    """A characteristic was requested that is neither 0 nor a prime."""


class NotDominantError(GlabError, ValueError):
    pass


class UnsupportedDatumError(GlabError):
    """The construction only exists for type A1."""


class NotSurjectiveError(GlabError, ValueError):
    pass


class NotEquivariantError(GlabError, ValueError):
    pass


class TruncationError(GlabError):
    """A computation needs degrees beyond the algebra's truncation."""


class NonFreeQuotientError(GlabError):
    """A quotient is neither free over Z nor free over a single Z/n."""


class SpecError(GlabError, ValueError):
    """A task document failed validation."""


class NotHighestWeightError(GlabError, ValueError):
    """The weight is not a maximal weight carrying U+-invariants."""
