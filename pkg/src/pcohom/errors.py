"""Exception hierarchy shared by every module."""


class PartialCohomologyError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameter(PartialCohomologyError, ValueError):
    pass


class NotAGroup(PartialCohomologyError, ValueError):
    pass


class ShapeError(PartialCohomologyError, ValueError):
    pass


class NotAUnit(PartialCohomologyError, ValueError):
    pass


class NotACochain(PartialCohomologyError, ValueError):
    pass


class NotACocycle(PartialCohomologyError, ValueError):
    pass


class NotAGlobalAction(PartialCohomologyError, ValueError):
    pass


class NotTransitive(PartialCohomologyError, ValueError):
    pass


class InvalidIndex(PartialCohomologyError, IndexError):
    pass


class NotCohomologous(PartialCohomologyError):
    pass


class TooLarge(PartialCohomologyError):
    pass


class InvalidAction(PartialCohomologyError, ValueError):
    """A partial action failed validation where a valid one was required."""


class ParseError(PartialCohomologyError, ValueError):
    """Malformed JSON input; the message names the file, path and key."""


class InternalError(PartialCohomologyError, AssertionError):
    """A proven identity failed to hold. Always an implementation bug."""
