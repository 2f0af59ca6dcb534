"""Exception hierarchy shared by every layer of the package."""


class GaarsError(Exception):
    """Base class for all errors raised by this package."""


class InvalidElement(GaarsError, ValueError):
    """A group or set element is out of range or fails membership."""


class BackendUnsupported(GaarsError):
    pass


class DecodeError(GaarsError, ValueError):
    """Malformed bytes handed to a decoder."""


class WitnessNotInRing(GaarsError):
    pass


class StatementNotInRing(GaarsError):
    pass


class DuplicateStatement(GaarsError):
    pass


class InvalidChallenge(GaarsError, ValueError):
    pass


class LengthMismatch(GaarsError, ValueError):
    pass


class NoMatchingSession(GaarsError):
    """Extraction found no index whose beta lines up with the response."""


class OracleCollision(GaarsError):
    pass


class ProtocolViolation(GaarsError):
    """An adversary stepped outside the oracle interface of a game."""


class ForkBudgetExhausted(GaarsError):
    pass


class NoGoodSession(GaarsError):
    pass
