"""Named error types raised by the library.

Every domain failure has its own class so callers (and the CLI) can report
precisely which precondition was violated.
"""


class FermiGigError(Exception):
    """Base class for all library errors."""


class NonHermitian(FermiGigError):
    pass


class NonSquare(FermiGigError):
    pass


class NotPSD(FermiGigError):
    pass


class LogOfSingular(FermiGigError):
    pass


class SpectralRadiusAtOne(FermiGigError):
    pass


class DimensionMismatch(FermiGigError):
    pass


class SizeOutOfRange(FermiGigError):
    pass


class NotUnitary(FermiGigError):
    pass


class IntertwinerNotFound(FermiGigError):
    pass


class NotInjective(FermiGigError):
    pass


class InvalidSymbol(FermiGigError):
    pass


class NotAState(FermiGigError):
    pass


class SymbolOnBoundary(FermiGigError):
    pass


class IncompatiblePair(FermiGigError):
    pass


class InvalidPOVM(FermiGigError):
    pass


class NotRankOneGap(FermiGigError):
    pass


class NoConsistentBranch(FermiGigError):
    pass


class InvalidParams(FermiGigError):
    pass


class NonCommuting(FermiGigError):
    pass


class KernelMismatch(FermiGigError):
    pass


class PowersDoNotConverge(FermiGigError):
    pass


class NegativeWeight(FermiGigError):
    pass


class SubspaceNotInvariant(FermiGigError):
    pass


class SingularState(FermiGigError):
    pass


class SingularRestriction(FermiGigError):
    pass


class ConfigError(FermiGigError):
    """Raised for malformed or invalid CLI configuration documents."""


class ParseError(ConfigError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = "" if line is None else f" (line {line}, column {column})"
        super().__init__(f"{message}{where}")


class ValidationError(ConfigError):
    def __init__(self, field, message):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")
