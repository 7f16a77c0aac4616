"""Exception hierarchy shared across the library.

Three families map onto the CLI exit codes: configuration problems (exit 2),
data/validation problems (exit 3), and numerical failures (exit 4).
"""


class VolsentError(Exception):
    """Base class for all library errors."""


class ConfigError(VolsentError):
    """Invalid or incomplete run configuration."""


class DataError(VolsentError):
    """Malformed, inconsistent, or insufficient input data."""


class NumericError(VolsentError):
    """A numerical procedure failed or its preconditions do not hold."""


# --- data loading / validation ---

class MissingColumn(DataError):
    pass


class UnparsableValue(DataError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InvariantViolation(DataError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class EmptyIntersection(DataError):
    pass


class DuplicateDate(DataError):
    pass


class SchemaMismatch(DataError):
    pass


class MisalignedDates(DataError):
    pass


class DateMismatch(DataError):
    pass


# --- surface ---

class NonPositiveInput(NumericError):
    pass


class PriceOutOfBounds(NumericError):
    pass


class NoConvergence(NumericError):
    pass


class InsufficientQuotes(DataError):
    pass


class AllInversionsFailed(NumericError):
    pass


class OutOfHull(NumericError):
    pass


class TooFewPoints(DataError):
    pass


class NonUniformSpacing(DataError):
    pass


class DegenerateSmile(NumericError):
    pass


class UnknownLevel(DataError):
    pass


# --- sentiment ---

class NonPositiveFloatCap(NumericError):
    pass


class NonPositiveNav(NumericError):
    pass


class ConstantColumn(DataError):
    pass


class TooFewDates(DataError):
    pass


class EmptyDocument(DataError):
    pass


class CountOverflow(DataError):
    pass


# --- decomposition ---

class SeriesTooShort(DataError):
    pass


class ConstantSeries(DataError):
    pass


class TooFewImfs(DataError):
    pass


# --- VAR estimation ---

class RankDeficient(NumericError):
    pass


class InsufficientSample(DataError):
    pass


class MissingExogenous(DataError):
    pass


class UnknownVariable(DataError):
    pass


# --- evaluation ---

class WindowTooShort(DataError):
    pass


class ZeroRealized(DataError):
    pass


class Empty(DataError):
    pass


# --- synthetic generation ---

class UnstableSpec(NumericError):
    pass
