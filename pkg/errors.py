"""Exception hierarchy shared by the engine, the verifier and the CLI."""


class EngineError(Exception):
    """Base class for every error raised by seacalc."""


class CoefficientError(EngineError, ValueError):
    """Out-of-range argument to one of the combinatorial coefficients."""


class OddPiExponentError(CoefficientError):
    """A coefficient received an odd or negative power of pi."""


class WordError(EngineError, ValueError):
    """Malformed word string or a letter outside the layer alphabet."""


class NonTerminatingSeriesError(EngineError):
    """A power series was applied to an argument with a b-degree-0 word."""


class TruncationInvariantError(EngineError):
    """A series carries terms below its guaranteed minimum b-degree."""


class RouteMismatchError(EngineError):
    """Two derivation routes that must agree exactly produced different results."""


class ConfigError(EngineError):
    """Invalid configuration key or value."""


class UsageError(EngineError):
    """Invalid combination of command-line arguments."""


class GoldenParseError(EngineError):
    """A golden-table file could not be parsed."""

    def __init__(self, path: str, line_number: int, field: str, message: str):
        self.path = path
        self.line_number = line_number
        self.field = field
        self.message = message
        super().__init__(f"{path}:{line_number}: {field}: {message}")
