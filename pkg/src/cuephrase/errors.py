"""Exception hierarchy shared by every module."""


class CuePhraseError(Exception):
    """Base class for all data and model errors raised by the package."""


class SchemaError(CuePhraseError, ValueError):
    pass


class UnknownTag(SchemaError):
    pass


class NumericExpected(SchemaError):
    pass


class NonPositive(SchemaError):
    pass


class NaNotAllowed(SchemaError):
    pass


class EmptyFeatureSet(SchemaError):
    pass


class MissingFeature(SchemaError, KeyError):
    def __init__(self, feature):
        super().__init__(feature)
        self.feature = feature

    def __str__(self):
        return f"missing feature {self.feature}"


class AbstractionError(SchemaError):
    """A starred feature disagrees with the feature it abstracts."""


class ParseError(CuePhraseError, ValueError):
    """A malformed line in a corpus, tree or ruleset file.

    ``line`` and ``column`` are 1-based; ``column`` is None when the error
    concerns the line as a whole.
    """

    def __init__(self, line, reason, column=None):
        self.line = line
        self.column = column
        self.reason = reason
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {reason}")


class AbstractionMismatch(ParseError):
    pass


class EmptyCorpus(CuePhraseError, ValueError):
    pass
