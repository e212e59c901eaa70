"""Exception hierarchy shared by every cohoma module."""


class CohomaError(Exception):
    """Base class for all library errors."""


class UnknownGenerator(CohomaError):
    pass


class ConventionMismatch(CohomaError):
    pass


class DegreeMismatch(CohomaError):
    pass


class NotNilpotent(CohomaError):
    pass


class TruncationExceeded(CohomaError):
    """An operation needed a jet coordinate above the declared truncation."""


class NotClosed(CohomaError):
    def __init__(self, msg, index=None):
        super().__init__(msg)
        self.index = index


class NotAntisymmetric(CohomaError):
    pass


class InvalidLieAlgebra(CohomaError):
    pass


class InvalidRepresentation(CohomaError):
    pass


class NormalizationViolated(CohomaError):
    pass


class MissingStructure(CohomaError):
    pass


class SelfDualNeedsDim4(CohomaError):
    pass


class Dim4Only(CohomaError):
    pass


class MissingMetric(CohomaError):
    pass


class NotBasic(CohomaError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class ScriptError(CohomaError):
    """Parse or elaboration failure in a DSL script."""

    def __init__(self, msg, line=None, col=None):
        loc = f" (line {line}, col {col})" if line is not None else ""
        super().__init__(msg + loc)
        self.line = line
        self.col = col


class ScriptSyntaxError(ScriptError):
    pass


class UnknownName(ScriptError):
    pass
