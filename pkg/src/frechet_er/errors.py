"""Exception hierarchy.

Every error carries a short ``code`` so the command line can emit a
machine-parsable ``{code, message}`` line.
"""


class FrechetERError(ValueError):
    code = "Error"


class InvalidParams(FrechetERError):
    code = "InvalidParams"


class DimensionMismatch(FrechetERError):
    code = "DimensionMismatch"


class GraphFormatError(FrechetERError):
    code = "GraphFormatError"


class NotGraphical(FrechetERError):
    code = "NotGraphical"


class TooLarge(FrechetERError):
    code = "TooLarge"


class NotRegular(FrechetERError):
    code = "NotRegular"


class UnsupportedCase(FrechetERError):
    code = "UnsupportedCase"


class IntegerC(FrechetERError):
    code = "IntegerC"


class Ambiguous(FrechetERError):
    code = "Ambiguous"


class OutOfRange(FrechetERError):
    code = "OutOfRange"


class LengthMismatch(FrechetERError):
    code = "LengthMismatch"


class DegenerateVariance(FrechetERError):
    code = "DegenerateVariance"


class EmptySample(FrechetERError):
    code = "EmptySample"


class OracleMismatch(FrechetERError):
    """Raised when an exhaustive check disagrees with a closed form."""

    code = "OracleMismatch"
