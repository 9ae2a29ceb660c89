"""Exception hierarchy shared by the core modules and the CLI.

Every error carries the process exit code the CLI maps it to.
"""


class AknotError(Exception):
    exit_code = 1


class InputError(AknotError):
    exit_code = 2


class MalformedCode(InputError):
    pass


class Unrealizable(InputError):
    pass


class LinkNotKnot(InputError):
    pass


class InconsistentArcs(InputError):
    pass


class NonCoprime(InputError):
    pass


class MeridianNotGenerator(InputError):
    pass


class LineThroughOrigin(InputError):
    pass


class OperatorParseError(InputError):
    pass


class PolynomialError(AknotError):
    exit_code = 2


class NotDivisible(PolynomialError):
    pass


class ZeroPolynomial(PolynomialError):
    pass


class BothConstant(PolynomialError):
    pass


class ZeroOperator(PolynomialError):
    pass


class NonCommutingBoundary(AknotError):
    exit_code = 4


class EliminationTimeout(AknotError):
    """Raised when an elimination exceeds its time budget.

    Args:
        stage (str): The pipeline stage that was running.
        partial (dict): Whatever was computed before the deadline, JSON-ready.
    """

    exit_code = 3

    def __init__(self, message, stage="eliminate", partial=None):
        super().__init__(message)
        self.stage = stage
        self.partial = partial or {}


class EmptyEliminant(AknotError):
    exit_code = 4
