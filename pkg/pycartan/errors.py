"""Exceptions raised by pycartan"""


class PycartanError(Exception):
    """Base class of every domain error in pycartan"""


class DivisionByZero(PycartanError, ZeroDivisionError):
    """A denominator is identically zero"""


class JetOrderOverflow(PycartanError, OverflowError):
    """Differentiation would exceed the registered jet order"""


class MissingBinding(PycartanError, LookupError):
    """A symbol has no value in a substitution or evaluation"""


class NearSingularEvaluation(PycartanError, ArithmeticError):
    """Numeric denominator fell below the configured floor"""


class ChartMismatch(PycartanError, ValueError):
    """Objects living on different coordinate charts were combined"""


class DegreeMismatch(PycartanError, ValueError):
    """A differential form has the wrong degree for the operation"""


class SingularMatrix(PycartanError, ArithmeticError):
    """A square matrix has no inverse"""


class SingularCoframe(SingularMatrix):
    """The coframe forms are linearly dependent"""


class SingularMetric(SingularMatrix):
    """The constant frame metric is degenerate"""


class InconsistentSystem(PycartanError, ArithmeticError):
    """A linear system has no solution"""


class NotAdapted(InconsistentSystem):
    """The coframe does not satisfy the structure equations"""


class DegenerateDistribution(PycartanError, ValueError):
    """The distribution is not generic (f'' or Θ⁽⁴⁾ vanishes identically)"""


class ChangeOfChartFailure(PycartanError, ArithmeticError):
    """Rewritten forms do not span the expected annihilator"""


class PropositionMismatch(PycartanError, AssertionError):
    """The transformed a₅ does not match −α₅/Θ⁽⁴⁾¹²"""


class SingularThirdDerivative(PycartanError, ArithmeticError):
    """Leading derivative of the ODE dropped below the guard"""


class NotATransform(PycartanError, ValueError):
    """The parametric curve (q, f) is not a graph over q"""


class SpecSyntaxError(PycartanError, ValueError):
    """A function specification could not be parsed

    :param message: what went wrong
    :param text: the full input
    :param position: zero based offset of the offending character
    """
    def __init__(self, message: str, text: str, position: int):
        self.message = message
        self.text = text
        self.position = position
        super().__init__(message, text, position)

    def __str__(self) -> str:
        return "{} at position {}\n  {}\n  {}^".format(
            self.message, self.position, self.text, ' ' * self.position)

