"""Error hierarchy shared by the whole kernel."""


class MathparError(Exception):
    """Base class for every error the kernel raises on purpose."""


class LexError(MathparError):
    def __init__(self, message, line=None, col=None):
        super().__init__(message)
        self.line = line
        self.col = col


class ParseError(MathparError):
    def __init__(self, message, line=None, col=None, expected=None):
        super().__init__(message)
        self.line = line
        self.col = col
        self.expected = expected or ()


class EvalError(MathparError):
    """Runtime evaluation failure; carries the statement index when known."""

    def __init__(self, message, statement_index=None):
        super().__init__(message)
        self.statement_index = statement_index


# -- domain / arithmetic ------------------------------------------------------

class UnknownSpace(MathparError):
    pass


class BadModulus(MathparError):
    pass


class DivisionByZero(MathparError):
    pass


class Overflow(MathparError):
    pass


class NonInvertible(MathparError):
    pass


class Unordered(MathparError):
    pass


class BadParams(MathparError):
    pass


class DomainError(MathparError):
    pass


class UnknownFunction(MathparError):
    pass


class UnsupportedCarrier(MathparError):
    pass


# -- polynomial / solving -----------------------------------------------------

class NotZeroDimensional(MathparError):
    pass


class NoSolution(MathparError):
    pass


class ZeroPolynomial(MathparError):
    pass


# -- matrices -----------------------------------------------------------------

class NotSquare(MathparError):
    pass


class Singular(MathparError):
    pass


class DimensionMismatch(MathparError):
    pass


# -- tropical -----------------------------------------------------------------

class DivergentClosure(MathparError):
    pass


class NegativeCycle(MathparError):
    pass


class UnsupportedAlgebra(MathparError):
    pass


class Unreachable(MathparError):
    pass


class BadVertex(MathparError):
    pass


# -- differential equations ---------------------------------------------------

class NonlinearTerm(MathparError):
    pass


class NonconstantCoefficient(MathparError):
    pass


class UnsupportedRHS(MathparError):
    pass


class DuplicateCondition(MathparError):
    pass


class NonzeroPoint(MathparError):
    pass


class SingularSystem(MathparError):
    pass


class IncompleteConditions(MathparError):
    pass


class ImproperFraction(MathparError):
    pass


class IrreducibleDenominator(MathparError):
    pass


# -- runtime / service --------------------------------------------------------

class NonBooleanCondition(MathparError):
    pass


class RuntimeLimit(MathparError):
    pass


class ArityMismatch(MathparError):
    pass


class MissingReturn(MathparError):
    pass


class FileNotFound(MathparError):
    pass


class BadRange(MathparError):
    pass


class NonNumericSample(MathparError):
    pass


class UnknownSession(MathparError):
    pass


class PayloadTooLarge(MathparError):
    pass


class UnsupportedCluster(MathparError):
    """Cluster operators are recognized by name but have no backend here."""
