"""Exception types raised across the package."""


class SpinquadError(Exception):
    """Base class for all package errors."""


class ZeroVector(SpinquadError, ValueError):
    pass


class ZeroSpinor(SpinquadError, ValueError):
    pass


class InvalidReducedPredicate(SpinquadError, ValueError):
    """A directly constructed (P, Q, U, V, c) violates P.U = 0 or Q.V = 0."""


class ImproperPredicate(SpinquadError, ValueError):
    pass


class DegenerateEigenvector(SpinquadError, ArithmeticError):
    """The closed-form pinor eigenvector vanishes (w0 ~ 0)."""


class NoEigenplane(SpinquadError, ArithmeticError):
    pass


class EmptyCase(SpinquadError, ValueError):
    pass


class OutOfDomain(SpinquadError, ValueError):
    pass


class NegativeRadicand(SpinquadError, ArithmeticError):
    """A chart radicand is clearly negative, i.e. the case was misclassified."""


class AtPole(SpinquadError, ValueError):
    pass


class EmptyMesh(SpinquadError, ValueError):
    pass


class SceneSyntaxError(SpinquadError, ValueError):
    def __init__(self, line: int, col: int, message: str):
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"line {line}, col {col}: {message}")
