class NicholsException(Exception):
    """Base exception for all computation and input errors."""
    exit_code = 2

    def __init__(self, detail: str = "Computation failed"):
        super().__init__(detail)
        self.detail = detail


class InputError(NicholsException):
    """Malformed input exception."""
    exit_code = 2

    def __init__(self, detail: str = "Invalid input"):
        super().__init__(detail=detail)


class LetterOutOfRange(InputError):
    """Word letter outside the alphabet exception."""
    def __init__(self, detail: str = "Letter outside 1..N"):
        super().__init__(detail=detail)


class DegreeTooSmall(InputError):
    """Generator does not fit the element degree exception."""
    def __init__(self, detail: str = "Element degree too small for generator"):
        super().__init__(detail=detail)


class DegreeMismatch(InputError):
    """Operator and element degree mismatch exception."""
    def __init__(self, detail: str = "Degree mismatch"):
        super().__init__(detail=detail)


class UnknownName(InputError):
    """Unknown operator name exception."""
    def __init__(self, detail: str = "Unknown operator name"):
        super().__init__(detail=detail)


class BadParameters(InputError):
    """Invalid operator or command parameters exception."""
    def __init__(self, detail: str = "Bad parameters"):
        super().__init__(detail=detail)


class NonMonomialBraiding(InputError):
    """Braiding entry is not a pure power of t exception."""
    def __init__(self, detail: str = "Braiding matrix entries must be pure t-powers"):
        super().__init__(detail=detail)


class InvalidCartan(InputError):
    """Generalized Cartan matrix axiom violation exception."""
    def __init__(self, detail: str = "Invalid generalized Cartan matrix"):
        super().__init__(detail=detail)


class NotSymmetric(InputError):
    """Braiding matrix is not symmetric exception."""
    def __init__(self, detail: str = "Braiding matrix must be symmetric"):
        super().__init__(detail=detail)


class NotSubspace(InputError):
    """Subspace containment violated exception."""
    def __init__(self, detail: str = "Second space is not contained in the first"):
        super().__init__(detail=detail)


class MatrixFileError(InputError):
    """Unreadable or malformed matrix file exception."""
    def __init__(self, detail: str = "Malformed matrix file"):
        super().__init__(detail=detail)


class EvaluationError(NicholsException):
    """Specialization at q = 1 is undefined exception."""
    exit_code = 2

    def __init__(self, detail: str = "Evaluation at t = 1 undefined"):
        super().__init__(detail=detail)


class DenominatorVanishesAtOne(EvaluationError):
    """Scalar has a pole at t = 1 exception."""
    def __init__(self, detail: str = "Denominator vanishes at t = 1"):
        super().__init__(detail=detail)


class NotInA1(EvaluationError):
    """Coefficient outside the localization at t = 1 exception."""
    def __init__(self, detail: str = "Coefficient has a pole at t = 1"):
        super().__init__(detail=detail)


class VerificationFailure(NicholsException):
    """Identity or self-check counterexample exception."""
    exit_code = 1

    def __init__(self, detail: str = "Verification failed"):
        super().__init__(detail=detail)
