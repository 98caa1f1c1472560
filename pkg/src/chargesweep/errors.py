"""Exception hierarchy shared by all modules."""


class ChargeSweepError(Exception):
    """Base class for library errors."""

    code = "error"

    def __init__(self, message, **context):
        super().__init__(message)
        self.message = message
        self.context = context

    def to_dict(self):
        return {"code": self.code, "message": self.message, "context": self.context}


class ValidationError(ChargeSweepError, ValueError):
    code = "validation"


class DomainError(ChargeSweepError, ValueError):
    """A kernel was evaluated outside the closed right half-plane."""

    code = "domain"


class QuadratureError(ChargeSweepError, ArithmeticError):
    code = "quadrature"


class EligibilityError(ChargeSweepError, ValueError):
    """Genus-1 balayage requested for a measure charging the origin."""

    code = "eligibility"


class InsufficientSamplesError(ChargeSweepError, ValueError):
    code = "insufficient_samples"


class HypothesisError(ChargeSweepError, ValueError):
    """A generated instance violates a hypothesis of the checked theorem."""

    code = "hypothesis"
