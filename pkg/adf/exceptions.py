"""Error kinds raised by the simulator."""


class AdfError(Exception):
    """Base class for every simulator error."""


class InvalidArgumentError(AdfError, ValueError):
    """An argument violates an operation's precondition."""


class DomainError(AdfError, ValueError):
    """A special function was evaluated outside its real domain."""


class DegenerateDensityError(AdfError, ValueError):
    """An antenna density has no mass left to normalize or invert."""


class SingularGeometryError(AdfError, ArithmeticError):
    """Two points of a propagation path coincide."""


class OutOfRegimeError(AdfError, ValueError):
    """Near-field factors fall outside the range the asymptotic model covers."""


class InfeasibleParametersError(AdfError, ValueError):
    """A closed-form density would turn negative for the requested parameters."""


class IllConditionedError(AdfError, ArithmeticError):
    """A matrix that must be inverted is numerically singular."""


class ConfigError(AdfError):
    """An experiment configuration failed validation.

    ``errors`` holds every message found, as ``"section.field: message"``.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__('; '.join(self.errors) if self.errors else 'invalid configuration')
