"""Exception types raised by the engine."""


class DomainError(ValueError):
    """An argument lies outside the domain of a payoff or fitness formula."""


class ConfigurationError(ValueError):
    """A parameter set violates a model invariant."""


class ReducibleChainError(ConfigurationError):
    """The birth-death chain has no unique stationary distribution."""

    def __init__(self, message="chain reducible; stationary distribution not unique"):
        super().__init__(message)


class ConvergenceError(ArithmeticError):
    """An iterative solver stopped before reaching its tolerance."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual
