"""Exception types shared across the engine."""


class EngineError(Exception):
    """Base class for all engine-specific failures."""


class DomainError(EngineError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class IntegrationDomainError(EngineError):
    """The integrand returned a non-finite value inside the integration interval."""

    def __init__(self, abscissa: float, value: float):
        self.abscissa = abscissa
        self.value = value
        super().__init__(
            f"integrand evaluated to non-finite value {value!r} at x={abscissa!r}"
        )


class ModelInconsistencyError(EngineError):
    """A quantity violated a structural model assumption (e.g. a decreasing CDF)."""


class QuadratureError(EngineError):
    """Adaptive quadrature failed to converge; carries context labels."""


class ConfigError(EngineError):
    """Configuration file is malformed; ``key_path`` names the offending key."""

    def __init__(self, key_path: str, message: str):
        self.key_path = key_path
        super().__init__(f"{key_path}: {message}")
