"""
Custom exception hierarchy for the credit score simulator.

Each exception carries a context dict for structured logging and an
exit code the CLI returns when the exception escapes a command.
"""


class CreditScoreError(Exception):
    """Base exception for all credit score simulator errors."""

    exit_code: int = 1

    def __init__(self, message: str, context: dict | None = None):
        self.context = context or {}
        super().__init__(message)


class ConfigurationError(CreditScoreError):
    """Raised when configuration is invalid or cannot be parsed."""

    exit_code = 2


class InvalidParameterError(ConfigurationError):
    """Raised when a sampler receives a parameter outside its domain."""
    pass


class SchemaError(CreditScoreError):
    """Raised when an input file does not match its declared schema."""

    exit_code = 3


class NumericError(CreditScoreError):
    """Base exception for numerical failures."""

    exit_code = 4


class DivergenceError(NumericError):
    """Raised when gradient descent produces a non-finite cost."""
    pass


class SingularSystemError(NumericError):
    """Raised when the normal equations are rank deficient."""
    pass


class DegenerateFeatureError(NumericError):
    """Raised when a feature column has zero range and cannot be scaled."""
    pass


class InvalidInputError(CreditScoreError):
    """Raised when input data has the wrong size or shape."""

    exit_code = 4


class ArtifactIOError(CreditScoreError):
    """Raised when an artifact file cannot be read or written."""

    exit_code = 5
