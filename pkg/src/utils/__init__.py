"""
Shared utilities for the ramification toolkit.
"""
from .validation import (
    ExpressionSyntaxError,
    RamificationError,
    ValidationError,
    require_positive,
    require_prime,
    validate_cli_flags,
    validate_group_literal,
    validate_modulus_literal,
)
from .logging_config import get_logger, OperationLogger, setup_logging

__all__ = [
    'ExpressionSyntaxError',
    'RamificationError',
    'ValidationError',
    'require_positive',
    'require_prime',
    'validate_cli_flags',
    'validate_group_literal',
    'validate_modulus_literal',
    'get_logger',
    'OperationLogger',
    'setup_logging',
]
