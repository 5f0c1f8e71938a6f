"""
Centralized configuration for the ramification toolkit.
All tunable constants are managed here.
"""
import os
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, Iterator, Optional


# Project paths
PROJECT_ROOT = Path(__file__).parent
LOGS_DIR = PROJECT_ROOT / "logs"
GOLDEN_DIR = PROJECT_ROOT / "tests" / "golden"

SCHEMA_VERSION = "1"

# Section overrides active in the current context (thread or copied context)
_overrides: ContextVar[Dict[str, Any]] = ContextVar("ramify_config_overrides", default={})


class _Section:
    """A configuration section that honours overrides of the current context."""

    def __set_name__(self, owner, name):
        self.name = name

    def __get__(self, obj, objtype=None):
        if obj is None:
            return self
        overridden = _overrides.get().get(self.name)
        return overridden if overridden is not None else obj._sections[self.name]

    def __set__(self, obj, value):
        obj._sections[self.name] = value


@dataclass
class FieldConfig:
    """Finite field k' = F_{p^d} settings."""

    default_degree: int = 1
    # Largest field that may be enumerated (root finding, exhaustive oracles)
    enumeration_limit: int = 4096


@dataclass
class WittConfig:
    """Witt vector law settings."""

    # Longest Witt vectors handled by the universal-polynomial route
    max_length_cap: int = 4
    # Check ghost(S) = ghost(X) + ghost(Y) symbolically when a law is built
    verify_laws: bool = True


@dataclass
class SymbolConfig:
    """Local symbol computation settings."""

    # Witt length slack of the coefficient lift; None means delta = m
    lift_slack: Optional[int] = None
    # Multiplier applied to every derived series precision
    precision_factor: int = 1
    # Extra terms added on top of the derived precision
    precision_margin: int = 2
    # Automatic slack raises on a ghost divisibility failure
    max_slack_retries: int = 1


@dataclass
class ConductorConfig:
    """Class reduction and conductor settings."""

    max_reduction_steps: int = 10000
    # Precision doublings attempted before a PrecisionError escapes
    precision_retries: int = 3


@dataclass
class LoggingConfig:
    """Logging settings."""

    log_level: str = "WARNING"
    log_to_file: bool = False
    json_format: bool = False
    logs_dir: Path = LOGS_DIR


@dataclass
class VerifyConfig:
    """Default case counts for the built-in property suites."""

    seed: int = 0
    max_workers: int = 4
    witt_component_range: int = 3
    unit_cases: int = 1000
    unit_max_level: int = 32
    artin_hasse_terms: int = 64
    symbol_pairs: int = 500
    reciprocity_cases: int = 100
    conductor_cases: int = 200
    modulus_cases: int = 50
    kummer_cases: int = 500
    lattice_cases: int = 200
    dimension_max_level: int = 200


class Config:
    """Main configuration class - singleton."""

    _instance: Optional['Config'] = None

    field = _Section()
    witt = _Section()
    symbol = _Section()
    conductor = _Section()
    logging = _Section()
    verify = _Section()

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return

        self._sections: Dict[str, Any] = {}
        # Initialize sub-configurations
        self.field = FieldConfig()
        self.witt = WittConfig()
        self.symbol = SymbolConfig()
        self.conductor = ConductorConfig()
        self.logging = LoggingConfig()
        self.verify = VerifyConfig()

        # Environment overrides
        self._load_from_environment()

        self._initialized = True

    def _load_from_environment(self):
        """Load configuration from environment variables if present."""

        if log_level := os.getenv("RAMIFY_LOG_LEVEL"):
            self.logging.log_level = log_level.upper()

        if log_to_file := os.getenv("RAMIFY_LOG_TO_FILE"):
            self.logging.log_to_file = log_to_file.lower() in ("true", "1", "yes")

        if witt_cap := os.getenv("RAMIFY_WITT_CAP"):
            self.witt.max_length_cap = int(witt_cap)

        if slack := os.getenv("RAMIFY_LIFT_SLACK"):
            self.symbol.lift_slack = int(slack)

        if factor := os.getenv("RAMIFY_PRECISION_FACTOR"):
            self.symbol.precision_factor = int(factor)

        if workers := os.getenv("RAMIFY_VERIFY_WORKERS"):
            self.verify.max_workers = int(workers)

    @contextmanager
    def override(self, section: str, **values) -> Iterator[None]:
        """
        Temporarily replace fields of one configuration section.

        The override is visible only in the current context: other threads keep
        their own view, and workers started through contextvars.copy_context()
        inherit it. Overrides nest.

        Example:
            >>> with get_config().override("symbol", precision_factor=2):
            >>>     value = schmid_witt_symbol(f, g)
        """
        if not isinstance(getattr(type(self), section, None), _Section):
            raise KeyError(f"unknown configuration section {section!r}")
        replaced = replace(getattr(self, section), **values)
        token = _overrides.set({**_overrides.get(), section: replaced})
        try:
            yield
        finally:
            _overrides.reset(token)

    def to_dict(self) -> dict:
        """Export configuration as dictionary for logging/debugging."""
        return {
            "field": {
                "default_degree": self.field.default_degree,
                "enumeration_limit": self.field.enumeration_limit,
            },
            "witt": {
                "max_length_cap": self.witt.max_length_cap,
                "verify_laws": self.witt.verify_laws,
            },
            "symbol": {
                "lift_slack": self.symbol.lift_slack,
                "precision_factor": self.symbol.precision_factor,
                "precision_margin": self.symbol.precision_margin,
                "max_slack_retries": self.symbol.max_slack_retries,
            },
            "conductor": {
                "max_reduction_steps": self.conductor.max_reduction_steps,
                "precision_retries": self.conductor.precision_retries,
            },
            "logging": {
                "log_level": self.logging.log_level,
                "log_to_file": self.logging.log_to_file,
            },
            "verify": {
                "seed": self.verify.seed,
                "max_workers": self.verify.max_workers,
            },
        }


# Global singleton instance
config = Config()


def get_config() -> Config:
    """Get global configuration instance."""
    return config


if __name__ == "__main__":
    cfg = get_config()
    print("Configuration loaded successfully:")
    for section, values in cfg.to_dict().items():
        print(f"  {section}: {values}")
