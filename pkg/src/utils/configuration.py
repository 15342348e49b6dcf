"""
Centralized configuration management for the Sparse Power Oracle.
"""

import logging
import os
import re
import sys
from pathlib import Path
from typing import Any, Optional

# Handle Python version compatibility for TOML loading
if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)

# Values used for every key the configuration file does not set
DEFAULT_CONFIG: dict[str, Any] = {
    "THREADS": 1,
    "RESIDUE_PRUNING": True,
    "CHECKPOINT_INTERVAL": 10000,
    "MAX_FAMILY_INDEX": 10000,
    "OUTPUT_DIR": "data/output",
    "LOG_LEVEL": "INFO",
}

VALID_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class ConfigurationError(Exception):
    """Raised when configuration loading or validation fails."""

    pass


# --- Configuration Loading ---


class ConfigLoader:
    """Internal class to load configuration from TOML and environment variables."""

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize the config loader.

        Args:
            config_path: Explicit configuration file. Without it the project root is searched, and when no
                file is found the built-in defaults apply.
        """
        self.config_path = config_path or self._get_default_config_path()
        self._env_var_pattern = re.compile(r"\$([A-Z_][A-Z0-9_]*)")


    def _get_default_config_path(self) -> Optional[str]:
        """Look for config.toml from this file upwards to the filesystem root."""
        current_path = Path(__file__).parent
        while current_path != current_path.parent:
            config_path = current_path / "config.toml"
            if config_path.exists():
                return str(config_path)
            current_path = current_path.parent

        return None


    def _substitute_env_vars(self, config_toml: Any) -> Any:
        """
        Recursively substitute environment variables in the config.

        Supports $VARIABLE_NAME syntax for environment variable substitution.

        Args:
            config_toml: config file to process

        Returns:
            Processed config with environment variables substituted

        Raises:
            ConfigurationError: If a referenced environment variable is missing
        """
        if isinstance(config_toml, str):
            for env_var in self._env_var_pattern.findall(config_toml):
                env_value = os.getenv(env_var)
                if env_value is None:
                    raise ConfigurationError(f"Required environment variable {env_var} is not set")

                config_toml = config_toml.replace(f"${env_var}", env_value)

            return config_toml

        elif isinstance(config_toml, dict):
            return {k: self._substitute_env_vars(v) for k, v in config_toml.items()}

        elif isinstance(config_toml, list):
            return [self._substitute_env_vars(item) for item in config_toml]

        return config_toml


    def _get_raw_config(self) -> dict:
        """
        Get raw configuration from the TOML file.

        Returns:
            toml file as a dictionary, empty when no file was found

        Raises:
            ConfigurationError: If an explicit file is missing or any file fails to parse
        """
        if self.config_path is None:
            logger.info("No config.toml found, using built-in defaults")
            return {}

        try:
            with open(self.config_path, "rb") as f:
                return tomllib.load(f)

        except FileNotFoundError as e:
            raise ConfigurationError(f"Configuration not found: {self.config_path}") from e

        except Exception as e:
            raise ConfigurationError(f"Failed to parse configuration: {e}") from e


    def get_flat_config(self) -> dict[str, Any]:
        """
        Get configuration in flat format.

        Returns:
            Flat dictionary with all configuration values, defaults filled in

        Raises:
            ConfigurationError: If a value cannot be converted to its type
        """
        substituted_config = self._substitute_env_vars(self._get_raw_config())


        def pick(section: str, key: str) -> Any:
            value = substituted_config.get(section, {}).get(key)
            return DEFAULT_CONFIG[key] if value is None or value == "" else value


        def to_int(key: str, value: Any) -> int:
            if isinstance(value, bool):
                raise ConfigurationError(f"Invalid {key}: {value!r} - must be an integer")
            try:
                return int(value)
            except (TypeError, ValueError) as e:
                raise ConfigurationError(f"Invalid {key}: {value!r} - must be an integer") from e


        def to_bool(key: str, value: Any) -> bool:
            if isinstance(value, bool):
                return value
            if str(value).strip().lower() in ("true", "1", "yes"):
                return True
            if str(value).strip().lower() in ("false", "0", "no"):
                return False
            raise ConfigurationError(f"Invalid {key}: {value!r} - must be a boolean")

        # fmt: off
        # Convert nested structure to flat format
        return {
            # Search settings
            "THREADS": to_int("THREADS", pick("search", "THREADS")),
            "RESIDUE_PRUNING": to_bool("RESIDUE_PRUNING", pick("search", "RESIDUE_PRUNING")),
            "CHECKPOINT_INTERVAL": to_int("CHECKPOINT_INTERVAL", pick("search", "CHECKPOINT_INTERVAL")),

            # Family generation
            "MAX_FAMILY_INDEX": to_int("MAX_FAMILY_INDEX", pick("families", "MAX_FAMILY_INDEX")),

            # Output and logging
            "OUTPUT_DIR": str(pick("output", "OUTPUT_DIR")),
            "LOG_LEVEL": str(pick("logging", "LOG_LEVEL")).upper(),
        }
        # fmt: on


def _validate_config(config: dict[str, Any]) -> dict[str, Any]:
    """Check the ranges of the flat configuration values."""
    minimums = {"THREADS": 1, "CHECKPOINT_INTERVAL": 1, "MAX_FAMILY_INDEX": 0}
    out_of_range = [key for key, minimum in minimums.items() if config[key] < minimum]
    if out_of_range:
        raise ConfigurationError(
            "Configuration values out of range: "
            + ", ".join(f"{key}={config[key]} (minimum {minimums[key]})" for key in sorted(out_of_range))
        )

    if config["LOG_LEVEL"] not in VALID_LOG_LEVELS:
        raise ConfigurationError(
            f"Invalid LOG_LEVEL: {config['LOG_LEVEL']} - must be one of {', '.join(VALID_LOG_LEVELS)}."
        )

    if not config["OUTPUT_DIR"].strip():
        raise ConfigurationError("OUTPUT_DIR must not be empty.")

    return config


def load_config(config_path: Optional[str] = None) -> dict[str, Any]:
    """Loads, validates, and returns the application configuration."""
    loader = ConfigLoader(config_path)
    flat_config = loader.get_flat_config()
    logger.info("Successfully loaded configuration")
    return _validate_config(flat_config)
