"""
Unit tests for the configuration loader and validator.
"""

from pathlib import Path
from unittest.mock import patch

import pytest

from src.utils.configuration import (
    DEFAULT_CONFIG,
    ConfigLoader,
    ConfigurationError,
    _validate_config,
    load_config,
)

# --- Constants for Mocks ---

MOCK_TOML_CONFIG = """
[search]
THREADS = "$TEST_THREADS"
RESIDUE_PRUNING = false

[output]
OUTPUT_DIR = "$TEST_OUTPUT_ROOT/runs"

[logging]
LOG_LEVEL = "debug"
"""

MOCK_TOML_INVALID_INT = """
[search]
CHECKPOINT_INTERVAL = "not-an-integer"
"""

MOCK_TOML_INVALID_BOOL = """
[search]
RESIDUE_PRUNING = "sometimes"
"""

MOCK_TOML_EMPTY_VALUES = """
[search]
THREADS = ""

[families]
# MAX_FAMILY_INDEX is intentionally omitted to test the default
"""


# --- Fixtures ---


@pytest.fixture
def valid_config() -> dict:
    """Provides a complete and valid flat configuration."""
    return dict(DEFAULT_CONFIG)


@pytest.fixture
def temp_config_file(tmp_path: Path) -> str:
    """Creates a temporary config file with standard mock data."""
    config_path = tmp_path / "config.toml"
    config_path.write_text(MOCK_TOML_CONFIG)
    return str(config_path)


@pytest.fixture
def mock_env(monkeypatch):
    """A fixture to mock standard environment variables."""
    monkeypatch.setenv("TEST_THREADS", "4")
    monkeypatch.setenv("TEST_OUTPUT_ROOT", "/srv/oracle")
    return monkeypatch


def write_config(tmp_path: Path, content: str) -> str:
    config_path = tmp_path / "config.toml"
    config_path.write_text(content)
    return str(config_path)


# --- Test Classes ---


class TestConfigLoader:
    """Tests for the ConfigLoader class."""


    def test_load_config_succeeds_with_env_var_substitution(self, temp_config_file: str, mock_env):
        """
        GIVEN a valid config file and set environment variables
        WHEN the config is loaded
        THEN it should substitute env vars and convert types.
        """
        # Arrange
        loader = ConfigLoader(config_path=temp_config_file)

        # Act
        config = loader.get_flat_config()

        # Assert
        assert config["THREADS"] == 4
        assert config["RESIDUE_PRUNING"] is False
        assert config["OUTPUT_DIR"] == "/srv/oracle/runs"
        assert config["LOG_LEVEL"] == "DEBUG"


    def test_load_config_fills_missing_keys_with_defaults(self, temp_config_file: str, mock_env):
        """
        GIVEN a config file that omits some keys
        WHEN the config is loaded
        THEN the omitted keys take the built-in defaults.
        """
        config = ConfigLoader(config_path=temp_config_file).get_flat_config()

        assert config["CHECKPOINT_INTERVAL"] == DEFAULT_CONFIG["CHECKPOINT_INTERVAL"]
        assert config["MAX_FAMILY_INDEX"] == DEFAULT_CONFIG["MAX_FAMILY_INDEX"]


    def test_load_config_treats_empty_values_as_unset(self, tmp_path: Path):
        """
        GIVEN a config with an empty string and an omitted key
        WHEN the config is loaded
        THEN both fall back to the defaults.
        """
        config = ConfigLoader(config_path=write_config(tmp_path, MOCK_TOML_EMPTY_VALUES)).get_flat_config()

        assert config["THREADS"] == 1
        assert config["MAX_FAMILY_INDEX"] == 10000


    def test_load_config_fails_if_explicit_file_missing(self):
        """
        GIVEN an explicit path that does not exist
        WHEN the config is loaded
        THEN it should raise a ConfigurationError.
        """
        with pytest.raises(ConfigurationError, match="Configuration not found"):
            ConfigLoader(config_path="/a/fake/path/config.toml").get_flat_config()


    def test_load_config_fails_if_toml_is_malformed(self, tmp_path: Path):
        """
        GIVEN a malformed TOML file
        WHEN the config is loaded
        THEN it should raise a ConfigurationError.
        """
        # Arrange
        config_path = write_config(tmp_path, "this is not valid toml")

        # Act & Assert
        with pytest.raises(ConfigurationError, match="Failed to parse configuration"):
            ConfigLoader(config_path=config_path).get_flat_config()


    def test_load_config_fails_if_env_var_is_missing(self, temp_config_file: str, monkeypatch):
        """
        GIVEN a config referencing an unset environment variable
        WHEN the config is loaded
        THEN it should raise a ConfigurationError.
        """
        monkeypatch.delenv("TEST_THREADS", raising=False)

        with pytest.raises(ConfigurationError, match="Required environment variable TEST_THREADS is not set"):
            ConfigLoader(config_path=temp_config_file).get_flat_config()


    @pytest.mark.parametrize(
        "content, match",
        [
            (MOCK_TOML_INVALID_INT, "Invalid CHECKPOINT_INTERVAL"),
            (MOCK_TOML_INVALID_BOOL, "Invalid RESIDUE_PRUNING"),
        ],
        ids=["bad-integer", "bad-boolean"],
    )
    def test_load_config_fails_on_unconvertible_value(self, tmp_path: Path, content: str, match: str):
        """
        GIVEN a config value that cannot be converted to its type
        WHEN the config is loaded
        THEN it should raise a ConfigurationError naming the key.
        """
        loader = ConfigLoader(config_path=write_config(tmp_path, content))

        with pytest.raises(ConfigurationError, match=match):
            loader.get_flat_config()


    @pytest.mark.parametrize(
        "start_dir_str",
        ["src/utils", "src/utils/deep/nested"],
        ids=["from-nested-dir", "from-deeply-nested-dir"],
    )
    def test_get_default_config_path_finds_root_config(self, tmp_path: Path, start_dir_str: str):
        """
        GIVEN a config.toml at the project root
        WHEN the default config path is retrieved from a nested directory
        THEN it should traverse up and find the root config.toml.
        """
        # Arrange
        start_dir = tmp_path / start_dir_str
        start_dir.mkdir(parents=True)
        config_in_root_path = tmp_path / "config.toml"
        config_in_root_path.touch()

        # Act
        with patch("src.utils.configuration.__file__", str(start_dir / "configuration.py")):
            found_path = ConfigLoader()._get_default_config_path()

        # Assert
        assert found_path == str(config_in_root_path)


    def test_missing_default_config_falls_back_to_defaults(self, monkeypatch):
        """
        GIVEN that no config.toml exists in the path hierarchy
        WHEN the configuration is loaded without an explicit path
        THEN the built-in defaults are returned.
        """
        # The mocked function must accept `path_obj` because it's replacing an instance method
        monkeypatch.setattr(Path, "exists", lambda path_obj: False)

        loader = ConfigLoader()

        assert loader.config_path is None
        assert loader.get_flat_config() == DEFAULT_CONFIG


class TestConfigValidation:
    """Tests for the range checks of the flat configuration."""


    def test_validate_config_accepts_defaults(self, valid_config: dict):
        assert _validate_config(valid_config) == valid_config


    @pytest.mark.parametrize(
        "key, value",
        [("THREADS", 0), ("CHECKPOINT_INTERVAL", 0), ("MAX_FAMILY_INDEX", -1)],
        ids=["zero-threads", "zero-interval", "negative-family-index"],
    )
    def test_validate_config_rejects_out_of_range_values(self, valid_config: dict, key: str, value: int):
        """
        GIVEN a configuration with a value below its minimum
        WHEN it is validated
        THEN a ConfigurationError names the key.
        """
        valid_config[key] = value

        with pytest.raises(ConfigurationError, match=key):
            _validate_config(valid_config)


    def test_validate_config_rejects_unknown_log_level(self, valid_config: dict):
        valid_config["LOG_LEVEL"] = "CHATTY"

        with pytest.raises(ConfigurationError, match="Invalid LOG_LEVEL"):
            _validate_config(valid_config)


    def test_validate_config_rejects_empty_output_dir(self, valid_config: dict):
        valid_config["OUTPUT_DIR"] = "  "

        with pytest.raises(ConfigurationError, match="OUTPUT_DIR"):
            _validate_config(valid_config)


class TestLoadConfig:
    """Tests for the load_config entry point."""


    def test_load_config_reads_and_validates(self, temp_config_file: str, mock_env):
        config = load_config(temp_config_file)

        assert config["THREADS"] == 4
        assert config["LOG_LEVEL"] == "DEBUG"


    def test_load_config_reads_repository_config(self):
        """
        GIVEN the config.toml shipped at the repository root
        WHEN it is loaded without an explicit path
        THEN it validates and matches the built-in defaults.
        """
        assert load_config() == DEFAULT_CONFIG
