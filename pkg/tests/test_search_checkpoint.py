"""
Unit tests for the SearchCheckpoint utility.
"""

from pathlib import Path
from unittest.mock import MagicMock

import pytest

from src.utils.search_checkpoint import SearchCheckpoint


@pytest.fixture
def mock_path() -> MagicMock:
    """Fixture to mock the Path object for file system interactions."""
    mock_instance = MagicMock(spec=Path)
    mock_instance.exists.return_value = False
    return mock_instance


@pytest.fixture
def checkpoint(tmp_path: Path) -> SearchCheckpoint:
    """Provides a SearchCheckpoint backed by a real file in a temporary directory."""
    return SearchCheckpoint(checkpoint_file=tmp_path / "state" / "search.token")


def test_load_returns_none_when_file_does_not_exist(mock_path: MagicMock):
    """
    GIVEN no checkpoint file exists
    WHEN load() is called
    THEN it should return None, so the search starts from the beginning.
    """
    assert SearchCheckpoint(mock_path).load() is None
    mock_path.read_text.assert_not_called()


def test_record_then_load_returns_token(checkpoint: SearchCheckpoint):
    """
    GIVEN a token has been recorded
    WHEN load() is called
    THEN it should return the same token, and no staging file should remain.
    """
    checkpoint.record("0,5,6,7")

    assert checkpoint.load() == "0,5,6,7"
    assert [path.name for path in checkpoint.checkpoint_file.parent.iterdir()] == ["search.token"]


def test_record_replaces_previous_token(checkpoint: SearchCheckpoint):
    checkpoint.record("0,1,2,3")
    checkpoint.record("0,14,15,16")

    assert checkpoint.load() == "0,14,15,16"


def test_load_returns_none_for_empty_file(checkpoint: SearchCheckpoint):
    checkpoint.checkpoint_file.parent.mkdir(parents=True)
    checkpoint.checkpoint_file.write_text("  \n")

    assert checkpoint.load() is None


def test_load_handles_read_errors(mock_path: MagicMock):
    """
    GIVEN a checkpoint file that cannot be read
    WHEN load() is called
    THEN it should log the error and return None instead of raising.
    """
    mock_path.exists.return_value = True
    mock_path.read_text.side_effect = IOError("Permission denied")

    assert SearchCheckpoint(mock_path).load() is None


def test_record_handles_io_error(mock_path: MagicMock):
    """
    GIVEN the checkpoint directory cannot be created
    WHEN record() is called
    THEN it should log the error without raising.
    """
    mock_path.parent.mkdir.side_effect = IOError("Read-only file system")

    SearchCheckpoint(mock_path).record("0,1,2")

    mock_path.with_suffix.assert_not_called()


def test_reset_deletes_file(checkpoint: SearchCheckpoint):
    checkpoint.record("0,1,2")

    checkpoint.reset()

    assert not checkpoint.checkpoint_file.exists()
    assert checkpoint.load() is None


def test_reset_does_nothing_if_file_does_not_exist(mock_path: MagicMock):
    SearchCheckpoint(mock_path).reset()

    mock_path.unlink.assert_not_called()


def test_reset_handles_unlink_error(mock_path: MagicMock):
    mock_path.exists.return_value = True
    mock_path.unlink.side_effect = IOError("Permission denied")

    SearchCheckpoint(mock_path).reset()

    mock_path.unlink.assert_called_once()
