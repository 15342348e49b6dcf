"""
Search checkpoint utility so long searches can be resumed after an interruption.
"""

import logging
from pathlib import Path
from typing import Optional

logger = logging.getLogger(__name__)


class SearchCheckpoint:
    """
    A file holding the position token of a running search.

    The token names the last exponent tuple the search has fully processed. A search started with the token
    scans only strictly later tuples. The file is removed once a search completes.
    """

    def __init__(self, checkpoint_file: Path):
        """
        Initialize the checkpoint.

        Args:
            checkpoint_file: The path to the file used for persisting the position token.
        """
        self.checkpoint_file = checkpoint_file


    def load(self) -> Optional[str]:
        """
        Read the stored position token.

        Returns:
            Optional[str]: The token, or None when there is no usable checkpoint.
        """
        # If the checkpoint file does not exist, there is nothing to resume
        if not self.checkpoint_file.exists():
            return None

        try:
            token = self.checkpoint_file.read_text().strip()

        # An unreadable checkpoint means starting over, never aborting
        except (IOError, UnicodeDecodeError) as e:
            logger.error(f"Error reading search checkpoint {self.checkpoint_file}: {e}")
            return None

        if not token:
            return None

        logger.info(f"Loaded search checkpoint {self.checkpoint_file} at position {token}")
        return token


    def record(self, token: str) -> None:
        """Persist a position token, replacing the previous one."""
        try:
            self.checkpoint_file.parent.mkdir(parents=True, exist_ok=True)

            # Write next to the target and swap, so a crash never leaves a truncated token
            staging = self.checkpoint_file.with_suffix(self.checkpoint_file.suffix + ".tmp")
            staging.write_text(f"{token}\n")
            staging.replace(self.checkpoint_file)
            logger.debug(f"Search checkpoint recorded at position {token}")

        except IOError as e:
            logger.error(f"Failed to record search checkpoint {self.checkpoint_file}: {e}")


    def reset(self) -> None:
        """Delete the checkpoint after a completed search."""
        if self.checkpoint_file.exists():
            try:
                self.checkpoint_file.unlink()
                logger.info("Search checkpoint has been reset after a completed search.")

            except IOError as e:
                logger.error(f"Failed to reset search checkpoint {self.checkpoint_file}: {e}")
