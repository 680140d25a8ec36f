"""Base exporter class."""

from abc import ABC, abstractmethod
from pathlib import Path

import pandas as pd

from src.storage.file_manager import FileManager
from src.utils.logger import get_logger

logger = get_logger(__name__)


class BaseExporter(ABC):
    """Base class for result-table exporters."""

    format_name: str = "base"
    file_extension: str = ""

    def __init__(self):
        """Initialize the exporter."""
        self._logger = get_logger(f"export.{self.format_name}")

    @abstractmethod
    def render(self, table: pd.DataFrame, title: str = "") -> str:
        """Render the table in the target format.

        Args:
            table: Result table
            title: Caption or title, where the format has one

        Returns:
            File content
        """

    def export(self, table: pd.DataFrame, files: FileManager, stem: str, title: str = "") -> Path:
        """Render ``table`` and save it as ``<stem>.<extension>``."""
        path = files.save_text(f"{stem}.{self.file_extension}", self.render(table, title))
        self._logger.info(f"Exported {len(table)} rows to {path}")
        return path
