"""CSV exporter."""

import pandas as pd

from src.export.base import BaseExporter
from src.storage.file_manager import CSV_FLOAT_FORMAT


class CsvExporter(BaseExporter):
    """Export tables as UTF-8 CSV."""

    format_name = "csv"
    file_extension = "csv"

    def render(self, table: pd.DataFrame, title: str = "") -> str:
        return table.to_csv(index=False, lineterminator="\n", float_format=CSV_FLOAT_FORMAT)
