"""Result-table export."""

from src.config import ExportFormat
from src.errors import ValidationError
from src.export.base import BaseExporter
from src.export.csv_exporter import CsvExporter
from src.export.json_exporter import JsonExporter
from src.export.latex_exporter import LatexExporter

_EXPORTERS: dict[ExportFormat, type[BaseExporter]] = {
    ExportFormat.CSV: CsvExporter,
    ExportFormat.JSON: JsonExporter,
    ExportFormat.LATEX: LatexExporter,
}


def get_exporter(format: ExportFormat | str) -> BaseExporter:
    """Get an exporter instance for a format name."""
    try:
        return _EXPORTERS[ExportFormat(format)]()
    except ValueError as e:
        raise ValidationError(f"Unknown export format: {format}") from e


__all__ = [
    "BaseExporter",
    "CsvExporter",
    "JsonExporter",
    "LatexExporter",
    "get_exporter",
]
