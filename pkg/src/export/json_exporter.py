"""JSON exporter."""

import json

import pandas as pd

from src.export.base import BaseExporter
from src.storage.file_manager import _jsonable


class JsonExporter(BaseExporter):
    """Export tables as a JSON list of row objects."""

    format_name = "json"
    file_extension = "json"

    def render(self, table: pd.DataFrame, title: str = "") -> str:
        records = table.astype(object).where(table.notna(), None).to_dict(orient="records")
        return json.dumps(_jsonable(records), indent=2, ensure_ascii=False) + "\n"
