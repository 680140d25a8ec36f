"""Storage modules for eco-community runs."""

from src.storage.file_manager import (
    FileManager,
    input_record,
    load_csv,
    load_json,
    load_manifest,
    load_model,
    sha256,
)

__all__ = [
    "FileManager",
    "input_record",
    "load_csv",
    "load_json",
    "load_manifest",
    "load_model",
    "sha256",
]
