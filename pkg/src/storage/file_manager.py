"""File manager for run artifacts."""

import hashlib
import json
import math
from pathlib import Path
from typing import Any, Optional

import numpy as np
import pandas as pd
from pydantic import ValidationError as PydanticValidationError

from src.config import get_config
from src.errors import EmptyNetworkError, ParseError, StorageError
from src.models.community import CommunityModel
from src.models.manifest import FileRecord, ModelDocument, RunManifest, utc_now
from src.utils.logger import get_logger

logger = get_logger(__name__)

CSV_FLOAT_FORMAT = "%.10g"


def _jsonable(value: Any) -> Any:
    """Plain JSON types; NaN and infinities become null."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, Path):
        return str(value)
    return value


def sha256(path: Path) -> str:
    """Hex SHA-256 of a file's bytes."""
    digest = hashlib.sha256()
    try:
        with open(path, "rb") as f:
            for block in iter(lambda: f.read(1 << 16), b""):
                digest.update(block)
    except OSError as e:
        raise StorageError(f"Cannot read {path}: {e}") from e
    return digest.hexdigest()


class FileManager:
    """Writes the outputs of one command into a directory and remembers them."""

    def __init__(self, base_dir: Optional[Path] = None):
        """Initialize the file manager.

        Args:
            base_dir: Output directory (default: the configured output_dir)
        """
        if base_dir is None:
            base_dir = get_config().storage.output_dir
        self.base_dir = Path(base_dir)
        try:
            self.base_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise StorageError(f"Cannot create output directory {self.base_dir}: {e}") from e
        self.written: list[Path] = []

    def _target(self, filename: str) -> Path:
        return self.base_dir / filename

    def _record(self, path: Path) -> Path:
        if path not in self.written:
            self.written.append(path)
        logger.debug(f"Saved: {path}")
        return path

    def save_json(self, filename: str, data: Any) -> Path:
        """Save data as pretty-printed UTF-8 JSON.

        Args:
            filename: File name including extension
            data: JSON-compatible data (numpy values are converted)

        Returns:
            Path to the saved file
        """
        path = self._target(filename)
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                json.dump(_jsonable(data), f, indent=2, ensure_ascii=False)
                f.write("\n")
        except OSError as e:
            raise StorageError(f"Cannot write {path}: {e}") from e
        return self._record(path)

    def save_text(self, filename: str, content: str) -> Path:
        path = self._target(filename)
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                f.write(content)
        except OSError as e:
            raise StorageError(f"Cannot write {path}: {e}") from e
        return self._record(path)

    def save_frame(self, filename: str, frame: pd.DataFrame) -> Path:
        """Save a table as CSV with a fixed float format."""
        path = self._target(filename)
        try:
            frame.to_csv(
                path,
                index=False,
                encoding="utf-8",
                lineterminator="\n",
                float_format=CSV_FLOAT_FORMAT,
            )
        except OSError as e:
            raise StorageError(f"Cannot write {path}: {e}") from e
        return self._record(path)

    def save_model(self, model: CommunityModel, filename: str = "model.json") -> Path:
        return self.save_json(filename, ModelDocument.from_model(model).model_dump())

    def write_manifest(self, manifest: RunManifest) -> Path:
        """Stamp ``finished_at``, hash every written file and save the manifest."""
        manifest.finished_at = utc_now()
        manifest.outputs = [
            FileRecord(path=path.name, sha256=sha256(path)) for path in self.written
        ]
        path = self._target(f"manifest-{manifest.command}.json")
        try:
            path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
        except OSError as e:
            raise StorageError(f"Cannot write {path}: {e}") from e
        logger.info(f"Wrote {len(manifest.outputs)} outputs and {path.name}")
        return path


def load_json(path: Path) -> Any:
    """Load a JSON file, raising StorageError when it is missing or invalid."""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError as e:
        raise StorageError(f"File not found: {path}") from e
    except (OSError, json.JSONDecodeError) as e:
        raise StorageError(f"Cannot read {path}: {e}") from e


def load_csv(path: Path, **kwargs: Any) -> pd.DataFrame:
    """Read a result or covariate CSV.

    Missing or unreadable files raise StorageError; malformed or empty
    content raises ParseError or EmptyNetworkError.
    """
    path = Path(path)
    try:
        return pd.read_csv(path, encoding="utf-8", **kwargs)
    except FileNotFoundError as e:
        raise StorageError(f"File not found: {path}") from e
    except pd.errors.EmptyDataError as e:
        raise EmptyNetworkError(f"{path} is empty") from e
    except pd.errors.ParserError as e:
        raise ParseError(str(e).strip(), path=path) from e
    except UnicodeDecodeError as e:
        raise ParseError("file is not valid UTF-8", path=path) from e
    except OSError as e:
        raise StorageError(f"Cannot read {path}: {e}") from e


def load_model(path: Path) -> CommunityModel:
    """Load and validate a model document."""
    try:
        document = ModelDocument.model_validate(load_json(path))
    except PydanticValidationError as e:
        raise StorageError(f"{path} is not a valid model document: {e}") from e
    return document.to_model()


def load_manifest(path: Path) -> RunManifest:
    try:
        return RunManifest.model_validate(load_json(path))
    except PydanticValidationError as e:
        raise StorageError(f"{path} is not a valid run manifest: {e}") from e


def input_record(path: Path) -> FileRecord:
    return FileRecord(path=str(path), sha256=sha256(Path(path)))
