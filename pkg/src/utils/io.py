# -*- coding: utf-8 -*-
"""
Artifact writers: CSV tables, JSON reports and run manifests.

Output directories are only created by ``prepare_output_dir``, which the
commands call after their config validated, so a rejected config leaves
nothing behind.
"""

import csv
import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

from src.core.config import save_yaml_config
from src.core.exceptions import ConfigurationError

MANIFEST_NAME = "manifest.yaml"


def prepare_output_dir(path: str) -> Path:
    """
    Create the output directory.

    Raises:
        ConfigurationError: If the path exists and is not a directory.
    """
    out = Path(path)
    if out.exists() and not out.is_dir():
        raise ConfigurationError("output_dir", f"{path} exists and is not a directory")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cell(value: Any) -> Any:
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return value


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Write a header plus rows; floats use repr so reruns are byte-identical."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(value) for value in row])
    return path


def read_csv(path: Path) -> list:
    """Rows of a CSV as dictionaries of strings."""
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def write_json(path: Path, payload: Any) -> Path:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=False)
        f.write("\n")
    return path


def write_manifest(directory: Path, manifest: dict) -> Path:
    """Write ``manifest.yaml`` into a run directory."""
    path = directory / MANIFEST_NAME
    save_yaml_config(manifest, str(path))
    return path
