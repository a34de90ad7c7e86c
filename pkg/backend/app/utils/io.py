"""CSV and JSON codecs for grids, configurations and command output."""
import csv
import json
import logging
import math
from enum import Enum
from pathlib import Path
from typing import Any, Union

import numpy as np
from pydantic import BaseModel

from app.schemas import BVPConfig, BVPDocument, GridFunction
from app.utils.errors import DomainError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def read_grid_csv(path: PathLike) -> GridFunction:
    """Two-column CSV (node, value); a non-numeric first row is taken as header."""
    nodes, values = [], []
    with open(path, newline="", encoding="utf-8") as handle:
        for number, row in enumerate(csv.reader(handle)):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < 2:
                raise DomainError(f"{path}: row {number + 1} needs two columns")
            try:
                node, value = float(row[0]), float(row[1])
            except ValueError:
                if number == 0:
                    continue
                raise DomainError(f"{path}: row {number + 1} is not numeric")
            nodes.append(node)
            values.append(value)
    logger.debug("read %d samples from %s", len(nodes), path)
    return GridFunction(nodes=tuple(nodes), values=tuple(values))


def write_grid_csv(path: PathLike, grid: GridFunction) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["node", "value"])
        writer.writerows((_fmt(t), _fmt(v)) for t, v in zip(grid.nodes, grid.values))


def write_green_csv(path: PathLike, nodes: np.ndarray, grid: np.ndarray) -> int:
    """Rows t, s, G(t, s); returns the number of data rows."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["t", "s", "G"])
        for i, t in enumerate(nodes):
            writer.writerows((_fmt(t), _fmt(s), _fmt(grid[i, j])) for j, s in enumerate(nodes))
    return len(nodes) ** 2


def write_matrix_csv(path: PathLike, matrix: np.ndarray) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerows([_fmt(v) for v in row] for row in np.asarray(matrix))


def load_bvp_config(path: PathLike) -> BVPConfig:
    with open(path, encoding="utf-8") as handle:
        document = BVPDocument.model_validate(json.load(handle))
    return document.to_config()


def dump_bvp_config(config: BVPConfig) -> str:
    return dumps_json(BVPDocument.from_config(config).model_dump(by_alias=True))


def _encode(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, Enum):
        return _encode(value.value)
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _fmt(value) if math.isfinite(value) else "null"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, BaseModel):
        return _encode(value.model_dump())
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_encode(v) for v in value) + "]"
    raise TypeError(f"cannot encode {type(value).__name__} as JSON")


def dumps_json(payload: Any) -> str:
    """Single-line JSON with 17 significant digits; non-finite floats become null."""
    return _encode(payload)
