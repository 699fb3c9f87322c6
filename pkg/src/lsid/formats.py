"""CSV problem input and JSON report output.

CSV: no header, comma separator, '.' decimal point. A matrix file has one
row per line; a vector file has one value per line. Trailing blank lines
are ignored, blank lines elsewhere are a parse error.

JSON: every float is written with 17 significant digits so doubles
round-trip exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .dense import as_mat, as_vec
from .errors import (
    DimensionMismatchError,
    EmptyFileError,
    MultiColumnError,
    ParseError,
    RaggedRowsError,
)

REPORT_FIELDS = (
    "method",
    "solution",
    "residual_l2",
    "det_gram",
    "subsets_total",
    "subsets_singular",
    "max_identity_diff",
    "f_value",
    "samples",
    "seed",
    "elapsed_ms",
)


@dataclass(frozen=True)
class ProblemInstance:
    a: np.ndarray
    b: np.ndarray
    source_paths: tuple[str, ...] = ()

    def __post_init__(self):
        a, b = as_mat(self.a), as_vec(self.b)
        if a.shape[0] != b.size:
            raise DimensionMismatchError(f"A has {a.shape[0]} rows, b has length {b.size}")
        if a.shape[0] < a.shape[1]:
            raise DimensionMismatchError(f"need rows >= cols, got {a.shape}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


def _lines(path) -> list[str]:
    text = Path(path).read_text()
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise EmptyFileError("file is empty", path=path)
    return lines


def _parse_row(line: str, path, lineno: int) -> list[float]:
    if not line.strip():
        raise ParseError("blank line", path=path, line=lineno)
    out = []
    for col, field_ in enumerate(line.split(","), start=1):
        try:
            x = float(field_)
        except ValueError:
            raise ParseError(f"not a number: {field_.strip()!r}", path=path, line=lineno, column=col) from None
        if not math.isfinite(x):
            raise ParseError(f"non-finite value {field_.strip()!r}", path=path, line=lineno, column=col)
        out.append(x)
    return out


def read_matrix_csv(path) -> np.ndarray:
    rows = []
    for lineno, line in enumerate(_lines(path), start=1):
        row = _parse_row(line, path, lineno)
        if rows and len(row) != len(rows[0]):
            raise RaggedRowsError(
                f"expected {len(rows[0])} fields, found {len(row)}", path=path, line=lineno
            )
        rows.append(row)
    return np.array(rows, dtype=float)


def read_vector_csv(path) -> np.ndarray:
    values = []
    for lineno, line in enumerate(_lines(path), start=1):
        row = _parse_row(line, path, lineno)
        if len(row) != 1:
            raise MultiColumnError(f"expected one value, found {len(row)}", path=path, line=lineno)
        values.append(row[0])
    return np.array(values, dtype=float)


def read_instance(matrix_path, rhs_path) -> ProblemInstance:
    return ProblemInstance(read_matrix_csv(matrix_path), read_vector_csv(rhs_path),
                           (str(matrix_path), str(rhs_path)))


def format_float(x: float) -> str:
    return "%.17g" % x


def write_matrix_csv(a, path) -> None:
    a = np.atleast_2d(np.asarray(a, dtype=float))
    text = "".join(",".join(format_float(x) for x in row) + "\n" for row in a)
    Path(path).write_text(text)


def write_vector_csv(v, path) -> None:
    Path(path).write_text("".join(format_float(x) + "\n" for x in np.asarray(v, dtype=float).ravel()))


@dataclass
class Report:
    method: str
    solution: list[float] | None = None
    residual_l2: float | None = None
    det_gram: float | None = None
    subsets_total: int | None = None
    subsets_singular: int | None = None
    max_identity_diff: float | None = None
    f_value: float | None = None
    samples: int | None = None
    seed: int | None = None
    elapsed_ms: float = 0.0
    # fields beyond the required schema
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        extra = d.pop("extra")
        d.update(extra)
        return d


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError(f"cannot serialize non-finite float {x}")
        return format_float(x)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist(), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + close + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + close + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_report(report) -> str:
    """Serialize a Report (or plain dict) as JSON with 17-digit floats."""
    d = report.to_dict() if isinstance(report, Report) else report
    return _encode(d, 2, 0) + "\n"


def write_report_json(report, path) -> None:
    Path(path).write_text(dumps_report(report))


def report_schema() -> dict:
    return json.loads(resources.files("lsid").joinpath("report.schema.json").read_text())
