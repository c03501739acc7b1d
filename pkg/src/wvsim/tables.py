"""Plot-ready result tables with lossless CSV and JSON round-trips."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError

META_PREFIX = "# wvsim-metadata: "
FORMATS = ("csv", "json")


def _kind(v):
    if isinstance(v, bool):
        return "bool"
    if isinstance(v, int):
        return "int"
    if isinstance(v, float):
        return "float"
    return "str"


def _fmt(v, kind):
    if kind == "float":
        return format(v, ".17g")
    if kind == "bool":
        return "true" if v else "false"
    return str(v)


def _cell(v, kind):
    # strings are always quoted: the 3.10 writer leaves a bare "\r" unquoted
    if kind == "str":
        return '"' + v.replace('"', '""') + '"'
    return _fmt(v, kind)


def _parse(text, kind, line):
    try:
        if kind == "float":
            return float(text)
        if kind == "int":
            return int(text)
        if kind == "bool":
            return {"true": True, "false": False}[text]
        return text
    except (ValueError, KeyError):
        raise ParseError(f"cannot read {text!r} as {kind}", line=line) from None


def _same(a, b):
    if isinstance(a, float) and isinstance(b, float) and math.isnan(a) and math.isnan(b):
        return True
    return type(a) is type(b) and a == b


@dataclass
class ResultTable:
    columns: list
    rows: list
    metadata: dict = field(default_factory=dict)
    types: list | None = None

    def __post_init__(self):
        self.columns = list(self.columns)
        self.rows = [tuple(r) for r in self.rows]
        for r in self.rows:
            if len(r) != len(self.columns):
                raise ValueError(f"row {r} does not match columns {self.columns}")
            if any(isinstance(v, str) and "\0" in v for v in r):
                raise ValueError("NUL characters cannot be stored in a table")
        if self.types is None:
            self.types = self._infer_types()

    def _infer_types(self):
        types = []
        for j, _ in enumerate(self.columns):
            kinds = {_kind(r[j]) for r in self.rows}
            if kinds <= {"int", "float"} and "float" in kinds:
                types.append("float")
            elif len(kinds) == 1:
                types.append(kinds.pop())
            else:
                types.append("str")
        # normalize so a round-trip reproduces Python types exactly
        self.rows = [
            tuple(float(v) if t == "float" else (str(v) if t == "str" else v) for v, t in zip(r, types))
            for r in self.rows
        ]
        return types

    def __eq__(self, other):
        if not isinstance(other, ResultTable):
            return NotImplemented
        return (
            self.columns == other.columns
            and self.types == other.types
            and self.metadata == other.metadata
            and len(self.rows) == len(other.rows)
            and all(_same(a, b) for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))
        )

    def column(self, name):
        j = self.columns.index(name)
        return [r[j] for r in self.rows]

    def _meta_block(self):
        return dict(self.metadata, columns=self.columns, types=self.types)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(META_PREFIX + json.dumps(self._meta_block(), sort_keys=True) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            buf.write(",".join(_cell(v, t) for v, t in zip(r, self.types)) + "\n")
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {"metadata": self.metadata, "columns": self.columns, "types": self.types, "rows": [list(r) for r in self.rows]}
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "ResultTable":
        first, _, body = text.partition("\n")
        if not first.startswith(META_PREFIX):
            raise ParseError("missing metadata line", line=1)
        try:
            meta = json.loads(first[len(META_PREFIX):])
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad metadata: {exc.msg}", line=1) from None
        columns, types = meta.pop("columns"), meta.pop("types")
        # a stream, not split lines, so quoted fields may hold line breaks
        reader = csv.reader(io.StringIO(body, newline=""))
        header = next(reader, None)
        if header != columns:
            raise ParseError("CSV header disagrees with metadata", line=2)
        rows = []
        for lineno, rec in enumerate(reader, start=3):
            rows.append(tuple(_parse(v, t, lineno) for v, t in zip(rec, types)))
        return cls(columns, rows, meta, types)

    @classmethod
    def from_json(cls, text: str) -> "ResultTable":
        doc = json.loads(text)
        types = doc["types"]
        rows = [
            tuple(float(v) if t == "float" else v for v, t in zip(r, types))
            for r in doc["rows"]
        ]
        return cls(doc["columns"], rows, doc["metadata"], types)

    def dumps(self, fmt: str) -> str:
        if fmt not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        return self.to_csv() if fmt == "csv" else self.to_json()

    def write(self, path, fmt: str | None = None):
        path = Path(path)
        fmt = fmt or ("json" if path.suffix == ".json" else "csv")
        path.write_text(self.dumps(fmt), encoding="utf-8")

    @classmethod
    def read(cls, path, fmt: str | None = None) -> "ResultTable":
        path = Path(path)
        fmt = fmt or ("json" if path.suffix == ".json" else "csv")
        text = path.read_text(encoding="utf-8")
        return cls.from_json(text) if fmt == "json" else cls.from_csv(text)

    def render(self, precision: int = 6) -> str:
        """Aligned plain-text rendering for terminals."""
        cells = [self.columns] + [
            [f"{v:.{precision}g}" if t == "float" else _fmt(v, t) for v, t in zip(r, self.types)]
            for r in self.rows
        ]
        widths = [max(len(row[j]) for row in cells) for j in range(len(self.columns))]
        return "\n".join("  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells)
