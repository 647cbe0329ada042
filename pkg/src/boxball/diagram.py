"""Young diagrams as column/row length pairs."""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass

from .errors import InvariantViolation, ParseError


def transpose(lengths: Sequence[int]) -> tuple[int, ...]:
    """Conjugate partition: entry ``i`` counts parts ``>= i + 1``."""
    lengths = [int(x) for x in lengths if x > 0]
    if not lengths:
        return ()
    return tuple(sum(1 for x in lengths if x >= i) for i in range(1, max(lengths) + 1))


@dataclass(frozen=True)
class YoungDiagram:
    """Columns are soliton lengths (longest first); rows are their transpose."""

    columns: tuple[int, ...]
    rows: tuple[int, ...]

    def __post_init__(self):
        cols = tuple(int(x) for x in self.columns)
        rows = tuple(int(x) for x in self.rows)
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "rows", rows)
        if any(a < b for a, b in zip(cols, cols[1:])) or any(x <= 0 for x in cols):
            raise InvariantViolation(f"columns {cols} are not a partition")
        if transpose(cols) != rows:
            raise InvariantViolation(f"rows {rows} are not the transpose of columns {cols}")

    @classmethod
    def from_columns(cls, columns: Sequence[int]) -> YoungDiagram:
        cols = tuple(sorted((int(x) for x in columns if x > 0), reverse=True))
        return cls(cols, transpose(cols))

    @classmethod
    def from_rows(cls, rows: Sequence[int]) -> YoungDiagram:
        rows = tuple(sorted((int(x) for x in rows if x > 0), reverse=True))
        return cls(transpose(rows), rows)

    @property
    def size(self) -> int:
        return sum(self.columns)

    def to_line(self) -> str:
        return "λ=" + ",".join(map(str, self.columns))

    @classmethod
    def from_line(cls, line: str) -> YoungDiagram:
        line = line.strip()
        for prefix in ("λ=", "lambda="):
            if line.startswith(prefix):
                body = line[len(prefix):]
                break
        else:
            raise ParseError(f"expected 'λ=...' diagram line, got {line!r}")
        try:
            cols = [int(x) for x in body.split(",") if x.strip()]
        except ValueError as exc:
            raise ParseError(f"bad diagram line {line!r}") from exc
        return cls.from_columns(cols)

    def to_json(self) -> str:
        return json.dumps({"lambda": list(self.columns), "rho": list(self.rows)})

    @classmethod
    def from_json(cls, text: str) -> YoungDiagram:
        data = json.loads(text)
        return cls(tuple(data["lambda"]), tuple(data["rho"]))

    def __str__(self) -> str:
        return self.to_line()
