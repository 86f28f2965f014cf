"""Uniformly sampled multi-column run record, serialized to CSV.

Floats are written in shortest round-trip form (repr), so re-reading the CSV
reproduces the exact values and repeated runs are byte-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import List


def _format(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    return repr(v)


@dataclass
class TrajectoryTable:
    """Column-ordered table; the first column is the time (or sample) axis."""

    columns: List[str]
    rows: List[list] = field(default_factory=list)

    def __post_init__(self):
        if len(set(self.columns)) != len(self.columns):
            raise ValueError("column headers must be unique")

    @property
    def axis(self) -> str:
        return self.columns[0]

    def append(self, row: list) -> None:
        if len(row) != len(self.columns):
            raise ValueError(f"row has {len(row)} entries, expected {len(self.columns)}")
        self.rows.append(row)

    def column(self, name: str) -> list:
        try:
            i = self.columns.index(name)
        except ValueError:
            raise KeyError(f"unknown column {name!r}; have {self.columns}") from None
        return [r[i] for r in self.rows]

    def axis_values(self) -> list:
        return [r[0] for r in self.rows]

    def write_csv(self, path) -> None:
        path = Path(path)
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(_format(v) for v in row))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")

    @classmethod
    def read_csv(cls, path) -> "TrajectoryTable":
        text = Path(path).read_text(encoding="utf-8")
        lines = [ln for ln in text.split("\n") if ln]
        columns = lines[0].split(",")
        rows = []
        for ln in lines[1:]:
            rows.append([float(tok) for tok in ln.split(",")])
        return cls(columns=columns, rows=rows)
