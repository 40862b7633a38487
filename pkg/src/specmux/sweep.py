"""Shared tabular result type for all parameter scans."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

FLOAT_FORMAT = "%.12g"


@dataclass
class SweepResult:
    """One row per sweep point, one named column per reported quantity."""

    columns: list[str]
    data: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.data = np.atleast_2d(np.asarray(self.data, dtype=float))
        if self.data.shape[1] != len(self.columns):
            raise ValueError(
                f"{len(self.columns)} columns declared but data has "
                f"{self.data.shape[1]}")

    def column(self, name: str) -> np.ndarray:
        try:
            idx = self.columns.index(name)
        except ValueError:
            raise KeyError(f"no column named {name!r}") from None
        return self.data[:, idx]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(self.columns)
            for row in self.data:
                writer.writerow([FLOAT_FORMAT % v for v in row])


def read_csv(path) -> SweepResult:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty CSV") from None
        rows = [[float(v) for v in row] for row in reader if row]
    if not rows:
        raise ValueError(f"{path}: CSV has a header but no data rows")
    return SweepResult(columns=header, data=np.array(rows, dtype=float))
