"""Published tables shipped with the package, kept verbatim.

Rows whose printed numeral is malformed (e.g. ``2.806.60``) are returned with
``value = None`` and ``usable = False``; their raw text is preserved.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources
from typing import List, Optional

LYAPUNOV_TABLES = {"case1": "lyapunov_case1.csv", "case2": "lyapunov_case2.csv"}
#: initial conditions the two exponent tables were computed from
LYAPUNOV_CASE_X0 = {"case1": 0.5, "case2": 5e-7}


@dataclass(frozen=True)
class ReferenceRow:
    iteration: int
    raw: str
    value: Optional[float]

    @property
    def usable(self) -> bool:
        return self.value is not None


def _read(name: str) -> List[dict]:
    text = resources.files("zetamap").joinpath("data/reference_tables", name).read_text(encoding="utf-8")
    return list(csv.DictReader(io.StringIO(text)))


def _number(raw: str) -> Optional[float]:
    try:
        return float(raw)
    except ValueError:
        return None


def lyapunov_reference(case: str) -> List[ReferenceRow]:
    if case not in LYAPUNOV_TABLES:
        raise KeyError(f"unknown table {case!r}; choose from {sorted(LYAPUNOV_TABLES)}")
    return [
        ReferenceRow(int(r["iteration"]), r["lambda"], _number(r["lambda"]))
        for r in _read(LYAPUNOV_TABLES[case])
    ]


def error_table_case1() -> List[dict]:
    """The x0 = 0.5 error table as printed, columns as strings."""
    return _read("error_table_case1.csv")
