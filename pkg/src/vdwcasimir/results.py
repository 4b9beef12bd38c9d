"""Result tables and their deterministic CSV / JSON serialization."""

import csv
import io
import json
import math
from dataclasses import dataclass, field


@dataclass
class ResultTable:
    """Ordered rows of named, unit-carrying columns plus a metadata header.

    ``columns`` is a list of ``(name, unit)``; every row is a dict keyed by
    column name. Rows keep grid order.
    """

    columns: list
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def names(self):
        return [name for name, _ in self.columns]

    def header(self):
        return [f"{name} [{unit}]" for name, unit in self.columns]

    def column(self, name):
        return [row.get(name) for row in self.rows]


def _plain(value):
    # numpy scalars would otherwise leak their repr into CSV
    return value.item() if hasattr(value, "item") and not isinstance(value, (str, bytes)) else value


def _csv_cell(value):
    value = _plain(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, int):
        return str(value)
    return str(value)


def _json_value(value):
    value = _plain(value)
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def emit(table, fmt):
    """Serialize ``table`` as ``"csv"`` or ``"json"`` bytes.

    CSV: one header row ``name [unit]``, floats in shortest round-trip form,
    LF line endings. JSON: an array whose first element is
    ``{"metadata": ...}`` followed by one object per row; non-finite floats
    become ``null``. Output depends only on the table contents.
    """
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table.header())
        for row in table.rows:
            writer.writerow([_csv_cell(row.get(name)) for name in table.names])
        return buf.getvalue().encode("utf-8")
    if fmt == "json":
        meta = dict(table.metadata)
        meta["columns"] = [{"name": n, "unit": u} for n, u in table.columns]
        items = [{"metadata": meta}]
        for row in table.rows:
            items.append({name: _json_value(row.get(name)) for name in table.names})
        text = json.dumps(items, indent=2, allow_nan=False, ensure_ascii=False)
        return (text + "\n").encode("utf-8")
    raise ValueError(f"unknown format '{fmt}'")
