import csv
import io
import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vdwcasimir.results import ResultTable, emit


def table(rows):
    t = ResultTable([("d", "m"), ("pressure", "Pa"), ("status", "-")], rows)
    t.metadata = {"config_hash": "abc", "version": "0.1.0", "unit_system": "SI"}
    return t


class TestCsv:
    def test_header_carries_units(self):
        text = emit(table([]), "csv").decode()
        assert text == "d [m],pressure [Pa],status [-]\n"

    def test_lf_and_shortest_repr(self):
        text = emit(table([{"d": 1e-7, "pressure": -0.1 - 0.2, "status": "ok"}]), "csv").decode()
        assert "\r" not in text
        assert text.splitlines()[1] == "1e-07,-0.30000000000000004,ok"

    def test_numpy_scalars_are_plain(self):
        text = emit(table([{"d": np.float64(2.5), "pressure": np.float32(1.0), "status": "ok"}]),
                    "csv").decode()
        assert text.splitlines()[1] == "2.5,1.0,ok"

    @given(st.lists(st.floats(allow_nan=False, allow_infinity=False), min_size=1, max_size=20))
    def test_round_trip(self, values):
        rows = [{"d": v, "pressure": -v, "status": "ok"} for v in values]
        text = emit(table(rows), "csv").decode()
        back = list(csv.reader(io.StringIO(text)))[1:]
        assert [float(r[0]) for r in back] == values
        assert [float(r[1]) for r in back] == [-v for v in values]


class TestJson:
    def test_metadata_first(self):
        items = json.loads(emit(table([{"d": 1.0, "pressure": 2.0, "status": "ok"}]), "json"))
        meta = items[0]["metadata"]
        assert meta["config_hash"] == "abc"
        assert meta["columns"][1] == {"name": "pressure", "unit": "Pa"}
        assert items[1] == {"d": 1.0, "pressure": 2.0, "status": "ok"}

    def test_non_finite_becomes_null(self):
        items = json.loads(emit(table([{"d": 1.0, "pressure": math.nan, "status": "x"}]), "json"))
        assert items[1]["pressure"] is None

    @given(st.lists(st.floats(allow_nan=False, allow_infinity=False), min_size=1, max_size=20))
    def test_round_trip(self, values):
        rows = [{"d": v, "pressure": v, "status": "ok"} for v in values]
        items = json.loads(emit(table(rows), "json"))
        assert [r["d"] for r in items[1:]] == values

    def test_deterministic(self):
        rows = [{"d": 1.0, "pressure": 2.0, "status": "ok"}]
        assert emit(table(rows), "json") == emit(table(list(rows)), "json")

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            emit(table([]), "xml")
