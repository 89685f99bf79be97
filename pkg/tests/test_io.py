import math

import numpy as np
import pytest

from nesslab.io import OUTPUT_ENV, ResultTable, dumps, format_value, read_csv, resolve_output_dir


def test_format_value():
    assert format_value(True) == "true"
    assert format_value(0.1) == "0.1"
    assert format_value(np.float64(1 / 3)) == repr(1 / 3)
    assert format_value(-math.inf) == "-inf"


def test_csv_round_trip(tmp_path):
    t = ResultTable(["a", "b", "ok"])
    t.add(1, 0.25, True)
    t.add(np.int64(2), 1 / 3, False)
    text = t.to_csv()
    assert "\r" not in text and text.startswith("a,b,ok\n")
    p = tmp_path / "t.csv"
    p.write_text(text)
    back = read_csv(p)
    assert back.columns == t.columns and back.rows == t.rows


def test_nonfinite_needs_status():
    t = ResultTable(["x"])
    t.add(math.nan)
    with pytest.raises(ValueError):
        t.to_csv()
    s = ResultTable(["x", "status"])
    s.add(math.inf, "no-decay")
    assert "inf,no-decay" in s.to_csv()
    with pytest.raises(ValueError):
        s.add(1.0)


def test_dumps_sorted_and_nonfinite():
    assert dumps({"b": math.inf, "a": np.arange(2)}) == '{\n  "a": [\n    0,\n    1\n  ],\n  "b": "inf"\n}\n'


def test_output_dir_precedence(monkeypatch):
    monkeypatch.delenv(OUTPUT_ENV, raising=False)
    assert str(resolve_output_dir(None, None, "ness")) == "nesslab-out/ness"
    assert str(resolve_output_dir(None, "cfg", "ness")) == "cfg"
    monkeypatch.setenv(OUTPUT_ENV, "env")
    assert str(resolve_output_dir(None, "cfg", "ness")) == "env"
    assert str(resolve_output_dir("flag", "cfg", "ness")) == "flag"
