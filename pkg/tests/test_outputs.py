import json

import numpy as np

from lefsolver import svg
from lefsolver.outputs import dumps, jsonable, write_csv, write_json


def test_jsonable_nonfinite():
    d = jsonable({"a": np.float64(np.inf), "b": [np.nan, -np.inf], "c": np.int64(3),
                  "d": np.array([1.0, 2.0]), "e": np.bool_(True)})
    assert d == {"a": "inf", "b": ["nan", "-inf"], "c": 3, "d": [1.0, 2.0], "e": True}


def test_json_sorted_and_stable(tmp_path):
    obj = {"z": 1, "a": {"y": 0.1, "b": 2}}
    assert dumps(obj) == dumps(dict(reversed(list(obj.items()))))
    write_json(tmp_path / "o.json", obj)
    assert json.loads((tmp_path / "o.json").read_text()) == obj


def test_csv_roundtrip_exact(tmp_path):
    x = np.array([0.1, 1 / 3, 1e-300, 2.5e20])
    write_csv(tmp_path / "o.csv", {"r": x, "u": x ** 2})
    lines = (tmp_path / "o.csv").read_text().splitlines()
    assert lines[0] == "r,u"
    back = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    assert np.array_equal(back[:, 0], x) and np.array_equal(back[:, 1], x ** 2)


def test_svg_document(tmp_path):
    r = np.linspace(0, 1, 11)
    panel = svg.line_chart([("u", r, 1 - r ** 2), ("bad", r, np.full(11, np.nan))],
                           title="t<1>", logy=False)
    log_panel = svg.line_chart([("v", r, np.exp(-r))], logy=True)
    svg.write_svg(tmp_path / "c.svg", [panel, log_panel])
    text = (tmp_path / "c.svg").read_text()
    assert text.startswith("<?xml") and text.count("<polyline") == 2 and "t&lt;1&gt;" in text
    assert 'height="800"' in text
