"""File formats and the stable JSON encoder."""

import io
import json
import math

import numpy as np
import pytest

from dpblogs.gradients import GradientVector
from dpblogs.io import (
    dumps,
    format_float,
    load_model_spec,
    load_shapes,
    parse_gradient_row,
    read_gradient_csv,
    write_gradient_csv,
)


@pytest.mark.parametrize(
    "x,text",
    [
        (5.0, "5"),
        (1e-5, "1e-05"),
        (0.1 + 0.2, "0.3"),
        (4.1756992810432, "4.17569928104"),
        (math.inf, "Infinity"),
        (-math.inf, "-Infinity"),
        (math.nan, "NaN"),
    ],
)
def test_format_float(x, text):
    assert format_float(x) == text


def test_dumps_layout():
    text = dumps({"a": [1, 2.5], "b": {"c": True, "d": None}, "e": [{"f": "x"}], "g": []})
    assert text == (
        '{\n  "a": [1, 2.5],\n  "b": {\n    "c": true,\n    "d": null\n  },\n'
        '  "e": [\n    {\n      "f": "x"\n    }\n  ],\n  "g": []\n}'
    )
    assert json.loads(text)["a"] == [1, 2.5]


def test_dumps_numpy_and_compact():
    assert dumps({"v": np.array([1.0, 2.0]), "i": np.int64(3)}, indent=None) == '{"v": [1, 2], "i": 3}'
    with pytest.raises(TypeError):
        dumps(object())


def test_parse_gradient_row():
    assert parse_gradient_row("1, -2.5,3e-3") == [1.0, -2.5, 0.003]
    with pytest.raises(ValueError, match="column 1"):
        parse_gradient_row("1,abc")
    with pytest.raises(ValueError, match="not finite"):
        parse_gradient_row("1,inf")


def test_csv_round_trip_is_lossless(tmp_path):
    grads = [GradientVector([0.1, 1 / 3, -2e-300]), GradientVector([math.pi])]
    path = tmp_path / "g.csv"
    write_gradient_csv(grads, path)
    assert read_gradient_csv(path) == grads


def test_csv_shapes():
    text = "1,2,3,4\n5,6,7,8\n\n"
    shared = read_gradient_csv(io.StringIO(text), (2, 2))
    assert [g.shape for g in shared] == [(2, 2), (2, 2)]
    per_row = read_gradient_csv(io.StringIO(text), [(4,), (2, 2)])
    assert [g.shape for g in per_row] == [(4,), (2, 2)]
    with pytest.raises(ValueError, match="2 gradient rows"):
        read_gradient_csv(io.StringIO(text), [(4,)])
    with pytest.raises(ValueError, match="row 1"):
        read_gradient_csv(io.StringIO("1,2\n3,x\n"))


def test_load_shapes(tmp_path):
    p = tmp_path / "s.json"
    p.write_text("[2, 3]")
    assert load_shapes(p) == (2, 3)
    p.write_text("[[2, 3], [6]]")
    assert load_shapes(p) == [(2, 3), (6,)]
    for bad in ["[]", "[0]", "[[2], []]", '{"a": 1}', "[true]"]:
        p.write_text(bad)
        with pytest.raises(ValueError):
            load_shapes(p)


def test_load_model_spec(tmp_path):
    p = tmp_path / "m.json"
    p.write_text('{"groups": [{"name": "g0", "dim": 4}]}')
    assert load_model_spec(p).dims == (4,)
