import json
import math

import numpy as np
import pytest

from singplateau.io import UNBOUNDED_TOKEN, dumps, jsonable, write_mesh
from singplateau.curves import chord_arc_constant


def test_infinity_token():
    assert jsonable(math.inf) == UNBOUNDED_TOKEN == "UNBOUNDED"
    assert jsonable(np.float64(-np.inf)) == "-UNBOUNDED"
    assert json.loads(dumps({"q": [1.0, math.inf]})) == {"q": [1.0, "UNBOUNDED"]}


def test_nan_is_refused():
    with pytest.raises(ValueError):
        dumps({"x": math.nan})


def test_numpy_types_and_sorted_keys():
    text = dumps({"b": np.int64(3), "a": np.array([True, False]), "c": (np.float32(0.5),)})
    assert text.index('"a"') < text.index('"b"') < text.index('"c"')
    assert json.loads(text) == {"a": [True, False], "b": 3, "c": [0.5]}


def test_unbounded_chord_arc_serializes(curves):
    assert json.loads(dumps({"k": chord_arc_constant(curves["figure-eight"])}))["k"] == "UNBOUNDED"


def test_obj_round_trip(tmp_path, solved):
    u, _ = solved("saddle-3d")
    p = tmp_path / "s.obj"
    assert write_mesh(u, p) == "obj"
    v = np.array([ln.split()[1:] for ln in p.read_text().splitlines() if ln.startswith("v ")], float)
    np.testing.assert_array_equal(v, u.positions)
