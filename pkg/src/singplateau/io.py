"""Mesh and report writers."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, is_dataclass
from pathlib import Path

import numpy as np

UNBOUNDED_TOKEN = "UNBOUNDED"


def jsonable(obj):
    """Plain JSON data; infinities become ``"UNBOUNDED"``."""
    if is_dataclass(obj) and not isinstance(obj, type):
        return jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isinf(v):
            return UNBOUNDED_TOKEN if v > 0 else "-" + UNBOUNDED_TOKEN
        if math.isnan(v):
            raise ValueError("NaN in report")
        return v
    return obj


def dumps(obj) -> str:
    # sorted keys + fixed separators: identical input gives identical bytes
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(obj, path) -> None:
    Path(path).write_text(dumps(obj))


def write_obj(u, path) -> None:
    """Wavefront OBJ, 1-based faces; planar maps get z = 0."""
    X = np.asarray(u.positions)
    if X.shape[1] > 3:
        raise ValueError("OBJ holds at most three coordinates")
    pad = np.zeros((len(X), 3))
    pad[:, : X.shape[1]] = X
    lines = [f"v {x!r} {y!r} {z!r}" for x, y, z in pad.tolist()]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in u.mesh.triangles.tolist()]
    Path(path).write_text("\n".join(lines) + "\n")


def write_mesh_json(u, path) -> None:
    write_json({"positions": u.positions, "triangles": u.mesh.triangles,
                "boundary_params": u.boundary_params}, path)


def write_mesh(u, path) -> str:
    """OBJ for dimension <= 3, JSON otherwise.  Returns the format used."""
    if u.positions.shape[1] <= 3:
        write_obj(u, path)
        return "obj"
    write_mesh_json(u, path)
    return "json"
