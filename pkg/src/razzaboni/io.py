"""Files written and read by the command line front end.

* fields text: header ``u v kappa tau lambda gamma`` then one row per node,
  ``u`` varying slowest, every number with 17 significant digits;
* manifest JSON: grid, case tag, ``A``, ``B``, mode;
* OBJ: mesh positions, each grid quad split along ``(i,j)-(i+1,j+1)``;
* JSON sidecar next to the OBJ: frames, fields, case tag and provenance.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .frenet import BertrandParams
from .gmc import GmcFields, GridSpec
from .lorentz import SignatureCase
from .surface import SurfaceMesh

FIELD_COLUMNS = ("u", "v", "kappa", "tau", "lambda", "gamma")
NUMBER = "%.17g"


class ParseError(ConfigError):
    """A data file that cannot be read back."""


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def dump_json(obj, path) -> None:
    """Sorted keys and fixed separators so equal content gives equal bytes."""
    text = json.dumps(_jsonable(obj), sort_keys=True, indent=1, allow_nan=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def load_json(path):
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"missing file: {path}")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None


# -- grid / manifest ------------------------------------------------------------

def grid_to_dict(grid: GridSpec) -> dict:
    return {"u0": grid.u0, "u1": grid.u1, "Nu": grid.Nu,
            "v0": grid.v0, "v1": grid.v1, "Nv": grid.Nv, "periodic_u": grid.periodic_u}


def grid_from_dict(d: dict) -> GridSpec:
    try:
        return GridSpec(float(d["u0"]), float(d["u1"]), int(d["Nu"]),
                        float(d["v0"]), float(d["v1"]), int(d["Nv"]),
                        bool(d.get("periodic_u", False)))
    except KeyError as exc:
        raise ParseError(f"grid entry missing {exc}") from None


def write_manifest(path, grid: GridSpec, sig: SignatureCase, params: BertrandParams,
                   mode: str, **extra) -> None:
    dump_json({"grid": grid_to_dict(grid), "case": sig.tag, "A": params.A, "B": params.B,
               "mode": mode, **extra}, path)


def read_manifest(path):
    m = load_json(path)
    try:
        return (grid_from_dict(m["grid"]), SignatureCase.from_tag(m["case"]),
                BertrandParams(float(m["A"]), float(m["B"])), m)
    except KeyError as exc:
        raise ParseError(f"{path}: manifest missing {exc}") from None


# -- fields text -----------------------------------------------------------------

def write_fields(path, fields: GmcFields) -> None:
    U, V = fields.grid.mesh()
    cols = [U, V, fields.kappa, fields.tau, fields.lam, fields.gamma]
    data = np.column_stack([np.asarray(c, dtype=float).ravel() for c in cols])
    if not np.all(np.isfinite(data)):
        raise ValueError("refusing to write non-finite field values")
    np.savetxt(path, data, fmt=NUMBER, header=" ".join(FIELD_COLUMNS), comments="")


def read_fields(path, grid: GridSpec, sig: SignatureCase,
                params: BertrandParams) -> GmcFields:
    """Parse a fields file written for ``grid``; NaN, infinities or a wrong layout are errors."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"missing file: {path}")
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or tuple(lines[0].split()) != FIELD_COLUMNS:
        raise ParseError(f"{path}: header must be '{' '.join(FIELD_COLUMNS)}'")
    rows = []
    for k, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != len(FIELD_COLUMNS):
            raise ParseError(f"{path}:{k}: expected {len(FIELD_COLUMNS)} columns")
        try:
            vals = [float(p) for p in parts]
        except ValueError:
            raise ParseError(f"{path}:{k}: not a number") from None
        if not all(math.isfinite(x) for x in vals):
            raise ParseError(f"{path}:{k}: non-finite value")
        rows.append(vals)
    data = np.array(rows)
    shape = grid.shape
    if data.shape[0] != shape[0] * shape[1]:
        raise ParseError(f"{path}: {data.shape[0]} rows, grid has {shape[0] * shape[1]} nodes")
    cols = [data[:, c].reshape(shape) for c in range(len(FIELD_COLUMNS))]
    U, V = grid.mesh()
    scale = max(1.0, abs(grid.u1), abs(grid.v1), abs(grid.u0), abs(grid.v0))
    if np.max(np.abs(cols[0] - U)) > 1e-12 * scale or np.max(np.abs(cols[1] - V)) > 1e-12 * scale:
        raise ParseError(f"{path}: node coordinates do not match the manifest grid")
    return GmcFields(grid, sig, params, *cols[2:])


# -- meshes ----------------------------------------------------------------------

def _faces(Nu, Nv):
    """1-based triangles; node (i, j) has index i*(Nv+1) + j + 1."""
    idx = np.arange((Nu + 1) * (Nv + 1)).reshape(Nu + 1, Nv + 1) + 1
    a, b = idx[:-1, :-1], idx[1:, :-1]
    c, d = idx[1:, 1:], idx[:-1, 1:]
    tri1 = np.stack([a, b, c], -1).reshape(-1, 3)
    tri2 = np.stack([a, c, d], -1).reshape(-1, 3)
    return np.concatenate([tri1, tri2])


def write_obj(path, positions) -> None:
    pos = np.asarray(positions, dtype=float)
    Nu, Nv = pos.shape[0] - 1, pos.shape[1] - 1
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# grid {Nu + 1} x {Nv + 1}\n")
        for p in pos.reshape(-1, 3):
            fh.write("v " + " ".join(NUMBER % x for x in p) + "\n")
        for f in _faces(Nu, Nv):
            fh.write("f %d %d %d\n" % tuple(f))


def read_obj(path, grid: GridSpec) -> np.ndarray:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"missing file: {path}")
    verts = []
    for k, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if line.startswith("v "):
            try:
                p = [float(x) for x in line.split()[1:]]
            except ValueError:
                raise ParseError(f"{path}:{k}: bad vertex") from None
            if len(p) != 3 or not all(math.isfinite(x) for x in p):
                raise ParseError(f"{path}:{k}: bad vertex")
            verts.append(p)
    shape = grid.shape
    if len(verts) != shape[0] * shape[1]:
        raise ParseError(f"{path}: {len(verts)} vertices, grid has {shape[0] * shape[1]}")
    return np.array(verts).reshape(shape + (3,))


def write_mesh(stem, mesh: SurfaceMesh, params: BertrandParams, provenance: dict) -> None:
    """``stem.obj`` plus ``stem.json`` with frames, fields and the case tag."""
    stem = Path(stem)
    write_obj(stem.with_suffix(".obj"), mesh.positions)
    f = mesh.fields
    dump_json({
        "case": mesh.sig.tag,
        "A": params.A, "B": params.B,
        "grid": grid_to_dict(mesh.grid),
        "frames": mesh.frames,
        "fields": {"kappa": f.kappa, "tau": f.tau, "lambda": f.lam, "gamma": f.gamma},
        "provenance": provenance,
    }, stem.with_suffix(".json"))


def read_mesh(stem) -> SurfaceMesh:
    stem = Path(stem)
    side = load_json(stem.with_suffix(".json"))
    try:
        grid = grid_from_dict(side["grid"])
        sig = SignatureCase.from_tag(side["case"])
        params = BertrandParams(float(side["A"]), float(side["B"]))
        fd = side["fields"]
        arr = lambda x: None if x is None else np.array(x, dtype=float)
        fields = GmcFields(grid, sig, params, arr(fd["kappa"]), arr(fd["tau"]),
                           arr(fd["lambda"]), arr(fd["gamma"]))
        frames = np.array(side["frames"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{stem.with_suffix('.json')}: malformed sidecar ({exc})") from None
    if frames.shape != grid.shape + (3, 3):
        raise ParseError(f"{stem.with_suffix('.json')}: frames do not match the grid")
    positions = read_obj(stem.with_suffix(".obj"), grid)
    return SurfaceMesh(grid, sig, positions, frames, fields)
