"""Config parsing, report serialization and atomic file output."""

from __future__ import annotations

import csv
import hashlib
import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np

from .bfunc import BFunction, from_spec
from .lab import GridFunction, Triple
from .polytope import BUNDLED, HBLInstance
from .subspace import Subspace


class InputError(ValueError):
    """A config file is missing, malformed, or names an invalid object."""


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError as exc:
        raise InputError(f"{path}: file not found") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be an object")
    return data


def config_hash(*objs) -> str:
    blob = json.dumps(objs, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def jsonable(obj):
    """Fractions become 'p/q' strings; numpy scalars and arrays become plain lists."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Subspace):
        return obj.tolist()
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj) -> None:
    atomic_write_text(path, json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------- instances


def parse_instance(cfg: dict) -> HBLInstance:
    """Either {"bundled": name, ...kwargs} or {"d": .., "maps": [[..]], "m": [..]}."""
    try:
        if "bundled" in cfg:
            name = cfg["bundled"]
            if name not in BUNDLED:
                raise InputError(f"bundled: unknown instance {name!r}; choose from {sorted(BUNDLED)}")
            kwargs = {k: cfg[k] for k in ("n", "d") if k in cfg}
            inst = BUNDLED[name](**kwargs)
            return inst.with_m(cfg["m"]) if "m" in cfg else inst
        for key in ("d", "maps"):
            if key not in cfg:
                raise InputError(f"{key}: required field missing")
        if not isinstance(cfg["maps"], list) or not all(isinstance(L, list) for L in cfg["maps"]):
            raise InputError("maps: expected a list of matrices")
        return HBLInstance(int(cfg["d"]), tuple(cfg["maps"]), tuple(cfg.get("m", ())))
    except InputError:
        raise
    except (TypeError, ValueError) as exc:
        field = "m" if str(exc).startswith(("m has", "scale exponents")) else "maps"
        raise InputError(f"{field}: {exc}") from exc


def parse_subspaces(cfg: dict, d: int) -> list[Subspace] | None:
    if "E" not in cfg:
        return None
    try:
        return [Subspace.span(rows, d) if rows else Subspace.zero(d) for rows in cfg["E"]]
    except (TypeError, ValueError) as exc:
        raise InputError(f"E: {exc}") from exc


def parse_b(cfg: dict) -> BFunction:
    try:
        return from_spec(cfg)
    except (TypeError, ValueError) as exc:
        raise InputError(f"B spec: {exc}") from exc


# ---------------------------------------------------------------- grid functions


def write_grid_csv(path, u: GridFunction) -> None:
    lines = [f"# spacing={u.h!r}", "x_left,value"]
    lines += [f"{x!r},{v!r}" for x, v in zip(u.edges[:-1].tolist(), u.values.tolist())]
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_grid_csv(path) -> GridFunction:
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("# spacing="):
            raise InputError(f"{path}: first line must be '# spacing=<h>'")
        h = float(header.split("=", 1)[1])
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["x_left", "value"]:
        raise InputError(f"{path}: missing 'x_left,value' column header")
    data = np.array([[float(a), float(b)] for a, b in rows[1:]])
    if data.size == 0:
        raise InputError(f"{path}: no cells")
    return GridFunction(data[0, 0], h, data[:, 1])


def write_triple(directory, t: Triple, stem: str = "triple", extra: dict | None = None) -> Path:
    """Write f, g, h as CSV files plus a JSON manifest; returns the manifest path."""
    directory = Path(directory)
    files = {}
    for name, u in zip("fgh", t.parts()):
        p = directory / f"{stem}_{name}.csv"
        write_grid_csv(p, u)
        files[name] = p.name
    manifest = directory / f"{stem}.json"
    write_json(manifest, {"files": files, "masses": list(t.masses), **(extra or {})})
    return manifest


def read_triple(manifest) -> Triple:
    manifest = Path(manifest)
    meta = load_json(manifest)
    parts = [read_grid_csv(manifest.parent / meta["files"][k]) for k in "fgh"]
    return Triple(*parts, masses=tuple(meta.get("masses", ())))
