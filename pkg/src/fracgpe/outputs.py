"""Deterministic JSON writing and run manifests."""

from __future__ import annotations

import hashlib
import math
from pathlib import Path

import numpy as np

__all__ = ["dumps_json", "write_json", "sha256_file", "write_manifest", "package_version"]


def package_version() -> str:
    from importlib.metadata import PackageNotFoundError, version
    try:
        return version("artifact")
    except PackageNotFoundError:  # running from a source tree
        return "0.1.0"


def _scalar(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v) or math.isinf(v):
            return '"' + repr(v) + '"'
        return f"{v:.17g}"
    if isinstance(v, str):
        import json
        return json.dumps(v)
    raise TypeError(f"cannot serialise {type(v).__name__}")


def dumps_json(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with floats at 17 significant digits and sorted-free key order.

    Complex numbers are written as ``[re, im]`` pairs.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_scalar(str(k))}: {dumps_json(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (complex, np.complexfloating)):
        return dumps_json([float(obj.real), float(obj.imag)], indent, _level)
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        parts = [dumps_json(v, indent, _level + 1) for v in obj]
        if all("\n" not in p for p in parts) and sum(len(p) for p in parts) < 100:
            return "[" + ", ".join(parts) + "]"
        return "[\n" + ",\n".join(pad + p for p in parts) + "\n" + end + "]"
    return _scalar(obj)


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(dumps_json(obj) + "\n")
    return path


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(out_dir, command: str, config_echo, timings: dict) -> Path:
    """List every file in ``out_dir`` with its checksum in ``manifest.json``."""
    out_dir = Path(out_dir)
    files = {p.name: sha256_file(p) for p in sorted(out_dir.iterdir())
             if p.is_file() and p.name != "manifest.json"}
    manifest = {
        "package": "fracgpe",
        "version": package_version(),
        "command": command,
        "config": config_echo,
        "files": files,
        "timings_seconds": timings,
    }
    return write_json(out_dir / "manifest.json", manifest)
