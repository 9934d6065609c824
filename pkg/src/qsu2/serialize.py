"""Deterministic CSV/JSON output and run manifests.

Floats are printed with 17 significant digits so identical invocations
produce byte-identical files; manifests record the resolved parameters
and sha256 digests of every output, enough to regenerate them exactly.
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path

import numpy as np


def fmt(x) -> str:
    """Canonical cell formatting: floats at 17 significant digits; commas
    inside text cells become semicolons to keep the CSV well formed."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return format(x, ".17g")
    if isinstance(x, (np.floating,)):
        return format(float(x), ".17g")
    return str(x).replace(",", ";")


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


def write_json(path, payload) -> Path:
    path = Path(path)
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=True, allow_nan=True) + "\n",
        encoding="utf-8",
        newline="\n",
    )
    return path


def sha256_of(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(outdir, subcommand: str, params: dict, outputs, version: str) -> Path:
    outdir = Path(outdir)
    manifest = {
        "subcommand": subcommand,
        "params": params,
        "version": version,
        "outputs": {Path(p).name: sha256_of(p) for p in outputs},
    }
    return write_json(outdir / f"{subcommand}_manifest.json", manifest)


def complex_pairs(matrix):
    """Row-major [re, im] pairs for JSON export of a complex matrix."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in matrix]
