"""Canonical JSON / CSV output and the append-only JSONL run log."""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import json
import math
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from . import __version__

FLOAT_DIGITS = 12


def canonical(value: Any) -> Any:
    """Plain JSON types: Fractions as 'num/den', floats at 12 significant digits."""
    if hasattr(value, "to_dict"):
        return canonical(value.to_dict())
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if not math.isfinite(v):
            return None
        return float(f"{v:.{FLOAT_DIGITS}g}")
    if isinstance(value, (complex, np.complexfloating)):
        return [canonical(value.real), canonical(value.imag)]
    if isinstance(value, dict):
        return {str(k): canonical(v) for k, v in value.items()}
    if dataclasses.is_dataclass(value):
        return canonical({f.name: getattr(value, f.name) for f in dataclasses.fields(value)})
    if isinstance(value, (list, tuple, np.ndarray)):
        return [canonical(v) for v in value]
    raise TypeError(f"cannot serialise {type(value).__name__}")


def to_json(value: Any) -> str:
    return json.dumps(canonical(value), separators=(", ", ": "))


def to_csv(rows: Sequence[Any], header: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        d = canonical(row)
        writer.writerow(_csv_cell(d[key]) for key in header)
    return buf.getvalue()


def _csv_cell(v: Any) -> Any:
    if isinstance(v, bool):
        return "true" if v else "false"
    return "" if v is None else v


def param_hash(params: dict) -> str:
    blob = json.dumps(canonical(params), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclasses.dataclass(frozen=True)
class RunManifest:
    command: str
    params: dict
    seed: int
    version: str = __version__
    timestamp: str = ""
    param_hash: str = ""

    @classmethod
    def create(cls, command: str, params: dict, seed: int) -> "RunManifest":
        return cls(
            command=command,
            params=dict(params),
            seed=seed,
            timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
            param_hash=param_hash({"command": command, **params}),
        )

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "params": self.params,
            "seed": self.seed,
            "version": self.version,
            "timestamp": self.timestamp,
            "param_hash": self.param_hash,
        }


def append_log(path: str, manifest: RunManifest, result: Any) -> None:
    line = json.dumps({"manifest": canonical(manifest), "result": canonical(result)}, sort_keys=False)
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(line + "\n")
