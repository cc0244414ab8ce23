"""CSV/JSON file formats for experiment outputs.

Distribution CSVs are UTF-8, comma-separated, with `#`-prefixed
`key=value` metadata lines before the header.  Counts are integers and
round-trip exactly; support values round-trip via repr.  Every
experiment output directory gets a JSON manifest sufficient to rerun
the experiment bit-identically.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .model import ValidationError
from .montecarlo import EmpiricalDistribution


class FileFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


def write_empirical_csv(path, empirical: EmpiricalDistribution, metadata: dict) -> None:
    cum = empirical.cumulative()
    with open(path, "w", encoding="utf-8") as f:
        for key, value in metadata.items():
            f.write(f"# {key}={value}\n")
        f.write("value,count,ecdf\n")
        for x, w, c in zip(empirical.support, empirical.weights, cum):
            xs = repr(int(x)) if np.issubdtype(empirical.support.dtype, np.integer) else repr(float(x))
            f.write(f"{xs},{int(w)},{float(c)!r}\n")


def read_empirical_csv(path) -> tuple[EmpiricalDistribution, dict]:
    metadata: dict[str, str] = {}
    support: list[float] = []
    weights: list[int] = []
    integer_support = True
    with open(path, encoding="utf-8") as f:
        lines = f.readlines()
    body_started = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if body_started:
                raise FileFormatError("metadata after data rows", lineno)
            key, _, value = line[1:].strip().partition("=")
            metadata[key.strip()] = value
            continue
        if not body_started:
            if line != "value,count,ecdf":
                raise FileFormatError(f"expected header 'value,count,ecdf', got {line!r}", lineno)
            body_started = True
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise FileFormatError(f"expected 3 fields, got {len(parts)}", lineno)
        try:
            x = float(parts[0])
            w = int(parts[1])
        except ValueError as exc:
            raise FileFormatError(str(exc), lineno) from None
        if "." in parts[0] or "e" in parts[0] or "E" in parts[0]:
            integer_support = False
        support.append(x)
        weights.append(w)
    if not body_started:
        raise FileFormatError("no header found", len(lines))
    if not support:
        raise FileFormatError("no data rows", len(lines))
    arr = np.asarray(support, dtype=np.int64 if integer_support else np.float64)
    w = np.asarray(weights, dtype=np.int64)
    if not np.all(np.diff(arr) > 0):
        raise FileFormatError("support values must be strictly increasing")
    return EmpiricalDistribution(support=arr, weights=w, total=int(w.sum())), metadata


def write_reference_csv(path, grid, cdf_values, metadata: dict) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for key, value in metadata.items():
            f.write(f"# {key}={value}\n")
        f.write("value,cdf\n")
        for x, c in zip(grid, cdf_values):
            f.write(f"{x!r},{float(c)!r}\n")


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to rerun an experiment bit-identically."""

    config: dict            # mode, p, q1, q2, N, s, m, seed (strings/ints)
    tool_version: str
    rng_scheme: str
    wall_time_s: float
    excluded: int
    outputs: dict = field(default_factory=dict)  # logical name -> path

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        data = json.loads(text)
        return cls(**data)


def write_manifest(path, manifest: RunManifest) -> None:
    Path(path).write_text(manifest.to_json() + "\n", encoding="utf-8")


def read_manifest(path) -> RunManifest:
    try:
        return RunManifest.from_json(Path(path).read_text(encoding="utf-8"))
    except (json.JSONDecodeError, TypeError) as exc:
        raise FileFormatError(f"bad manifest: {exc}") from None
