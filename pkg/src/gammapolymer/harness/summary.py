"""Run summaries and table output."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .. import __version__
from ..rng import GENERATOR_ID

SCHEMA_VERSION = 1


@dataclass
class Table:
    name: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"{self.name}: expected {len(self.columns)} values, got {len(values)}")
        self.rows.append(list(values))


@dataclass
class RunSummary:
    """Everything needed to re-run an experiment and read off its result.

    ``config`` echoes the validated parameters, ``constants`` holds any
    saddle-point constants used, ``statistics`` the numbers produced and
    ``checks`` the pass/fail verdict of each validation.  Wall-times are
    kept out of the summary (see ``write_outputs``) so that identical runs
    give identical files.
    """

    subcommand: str
    seed: int | None
    config: dict
    constants: dict = field(default_factory=dict)
    statistics: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    version: str = __version__
    schema: int = SCHEMA_VERSION
    generator: str = GENERATOR_ID

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> str:
        return json.dumps(_clean(asdict(self)), indent=2, sort_keys=True, allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> "RunSummary":
        data = _restore(json.loads(text))
        return cls(**data)


def _clean(obj):
    """JSON-safe copy: non-finite floats become tagged strings, tuples become lists."""
    if isinstance(obj, float):
        if math.isfinite(obj):
            return obj
        return {"__float__": repr(obj)}
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item"):
        return _clean(obj.item())
    return obj


def _restore(obj):
    if isinstance(obj, dict):
        if set(obj) == {"__float__"}:
            return float(obj["__float__"])
        return {k: _restore(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_restore(v) for v in obj]
    return obj


def format_cell(value) -> str:
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, float) or hasattr(value, "dtype"):
        return format(float(value), ".17g")
    return str(value)


def write_csv(path: Path, table: Table):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([format_cell(v) for v in row])


def read_csv(path: Path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def stamp(tag: str | None) -> str:
    if tag:
        return tag
    return datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S%fZ")


def write_outputs(out_dir: Path, summary: RunSummary, tables: list[Table], tag: str | None,
                  timing: dict | None = None) -> dict[str, str]:
    """Write ``<subcommand>[-<table>]-<stamp>.csv``, the summary JSON and a timing sidecar.

    Returns the written paths keyed by table name (``summary`` and
    ``timing`` for the JSON files).
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    s = stamp(tag)
    written = {}
    for table in tables:
        base = summary.subcommand if table.name == summary.subcommand else f"{summary.subcommand}-{table.name}"
        path = out_dir / f"{base}-{s}.csv"
        write_csv(path, table)
        written[table.name] = str(path)
    path = out_dir / f"{summary.subcommand}-{s}.json"
    path.write_text(summary.to_json() + "\n", encoding="utf-8")
    written["summary"] = str(path)
    if timing is not None:
        tpath = out_dir / f"{summary.subcommand}-{s}.timing.json"
        tpath.write_text(json.dumps(_clean(timing), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        written["timing"] = str(tpath)
    return written
