"""Deterministic CSV/JSON output and run manifests."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__

OUTPUT_ENV = "NESSLAB_OUTPUT_DIR"


def format_value(x) -> str:
    if hasattr(x, "item"):  # numpy scalar
        x = x.item()
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    return str(x)


def _is_bad(x) -> bool:
    return isinstance(x, float) and not math.isfinite(x)


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    manifest: str = "manifest.json"

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values for {len(self.columns)} columns")
        self.rows.append([v.item() if hasattr(v, "item") else v for v in values])

    def validate(self):
        if "status" in self.columns:
            return
        for row in self.rows:
            if any(_is_bad(v) for v in row):
                raise ValueError("non-finite value in a table without a status column")

    def to_csv(self) -> str:
        self.validate()
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([format_value(v) for v in row])
        return buf.getvalue()

    def column(self, name):
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def read_csv(path) -> ResultTable:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        columns = next(reader)
        rows = [[_parse_cell(c) for c in row] for row in reader if row]
    return ResultTable(columns=columns, rows=rows)


def _parse_cell(s: str):
    if s in ("true", "false"):
        return s == "true"
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "tolist"):
        return _jsonable(obj.tolist())
    if isinstance(obj, float) and not math.isfinite(obj):
        return format_value(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def resolve_output_dir(flag: str | None, config_value: str | None, subcommand: str) -> Path:
    """--out flag, then $NESSLAB_OUTPUT_DIR, then the config key, then ./nesslab-out/<subcommand>."""
    for cand in (flag, os.environ.get(OUTPUT_ENV), config_value):
        if cand:
            return Path(cand)
    return Path("nesslab-out") / subcommand


def write_outputs(outdir: Path, tables: dict, reports: dict) -> dict:
    outdir.mkdir(parents=True, exist_ok=True)
    written = {}
    for name, table in tables.items():
        path = outdir / f"{name}.csv"
        with open(path, "w", newline="") as fh:
            fh.write(table.to_csv())
        written[name] = path.name
    for name, report in reports.items():
        path = outdir / f"{name}.json"
        path.write_text(dumps(report))
        written[name] = path.name
    return written


def write_manifest(outdir: Path, subcommand: str, config: dict, outputs: dict, wall_time: float) -> Path:
    manifest = {
        "tool": "nesslab",
        "version": __version__,
        "subcommand": subcommand,
        "config": config,
        "conventions": {
            "hbar": 1,
            "girardeau_mass": 0.5,
            "convention": config.get("convention"),
            "units": config.get("units"),
        },
        "outputs": outputs,
        "wall_time_s": wall_time,
    }
    path = outdir / "manifest.json"
    path.write_text(dumps(manifest))
    return path


def load_manifest(path) -> dict:
    with open(path) as fh:
        return json.load(fh)
