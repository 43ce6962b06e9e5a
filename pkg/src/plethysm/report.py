"""Report envelopes, JSON/CSV rendering and the published JSON schema."""

from __future__ import annotations

import csv
import io
import json
from importlib import resources

from . import __version__


def jsonable(obj, timing: bool = True):
    """Recursively convert report objects to JSON-ready structures."""
    if hasattr(obj, "to_dict"):
        return obj.to_dict(timing)
    if isinstance(obj, dict):
        return {str(k): jsonable(v, timing) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v, timing) for v in obj]
    if hasattr(obj, "item"):
        return obj.item()
    return obj


def envelope(command: str, params: dict, results: list, elapsed_ms: float,
             timing: bool = True, **extra) -> dict:
    out = {
        "tool_version": __version__,
        "command": command,
        "params": jsonable(params, timing),
        "results": [jsonable(r, timing) for r in results],
        "elapsed_ms": round(elapsed_ms, 3) if timing else 0,
    }
    out.update({k: jsonable(v, timing) for k, v in extra.items()})
    return out


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def _flat(value) -> str:
    if isinstance(value, (dict, list)):
        return json.dumps(value, separators=(",", ":"), sort_keys=True)
    if value is None:
        return ""
    return str(value).lower() if isinstance(value, bool) else str(value)


def to_csv(report: dict) -> str:
    """One delimited line per result; nested values are embedded as compact JSON."""
    rows = report["results"]
    buf = io.StringIO()
    if not rows:
        return ""
    fields: list[str] = []
    for r in rows:
        for k in r:
            if k not in fields:
                fields.append(k)
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _flat(r.get(k)) for k in fields})
    return buf.getvalue()


def load_schema() -> dict:
    return json.loads(resources.files("plethysm").joinpath("report_schema.json").read_text())
