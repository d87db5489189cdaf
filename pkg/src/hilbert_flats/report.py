"""Reports: deterministic structured text (JSON, 17 significant digits) and CSV rows."""

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .projective import ProjectiveMap, ProjectivePoint

VERSION = "0.1.0"
FORMATS = ("structured-text", "comma-separated-values")
_ALIASES = {"json": "structured-text", "text": "structured-text", "csv": "comma-separated-values"}


@dataclass
class Report:
    command: str
    inputs_digest: str
    outputs: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    error: str = None

    @property
    def passed(self):
        return self.error is None and all(self.verdicts.values())

    def as_dict(self):
        out = {"command": self.command, "inputs_digest": self.inputs_digest,
               "outputs": self.outputs, "residuals": self.residuals,
               "verdicts": self.verdicts, "provenance": self.provenance}
        if self.error is not None:
            out["error"] = self.error
        if self.rows:
            out["rows"] = self.rows
        return out


def _number(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == int(x) and abs(x) < 1e16:
        return f"{x:.1f}"
    return format(x, ".17g")


def to_plain(obj):
    """Recursively convert numpy and geometry objects to JSON-ready values."""
    if isinstance(obj, ProjectivePoint):
        return [float(c) for c in obj.coords]
    if isinstance(obj, ProjectiveMap):
        return obj.matrix.tolist()
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def dumps(obj, indent=0):
    """JSON text with floats at 17 significant digits and a fixed layout."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + dumps(v, indent + 1) for v in obj) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        text = _number(obj)
        return json.dumps(text) if text in ("nan", "inf", "-inf") else text
    return json.dumps(obj)


def digest(data, command, seed):
    text = dumps(to_plain({"scene": data, "command": command, "seed": seed}))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def normalize_format(fmt):
    fmt = _ALIASES.get(fmt, fmt)
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    return fmt


def render(report, fmt="structured-text"):
    fmt = normalize_format(fmt)
    if fmt == "structured-text":
        return dumps(to_plain(report.as_dict())) + "\n"
    rows = to_plain(report.rows)
    buf = io.StringIO()
    if not rows:
        # summary table when the command has no per-sample rows
        rows = [{"kind": kind, "name": k, "value": v}
                for kind, block in (("output", report.outputs), ("residual", report.residuals),
                                    ("verdict", report.verdicts))
                for k, v in _flatten(to_plain(block))]
    header = list(dict.fromkeys(k for r in rows for k in r))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([_cell(r.get(h, "")) for h in header])
    return buf.getvalue()


def _flatten(block, prefix=""):
    """(dotted name, value) pairs of a nested dict; lists of lists are skipped."""
    for k, v in block.items():
        name = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, name + ".")
        elif isinstance(v, list) and any(isinstance(x, (list, dict)) for x in v):
            continue
        else:
            yield name, v


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _number(v)
    if isinstance(v, list):
        return " ".join(_cell(x) for x in v)
    return v


def emit_report(report, fmt="structured-text", path=None):
    text = render(report, fmt)
    if path is None:
        return text
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return text
