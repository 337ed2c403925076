"""CSV/JSON writers with an embedded config echo.

Floats are written with ``repr`` so that values round-trip bit-exactly and
reruns with the same config produce identical bytes.
"""
from __future__ import annotations

import io
import json
import math

import numpy as np


def _plain(value):
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [_plain(float(value.real)), _plain(float(value.imag))]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return repr(value)
        return value
    return value


def format_cell(value):
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def csv_text(columns, rows, config_echo=None, comments=()):
    buf = io.StringIO()
    if config_echo is not None:
        for key in sorted(config_echo):
            buf.write(f"# {key} = {config_echo[key]!r}\n")
    for line in comments:
        buf.write(f"# {line}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        if len(row) != len(columns):
            raise ValueError("row length does not match the header")
        buf.write(",".join(format_cell(v) for v in row) + "\n")
    return buf.getvalue()


def json_text(payload, config_echo=None):
    body = dict(payload)
    if config_echo is not None:
        body["config"] = config_echo
    return json.dumps(_plain(body), indent=2, sort_keys=True) + "\n"


def read_csv(path):
    """Return (header, rows as float arrays) ignoring comment lines."""
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if not ln.startswith("#")]
    header = lines[0].split(",")
    data = np.array([[float(x) for x in ln.split(",")] for ln in lines[1:]])
    return header, data
