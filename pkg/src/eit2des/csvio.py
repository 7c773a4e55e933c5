"""Deterministic CSV writing/reading at 9 significant digits."""
from __future__ import annotations

import csv
import io

import numpy as np

FMT = "%.9g"


def format_csv(header, columns):
    """Render equal-length numeric columns as CSV text."""
    data = np.column_stack([np.asarray(c, dtype=float).ravel() for c in columns])
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    np.savetxt(buf, data, fmt=FMT, delimiter=",", newline="\n")
    return buf.getvalue()


def write_csv(path, header, columns):
    text = format_csv(header, columns)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return path


def parse_csv(text):
    """Return ``(header, columns)`` from CSV text written by :func:`format_csv`."""
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    data = np.array(body, dtype=float).reshape(len(body), len(header))
    return header, [data[:, k] for k in range(len(header))]


def read_csv(path):
    with open(path, newline="") as fh:
        return parse_csv(fh.read())
