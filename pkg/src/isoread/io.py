"""Feature-matrix and readout exchange formats (CSV, JSON)."""

from __future__ import annotations

import csv
import io
import json

import numpy as np


def read_features_csv(text: str) -> np.ndarray:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise ValueError("feature CSV is empty")
    try:
        data = [[float(c) for c in r] for r in rows]
    except ValueError as exc:
        raise ValueError(f"non-numeric value in feature CSV: {exc}") from None
    widths = {len(r) for r in data}
    if len(widths) != 1:
        raise ValueError("feature CSV rows have differing lengths")
    return np.array(data, dtype=np.float64)


def write_features_csv(M) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    for row in np.asarray(M, dtype=np.float64):
        w.writerow([repr(float(x)) for x in row])
    return buf.getvalue()


def read_features_json(text: str) -> np.ndarray:
    obj = json.loads(text)
    n, d = int(obj["n"]), int(obj["d"])
    M = np.asarray(obj["data"], dtype=np.float64).reshape(-1, d) if n else np.zeros((0, d))
    if M.shape != (n, d):
        raise ValueError(f"envelope says {n}x{d}, data has shape {M.shape}")
    return M


def write_features_json(M) -> str:
    M = np.asarray(M, dtype=np.float64)
    return json.dumps({"n": M.shape[0], "d": M.shape[1], "data": M.tolist()})


def load_features(path: str) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return read_features_json(text)
    return read_features_csv(text)


def vector_json(v) -> str:
    return json.dumps([float(x) for x in np.asarray(v).ravel()])
