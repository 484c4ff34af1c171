"""Plain-text configuration, CSV tables, JSON reports and potential/tensor files."""

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import InvalidInputError
from .manybody import TwoBodyTensor
from .scattering import RadialPotential


def parse_value(text):
    text = text.strip()
    if "," in text:
        return [parse_value(t) for t in text.split(",") if t.strip()]
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_config(path):
    """``key = value`` lines; ``#`` starts a comment; commas make lists."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInputError(f"{path}:{lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        out[key.strip()] = parse_value(value)
    return out


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps_json(obj):
    return json.dumps(_plain(obj), sort_keys=True, indent=2)


def write_json(path, obj):
    Path(path).write_text(dumps_json(obj) + "\n")


def write_csv(path, header, columns):
    cols = [np.atleast_1d(np.asarray(c)) for c in columns]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in zip(*cols):
            w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])


def read_csv_columns(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], [r for r in rows[1:] if r]
    return {h.strip(): np.array([float(r[i]) for r in body]) for i, h in enumerate(header)}


def potential_from_mapping(cfg):
    kind = str(cfg.get("kind", "none"))
    core = float(cfg.get("core_radius", 0.0))
    if kind in ("none", "hard_sphere", "hard-sphere"):
        return RadialPotential(hard_core_radius=core)
    if kind in ("gaussian", "square"):
        return RadialPotential(
            hard_core_radius=core,
            kind=kind,
            amplitude=float(cfg.get("amplitude", 0.0)),
            width=float(cfg.get("width", 1.0)),
        )
    raise InvalidInputError(f"unknown potential kind {kind!r}")


def read_potential(path, core_radius=0.0):
    """Key-value potential spec, or a two-column ``r,v`` CSV for a tabulated tail."""
    text = Path(path).read_text()
    first = next((ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")), "")
    if "=" in first:
        return potential_from_mapping(read_config(path))
    cols = read_csv_columns(path)
    return RadialPotential.tabulated(cols["r"], cols["v"], core=core_radius)


def read_tensor_csv(path, n_modes=None):
    """Rows ``i,j,k,l,value``; missing entries are zero."""
    cols = read_csv_columns(path)
    idx = np.column_stack([cols[c].astype(int) for c in ("i", "j", "k", "l")])
    m = n_modes if n_modes is not None else int(idx.max()) + 1
    v = np.zeros((m, m, m, m))
    for (i, j, k, l), val in zip(idx, cols["value"]):
        v[i, j, k, l] = val
    return TwoBodyTensor(v)


def write_tensor_csv(path, tensor, tol=0.0):
    m = tensor.n_modes
    rows = [(i, j, k, l, tensor.v[i, j, k, l]) for i in range(m) for j in range(m) for k in range(m) for l in range(m)
            if abs(tensor.v[i, j, k, l]) > tol]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "j", "k", "l", "value"])
        for r in rows:
            w.writerow([*r[:4], repr(float(r[4]))])
