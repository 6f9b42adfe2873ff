"""Plot-ready file formats: CSV tables and JSON grids/reports.

CSV floats carry 17 significant digits so values round-trip exactly.  No
timestamps go into data files; run metadata lives in a separate sidecar.
"""

from __future__ import annotations

import csv
import json
import platform
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

MODE_COLUMNS = ("t", "re_xi", "im_xi", "re_xidot", "im_xidot", "phi", "phi_dot", "theta")
CHART_COLUMNS = ("p1", "p2", "trace_r", "trace_z", "stable_r", "stable_z", "stable_trap")
POLAR_COLUMNS = ("r", "theta", "t", "re", "im", "abs2")
LATTICE_COLUMNS = ("n", "m", "n_r", "l_z")


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "%.17g" % float(x)


def _write_csv(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def read_csv(path) -> dict[str, np.ndarray]:
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    data = np.array(body, dtype=float).reshape(len(body), len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


def write_mode_csv(path, mode):
    rows = zip(mode.t, mode.xi.real, mode.xi.imag, mode.xi_dot.real, mode.xi_dot.imag,
               mode.phi, mode.phi_dot, mode.theta)
    return _write_csv(path, MODE_COLUMNS, rows)


def write_chart_csv(path, chart):
    return _write_csv(path, CHART_COLUMNS, chart.rows())


def write_line_csv(path, coord_name: str, coords, times, fields):
    """1-D field: columns <coord>, t, re, im, abs2; ``fields[k]`` sampled at ``times[k]``."""
    rows = ((c, t, v.real, v.imag, abs(v) ** 2)
            for t, f in zip(times, fields) for c, v in zip(coords, np.asarray(f)))
    return _write_csv(path, (coord_name, "t", "re", "im", "abs2"), rows)


def write_polar_csv(path, r, theta, times, fields):
    """(r, theta) field: ``fields[k]`` has shape (len(r), len(theta))."""
    rows = ((ri, th, t, f[i, j].real, f[i, j].imag, abs(f[i, j]) ** 2)
            for t, f in zip(times, map(np.asarray, fields))
            for i, ri in enumerate(r) for j, th in enumerate(theta))
    return _write_csv(path, POLAR_COLUMNS, rows)


def write_lattice_csv(path, points):
    return _write_csv(path, LATTICE_COLUMNS, points)


def _dump_json(path, doc):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=1, sort_keys=False) + "\n")
    return path


def write_field_json(path, axis_names, coords, times, fields, state: str = ""):
    """N-D field on a tensor grid.

    ``fields[k]`` is indexed ``[i_axis0, i_axis1, ...]``; it is flattened with
    axis 0 varying fastest and stored as ``[re, im]`` pairs.
    """
    coords = [np.asarray(c, dtype=float) for c in coords]
    doc = {
        "state": state,
        "axes": list(axis_names),
        "shape": [int(c.size) for c in coords],
        "origin": [float(c[0]) for c in coords],
        "spacings": [float(c[1] - c[0]) if c.size > 1 else 0.0 for c in coords],
        "order": "axis0-fastest",
        "fields": [
            {"t": float(t),
             "data": [[float(v.real), float(v.imag)] for v in np.asarray(f).ravel(order="F")]}
            for t, f in zip(times, fields)
        ],
    }
    return _dump_json(path, doc)


def read_field_json(path):
    doc = json.loads(Path(path).read_text())
    shape = tuple(doc["shape"])
    fields = [np.array([complex(a, b) for a, b in f["data"]]).reshape(shape, order="F")
              for f in doc["fields"]]
    return doc, fields


def write_report_json(path, reports, meta: dict | None = None):
    """Verification report plus a ``.meta.json`` sidecar holding run metadata."""
    path = _dump_json(path, [r.to_dict() for r in reports])
    side = path.with_name(path.stem + ".meta.json")
    info = {
        "created": datetime.now(timezone.utc).isoformat(),
        "python": platform.python_version(),
        "numpy": np.__version__,
    }
    info.update(meta or {})
    _dump_json(side, info)
    return path
