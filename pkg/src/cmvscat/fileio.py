"""File formats: scattering-function input, coefficient files, reports.

JSON writing is deterministic (sorted keys, fixed indentation, no
timestamps) so identical inputs give byte-identical outputs.
"""

import csv
import io
import json

import numpy as np

from .circle import CircleGrid, LaurentSeries, ScatteringFunction
from .errors import InputError
from .verblunsky import VerblunskySequence


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_text(path, text):
    with open(path, "w") as fh:
        fh.write(text)


def _c2pair(z):
    return [float(np.real(z)), float(np.imag(z))]


def load_scattering(path, grid_size):
    """Read a scattering function from JSON or CSV.

    JSON: {"type": "coeffs", "entries": [[j, re, im], ...]} or
          {"type": "samples", "grid": M, "values": [[re, im], ...]}.
    CSV: columns theta, re, im over a full equispaced grid (optional
    header row).
    """
    if str(path).endswith(".csv"):
        return _load_scattering_csv(path)
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON ({exc})") from exc
    kind = data.get("type")
    if kind == "coeffs":
        entries = data.get("entries")
        if not entries:
            raise InputError(f"{path}: 'entries' must be a nonempty list")
        idx = {}
        for row in entries:
            if len(row) != 3:
                raise InputError(f"{path}: coefficient rows must be [j, re, im]")
            j, re, im = int(row[0]), float(row[1]), float(row[2])
            idx[j] = idx.get(j, 0j) + complex(re, im)
        lo, hi = min(idx), max(idx)
        coeffs = np.zeros(hi - lo + 1, dtype=complex)
        for j, v in idx.items():
            coeffs[j - lo] = v
        grid = CircleGrid(grid_size)
        return ScatteringFunction.from_coeffs(LaurentSeries(lo, coeffs), grid)
    if kind == "samples":
        M = int(data.get("grid", 0))
        values = data.get("values")
        if not values or len(values) != M:
            raise InputError(f"{path}: 'values' must be a list of length 'grid'")
        samples = np.array([complex(v[0], v[1]) for v in values])
        return ScatteringFunction.from_samples(samples, CircleGrid(M))
    raise InputError(f"{path}: 'type' must be 'coeffs' or 'samples'")


def _load_scattering_csv(path):
    thetas, vals = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row:
                continue
            try:
                th = float(row[0])
            except ValueError:
                continue  # header row
            if len(row) != 3:
                raise InputError(f"{path}: CSV rows must be theta,re,im")
            thetas.append(th)
            vals.append(complex(float(row[1]), float(row[2])))
    M = len(vals)
    grid = CircleGrid(M)
    if np.max(np.abs(np.array(thetas) - grid.theta)) > 1e-9:
        raise InputError(f"{path}: theta column is not the equispaced grid 2*pi*k/{M}")
    return ScatteringFunction.from_samples(np.array(vals), grid)


def save_scattering_samples(R, fmt="json"):
    if fmt == "json":
        return dumps(
            {
                "type": "samples",
                "grid": R.grid.size,
                "values": [_c2pair(v) for v in R.samples],
            }
        )
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["theta", "re", "im"])
    for th, v in zip(R.grid.theta, R.samples):
        w.writerow([repr(float(th)), repr(float(v.real)), repr(float(v.imag))])
    return buf.getvalue()


def load_alphas(path):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON ({exc})") from exc
    if "lo" not in data or "alphas" not in data:
        raise InputError(f"{path}: coefficient files need 'lo' and 'alphas'")
    alphas = np.array([complex(a[0], a[1]) for a in data["alphas"]])
    a0s = np.array(data["a0s"], dtype=float) if "a0s" in data else None
    return VerblunskySequence(int(data["lo"]), alphas, a0s)


def save_alphas(seq, include_a0s=True):
    data = {"lo": int(seq.lo), "alphas": [_c2pair(a) for a in seq.alphas]}
    if include_a0s and seq.a0s is not None:
        data["a0s"] = [float(a) for a in seq.a0s]
    return dumps(data)


def save_reconstruction(zs, values, fmt="json"):
    if fmt == "json":
        return dumps({"z": [_c2pair(z) for z in zs],
                      "R": [_c2pair(v) for v in values]})
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["z_re", "z_im", "R_re", "R_im"])
    for z, v in zip(zs, values):
        w.writerow([repr(float(np.real(z))), repr(float(np.imag(z))),
                    repr(float(np.real(v))), repr(float(np.imag(v)))])
    return buf.getvalue()


def save_density_csv(density):
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(
        ["theta", "re11", "im11", "re12", "im12", "re21", "im21", "re22", "im22"]
    )
    for th, m in zip(density.grid.theta, density.values):
        row = [repr(float(th))]
        for p in range(2):
            for q in range(2):
                row += [repr(float(m[p, q].real)), repr(float(m[p, q].imag))]
        w.writerow(row)
    return buf.getvalue()


def save_matrix_csv(entries):
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["row", "col", "re", "im"])
    for i, j, v in entries:
        w.writerow([i, j, repr(float(v.real)), repr(float(v.imag))])
    return buf.getvalue()


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, complex):
        return _c2pair(value)
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    return value


def save_report(report):
    return dumps(_jsonable(report))
