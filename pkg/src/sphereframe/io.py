"""File formats.

Every artifact is a JSON document with a version field; floats are written
with Python's shortest round-trip rendering, so write -> read -> write is
byte-identical.  Polar grids additionally export as CSV and as binary PGM.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .constructions import PolarGrid
from .errors import FormatError
from .frames import FrameSpec, Scale, Signal
from .quadrature import RotationRule

FORMAT_VERSION = 1


def _dump(doc: dict, path) -> None:
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def _load(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: expected a JSON object")
    return doc


def _expect(doc: dict, kind: str, path) -> None:
    if doc.get("kind") != kind:
        raise FormatError(f"{path}: expected kind {kind!r}, got {doc.get('kind')!r}")
    if doc.get("version") != FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported version {doc.get('version')!r}")


def _coeff_rows(coeffs: dict) -> list:
    rows = []
    for (n, k), c in sorted(coeffs.items(), key=lambda kv: (kv[0][0], kv[0][1])):
        c = complex(c)
        rows.append([int(n), [int(v) for v in k], c.real, c.imag])
    return rows


def _coeffs_from_rows(rows, path) -> dict:
    coeffs = {}
    for row in rows:
        try:
            n, k, re, im = row
            coeffs[(int(n), tuple(int(v) for v in k))] = complex(float(re), float(im))
        except (TypeError, ValueError) as exc:
            raise FormatError(f"{path}: malformed coefficient row {row!r}") from exc
    return coeffs


# -- frame specs -------------------------------------------------------------

def spec_to_dict(spec: FrameSpec) -> dict:
    metadata = {}
    if spec.steerable_K is not None:
        metadata["steerable_K"] = int(spec.steerable_K)
    if spec.invariant_m is not None:
        metadata["invariant_m"] = int(spec.invariant_m)
    if spec.base_rotation is not None:
        metadata["base_rotation"] = [[float(v) for v in row]
                                     for row in np.asarray(spec.base_rotation)]
    return {
        "version": FORMAT_VERSION,
        "kind": "frame_spec",
        "d": int(spec.d),
        "metadata": metadata,
        "scales": [{"j": int(s.j), "N_j": int(s.bandwidth),
                    "coeffs": _coeff_rows(s.coeffs)} for s in spec.scales],
    }


def spec_from_dict(doc: dict, path="<doc>") -> FrameSpec:
    _expect(doc, "frame_spec", path)
    try:
        d = int(doc["d"])
        meta = doc.get("metadata", {})
        scales = [Scale(int(s["j"]), int(s["N_j"]),
                        _coeffs_from_rows(s["coeffs"], path))
                  for s in doc["scales"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: malformed frame spec ({exc})") from exc
    base = meta.get("base_rotation")
    spec = FrameSpec(
        d, scales,
        steerable_K=None if meta.get("steerable_K") is None else int(meta["steerable_K"]),
        invariant_m=None if meta.get("invariant_m") is None else int(meta["invariant_m"]),
        base_rotation=None if base is None else np.asarray(base, dtype=float))
    spec.validate()
    return spec


def write_spec(spec: FrameSpec, path) -> None:
    _dump(spec_to_dict(spec), path)


def read_spec(path) -> FrameSpec:
    return spec_from_dict(_load(path), path)


# -- signals -----------------------------------------------------------------

def signal_to_dict(signal: Signal) -> dict:
    return {
        "version": FORMAT_VERSION,
        "kind": "signal",
        "d": int(signal.d),
        "N_f": int(signal.degree),
        "coeffs": _coeff_rows(signal.coeffs),
    }


def signal_from_dict(doc: dict, path="<doc>") -> Signal:
    _expect(doc, "signal", path)
    try:
        return Signal(int(doc["d"]), int(doc["N_f"]),
                      _coeffs_from_rows(doc["coeffs"], path))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: malformed signal ({exc})") from exc


def write_signal(signal: Signal, path) -> None:
    _dump(signal_to_dict(signal), path)


def read_signal(path) -> Signal:
    return signal_from_dict(_load(path), path)


# -- rotation grids ----------------------------------------------------------

def grid_to_dict(rule: RotationRule) -> dict:
    doc = {
        "version": FORMAT_VERSION,
        "kind": "rotation_grid",
        "d": int(rule.d),
        "class_degree": int(rule.class_degree),
        "variant": rule.variant,
    }
    if rule.steer_K is not None:
        doc["steer_K"] = int(rule.steer_K)
    doc["rotations"] = [[float(v) for v in g.ravel()] for g in rule.rotations]
    doc["weights"] = [float(w) for w in rule.weights]
    return doc


def grid_from_dict(doc: dict, path="<doc>") -> RotationRule:
    _expect(doc, "rotation_grid", path)
    try:
        d = int(doc["d"])
        rotations = np.array([np.asarray(flat, dtype=float).reshape(d, d)
                              for flat in doc["rotations"]])
        weights = np.asarray(doc["weights"], dtype=float)
        rule = RotationRule(d, rotations, weights, int(doc["class_degree"]),
                            doc["variant"], doc.get("steer_K"))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: malformed rotation grid ({exc})") from exc
    if rotations.shape[0] != weights.shape[0]:
        raise FormatError(f"{path}: rotation/weight counts differ")
    if np.any(weights <= 0):
        raise FormatError(f"{path}: grid weights must be positive")
    return rule


def write_grid(rule: RotationRule, path) -> None:
    _dump(grid_to_dict(rule), path)


def read_grid(path) -> RotationRule:
    return grid_from_dict(_load(path), path)


# -- reports -----------------------------------------------------------------

def write_report(doc: dict, path) -> None:
    out = {"version": FORMAT_VERSION, "kind": "report"}
    out.update(doc)
    _dump(out, path)


def read_report(path) -> dict:
    doc = _load(path)
    _expect(doc, "report", path)
    return doc


# -- polar grid exports --------------------------------------------------------

def write_polar_csv(grid: PolarGrid, path) -> None:
    """Row-major CSV: header row carries the phi axis, first column the t axis."""
    lines = ["t/phi," + ",".join(repr(float(p)) for p in grid.phi)]
    for i, t in enumerate(grid.t):
        lines.append(repr(float(t)) + ","
                     + ",".join(repr(float(v)) for v in grid.values[i]))
    Path(path).write_text("\n".join(lines) + "\n")


def write_polar_pgm(grid: PolarGrid, path) -> None:
    """8-bit binary PGM via the affine map [-1,1] -> [0,255], rounding half
    away from zero."""
    v = np.clip(grid.values, -1.0, 1.0)
    u = (v + 1.0) * 127.5
    pix = np.clip(np.floor(u + 0.5), 0, 255).astype(np.uint8)
    h, w = pix.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(pix.tobytes())
