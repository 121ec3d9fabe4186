"""JSON matrix files.

Schema::

    {"kind": "state" | "pure" | "choi" | "unitary",
     "dims": [rows, cols],          # [dim_out, dim_in] for kind "choi"
     "data": [[[re, im], ...], ...]} # row-major

A pure state is a column, ``dims = [d, 1]``. A Choi file's ``data`` is the
full ``(dim_out*dim_in) x (dim_out*dim_in)`` matrix. Other top-level keys
are carried through untouched.
"""
import json
import math
from dataclasses import dataclass, field

import numpy as np

KINDS = ("state", "pure", "choi", "unitary")


class MatrixFileError(ValueError):
    pass


@dataclass
class MatrixFile:
    kind: str
    dims: list
    matrix: np.ndarray
    extra: dict = field(default_factory=dict)

    def to_json(self):
        rows = [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix]
        payload = {"kind": self.kind, "dims": list(self.dims), "data": rows}
        payload.update(self.extra)
        return json.dumps(payload, indent=1, allow_nan=False)


def _shape_for(kind, dims):
    if kind == "choi":
        n = dims[0] * dims[1]
        return n, n
    return dims[0], dims[1]


def parse(text):
    try:
        payload = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"invalid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise MatrixFileError("top level must be an object")
    missing = [k for k in ("kind", "dims", "data") if k not in payload]
    if missing:
        raise MatrixFileError(f"missing field(s): {', '.join(missing)}")
    kind, dims, data = payload.pop("kind"), payload.pop("dims"), payload.pop("data")
    if kind not in KINDS:
        raise MatrixFileError(f"unknown kind {kind!r}")
    if not (isinstance(dims, list) and len(dims) == 2 and all(isinstance(d, int) and d > 0 for d in dims)):
        raise MatrixFileError(f"dims must be two positive integers, got {dims!r}")
    rows, cols = _shape_for(kind, dims)
    if not isinstance(data, list) or len(data) != rows:
        raise MatrixFileError(f"data must have {rows} rows")
    out = np.empty((rows, cols), dtype=complex)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise MatrixFileError(f"row {i} must have {cols} entries")
        for j, entry in enumerate(row):
            if not (isinstance(entry, list) and len(entry) == 2):
                raise MatrixFileError(f"entry ({i}, {j}) must be a [re, im] pair")
            re, im = entry
            if isinstance(re, bool) or isinstance(im, bool) or not isinstance(re, (int, float)) or not isinstance(im, (int, float)):
                raise MatrixFileError(f"entry ({i}, {j}) is not numeric")
            if not (math.isfinite(re) and math.isfinite(im)):
                raise MatrixFileError(f"entry ({i}, {j}) is not finite")
            out[i, j] = complex(re, im)
    return MatrixFile(kind, list(dims), out, payload)


def _reject_constant(name):
    raise MatrixFileError(f"non-finite number {name} not allowed")


def read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise MatrixFileError(f"cannot read {path}: {exc.strerror}") from exc
    return parse(text)


def write(path, mf):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(mf.to_json())
        fh.write("\n")


def from_state(rho):
    rho = np.asarray(rho, dtype=complex)
    return MatrixFile("state", list(rho.shape), rho)


def from_pure(psi):
    psi = np.asarray(psi, dtype=complex).reshape(-1, 1)
    return MatrixFile("pure", [psi.shape[0], 1], psi)


def from_unitary(u, **extra):
    u = np.asarray(u, dtype=complex)
    return MatrixFile("unitary", list(u.shape), u, dict(extra))


def from_channel(ch):
    return MatrixFile("choi", [ch.dim_out, ch.dim_in], ch.choi)
