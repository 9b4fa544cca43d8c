"""File formats: operators and kets as JSON, phase-space grids as CSV.

Complex numbers are always written as ``[re, im]`` pairs (JSON) or as two
columns (CSV), using the shortest repr that round-trips exactly.

Operator file::

    {"kind": "operator", "dim": N, "name": "...", "hermitian": true,
     "entries": [[re, im], ...]}          # N*N entries, row-major

Ket file::

    {"kind": "ket", "dim": N, "name": "...", "amplitudes": [[re, im], ...]}

Grid file::

    # N=5 s=0.0,0.0 dist=wigner
    mu,nu,re,im
    -2,-2,0.04,0.0
    ...                                   # N*N rows, mu-major
"""

from __future__ import annotations

import csv
import io
import json
import re

import numpy as np

from .errors import DphaseError
from .kernel import PhaseGrid

__all__ = [
    "FormatError",
    "dump_operator",
    "dump_ket",
    "load_state_file",
    "dump_grid",
    "load_grid",
]

HERMITIAN_TOL = 1e-12


class FormatError(DphaseError, ValueError):
    """A file could not be parsed."""


def _pairs(values) -> list[list[float]]:
    return [[float(v.real), float(v.imag)] for v in np.asarray(values, dtype=complex).ravel()]


def _complex_array(pairs, count: int, what: str) -> np.ndarray:
    if not isinstance(pairs, list) or len(pairs) != count:
        raise FormatError(f"{what}: expected {count} [re, im] pairs")
    out = np.empty(count, dtype=complex)
    for i, p in enumerate(pairs):
        if (
            not isinstance(p, list)
            or len(p) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in p)
        ):
            raise FormatError(f"{what}: entry {i} is not an [re, im] pair")
        out[i] = complex(p[0], p[1])
    if not np.all(np.isfinite(out)):
        raise FormatError(f"{what}: non-finite entry")
    return out


def _check_dim(dim) -> int:
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1 or dim % 2 == 0:
        raise FormatError(f"dim must be a positive odd integer, got {dim!r}")
    return dim


def dump_operator(op, name: str = "") -> str:
    op = np.asarray(op, dtype=complex)
    herm = bool(np.abs(op - op.conj().T).max() <= HERMITIAN_TOL)
    doc = {"kind": "operator", "dim": op.shape[0], "name": name, "hermitian": herm, "entries": _pairs(op)}
    return json.dumps(doc, indent=1) + "\n"


def dump_ket(ket, name: str = "") -> str:
    ket = np.asarray(ket, dtype=complex)
    doc = {"kind": "ket", "dim": ket.shape[0], "name": name, "amplitudes": _pairs(ket)}
    return json.dumps(doc, indent=1) + "\n"


def load_state_file(text: str) -> tuple[str, np.ndarray, dict]:
    """Parse an operator or ket file; returns ``(kind, array, metadata)``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise FormatError("top level must be a JSON object")
    dim = _check_dim(doc.get("dim"))
    kind = doc.get("kind", "ket" if "amplitudes" in doc else "operator")
    meta = {k: doc[k] for k in ("name", "hermitian") if k in doc}
    if kind == "operator":
        return kind, _complex_array(doc.get("entries"), dim * dim, "entries").reshape(dim, dim), meta
    if kind == "ket":
        return kind, _complex_array(doc.get("amplitudes"), dim, "amplitudes"), meta
    raise FormatError(f"unknown kind {kind!r}")


_HEADER = re.compile(r"^#\s*N=(\d+)\s+s=([^,\s]+),([^,\s]+)\s+dist=(\S*)\s*$")


def dump_grid(grid: PhaseGrid) -> str:
    N = grid.N
    ell = (N - 1) // 2
    s = complex(grid.s)
    buf = io.StringIO()
    buf.write(f"# N={N} s={s.real!r},{s.imag!r} dist={grid.label or 's'}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["mu", "nu", "re", "im"])
    for i in range(N):
        for j in range(N):
            v = complex(grid.values[i, j])
            writer.writerow([i - ell, j - ell, repr(v.real), repr(v.imag)])
    return buf.getvalue()


def load_grid(text: str) -> PhaseGrid:
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty grid file")
    m = _HEADER.match(lines[0])
    if not m:
        raise FormatError(f"bad grid header: {lines[0]!r}")
    N = _check_dim(int(m.group(1)))
    try:
        s = complex(float(m.group(2)), float(m.group(3)))
    except ValueError as exc:
        raise FormatError(f"bad s in grid header: {lines[0]!r}") from exc
    label = m.group(4)
    reader = csv.reader(lines[1:])
    rows = [r for r in reader if r]
    if rows and rows[0] == ["mu", "nu", "re", "im"]:
        rows = rows[1:]
    if len(rows) != N * N:
        raise FormatError(f"expected {N * N} grid rows, found {len(rows)}")
    ell = (N - 1) // 2
    values = np.full((N, N), np.nan, dtype=complex)
    for k, row in enumerate(rows):
        try:
            mu, nu = int(row[0]), int(row[1])
            val = complex(float(row[2]), float(row[3]))
        except (ValueError, IndexError) as exc:
            raise FormatError(f"bad grid row {k + 1}: {row!r}") from exc
        if not (-ell <= mu <= ell and -ell <= nu <= ell):
            raise FormatError(f"grid labels ({mu}, {nu}) outside [-{ell}, {ell}]")
        values[mu + ell, nu + ell] = val
    if np.isnan(values.real).any():
        raise FormatError("grid has missing or duplicate points")
    return PhaseGrid(values, s, "" if label == "s" else label)
