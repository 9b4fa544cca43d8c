"""Verification tolerances, overridable from a JSON config file.

A config file is a JSON object, either flat or under a ``"tolerances"``
key, mapping field names of :class:`Tolerances` to numbers::

    {"tolerances": {"roundtrip": 1e-8}}

The file is taken from ``--config`` or, failing that, the ``DPHASE_CONFIG``
environment variable.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .errors import DomainError

ENV_VAR = "DPHASE_CONFIG"


@dataclass(frozen=True)
class Tolerances:
    theta_identity: float = 1e-10
    orthonormality: float = 1e-12
    unitarity: float = 1e-13
    weyl: float = 1e-12
    decomposition: float = 1e-12
    vacuum: float = 1e-11
    closed_form: float = 1e-10
    overlap: float = 1e-10
    kernel_identity: float = 1e-11
    kernel_pairing: float = 1e-10
    coherent_projector: float = 1e-10
    roundtrip: float = 1e-9
    hierarchy: float = 1e-10
    antihierarchy: float = 1e-9
    fold: float = 1e-9
    positivity: float = 1e-12


def load_tolerances(path: str | os.PathLike | None = None) -> Tolerances:
    """Defaults, updated from ``path`` or ``$DPHASE_CONFIG`` when given."""
    if path is None:
        path = os.environ.get(ENV_VAR) or None
    if path is None:
        return Tolerances()
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read config {path}: {exc}") from exc
    if isinstance(data, dict) and "tolerances" in data:
        data = data["tolerances"]
    if not isinstance(data, dict):
        raise DomainError(f"config {path} must hold a JSON object")
    known = {f.name for f in fields(Tolerances)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise DomainError(f"unknown tolerance name(s) in {path}: {', '.join(unknown)}")
    values = {}
    for key, val in data.items():
        if isinstance(val, bool) or not isinstance(val, (int, float)) or not val > 0:
            raise DomainError(f"tolerance {key} must be a positive number, got {val!r}")
        values[key] = float(val)
    return replace(Tolerances(), **values)
