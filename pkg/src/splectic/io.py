"""JSON schema for exact matrices, forms and subspaces.

Every object is ``{"dim": int, "matrix": [[entry, ...], ...]}`` with entries
written as ``"p/q"`` strings.  Integers, decimal strings and JSON numbers are
accepted on input and converted exactly.  For a subspace, ``dim`` is the
ambient dimension and each row of ``matrix`` is one spanning vector.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from . import linalg as la
from .exceptions import DimensionError
from .sform import BilinearForm, Subspace


def format_fraction(x: Fraction) -> str:
    x = la.as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _entry(v) -> Fraction:
    # JSON floats go through repr so that 0.1 means one tenth
    if isinstance(v, float):
        return Fraction(repr(v))
    return la.as_fraction(v)


def matrix_to_dict(m, dim: int | None = None) -> dict:
    m = la.matrix(m)
    if dim is None:
        dim = len(m)
    return {"dim": dim, "matrix": [[format_fraction(x) for x in row] for row in m]}


def matrix_from_dict(data: dict) -> tuple:
    if not isinstance(data, dict) or "matrix" not in data:
        raise ValueError('expected an object with a "matrix" field')
    rows = tuple(tuple(_entry(v) for v in row) for row in data["matrix"])
    if rows and len({len(r) for r in rows}) != 1:
        raise DimensionError("ragged matrix")
    dim = data.get("dim")
    if dim is not None and rows and len(rows[0]) != dim:
        raise DimensionError(f"declared dim {dim} but rows have length {len(rows[0])}")
    return rows


def form_to_dict(form: BilinearForm) -> dict:
    return matrix_to_dict(form.matrix)


def form_from_dict(data: dict) -> BilinearForm:
    m = matrix_from_dict(data)
    if data.get("dim") is not None and len(m) != data["dim"]:
        raise DimensionError(f"declared dim {data['dim']} but matrix has {len(m)} rows")
    return BilinearForm(m)


def subspace_to_dict(w: Subspace) -> dict:
    return {"dim": w.ambient_dim, "matrix": [[format_fraction(x) for x in v] for v in w.spanning_vectors]}


def subspace_from_dict(data: dict) -> Subspace:
    rows = matrix_from_dict(data)
    dim = data.get("dim")
    if dim is None:
        if not rows:
            raise ValueError("an empty subspace needs an explicit dim")
        dim = len(rows[0])
    return Subspace(rows, dim)


def load_json(path) -> dict:
    with open(Path(path)) as fh:
        return json.load(fh)
