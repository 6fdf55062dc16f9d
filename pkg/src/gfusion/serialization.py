"""Reading and writing family documents.

A family document is a JSON tree::

    {
      "dim": 3,
      "controls": {"T": <matrix>, "U": <matrix>},
      "atoms": [
        {"id": "B1", "weight": 3.0, "v": 1.0,
         "subspace": [<vector>, ...], "lambda": <matrix>}
      ],
      "m": [<number>, ...]          # optional multiplier symbol
    }

Real numbers are written plain; complex entries are two-element arrays
``[re, im]``.  Emission uses the shortest decimal that round-trips the
double, so ``parse(emit(family))`` reproduces every stored value bit for
bit.  Unknown keys are rejected everywhere.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import DimensionError, FamilyDocumentError
from .family import ControlledFamily, MeasureAtom, MultiplierSymbol
from .linalg import Subspace, operator_norm, orthonormal_columns
from .tolerances import TOL_ORTH

__all__ = [
    "canonical_json",
    "document_to_family",
    "family_to_document",
    "load_family",
    "save_family",
]


def _parse_scalar(value, where: str) -> complex:
    if isinstance(value, bool):
        raise FamilyDocumentError(f"{where}: expected a number, got a boolean")
    if isinstance(value, (int, float)):
        return complex(float(value), 0.0)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(p, (int, float)) and not isinstance(p, bool) for p in value
    ):
        return complex(float(value[0]), float(value[1]))
    raise FamilyDocumentError(f"{where}: expected a number or [re, im] pair, got {value!r}")


def _parse_vector(value, where: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise FamilyDocumentError(f"{where}: expected a nonempty array")
    return np.array([_parse_scalar(x, f"{where}[{i}]") for i, x in enumerate(value)])


def _parse_matrix(value, where: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise FamilyDocumentError(f"{where}: expected a nonempty array of rows")
    rows = [_parse_vector(row, f"{where}[{i}]") for i, row in enumerate(value)]
    width = rows[0].size
    if any(r.size != width for r in rows):
        raise FamilyDocumentError(f"{where}: rows have inconsistent lengths")
    return np.vstack(rows)


def _emit_scalar(z: complex):
    z = complex(z)
    if z.imag == 0.0:
        return float(z.real)
    return [float(z.real), float(z.imag)]


def _emit_matrix(m: np.ndarray):
    return [[_emit_scalar(z) for z in row] for row in np.asarray(m)]


def _reject_unknown(mapping: dict, allowed: set[str], where: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise FamilyDocumentError(f"{where}: unknown keys {sorted(unknown)}")


def _parse_subspace(value, dim: int, where: str) -> Subspace:
    if not isinstance(value, list) or not value:
        raise FamilyDocumentError(f"{where}: expected a nonempty array of basis vectors")
    vectors = [_parse_vector(v, f"{where}[{i}]") for i, v in enumerate(value)]
    if any(v.size != dim for v in vectors):
        raise FamilyDocumentError(f"{where}: basis vectors must have length {dim}")
    cols = np.column_stack(vectors)
    gram = np.conj(cols).T @ cols
    if operator_norm(gram - np.eye(cols.shape[1])) <= TOL_ORTH:
        return Subspace(cols)  # already orthonormal: keep the stored values
    return Subspace(orthonormal_columns(cols))


def document_to_family(doc: dict) -> tuple[ControlledFamily, MultiplierSymbol | None]:
    """Build a family (and optional symbol) from a parsed JSON tree.

    Structural checks only; run :func:`gfusion.family.validate` afterwards
    for the semantic invariants.
    """
    if not isinstance(doc, dict):
        raise FamilyDocumentError("document root must be an object")
    _reject_unknown(doc, {"dim", "controls", "atoms", "m"}, "document")
    try:
        dim = doc["dim"]
        controls = doc["controls"]
        atoms_doc = doc["atoms"]
    except KeyError as exc:
        raise FamilyDocumentError(f"document: missing key {exc.args[0]!r}") from None
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise FamilyDocumentError(f"dim must be a positive integer, got {dim!r}")
    if not isinstance(controls, dict):
        raise FamilyDocumentError("controls must be an object")
    _reject_unknown(controls, {"T", "U"}, "controls")
    if "T" not in controls or "U" not in controls:
        raise FamilyDocumentError("controls must provide both 'T' and 'U'")
    control_left = _parse_matrix(controls["T"], "controls.T")
    control_right = _parse_matrix(controls["U"], "controls.U")
    if not isinstance(atoms_doc, list) or not atoms_doc:
        raise FamilyDocumentError("atoms must be a nonempty array")
    atoms = []
    for i, atom_doc in enumerate(atoms_doc):
        where = f"atoms[{i}]"
        if not isinstance(atom_doc, dict):
            raise FamilyDocumentError(f"{where}: expected an object")
        _reject_unknown(atom_doc, {"id", "weight", "v", "subspace", "lambda"}, where)
        for key in ("id", "weight", "v", "subspace", "lambda"):
            if key not in atom_doc:
                raise FamilyDocumentError(f"{where}: missing key {key!r}")
        if not isinstance(atom_doc["id"], str):
            raise FamilyDocumentError(f"{where}: id must be a string")
        weight = _parse_scalar(atom_doc["weight"], f"{where}.weight")
        v = _parse_scalar(atom_doc["v"], f"{where}.v")
        if weight.imag != 0.0 or v.imag != 0.0:
            raise FamilyDocumentError(f"{where}: weights must be real")
        try:
            atoms.append(
                MeasureAtom(
                    id=atom_doc["id"],
                    weight=weight.real,
                    frame_weight=v.real,
                    subspace=_parse_subspace(atom_doc["subspace"], dim, f"{where}.subspace"),
                    local_op=_parse_matrix(atom_doc["lambda"], f"{where}.lambda"),
                )
            )
        except (ValueError, DimensionError) as exc:
            raise FamilyDocumentError(f"{where}: {exc}") from exc
    try:
        family = ControlledFamily(dim, tuple(atoms), control_left, control_right)
    except (ValueError, DimensionError) as exc:
        raise FamilyDocumentError(str(exc)) from exc
    symbol = None
    if "m" in doc:
        values = doc["m"]
        if not isinstance(values, list) or len(values) != len(atoms):
            raise FamilyDocumentError("m must be an array with one value per atom")
        symbol = MultiplierSymbol(
            tuple(_parse_scalar(x, f"m[{i}]") for i, x in enumerate(values))
        )
    return family, symbol


def family_to_document(family: ControlledFamily, m: MultiplierSymbol | None = None) -> dict:
    """Serialize a family (and optional symbol) to a JSON-compatible tree."""
    doc = {
        "dim": int(family.dim),
        "controls": {
            "T": _emit_matrix(family.control_left),
            "U": _emit_matrix(family.control_right),
        },
        "atoms": [
            {
                "id": atom.id,
                "weight": float(atom.weight),
                "v": float(atom.frame_weight),
                "subspace": [[_emit_scalar(z) for z in col] for col in atom.subspace.basis.T],
                "lambda": _emit_matrix(atom.local_op),
            }
            for atom in family.atoms
        ],
    }
    if m is not None:
        doc["m"] = [_emit_scalar(z) for z in m.values]
    return doc


def canonical_json(obj) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def load_family(path) -> tuple[ControlledFamily, MultiplierSymbol | None]:
    """Parse a family document from a file."""
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FamilyDocumentError(f"{path}: not valid JSON ({exc})") from exc
    return document_to_family(doc)


def save_family(path, family: ControlledFamily, m: MultiplierSymbol | None = None) -> None:
    """Write a family document to a file, in canonical form."""
    Path(path).write_text(canonical_json(family_to_document(family, m)))
