"""JSON encoding of matrices, vectors, groups and results.

Complex numbers are ``[re, im]`` pairs and floats use Python's shortest
round-trip repr, so files are byte-stable.
"""

from __future__ import annotations

import json
import os
from typing import Any

import numpy as np

from ..certificate import EigenvectorCertificate
from ..decompose import BlockDecomposition
from ..fixedpoint import DefectReport
from ..group import FiniteUnitaryGroup
from ..numerics import DEFAULT_TOL, Tolerance, certify_unitary

TOL_ENV = "UNIREDUCE_TOL"


class InputError(ValueError):
    """Malformed or inconsistent input file."""


def tolerance_from_env(base: Tolerance = DEFAULT_TOL) -> Tolerance:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return base
    try:
        eq = float(raw)
    except ValueError:
        raise InputError(f"{TOL_ENV}={raw!r} is not a number") from None
    try:
        return Tolerance(eq, min(base.unitarity_tol, eq), base.residual_tol)
    except ValueError as e:
        raise InputError(f"{TOL_ENV}: {e}") from None


def encode_complex(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def encode_vector(v) -> dict:
    return {"entries": [encode_complex(z) for z in np.asarray(v).reshape(-1)]}


def encode_matrix(m) -> dict:
    return {"rows": [[encode_complex(z) for z in row] for row in np.asarray(m)]}


def _decode_complex(pair) -> complex:
    if isinstance(pair, (int, float)) and not isinstance(pair, bool):
        return complex(pair)
    if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, (int, float)) for x in pair)):
        raise InputError(f"expected [re, im], got {pair!r}")
    return complex(pair[0], pair[1])


def decode_vector(obj) -> np.ndarray:
    entries = obj.get("entries") if isinstance(obj, dict) else obj
    if not isinstance(entries, list) or not entries:
        raise InputError("vector needs a non-empty 'entries' list")
    v = np.array([_decode_complex(p) for p in entries], dtype=np.complex128)
    if not np.all(np.isfinite(v)):
        raise InputError("vector has non-finite entries")
    return v


def decode_matrix(obj) -> np.ndarray:
    rows = obj.get("rows") if isinstance(obj, dict) else None
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise InputError("matrix needs a non-empty 'rows' list of lists")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise InputError("matrix rows have different lengths")
    m = np.array([[_decode_complex(p) for p in r] for r in rows], dtype=np.complex128)
    if not np.all(np.isfinite(m)):
        raise InputError("matrix has non-finite entries")
    return m


def encode_group(g: FiniteUnitaryGroup) -> dict:
    return {
        "dim": g.dim,
        "elements": [encode_matrix(m) for m in g.elements],
        "generators": list(g.generator_indices),
        "tol": g.tol.as_dict(),
    }


def decode_group(obj) -> FiniteUnitaryGroup:
    if not isinstance(obj, dict) or "elements" not in obj:
        raise InputError("group file needs an 'elements' list")
    tol = DEFAULT_TOL
    if isinstance(obj.get("tol"), dict):
        try:
            tol = Tolerance(**{k: float(v) for k, v in obj["tol"].items()})
        except (TypeError, ValueError) as e:
            raise InputError(f"bad tolerance block: {e}") from None
    tol = tolerance_from_env(tol)
    mats = [certify_unitary(decode_matrix(m), tol) for m in obj["elements"]]
    if not mats:
        raise InputError("group has no elements")
    n = mats[0].shape[0]
    if any(m.shape != (n, n) for m in mats):
        raise InputError("elements have different dimensions")
    if "dim" in obj and obj["dim"] != n:
        raise InputError(f"'dim' is {obj['dim']} but elements are {n}x{n}")
    gens = obj.get("generators", [])
    if not isinstance(gens, list) or not all(isinstance(i, int) and 0 <= i < len(mats) for i in gens):
        raise InputError("'generators' must list element indices")
    g = FiniteUnitaryGroup(np.stack(mats), tuple(gens), tol)
    if len(g.index) != g.order:
        raise InputError("group file lists duplicate elements")
    if not g.is_closed():
        raise InputError("elements do not form a group (not closed under products and adjoints)")
    return g


def encode_defect(r: DefectReport) -> dict:
    return {
        "weak_defect": r.weak_defect,
        "strong_defect": r.strong_defect,
        "argmin_element": r.argmin_element,
        "moduli": [float(x) for x in r.moduli],
    }


def _plain(value: Any):
    """Best-effort conversion of certificate details to JSON values; unknown objects are dropped."""
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return encode_complex(value)
    if isinstance(value, np.ndarray):
        return [_plain(x) for x in value.tolist()]
    if isinstance(value, (list, tuple)):
        items = [_plain(x) for x in value]
        return None if any(x is _DROP for x in items) else items
    return _DROP


_DROP = object()


def encode_certificate(c: EigenvectorCertificate) -> dict:
    details = {}
    for k, v in c.details.items():
        p = _plain(v)
        if p is not _DROP and p is not None:
            details[k] = p
    return {
        "method": c.method,
        "eta": encode_vector(c.eta),
        "eta_unit": encode_vector(c.eta_unit),
        "characters": [encode_complex(z) for z in c.characters],
        "max_residual": c.max_residual,
        "distance_sq": c.distance_sq,
        "bound_value": c.bound_value,
        "bound_holds": c.bound_holds,
        "eps": c.eps,
        "hypothesis_met": c.hypothesis_met,
        "details": details,
    }


def encode_blocks(bd: BlockDecomposition) -> dict:
    return {"seed": bd.seed, "block_sizes": list(bd.block_sizes), "basis_change": encode_matrix(bd.basis_change)}


def dumps(obj) -> str:
    return json.dumps(obj, allow_nan=False)


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None
