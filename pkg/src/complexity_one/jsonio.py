"""Schema-checked JSON parsing and deterministic serialization.

Input rules: matrices carry exact integers only (floats rejected),
rationals travel as strings like "3/4" or "2", unknown object fields are
rejected.  Output rules: keys sorted, rationals as strings, integers as
JSON numbers only within 53-bit safety (strings beyond), floats rounded
to 12 significant digits; identical data serializes to identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import InputError
from .lattice import IntMatrix, RationalVector, ratvec
from .local_model import LocalModel
from .rep import SubtorusRep

_SAFE_INT = 2**53


def exact_int(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{what} must be an exact integer, got {value!r}")
    return value


def parse_rational(value: Any, what: str) -> Fraction:
    if isinstance(value, bool):
        raise InputError(f"{what} must be a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"{what}: bad rational literal {value!r}") from exc
    raise InputError(f"{what} must be an integer or 'p/q' string, got {value!r}")


def check_keys(obj: Any, required: Sequence[str], what: str) -> Mapping[str, Any]:
    if not isinstance(obj, dict):
        raise InputError(f"{what} must be a JSON object")
    missing = [k for k in required if k not in obj]
    unknown = [k for k in obj if k not in required]
    if missing:
        raise InputError(f"{what}: missing fields {missing}")
    if unknown:
        raise InputError(f"{what}: unknown fields {unknown}")
    return obj


def int_matrix_from_json(rows: Any, what: str, cols: int | None = None) -> IntMatrix:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise InputError(f"{what} must be a list of rows")
    parsed = [[exact_int(x, f"{what} entry") for x in r] for r in rows]
    if not parsed and cols is None:
        raise InputError(f"{what}: empty matrix needs an implied column count")
    try:
        return IntMatrix.from_rows(parsed, cols)
    except ValueError as exc:
        raise InputError(f"{what}: {exc}") from exc


def rep_from_json(obj: Any) -> SubtorusRep:
    obj = check_keys(obj, ("n", "presentation", "matrix"), "representation")
    n = exact_int(obj["n"], "n")
    presentation = obj["presentation"]
    if presentation not in ("image", "kernel"):
        raise InputError("presentation must be 'image' or 'kernel'")
    matrix = int_matrix_from_json(obj["matrix"], "matrix", cols=n)
    try:
        return SubtorusRep(n=n, presentation=presentation, matrix=matrix)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def rep_to_json(rep: SubtorusRep) -> dict:
    return {
        "n": rep.n,
        "presentation": rep.presentation,
        "matrix": [list(r) for r in rep.matrix.entries],
    }


def model_from_json(obj: Any) -> LocalModel:
    obj = check_keys(obj, ("d", "rep", "alpha", "h0_basis"), "model")
    d = exact_int(obj["d"], "d")
    rep = rep_from_json(obj["rep"])
    if not isinstance(obj["alpha"], list):
        raise InputError("alpha must be a list of rationals")
    alpha = tuple(parse_rational(x, "alpha entry") for x in obj["alpha"])
    basis = int_matrix_from_json(obj["h0_basis"], "h0_basis", cols=d)
    try:
        return LocalModel(
            torus_dim=d, rep=rep, base_point=alpha, annihilator_basis=basis
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def model_or_rep_from_json(obj: Any) -> LocalModel:
    """Accept either a full model or a bare representation (which gets the
    trivial affine block and base point 0)."""
    if isinstance(obj, dict) and "rep" not in obj and "d" not in obj:
        return LocalModel.linear(rep_from_json(obj))
    return model_from_json(obj)


def orbit_input_from_json(obj: Any) -> tuple[str, int, RationalVector]:
    obj = check_keys(obj, ("family", "rank", "base_point"), "orbit input")
    family = obj["family"]
    if not isinstance(family, str):
        raise InputError("family must be a string")
    rank = exact_int(obj["rank"], "rank")
    if not isinstance(obj["base_point"], list):
        raise InputError("base_point must be a list of rationals")
    base = ratvec(parse_rational(x, "base_point entry") for x in obj["base_point"])
    return family, rank, base


def to_jsonable(value: Any) -> Any:
    """Recursively convert report values to JSON-safe data under the
    serialization rules above."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (int, np.integer)):
        value = int(value)
        return value if abs(value) <= _SAFE_INT else str(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (float, np.floating)):
        return float(format(float(value), ".12g"))
    if isinstance(value, (complex, np.complexfloating)):
        value = complex(value)
        return [to_jsonable(value.real), to_jsonable(value.imag)]
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [to_jsonable(v) for v in items]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(payload: Any) -> str:
    return json.dumps(to_jsonable(payload), sort_keys=True, separators=(",", ":")) + "\n"
