"""Utility helpers for report ids and JSON-safe big numbers."""
from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Mapping, Union

import mpmath

BigNumber = Union[int, float, mpmath.mpf]


def report_id_from_params(params: Mapping[str, Any]) -> str:
    """Deterministic, filesystem-safe report id derived from command parameters."""
    canonical = json.dumps(dict(params), sort_keys=True, default=str)
    digest = hashlib.sha256(canonical.encode("utf-8")).hexdigest()
    return digest[:10].upper()


def big_number(value: BigNumber, digits: int = 17) -> Dict[str, Any]:
    """Decimal string plus a float mantissa in [1, 10) and a base-10 exponent.

    Infinite values keep ``"inf"`` as their decimal string and a null mantissa.
    """
    if isinstance(value, int):
        decimal = str(value)
        if value == 0:
            return {"decimal": decimal, "mantissa": 0.0, "exponent": 0}
        exponent = len(str(abs(value))) - 1
        mantissa = float(mpmath.mpf(value) / mpmath.mpf(10) ** exponent)
        return {"decimal": decimal, "mantissa": mantissa, "exponent": exponent}
    x = mpmath.mpf(value)
    if mpmath.isinf(x) or mpmath.isnan(x):
        return {"decimal": str(x), "mantissa": None, "exponent": None}
    if x == 0:
        return {"decimal": "0", "mantissa": 0.0, "exponent": 0}
    decimal = mpmath.nstr(x, digits)
    exponent = int(mpmath.floor(mpmath.log10(abs(x))))
    mantissa = float(x / mpmath.mpf(10) ** exponent)
    if abs(mantissa) >= 10:
        mantissa /= 10
        exponent += 1
    return {"decimal": decimal, "mantissa": mantissa, "exponent": exponent}


def big_number_value(payload: Mapping[str, Any]) -> mpmath.mpf:
    return mpmath.mpf(payload["decimal"])


def write_json(path: Path, data: Any) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")
    return path
