"""
Output formats shared by every report: human text, JSON and CSV.

JSON keeps insertion order and writes rationals as "numerator/denominator"
strings, so loading a report and dumping it again reproduces it byte for byte.
"""
from __future__ import annotations

import io
import json
from fractions import Fraction
from typing import Any, Dict, List, Sequence

import pandas as pd

from src.core.series import QSeries


def fraction_str(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def q_label(n: int) -> str:
    return f"q^{{{2 * n}}}"


def qseries_payload(value: QSeries) -> Dict[str, Any]:
    return {
        "trunc_order": value.trunc_order,
        "coefficients": [fraction_str(c) for c in value.coeffs],
    }


def qseries_lines(value: QSeries, indent: str = "    ") -> List[str]:
    """One line per q^2 power, exact rationals"""
    width = len(q_label(value.trunc_order))
    return [f"{indent}{q_label(n):<{width}}  {c}" for n, c in enumerate(value.coeffs)]


def complex_payload(value: complex) -> Dict[str, float]:
    return {"re": float(value.real), "im": float(value.imag)}


def complex_str(value: complex) -> str:
    if abs(value.imag) < 1e-300:
        return f"{value.real:.12g}"
    return f"{value.real:.12g}{value.imag:+.12g}i"


def to_json(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def to_csv(rows: Sequence[Dict[str, Any]]) -> str:
    buffer = io.StringIO()
    pd.DataFrame(list(rows)).to_csv(buffer, index=False)
    return buffer.getvalue()


def table(rows: Sequence[Dict[str, Any]]) -> str:
    """Fixed-width table for human output"""
    if not rows:
        return "    (none)"
    return pd.DataFrame(list(rows)).to_string(index=False)


def emit(fmt: str, payload: Dict[str, Any], rows: Sequence[Dict[str, Any]], lines: Sequence[str]) -> str:
    if fmt == "json":
        return to_json(payload)
    if fmt == "csv":
        return to_csv(rows)
    return "\n".join(lines) + "\n"
