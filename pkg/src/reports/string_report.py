"""
String certificate report
"""
from __future__ import annotations

from typing import List

from src.core.geometry import CompleteIntersection, StringCertificate
from src.reports.formatting import emit

FLAG_ORDER = ("is_string", "lefschetz_ok", "matrix_criterion_ok", "pushforward_p1_zero", "w2_zero_mod2")


def certificate_lines(certificate: StringCertificate) -> List[str]:
    flags = certificate.to_dict()
    lines = [f"  {name:<20} {str(flags[name]).lower()}" for name in FLAG_ORDER]
    if certificate.caveat:
        lines.append(f"  note: {certificate.caveat}")
    return lines


def render_string(ci: CompleteIntersection, certificate: StringCertificate, fmt: str = "human") -> str:
    payload = {"instance": ci.to_dict(), "certificate": certificate.to_dict()}
    rows = [dict({"instance": str(ci)}, **certificate.to_dict())]
    lines = [f"Instance: {ci.label or ci}", "String certificate:"] + certificate_lines(certificate)
    return emit(fmt, payload, rows, lines)
