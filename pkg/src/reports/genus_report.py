"""
Genus, certificate and identity reports for one instance
"""
from __future__ import annotations

from typing import Any, Dict, List, Optional

from src.core.geometry import CompleteIntersection, CorollaryReport, GenusReport, StringCertificate
from src.reports.formatting import complex_payload, complex_str, emit, fraction_str, q_label, qseries_lines, qseries_payload
from src.reports.oracle_report import OracleComparison, comparison_line, comparison_payload
from src.reports.string_report import certificate_lines


def instance_header(ci: CompleteIntersection) -> List[str]:
    title = ci.label or str(ci)
    return [
        f"Instance: {title}",
        f"  n = {list(ci.n)}",
        f"  D = {[list(row) for row in ci.D]}",
        f"  complex dimension {ci.complex_dim}, real dimension {ci.real_dim}",
    ]


def _genus_lines(report: GenusReport) -> List[str]:
    if report.value.trunc_order == 0:
        return [f"  {report.genus_kind}: {report.value[0]}"]
    return [f"  {report.genus_kind}:"] + qseries_lines(report.value)


def identity_payload(identity: CorollaryReport) -> Dict[str, Any]:
    return {
        "real_dim": identity.real_dim,
        "identity": identity.identity,
        "lhs": fraction_str(identity.lhs),
        "rhs": fraction_str(identity.rhs),
        "difference": fraction_str(identity.difference),
        "holds": identity.holds,
        "terms": {k: fraction_str(v) for k, v in identity.terms.items()},
    }


def render_genus(ci: CompleteIntersection, reports: List[GenusReport], certificate: StringCertificate,
                 fmt: str = "human", identity: Optional[CorollaryReport] = None,
                 oracle: Optional[List[OracleComparison]] = None, oracle_q: complex = 0) -> str:
    payload: Dict[str, Any] = {
        "instance": ci.to_dict(),
        "complex_dim": ci.complex_dim,
        "real_dim": ci.real_dim,
        "string": certificate.to_dict(),
        "genera": {r.genus_kind: qseries_payload(r.value) for r in reports},
    }
    if identity is not None:
        payload["identity"] = identity_payload(identity)
    if oracle is not None:
        payload["oracle"] = {
            "q": complex_payload(complex(oracle_q)),
            "comparisons": [comparison_payload(c) for c in oracle],
        }

    rows = [
        {"instance": str(ci), "genus": r.genus_kind, "q_power": q_label(n), "coefficient": fraction_str(c)}
        for r in reports
        for n, c in enumerate(r.value.coeffs)
    ]

    lines = instance_header(ci)
    lines.append("Genera:")
    for report in reports:
        lines.extend(_genus_lines(report))
    lines.append("String certificate:")
    lines.extend(certificate_lines(certificate))
    if identity is not None:
        verdict = "holds" if identity.holds else "FAILS"
        lines.append(f"Identity in real dimension {identity.real_dim}: {identity.identity} {verdict}")
        lines.append(f"  lhs = {identity.lhs}, rhs = {identity.rhs}")
    if oracle is not None:
        lines.append(f"Oracle at q = {complex_str(complex(oracle_q))}:")
        lines.extend(comparison_line(c) for c in oracle)
    return emit(fmt, payload, rows, lines)
