"""
Search results and vanishing sweep reports
"""
from __future__ import annotations

from typing import Any, Dict, List, Sequence, Tuple

from src.core.string_search import CanonicalMatrix, SweepRecord, SweepReport
from src.reports.formatting import emit, qseries_payload, table


def _match_row(n: Sequence[int], matrix: CanonicalMatrix) -> Dict[str, Any]:
    return {
        "n": ",".join(str(v) for v in n),
        "t": matrix.t,
        "complex_dim": sum(n) - matrix.t,
        "D": "/".join(",".join(str(d) for d in row) for row in matrix.rows),
    }


def render_search(matches: List[Tuple[Tuple[int, ...], CanonicalMatrix]], fmt: str = "human") -> str:
    payload = {
        "count": len(matches),
        "matrices": [{"n": list(n), "D": m.to_list()} for n, m in matches],
    }
    rows = [_match_row(n, m) for n, m in matches]
    lines = [f"{len(matches)} string degree matrices", table(rows) if rows else ""]
    return emit(fmt, payload, rows, [line for line in lines if line])


def _record_row(record: SweepRecord) -> Dict[str, Any]:
    row = _match_row(record.n, record.matrix)
    row.update({
        "section": record.section,
        "landweber_stong": record.landweber_stong,
        "vanishes": record.vanishes,
        "seconds": round(record.elapsed, 4),
    })
    return row


def _section_lines(title: str, records: List[SweepRecord]) -> List[str]:
    failures = sum(1 for r in records if not r.vanishes)
    lines = [f"{title}: {len(records)} instances, {failures} failures"]
    if records:
        lines.append(table([_record_row(r) for r in records]))
    return lines


def render_sweep(report: SweepReport, fmt: str = "human") -> str:
    payload = {
        "trunc_order": report.trunc_order,
        "instances": report.instance_count,
        "failures": len(report.failures),
        "seconds": round(report.elapsed, 4),
        "records": [
            {
                "n": list(r.n),
                "D": r.matrix.to_list(),
                "section": r.section,
                "landweber_stong": r.landweber_stong,
                "vanishes": r.vanishes,
                "value": qseries_payload(r.value),
            }
            for r in report.records
        ],
    }
    rows = [_record_row(r) for r in report.records]
    lines = [f"Witten genus sweep through q^{{{2 * report.trunc_order}}}: "
             f"{report.instance_count} instances, {len(report.failures)} failures "
             f"({report.elapsed:.2f}s)"]
    lines += _section_lines("Even complex dimension", report.section("main"))
    if report.bounds.allow_odd_dim:
        lines += _section_lines("Odd complex dimension", report.section("odd_dimension"))
    lines += _section_lines("Single projective space (Landweber-Stong)", report.section("landweber_stong"))
    for record in report.failures:
        lines.append(f"COUNTEREXAMPLE n={list(record.n)} D={record.matrix.to_list()}: {record.value}")
    return emit(fmt, payload, rows, lines)
