"""
Exact vs numeric comparison report
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from src.core.geometry import CompleteIntersection
from src.core.series import QSeries
from src.oracle.residues import PeriodicityReport, ResidueSumReport
from src.reports.formatting import complex_payload, complex_str, emit, qseries_payload


@dataclass(frozen=True)
class OracleComparison:
    kind: str
    exact: QSeries
    exact_at_q: complex
    numeric: complex
    error: float
    tolerance: float
    samples: int

    @property
    def ok(self) -> bool:
        return self.error <= self.tolerance


def comparison_payload(c: OracleComparison) -> Dict[str, Any]:
    return {
        "genus": c.kind,
        "exact": qseries_payload(c.exact),
        "exact_at_q": complex_payload(c.exact_at_q),
        "numeric": complex_payload(c.numeric),
        "error": c.error,
        "tolerance": c.tolerance,
        "samples": c.samples,
        "ok": c.ok,
    }


def comparison_line(c: OracleComparison) -> str:
    branch = "absolute" if c.exact_at_q == 0 else "relative"
    verdict = "ok" if c.ok else "MISMATCH"
    return (f"  {c.kind}: exact {complex_str(c.exact_at_q)}  numeric {complex_str(c.numeric)}  "
            f"{branch} error {c.error:.3e} ({verdict}, {c.samples} samples)")


def render_oracle(ci: CompleteIntersection, q: complex, comparisons: List[OracleComparison],
                  fmt: str = "human", periodicity: Optional[PeriodicityReport] = None,
                  residue_sum: Optional[ResidueSumReport] = None) -> str:
    payload: Dict[str, Any] = {
        "instance": ci.to_dict(),
        "q": complex_payload(complex(q)),
        "comparisons": [comparison_payload(c) for c in comparisons],
    }
    rows = [
        {
            "instance": str(ci),
            "genus": c.kind,
            "exact_at_q": complex_str(c.exact_at_q),
            "numeric": complex_str(c.numeric),
            "error": c.error,
            "ok": c.ok,
        }
        for c in comparisons
    ]
    lines = [f"Instance: {ci.label or ci}", f"Oracle at q = {complex_str(complex(q))}"]
    lines.extend(comparison_line(c) for c in comparisons)
    if periodicity is not None:
        payload["periodicity"] = {"trials": periodicity.trials, "max_residual": periodicity.max_residual}
        lines.append(f"  integrand periodicity: max residual {periodicity.max_residual:.3e}")
    if residue_sum is not None:
        payload["residue_sum"] = {
            "boundary_integral": complex_payload(residue_sum.boundary_integral),
            "origin_residue": complex_payload(residue_sum.origin_residue),
            "edge_cancellation": residue_sum.edge_cancellation,
        }
        lines.append(f"  residue at the origin {abs(residue_sum.origin_residue):.3e}, "
                     f"boundary integral {abs(residue_sum.boundary_integral):.3e}, "
                     f"edge cancellation {residue_sum.edge_cancellation:.3e}")
    return emit(fmt, payload, rows, lines)
