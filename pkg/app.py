"""
Command-line front end for the complete-intersection genus toolkit.

Subcommands: genus, check-string, search, verify, oracle.

Exit codes:
    0  success, or a true outcome
    1  false outcome: not string, a nonzero Witten genus in a sweep, an oracle mismatch
    2  invalid input: instance data, inline syntax, search bounds, usage
    3  precondition violated (check-string: m_q + 2 <= n_q fails, so undecided)
    4  numeric oracle did not converge
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional

from src.core.data_loader import (
    OUTPUT_FORMATS,
    RunConfig,
    load_instance,
    load_run_config,
    parse_complex,
    parse_inline,
)
from src.core.errors import ConvergenceError, GenusToolkitError, InstanceError, PreconditionError
from src.core.geometry import (
    GENUS_KINDS,
    CompleteIntersection,
    GenusReport,
    corollary_identities,
    evaluate_genus,
    is_string,
)
from src.core.string_search import SearchBounds, enumerate_string_matrices, verify_theorem
from src.oracle.residues import (
    ContourSpec,
    check_integrand_periodicity,
    default_contour,
    evaluate_qseries,
    numeric_characteristic,
    residue_genus,
    residue_sum_check,
)
from src.oracle.theta import NumericThetaParams
from src.oracle.utils import relative_error
from src.reports.genus_report import render_genus
from src.reports.oracle_report import OracleComparison, render_oracle
from src.reports.search_report import render_search, render_sweep
from src.reports.string_report import render_string

LOGGER = logging.getLogger("cigenus")
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT = 2
EXIT_PRECONDITION = 3
EXIT_CONVERGENCE = 4


def _int_tuple(text: str):
    try:
        return tuple(int(v) for v in text.strip("[]").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="run configuration JSON (default data/run_config.json)")
    common.add_argument("--q-order", type=int, help="truncation K: keep q^0 .. q^{2K}")
    common.add_argument("--y-order", type=int, help="y-order of the characteristic series (default sum n_q)")
    common.add_argument("--genus", action="append", choices=GENUS_KINDS, help="genus kind (repeatable)")
    common.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS)
    common.add_argument("--oracle-q", help="q for the numeric oracle, e.g. 0.1 or 0.1+0.05i")
    common.add_argument("--oracle-samples", type=int, help="trapezoid samples per circle (power of two)")
    common.add_argument("--oracle-radius", type=float, help="contour radius in the v = y/(2 pi i) coordinate")
    common.add_argument("--tolerance", type=float, help="oracle tolerance (absolute when the exact value is 0)")
    common.add_argument("--threads", type=int, help="worker processes for sweeps (default $CIGENUS_THREADS)")
    common.add_argument("-v", "--verbose", action="store_true")

    instance = argparse.ArgumentParser(add_help=False)
    instance.add_argument("instance", nargs="?", help="instance JSON file with fields n and D")
    instance.add_argument("--inline", help="inline instance, e.g. 'n=7,4;D=2,1/1,-2/1,0/1,0/1,0'")

    bounds = argparse.ArgumentParser(add_help=False)
    bounds.add_argument("--s", type=int, default=1, help="number of projective factors")
    bounds.add_argument("--t-max", type=int, required=True, help="largest number of divisors")
    group = bounds.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=_int_tuple, help="ambient dimensions, comma separated")
    group.add_argument("--n-max", type=int, help="every n with 1 <= n_q <= n_max")
    bounds.add_argument("--allow-odd-dim", action="store_true", help="include odd complex dimensions")

    parser = argparse.ArgumentParser(
        prog="app.py",
        description="Witten, A-hat and L genera of complete intersections in products of projective spaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    genus = sub.add_parser("genus", parents=[common, instance], help="genera, Euler number and string certificate")
    genus.add_argument("--oracle", action="store_const", const=True,
                       help="also compare each genus with its numeric residue")
    sub.add_parser("check-string", parents=[common, instance], help="decide the string condition")
    sub.add_parser("search", parents=[common, bounds], help="enumerate string degree matrices")
    sub.add_parser("verify", parents=[common, bounds], help="check vanishing of the Witten genus")
    sub.add_parser("oracle", parents=[common, instance], help="compare exact genera with numeric residues")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    config = load_run_config(args.config)
    return config.override(
        q_order=args.q_order,
        y_order=args.y_order,
        genera=tuple(args.genus) if args.genus else None,
        output_format=args.output_format,
        oracle_q=parse_complex(args.oracle_q) if args.oracle_q is not None else None,
        samples=args.oracle_samples,
        radius=args.oracle_radius,
        tolerance=args.tolerance,
        threads=args.threads,
        oracle=getattr(args, "oracle", None),
    )


def _instance(args: argparse.Namespace) -> CompleteIntersection:
    if (args.instance is None) == (args.inline is None):
        raise InstanceError("give exactly one of an instance file or --inline")
    if args.inline is not None:
        return parse_inline(args.inline)
    return load_instance(args.instance)


def _bounds(args: argparse.Namespace) -> SearchBounds:
    return SearchBounds(s=args.s, t_max=args.t_max, n=args.n, n_max=args.n_max,
                        allow_odd_dim=args.allow_odd_dim)


def _oracle_comparisons(ci: CompleteIntersection, config: RunConfig, params: NumericThetaParams,
                        reports: List[GenusReport]) -> List[OracleComparison]:
    comparisons = []
    for report in reports:
        exact_at_q = evaluate_qseries(report.value, params.q)
        char = numeric_characteristic(report.genus_kind, params)
        if config.radius is None:
            contour = default_contour(ci, char, config.samples)
        else:
            contour = ContourSpec(radii=[config.radius] * ci.s, samples=config.samples)
        numeric = residue_genus(ci, contour, report.genus_kind, params)
        comparisons.append(OracleComparison(
            kind=report.genus_kind,
            exact=report.value,
            exact_at_q=exact_at_q,
            numeric=numeric.value,
            error=relative_error(exact_at_q, numeric.value),
            tolerance=config.tolerance,
            samples=numeric.samples,
        ))
    return comparisons


def cmd_genus(args: argparse.Namespace, config: RunConfig) -> int:
    ci = _instance(args)
    reports = [evaluate_genus(ci, kind, config.q_order, config.y_order) for kind in config.genera]
    identity = corollary_identities(ci) if ci.real_dim in (12, 16) else None
    oracle = None
    if config.oracle:
        params = NumericThetaParams.from_q(config.oracle_q)
        oracle = _oracle_comparisons(ci, config, params, reports)
    sys.stdout.write(render_genus(ci, reports, is_string(ci), config.output_format, identity,
                                  oracle, config.oracle_q))
    if oracle is not None and not all(c.ok for c in oracle):
        return EXIT_FALSE
    return EXIT_OK


def cmd_check_string(args: argparse.Namespace, config: RunConfig) -> int:
    ci = _instance(args)
    certificate = is_string(ci)
    sys.stdout.write(render_string(ci, certificate, config.output_format))
    if not certificate.lefschetz_ok:
        return EXIT_PRECONDITION
    return EXIT_OK if certificate.is_string else EXIT_FALSE


def cmd_search(args: argparse.Namespace, config: RunConfig) -> int:
    matches = list(enumerate_string_matrices(_bounds(args)))
    sys.stdout.write(render_search(matches, config.output_format))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: RunConfig) -> int:
    report = verify_theorem(_bounds(args), config.q_order, config.threads)
    sys.stdout.write(render_sweep(report, config.output_format))
    return EXIT_OK if report.ok else EXIT_FALSE


def cmd_oracle(args: argparse.Namespace, config: RunConfig) -> int:
    ci = _instance(args)
    params = NumericThetaParams.from_q(config.oracle_q)
    reports = [evaluate_genus(ci, kind, config.q_order, config.y_order) for kind in config.genera]
    comparisons = _oracle_comparisons(ci, config, params, reports)

    periodicity = residue_sum = None
    certificate = is_string(ci)
    if params.tau is not None and certificate.matrix_criterion_ok:
        periodicity = check_integrand_periodicity(ci, params, trials=20)
        if certificate.lefschetz_ok:
            residue_sum = residue_sum_check(ci, params)
    sys.stdout.write(render_oracle(ci, params.q, comparisons, config.output_format, periodicity, residue_sum))
    return EXIT_OK if all(c.ok for c in comparisons) else EXIT_FALSE


COMMANDS = {
    "genus": cmd_genus,
    "check-string": cmd_check_string,
    "search": cmd_search,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format=LOG_FORMAT)
    try:
        config = _config(args)
        return COMMANDS[args.command](args, config)
    except InstanceError as exc:
        LOGGER.error("invalid input: %s", exc)
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except PreconditionError as exc:
        sys.stderr.write(f"precondition violated: {exc}\n")
        return EXIT_PRECONDITION
    except ConvergenceError as exc:
        sys.stderr.write(f"numeric oracle failed: {exc}\n")
        return EXIT_CONVERGENCE
    except GenusToolkitError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
