# tgrs_lab.py
# Command-line front end: checks, scans, covering radii, certificates and
# reproduction of the published tables
#
# Exit codes: 0 ran (verdict in the report), 2 usage / bad parameters,
# 3 budget exceeded, 4 cross-check disagreement or failed reproduction.

import argparse
import logging
import os
import sys
from dataclasses import dataclass

import numpy as np

from codes.covering import covering_radius, dump_leader_weights, leader_table
from codes.etgrs import (brute_force_verdict, build_params, build_template, check, dual_schur_certificate,
                         generator_g, scan, schur_square_certificate)
from codes.linear_code import LinearCode
from datalogging import ScanArchive
from gf.field import format_elements, parse_element, parse_elements, parse_field_description
from lab_errors import BudgetExceeded, CrossCheckError, LabError, PreconditionError
from reference_runs import reproduce
from reports import (CertificateReportModel, CodeReportModel, certificate_model, check_report, emit_report,
                     params_model, scan_report)

log = logging.getLogger("tgrs_lab")

# ---------------- Configuration ----------------
WORKERS_ENV = "TGRS_LAB_WORKERS"
DEFAULT_WORKERS = 1

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_CROSS_CHECK = 4

CHECK_VERBS = {"check-mds": "mds", "check-amds": "amds"}
SCAN_VERBS = {"scan-mds": "mds", "scan-amds": "amds"}


def default_workers():
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, DEFAULT_WORKERS)))
    except ValueError:
        return DEFAULT_WORKERS


# ---------------- Run configuration ----------------
@dataclass
class RunConfig:
    command: str
    field: object = None
    n: int = None
    k: int = None
    h: int = None
    alpha: object = None
    v: object = None
    eta: object = None
    delta: object = None
    a: object = None
    b: object = None
    fmt: str = "json"
    cross_validate: bool = False
    workers: int = DEFAULT_WORKERS
    archive: str = None
    dump_table: str = None
    target: str = None

    @classmethod
    def from_args(cls, args):
        config = cls(command=args.command, fmt=args.format, cross_validate=args.cross_validate,
                     workers=args.workers, archive=getattr(args, "archive", None),
                     dump_table=getattr(args, "dump_table", None), target=getattr(args, "target", None))
        if args.command == "reproduce":
            return config
        F = parse_field_description(args.field)
        config.field = F
        config.n, config.k, config.h = args.n, args.k, args.h
        config.alpha = parse_elements(F, args.alpha)
        config.v = None if args.v is None else parse_elements(F, args.v)
        for name in ("eta", "delta", "a", "b"):
            token = getattr(args, name, None)
            if token is not None:
                setattr(config, name, parse_element(F, token))
        return config

    def template(self):
        return build_template(self.field, self.n, self.k, self.h, self.alpha, self.v)

    def params(self):
        missing = [name for name in ("eta", "delta") if getattr(self, name) is None]
        if missing:
            raise UsageError(f"{self.command} needs --{' and --'.join(missing)}")
        return build_params(self.field, self.n, self.k, self.h, self.alpha, self.v, self.eta, self.delta)


class UsageError(LabError):
    """Flags are syntactically fine but do not fit the verb."""


# ---------------- Argument parsing ----------------
def build_parser():
    parser = argparse.ArgumentParser(prog="tgrs_lab", description="Extended TGRS code laboratory")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json", help="report format (default: json)")
    common.add_argument("--cross-validate", action="store_true",
                        help="compare every criterion verdict with the column-rank oracle")
    common.add_argument("--workers", type=int, default=default_workers(),
                        help=f"scan threads (default: ${WORKERS_ENV} or {DEFAULT_WORKERS})")
    common.add_argument("--verbose", action="store_true", help="debug logging on stderr")

    code = argparse.ArgumentParser(add_help=False)
    code.add_argument("--field", required=True, help="'p', 'q', 'p^m' or 'p^m/c0,...,cm'")
    code.add_argument("--n", type=int, required=True)
    code.add_argument("--k", type=int, required=True)
    code.add_argument("--h", type=int, required=True)
    code.add_argument("--alpha", required=True, help="comma-separated evaluation points")
    code.add_argument("--v", help="comma-separated column multipliers (default: all ones)")

    pair = argparse.ArgumentParser(add_help=False)
    pair.add_argument("--eta")
    pair.add_argument("--delta")

    hole = argparse.ArgumentParser(add_help=False)
    hole.add_argument("--a", help="deep-hole coordinate n+1 (default: 0)")
    hole.add_argument("--b", help="deep-hole coordinate n+2 (default: 0)")

    sub = parser.add_subparsers(dest="command", required=True)
    for verb in CHECK_VERBS:
        sub.add_parser(verb, parents=[common, code, pair])
    for verb in SCAN_VERBS:
        p = sub.add_parser(verb, parents=[common, code])
        p.add_argument("--archive", help="SQLite file that stores the run")
    sub.add_parser("deep-hole", parents=[common, code, pair, hole])
    p = sub.add_parser("covering-radius", parents=[common, code, pair, hole])
    p.add_argument("--dump-table", help="write the coset-leader weights to this file")
    sub.add_parser("min-distance", parents=[common, code, pair])
    sub.add_parser("non-grs", parents=[common, code, pair])
    p = sub.add_parser("reproduce", parents=[common])
    p.add_argument("target", choices=("table1", "table2", "sec5", "all"))
    return parser


# ---------------- Verbs ----------------
def run_check(config, target):
    P = config.params()
    report = check(P, target, config.a, config.b)
    brute = None
    if config.cross_validate:
        holds, brute = brute_force_verdict(P, target, config.a, config.b)
        if holds != report.verdict:
            raise CrossCheckError(f"{target} criterion says {report.verdict} but columns say {brute}")
    return check_report(P, report, config.a, config.b, brute_force=brute)


def run_scan(config, target):
    result = scan(config.template(), target, cross_validate=config.cross_validate, workers=config.workers)
    report = scan_report(result)
    if config.archive:
        ScanArchive(config.archive).record(report)
    return report


def run_covering_radius(config):
    P = config.params()
    code = LinearCode(generator_g(P))
    table = leader_table(code)
    radius = covering_radius(code)
    predicted = None
    if config.a is not None or config.b is not None:
        try:
            predicted = check(P, "deep-hole", config.a, config.b).radius
        except PreconditionError as e:
            log.warning("⚠️  no radius prediction: %s", e)
    if config.dump_table:
        dump_leader_weights(table, config.dump_table)
    histogram = np.bincount(table.leader_weight, minlength=radius + 1).tolist()
    return CodeReportModel(field_description=P.field.description, n=code.n, k=code.k, radius=radius,
                           coset_histogram=histogram, predicted_radius=predicted)


def run_min_distance(config):
    P = config.params()
    code = LinearCode(generator_g(P))
    distance = code.distance()
    return CodeReportModel(field_description=P.field.description, n=code.n, k=code.k, d=distance.d,
                           code_class=distance.code_class.value,
                           witness=format_elements(P.field, distance.witness))


def run_non_grs(config):
    P = config.params()
    certificates = [certificate_model(P.field, c) for c in (schur_square_certificate(P), dual_schur_certificate(P))]
    return CertificateReportModel(field_description=P.field.description,
                                  params=params_model(P, P.eta, P.delta), certificates=certificates)


def dispatch(config):
    """Returns (report, exit status)."""
    if config.command in CHECK_VERBS:
        return run_check(config, CHECK_VERBS[config.command]), EXIT_OK
    if config.command in SCAN_VERBS:
        return run_scan(config, SCAN_VERBS[config.command]), EXIT_OK
    if config.command == "deep-hole":
        return run_check(config, "deep-hole"), EXIT_OK
    if config.command == "covering-radius":
        return run_covering_radius(config), EXIT_OK
    if config.command == "min-distance":
        return run_min_distance(config), EXIT_OK
    if config.command == "non-grs":
        return run_non_grs(config), EXIT_OK
    report = reproduce(config.target, workers=config.workers)
    return report, EXIT_OK if report.passed else EXIT_CROSS_CHECK


# ---------------- Entry Point ----------------
def setup_logging(verbose):
    logging.basicConfig(stream=sys.stderr, format="%(message)s",
                        level=logging.DEBUG if verbose else logging.INFO, force=True)


def main(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    setup_logging(args.verbose)

    try:
        config = RunConfig.from_args(args)
        report, status = dispatch(config)
    except BudgetExceeded as e:
        log.error("❌ %s", e)
        return EXIT_BUDGET
    except CrossCheckError as e:
        log.error("❌ cross-check failed: %s", e)
        return EXIT_CROSS_CHECK
    except (LabError, ZeroDivisionError) as e:
        log.error("❌ %s", e)
        return EXIT_USAGE

    stdout.write(emit_report(report, config.fmt))
    if status == EXIT_CROSS_CHECK:
        log.error("❌ reproduction failed")
    return status


if __name__ == "__main__":
    raise SystemExit(main())
