# reference_runs.py
# Published MDS / AMDS pair tables and deep-hole examples, re-derived on demand
#
# Extension-field entries are written in g^i notation against the Conway
# modulus; their literal pair lists only raise warnings, the counts are enforced.

import logging
from dataclasses import dataclass

import numpy as np

from codes.covering import covering_radius, is_deep_hole
from codes.etgrs import build_params, build_template, deep_hole_check, generator_g, scan
from codes.linear_code import LinearCode
from gf.field import format_element, parse_element, parse_elements, parse_field_description
from reports import ReproduceReportModel, ReproduceRowModel

log = logging.getLogger(__name__)

TARGET_NAMES = ("table1", "table2", "sec5")


@dataclass(frozen=True)
class ReferenceScan:
    name: str
    field: str
    n: int
    k: int
    h: int
    alpha: str
    target: str
    pairs: tuple
    literal_enforced: bool = True


@dataclass(frozen=True)
class ReferenceHole:
    name: str
    field: str
    n: int
    k: int
    h: int
    alpha: str
    a: str
    b: str
    delta: str
    eta: str
    x: str
    radius: int


def _pairs(text):
    """'e1:d1 e2:d2 ...' -> ((e1, d1), ...)."""
    return tuple(tuple(item.split(":")) for item in text.split())


# ---------------- MDS pairs ----------------
TABLE1 = (
    ReferenceScan("q=11", "11", 6, 3, 1, "0,1,2,3,4,5", "mds", _pairs("4:7")),
    ReferenceScan("q=16", "2^4", 7, 4, 2, "0,g^1,g^2,g^4,g^6,g^7,g^13", "mds",
                  _pairs("g^1:g^7 g^2:g^5 g^12:g^1"), literal_enforced=False),
    ReferenceScan("q=19", "19", 8, 5, 0, "3,4,5,6,13,14,15,16", "mds", _pairs("15:6 15:18")),
)

# ---------------- AMDS pairs ----------------
TABLE2 = (
    ReferenceScan("q=7", "7", 5, 3, 0, "2,3,4,5,6", "amds", _pairs(
        "2:1 2:2 2:3 2:4 2:6 3:1 3:2 3:3 3:4 3:5 4:1 4:2 4:4 4:5 4:6 "
        "5:1 5:2 5:4 5:5 5:6 6:1 6:2 6:3 6:4 6:6")),
    ReferenceScan("q=5", "5", 5, 3, 1, "0,1,2,3,4", "amds", _pairs(
        "1:1 1:2 1:4 2:2 2:3 2:4 3:1 3:2 3:3 4:1 4:3 4:4")),
    ReferenceScan("q=8", "2^3", 6, 4, 2, "0,g^0,g^1,g^2,g^3,g^5", "amds", _pairs(
        "g^0:g^1 g^0:g^2 g^0:g^3 g^0:g^4 g^0:g^5 g^0:g^6 "
        "g^2:g^0 g^2:g^1 g^2:g^2 g^2:g^3 g^2:g^5 g^2:g^6 "
        "g^3:g^0 g^3:g^1 g^3:g^3 g^3:g^5 "
        "g^4:g^0 g^4:g^2 g^4:g^3 g^4:g^5 g^4:g^6 "
        "g^5:g^0 g^5:g^1 g^5:g^2 g^5:g^4 g^5:g^5 g^5:g^6 "
        "g^6:g^0 g^6:g^1 g^6:g^2 g^6:g^3 g^6:g^4 g^6:g^6"), literal_enforced=False),
)

# ---------------- Deep holes ----------------
SEC5 = (
    ReferenceHole("GF(13) h=1", "13", 6, 3, 1, "1,2,3,7,8,9", "2", "7", "2", "9", "1,8,1,5,5,1,2,7", 5),
    ReferenceHole("GF(13) h=0", "13", 6, 3, 0, "2,3,6,8,9,10", "0", "1", "2", "8", "8,1,8,5,1,12,0,1", 5),
    ReferenceHole("GF(7) AMDS", "7", 5, 3, 1, "1,2,4,5,6", "6", "1", "3", "2", "1,1,1,6,6,6,1", 4),
    ReferenceHole("GF(8) AMDS", "2^3", 7, 5, 0, "g^0,g^1,g^3,g^4,g^5,g^6,0", "g^3", "g^2", "g^0", "g^5",
                  "g^0,g^5,g^1,g^6,g^4,g^2,0,g^3,g^2", 4),
)


# ---------------- Runners ----------------
def run_scan_row(table, ref, workers=1):
    F = parse_field_description(ref.field)
    template = build_template(F, ref.n, ref.k, ref.h, parse_elements(F, ref.alpha))
    result = scan(template, ref.target, cross_validate=True, workers=workers)

    found = [(format_element(F, hit.eta), format_element(F, hit.delta)) for hit in result.hits]
    expected = list(ref.pairs)
    same_count = len(found) == len(expected)
    same_pairs = sorted(found) == sorted(expected)

    warnings = []
    if not same_pairs and not ref.literal_enforced:
        warnings.append(f"pair list differs from the published one under {F.description}")
        log.warning("⚠️  %s %s: literal pairs differ (count %d)", table, ref.name, len(found))
    passed = same_count and (same_pairs or not ref.literal_enforced)
    log.info("%s %s %s: %d pairs", "✓" if passed else "❌", table, ref.name, len(found))
    return ReproduceRowModel(
        target=table, name=ref.name,
        expected=f"{len(expected)} pairs",
        found=f"{len(found)} pairs: " + " ".join(f"({e},{d})" for e, d in found),
        passed=passed, warnings=warnings)


def run_hole_row(ref):
    F = parse_field_description(ref.field)
    P = build_params(F, ref.n, ref.k, ref.h, parse_elements(F, ref.alpha), None,
                     parse_element(F, ref.eta), parse_element(F, ref.delta))
    a, b = parse_element(F, ref.a), parse_element(F, ref.b)
    given = parse_elements(F, ref.x)

    report = deep_hole_check(P, a, b)
    code = LinearCode(generator_g(P))
    radius = covering_radius(code)
    verdict = is_deep_hole(code, given)
    predicted_matches = report.hole is not None and bool(np.all(report.hole == given))

    passed = report.verdict and predicted_matches and radius == ref.radius and verdict.holds
    log.info("%s sec5 %s: rho=%d", "✓" if passed else "❌", ref.name, radius)
    return ReproduceRowModel(
        target="sec5", name=ref.name,
        expected=f"rho={ref.radius}, deep hole",
        found=f"rho={radius}, criteria={report.verdict}, deep hole={verdict.holds} via {verdict.method}",
        passed=passed)


def reproduce(target, workers=1):
    if target == "all":
        rows = []
        for name in TARGET_NAMES:
            rows.extend(reproduce(name, workers).rows)
        return ReproduceReportModel(target="all", passed=all(r.passed for r in rows), rows=rows)
    if target == "table1":
        rows = [run_scan_row("table1", ref, workers) for ref in TABLE1]
    elif target == "table2":
        rows = [run_scan_row("table2", ref, workers) for ref in TABLE2]
    elif target == "sec5":
        rows = [run_hole_row(ref) for ref in SEC5]
    else:
        raise ValueError(f"unknown reproduction target {target!r}")
    return ReproduceReportModel(target=target, passed=all(r.passed for r in rows), rows=rows)
