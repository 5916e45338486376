# reports.py
# Report schema for every tgrs-lab verb plus deterministic JSON / CSV emission

import csv
import io
import json
from typing import Literal, Optional, Union

from pydantic import BaseModel, Field

from gf.field import format_element, format_elements

# ---------------- Configuration ----------------
SCHEMA_VERSION = "tgrs-lab/1"
SCAN_CSV_HEADER = ["eta", "delta", "verdict", "first_failing_condition"]
REPRODUCE_CSV_HEADER = ["target", "name", "expected", "found", "passed"]


# ---------------- Models ----------------
class ConditionModel(BaseModel):
    id: str
    holds: bool
    witness: Optional[list[int]] = None


class ParamsModel(BaseModel):
    n: int
    k: int
    h: int
    alpha: list[str]
    v: list[str]
    eta: Optional[str] = None
    delta: Optional[str] = None
    a: Optional[str] = None
    b: Optional[str] = None


class PairModel(BaseModel):
    eta: str
    delta: str
    verdict: bool
    path: str = "general"
    conditions: list[ConditionModel] = Field(default_factory=list)
    brute_force: Optional[str] = None

    def first_failing_condition(self):
        for c in self.conditions:
            if not c.holds:
                return c.id
        return ""


class ScanReportModel(BaseModel):
    kind: Literal["scan"] = "scan"
    schema_version: str = SCHEMA_VERSION
    field_description: str
    target: str
    params: ParamsModel
    scanned: int
    cross_checked: int = 0
    pairs: list[PairModel] = Field(default_factory=list)


class CheckReportModel(BaseModel):
    kind: Literal["check"] = "check"
    schema_version: str = SCHEMA_VERSION
    field_description: str
    target: str
    params: ParamsModel
    result: PairModel
    hole: Optional[list[str]] = None
    radius: Optional[int] = None
    brute_force: Optional[str] = None


class CodeReportModel(BaseModel):
    """covering-radius and min-distance results for a single code."""

    kind: Literal["code"] = "code"
    schema_version: str = SCHEMA_VERSION
    field_description: str
    n: int
    k: int
    d: Optional[int] = None
    code_class: Optional[str] = None
    witness: Optional[list[str]] = None
    radius: Optional[int] = None
    coset_histogram: Optional[list[int]] = None
    predicted_radius: Optional[int] = None


class CertificateModel(BaseModel):
    kind: str
    applicable: bool
    valid: bool
    dimension: Optional[int] = None
    position: Optional[int] = None
    value: Optional[str] = None


class CertificateReportModel(BaseModel):
    kind: Literal["non-grs"] = "non-grs"
    schema_version: str = SCHEMA_VERSION
    field_description: str
    params: ParamsModel
    certificates: list[CertificateModel]


class ReproduceRowModel(BaseModel):
    target: str
    name: str
    expected: str
    found: str
    passed: bool
    warnings: list[str] = Field(default_factory=list)


class ReproduceReportModel(BaseModel):
    kind: Literal["reproduce"] = "reproduce"
    schema_version: str = SCHEMA_VERSION
    target: str
    passed: bool
    rows: list[ReproduceRowModel] = Field(default_factory=list)


REPORT_KINDS = {
    "scan": ScanReportModel,
    "check": CheckReportModel,
    "code": CodeReportModel,
    "non-grs": CertificateReportModel,
    "reproduce": ReproduceReportModel,
}
Report = Union[ScanReportModel, CheckReportModel, CodeReportModel, CertificateReportModel, ReproduceReportModel]


# ---------------- Builders ----------------
def params_model(template, eta=None, delta=None, a=None, b=None):
    F = template.field

    def fmt(e):
        return None if e is None else format_element(F, F(e))

    return ParamsModel(n=template.n, k=template.k, h=template.h,
                       alpha=format_elements(F, template.alpha), v=format_elements(F, template.v),
                       eta=fmt(eta), delta=fmt(delta), a=fmt(a), b=fmt(b))


def pair_model(F, eta, delta, report, brute_force=None):
    conditions = [ConditionModel(id=c.cid, holds=c.holds,
                                 witness=None if c.witness is None else list(c.witness))
                  for c in report.conditions]
    return PairModel(eta=format_element(F, eta), delta=format_element(F, delta), verdict=report.verdict,
                     path=report.path, conditions=conditions, brute_force=brute_force)


def scan_report(result, a=None, b=None):
    F = result.template.field
    pairs = [pair_model(F, hit.eta, hit.delta, hit.report, hit.brute_force) for hit in result.hits]
    return ScanReportModel(field_description=F.description, target=result.target,
                           params=params_model(result.template, a=a, b=b), scanned=result.scanned,
                           cross_checked=result.cross_checked, pairs=pairs)


def check_report(P, report, a=None, b=None, brute_force=None):
    F = P.field
    return CheckReportModel(
        field_description=F.description, target=report.target,
        params=params_model(P, P.eta, P.delta, a, b),
        result=pair_model(F, P.eta, P.delta, report),
        hole=None if report.hole is None else format_elements(F, report.hole),
        radius=report.radius, brute_force=brute_force)


def certificate_model(F, certificate):
    value = None if certificate.value is None else format_element(F, certificate.value)
    return CertificateModel(kind=certificate.kind, applicable=certificate.applicable, valid=certificate.valid,
                            dimension=certificate.dimension, position=certificate.position, value=value)


# ---------------- Emission ----------------
def emit_report(report, fmt="json"):
    """Deterministic text: sorted JSON keys, or CSV rows in report order."""
    if fmt == "json":
        return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown report format {fmt!r}")

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if isinstance(report, ScanReportModel):
        writer.writerow(SCAN_CSV_HEADER)
        for pair in report.pairs:
            writer.writerow([pair.eta, pair.delta, str(pair.verdict).lower(), pair.first_failing_condition()])
    elif isinstance(report, CheckReportModel):
        writer.writerow(SCAN_CSV_HEADER)
        r = report.result
        writer.writerow([r.eta, r.delta, str(r.verdict).lower(), r.first_failing_condition()])
    elif isinstance(report, ReproduceReportModel):
        writer.writerow(REPRODUCE_CSV_HEADER)
        for row in report.rows:
            writer.writerow([row.target, row.name, row.expected, row.found, str(row.passed).lower()])
    else:
        flat = {key: value for key, value in report.model_dump(mode="json").items()
                if not isinstance(value, (list, dict))}
        writer.writerow(sorted(flat))
        writer.writerow([flat[key] for key in sorted(flat)])
    return buffer.getvalue()


def parse_report(text):
    """Inverse of emit_report for JSON output."""
    payload = json.loads(text)
    model = REPORT_KINDS.get(payload.get("kind"))
    if model is None:
        raise ValueError(f"unknown report kind {payload.get('kind')!r}")
    return model.model_validate(payload)
