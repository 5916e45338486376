# etgrs.py
# Extended twisted GRS codes: the generator G, its puncture G1, the extension
# vector, symmetric-polynomial criteria for MDS / AMDS / deep holes, non-GRS
# certificates and (eta, delta) scans
#
# Subsets are 0-based index tuples in lexicographic order; S_r follows the
# signed convention S_r(E) = (-1)^r e_r(alpha_E).

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dataclass_field
from functools import lru_cache
from itertools import combinations
from math import comb

import galois
import numpy as np

from codes.linear_code import (CodeClass, LinearCode, classify_by_columns,
                               grs_dual_multipliers, schur_product)
from gf.field import FieldSpec, element_sort_key, format_element
from gf.matrix import power_table, vstack
from lab_errors import BudgetExceeded, CrossCheckError, FieldError, ParameterError, PreconditionError

log = logging.getLogger(__name__)

# ---------------- Configuration ----------------
SUBSET_BUDGET = 10 ** 6      # index subsets tabulated per template
PAIR_BUDGET = 10 ** 6        # (eta, delta) pairs per scan
TABLES_CACHE_SIZE = 32       # templates whose subset tables stay in memory
TARGETS = ("mds", "amds", "deep-hole")

PATH_GENERAL = "general"
PATH_H0 = "h=0 corollary"
PATH_AB0 = "a=b=0 corollary"


# ---------------- Parameters ----------------
@dataclass(frozen=True, eq=False)
class ScanTemplate:
    """Everything that fixes the code except the pair (eta, delta)."""

    field: FieldSpec
    n: int
    k: int
    h: int
    alpha: galois.FieldArray
    v: galois.FieldArray

    def params(self, eta, delta):
        return build_params(self.field, self.n, self.k, self.h, self.alpha, self.v, eta, delta)

    def key(self):
        return (self.field, self.k, self.h, tuple(int(a) for a in self.alpha))


@dataclass(frozen=True, eq=False)
class EtgrsParams(ScanTemplate):
    eta: galois.FieldArray = None
    delta: galois.FieldArray = None

    @property
    def template(self):
        return ScanTemplate(self.field, self.n, self.k, self.h, self.alpha, self.v)


def _coerce_vector(F, values, name):
    try:
        return F.vector(values)
    except (TypeError, ValueError) as e:
        if isinstance(e, FieldError):
            raise
        raise ParameterError(f"{name}: {e}") from e


def _template_violations(F, n, k, h, alpha, v):
    problems = []
    if k < 3:
        problems.append(f"need k >= 3, got k = {k}")
    if not k + 1 < n:
        problems.append(f"need k + 1 < n, got k = {k}, n = {n}")
    if n > F.q:
        problems.append(f"need n <= q, got n = {n}, q = {F.q}")
    if not 0 <= h <= k - 2:
        problems.append(f"hook h must satisfy 0 <= h <= k-2, got h = {h}, k = {k}")
    if alpha.size != n:
        problems.append(f"alpha has {alpha.size} entries, expected {n}")
    if len(set(int(a) for a in alpha)) != alpha.size:
        problems.append("alpha entries must be pairwise distinct")
    if v.size != n:
        problems.append(f"v has {v.size} entries, expected {n}")
    if np.any(v == 0):
        problems.append("v entries must be nonzero")
    return problems


def build_template(F, n, k, h, alpha, v=None):
    alpha = _coerce_vector(F, alpha, "alpha")
    v = F.gf.Ones(alpha.size) if v is None else _coerce_vector(F, v, "v")
    problems = _template_violations(F, n, k, h, alpha, v)
    if problems:
        raise ParameterError(problems)
    return ScanTemplate(F, n, k, h, alpha, v)


def build_params(F, n, k, h, alpha, v, eta, delta):
    """Validate and bundle the parameters; every broken constraint is listed."""
    alpha = _coerce_vector(F, alpha, "alpha")
    v = F.gf.Ones(alpha.size) if v is None else _coerce_vector(F, v, "v")
    eta, delta = F(eta), F(delta)
    problems = _template_violations(F, n, k, h, alpha, v)
    if eta == 0:
        problems.append("eta must be nonzero")
    if delta == 0:
        problems.append("delta must be nonzero")
    if problems:
        raise ParameterError(problems)
    return EtgrsParams(F, n, k, h, alpha, v, eta=eta, delta=delta)


# ---------------- Constructions ----------------
def generator_g(P):
    """The k x (n+2) generator of the extended code.

    Row i on the first n columns is v_j alpha_j^i, with eta alpha_j^(k+1)
    added on row h. Column n+1 is the unit vector at row h; column n+2 has
    1 at row h and delta at row k-1.
    """
    GF = P.field.gf
    k, n = P.k, P.n
    table = power_table(P.alpha, k + 1)
    rows = table[:k].copy()
    rows[P.h] = rows[P.h] + P.eta * table[k + 1]
    G = GF.Zeros((k, n + 2))
    G[:, :n] = rows * P.v
    G[P.h, n] = 1
    G[P.h, n + 1] = 1
    G[k - 1, n + 1] = P.delta
    return G


def generator_g1(P):
    return generator_g(P)[:, :P.n + 1]


def extension_vector(P):
    """e with code(G) = extension of code(G1) by e.

    e_i = delta alpha_i^(n-k) u_i / v_i for i <= n and
    e_(n+1) = 1 + delta eta (sum_{i<j} alpha_i alpha_j - (sum alpha_i)^2).
    """
    GF = P.field.gf
    u = grs_dual_multipliers(P.alpha)
    head = P.delta * P.alpha ** (P.n - P.k) * u / P.v
    total = -s_poly(1, P.alpha)
    pairs = s_poly(2, P.alpha)
    tail = P.field.one + P.delta * P.eta * (pairs - total * total)
    e = GF.Zeros(P.n + 1)
    e[:P.n] = head
    e[P.n] = tail
    return e


def encode(P, coeffs):
    """Codeword of f = sum a_i x^i + eta a_h x^(k+1):
    (v_1 f(alpha_1), ..., v_n f(alpha_n), a_h, a_h + delta a_(k-1))."""
    GF = P.field.gf
    if len(coeffs) != P.k:
        raise ParameterError(f"need {P.k} coefficients, got {len(coeffs)}")
    a = P.field.vector(coeffs)
    table = power_table(P.alpha, P.k + 1)
    values = a @ table[:P.k] + P.eta * a[P.h] * table[P.k + 1]
    word = GF.Zeros(P.n + 2)
    word[:P.n] = values * P.v
    word[P.n] = a[P.h]
    word[P.n + 1] = a[P.h] + P.delta * a[P.k - 1]
    return word


def predicted_deep_hole(P, a, b):
    x = P.field.gf.Zeros(P.n + 2)
    x[:P.n] = P.alpha ** P.k
    x[P.n] = P.field(a)
    x[P.n + 1] = P.field(b)
    return x


# ---------------- Symmetric polynomials ----------------
def s_poly(r, vals):
    """S_r(E) over the values of E; 1 for r = 0 and 0 outside [0, |E|]."""
    GF = type(vals)
    if r < 0 or r > vals.size:
        return GF(0)
    table = GF.Zeros(vals.size + 1)
    table[0] = 1
    for j, beta in enumerate(vals):
        for s in range(j + 1, 0, -1):
            table[s] = table[s] - beta * table[s - 1]
    return table[r]


def delta_j(J_vals, k, h):
    """S_{k-h-1}(S_1^2 - S_2) - S_1 S_{k-h} + S_{k-h+1}, all over J."""
    if J_vals.size != k - 1:
        raise ParameterError(f"Delta needs |J| = k - 1 = {k - 1}, got {J_vals.size}")
    s1, s2 = s_poly(1, J_vals), s_poly(2, J_vals)
    return (s_poly(k - h - 1, J_vals) * (s1 * s1 - s2)
            - s1 * s_poly(k - h, J_vals) + s_poly(k - h + 1, J_vals))


def subset_table(alpha, size):
    """(subsets, S) with S[i, r] = S_r of the i-th subset, r = 0..size."""
    GF = type(alpha)
    subsets = np.array(list(combinations(range(alpha.size), size)), dtype=np.int64).reshape(-1, size)
    vals = alpha[subsets]
    table = GF.Zeros((subsets.shape[0], size + 1))
    table[:, 0] = 1
    for j in range(size):
        beta = vals[:, j]
        for r in range(j + 1, 0, -1):
            table[:, r] = table[:, r] - beta * table[:, r - 1]
    return subsets, table


class _Tables:
    """Pair-independent subset quantities for one template."""

    def __init__(self, alpha, k, h):
        GF = type(alpha)
        self.M, SM = subset_table(alpha, k + 1)
        self.I, SI = subset_table(alpha, k)
        self.J, SJ = subset_table(alpha, k - 1)
        self.L, SL = subset_table(alpha, k - 2)

        def col(table, r):
            if 0 <= r < table.shape[1]:
                return table[:, r]
            return GF.Zeros(table.shape[0])

        self.m_top = col(SM, k - h + 1)                               # S_{k-h+1}(M)
        s1_i, s2_i = col(SI, 1), col(SI, 2)
        self.i_khm = col(SI, k - h)                                   # S_{k-h}(I)
        self.i_khp = col(SI, k - h + 1)
        self.i_twist = self.i_khp - s1_i * self.i_khm                 # S_{k-h+1} - S_1 S_{k-h}
        self.i_theta2_tail = s2_i * self.i_khm - s1_i * self.i_khp
        self.i_s1 = s1_i

        s1_j, s2_j = col(SJ, 1), col(SJ, 2)
        self.j_low = col(SJ, k - h - 1)                               # S_{k-h-1}(J)
        j_khm, j_khp = col(SJ, k - h), col(SJ, k - h + 1)
        self.j_delta = self.j_low * (s1_j * s1_j - s2_j) - s1_j * j_khm + j_khp
        self.j_theta4 = s1_j * self.j_low - j_khm
        self.l_low = col(SL, k - h - 2)                               # S_{k-h-2}(L)

        position = {tuple(int(x) for x in row): i for i, row in enumerate(self.I)}
        self.m_to_i = np.array(
            [[position[tuple(int(x) for x in np.delete(row, j))] for j in range(k + 1)] for row in self.M],
            dtype=np.int64).reshape(-1, k + 1)
        jpos = {tuple(int(x) for x in row): i for i, row in enumerate(self.J)}
        self.i_to_j = np.array(
            [[jpos[tuple(int(x) for x in np.delete(row, j))] for j in range(k)] for row in self.I],
            dtype=np.int64).reshape(-1, k)


@lru_cache(maxsize=TABLES_CACHE_SIZE)
def _cached_tables(field, k, h, alpha_values):
    log.debug("tabulating subsets for n=%d k=%d h=%d", len(alpha_values), k, h)
    return _Tables(field.gf(list(alpha_values)), k, h)


def tables_for(template):
    n, k = template.n, template.k
    size = comb(n, k + 1) + comb(n, k) + comb(n, k - 1) + comb(n, k - 2)
    if size > SUBSET_BUDGET:
        raise BudgetExceeded("index subsets", size, SUBSET_BUDGET)
    return _cached_tables(*template.key())


# ---------------- Condition reports ----------------
@dataclass(frozen=True)
class ConditionResult:
    cid: str
    holds: bool
    witness: tuple = None


@dataclass(frozen=True)
class ConditionReport:
    target: str
    verdict: bool
    conditions: list
    path: str = PATH_GENERAL
    hole: galois.FieldArray = None
    radius: int = None

    def first_failing(self):
        for c in self.conditions:
            if not c.holds:
                return c.cid
        return ""


def _condition(cid, fail_mask, subsets):
    bad = np.flatnonzero(np.asarray(fail_mask, dtype=bool))
    if bad.size:
        return ConditionResult(cid, False, tuple(int(x) for x in subsets[bad[0]]))
    return ConditionResult(cid, True, None)


def _report(target, conditions, path, **extra):
    verdict = all(c.holds for c in conditions)
    return ConditionReport(target=target, verdict=verdict, conditions=conditions, path=path, **extra)


def _mds_masks(P, T):
    inv_eta = np.reciprocal(P.eta)
    theta3 = T.j_low + P.delta - P.delta * P.eta * T.j_delta
    return {
        "1": T.i_twist == inv_eta,
        "2": T.j_low == 0,
        "3": theta3 == 0,
        "4": T.l_low == 0,
    }


def mds_check(P):
    """The four subset conditions equivalent to code(G) being MDS."""
    T = tables_for(P.template)
    masks = _mds_masks(P, T)
    conditions = [
        _condition("1", masks["1"], T.I),
        _condition("2", masks["2"], T.J),
        _condition("3", masks["3"], T.J),
        _condition("4", masks["4"], T.L),
    ]
    return _report("mds", conditions, PATH_H0 if P.h == 0 else PATH_GENERAL)


def amds_check(P):
    """AMDS iff every k+1 columns have rank k and some k columns do not.

    Condition 2 is applied to the k x (k+1) block of k alpha-columns plus
    the last column, whose minors are B1(I) and B3(J) for J inside I.
    """
    T = tables_for(P.template)
    masks = _mds_masks(P, T)
    i_bad, j_bad = np.asarray(masks["1"], dtype=bool), np.asarray(masks["3"], dtype=bool)

    m_fail = i_bad[T.m_to_i].all(axis=1)
    i_fail = i_bad & j_bad[T.i_to_j].all(axis=1)
    singular = any(np.asarray(m, dtype=bool).any() for m in masks.values())

    conditions = [
        _condition("1", m_fail, T.M),
        _condition("2", i_fail, T.I),
        ConditionResult("3", bool(singular), None if singular else tuple(range(P.n))),
    ]
    return _report("amds", conditions, PATH_H0 if P.h == 0 else PATH_GENERAL)


def deep_hole_check(P, a, b):
    """Conditions under which x = (alpha^k, a, b) is a deep hole and rho = n - k + 2."""
    a, b = P.field(a), P.field(b)
    if not (mds_check(P).verdict or amds_check(P).verdict):
        raise PreconditionError("deep-hole criteria need a code that is MDS or AMDS")

    T = tables_for(P.template)
    eta, delta = P.eta, P.delta
    theta1 = P.field.one - eta * T.i_twist
    theta2 = T.i_s1 + eta * T.i_theta2_tail
    theta3 = T.j_low + delta - delta * eta * T.j_delta
    conditions = [
        _condition("1", T.m_top == np.reciprocal(eta), T.M),
        _condition("2", T.i_khm + a * theta1 == 0, T.I),
        _condition("3", T.i_khm + b * theta1 + delta * theta2 == 0, T.I),
        _condition("4", a * theta3 - b * T.j_low - delta * T.j_theta4 == 0, T.J),
    ]
    if a == 0 and b == 0:
        path = PATH_AB0
    elif P.h == 0:
        path = PATH_H0
    else:
        path = PATH_GENERAL
    verdict = all(c.holds for c in conditions)
    if verdict:
        return ConditionReport("deep-hole", True, conditions, path,
                               hole=predicted_deep_hole(P, a, b), radius=P.n - P.k + 2)
    return ConditionReport("deep-hole", False, conditions, path)


def check(P, target, a=None, b=None):
    if target == "mds":
        return mds_check(P)
    if target == "amds":
        return amds_check(P)
    if target == "deep-hole":
        return deep_hole_check(P, 0 if a is None else a, 0 if b is None else b)
    raise ParameterError(f"unknown target {target!r}, expected one of {', '.join(TARGETS)}")


# ---------------- Non-GRS certificates ----------------
@dataclass(frozen=True)
class Certificate:
    kind: str
    applicable: bool
    valid: bool = False
    dimension: int = None
    position: int = None
    value: galois.FieldArray = None


def schur_square_certificate(P):
    """dim(C1^2) >= 2k rules out GRS, whose square has dimension 2k - 1."""
    if not (3 <= P.k and 2 * P.k < P.n + 2):
        return Certificate("schur-square", applicable=False)
    C1 = LinearCode(generator_g1(P))
    dimension = schur_product(C1, C1).k
    return Certificate("schur-square", applicable=True, valid=dimension >= 2 * P.k, dimension=dimension)


def grs_square_dimension(C):
    """Schur-square dimension of an arbitrary code; 2k - 1 for GRS with 2k - 1 <= n."""
    return schur_product(C, C).k


def dual_schur_certificate(P):
    """Three dual codewords whose combination c1*c3 - c2^2 has weight one."""
    if not (2 * P.k >= P.n + 3 and P.k <= P.n - 3):
        return Certificate("dual-weight-one", applicable=False)
    GF = P.field.gf
    n, k = P.n, P.k
    w = grs_dual_multipliers(P.alpha) / P.v
    total = -s_poly(1, P.alpha)
    powers = power_table(P.alpha, n - k - 1)

    def word(exponent, extra):
        c = GF.Zeros(n + 2)
        c[:n] = w * powers[exponent]
        c[n] = extra
        return c

    c1 = word(n - k - 3, 0)
    c2 = word(n - k - 2, -P.eta)
    c3 = word(n - k - 1, -P.eta * total)
    G = generator_g(P)
    members = all(not np.any(G @ c != 0) for c in (c1, c2, c3))

    combo = c1 * c3 - c2 * c2
    support = np.flatnonzero(combo.view(np.ndarray))
    expected = -(P.eta * P.eta)
    weight_one = support.size == 1 and int(support[0]) == n and combo[n] == expected
    if not (members and weight_one):
        log.warning("⚠️  dual certificate failed for %s (members=%s, weight_one=%s)",
                    P.field.description, members, weight_one)
    position = int(support[0]) if support.size == 1 else None
    value = combo[position] if position is not None else None
    return Certificate("dual-weight-one", applicable=True, valid=bool(members and weight_one),
                       position=position, value=value)


# ---------------- Scans ----------------
@dataclass(frozen=True)
class ScanHit:
    eta: galois.FieldArray
    delta: galois.FieldArray
    report: ConditionReport
    brute_force: str = None


@dataclass
class ScanResult:
    template: ScanTemplate
    target: str
    scanned: int = 0
    cross_checked: int = 0
    hits: list = dataclass_field(default_factory=list)


def brute_force_verdict(P, target, a=None, b=None):
    """Column-rank oracle for the same question the subset criteria answer."""
    code_class = classify_by_columns(LinearCode(generator_g(P)))
    if target == "mds":
        return code_class == CodeClass.MDS, code_class.value
    if target == "amds":
        return code_class == CodeClass.AMDS, code_class.value
    x = predicted_deep_hole(P, 0 if a is None else a, 0 if b is None else b)
    G = generator_g(P)
    augmented = vstack(G, x)
    holds = classify_by_columns(LinearCode(augmented)) == CodeClass.MDS
    return holds, "augmented MDS" if holds else "augmented not MDS"


def _scan_row(template, target, eta, a, b, cross_validate):
    hits, checked = [], 0
    for delta in template.field.units():
        P = template.params(eta, delta)
        if target == "deep-hole" and not (mds_check(P).verdict or amds_check(P).verdict):
            continue
        report = check(P, target, a, b)
        brute = None
        if cross_validate:
            holds, brute = brute_force_verdict(P, target, a, b)
            checked += 1
            if holds != report.verdict:
                F = template.field
                raise CrossCheckError(
                    f"{target} criterion says {report.verdict} but columns say {brute} "
                    f"at eta={format_element(F, eta)}, delta={format_element(F, delta)}")
        if report.verdict:
            log.debug("hit eta=%s delta=%s", format_element(template.field, eta),
                      format_element(template.field, delta))
            hits.append(ScanHit(eta, delta, report, brute))
    return hits, checked


def scan(template, target, a=None, b=None, cross_validate=False, workers=1):
    """All (eta, delta) in F* x F* where the target criterion holds."""
    if target not in TARGETS:
        raise ParameterError(f"unknown target {target!r}, expected one of {', '.join(TARGETS)}")
    pairs = (template.field.q - 1) ** 2
    if pairs > PAIR_BUDGET:
        raise BudgetExceeded("(eta, delta) pairs", pairs, PAIR_BUDGET)
    tables_for(template)
    units = list(template.field.units())
    result = ScanResult(template, target, scanned=len(units) ** 2)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda eta: _scan_row(template, target, eta, a, b, cross_validate), units))
    else:
        rows = [_scan_row(template, target, eta, a, b, cross_validate) for eta in units]

    for hits, checked in rows:
        result.hits.extend(hits)
        result.cross_checked += checked
    result.hits.sort(key=lambda hit: (element_sort_key(hit.eta), element_sort_key(hit.delta)))
    log.info("scanned %d pairs, %d hits for %s", result.scanned, len(result.hits), target)
    return result
