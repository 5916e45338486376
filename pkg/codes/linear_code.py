# linear_code.py
# Generic linear-code core: duals, distances, MDS/AMDS classification,
# Schur products, extension/puncturing and the GRS/TGRS constructors

import logging
import threading
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from math import comb

import galois
import numpy as np

from gf.field import format_element, spec_of
from gf.matrix import (field_of, hstack, kernel_basis, nonsingular_mask,
                       power_table, rank, reduced_rows, same_row_space, vstack)
from lab_errors import BudgetExceeded, FieldError, ParameterError

log = logging.getLogger(__name__)

# ---------------- Configuration ----------------
MESSAGE_BUDGET = 10 ** 8     # q^k messages for exhaustive min distance
SUBSET_BUDGET = 10 ** 6      # column subsets for the column classifier
MESSAGE_CHUNK = 1 << 15      # messages encoded per numpy batch


class CodeClass(str, Enum):
    MDS = "MDS"
    AMDS = "AMDS"
    NEITHER = "neither"


def class_from_distance(n, k, d):
    if d == n - k + 1:
        return CodeClass.MDS
    if d == n - k:
        return CodeClass.AMDS
    return CodeClass.NEITHER


@dataclass(frozen=True)
class DistanceReport:
    d: int
    code_class: CodeClass
    witness: galois.FieldArray     # a minimum-weight codeword
    message: galois.FieldArray     # lexicographically least message producing it


# ---------------- Linear code ----------------
class LinearCode:
    """A k x n generator of full row rank plus lazily cached derived data.

    k = 0 is the zero-code sentinel (generator of shape (0, n)).
    """

    def __init__(self, gen, rank_deficient=False):
        self.gen = gen
        self.gf = field_of(gen)
        self.k, self.n = gen.shape
        self.rank_deficient = rank_deficient
        self._lock = threading.RLock()
        self._cache = {}

    @classmethod
    def zero(cls, gf, n):
        return cls(gf.Zeros((0, n)))

    @classmethod
    def full(cls, gf, n):
        return cls(gf.Identity(n))

    @property
    def field(self):
        return spec_of(self.gf)

    def cached(self, slot, compute):
        with self._lock:
            if slot not in self._cache:
                self._cache[slot] = compute()
            return self._cache[slot]

    def canonical(self):
        """Reduced row-echelon generator; equal for equal codes."""
        return self.cached("canonical", lambda: reduced_rows(self.gen))

    def dual(self):
        return self.cached("dual", lambda: _build_dual(self))

    def parity_check(self):
        return self.dual().gen

    def distance(self):
        return self.cached("distance", lambda: min_distance(self))

    def column_class(self):
        return self.cached("column_class", lambda: classify_by_columns(self))

    def contains(self, x):
        if x.size != self.n:
            raise ParameterError(f"vector length {x.size} != code length {self.n}")
        if self.k == 0:
            return not np.any(x != 0)
        return rank(vstack(self.gen, x)) == self.k

    def same_code(self, other):
        if self.n != other.n or self.gf is not other.gf:
            return False
        if self.k == 0 or other.k == 0:
            return self.k == other.k
        return same_row_space(self.gen, other.gen)

    def __repr__(self):
        return f"LinearCode([{self.n}, {self.k}] over {self.gf.name})"


def from_generator(M):
    """Code spanned by the rows of M; dependent rows are dropped and flagged."""
    GF = field_of(M)
    M = GF(np.atleast_2d(M.view(np.ndarray)))
    if M.size == 0 or not np.any(M != 0):
        raise ParameterError("generator matrix is zero")
    r = rank(M)
    if r == M.shape[0]:
        return LinearCode(M.copy())

    keep = []
    for i in range(M.shape[0]):
        if rank(M[keep + [i]]) > len(keep):
            keep.append(i)
        if len(keep) == r:
            break
    log.debug("generator has rank %d < %d rows, keeping rows %s", r, M.shape[0], keep)
    return LinearCode(M[keep].copy(), rank_deficient=True)


def _build_dual(C):
    if C.k == 0:
        return LinearCode.full(C.gf, C.n)
    if C.k == C.n:
        return LinearCode.zero(C.gf, C.n)
    return LinearCode(kernel_basis(C.gen))


def dual(C):
    return C.dual()


# ---------------- Distance and classification ----------------
def min_distance(C):
    """Exact d by encoding every nonzero message."""
    if C.k == 0:
        raise ParameterError("the zero code has no minimum distance")
    q = C.gf.order
    total = q ** C.k
    if total > MESSAGE_BUDGET:
        raise BudgetExceeded("min_distance messages", total, MESSAGE_BUDGET)

    place = q ** np.arange(C.k - 1, -1, -1, dtype=np.int64)
    best_weight, best_word, best_message = C.n + 1, None, None
    for start in range(1, total, MESSAGE_CHUNK):
        index = np.arange(start, min(start + MESSAGE_CHUNK, total), dtype=np.int64)
        messages = C.gf((index[:, np.newaxis] // place) % q)
        words = messages @ C.gen
        weights = np.count_nonzero(words.view(np.ndarray), axis=1)
        i = int(np.argmin(weights))
        if weights[i] < best_weight:
            best_weight, best_word, best_message = int(weights[i]), words[i], messages[i]

    code_class = class_from_distance(C.n, C.k, best_weight)
    return DistanceReport(d=best_weight, code_class=code_class, witness=best_word, message=best_message)


def _full_rank_mask(gen, subsets):
    index = np.array(subsets, dtype=np.int64)
    stack = gen[:, index].transpose(1, 0, 2)
    return nonsingular_mask(stack)


def column_scan(C):
    """(class, first deficient k-subset, first deficient (k+1)-subset)."""
    if C.k == 0:
        raise ParameterError("the zero code has no column classification")
    k, n = C.k, C.n
    size = comb(n, k) + comb(n, k + 1)
    if size > SUBSET_BUDGET:
        raise BudgetExceeded("column subsets", size, SUBSET_BUDGET)

    k_sets = list(combinations(range(n), k))
    ok = _full_rank_mask(C.gen, k_sets)
    if ok.all():
        return CodeClass.MDS, None, None
    deficient = k_sets[int(np.argmin(ok))]

    position = {subset: i for i, subset in enumerate(k_sets)}
    for wider in combinations(range(n), k + 1):
        if not any(ok[position[wider[:j] + wider[j + 1:]]] for j in range(k + 1)):
            return CodeClass.NEITHER, deficient, wider
    return CodeClass.AMDS, deficient, None


def classify_by_columns(C):
    """MDS iff every k columns are independent; AMDS iff some k columns are
    dependent and every k+1 columns have rank k."""
    return column_scan(C)[0]


def is_nmds(C):
    """Near-MDS: the code and its dual are both AMDS."""
    if C.k in (0, C.n):
        return False
    return C.column_class() == CodeClass.AMDS and C.dual().column_class() == CodeClass.AMDS


# ---------------- Code operations ----------------
def schur_product(A, B):
    """Span of all componentwise products of generator rows."""
    if A.n != B.n:
        raise ParameterError(f"Schur product needs equal lengths, got {A.n} and {B.n}")
    if A.gf is not B.gf:
        raise FieldError("Schur product of codes over different fields")
    if A.k == 0 or B.k == 0:
        return LinearCode.zero(A.gf, A.n)
    products = (A.gen[:, np.newaxis, :] * B.gen[np.newaxis, :, :]).reshape(-1, A.n)
    rows = reduced_rows(products)
    if rows.shape[0] == 0:
        return LinearCode.zero(A.gf, A.n)
    return LinearCode(rows)


def extend_code(C, e):
    """Append c_{n+1} = sum e_i c_i; the generator becomes (G, G e^T)."""
    if e.size != C.n:
        raise ParameterError(f"extension vector has length {e.size}, expected {C.n}")
    if not np.any(e != 0):
        raise ParameterError("extension vector must be nonzero")
    column = C.gen @ e.reshape(-1, 1)
    return LinearCode(hstack(C.gen, column))


def extension_parity_check(C, e):
    """Parity-check matrix [[H, 0], [e, -1]] of the extended code."""
    GF = C.gf
    H = C.parity_check()
    top = hstack(H, GF.Zeros((H.shape[0], 1)))
    bottom = hstack(e.reshape(1, -1), -GF.Ones((1, 1)))
    return vstack(top, bottom)


def puncture(C, position):
    """Delete one coordinate; a rank drop is flagged, not fatal."""
    if not 0 <= position < C.n:
        raise IndexError(f"position {position} out of range for length {C.n}")
    M = C.gf(np.delete(C.gen.view(np.ndarray), position, axis=1))
    if C.k == 0:
        return LinearCode.zero(C.gf, C.n - 1)
    if not np.any(M != 0):
        return LinearCode(C.gf.Zeros((0, C.n - 1)), rank_deficient=True)
    if rank(M) == C.k:
        return LinearCode(M)
    log.debug("puncturing position %d dropped the rank of %r", position, C)
    return from_generator(M)


def augment(C, x):
    """Code generated by G with x appended as an extra row."""
    if x.size != C.n:
        raise ParameterError(f"vector length {x.size} != code length {C.n}")
    if C.k == 0:
        return from_generator(x.reshape(1, -1))
    return from_generator(vstack(C.gen, x))


# ---------------- GRS / TGRS constructors ----------------
def _check_nodes(alpha, v=None):
    GF = field_of(alpha)
    n = alpha.size
    problems = []
    if n > GF.order:
        problems.append(f"n = {n} exceeds q = {GF.order}")
    if len(set(int(a) for a in alpha)) != n:
        problems.append("alpha entries must be pairwise distinct")
    if v is not None:
        if type(v) is not GF:
            raise FieldError("alpha and v live in different fields")
        if v.size != n:
            problems.append(f"v has length {v.size}, expected {n}")
        elif np.any(v == 0):
            problems.append("v entries must be nonzero")
    return problems


def grs_code(alpha, v, k):
    """GRS_{k,n}(alpha, v): rows v_j alpha_j^i for i < k."""
    n = alpha.size
    problems = _check_nodes(alpha, v)
    if not 1 <= k <= n:
        problems.append(f"need 1 <= k <= n, got k = {k}, n = {n}")
    if problems:
        raise ParameterError(problems)
    return LinearCode(power_table(alpha, k - 1) * v)


def tgrs_generator(alpha, v, k, t, h, eta):
    """Generator of the TGRS code: row h is v (alpha^h + eta alpha^(k-1+t))."""
    n = alpha.size
    problems = _check_nodes(alpha, v)
    if t < 1:
        problems.append(f"twist t must be >= 1, got {t}")
    if not 0 <= h <= k - 1:
        problems.append(f"hook h must satisfy 0 <= h <= k-1, got h = {h}, k = {k}")
    if not k - 1 + t < n:
        problems.append(f"need k - 1 + t < n, got {k - 1 + t} >= {n}")
    if type(eta) is not field_of(alpha):
        raise FieldError("eta lives in a different field")
    if eta == 0:
        problems.append("eta must be nonzero")
    if problems:
        raise ParameterError(problems)

    table = power_table(alpha, k - 1 + t)
    rows = table[:k].copy()
    rows[h] = rows[h] + eta * table[k - 1 + t]
    return rows * v


def grs_dual_multipliers(alpha):
    """u_i = prod_{j != i} (alpha_i - alpha_j)^(-1)."""
    GF = field_of(alpha)
    n = alpha.size
    if n < 2:
        raise ParameterError("need at least two nodes")
    if len(set(int(a) for a in alpha)) != n:
        raise ParameterError("repeated node in alpha")
    diffs = alpha[:, np.newaxis] - alpha[np.newaxis, :]
    diffs[np.arange(n), np.arange(n)] = 1
    product = GF.Ones(n)
    for j in range(n):
        product = product * diffs[:, j]
    return np.reciprocal(product)


# ---------------- Serialization ----------------
def code_to_json(C):
    F = C.field
    payload = {
        "field": F.description,
        "n": C.n,
        "k": C.k,
        "generator": [[format_element(F, x) for x in row] for row in C.gen],
    }
    if "distance" in C._cache:
        report = C._cache["distance"]
        payload["d"] = report.d
        payload["class"] = report.code_class.value
    elif "column_class" in C._cache:
        payload["class"] = C._cache["column_class"].value
    return payload
