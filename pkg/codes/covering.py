# covering.py
# Covering radii and deep holes via coset-leader weights
#
# A syndrome s = H x^T is stored at index sum_i int(s_i) q^i. Weights are
# u8; 255 marks a syndrome the search has not reached yet.

import json
import logging
from dataclasses import dataclass

import galois
import numpy as np

from codes.etgrs import extension_vector, generator_g1, mds_check
from codes.linear_code import CodeClass, LinearCode, augment
from lab_errors import BudgetExceeded, CrossCheckError, ParameterError, PreconditionError

log = logging.getLogger(__name__)

# ---------------- Configuration ----------------
SYNDROME_BUDGET = 10 ** 7     # q^(n-k) table entries
EXHAUSTIVE_BUDGET = 10 ** 6   # q^n vectors for the reference enumeration
VECTOR_CHUNK = 1 << 16
UNSET = 255


@dataclass(frozen=True, eq=False)
class CosetTable:
    code: LinearCode
    parity: galois.FieldArray        # (n-k) x n
    leader_weight: np.ndarray        # u8, one entry per syndrome

    @property
    def radius(self):
        return int(self.leader_weight.max())

    def index_of(self, syndromes):
        """Mixed-radix index of each row of an (N, n-k) syndrome array."""
        q = self.code.gf.order
        place = q ** np.arange(self.parity.shape[0], dtype=np.int64)
        return np.atleast_2d(syndromes.view(np.ndarray)).astype(np.int64) @ place


def _parity_of(C):
    if C.k == 0:
        return C.gf.Identity(C.n)
    return C.parity_check()


def coset_leader_weights(C):
    """Breadth-first expansion from the zero syndrome by single-column multiples."""
    q, n = C.gf.order, C.n
    H = _parity_of(C)
    r = H.shape[0]
    size = q ** r
    if size > SYNDROME_BUDGET:
        raise BudgetExceeded("syndrome table", size, SYNDROME_BUDGET)

    weights = np.full(size, UNSET, dtype=np.uint8)
    weights[0] = 0
    if r == 0:
        return CosetTable(C, H, weights)

    table = CosetTable(C, H, weights)
    scalars = C.gf.Range(1, q)
    steps = (scalars[:, np.newaxis, np.newaxis] * H.T[np.newaxis, :, :]).reshape(-1, r)
    place = q ** np.arange(r, dtype=np.int64)

    frontier = np.zeros(1, dtype=np.int64)
    layer = 0
    while frontier.size:
        layer += 1
        digits = C.gf((frontier[:, np.newaxis] // place) % q)
        reached = []
        for step in steps:
            index = table.index_of(digits + step)
            fresh = index[weights[index] == UNSET]
            if fresh.size:
                fresh = np.unique(fresh)
                weights[fresh] = layer
                reached.append(fresh)
        frontier = np.concatenate(reached) if reached else np.zeros(0, dtype=np.int64)
        log.debug("layer %d reached %d syndromes", layer, frontier.size)

    if np.any(weights == UNSET):
        raise CrossCheckError("syndrome search left cosets unreached")
    return table


def exhaustive_leader_weights(C):
    """Reference table: minimum weight over every vector of each coset."""
    q, n = C.gf.order, C.n
    total = q ** n
    if total > EXHAUSTIVE_BUDGET:
        raise BudgetExceeded("exhaustive vectors", total, EXHAUSTIVE_BUDGET)
    H = _parity_of(C)
    weights = np.full(q ** H.shape[0], UNSET, dtype=np.uint8)
    table = CosetTable(C, H, weights)
    place = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, VECTOR_CHUNK):
        index = np.arange(start, min(start + VECTOR_CHUNK, total), dtype=np.int64)
        vectors = C.gf((index[:, np.newaxis] // place) % q)
        w = np.count_nonzero(vectors.view(np.ndarray), axis=1).astype(np.uint8)
        syndromes = table.index_of(vectors @ H.T) if H.shape[0] else np.zeros(index.size, dtype=np.int64)
        np.minimum.at(weights, syndromes, w)
    return table


def leader_table(C):
    return C.cached("cosets", lambda: coset_leader_weights(C))


def covering_radius(C):
    radius = leader_table(C).radius
    if radius > C.n - C.k:
        raise CrossCheckError(f"covering radius {radius} breaks the redundancy bound n - k = {C.n - C.k}")
    return radius


def coset_weight(C, x):
    """Distance from x to the nearest codeword."""
    if x.size != C.n:
        raise ParameterError(f"vector length {x.size} != code length {C.n}")
    table = leader_table(C)
    if table.parity.shape[0] == 0:
        return 0
    syndrome = table.parity @ x.reshape(-1)
    return int(table.leader_weight[int(table.index_of(syndrome)[0])])


# ---------------- Deep holes ----------------
@dataclass(frozen=True)
class DeepHoleVerdict:
    holds: bool
    method: str
    weight: int
    radius: int


def augmented_is_mds(C, x):
    wider = augment(C, x)
    return wider.k == C.k + 1 and wider.column_class() == CodeClass.MDS


def is_deep_hole(C, x):
    """coset_weight(x) = rho, cross-checked against the augmented-MDS criterion
    whenever d(C) >= n - k."""
    weight = coset_weight(C, x)
    radius = covering_radius(C)
    holds = weight == radius

    if not 0 < C.k < C.n or C.column_class() == CodeClass.NEITHER:
        return DeepHoleVerdict(holds, "coset-table", weight, radius)

    by_matrix = augmented_is_mds(C, x)
    if by_matrix != (weight == C.n - C.k):
        raise CrossCheckError(
            f"augmented-MDS criterion says {by_matrix} but coset weight is {weight} (n - k = {C.n - C.k})")
    if radius == C.n - C.k and by_matrix != holds:
        raise CrossCheckError("deep-hole verdicts disagree between coset table and augmented matrix")
    return DeepHoleVerdict(holds, "coset-table+augmented-MDS", weight, radius)


@dataclass(frozen=True)
class DualHoleReport:
    radius: int
    expected: int
    e_weight: int
    e_is_deep_hole: bool

    @property
    def holds(self):
        return self.radius == self.expected and self.e_is_deep_hole


def dual_c1_deep_hole(P):
    """rho(C1 dual) = k and the extension vector is one of its deep holes."""
    if not mds_check(P).verdict:
        raise PreconditionError("dual deep-hole check needs parameters passing the MDS criteria")
    dual = LinearCode(generator_g1(P)).dual()
    e = extension_vector(P)
    radius = covering_radius(dual)
    weight = coset_weight(dual, e)
    return DualHoleReport(radius=radius, expected=P.k, e_weight=weight, e_is_deep_hole=weight == radius)


# ---------------- Snapshots ----------------
def dump_leader_weights(table, path):
    """One JSON header line, then the u8 weights."""
    C = table.code
    header = {"field": C.field.description, "n": C.n, "k": C.k, "entries": int(table.leader_weight.size)}
    with open(path, "wb") as f:
        f.write(json.dumps(header, sort_keys=True).encode() + b"\n")
        f.write(table.leader_weight.astype("<u1").tobytes())
    log.info("✓ wrote %d leader weights to %s", table.leader_weight.size, path)


def load_leader_weights(path):
    with open(path, "rb") as f:
        header = json.loads(f.readline().decode())
        weights = np.frombuffer(f.read(), dtype="<u1").copy()
    if weights.size != header["entries"]:
        raise ParameterError(f"snapshot {path} holds {weights.size} weights, header says {header['entries']}")
    return header, weights
