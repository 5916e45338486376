# matrix.py
# Exact dense linear algebra over GF(q): rank, determinant, kernel, Vandermonde
#
# Matrices are 2-d galois FieldArrays; the field is the array's class.

import logging

import galois
import numpy as np

from lab_errors import FieldError, ParameterError

log = logging.getLogger(__name__)

MatrixGF = galois.FieldArray


# ---------------- Construction helpers ----------------
def field_of(M):
    if not isinstance(M, galois.FieldArray):
        raise FieldError(f"expected a field array, got {type(M).__name__}")
    return type(M)


def hstack(*blocks):
    """Column-wise concatenation that keeps the field class."""
    GF = field_of(blocks[0])
    for block in blocks[1:]:
        if type(block) is not GF:
            raise FieldError("cannot concatenate matrices over different fields")
    return GF(np.hstack([b.view(np.ndarray) for b in blocks]))


def vstack(*blocks):
    GF = field_of(blocks[0])
    for block in blocks[1:]:
        if type(block) is not GF:
            raise FieldError("cannot concatenate matrices over different fields")
    return GF(np.vstack([np.atleast_2d(b.view(np.ndarray)) for b in blocks]))


def power_table(points, max_exponent):
    """Row e holds points**e for e = 0..max_exponent, with 0**0 = 1."""
    GF = field_of(points)
    table = GF.Ones((max_exponent + 1, points.size))
    for e in range(1, max_exponent + 1):
        table[e] = table[e - 1] * points
    return table


def vandermonde(points, num_rows):
    """Entry (i, j) = points[j]**i for 0 <= i < num_rows."""
    if num_rows < 1:
        raise ParameterError("vandermonde needs at least one row")
    values = [int(x) for x in points]
    if len(set(values)) != len(values):
        raise ParameterError("vandermonde points must be pairwise distinct")
    return power_table(points, num_rows - 1)


# ---------------- Rank, determinant, kernel ----------------
def rank(M, column_subset=None):
    """Rank of M, optionally restricted to the listed columns."""
    if column_subset is not None:
        columns = [int(c) for c in column_subset]
        if len(set(columns)) != len(columns):
            raise ParameterError("column subset has repeated indices")
        for c in columns:
            if not 0 <= c < M.shape[1]:
                raise IndexError(f"column {c} out of range for {M.shape[1]} columns")
        M = M[:, columns]
    if M.size == 0:
        return 0
    return int(np.linalg.matrix_rank(M))


def determinant(M):
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ParameterError(f"determinant needs a square matrix, got shape {M.shape}")
    GF = field_of(M)
    if M.shape[0] == 0:
        return GF(1)
    return np.linalg.det(M)


def kernel_basis(M):
    """Rows spanning {x : M x^T = 0}; there are cols - rank(M) of them."""
    GF = field_of(M)
    cols = M.shape[1]
    if rank(M) == 0:
        return GF.Identity(cols)
    basis = M.null_space()
    return basis.reshape(-1, cols)


def reduced_rows(M):
    """Reduced row-echelon form with the zero rows dropped."""
    GF = field_of(M)
    if M.shape[0] == 0 or rank(M) == 0:
        return GF.Zeros((0, M.shape[1]))
    R = M.row_reduce()
    keep = np.any(R != 0, axis=1)
    return R[keep]


def same_row_space(A, B):
    if A.shape[1] != B.shape[1] or type(A) is not type(B):
        return False
    RA, RB = reduced_rows(A), reduced_rows(B)
    return RA.shape == RB.shape and bool(np.all(RA == RB))


# ---------------- Batched nonsingularity ----------------
def nonsingular_mask(stack):
    """For an (N, s, s) stack, flag the matrices that are invertible.

    Gaussian elimination runs on every matrix at once; each one picks its
    first nonzero pivot in the current column.
    """
    GF = field_of(stack)
    count, size = stack.shape[0], stack.shape[1]
    alive = np.ones(count, dtype=bool)
    if count == 0 or size == 0:
        return alive

    A = stack.copy()
    batch = np.arange(count)
    for col in range(size):
        nonzero = (A[:, col:, col] != 0).view(np.ndarray)
        has_pivot = nonzero.any(axis=1)
        alive &= has_pivot
        pivot = col + np.argmax(nonzero, axis=1)

        pivot_rows = A[batch, pivot].copy()
        A[batch, pivot] = A[:, col]
        A[:, col] = pivot_rows
        if col + 1 == size:
            break

        lead = A[:, col, col].copy()
        lead[~has_pivot] = 1
        factors = A[:, col + 1:, col] / lead[:, np.newaxis]
        A[:, col + 1:, :] = A[:, col + 1:, :] - factors[:, :, np.newaxis] * A[:, np.newaxis, col, :]
    return alive
