"""
Extremality criteria for Kraus families.

Both criteria are linear-independence tests on products of Kraus
operators, assembled here as row systems:

- gram system: row (i, j) = vec(V_i* V_j), n² × d_out²
- dual system: row (i, j) = vec(V_j V_i*), n² × d_in²
- bilinear system: both rows concatenated, n² × (d_out² + d_in²)

Row (i, j) sits at index i·n + j, so witnesses read as matrices a_ij.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy import linalg as sla

from choisense.algebra.linalg import (
    DenseMatrix,
    Independence,
    adjoint,
    combine_rows,
    float_left_null_vector,
    hstack,
    matmul,
    rank_float,
    row_independence,
    stack_rows,
    vectorize,
)
from choisense.maps.cpmap import KrausFamily, choi_matrix_float

FloatTol = Union[str, float]


def parthasarathy_bound(d1: int, d2: int) -> int:
    """
    ⌊√(d1² + d2² − 1)⌋ in integer arithmetic.

    :raises ValueError: If a dimension is not positive.
    """
    if d1 < 1 or d2 < 1:
        raise ValueError(f"dimensions must be positive, got ({d1}, {d2})")
    return math.isqrt(d1 * d1 + d2 * d2 - 1)


# ============================================================
# Exact systems
# ============================================================
def gram_system(family: KrausFamily) -> DenseMatrix:
    adj = [adjoint(v) for v in family.ops]
    return stack_rows([vectorize(matmul(adj[i], vj)) for i in range(family.size) for vj in family.ops])


def dual_system(family: KrausFamily) -> DenseMatrix:
    adj = [adjoint(v) for v in family.ops]
    return stack_rows([vectorize(matmul(vj, adj[i])) for i in range(family.size) for vj in family.ops])


def bilinear_system(family: KrausFamily) -> DenseMatrix:
    return hstack(gram_system(family), dual_system(family))


def gram_independence(family: KrausFamily) -> Independence:
    """{V_i* V_j} linearly independent in M(d_out); witness a_ij on failure."""
    return row_independence(gram_system(family))


def dual_gram_independence(family: KrausFamily) -> Independence:
    """{V_j V_i*} linearly independent in M(d_in); witness a_ij on failure."""
    return row_independence(dual_system(family))


def bilinear_independence(family: KrausFamily) -> Independence:
    """
    The pairs (V_i*V_j, V_jV_i*) linearly independent.

    A witness a satisfies Σ a_ij V_i*V_j = 0 = Σ a_ij V_jV_i* simultaneously.
    """
    return row_independence(bilinear_system(family))


def witness_residual(system: DenseMatrix, witness) -> bool:
    """True iff the witness re-substitutes to the zero vector."""
    return not any(combine_rows(system, witness))


# ============================================================
# Float systems
# ============================================================
@dataclass(frozen=True)
class FloatIndependence:
    independent: bool
    rank: int
    size: int
    witness: Optional[np.ndarray] = None


def float_gram_system(ops: np.ndarray) -> np.ndarray:
    n, _, d_out = ops.shape
    return np.einsum("iab,jac->ijbc", ops.conj(), ops).reshape(n * n, d_out * d_out)


def float_dual_system(ops: np.ndarray) -> np.ndarray:
    n, d_in, _ = ops.shape
    return np.einsum("jab,icb->ijac", ops, ops.conj()).reshape(n * n, d_in * d_in)


def float_row_independence(system: np.ndarray, tol: FloatTol = "auto", witness_limit: int = 0) -> FloatIndependence:
    """
    Numerical counterpart of :func:`row_independence`.

    A witness is computed only when the system has at most ``witness_limit``
    rows, since it needs a full SVD.
    """
    rows = system.shape[0]
    rank = rank_float(system, tol)
    if rank == rows:
        return FloatIndependence(True, rank, rows)
    witness = float_left_null_vector(system, tol) if rows <= witness_limit else None
    return FloatIndependence(False, rank, rows, witness)


def float_criteria(
    family: KrausFamily, tol: FloatTol = "auto", witness_limit: int = 0
) -> Tuple[FloatIndependence, FloatIndependence, FloatIndependence]:
    """Gram, dual and bilinear tests in double precision."""
    ops = family.float_ops()
    gram = float_gram_system(ops)
    gram_result = float_row_independence(gram, tol, witness_limit)
    dual = float_dual_system(ops)
    dual_result = float_row_independence(dual, tol, witness_limit)
    bilinear_result = float_row_independence(np.hstack([gram, dual]), tol, witness_limit)
    return gram_result, dual_result, bilinear_result


def float_minimality(family: KrausFamily, tol: FloatTol = "auto") -> FloatIndependence:
    return float_row_independence(family.float_ops().reshape(family.size, -1), tol, witness_limit=family.size)


def choi_positivity(family: KrausFamily, tol: float = 1e-10) -> Tuple[bool, float, float]:
    """
    Float positivity check of J(Φ): smallest eigenvalue ≥ −tol·largest.

    :return: (passes, smallest eigenvalue, largest eigenvalue)
    """
    j = choi_matrix_float(family)
    eigs = sla.eigvalsh(j)
    lo, hi = float(eigs[0]), float(eigs[-1])
    return lo >= -tol * max(hi, 0.0), lo, hi


def witness_matrix(witness, n: int) -> List[list]:
    """Reshape a length-n² witness into the coefficient matrix a_ij."""
    return [list(witness[i * n:(i + 1) * n]) for i in range(n)]
