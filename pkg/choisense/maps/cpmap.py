"""
choisense.maps.cpmap
====================

Completely positive maps Φ: M(d_in) → M(d_out) presented by a rational
scale and Kraus operators V_j of shape d_in×d_out,

    Φ(X) = scale · Σ_j V_j* X V_j,       Φ*(Y) = scale · Σ_j V_j Y V_j*.

The scale is kept apart from the operators so entries stay small exact
radicals; rank-valued quantities never depend on it.

Public API
----------
KrausFamily, MarginalPair, StateBundle
apply, dual_apply, choi_matrix, choi_rank, marginals, is_minimal,
state_from_cpmap, as_state, identity_family, sum_products
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from choisense.algebra.linalg import (
    DenseMatrix,
    DimensionError,
    Independence,
    adjoint,
    matmul,
    partial_trace_left,
    partial_trace_right,
    rank_exact,
    rank_float,
    row_independence,
    stack_rows,
    to_float_matrix,
    trace,
    transpose,
    vectorize,
)
from choisense.algebra.scalar import ZERO, RadScalar


class NormalizationError(ValueError):
    """Raised when a family is not normalized as a state (trace Φ(I) ≠ 1)."""

    def __init__(self, computed_trace: RadScalar) -> None:
        super().__init__(f"state normalization requires trace(Φ(I)) = 1, got {computed_trace}")
        self.trace = computed_trace


@dataclass(frozen=True)
class KrausFamily:
    """
    A CP map given as ``scale · Σ Ad_{V_j}``.

    :param d_in: Input dimension d1.
    :param d_out: Output dimension d2.
    :param scale: Positive rational global factor.
    :param ops: Kraus operators, each d_in×d_out.
    :param label: Optional human-readable name.
    :raises DimensionError: If an operator has the wrong shape.
    :raises ValueError: If the family is empty or the scale is not positive.
    """

    d_in: int
    d_out: int
    scale: Fraction
    ops: Tuple[DenseMatrix, ...]
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "scale", Fraction(self.scale))
        object.__setattr__(self, "ops", tuple(self.ops))
        if not self.ops:
            raise ValueError("a Kraus family needs at least one operator")
        if self.scale <= 0:
            raise ValueError(f"Kraus family scale must be positive, got {self.scale}")
        for idx, op in enumerate(self.ops, start=1):
            if op.shape != (self.d_in, self.d_out):
                raise DimensionError(
                    f"operator {idx} has shape {op.rows}×{op.cols}, expected {self.d_in}×{self.d_out}"
                )

    @property
    def size(self) -> int:
        return len(self.ops)

    def __len__(self) -> int:
        return len(self.ops)

    def rescaled(self, factor: Union[int, Fraction]) -> "KrausFamily":
        return KrausFamily(self.d_in, self.d_out, self.scale * Fraction(factor), self.ops, self.label)

    def with_ops_scaled(self, factor: Union[int, Fraction]) -> "KrausFamily":
        """Multiply every operator (not the global scale) by a rational."""
        return KrausFamily(self.d_in, self.d_out, self.scale, tuple(op.scaled(Fraction(factor)) for op in self.ops), self.label)

    def all_hermitian(self) -> bool:
        return self.d_in == self.d_out and all(op.is_hermitian() for op in self.ops)

    def float_ops(self) -> np.ndarray:
        """Operators as a complex array of shape (n, d_in, d_out)."""
        return np.stack([to_float_matrix(op) for op in self.ops])


@dataclass(frozen=True)
class MarginalPair:
    """``left`` = Φ*(I_{d_out}) (d_in×d_in), ``right`` = Φ(I_{d_in}) (d_out×d_out)."""

    left: DenseMatrix
    right: DenseMatrix


@dataclass(frozen=True)
class StateBundle:
    rho: DenseMatrix
    rho1: DenseMatrix
    rho2: DenseMatrix
    marginals: MarginalPair


def family_from_ops(ops: Sequence[DenseMatrix], scale: Union[int, Fraction] = 1, label: str = "") -> KrausFamily:
    first = ops[0]
    return KrausFamily(first.rows, first.cols, Fraction(scale), tuple(ops), label)


def identity_family(d: int, scale: Union[int, Fraction] = 1) -> KrausFamily:
    """The identity map on M(d) (single Kraus operator I_d)."""
    return KrausFamily(d, d, Fraction(scale), (DenseMatrix.identity(d),), f"identity({d})")


def _sum(mats: Iterable[DenseMatrix], rows: int, cols: int) -> DenseMatrix:
    total = DenseMatrix.zeros(rows, cols)
    for m in mats:
        total = total + m
    return total


def apply(family: KrausFamily, x: DenseMatrix) -> DenseMatrix:
    """
    Φ(X) = scale·Σ V_j* X V_j.

    :raises DimensionError: If X is not d_in×d_in.
    """
    if x.shape != (family.d_in, family.d_in):
        raise DimensionError(f"apply expects a {family.d_in}×{family.d_in} input, got {x.rows}×{x.cols}")
    terms = (matmul(adjoint(v), matmul(x, v)) for v in family.ops)
    return _sum(terms, family.d_out, family.d_out).scaled(family.scale)


def dual_apply(family: KrausFamily, y: DenseMatrix) -> DenseMatrix:
    """
    Φ*(Y) = scale·Σ V_j Y V_j*.

    :raises DimensionError: If Y is not d_out×d_out.
    """
    if y.shape != (family.d_out, family.d_out):
        raise DimensionError(f"dual_apply expects a {family.d_out}×{family.d_out} input, got {y.rows}×{y.cols}")
    terms = (matmul(v, matmul(y, adjoint(v))) for v in family.ops)
    return _sum(terms, family.d_in, family.d_in).scaled(family.scale)


def choi_matrix(family: KrausFamily) -> DenseMatrix:
    """
    J(Φ) = Σ_{i,j} E_ij ⊗ Φ(E_ij), without a 1/d_in factor.

    Entry ((i,k),(j,l)) equals scale·Σ_V conj(V[i,k])·V[j,l], so J is the
    scaled sum of the rank-one matrices u·u* with u = conj(vec V).
    """
    n = family.d_in * family.d_out
    entries: List[RadScalar] = [ZERO] * (n * n)
    scale = RadScalar.from_rational(family.scale)
    for v in family.ops:
        support = [(idx, x.conjugate()) for idx, x in enumerate(v.entries) if x]
        for a, ua in support:
            ua = ua * scale
            for b, ub in support:
                entries[a * n + b] = entries[a * n + b] + ua * ub.conjugate()
    return DenseMatrix(n, n, entries)


def choi_rank(family: KrausFamily) -> int:
    return rank_exact(choi_matrix(family))


def choi_matrix_float(family: KrausFamily) -> np.ndarray:
    """Double-precision J(Φ), built from the operators without the exact matrix."""
    vecs = family.float_ops().reshape(family.size, -1).conj()
    return float(family.scale) * (vecs.T @ vecs.conj())


def choi_rank_float(family: KrausFamily, tol: Union[str, float] = "auto") -> int:
    return rank_float(choi_matrix_float(family), tol)


def marginals(family: KrausFamily) -> MarginalPair:
    return MarginalPair(
        left=dual_apply(family, DenseMatrix.identity(family.d_out)),
        right=apply(family, DenseMatrix.identity(family.d_in)),
    )


def is_minimal(family: KrausFamily) -> Independence:
    """Linear independence of the operators; witness on dependence."""
    return row_independence(stack_rows([vectorize(v) for v in family.ops]))


def as_state(family: KrausFamily) -> KrausFamily:
    """Rescale so that trace(Φ(I)) = 1."""
    t = trace(apply(family, DenseMatrix.identity(family.d_in)))
    if not t.is_rational() or t.as_rational() <= 0:
        raise NormalizationError(t)
    return family.rescaled(1 / t.as_rational())


def state_from_cpmap(family: KrausFamily) -> StateBundle:
    """
    The bipartite state ρ = J(Φ) with its marginals.

    Checks ρ₂ = Φ(I) and ρ₁ = (Φ*(I)*)ᵀ exactly.

    :raises NormalizationError: If trace(Φ(I)) ≠ 1.
    """
    pair = marginals(family)
    t = trace(pair.right)
    if t != 1:
        raise NormalizationError(t)
    rho = choi_matrix(family)
    rho1 = partial_trace_right(rho, family.d_in, family.d_out)
    rho2 = partial_trace_left(rho, family.d_in, family.d_out)
    if rho2 != pair.right:
        raise AssertionError("partial trace over the first factor differs from Φ(I)")
    if rho1 != transpose(adjoint(pair.left)):
        raise AssertionError("partial trace over the second factor differs from (Φ*(I)*)ᵀ")
    return StateBundle(rho, rho1, rho2, pair)


def sum_products(family: KrausFamily, dual: bool = False) -> DenseMatrix:
    """scale·Σ_{i,j} V_i*V_j, or scale·Σ_{i,j} V_jV_i* with ``dual=True``."""
    total = _sum(family.ops, family.d_in, family.d_out)
    if dual:
        return matmul(total, adjoint(total)).scaled(family.scale)
    return matmul(adjoint(total), total).scaled(family.scale)
