"""
choisense.algebra.linalg
========================

Immutable dense matrices over :class:`RadScalar` and the operations the
certification layer consumes: products, adjoints, Kronecker products,
traces, partial traces, vectorization and exact / floating-point rank.

Tensor indices follow the lexicographic order (i, k) ↦ i·d2 + k, so that
block (i, j) of ``kron(A, B)`` is ``A[i, j]·B``.

Exact elimination keeps rows as sparse ``{column: value}`` maps while it
runs. Storage stays dense; only the elimination trace is sparse.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg as sla

from choisense.algebra.scalar import ONE, ZERO, RadScalar, ScalarLike

FloatMatrix = np.ndarray
SparseRow = Dict[int, RadScalar]


class DimensionError(ValueError):
    """Raised when matrix shapes are incompatible with an operation."""


class DenseMatrix:
    """
    Row-major rows×cols matrix of :class:`RadScalar`.

    :param rows: Number of rows (≥ 1).
    :param cols: Number of columns (≥ 1).
    :param entries: Row-major entries, ``rows·cols`` of them.
    :raises DimensionError: If the entry count does not match the shape.
    """

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable[ScalarLike]) -> None:
        if rows < 1 or cols < 1:
            raise DimensionError(f"matrix shape must be positive, got {rows}×{cols}")
        values = tuple(RadScalar.coerce(e) for e in entries)
        if len(values) != rows * cols:
            raise DimensionError(f"expected {rows * cols} entries for a {rows}×{cols} matrix, got {len(values)}")
        self.rows = rows
        self.cols = cols
        self.entries: Tuple[RadScalar, ...] = values
        self._hash: Optional[int] = None

    # --- constructors ---------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: Optional[int] = None) -> "DenseMatrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, [ZERO] * (rows * cols))

    @classmethod
    def identity(cls, n: int, scale: ScalarLike = 1) -> "DenseMatrix":
        s = RadScalar.coerce(scale)
        return cls(n, n, [s if i == j else ZERO for i in range(n) for j in range(n)])

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[ScalarLike]]) -> "DenseMatrix":
        if not rows:
            raise DimensionError("from_rows needs at least one row")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionError("ragged rows in from_rows")
        return cls(len(rows), width, [x for r in rows for x in r])

    @classmethod
    def from_sparse(cls, rows: int, cols: int, values: Dict[Tuple[int, int], ScalarLike]) -> "DenseMatrix":
        """Build from a ``{(i, j): value}`` map with 0-based indices."""
        entries: List[RadScalar] = [ZERO] * (rows * cols)
        for (i, j), v in values.items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise DimensionError(f"index ({i}, {j}) outside a {rows}×{cols} matrix")
            entries[i * cols + j] = entries[i * cols + j] + RadScalar.coerce(v)
        return cls(rows, cols, entries)

    # --- access ---------------------------------------------------------
    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, index: Tuple[int, int]) -> RadScalar:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[RadScalar, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def nonzero(self) -> Iterable[Tuple[int, int, RadScalar]]:
        cols = self.cols
        for idx, v in enumerate(self.entries):
            if v:
                yield idx // cols, idx % cols, v

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_hermitian(self) -> bool:
        return self.is_square() and self == adjoint(self)

    # --- algebra --------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.entries))
        return self._hash

    def __add__(self, other: "DenseMatrix") -> "DenseMatrix":
        _require_same_shape(self, other, "add")
        return DenseMatrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "DenseMatrix") -> "DenseMatrix":
        _require_same_shape(self, other, "subtract")
        return DenseMatrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "DenseMatrix":
        return DenseMatrix(self.rows, self.cols, [-a for a in self.entries])

    def __matmul__(self, other: "DenseMatrix") -> "DenseMatrix":
        return matmul(self, other)

    def scaled(self, factor: ScalarLike) -> "DenseMatrix":
        s = RadScalar.coerce(factor)
        if s == ONE:
            return self
        return DenseMatrix(self.rows, self.cols, [s * a for a in self.entries])

    def to_numpy(self) -> FloatMatrix:
        return to_float_matrix(self)

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"DenseMatrix({self.rows}×{self.cols}: [{body}])"


def _require_same_shape(a: DenseMatrix, b: DenseMatrix, op: str) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"cannot {op} {a.rows}×{a.cols} and {b.rows}×{b.cols} matrices")


def matrix_unit(i: int, j: int, rows: int, cols: Optional[int] = None) -> DenseMatrix:
    """E_ij with 0-based indices."""
    cols = rows if cols is None else cols
    return DenseMatrix.from_sparse(rows, cols, {(i, j): ONE})


def matmul(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    """
    Exact product ``a @ b``; zero entries are skipped.

    :raises DimensionError: If ``a.cols != b.rows``.
    """
    if a.cols != b.rows:
        raise DimensionError(f"matmul shape mismatch: {a.rows}×{a.cols} @ {b.rows}×{b.cols}")
    b_rows: List[List[Tuple[int, RadScalar]]] = [[] for _ in range(b.rows)]
    for k, j, v in b.nonzero():
        b_rows[k].append((j, v))
    out: List[RadScalar] = [ZERO] * (a.rows * b.cols)
    for i, k, x in a.nonzero():
        base = i * b.cols
        for j, y in b_rows[k]:
            out[base + j] = out[base + j] + x * y
    return DenseMatrix(a.rows, b.cols, out)


def transpose(a: DenseMatrix) -> DenseMatrix:
    return DenseMatrix(a.cols, a.rows, [a[i, j] for j in range(a.cols) for i in range(a.rows)])


def adjoint(a: DenseMatrix) -> DenseMatrix:
    """Conjugate transpose."""
    return DenseMatrix(a.cols, a.rows, [a[i, j].conjugate() for j in range(a.cols) for i in range(a.rows)])


def kron(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    """Kronecker product in lexicographic basis order: block (i, j) is a[i, j]·b."""
    rows, cols = a.rows * b.rows, a.cols * b.cols
    out: List[RadScalar] = [ZERO] * (rows * cols)
    b_nz = list(b.nonzero())
    for i, j, x in a.nonzero():
        for k, l, y in b_nz:
            out[(i * b.rows + k) * cols + j * b.cols + l] = x * y
    return DenseMatrix(rows, cols, out)


def trace(a: DenseMatrix) -> RadScalar:
    """
    :raises DimensionError: If ``a`` is not square.
    """
    if not a.is_square():
        raise DimensionError(f"trace of a non-square {a.rows}×{a.cols} matrix")
    total = ZERO
    for i in range(a.rows):
        total = total + a[i, i]
    return total


def _check_bipartite(z: DenseMatrix, d1: int, d2: int) -> None:
    n = d1 * d2
    if z.shape != (n, n):
        raise DimensionError(f"expected a {n}×{n} matrix for dims ({d1}, {d2}), got {z.rows}×{z.cols}")


def partial_trace_right(z: DenseMatrix, d1: int, d2: int) -> DenseMatrix:
    """Trace out the second factor: result[i, j] = Σ_k z[i·d2+k, j·d2+k]."""
    _check_bipartite(z, d1, d2)
    out: List[RadScalar] = []
    for i in range(d1):
        for j in range(d1):
            s = ZERO
            for k in range(d2):
                s = s + z[i * d2 + k, j * d2 + k]
            out.append(s)
    return DenseMatrix(d1, d1, out)


def partial_trace_left(z: DenseMatrix, d1: int, d2: int) -> DenseMatrix:
    """Trace out the first factor: result[i, j] = Σ_k z[k·d2+i, k·d2+j]."""
    _check_bipartite(z, d1, d2)
    out: List[RadScalar] = []
    for i in range(d2):
        for j in range(d2):
            s = ZERO
            for k in range(d1):
                s = s + z[k * d2 + i, k * d2 + j]
            out.append(s)
    return DenseMatrix(d2, d2, out)


def vectorize(a: DenseMatrix) -> DenseMatrix:
    """Row-major flattening into a 1×(rows·cols) row vector."""
    return DenseMatrix(1, a.rows * a.cols, a.entries)


def stack_rows(vectors: Sequence[DenseMatrix]) -> DenseMatrix:
    """Stack 1×n row vectors (or flattened matrices) into a matrix."""
    if not vectors:
        raise DimensionError("stack_rows needs at least one vector")
    width = len(vectors[0].entries)
    if any(len(v.entries) != width for v in vectors):
        raise DimensionError("stack_rows got vectors of different lengths")
    return DenseMatrix(len(vectors), width, [x for v in vectors for x in v.entries])


def hstack(left: DenseMatrix, right: DenseMatrix) -> DenseMatrix:
    if left.rows != right.rows:
        raise DimensionError(f"hstack row mismatch: {left.rows} vs {right.rows}")
    out: List[RadScalar] = []
    for i in range(left.rows):
        out.extend(left.row(i))
        out.extend(right.row(i))
    return DenseMatrix(left.rows, left.cols + right.cols, out)


# ============================================================
# Exact elimination
# ============================================================
def _sparse_rows(a: DenseMatrix) -> List[SparseRow]:
    return [{j: v for j, v in enumerate(a.row(i)) if v} for i in range(a.rows)]


def _row_echelon(rows: List[SparseRow], ncols: int, reduced: bool = False) -> Tuple[List[SparseRow], List[int]]:
    """
    Gaussian elimination over the scalar field.

    The pivot of each column is the first remaining row with a nonzero
    entry there. Pivot rows are normalized to a leading 1. With
    ``reduced=True`` entries above the pivots are cleared as well.

    :return: The nonzero echelon rows and their pivot columns.
    """
    work = [dict(r) for r in rows]
    n = len(work)
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == n:
            break
        found = next((k for k in range(r, n) if c in work[k]), None)
        if found is None:
            continue
        work[r], work[found] = work[found], work[r]
        inv = work[r][c].inverse()
        prow = {col: val * inv for col, val in work[r].items()}
        prow[c] = ONE
        work[r] = prow
        for k in range(0 if reduced else r + 1, n):
            if k == r:
                continue
            f = work[k].get(c)
            if f is None:
                continue
            row = work[k]
            for col, val in prow.items():
                updated = row.get(col, ZERO) - f * val
                if updated:
                    row[col] = updated
                else:
                    row.pop(col, None)
        pivots.append(c)
        r += 1
    return work[:r], pivots


def rank_exact(a: DenseMatrix) -> int:
    """Exact rank over ℚ(i, √m₁, …), equal to the rank over ℂ."""
    _, pivots = _row_echelon(_sparse_rows(a), a.cols)
    return len(pivots)


def null_space(a: DenseMatrix) -> List[Tuple[RadScalar, ...]]:
    """
    Basis of {x : a·x = 0}, one vector per free column in increasing order.

    Each basis vector sets its free column to 1, the other free columns to
    0 and solves for the pivot columns by back-substitution on the reduced
    echelon form.
    """
    echelon, pivots = _row_echelon(_sparse_rows(a), a.cols, reduced=True)
    pivot_set = set(pivots)
    basis: List[Tuple[RadScalar, ...]] = []
    for free in range(a.cols):
        if free in pivot_set:
            continue
        x = [ZERO] * a.cols
        x[free] = ONE
        for row, p in zip(echelon, pivots):
            v = row.get(free)
            if v is not None:
                x[p] = -v
        basis.append(tuple(x))
    return basis


def null_vector(a: DenseMatrix) -> Optional[Tuple[RadScalar, ...]]:
    """First null-space basis vector (first free column), or None."""
    basis = null_space(a)
    return basis[0] if basis else None


def left_null_vector(a: DenseMatrix) -> Optional[Tuple[RadScalar, ...]]:
    """A nonzero coefficient vector c with Σ_r c_r·row_r(a) = 0, or None."""
    return null_vector(transpose(a))


def combine_rows(a: DenseMatrix, coefficients: Sequence[RadScalar]) -> Tuple[RadScalar, ...]:
    """Σ_r coefficients[r]·row_r(a), used to re-substitute witnesses."""
    if len(coefficients) != a.rows:
        raise DimensionError(f"need {a.rows} coefficients, got {len(coefficients)}")
    out = [ZERO] * a.cols
    for r, c in enumerate(coefficients):
        if not c:
            continue
        for j, v in enumerate(a.row(r)):
            if v:
                out[j] = out[j] + c * v
    return tuple(out)


@dataclass(frozen=True)
class Independence:
    """Outcome of a linear-independence test on the rows of a system."""

    independent: bool
    rank: int
    size: int
    witness: Optional[Tuple[RadScalar, ...]] = None


def row_independence(system: DenseMatrix, with_witness: bool = True) -> Independence:
    """
    Test whether the rows of ``system`` are linearly independent.

    :param system: One row per vector.
    :param with_witness: Solve for a dependence vector when dependent.
    :return: Rank, verdict and, on dependence, a nonzero left null vector.
    :rtype: Independence
    """
    rank = rank_exact(system)
    if rank == system.rows:
        return Independence(True, rank, system.rows)
    witness = left_null_vector(system) if with_witness else None
    return Independence(False, rank, system.rows, witness)


# ============================================================
# Float path
# ============================================================
def to_float_matrix(a: DenseMatrix) -> FloatMatrix:
    out = np.zeros((a.rows, a.cols), dtype=np.complex128)
    for i, j, v in a.nonzero():
        out[i, j] = v.to_float()
    return out


def resolve_tolerance(singular_values: np.ndarray, shape: Tuple[int, int], tol: Union[str, float]) -> float:
    if tol == "auto":
        largest = float(singular_values[0]) if singular_values.size else 0.0
        return max(shape) * np.finfo(np.float64).eps * largest
    tol = float(tol)
    if tol < 0:
        raise ValueError(f"rank tolerance must be nonnegative, got {tol}")
    return tol


def rank_float(a: Union[FloatMatrix, DenseMatrix], tol: Union[str, float] = "auto") -> int:
    """
    Numerical rank: singular values above ``tol``.

    ``"auto"`` uses max(rows, cols)·eps·σ_max.
    """
    m = to_float_matrix(a) if isinstance(a, DenseMatrix) else np.asarray(a)
    if m.size == 0:
        return 0
    s = sla.svdvals(m)
    return int(np.count_nonzero(s > resolve_tolerance(s, m.shape, tol)))


def float_left_null_vector(a: FloatMatrix, tol: Union[str, float] = "auto") -> Optional[np.ndarray]:
    """Numerical counterpart of :func:`left_null_vector`."""
    m = np.asarray(a)
    u, s, _ = sla.svd(m, full_matrices=True)
    cutoff = resolve_tolerance(s, m.shape, tol)
    rank = int(np.count_nonzero(s > cutoff))
    if rank == m.shape[0]:
        return None
    # columns of u beyond the rank span the left null space
    return u[:, rank].conj()
