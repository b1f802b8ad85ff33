"""
Raw Kraus families of the catalog, built exactly.

Indices in the ``_units`` tables are 1-based (E_13 is written ``(1, 3)``)
so each table reads like the matrix-unit expansion it encodes. Scales are
kept apart from the operators.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Tuple

from choisense.algebra.linalg import DenseMatrix, matmul, transpose
from choisense.algebra.scalar import IMAG, RadScalar, ScalarLike
from choisense.maps.cpmap import KrausFamily

SQRT2 = RadScalar.sqrt(2)
SQRT3 = RadScalar.sqrt(3)

UnitTable = Dict[Tuple[int, int], ScalarLike]


def _units(rows: int, cols: int, table: UnitTable) -> DenseMatrix:
    """Σ c·E_ij over a 1-based ``{(i, j): c}`` table."""
    return DenseMatrix.from_sparse(rows, cols, {(i - 1, j - 1): c for (i, j), c in table.items()})


def _family(d_in: int, d_out: int, scale: Fraction, tables: List[UnitTable], label: str) -> KrausFamily:
    ops = tuple(_units(d_in, d_out, t) for t in tables)
    return KrausFamily(d_in, d_out, Fraction(scale), ops, label)


# ============================================================
# Square families
# ============================================================
def ohno_hermitian_family(d: int) -> KrausFamily:
    """
    Hermitian operators V_1 = √((d−2)/(d−1))·Σ_{j≥2} E_jj and
    V_k = (E_1k + E_k1)/√(d−1) for 2 ≤ k ≤ d, scale 1.

    :raises ValueError: If d < 3.
    """
    if d < 3:
        raise ValueError(f"ohno_hermitian requires d ≥ 3, got d={d}")
    diag = RadScalar.sqrt(Fraction(d - 2, d - 1))
    off = RadScalar.sqrt(Fraction(1, d - 1))
    tables: List[UnitTable] = [{(j, j): diag for j in range(2, d + 1)}]
    tables += [{(1, k): off, (k, 1): off} for k in range(2, d + 1)]
    return _family(d, d, Fraction(1), tables, f"ohno_hermitian({d})")


def ohno_3x3_family() -> KrausFamily:
    tables: List[UnitTable] = [
        {(1, 1): 1},
        {(1, 2): 1, (2, 3): SQRT2},
        {(2, 1): SQRT2, (3, 2): SQRT3},
        {(3, 1): 1, (1, 3): SQRT2},
    ]
    return _family(3, 3, Fraction(1, 4), tables, "ohno_3x3_rank4")


def ohno_4x4_family() -> KrausFamily:
    # Σ W_j*W_j = 4·I, hence the 1/4 scale over five operators
    tables: List[UnitTable] = [
        {(1, 3): 1, (3, 2): 1},
        {(2, 4): SQRT2, (4, 3): SQRT2},
        {(1, 4): SQRT2, (3, 1): SQRT3},
        {(2, 1): 1, (4, 2): SQRT2},
        {(1, 2): 1, (2, 3): 1},
    ]
    return _family(4, 4, Fraction(1, 4), tables, "ohno_4x4_rank5")


def five_rank6_family() -> KrausFamily:
    tables: List[UnitTable] = [
        {(1, 3): 1, (3, 2): 1},
        {(2, 4): 1, (4, 3): 1},
        {(3, 5): SQRT2, (5, 4): 1},
        {(1, 4): 1, (4, 2): 1},
        {(1, 5): 1, (4, 1): 1, (5, 3): 1},
        {(2, 1): SQRT2, (5, 2): 1},
    ]
    return _family(5, 5, Fraction(1, 3), tables, "five_rank6")


def five_rank7_family() -> KrausFamily:
    tables: List[UnitTable] = [
        {(1, 3): SQRT2, (3, 2): 1, (5, 4): 1},
        {(2, 4): 1, (4, 3): 1},
        {(3, 5): SQRT2, (5, 4): SQRT3},
        {(1, 4): 1, (4, 2): 1},
        {(1, 5): 1, (4, 1): 2, (5, 3): 1},
        {(2, 1): SQRT2, (5, 2): 1},
        {(1, 3): SQRT2, (3, 2): IMAG * SQRT3, (2, 5): SQRT3},
    ]
    return _family(5, 5, Fraction(1, 6), tables, "five_rank7")


# ============================================================
# Rectangular families
# ============================================================
def qubit_to_d_family(d: int) -> KrausFamily:
    """
    2×d operators W_1 = F_11 + F_23, W_2 = F_12 + F_21, W_3 = F_13 + F_22
    and W_r = F_1r + F_2r for r ≥ 4, scale 1/(2d).

    :raises ValueError: If d < 4.
    """
    if d < 4:
        raise ValueError(f"qubit_to_d requires d ≥ 4, got d={d}")
    tables: List[UnitTable] = [
        {(1, 1): 1, (2, 3): 1},
        {(1, 2): 1, (2, 1): 1},
        {(1, 3): 1, (2, 2): 1},
    ]
    tables += [{(1, r): 1, (2, r): 1} for r in range(4, d + 1)]
    return _family(2, d, Fraction(1, 2 * d), tables, f"qubit_to_d({d})")


def cyclic_family(d: int) -> KrausFamily:
    """
    d×(d+1) operators whose column sequences are the cyclic right shifts of
    [e_1, …, e_d, 0]; W_j is the shift by j−1. Scale 1/(d²+d).

    :raises ValueError: If d < 2.
    """
    if d < 2:
        raise ValueError(f"cyclic_d_to_d_plus_1 requires d ≥ 2, got d={d}")
    # column c of the unshifted operator holds e_{c+1}, the last column is zero
    base = list(range(1, d + 1)) + [None]
    tables: List[UnitTable] = []
    for shift in range(d + 1):
        table: UnitTable = {}
        for c in range(d + 1):
            row = base[(c - shift) % (d + 1)]
            if row is not None:
                table[(row, c + 1)] = 1
        tables.append(table)
    return _family(d, d + 1, Fraction(1, d * d + d), tables, f"cyclic_d_to_d_plus_1({d})")


def three_to_four_family() -> KrausFamily:
    tables: List[UnitTable] = [
        {(1, 1): 1, (2, 2): 1, (3, 3): 1},
        {(1, 2): 1, (2, 3): 1, (3, 4): 1},
        {(3, 1): 1, (1, 3): 1, (2, 4): 1},
        {(2, 1): 1, (3, 2): 1, (1, 4): 1},
    ]
    return _family(3, 4, Fraction(1, 12), tables, "three_to_four")


# ============================================================
# Tensor-product counterexample factor
# ============================================================
REMARK_W = DenseMatrix.from_rows(
    [
        [Fraction(8, 21), Fraction(-11, 21), Fraction(16, 21)],
        [Fraction(-19, 21), Fraction(-8, 21), Fraction(4, 21)],
        [Fraction(-4, 21), Fraction(16, 21), Fraction(13, 21)],
    ]
)

# 3/(4√11) = (3/44)√11
REMARK_COEFFICIENT = RadScalar.sqrt(Fraction(9, 176))


def cyclic_shift(d: int) -> DenseMatrix:
    """S = Σ_{k<d} E_{k,k+1} + E_{d,1}."""
    table: UnitTable = {(k, k + 1): 1 for k in range(1, d)}
    table[(d, 1)] = 1
    return _units(d, d, table)


def remark_family() -> KrausFamily:
    """
    V_j = c·(S^j)ᵀ·diag(−13/3, W)·S^j for j = 1..4, with c = 3/(4√11) and
    S the cyclic shift on ℂ⁴. Scale 1.
    """
    core: UnitTable = {(1, 1): Fraction(-13, 3)}
    for i in range(3):
        for j in range(3):
            core[(i + 2, j + 2)] = REMARK_W[i, j]
    block = _units(4, 4, core).scaled(REMARK_COEFFICIENT)
    shift = cyclic_shift(4)
    power = DenseMatrix.identity(4)
    ops = []
    for _ in range(4):
        power = matmul(power, shift)
        ops.append(matmul(transpose(power), matmul(block, power)))
    return KrausFamily(4, 4, Fraction(1), tuple(ops), "remark_counterexample")
