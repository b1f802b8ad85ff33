"""
choisense.catalog.cases
=======================

Named catalog cases: a Kraus family together with the properties claimed
for it (Choi rank, rank bound, verdict, marginals). ``verify_case`` diffs
these claims against a fresh certificate.

Public API
----------
ohno_hermitian(d), ohno_3x3_rank4(), ohno_4x4_rank5(), five_rank6(),
five_rank7(), qubit_to_d(d), three_to_four(), cyclic_d_to_d_plus_1(d),
remark_counterexample()
"""

from __future__ import annotations

from fractions import Fraction

from choisense.algebra.linalg import DenseMatrix
from choisense.catalog.case import CatalogCase, Expected
from choisense.catalog.families import (
    cyclic_family,
    five_rank6_family,
    five_rank7_family,
    ohno_3x3_family,
    ohno_4x4_family,
    ohno_hermitian_family,
    qubit_to_d_family,
    remark_family,
    three_to_four_family,
)
from choisense.certify.criteria import parthasarathy_bound
from choisense.maps.cpmap import MarginalPair

OHNO_4X4_SCALE_NOTE = (
    "normalization: the printed prefactor reads 1/5 with a sum over four "
    "operators; five operators with scale 1/4 are used since Σ W_j*W_j = 4·I"
)
CYCLIC_PATTERN_NOTE = (
    "operators W_j for 3 < j ≤ d are inferred as cyclic shifts of the column "
    "sequence [e_1, …, e_d, 0]; the d = 3 instance matches three_to_four"
)
REMARK_SUM_NOTE = (
    "Σ_{i,j} V_i*V_j and Σ_{i,j} V_jV_i* are compared against I_4 exactly; "
    "see sum_identity_check for the outcome"
)


def _scaled_identity(n: int, q: Fraction) -> DenseMatrix:
    return DenseMatrix.identity(n, q)


def _unital(d: int) -> MarginalPair:
    return MarginalPair(DenseMatrix.identity(d), DenseMatrix.identity(d))


def ohno_hermitian(d: int) -> CatalogCase:
    """
    Hermitian extreme unital channel on M(d) with Choi rank d.

    :param d: Dimension, at least 3.
    :raises ValueError: If d < 3.
    """
    return CatalogCase(
        id=f"ohno_hermitian({d})",
        params={"d": d},
        family=ohno_hermitian_family(d),
        expected=Expected(
            choi_rank=d,
            bound=parthasarathy_bound(d, d),
            verdict="extreme-unital-set",
            marginals=_unital(d),
            hermitian_ops=True,
            gram_independent=True,
        ),
    )


def ohno_3x3_rank4() -> CatalogCase:
    return CatalogCase(
        id="ohno_3x3_rank4",
        params={},
        family=ohno_3x3_family(),
        expected=Expected(
            choi_rank=4,
            bound=4,
            verdict="extreme-doubly-constrained",
            marginals=_unital(3),
            gram_independent=False,
            bilinear_independent=True,
        ),
    )


def ohno_4x4_rank5() -> CatalogCase:
    return CatalogCase(
        id="ohno_4x4_rank5",
        params={},
        family=ohno_4x4_family(),
        expected=Expected(
            choi_rank=5,
            bound=5,
            verdict="extreme-doubly-constrained",
            marginals=_unital(4),
            gram_independent=False,
            bilinear_independent=True,
        ),
        notes=[OHNO_4X4_SCALE_NOTE],
    )


def five_rank6() -> CatalogCase:
    return CatalogCase(
        id="five_rank6",
        params={},
        family=five_rank6_family(),
        expected=Expected(
            choi_rank=6,
            bound=7,
            verdict="extreme-doubly-constrained",
            marginals=_unital(5),
            bilinear_independent=True,
        ),
    )


def five_rank7() -> CatalogCase:
    return CatalogCase(
        id="five_rank7",
        params={},
        family=five_rank7_family(),
        expected=Expected(
            choi_rank=7,
            bound=7,
            verdict="extreme-doubly-constrained",
            marginals=_unital(5),
            bilinear_independent=True,
        ),
    )


def qubit_to_d(d: int) -> CatalogCase:
    """
    Map M(2) → M(d) whose left marginal is
    Z = ½·[[1, (d−3)/d], [(d−3)/d, 1]] and right marginal I_d/d.

    :raises ValueError: If d < 4.
    """
    off = Fraction(d - 3, 2 * d)
    z = DenseMatrix.from_rows([[Fraction(1, 2), off], [off, Fraction(1, 2)]])
    return CatalogCase(
        id=f"qubit_to_d({d})",
        params={"d": d},
        family=qubit_to_d_family(d),
        expected=Expected(
            choi_rank=d,
            bound=parthasarathy_bound(2, d),
            verdict="extreme-unital-set",
            marginals=MarginalPair(z, _scaled_identity(d, Fraction(1, d))),
            gram_independent=True,
        ),
    )


def three_to_four() -> CatalogCase:
    return CatalogCase(
        id="three_to_four",
        params={},
        family=three_to_four_family(),
        expected=Expected(
            choi_rank=4,
            bound=4,
            verdict="extreme-unital-set",
            marginals=MarginalPair(_scaled_identity(3, Fraction(1, 3)), _scaled_identity(4, Fraction(1, 4))),
            gram_independent=True,
        ),
    )


def cyclic_d_to_d_plus_1(d: int) -> CatalogCase:
    """
    Map M(d) → M(d+1) with Choi rank d+1 and marginals (I_d/d, I_{d+1}/(d+1)).

    For a fixed shift s the products W_a*W_{a+s} are the shift matrix P_s
    with one unit removed, so {W_i*W_j} is independent for every d.

    :raises ValueError: If d < 2.
    """
    family = cyclic_family(d)
    return CatalogCase(
        id=f"cyclic_d_to_d_plus_1({d})",
        params={"d": d},
        family=family,
        expected=Expected(
            choi_rank=d + 1,
            bound=parthasarathy_bound(d, d + 1),
            verdict="extreme-unital-set",
            marginals=MarginalPair(
                _scaled_identity(d, Fraction(1, d)),
                _scaled_identity(d + 1, Fraction(1, d + 1)),
            ),
            gram_independent=True,
        ),
        notes=[CYCLIC_PATTERN_NOTE] if d > 3 else [],
    )


def remark_counterexample() -> CatalogCase:
    """
    Four non-Hermitian operators on M(4) with {V_i*V_j} independent and
    {V_jV_i*} dependent. Both marginals equal (49/44)·I_4.
    """
    marginal = _scaled_identity(4, Fraction(49, 44))
    return CatalogCase(
        id="remark_counterexample",
        params={},
        family=remark_family(),
        expected=Expected(
            choi_rank=4,
            bound=5,
            verdict="extreme-unital-set",
            marginals=MarginalPair(marginal, marginal),
            gram_independent=True,
            dual_gram_independent=False,
        ),
        notes=[REMARK_SUM_NOTE],
    )
