from fractions import Fraction

import pytest

from choisense.algebra.linalg import DenseMatrix, adjoint, matmul, matrix_unit, transpose
from choisense.algebra.scalar import IMAG, RadScalar
from choisense.catalog import cases
from choisense.catalog.case import VERDICTS, Expected
from choisense.catalog.families import (
    REMARK_W,
    cyclic_family,
    cyclic_shift,
    five_rank6_family,
    five_rank7_family,
    ohno_hermitian_family,
    qubit_to_d_family,
    three_to_four_family,
)
from choisense.catalog.registry import report_ids, resolve_case
from choisense.certify.certificate import verify_case
from choisense.maps.cpmap import marginals

BASE_IDS = [cid for cid in report_ids() if not cid.startswith("tensor:")]


def _operator_sum(family):
    total = DenseMatrix.zeros(family.d_out)
    for v in family.ops:
        total = total + matmul(adjoint(v), v)
    return total


# ---------------------------------------------------------
# Every base case matches its claims
# ---------------------------------------------------------
@pytest.mark.parametrize("case_id", BASE_IDS)
def test_case_verifies(case_id):
    report = verify_case(resolve_case(case_id))
    assert report.passed, report.mismatches
    assert report.certificate.mode == "exact"


@pytest.mark.parametrize("case_id", BASE_IDS)
def test_claimed_rank_equals_family_size(case_id):
    case = resolve_case(case_id)
    assert case.expected.choi_rank == case.family.size
    assert case.id == case_id


@pytest.mark.parametrize(
    "case_id, choi_rank, bound, verdict",
    [
        ("five_rank6", 6, 7, "extreme-doubly-constrained"),
        ("five_rank7", 7, 7, "extreme-doubly-constrained"),
        ("ohno_3x3_rank4", 4, 4, "extreme-doubly-constrained"),
        ("ohno_4x4_rank5", 5, 5, "extreme-doubly-constrained"),
        ("ohno_hermitian(3)", 3, 4, "extreme-unital-set"),
        ("ohno_hermitian(4)", 4, 5, "extreme-unital-set"),
        ("ohno_hermitian(5)", 5, 7, "extreme-unital-set"),
        ("three_to_four", 4, 4, "extreme-unital-set"),
        ("remark_counterexample", 4, 5, "extreme-unital-set"),
    ],
)
def test_headline_triples(case_id, choi_rank, bound, verdict):
    cert = verify_case(resolve_case(case_id)).certificate
    assert (cert.choi_rank, cert.bound, cert.verdict) == (choi_rank, bound, verdict)


# ---------------------------------------------------------
# Constructors
# ---------------------------------------------------------
def test_parameter_ranges():
    with pytest.raises(ValueError):
        cases.ohno_hermitian(2)
    with pytest.raises(ValueError):
        cases.qubit_to_d(3)
    with pytest.raises(ValueError):
        cases.cyclic_d_to_d_plus_1(1)


def test_ohno_hermitian_operators_are_hermitian():
    f = ohno_hermitian_family(5)
    assert f.all_hermitian()
    assert f.ops[0][0, 0] == 0
    assert f.ops[0][1, 1] == RadScalar.sqrt(Fraction(3, 4))


def test_five_rank7_operators():
    f = five_rank7_family()
    assert _operator_sum(f) == DenseMatrix.identity(5, 6)
    assert adjoint(f.ops[6])[1, 2] == -(RadScalar.sqrt(3) * IMAG)
    w2 = f.ops[1]
    assert matmul(adjoint(w2), w2) == matrix_unit(2, 2, 5) + matrix_unit(3, 3, 5)


def test_five_rank6_first_operator():
    w1 = five_rank6_family().ops[0]
    assert matmul(adjoint(w1), w1) == matrix_unit(2, 2, 5) + matrix_unit(1, 1, 5)


def test_qubit_to_d_marginals():
    for d in (4, 5, 6, 8):
        pair = marginals(qubit_to_d_family(d))
        off = Fraction(d - 3, 2 * d)
        assert pair.left == DenseMatrix.from_rows([[Fraction(1, 2), off], [off, Fraction(1, 2)]])
        assert pair.right == DenseMatrix.identity(d, Fraction(1, d))
    z = marginals(qubit_to_d_family(4)).left
    assert z == DenseMatrix.from_rows([[1, Fraction(1, 4)], [Fraction(1, 4), 1]]).scaled(Fraction(1, 2))


def test_cyclic_marginals():
    for d in range(2, 7):
        pair = marginals(cyclic_family(d))
        assert pair.left == DenseMatrix.identity(d, Fraction(1, d))
        assert pair.right == DenseMatrix.identity(d + 1, Fraction(1, d + 1))


def test_cyclic_three_is_three_to_four():
    assert cyclic_family(3).ops == three_to_four_family().ops
    assert cyclic_family(3).scale == three_to_four_family().scale


def test_cyclic_note_only_for_inferred_instances():
    assert cases.cyclic_d_to_d_plus_1(3).notes == []
    assert cases.cyclic_d_to_d_plus_1(5).notes == [cases.CYCLIC_PATTERN_NOTE]


def test_ohno_4x4_carries_scale_note():
    case = cases.ohno_4x4_rank5()
    assert case.notes == [cases.OHNO_4X4_SCALE_NOTE]
    assert case.family.scale == Fraction(1, 4)
    assert case.family.size == 5


def test_remark_ingredients():
    assert matmul(REMARK_W, transpose(REMARK_W)) == DenseMatrix.identity(3)
    s = cyclic_shift(4)
    power = DenseMatrix.identity(4)
    for _ in range(4):
        power = matmul(power, s)
    assert power == DenseMatrix.identity(4)


def test_remark_marginals():
    pair = marginals(cases.remark_counterexample().family)
    assert pair.left == pair.right == DenseMatrix.identity(4, Fraction(49, 44))


def test_expected_rejects_unknown_verdict():
    assert len(VERDICTS) == 4
    assert cases.five_rank7().expected.verdict in VERDICTS
    with pytest.raises(ValueError, match="unknown verdict"):
        Expected(choi_rank=7, bound=7, verdict="extreme")
