from fractions import Fraction

import numpy as np
import pytest

from choisense.algebra.linalg import (
    DenseMatrix,
    DimensionError,
    adjoint,
    matmul,
    matrix_unit,
    to_float_matrix,
    trace,
)
from choisense.catalog.families import (
    ohno_3x3_family,
    ohno_4x4_family,
    ohno_hermitian_family,
    three_to_four_family,
)
from choisense.maps.cpmap import (
    KrausFamily,
    NormalizationError,
    apply,
    as_state,
    choi_matrix,
    choi_matrix_float,
    choi_rank,
    choi_rank_float,
    dual_apply,
    family_from_ops,
    identity_family,
    is_minimal,
    marginals,
    state_from_cpmap,
)
from conftest import random_matrix


def _operator_sum(family, dual=False):
    total = DenseMatrix.zeros(family.d_in if dual else family.d_out)
    for v in family.ops:
        total = total + (matmul(v, adjoint(v)) if dual else matmul(adjoint(v), v))
    return total


# ---------------------------------------------------------
# Family validation
# ---------------------------------------------------------
def test_family_validation():
    with pytest.raises(ValueError):
        KrausFamily(2, 2, Fraction(1), ())
    with pytest.raises(ValueError):
        KrausFamily(2, 2, Fraction(0), (DenseMatrix.identity(2),))
    with pytest.raises(DimensionError):
        KrausFamily(2, 3, Fraction(1), (DenseMatrix.identity(2),))


def test_family_from_ops_reads_shape():
    f = family_from_ops([DenseMatrix.zeros(2, 3), matrix_unit(0, 1, 2, 3)], Fraction(1, 2))
    assert (f.d_in, f.d_out, f.size) == (2, 3, 2)


# ---------------------------------------------------------
# Φ and Φ*
# ---------------------------------------------------------
def test_apply_checks_input_shape():
    with pytest.raises(DimensionError):
        apply(ohno_3x3_family(), DenseMatrix.identity(4))
    with pytest.raises(DimensionError):
        dual_apply(three_to_four_family(), DenseMatrix.identity(3))


def test_ohno_3x3_on_e22():
    expected = DenseMatrix.from_rows([[2, 0, 0], [0, 0, 0], [0, 0, 2]]).scaled(Fraction(1, 4))
    assert apply(ohno_3x3_family(), matrix_unit(1, 1, 3)) == expected


def test_ohno_hermitian_is_unital():
    for d in (3, 4, 5):
        f = ohno_hermitian_family(d)
        assert apply(f, DenseMatrix.identity(d)) == DenseMatrix.identity(d)
        assert dual_apply(f, DenseMatrix.identity(d)) == DenseMatrix.identity(d)


def test_ohno_4x4_operator_sums():
    f = ohno_4x4_family()
    assert _operator_sum(f) == DenseMatrix.identity(4, 4)
    assert _operator_sum(f, dual=True) == DenseMatrix.identity(4, 4)


def test_duality_identity(rng):
    for _ in range(100):
        ops = [random_matrix(rng, 2, 3, radicands=(1, 2)) for _ in range(2)]
        f = family_from_ops(ops, Fraction(1, 3))
        x = random_matrix(rng, 2, radicands=(1, 3))
        y = random_matrix(rng, 3, radicands=(1, 3))
        assert trace(matmul(apply(f, x), y)) == trace(matmul(x, dual_apply(f, y)))


# ---------------------------------------------------------
# Choi matrix
# ---------------------------------------------------------
def test_choi_blocks_are_images_of_matrix_units():
    f = ohno_3x3_family()
    j = choi_matrix(f)
    for a in range(3):
        for b in range(3):
            image = apply(f, matrix_unit(a, b, 3))
            for k in range(3):
                for l in range(3):
                    assert j[a * 3 + k, b * 3 + l] == image[k, l]


def test_choi_rank_of_identity():
    assert choi_rank(identity_family(3)) == 1


def test_choi_trace_is_trace_of_image():
    f = three_to_four_family()
    assert trace(choi_matrix(f)) == trace(apply(f, DenseMatrix.identity(3)))


def test_choi_float_matches_exact():
    f = ohno_4x4_family()
    assert np.allclose(choi_matrix_float(f), to_float_matrix(choi_matrix(f)))
    assert choi_rank_float(f) == choi_rank(f) == 5


def test_scaling_operators_keeps_choi_rank():
    f = ohno_3x3_family()
    assert choi_rank(f.with_ops_scaled(3)) == choi_rank(f.rescaled(Fraction(1, 7))) == 4


# ---------------------------------------------------------
# Marginals and states
# ---------------------------------------------------------
def test_marginals_of_three_to_four():
    pair = marginals(three_to_four_family())
    assert pair.left == DenseMatrix.identity(3, Fraction(1, 3))
    assert pair.right == DenseMatrix.identity(4, Fraction(1, 4))


def test_state_from_cpmap_partial_traces():
    bundle = state_from_cpmap(three_to_four_family())
    assert bundle.rho2 == DenseMatrix.identity(4, Fraction(1, 4))
    assert bundle.rho1 == DenseMatrix.identity(3, Fraction(1, 3))
    assert trace(bundle.rho) == 1


def test_state_requires_unit_trace():
    with pytest.raises(NormalizationError) as info:
        state_from_cpmap(ohno_hermitian_family(3))
    assert info.value.trace == 3


def test_as_state_rescales():
    f = as_state(ohno_hermitian_family(3))
    assert f.scale == Fraction(1, 3)
    assert trace(state_from_cpmap(f).rho) == 1


def test_is_minimal():
    v = matrix_unit(0, 1, 2)
    assert not is_minimal(family_from_ops([v, v.scaled(2)])).independent
    assert is_minimal(ohno_4x4_family()).independent
