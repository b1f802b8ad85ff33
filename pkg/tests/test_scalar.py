import math
from fractions import Fraction

import pytest

from choisense.algebra.scalar import (
    IMAG,
    ONE,
    ZERO,
    RadScalar,
    is_squarefree,
    parse_scalar,
    scalar_inv,
    scalar_mul,
    squarefree_split,
    to_float,
)
from conftest import random_scalar

SQRT2 = RadScalar.sqrt(2)
SQRT3 = RadScalar.sqrt(3)


# ---------------------------------------------------------
# Canonical form
# ---------------------------------------------------------
def test_squarefree_split():
    assert squarefree_split(12) == (2, 3)
    assert squarefree_split(176) == (4, 11)
    assert squarefree_split(1) == (1, 1)
    assert squarefree_split(49) == (7, 1)
    with pytest.raises(ValueError):
        squarefree_split(0)


def test_constructor_normalizes_radicands_and_drops_zeros():
    x = RadScalar({8: (1, 0), 3: (0, 0)})
    assert x == RadScalar({2: (2, 0)})
    assert x.radicands == (2,)
    assert RadScalar({5: (0, 0)}).is_zero()
    assert RadScalar.sqrt(0) == ZERO


def test_every_stored_radicand_is_squarefree(rng):
    for _ in range(100):
        a, b = random_scalar(rng), random_scalar(rng)
        for rad, re, im in (a * b).terms():
            assert is_squarefree(rad)
            assert re or im


def test_sqrt_of_rational():
    assert RadScalar.sqrt(Fraction(9, 176)) == RadScalar({11: (Fraction(3, 44), 0)})
    assert RadScalar.sqrt(4) == 2
    with pytest.raises(ValueError):
        RadScalar.sqrt(-1)


# ---------------------------------------------------------
# Multiplication and inversion
# ---------------------------------------------------------
def test_scalar_mul_examples():
    assert scalar_mul(SQRT2, SQRT3) == RadScalar.sqrt(6)
    assert scalar_mul(SQRT2, SQRT2) == 2
    a = RadScalar({3: (1, 1)})
    b = RadScalar({3: (1, -1)})
    assert scalar_mul(a, b) == 6


def test_scalar_inv_examples():
    assert scalar_inv(SQRT2) == RadScalar.sqrt(Fraction(1, 2))
    assert scalar_inv(SQRT2 + SQRT3) == SQRT3 - SQRT2
    assert scalar_inv(RadScalar({11: (Fraction(4, 3), 0)})) == RadScalar({11: (Fraction(3, 44), 0)})
    assert scalar_inv(IMAG) == -IMAG


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        scalar_inv(ZERO)


def test_inverse_over_mixed_radicands(rng):
    for _ in range(100):
        a = random_scalar(rng, radicands=(1, 2, 3, 11))
        if a.is_zero():
            continue
        assert a * a.inverse() == ONE


def test_field_axioms(rng):
    for _ in range(100):
        a, b, c = random_scalar(rng), random_scalar(rng), random_scalar(rng)
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a - a == ZERO


def test_conjugate_and_division():
    x = RadScalar({3: (1, 2)})
    assert x.conjugate() == RadScalar({3: (1, -2)})
    assert (x * x.conjugate()).is_rational()
    assert x / x == ONE
    assert 1 / SQRT2 == RadScalar.sqrt(Fraction(1, 2))


# ---------------------------------------------------------
# Floats and text
# ---------------------------------------------------------
def test_to_float_examples():
    assert to_float(ZERO) == 0j
    assert to_float(SQRT2) == complex(math.sqrt(2), 0)
    z = to_float(RadScalar({1: (Fraction(1, 2), 0), 3: (0, Fraction(1, 2))}))
    assert z.real == pytest.approx(0.5)
    assert z.imag == pytest.approx(0.8660254037844386)


def test_to_float_is_multiplicative(rng):
    for _ in range(100):
        a, b = random_scalar(rng), random_scalar(rng)
        fa, fb = to_float(a), to_float(b)
        assert abs(to_float(a * b) - fa * fb) <= 1e-12 * (1 + abs(fa * fb))


def test_rendering():
    assert str(SQRT3 * IMAG) == "√3i"
    assert str(-(SQRT3 * IMAG)) == "-√3i"
    assert str(RadScalar.sqrt(8)) == "2√2"
    assert str(RadScalar.from_rational(Fraction(1, 2))) == "(1/2)"
    assert str(IMAG) == "i"
    assert str(ONE) == "1"
    assert str(ZERO) == "0"
    assert repr(SQRT3 - SQRT2) == "RadScalar('-√2+√3')"


def test_parse_scalar_reads_rendered_text(rng):
    assert parse_scalar("(-1/2+3i)√2") == RadScalar.gaussian(Fraction(-1, 2), 3) * SQRT2
    assert parse_scalar("(1/2)-√3i") == RadScalar.from_rational(Fraction(1, 2)) - SQRT3 * IMAG
    for _ in range(50):
        x = random_scalar(rng)
        assert parse_scalar(str(x)) == x
    for bad in ("", "1/2", "√", "2+", "x"):
        with pytest.raises(ValueError):
            parse_scalar(bad)


def test_as_rational():
    assert RadScalar.from_rational(Fraction(49, 44)).as_rational() == Fraction(49, 44)
    with pytest.raises(ValueError):
        SQRT2.as_rational()
