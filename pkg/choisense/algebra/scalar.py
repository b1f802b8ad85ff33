"""
choisense.algebra.scalar
========================

Exact numbers of the form Σ (a + b·i)·√m with a, b rational and m a
squarefree positive integer, i.e. elements of the multi-quadratic
extensions ℚ(i, √m₁, …, √mₖ) of the Gaussian rationals.

Every Kraus entry used by the catalog (√2, √3, i√3, 3/(4√11), −13/3, …)
lives in one of these fields, so all matrix arithmetic in choisense is
exact and equality tests are structural.

Usage
-----
>>> from choisense.algebra.scalar import RadScalar
>>> RadScalar.sqrt(2) * RadScalar.sqrt(3)
RadScalar('√6')
>>> (RadScalar.sqrt(2) + RadScalar.sqrt(3)).inverse()
RadScalar('-√2+√3')
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, Mapping, Optional, Tuple, Union

Coefficient = Tuple[Fraction, Fraction]
ScalarLike = Union["RadScalar", int, Fraction]

_ZERO_Q = Fraction(0)


@lru_cache(maxsize=4096)
def squarefree_split(n: int) -> Tuple[int, int]:
    """
    Split a positive integer as n = c²·m with m squarefree.

    :param n: Positive integer.
    :type n: int
    :return: The pair (c, m).
    :rtype: tuple[int, int]
    :raises ValueError: If n is not positive.
    """
    if n <= 0:
        raise ValueError(f"squarefree_split expects a positive integer, got {n}")
    c, m, rest, p = 1, 1, n, 2
    while p * p <= rest:
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        if e:
            c *= p ** (e // 2)
            if e % 2:
                m *= p
        p += 1 if p == 2 else 2
    return c, m * rest


def is_squarefree(m: int) -> bool:
    return m > 0 and squarefree_split(m)[1] == m


@lru_cache(maxsize=4096)
def smallest_prime_factor(m: int) -> int:
    if m < 2:
        raise ValueError(f"{m} has no prime factor")
    p = 2
    while p * p <= m:
        if m % p == 0:
            return p
        p += 1 if p == 2 else 2
    return m


def _radical_product(ra: int, rb: int) -> Tuple[int, int]:
    # √a·√b = c·√m for squarefree a, b
    if ra == 1:
        return 1, rb
    if rb == 1:
        return 1, ra
    if ra == rb:
        return ra, 1
    g = math.gcd(ra, rb)
    return g, (ra // g) * (rb // g)


def _accumulate(terms: Dict[int, Coefficient], rad: int, re: Fraction, im: Fraction) -> None:
    if rad in terms:
        old_re, old_im = terms[rad]
        re, im = old_re + re, old_im + im
    if re or im:
        terms[rad] = (re, im)
    else:
        terms.pop(rad, None)


def _fmt_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"({q.numerator}/{q.denominator})"


class RadScalar:
    """
    An exact element of ℚ(i, √m₁, …, √mₖ).

    Internally a map ``radicand -> (re, im)`` meaning Σ (re + im·i)·√radicand.
    The map never stores a zero coefficient and every radicand is squarefree,
    so the zero scalar is the empty map and ``==`` is a dictionary comparison.
    Instances are immutable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[int, Tuple[ScalarLike, ScalarLike]]] = None) -> None:
        clean: Dict[int, Coefficient] = {}
        for rad, (re, im) in (terms or {}).items():
            re_q, im_q = Fraction(re), Fraction(im)
            if not re_q and not im_q:
                continue
            c, m = squarefree_split(int(rad))
            _accumulate(clean, m, re_q * c, im_q * c)
        self._terms: Dict[int, Coefficient] = clean
        self._hash: Optional[int] = None

    @classmethod
    def _wrap(cls, terms: Dict[int, Coefficient]) -> "RadScalar":
        # trusted constructor: keys squarefree, no zero coefficients
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------
    @classmethod
    def from_rational(cls, q: Union[int, Fraction, str]) -> "RadScalar":
        q = Fraction(q)
        return cls._wrap({1: (q, _ZERO_Q)} if q else {})

    @classmethod
    def gaussian(cls, re: Union[int, Fraction], im: Union[int, Fraction]) -> "RadScalar":
        return cls({1: (re, im)})

    @classmethod
    def sqrt(cls, q: Union[int, Fraction, str]) -> "RadScalar":
        """
        Exact square root of a nonnegative rational.

        √(p/q) is stored as (c/q)·√m where p·q = c²·m.

        :param q: Nonnegative rational.
        :type q: int | Fraction | str
        :return: The principal square root.
        :rtype: RadScalar
        :raises ValueError: If q is negative.
        """
        q = Fraction(q)
        if q < 0:
            raise ValueError(f"RadScalar.sqrt expects a nonnegative rational, got {q}")
        if not q:
            return ZERO
        c, m = squarefree_split(q.numerator * q.denominator)
        return cls._wrap({m: (Fraction(c, q.denominator), _ZERO_Q)})

    @classmethod
    def coerce(cls, value: ScalarLike) -> "RadScalar":
        if isinstance(value, RadScalar):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.from_rational(value)
        raise TypeError(f"cannot interpret {type(value).__name__} as RadScalar")

    # ------------------------------------------------------------------
    # Introspection
    # ------------------------------------------------------------------
    def terms(self) -> Iterator[Tuple[int, Fraction, Fraction]]:
        """Yield ``(radicand, re, im)`` in increasing radicand order."""
        for rad in sorted(self._terms):
            re, im = self._terms[rad]
            yield rad, re, im

    @property
    def radicands(self) -> Tuple[int, ...]:
        return tuple(sorted(self._terms))

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return not self._terms or (set(self._terms) == {1} and not self._terms[1][1])

    def as_rational(self) -> Fraction:
        """
        :raises ValueError: If the scalar is not rational.
        """
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._terms[1][0] if self._terms else Fraction(0)

    def to_float(self) -> complex:
        """Evaluate in double precision."""
        total = 0j
        for rad, re, im in self.terms():
            root = math.sqrt(rad)
            total += complex(float(re) * root, float(im) * root)
        return total

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RadScalar.from_rational(other)
        if not isinstance(other, RadScalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self) -> "RadScalar":
        return RadScalar._wrap({rad: (-re, -im) for rad, (re, im) in self._terms.items()})

    def __add__(self, other: ScalarLike) -> "RadScalar":
        other = RadScalar.coerce(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for rad, (re, im) in other._terms.items():
            _accumulate(out, rad, re, im)
        return RadScalar._wrap(out)

    __radd__ = __add__

    def __sub__(self, other: ScalarLike) -> "RadScalar":
        return self + (-RadScalar.coerce(other))

    def __rsub__(self, other: ScalarLike) -> "RadScalar":
        return RadScalar.coerce(other) - self

    def __mul__(self, other: ScalarLike) -> "RadScalar":
        other = RadScalar.coerce(other)
        if not self._terms or not other._terms:
            return ZERO
        out: Dict[int, Coefficient] = {}
        for ra, (xa, ya) in self._terms.items():
            for rb, (xb, yb) in other._terms.items():
                c, m = _radical_product(ra, rb)
                re = xa * xb - ya * yb
                im = xa * yb + ya * xb
                if c != 1:
                    re, im = re * c, im * c
                _accumulate(out, m, re, im)
        return RadScalar._wrap(out)

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarLike) -> "RadScalar":
        return self * RadScalar.coerce(other).inverse()

    def __rtruediv__(self, other: ScalarLike) -> "RadScalar":
        return RadScalar.coerce(other) * self.inverse()

    def conjugate(self) -> "RadScalar":
        """Complex conjugate (i ↦ −i); radicals are real and unchanged."""
        return RadScalar._wrap({rad: (re, -im) for rad, (re, im) in self._terms.items()})

    def flip_prime(self, p: int) -> "RadScalar":
        """Field automorphism √p ↦ −√p: negates every term whose radicand p divides."""
        return RadScalar._wrap(
            {rad: ((-re, -im) if rad % p == 0 else (re, im)) for rad, (re, im) in self._terms.items()}
        )

    def inverse(self) -> "RadScalar":
        """
        Multiplicative inverse by repeated rationalization.

        Each pass multiplies by the conjugate under √p ↦ −√p for a prime p
        still present; the running product loses p and stays in the field,
        so the loop ends in ℚ(i), where (x + iy)⁻¹ = (x − iy)/(x² + y²).

        :return: The inverse.
        :rtype: RadScalar
        :raises ZeroDivisionError: If the scalar is zero.
        """
        if not self._terms:
            raise ZeroDivisionError("RadScalar inverse of zero")
        numerator = ONE
        current = self
        while True:
            radicals = [rad for rad in current._terms if rad > 1]
            if not radicals:
                break
            p = smallest_prime_factor(min(radicals))
            conj = current.flip_prime(p)
            numerator = numerator * conj
            current = current * conj
        x, y = current._terms[1]
        norm = x * x + y * y
        return numerator * RadScalar._wrap({1: (x / norm, -y / norm)})

    # ------------------------------------------------------------------
    # Rendering
    # ------------------------------------------------------------------
    def _term_strings(self) -> Iterator[Tuple[str, str]]:
        for rad, re, im in self.terms():
            root = f"√{rad}" if rad > 1 else ""
            if re and im:
                coef = f"({re}{'+' if im > 0 else '-'}{abs(im)}i)"
                yield "+", coef + root
                continue
            value, unit = (re, "") if re else (im, "i")
            sign = "-" if value < 0 else "+"
            mag = abs(value)
            if mag == 1 and (root or unit):
                body = root + unit
            else:
                body = _fmt_rational(mag) + root + unit
            yield sign, body

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = ""
        for sign, body in self._term_strings():
            if not out:
                out = body if sign == "+" else "-" + body
            else:
                out += sign + body
        return out

    def __repr__(self) -> str:
        return f"RadScalar('{self}')"


ZERO = RadScalar._wrap({})
ONE = RadScalar._wrap({1: (Fraction(1), _ZERO_Q)})
IMAG = RadScalar._wrap({1: (_ZERO_Q, Fraction(1))})


def scalar_mul(a: RadScalar, b: RadScalar) -> RadScalar:
    return a * b


def scalar_inv(a: RadScalar) -> RadScalar:
    return a.inverse()


def to_float(a: RadScalar) -> complex:
    return a.to_float()


_SCALAR_TERM = re.compile(
    r"([+-])?"
    r"(?:\((-?\d+(?:/\d+)?)([+-])(\d+(?:/\d+)?)i\)|(\d+)|\((\d+)/(\d+)\))?"
    r"(?:√(\d+))?"
    r"(i)?"
)


def parse_scalar(text: str) -> RadScalar:
    """
    Inverse of ``str(RadScalar)``: ``"1/2"`` is not accepted, ``"(1/2)"`` is.

    :raises ValueError: If the text is not a rendered scalar.
    """
    compact = text.replace(" ", "")
    if compact == "0":
        return ZERO
    total = ZERO
    pos = 0
    while pos < len(compact) or pos == 0:
        m = _SCALAR_TERM.match(compact, pos)
        sign, g_re, g_sign, g_im, whole, num, den, rad, imag = m.groups()
        if (
            m.end() == pos
            or (pos > 0 and not sign)
            or not (g_re or whole or num or rad or imag)
            or (g_re and imag)
        ):
            raise ValueError(f"cannot parse scalar {text!r} at offset {pos}")
        if g_re:
            im = Fraction(g_im)
            coeff = RadScalar.gaussian(Fraction(g_re), -im if g_sign == "-" else im)
        else:
            coeff = RadScalar.from_rational(Fraction(int(num), int(den)) if num else int(whole or 1))
        if rad:
            coeff = coeff * RadScalar.sqrt(int(rad))
        if imag:
            coeff = coeff * IMAG
        total = total - coeff if sign == "-" else total + coeff
        pos = m.end()
    return total
