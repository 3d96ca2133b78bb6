"""Exact rational scalars and exact forward-mode dual numbers.

``ExactRational`` keeps numerator and denominator as GMP integers in lowest
terms with a positive denominator. Products and quotients cancel across
operands before multiplying (Henrici's method), so combining a very long
value with a short one costs two big-by-small gcds instead of one
big-by-big gcd. Trajectories of the difference system grow quadratically in
bit length, which makes this the difference between seconds and minutes.
"""
from __future__ import annotations

import math
import re
import sys
from fractions import Fraction
from numbers import Integral

from gmpy2 import divexact, gcd, mpz

from .errors import DomainError, ParseError, SingularArithmeticError

__all__ = [
    "ExactRational",
    "DualScalar",
    "rational",
    "rational_parse",
    "to_string",
    "divide",
    "seed",
    "ZERO",
    "ONE",
]

_LITERAL = re.compile(r"(-?)(\d+)(?:/(\d+))?")
_HASH_MODULUS = sys.hash_info.modulus
_HASH_INF = sys.hash_info.inf


class ExactRational:
    """Arbitrary-precision rational number in canonical form.

    >>> ExactRational(3, 6)
    ExactRational('1/2')
    >>> ExactRational(2, 3) ** -2
    ExactRational('9/4')
    """

    __slots__ = ("_num", "_den")

    def __init__(self, numerator=0, denominator=1):
        num = _as_mpz(numerator)
        den = _as_mpz(denominator)
        if den == 0:
            raise DomainError("zero denominator")
        if den < 0:
            num, den = -num, -den
        g = gcd(num, den)
        if g != 1:
            num = divexact(num, g)
            den = divexact(den, g)
        self._num = num
        self._den = den

    @classmethod
    def _raw(cls, num, den):
        # caller guarantees lowest terms and den > 0
        obj = object.__new__(cls)
        obj._num = num
        obj._den = den
        return obj

    @property
    def numerator(self):
        return self._num

    @property
    def denominator(self):
        return self._den

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return _add(self._num, self._den, other._num, other._den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return _add(self._num, self._den, -other._num, other._den)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return _add(other._num, other._den, -self._num, self._den)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return _mul(self._num, self._den, other._num, other._den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other._num == 0:
            raise SingularArithmeticError("ExactRational.__truediv__")
        n, d = other._den, other._num
        if d < 0:
            n, d = -n, -d
        return _mul(self._num, self._den, n, d)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, exponent):
        if not isinstance(exponent, Integral):
            raise DomainError("only integer exponents keep the result rational")
        exponent = int(exponent)
        if exponent >= 0:
            return ExactRational._raw(self._num ** exponent, self._den ** exponent)
        if self._num == 0:
            raise SingularArithmeticError("ExactRational.__pow__")
        n, d = self._den, self._num
        if d < 0:
            n, d = -n, -d
        k = -exponent
        return ExactRational._raw(n ** k, d ** k)

    def __neg__(self):
        return ExactRational._raw(-self._num, self._den)

    def __pos__(self):
        return self

    def __abs__(self):
        return ExactRational._raw(abs(self._num), self._den)

    def reciprocal(self):
        return ONE / self

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, ExactRational):
            return self._num == other._num and self._den == other._den
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self):
        # same value as hash(Fraction(n, d)) so mixed dict keys behave
        num, den = int(self._num), int(self._den)
        dinv = pow(den, _HASH_MODULUS - 2, _HASH_MODULUS)
        if not dinv:
            h = _HASH_INF
        else:
            h = hash(hash(abs(num)) * dinv)
        h = h if num >= 0 else -h
        return -2 if h == -1 else h

    def _cmp(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        lhs = self._num * other._den
        rhs = other._num * self._den
        return (lhs > rhs) - (lhs < rhs)

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __bool__(self):
        return self._num != 0

    # -- conversions --------------------------------------------------------

    def is_integer(self):
        return self._den == 1

    def __float__(self):
        return int(self._num) / int(self._den)

    def log_abs(self):
        """Natural log of ``|self|`` without overflowing on huge values."""
        if self._num == 0:
            raise DomainError("log of zero")
        return math.log(abs(int(self._num))) - math.log(int(self._den))

    def to_fraction(self):
        return Fraction(int(self._num), int(self._den))

    def __str__(self):
        return to_string(self)

    def __repr__(self):
        return f"ExactRational('{to_string(self)}')"

    def __reduce__(self):
        return (ExactRational, (int(self._num), int(self._den)))


def _as_mpz(value):
    if isinstance(value, bool):
        return mpz(int(value))
    if isinstance(value, Integral):
        return mpz(value)
    raise TypeError(f"expected an integer, got {type(value).__name__}")


def _coerce(value):
    if isinstance(value, ExactRational):
        return value
    if isinstance(value, Integral):
        return ExactRational._raw(mpz(value), mpz(1))
    if isinstance(value, Fraction):
        return ExactRational._raw(mpz(value.numerator), mpz(value.denominator))
    return NotImplemented


def _add(an, ad, bn, bd):
    if ad == 1 and bd == 1:
        return ExactRational._raw(an + bn, ad)
    g = gcd(ad, bd)
    if g == 1:
        return ExactRational._raw(an * bd + bn * ad, ad * bd)
    s = divexact(ad, g)
    t = an * divexact(bd, g) + bn * s
    g2 = gcd(t, g)
    if g2 == 1:
        return ExactRational._raw(t, s * bd)
    return ExactRational._raw(divexact(t, g2), s * divexact(bd, g2))


# above this many bits a remainder step before gcd pays off
_REDUCE_FIRST_BITS = 1 << 14


def _gcd(a, b):
    # Along a trajectory the factors of a product share almost all of their
    # digits, and one division shrinks such a pair far faster than gcd does.
    if a.bit_length() > _REDUCE_FIRST_BITS and b.bit_length() > _REDUCE_FIRST_BITS:
        if abs(a) > abs(b):
            a, b = b, a
        r = b % a
        return gcd(a, r) if r else abs(a)
    return gcd(a, b)


def _mul(an, ad, bn, bd):
    if an == 0 or bn == 0:
        return ZERO
    g1 = _gcd(an, bd)
    g2 = _gcd(bn, ad)
    if g1 != 1:
        an = divexact(an, g1)
        bd = divexact(bd, g1)
    if g2 != 1:
        bn = divexact(bn, g2)
        ad = divexact(ad, g2)
    return ExactRational._raw(an * bn, ad * bd)


ZERO = ExactRational._raw(mpz(0), mpz(1))
ONE = ExactRational._raw(mpz(1), mpz(1))


def rational(value):
    """Coerce ``value`` to an ExactRational.

    Accepts ExactRational, integers, ``fractions.Fraction`` and rational
    literals. Floats are refused so binary rounding never leaks in.
    """
    if isinstance(value, ExactRational):
        return value
    if isinstance(value, str):
        return rational_parse(value)
    coerced = _coerce(value)
    if coerced is NotImplemented:
        raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")
    return coerced


def rational_parse(text):
    """Parse ``[-]digits`` or ``[-]digits/digits`` into canonical form."""
    if not isinstance(text, str):
        raise ParseError(f"rational literal must be a string, got {type(text).__name__}")
    m = _LITERAL.fullmatch(text)
    if m is None:
        raise ParseError(f"malformed rational literal {text!r}")
    sign, num, den = m.groups()
    num = mpz(num)
    if sign:
        num = -num
    if den is None:
        return ExactRational._raw(num, mpz(1))
    den = mpz(den)
    if den == 0:
        raise DomainError(f"zero denominator in {text!r}")
    return ExactRational(num, den)


def to_string(value):
    value = rational(value)
    if value._den == 1:
        return str(value._num)
    return f"{value._num}/{value._den}"


def divide(numerator, denominator, site):
    """Exact division that names ``site`` when the divisor vanishes."""
    if _value_of(denominator) == 0:
        raise SingularArithmeticError(site)
    return numerator / denominator


def _value_of(x):
    return x.value if isinstance(x, DualScalar) else x


class DualScalar:
    """Exact value together with exact first partial derivatives.

    ``partials[i]`` is the derivative with respect to the i-th seeded
    variable. Every operand in one expression must carry the same number of
    partials.
    """

    __slots__ = ("value", "partials")

    def __init__(self, value, partials=()):
        self.value = rational(value)
        self.partials = tuple(rational(p) for p in partials)

    @classmethod
    def _raw(cls, value, partials):
        obj = object.__new__(cls)
        obj.value = value
        obj.partials = partials
        return obj

    def _lift(self, other):
        if isinstance(other, DualScalar):
            if len(other.partials) != len(self.partials):
                raise ValueError(
                    f"partials arity mismatch: {len(self.partials)} vs {len(other.partials)}"
                )
            return other
        try:
            value = rational(other)
        except TypeError:
            return NotImplemented
        return DualScalar._raw(value, (ZERO,) * len(self.partials))

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return DualScalar._raw(
            self.value + o.value, tuple(p + q for p, q in zip(self.partials, o.partials))
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return DualScalar._raw(
            self.value - o.value, tuple(p - q for p, q in zip(self.partials, o.partials))
        )

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        u, v = self.value, o.value
        return DualScalar._raw(
            u * v, tuple(du * v + u * dv for du, dv in zip(self.partials, o.partials))
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        u, v = self.value, o.value
        if v == 0:
            raise SingularArithmeticError("DualScalar.__truediv__")
        v2 = v * v
        return DualScalar._raw(
            u / v, tuple((du * v - u * dv) / v2 for du, dv in zip(self.partials, o.partials))
        )

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return DualScalar._raw(-self.value, tuple(-p for p in self.partials))

    def __pow__(self, exponent):
        if not isinstance(exponent, Integral):
            raise DomainError("only integer exponents are supported")
        exponent = int(exponent)
        if exponent < 0:
            return ONE / (self ** -exponent)
        result = DualScalar._raw(ONE, (ZERO,) * len(self.partials))
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, DualScalar):
            return NotImplemented
        return self.value == other.value and self.partials == other.partials

    __hash__ = None

    def __repr__(self):
        parts = ", ".join(to_string(p) for p in self.partials)
        return f"DualScalar({to_string(self.value)}; [{parts}])"


def seed(*values):
    """Seed one independent variable per value: partials form the identity."""
    k = len(values)
    return tuple(
        DualScalar._raw(rational(v), tuple(ONE if i == j else ZERO for j in range(k)))
        for i, v in enumerate(values)
    )
