"""Exact scalars: rationals and the cyclotomic field Q(zeta8).

Every structure constant in the engine lives in Q(zeta8), the degree-4
extension of Q generated by a primitive 8th root of unity ``z``.  In the
basis {1, z, z^2, z^3} with z^4 = -1 we have

    i     = z^2,
    sqrt2 = z + z^{-1} = z - z^3,

so i^2 = -1 and sqrt2^2 = 2 hold exactly.  Elements are stored in canonical
form (four reduced Fractions), so equality is coordinate-wise.
"""

from __future__ import annotations

from fractions import Fraction

try:  # gmpy2 provides hash-compatible exact rationals, an order of
    # magnitude faster than fractions.Fraction; fall back transparently.
    from gmpy2 import mpq as QQ
    _QTYPE = type(QQ())
except ImportError:  # pragma: no cover
    QQ = Fraction
    _QTYPE = Fraction

Rational = Fraction

_ZERO = QQ(0)
_ONE = QQ(1)


def as_q(x):
    """Normalize to the internal exact-rational type."""
    return x if type(x) is _QTYPE else QQ(x)


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction, _QTYPE)):
        return Scalar(as_q(x), _ZERO, _ZERO, _ZERO)
    return NotImplemented


class Scalar:
    """An element a0 + a1*z + a2*z^2 + a3*z^3 of Q(zeta8), z^4 = -1."""

    __slots__ = ("c0", "c1", "c2", "c3")

    def __init__(self, c0=_ZERO, c1=_ZERO, c2=_ZERO, c3=_ZERO):
        self.c0 = as_q(c0)
        self.c1 = as_q(c1)
        self.c2 = as_q(c2)
        self.c3 = as_q(c3)

    # -- constructors ---------------------------------------------------

    @staticmethod
    def _raw(c0, c1, c2, c3) -> "Scalar":
        s = object.__new__(Scalar)
        s.c0 = c0
        s.c1 = c1
        s.c2 = c2
        s.c3 = c3
        return s

    @staticmethod
    def from_rational(q) -> "Scalar":
        return Scalar(as_q(q))

    def coords(self):
        return (self.c0, self.c1, self.c2, self.c3)

    # -- ring structure --------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar._raw(self.c0 + other.c0, self.c1 + other.c1,
                           self.c2 + other.c2, self.c3 + other.c3)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar._raw(self.c0 - other.c0, self.c1 - other.c1,
                           self.c2 - other.c2, self.c3 - other.c3)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self):
        return Scalar._raw(-self.c0, -self.c1, -self.c2, -self.c3)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a0, a1, a2, a3 = self.c0, self.c1, self.c2, self.c3
        b0, b1, b2, b3 = other.c0, other.c1, other.c2, other.c3
        # rational fast paths (the overwhelmingly common case)
        if not (a1 or a2 or a3):
            return Scalar._raw(a0 * b0, a0 * b1, a0 * b2, a0 * b3)
        if not (b1 or b2 or b3):
            return Scalar._raw(a0 * b0, a1 * b0, a2 * b0, a3 * b0)
        # z^4 = -1: fold degrees 4..6 back with a sign.
        return Scalar._raw(
            a0 * b0 - a1 * b3 - a2 * b2 - a3 * b1,
            a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2,
            a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3,
            a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0,
        )

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        """Multiplicative inverse, via the 4x4 multiplication matrix."""
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(zeta8)")
        # Solve self * x = 1 as a linear system over Q in the coordinates
        # of x.  Column j of the matrix is self * z^j.
        cols = []
        basis = [Scalar(1), Scalar(0, 1), Scalar(0, 0, 1), Scalar(0, 0, 0, 1)]
        for b in basis:
            cols.append((self * b).coords())
        m = [[cols[j][i] for j in range(4)] + [_ONE if i == 0 else _ZERO]
             for i in range(4)]
        # Gaussian elimination on the 4x5 augmented matrix.
        for col in range(4):
            piv = next(r for r in range(col, 4) if m[r][col] != 0)
            m[col], m[piv] = m[piv], m[col]
            inv = QQ(1) / m[col][col]
            m[col] = [v * inv for v in m[col]]
            for r in range(4):
                if r != col and m[r][col] != 0:
                    f = m[r][col]
                    m[r] = [v - f * w for v, w in zip(m[r], m[col])]
        return Scalar(m[0][4], m[1][4], m[2][4], m[3][4])

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not (self.c0 or self.c1 or self.c2 or self.c3)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not (self.c1 or self.c2 or self.c3)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"not a rational scalar: {self}")
        return Fraction(int(self.c0.numerator), int(self.c0.denominator))

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coords() == other.coords()

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __hash__(self):
        return hash(self.coords())

    # -- rendering --------------------------------------------------------

    def __str__(self):
        parts = []
        for q, mono in zip(self.coords(), ("", "z", "z^2", "z^3")):
            if q == 0:
                continue
            if mono == "":
                parts.append(str(q))
            elif q == 1:
                parts.append(mono)
            elif q == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{q}*{mono}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"Scalar({self})"


ZERO = Scalar()
ONE = Scalar(1)
ZETA8 = Scalar(0, 1)
I_UNIT = Scalar(0, 0, 1)                 # i = z^2
SQRT2 = Scalar(0, 1, 0, -1)              # sqrt2 = z - z^3
INV_SQRT2 = Scalar(0, QQ(1, 2), 0, QQ(-1, 2))
SQRT_M2 = I_UNIT * SQRT2                 # a square root of -2
INV_SQRT_M2 = SQRT_M2.inverse()


def scalar(q) -> Scalar:
    """Embed an int or Fraction into Q(zeta8)."""
    s = _coerce(q)
    if s is NotImplemented:
        raise TypeError(f"cannot coerce {q!r} to Scalar")
    return s


def i_power(n) -> Scalar:
    """i^n for an integer (or integer-valued rational) exponent n."""
    n = as_q(n)
    if n.denominator != 1:
        raise ValueError(f"i_power needs an integer exponent, got {n}")
    return (ONE, I_UNIT, -ONE, -I_UNIT)[int(n) % 4]
