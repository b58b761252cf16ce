"""
Exact scalars of the ground field Q(t), where t = q^(1/2).

A ``Scalar`` is stored as ``t^shift * p(t) / d(t)`` with ``p(0) != 0``,
``d`` monic, ``d(0) != 0`` and ``gcd(p, d) = 1``.  That representation is
unique, so equality is a comparison of stored data.  Polynomial arithmetic
and gcds come from ``sympy``'s sparse polynomial ring over QQ.
"""
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union
import logging

from sympy import QQ, Symbol

from app.utils.exceptions import DenominatorVanishesAtOne

logger = logging.getLogger(__name__)

T_SYMBOL = Symbol("t")
FIELD = QQ.frac_field(T_SYMBOL)
RING = FIELD.field.ring

Number = Union[int, Fraction]


def to_qq(value: Number):
    """Convert an int or Fraction to a ground-domain rational."""
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    return QQ(value)


def to_fraction(value) -> Fraction:
    """Convert a ground-domain rational to a Fraction."""
    return Fraction(int(value.numerator), int(value.denominator))


def _strip_t(poly) -> Tuple[object, int]:
    """Split ``poly`` as ``t^k * p`` with ``p(0) != 0``."""
    if not poly:
        return poly, 0
    low = min(monom[0] for monom in poly.itermonoms())
    if low == 0:
        return poly, 0
    return RING.from_dict({(e - low,): c for (e,), c in poly.items()}), low


def _shift(poly, k: int):
    if k == 0 or not poly:
        return poly
    return poly.mul_monom((k,))


def _reverse(poly):
    degree = poly.degree()
    return RING.from_dict({(degree - e,): c for (e,), c in poly.items()})


class Laurent:
    """Laurent polynomial ``t^shift * poly`` in QQ[t, 1/t]."""

    __slots__ = ("poly", "shift")

    def __init__(self, poly=None, shift: int = 0):
        poly = RING.zero if poly is None else poly
        poly, low = _strip_t(poly)
        self.poly = poly
        self.shift = shift + low if poly else 0

    @classmethod
    def from_terms(cls, terms: Dict[int, Number]) -> "Laurent":
        """Build from a map exponent of t -> rational coefficient."""
        terms = {e: c for e, c in terms.items() if c}
        if not terms:
            return cls()
        low = min(terms)
        return cls(RING.from_dict({(e - low,): to_qq(c) for e, c in terms.items()}), low)

    @property
    def coefficients(self) -> Dict[int, Fraction]:
        """Map exponent of t -> nonzero rational coefficient."""
        return {e + self.shift: to_fraction(c) for (e,), c in self.poly.items()}

    def value_at_one(self) -> Fraction:
        return to_fraction(sum(self.poly.values(), QQ.zero))

    def bar(self) -> "Laurent":
        if not self.poly:
            return self
        return Laurent(_reverse(self.poly), -self.shift - self.poly.degree())

    def __bool__(self) -> bool:
        return bool(self.poly)

    def __neg__(self) -> "Laurent":
        return Laurent(-self.poly, self.shift)

    def __add__(self, other: "Laurent") -> "Laurent":
        if not self.poly:
            return other
        if not other.poly:
            return self
        low = min(self.shift, other.shift)
        poly = _shift(self.poly, self.shift - low) + _shift(other.poly, other.shift - low)
        return Laurent(poly, low)

    def __sub__(self, other: "Laurent") -> "Laurent":
        return self + (-other)

    def __mul__(self, other: "Laurent") -> "Laurent":
        if not self.poly or not other.poly:
            return Laurent()
        return Laurent(self.poly * other.poly, self.shift + other.shift)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Laurent):
            return NotImplemented
        return self.shift == other.shift and self.poly == other.poly

    def __hash__(self) -> int:
        return hash((self.shift, tuple(sorted(self.poly.items()))))

    def __str__(self) -> str:
        from app.utils.formatting import format_laurent
        return format_laurent(self)

    def __repr__(self) -> str:
        return f"Laurent({self})"


class Scalar:
    """Element of Q(t) in canonical form."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Laurent, den=None):
        self.num = num
        self.den = RING.one if den is None else den
        self._hash = None

    @classmethod
    def canonical(cls, numer, denom, shift: int = 0) -> "Scalar":
        """Canonical form of ``t^shift * numer / denom`` for polynomials in t."""
        if not denom:
            raise ZeroDivisionError("Scalar division by zero")
        if not numer:
            return ZERO
        numer, denom = numer.cancel(denom)
        denom, low = _strip_t(denom)
        lc = denom.LC
        if lc != QQ.one:
            numer = numer.quo_ground(lc)
            denom = denom.monic()
        return cls(Laurent(numer, shift - low), denom)

    @classmethod
    def from_number(cls, value: Number) -> "Scalar":
        if not value:
            return ZERO
        return cls(Laurent(RING.ground_new(to_qq(value))))

    @classmethod
    def from_laurent(cls, value: Laurent) -> "Scalar":
        return cls(value)

    @classmethod
    def t_power(cls, k: int, coeff: Number = 1) -> "Scalar":
        """``coeff * t^k``."""
        if not coeff:
            return ZERO
        return cls(Laurent(RING.ground_new(to_qq(coeff)), k))

    @classmethod
    def q_power(cls, k: int, coeff: Number = 1) -> "Scalar":
        """``coeff * q^k`` (that is ``coeff * t^(2k)``)."""
        return cls.t_power(2 * k, coeff)

    @classmethod
    def from_field(cls, element) -> "Scalar":
        """Convert a sympy fraction-field element of ``FIELD``."""
        return cls.canonical(element.numer, element.denom)

    def to_field(self):
        """Convert to a sympy fraction-field element of ``FIELD``."""
        poly, shift = self.num.poly, self.num.shift
        if shift >= 0:
            return FIELD.field.new(_shift(poly, shift), self.den)
        return FIELD.field.new(poly, _shift(self.den, -shift))

    @property
    def is_laurent(self) -> bool:
        return self.den == RING.one

    def monomial_exponent(self) -> Optional[int]:
        """Return k when the scalar equals t^k exactly, else None."""
        if self.is_laurent and self.num.poly == RING.one:
            return self.num.shift
        return None

    def bar(self) -> "Scalar":
        """Apply t -> 1/t."""
        if not self:
            return self
        if self.is_laurent:
            return Scalar(self.num.bar())
        poly = self.num.poly
        shift = -self.num.shift - poly.degree() + self.den.degree()
        return Scalar.canonical(_reverse(poly), _reverse(self.den), shift)

    def in_A1(self) -> bool:
        return sum(self.den.values(), QQ.zero) != QQ.zero

    def eval_at_one(self) -> Fraction:
        den = sum(self.den.values(), QQ.zero)
        if den == QQ.zero:
            raise DenominatorVanishesAtOne(f"Denominator of {self} vanishes at t = 1")
        return self.num.value_at_one() / to_fraction(den)

    def inverse(self) -> "Scalar":
        if not self:
            raise ZeroDivisionError("Scalar division by zero")
        return Scalar.canonical(self.den, self.num.poly, -self.num.shift)

    def __bool__(self) -> bool:
        return bool(self.num)

    def __neg__(self) -> "Scalar":
        return Scalar(-self.num, self.den)

    def __add__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self:
            return other
        if not other:
            return self
        if self.is_laurent and other.is_laurent:
            return Scalar(self.num + other.num)
        low = min(self.num.shift, other.num.shift)
        numer = (_shift(self.num.poly, self.num.shift - low) * other.den
                 + _shift(other.num.poly, other.num.shift - low) * self.den)
        return Scalar.canonical(numer, self.den * other.den, low)

    __radd__ = __add__

    def __sub__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self or not other:
            return ZERO
        if self.is_laurent and other.is_laurent:
            return Scalar(self.num * other.num)
        return Scalar.canonical(
            self.num.poly * other.num.poly,
            self.den * other.den,
            self.num.shift + other.num.shift,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((hash(self.num), tuple(sorted(self.den.items()))))
        return self._hash

    def __str__(self) -> str:
        from app.utils.formatting import format_scalar
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"Scalar({self})"


def _coerce(value):
    if isinstance(value, Scalar):
        return value
    if isinstance(value, (int, Fraction)):
        return Scalar.from_number(value)
    return NotImplemented


ZERO = Scalar(Laurent())
ONE = Scalar(Laurent(RING.one))
T = Scalar.t_power(1)
Q = Scalar.t_power(2)


def bar_scalar(s: Scalar) -> Scalar:
    """Field automorphism t -> 1/t."""
    return s.bar()


def eval_at_one(s: Scalar) -> Fraction:
    """Evaluate at t = 1; raises DenominatorVanishesAtOne on a pole."""
    return s.eval_at_one()


def in_A1(s: Scalar) -> bool:
    """True when the denominator does not vanish at t = 1."""
    return s.in_A1()


def q_integer(k: int) -> Scalar:
    """The quantum integer (q^k - q^-k)/(q - q^-1)."""
    return (Scalar.q_power(k) - Scalar.q_power(-k)) / (Q - Q.inverse())
