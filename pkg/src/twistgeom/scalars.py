"""Exact coefficient arithmetic.

``QI`` is a Gaussian rational backed by ``gmpy2.mpq``.  ``Scalar`` decorates a
Gaussian rational with a formal power of hbar and a unit phase
``exp(i * sum r_s theta_s)`` whose exponents are exact rationals.
``LambdaSeries`` is a power series in the deformation parameter lambda,
truncated at a fixed order.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, Iterator, Tuple

from gmpy2 import mpq

__all__ = [
    "QI",
    "I",
    "ONE",
    "ZERO",
    "Scalar",
    "LambdaSeries",
    "as_rational",
    "rational_str",
    "bilinear",
]


def as_rational(value: Any) -> mpq:
    """Coerce ``value`` to an exact rational; floats are rejected."""
    if isinstance(value, float):
        raise TypeError("floating point values are not allowed in exact arithmetic")
    if isinstance(value, str):
        value = value.strip()
        if "/" in value:
            num, den = value.split("/")
            return mpq(int(num), int(den))
        return mpq(int(value))
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


def rational_str(q: mpq) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


class QI:
    """Gaussian rational ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re: Any = 0, im: Any = 0):
        self.re = re if type(re) is type(_MPQ0) else as_rational(re)
        self.im = im if type(im) is type(_MPQ0) else as_rational(im)

    @classmethod
    def coerce(cls, x: Any) -> "QI":
        if isinstance(x, QI):
            return x
        if isinstance(x, complex):
            raise TypeError("complex floats are not exact")
        return cls(x)

    @classmethod
    def parse(cls, text: str) -> "QI":
        """Parse ``"p/q"``, ``"p/q i"`` or ``"a+bi"``-free forms used in JSON."""
        text = text.strip().replace(" ", "")
        if text.endswith("i"):
            body = text[:-1]
            if body in ("", "+"):
                body = "1"
            elif body == "-":
                body = "-1"
            return cls(0, as_rational(body))
        return cls(as_rational(text))

    def __add__(self, other):
        if type(other) is not QI:
            other = QI.coerce(other)
        return QI(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is not QI:
            other = QI.coerce(other)
        return QI(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return QI.coerce(other) - self

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __mul__(self, other):
        if type(other) is not QI:
            if isinstance(other, (int, type(_MPQ0), Fraction)):
                o = as_rational(other) if isinstance(other, Fraction) else other
                return QI(self.re * o, self.im * o)
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b:
            if not d:
                return QI(a * c, _MPQ0)
            return QI(a * c, a * d)
        if not d:
            return QI(a * c, b * c)
        return QI(a * c - b * d, a * d + b * c)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        other = QI.coerce(other)
        den = other.re * other.re + other.im * other.im
        if not den:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conj()
        return QI(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        return QI.coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return (QI(1) / self) ** (-n)
        out = QI(1)
        for _ in range(n):
            out = out * self
        return out

    def conj(self) -> "QI":
        return QI(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if type(other) is not QI:
            try:
                other = QI.coerce(other)
            except TypeError:
                return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def is_real(self) -> bool:
        return not self.im

    def to_json(self) -> str:
        if not self.im:
            return rational_str(self.re)
        if not self.re:
            return rational_str(self.im) + "i"
        return "%s%+si" % (rational_str(self.re), rational_str(self.im)).replace("+-", "-")

    def render(self) -> str:
        """Canonical text: ``3``, ``(1/2)``, ``(-1/2)i``, ``(1+2i)``."""
        if not self.im:
            s = rational_str(self.re)
            return s if self.re.denominator == 1 and self.re >= 0 else "(%s)" % s
        if not self.re:
            s = rational_str(self.im)
            if self.im == 1:
                return "i"
            if self.im.denominator == 1 and self.im > 0:
                return s + "i"
            return "(%s)i" % s
        im = rational_str(self.im)
        sign = "+" if self.im > 0 else ""
        return "(%s%s%si)" % (rational_str(self.re), sign, im)

    def __repr__(self):
        return "QI(%s)" % self.to_json()


_MPQ0 = mpq(0)
ZERO = QI(0)
ONE = QI(1)
I = QI(0, 1)


class Scalar:
    """Gaussian rational times ``hbar**hbar_power`` times a unit phase.

    ``phase`` holds the rational exponents ``r_s`` of
    ``exp(i * sum_s r_s theta_s)``; the symbols ``theta_s`` are named by the
    owner (a mode lattice).  Two scalars can only be added when their
    ``hbar_power`` and ``phase`` agree.
    """

    __slots__ = ("value", "hbar_power", "phase")

    def __init__(self, value: Any = 1, hbar_power: int = 0, phase: Tuple = ()):
        self.value = QI.coerce(value)
        self.hbar_power = int(hbar_power)
        self.phase = tuple(as_rational(r) for r in phase)

    @staticmethod
    def phase_add(p: Tuple, q: Tuple) -> Tuple:
        if len(p) < len(q):
            p, q = q, p
        out = list(p)
        for j, r in enumerate(q):
            out[j] = out[j] + r
        return tuple(out)

    @staticmethod
    def phase_is_identity(p: Tuple) -> bool:
        return not any(p)

    def key(self) -> Tuple:
        """The non-additive part: ``(hbar_power, normalized phase)``."""
        phase = self.phase
        while phase and not phase[-1]:
            phase = phase[:-1]
        return (self.hbar_power, phase)

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            return Scalar(self.value * QI.coerce(other), self.hbar_power, self.phase)
        return Scalar(
            self.value * other.value,
            self.hbar_power + other.hbar_power,
            Scalar.phase_add(self.phase, other.phase),
        )

    __rmul__ = __mul__

    def __add__(self, other):
        if self.key() != other.key():
            raise ValueError("cannot add scalars with different hbar power or phase")
        return Scalar(self.value + other.value, self.hbar_power, self.phase)

    def __neg__(self):
        return Scalar(-self.value, self.hbar_power, self.phase)

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.value == other.value and self.key() == other.key()

    def __hash__(self):
        return hash((self.value, self.key()))

    def __repr__(self):
        return "Scalar(%s, hbar^%d, phase=%s)" % (
            self.value.to_json(),
            self.hbar_power,
            [rational_str(r) for r in self.phase],
        )


class LambdaSeries:
    """Power series ``sum_d lambda^d c_d`` truncated at ``order``.

    Coefficients are any additive objects supporting ``+``, unary ``-``,
    multiplication by ``QI`` and truthiness (false means zero).  Products use
    ``*`` between coefficients.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Dict[int, Any] | None = None, order: int = 0):
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        self.order = order
        self.coeffs = {
            d: c for d, c in (coeffs or {}).items() if 0 <= d <= order and _nonzero(c)
        }

    @classmethod
    def constant(cls, c: Any, order: int) -> "LambdaSeries":
        return cls({0: c}, order)

    @classmethod
    def promote(cls, x: Any, order: int) -> "LambdaSeries":
        if isinstance(x, LambdaSeries):
            return x if x.order <= order else x.truncate(order)
        return cls({0: x}, order)

    def __getitem__(self, d: int):
        return self.coeffs.get(d)

    def items(self) -> Iterator:
        return iter(sorted(self.coeffs.items()))

    def degrees(self):
        return sorted(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def truncate(self, order: int) -> "LambdaSeries":
        return LambdaSeries(self.coeffs, min(order, self.order))

    def __add__(self, other):
        if not isinstance(other, LambdaSeries):
            other = LambdaSeries.promote(other, self.order)
        order = min(self.order, other.order)
        out = {d: c for d, c in self.coeffs.items() if d <= order}
        for d, c in other.coeffs.items():
            if d > order:
                continue
            out[d] = out[d] + c if d in out else c
        return LambdaSeries(out, order)

    __radd__ = __add__

    def __neg__(self):
        return LambdaSeries({d: -c for d, c in self.coeffs.items()}, self.order)

    def __sub__(self, other):
        return self + (-other if isinstance(other, LambdaSeries) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s: Any) -> "LambdaSeries":
        return LambdaSeries({d: c * s for d, c in self.coeffs.items()}, self.order)

    def shift(self, k: int) -> "LambdaSeries":
        """Multiply by ``lambda**k``."""
        return LambdaSeries({d + k: c for d, c in self.coeffs.items()}, self.order)

    def __mul__(self, other):
        if isinstance(other, LambdaSeries):
            return bilinear(self, other, lambda a, b: a * b, min(self.order, other.order))
        return self.scale(other)

    def __rmul__(self, other):
        return LambdaSeries({d: other * c for d, c in self.coeffs.items()}, self.order)

    def map(self, fn: Callable) -> "LambdaSeries":
        return LambdaSeries({d: fn(c) for d, c in self.coeffs.items()}, self.order)

    def total(self, zero: Any = None):
        """Sum of all coefficients (the series evaluated at lambda = 1)."""
        out = zero
        for _, c in self.items():
            out = c if out is None else out + c
        return out

    def __eq__(self, other):
        if not isinstance(other, LambdaSeries):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        body = ", ".join("%d: %r" % (d, c) for d, c in self.items())
        return "LambdaSeries({%s}, order=%d)" % (body, self.order)


def _nonzero(c: Any) -> bool:
    if c is None:
        return False
    return bool(c)


def bilinear(a: Any, b: Any, op: Callable, order: int) -> LambdaSeries:
    """Bilinear extension of ``op`` to lambda series, truncated at ``order``.

    ``a``/``b`` may be plain objects (degree 0).  ``op`` may return a plain
    object or a ``LambdaSeries``; the latter is shifted by the input degrees.
    """
    a = LambdaSeries.promote(a, order)
    b = LambdaSeries.promote(b, order)
    out: Dict[int, Any] = {}
    for da, ca in a.coeffs.items():
        for db, cb in b.coeffs.items():
            base = da + db
            if base > order:
                continue
            r = op(ca, cb)
            if isinstance(r, LambdaSeries):
                for dr, cr in r.coeffs.items():
                    d = base + dr
                    if d <= order:
                        out[d] = out[d] + cr if d in out else cr
            elif _nonzero(r):
                out[base] = out[base] + r if base in out else r
    return LambdaSeries(out, order)


def exp_series(x: Any, one: Any, order: int) -> LambdaSeries:
    """``exp(lambda * x)`` through ``order`` using Taylor coefficients."""
    coeffs = {0: one}
    term = one
    for k in range(1, order + 1):
        term = term * x * QI(mpq(1, k))
        coeffs[k] = term
    return LambdaSeries(coeffs, order)


def sum_series(items: Iterable[LambdaSeries], order: int) -> LambdaSeries:
    out = LambdaSeries({}, order)
    for s in items:
        out = out + s
    return out
