"""Complex numbers with an explicit natural-log exponent.

High-order Bessel and Hankel values routinely leave the double-precision
range (``J_300(64)`` is below ``1e-74`` while ``H_300(64)`` is above
``1e74``), yet the products that enter the boundary operators are of
moderate size.  :class:`ScaledComplex` keeps such values as
``mantissa * exp(exponent)`` so that products and quotients can be formed
before anything is rounded back to an ordinary ``complex``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from numbers import Number

#: Addition ignores the smaller operand once the exponents differ by more
#: than this (``exp(-80)`` is far below double-precision resolution).
ADD_GAP = 80

#: Largest natural-log magnitude that still converts to a finite float.
MAX_LOG = 709.0


def _split(value: complex) -> tuple[complex, int]:
    """Return ``(mantissa, k)`` with ``value = mantissa * e**k``, 1 <= |mantissa| < e."""
    if value == 0:
        return 0j, 0
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise OverflowError(f"cannot scale non-finite value {value!r}")
    a = abs(value)
    if math.isinf(a):
        # both components finite but the modulus overflows
        k = math.floor(math.log(abs(value * 0.5)) + math.log(2.0))
    else:
        k = math.floor(math.log(a))
    # multiply by e**-k in two halves so that neither factor leaves the range
    h = k // 2
    mant = value * math.exp(-h) * math.exp(h - k)
    am = abs(mant)
    if am >= math.e:
        mant /= math.e
        k += 1
    elif am < 1.0:
        mant *= math.e
        k -= 1
    return mant, int(k)


@dataclass(frozen=True, slots=True)
class ScaledComplex:
    """Value ``mantissa * exp(exponent)``.

    Instances are always normalized: ``1 <= |mantissa| < e`` or the value is
    exactly zero with ``exponent == 0``.  Construct through
    :meth:`from_complex`, :meth:`from_parts` or :meth:`from_log` rather
    than the raw constructor.
    """

    mantissa: complex = 0j
    exponent: int = 0

    # -- construction ---------------------------------------------------------
    @classmethod
    def from_complex(cls, value: complex) -> "ScaledComplex":
        mant, k = _split(complex(value))
        return cls(mant, k)

    @classmethod
    def from_parts(cls, mantissa: complex, exponent: int = 0) -> "ScaledComplex":
        """Normalize ``mantissa * e**exponent`` (``mantissa`` need not be in range)."""
        mant, k = _split(complex(mantissa))
        if mant == 0:
            return cls(0j, 0)
        return cls(mant, k + int(exponent))

    @classmethod
    def from_log(cls, w: complex) -> "ScaledComplex":
        """Return ``exp(w)`` for a complex logarithm ``w`` of any size."""
        w = complex(w)
        k = math.floor(w.real)
        mant = cmath.exp(complex(w.real - k, w.imag))
        return cls.from_parts(mant, k)

    @classmethod
    def zero(cls) -> "ScaledComplex":
        return cls(0j, 0)

    # -- queries --------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.mantissa == 0

    def log_abs(self) -> float:
        """Natural log of the modulus (``-inf`` for zero)."""
        if self.mantissa == 0:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.exponent

    def to_complex(self) -> complex:
        """Round to an ordinary complex number.

        Raises
        ------
        OverflowError
            If the modulus exceeds the double-precision range.
        """
        if self.mantissa == 0:
            return 0j
        if self.log_abs() > MAX_LOG:
            raise OverflowError(
                f"value with log-modulus {self.log_abs():.1f} is not representable")
        if self.exponent < -760:
            return 0j
        if self.exponent < -700:
            # avoid losing the mantissa to subnormal rounding in one step
            return (self.mantissa * math.exp(-700)) * math.exp(self.exponent + 700)
        return self.mantissa * math.exp(self.exponent)

    def __complex__(self) -> complex:
        return self.to_complex()

    # -- arithmetic -----------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "ScaledComplex":
        if isinstance(other, ScaledComplex):
            return other
        if isinstance(other, Number):
            return ScaledComplex.from_complex(complex(other))
        return NotImplemented

    def __neg__(self) -> "ScaledComplex":
        return ScaledComplex(-self.mantissa, self.exponent)

    def conjugate(self) -> "ScaledComplex":
        return ScaledComplex(self.mantissa.conjugate(), self.exponent)

    def __mul__(self, other) -> "ScaledComplex":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.mantissa == 0 or other.mantissa == 0:
            return ScaledComplex(0j, 0)
        return ScaledComplex.from_parts(self.mantissa * other.mantissa,
                                        self.exponent + other.exponent)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ScaledComplex":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.mantissa == 0:
            raise ZeroDivisionError("division by a zero ScaledComplex")
        if self.mantissa == 0:
            return ScaledComplex(0j, 0)
        return ScaledComplex.from_parts(self.mantissa / other.mantissa,
                                        self.exponent - other.exponent)

    def __rtruediv__(self, other) -> "ScaledComplex":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __add__(self, other) -> "ScaledComplex":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.mantissa == 0:
            return self
        if self.mantissa == 0:
            return other
        big, small = (self, other) if self.exponent >= other.exponent else (other, self)
        gap = big.exponent - small.exponent
        if gap > ADD_GAP:
            return big
        total = big.mantissa + small.mantissa * math.exp(-gap)
        if total == 0:
            return ScaledComplex(0j, 0)
        return ScaledComplex.from_parts(total, big.exponent)

    __radd__ = __add__

    def __sub__(self, other) -> "ScaledComplex":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "ScaledComplex":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __repr__(self) -> str:
        return f"ScaledComplex({self.mantissa!r}, {self.exponent})"
