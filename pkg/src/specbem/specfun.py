"""Integer-order Bessel and Hankel functions in scaled arithmetic.

J is obtained by Miller's backward recurrence.  Y_0 and Y_1 come from
their power series for ``|z| <= 12`` and from the Hankel asymptotic
expansion beyond.  Higher orders of Y use forward recurrence, which is
stable for Y.  Every value is returned as a :class:`ScaledComplex` so that
orders far beyond the argument neither underflow (J) nor overflow (Y, H).

Supported domain: ``|m| <= 2048``, ``|z| <= 500`` and ``|Im z| <= 10``.
Accuracy for complex arguments degrades roughly like ``exp(2|Im z|)``
times machine precision in H, because H is then assembled from J and Y
of very different size.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache
from typing import Literal

from .scaled import ScaledComplex

MAX_ORDER = 2048
MAX_ABS_Z = 500.0
MAX_IMAG_Z = 10.0

#: Largest ``|z|`` for which the power series is used for Y_0, Y_1.
Y_SERIES_RADIUS = 12.0
#: Largest ``|z|`` for which J_m is summed from its power series.
J_SERIES_RADIUS = 1.0

EULER_GAMMA = 0.57721566490153286061
_RESCALE_LOG = 230
_RESCALE = math.exp(_RESCALE_LOG)
_TABLE_CHUNK = 32

Kind = Literal["J", "H1"]


class SpecfunError(ValueError):
    """Base class for special-function argument errors."""


class DomainError(SpecfunError):
    """Argument outside the supported region of the complex plane."""


class OrderError(SpecfunError):
    """Bessel order too large."""


class SingularityError(SpecfunError):
    """Evaluation at the logarithmic singularity z = 0."""


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------
def _check_order(m) -> int:
    try:
        mi = int(m)
    except (TypeError, ValueError) as exc:
        raise OrderError(f"order must be an integer, got {m!r}") from exc
    if mi != m:
        raise OrderError(f"order must be an integer, got {m!r}")
    if abs(mi) > MAX_ORDER:
        raise OrderError(f"|m| = {abs(mi)} exceeds the supported maximum {MAX_ORDER}")
    return mi


def _check_arg(z) -> complex:
    zc = complex(z)
    if not (math.isfinite(zc.real) and math.isfinite(zc.imag)):
        raise DomainError(f"non-finite argument {z!r}")
    if abs(zc) > MAX_ABS_Z:
        raise DomainError(f"|z| = {abs(zc):g} exceeds {MAX_ABS_Z:g}")
    if abs(zc.imag) > MAX_IMAG_Z:
        raise DomainError(f"|Im z| = {abs(zc.imag):g} exceeds {MAX_IMAG_Z:g}")
    return zc


def _table_size(n: int) -> int:
    # orders are tabulated in chunks so that neighbouring orders share a table
    return _TABLE_CHUNK * (n // _TABLE_CHUNK + 1)


def _reflect(m: int, value: ScaledComplex) -> ScaledComplex:
    if m < 0 and (-m) % 2 == 1:
        return -value
    return value


# ---------------------------------------------------------------------------
# J tables
# ---------------------------------------------------------------------------
def _j_series(n: int, z: complex) -> ScaledComplex:
    """Power series of J_n(z); intended for small |z|."""
    if z == 0:
        return ScaledComplex.from_complex(1.0 if n == 0 else 0.0)
    q = -0.25 * z * z
    term = 1.0 + 0j
    total = 1.0 + 0j
    k = 0
    while True:
        k += 1
        term *= q / (k * (n + k))
        total += term
        if abs(term) <= 1e-18 * abs(total):
            break
    prefactor = ScaledComplex.from_log(n * cmath.log(0.5 * z) - math.lgamma(n + 1))
    return prefactor * total


def _miller_start(n_top: int, a: float) -> int:
    start = int(max(n_top, a) + 15.0 * a ** (1.0 / 3.0) + 40)
    return start + (start % 2)


@lru_cache(maxsize=1024)
def _j_table(z: complex, n_top: int) -> tuple[ScaledComplex, ...]:
    """J_0(z), ..., J_{n_top}(z)."""
    if abs(z) <= J_SERIES_RADIUS:
        return tuple(_j_series(n, z) for n in range(n_top + 1))

    n_start = _miller_start(n_top, abs(z))
    use_even_sum = abs(z.imag) <= 0.5
    # e^{-iz} (Im z > 0) or e^{iz} (Im z < 0) = J_0 + 2 sum (-+i)^k J_k
    unit = -1j if z.imag > 0 else 1j

    mant: list[complex] = [0j] * (n_top + 1)
    scale: list[int] = [0] * (n_top + 1)
    f_hi = 0j
    f = 1.0 + 0j
    s = 0
    total = 0j
    if use_even_sum:
        total += 2.0 * f
    else:
        total += 2.0 * f * unit ** (n_start % 4)
    two_over_z = 2.0 / z
    for n in range(n_start, 0, -1):
        f_lo = (n * two_over_z) * f - f_hi
        f_hi, f = f, f_lo
        k = n - 1
        if abs(f) > _RESCALE:
            f /= _RESCALE
            f_hi /= _RESCALE
            total /= _RESCALE
            s += 1
        if k <= n_top:
            mant[k] = f
            scale[k] = s
        weight = 1.0 if k == 0 else 2.0
        if use_even_sum:
            if k % 2 == 0:
                total += weight * f
        else:
            total += weight * f * unit ** (k % 4)
    if use_even_sum:
        norm = 1.0 / total
    else:
        norm = cmath.exp(-1j * z if z.imag > 0 else 1j * z) / total
    return tuple(
        ScaledComplex.from_parts(mant[k] * norm, _RESCALE_LOG * (scale[k] - s))
        for k in range(n_top + 1)
    )


# ---------------------------------------------------------------------------
# Y tables
# ---------------------------------------------------------------------------
def _y01_series(z: complex, j0: complex, j1: complex) -> tuple[complex, complex]:
    q = 0.25 * z * z
    log_half = cmath.log(0.5 * z)
    # Y0 = (2/pi)[(log(z/2) + gamma) J0 + sum_{k>=1} (-1)^{k+1} H_k q^k / (k!)^2]
    term = 1.0 + 0j
    harmonic = 0.0
    s0 = 0j
    k = 0
    while True:
        k += 1
        term *= q / (k * k)
        harmonic += 1.0 / k
        contrib = harmonic * term * (1 if k % 2 == 1 else -1)
        s0 += contrib
        if abs(contrib) <= 1e-18 * max(abs(s0), 1.0) and k > 2:
            break
    y0 = (2.0 / math.pi) * ((log_half + EULER_GAMMA) * j0 + s0)
    # Y1 = (2/pi) log(z/2) J1 - 2/(pi z)
    #      - (1/pi)(z/2) sum_{k>=0} (psi(k+1) + psi(k+2)) (-q)^k / (k!(k+1)!)
    term = 1.0 + 0j
    harmonic = 0.0  # H_k
    s1 = (-2.0 * EULER_GAMMA + 1.0) * term
    k = 0
    while True:
        k += 1
        term *= -q / (k * (k + 1))
        harmonic += 1.0 / k
        contrib = (-2.0 * EULER_GAMMA + 2.0 * harmonic + 1.0 / (k + 1)) * term
        s1 += contrib
        if abs(contrib) <= 1e-18 * max(abs(s1), 1.0) and k > 2:
            break
    y1 = (2.0 / math.pi) * log_half * j1 - 2.0 / (math.pi * z) - (0.5 * z / math.pi) * s1
    return y0, y1


def _hankel_asymptotic(nu: int, z: complex) -> tuple[complex, complex]:
    """H^(1)_nu(z), H^(2)_nu(z) from the large-argument expansion."""
    mu = 4.0 * nu * nu
    w = z - (0.5 * nu + 0.25) * math.pi
    pre = cmath.sqrt(2.0 / (math.pi * z))
    s1 = 1.0 + 0j
    s2 = 1.0 + 0j
    term = 1.0 + 0j
    prev = math.inf
    for k in range(1, 200):
        term = term * (mu - (2 * k - 1) ** 2) / (8.0 * k * z)
        size = abs(term)
        if size == 0.0 or size > prev:
            break
        s1 += term * (1j ** k)
        s2 += term * ((-1j) ** k)
        if size <= 1e-18:
            break
        prev = size
    h1 = pre * cmath.exp(1j * w) * s1
    h2 = pre * cmath.exp(-1j * w) * s2
    return h1, h2


def _y01(z: complex) -> tuple[complex, complex]:
    if abs(z) <= Y_SERIES_RADIUS:
        table = _j_table(z, _TABLE_CHUNK)
        return _y01_series(z, table[0].to_complex(), table[1].to_complex())
    h1_0, h2_0 = _hankel_asymptotic(0, z)
    h1_1, h2_1 = _hankel_asymptotic(1, z)
    return (h1_0 - h2_0) / 2j, (h1_1 - h2_1) / 2j


@lru_cache(maxsize=1024)
def _y_table(z: complex, n_top: int) -> tuple[ScaledComplex, ...]:
    """Y_0(z), ..., Y_{n_top}(z) by forward recurrence."""
    y0, y1 = _y01(z)
    out = [ScaledComplex.from_complex(y0)]
    if n_top >= 1:
        out.append(ScaledComplex.from_complex(y1))
    two_over_z = 2.0 / z
    s = 0
    lo, hi = y0, y1
    for n in range(1, n_top):
        factor = n * two_over_z
        if abs(hi) * max(1.0, abs(factor)) > _RESCALE:
            lo /= _RESCALE
            hi /= _RESCALE
            s += 1
        lo, hi = hi, factor * hi - lo
        out.append(ScaledComplex.from_parts(hi, _RESCALE_LOG * s))
    return tuple(out)


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------
def bessel_j(m: int, z: complex) -> ScaledComplex:
    """Bessel function of the first kind ``J_m(z)``.

    Parameters
    ----------
    m : int
        Order, ``|m| <= 2048``.  Negative orders use ``J_{-m} = (-1)^m J_m``.
    z : complex
        Argument with ``|z| <= 500`` and ``|Im z| <= 10``.

    Returns
    -------
    ScaledComplex
    """
    m = _check_order(m)
    z = _check_arg(z)
    n = abs(m)
    return _reflect(m, _j_table(z, _table_size(n))[n])


def bessel_y(m: int, z: complex) -> ScaledComplex:
    """Bessel function of the second kind ``Y_m(z)``."""
    m = _check_order(m)
    z = _check_arg(z)
    if z == 0:
        raise SingularityError("Y_m is singular at z = 0")
    n = abs(m)
    return _reflect(m, _y_table(z, _table_size(n))[n])


def hankel1(m: int, z: complex) -> ScaledComplex:
    """Hankel function of the first kind ``H^(1)_m(z) = J_m(z) + i Y_m(z)``."""
    m = _check_order(m)
    z = _check_arg(z)
    if z == 0:
        raise SingularityError("H^(1)_m is singular at z = 0")
    n = abs(m)
    size = _table_size(n)
    j = _j_table(z, size)[n]
    y = _y_table(z, size)[n]
    return _reflect(m, j + y * 1j)


def _evaluate(kind: Kind, m: int, z: complex) -> ScaledComplex:
    if kind == "J":
        return bessel_j(m, z)
    if kind == "H1":
        return hankel1(m, z)
    raise ValueError(f"kind must be 'J' or 'H1', got {kind!r}")


def deriv(kind: Kind, m: int, z: complex) -> ScaledComplex:
    """Derivative ``C_m'(z) = (C_{m-1}(z) - C_{m+1}(z)) / 2`` for C = J or H^(1)."""
    m = _check_order(m)
    if abs(m) + 1 > MAX_ORDER:
        raise OrderError(f"derivative needs order {abs(m) + 1} > {MAX_ORDER}")
    return (_evaluate(kind, m - 1, z) - _evaluate(kind, m + 1, z)) * 0.5


def stable_ratio(kind: Kind, m: int, x: complex, y: complex) -> complex:
    """Quotient ``C_m(x) / C_m(y)`` formed in scaled arithmetic.

    Raises
    ------
    OverflowError
        If the quotient itself exceeds ``e**700``.
    ZeroDivisionError
        If ``C_m(y)`` vanishes exactly.
    """
    if x == y:
        _evaluate(kind, m, x)  # still validate the arguments
        return 1.0 + 0j
    ratio = _evaluate(kind, m, x) / _evaluate(kind, m, y)
    if ratio.log_abs() > 700.0:
        raise OverflowError(f"ratio C_{m}({x})/C_{m}({y}) exceeds e^700")
    return ratio.to_complex()


def wronskian_terms(m: int, kappa0: complex, kappa1: complex,
                    r1: float) -> tuple[ScaledComplex, ScaledComplex]:
    """The two products whose sum is :func:`wronskian_hj`."""
    if not r1 > 0:
        raise DomainError(f"r1 must be positive, got {r1!r}")
    z0 = complex(kappa0) * r1
    z1 = complex(kappa1) * r1
    first = hankel1(m, z0) * deriv("J", m, z1) * (-complex(kappa1))
    second = bessel_j(m, z1) * deriv("H1", m, z0) * complex(kappa0)
    return first, second


def wronskian_hj(m: int, kappa0: complex, kappa1: complex, r1: float) -> ScaledComplex:
    """``-k1 H_m(k0 r1) J_m'(k1 r1) + k0 J_m(k1 r1) H_m'(k0 r1)``.

    The resonance frequencies of mode ``m`` are the complex zeros of this
    expression as a function of the wavenumber.
    """
    first, second = wronskian_terms(m, kappa0, kappa1, r1)
    return first + second
