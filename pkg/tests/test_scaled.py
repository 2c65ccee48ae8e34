import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specbem.scaled import ADD_GAP, ScaledComplex

finite = st.floats(min_value=-1e300, max_value=1e300, allow_nan=False, allow_infinity=False)
complexes = st.builds(complex, finite, finite)
moderate = st.builds(complex, st.floats(-1e6, 1e6), st.floats(-1e6, 1e6))


def close(a: complex, b: complex, rel=1e-14) -> bool:
    return abs(a - b) <= rel * max(abs(a), abs(b))


@given(complexes)
def test_roundtrip(z):
    s = ScaledComplex.from_complex(z)
    assert close(s.to_complex(), z)


@given(complexes)
def test_normalized_mantissa(z):
    s = ScaledComplex.from_complex(z)
    if z == 0:
        assert s.is_zero() and s.exponent == 0
    else:
        assert 1.0 <= abs(s.mantissa) < math.e


@given(moderate, moderate)
def test_arithmetic_matches_complex(a, b):
    sa, sb = ScaledComplex.from_complex(a), ScaledComplex.from_complex(b)
    assert close((sa * sb).to_complex(), a * b, 1e-13)
    if b != 0:
        assert close((sa / sb).to_complex(), a / b, 1e-13)
    total = (sa + sb).to_complex()
    assert abs(total - (a + b)) <= 1e-13 * (abs(a) + abs(b))
    assert abs((sa - sb).to_complex() - (a - b)) <= 1e-13 * (abs(a) + abs(b))


def test_values_beyond_double_range():
    big = ScaledComplex.from_log(1000.0 + 0.5j)
    small = ScaledComplex.from_log(-1000.0)
    prod = big * small
    assert close(prod.to_complex(), cmath.exp(0.5j), 1e-12)
    with pytest.raises(OverflowError):
        big.to_complex()
    assert small.to_complex() == 0.0
    assert big.log_abs() == pytest.approx(1000.0)


def test_addition_drops_negligible_operand():
    a = ScaledComplex.from_parts(1.5, 0)
    b = ScaledComplex.from_parts(1.5, -(ADD_GAP + 5))
    assert (a + b) == a
    assert (b + a) == a


def test_mixed_operands_and_zero():
    s = ScaledComplex.from_complex(2.0)
    assert (s * 3).to_complex() == pytest.approx(6.0)
    assert (3 * s).to_complex() == pytest.approx(6.0)
    assert (1 - s).to_complex() == pytest.approx(-1.0)
    assert (1 / s).to_complex() == pytest.approx(0.5)
    assert (s - s).is_zero()
    assert ScaledComplex.zero().log_abs() == -math.inf
    with pytest.raises(ZeroDivisionError):
        s / ScaledComplex.zero()


@settings(max_examples=50)
@given(moderate)
def test_conjugate_and_negation(z):
    s = ScaledComplex.from_complex(z)
    assert close(s.conjugate().to_complex(), z.conjugate())
    assert close((-s).to_complex(), -z)
