"""Slow arbitrary-precision reference for integer-order Bessel functions.

Used only by the test-suite and by ``scripts/freeze_golden.py``.  The
evaluators here are deliberately naive: J from its defining power series,
Y from the classical integer-order series with the digamma sum, both
summed in mpmath with enough guard digits to absorb the ``e^|z|``
cancellation of alternating terms.  A Miller backward recurrence at high
precision provides a second, independent route to J.
"""

from __future__ import annotations

import math

import mpmath as mp

DIGITS = 30


def _dps_for(z) -> int:
    return DIGITS + 20 + int(0.9 * float(abs(complex(z))))


def _converged(fn, m, z, extra=0):
    """Evaluate ``fn`` at increasing precision until two passes agree."""
    dps = _dps_for(z) + extra
    prev = fn(m, z, dps)
    while True:
        dps += 40
        cur = fn(m, z, dps)
        with mp.workdps(dps):
            if cur == 0 or abs(cur - prev) <= abs(cur) * mp.mpf(10) ** (-(DIGITS + 5)):
                return cur
        if dps > 4000:
            raise RuntimeError(f"oracle failed to converge for order {m} at {z}")
        prev = cur


def j_series(m: int, z) -> mp.mpc:
    """J_m(z) from the power series, accurate to about :data:`DIGITS` digits."""
    return _converged(_j_series_at, m, z)


def y_series(m: int, z) -> mp.mpc:
    """Y_m(z) from the integer-order series with harmonic numbers."""
    return _converged(_y_series_at, m, z, abs(int(m)) // 2)


def _j_series_at(m: int, z, dps: int) -> mp.mpc:
    n = abs(int(m))
    with mp.workdps(dps):
        z = mp.mpc(z)
        if z == 0:
            val = mp.mpc(1 if n == 0 else 0)
        else:
            half = z / 2
            q = -half * half
            term = mp.power(half, n) / mp.factorial(n)
            total = term
            peak = abs(term)
            tiny = mp.mpf(10) ** (-(dps - 5))
            k = 0
            while True:
                k += 1
                term = term * q / (k * (n + k))
                total += term
                peak = max(peak, abs(term))
                if k > abs(z) and abs(term) < peak * tiny:
                    break
            val = total
        if m < 0 and n % 2:
            val = -val
        return +val


def _y_series_at(m: int, z, dps: int) -> mp.mpc:
    n = abs(int(m))
    with mp.workdps(dps):
        z = mp.mpc(z)
        half = z / 2
        q = half * half
        finite = mp.mpc(0)
        for k in range(n):
            finite += mp.factorial(n - k - 1) / mp.factorial(k) * mp.power(q, k)
        finite = -finite * mp.power(half, -n) / mp.pi
        log_part = 2 / mp.pi * mp.log(half) * _j_series_at(n, z, dps)
        tail = mp.mpc(0)
        k = 0
        term = mp.power(half, n) / mp.factorial(n)  # (z/2)^n (-q)^k / (k!(n+k)!)
        peak = mp.mpf(0)
        tiny = mp.mpf(10) ** (-(dps - 5))
        while True:
            contrib = (mp.digamma(k + 1) + mp.digamma(n + k + 1)) * term
            tail += contrib
            peak = max(peak, abs(contrib))
            if k > abs(z) and abs(contrib) < peak * tiny:
                break
            k += 1
            term = term * (-q) / (k * (n + k))
        val = finite + log_part - tail / mp.pi
        if m < 0 and n % 2:
            val = -val
        return +val


def j_miller(m: int, z, extra: int = 60) -> mp.mpc:
    """J_m(z) by backward recurrence at high precision (independent check)."""
    n = abs(int(m))
    with mp.workdps(_dps_for(z) + 20):
        z = mp.mpc(z)
        start = int(max(n, float(abs(z)))) + extra + 2 * int(float(abs(z)) ** 0.5) + 40
        start += start % 2
        f_hi, f = mp.mpc(0), mp.mpc(1) * mp.mpf(10) ** (-50)
        total = 2 * f
        keep = None
        for k in range(start, 0, -1):
            f_hi, f = f, 2 * k / z * f - f_hi
            if k - 1 == n:
                keep = f
            if (k - 1) % 2 == 0:
                total += f if k - 1 == 0 else 2 * f
        if n == start:
            keep = mp.mpc(1) * mp.mpf(10) ** (-50)
        val = keep / total
        if m < 0 and n % 2:
            val = -val
        return +val


def hankel1(m: int, z) -> mp.mpc:
    with mp.workdps(_dps_for(z) + abs(int(m)) // 2):
        return j_series(m, z) + 1j * y_series(m, z)


def j_prime(m: int, z) -> mp.mpc:
    with mp.workdps(_dps_for(z) + 10):
        return (j_series(m - 1, z) - j_series(m + 1, z)) / 2


def h_prime(m: int, z) -> mp.mpc:
    with mp.workdps(_dps_for(z) + abs(int(m)) // 2 + 10):
        return (hankel1(m - 1, z) - hankel1(m + 1, z)) / 2


def evaluate(name: str, m: int, z) -> mp.mpc:
    return {
        "J": j_series,
        "Y": y_series,
        "H": hankel1,
        "Jp": j_prime,
        "Hp": h_prime,
    }[name](m, z)


def to_scaled_pair(value) -> tuple[float, float, int]:
    """Split into ``(re, im, k)`` with value = (re + i im) e^k, 1 <= |re + i im| < e."""
    with mp.workdps(60):
        value = mp.mpc(value)
        if value == 0:
            return 0.0, 0.0, 0
        k = int(mp.floor(mp.log(abs(value))))
        mant = value * mp.exp(-k)
        return float(mant.real), float(mant.imag), k


def relative_error(approx_mant: complex, approx_exp: int, exact) -> float:
    """``|approx/exact - 1|`` for a scaled approximation and an mpmath value."""
    with mp.workdps(60):
        exact = mp.mpc(exact)
        approx = mp.mpc(approx_mant) * mp.exp(approx_exp)
        if exact == 0:
            return math.inf if approx != 0 else 0.0
        return float(abs(approx / exact - 1))
