import math
import warnings

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specbem import analytic, galerkin as gk
from specbem import operators as ops
from specbem.galerkin import AliasingWarning, FourierTrace, ReferenceTooSmallError
from specbem.operators import EQUAL_MEDIA, EXAMPLE_1, GENERIC


def double_layer_quadrature(m, k, R, n=800):
    """Double layer of g_m on a circle (outward normal) by the midpoint rule.

    On a circle the kernel tends to ``-1/(4 pi R)`` on the diagonal, so the
    offset rule converges without singular corrections.
    """
    phi = 2 * math.pi * (np.arange(n) + 0.5) / n
    total = 0j
    for p in phi:
        rho = 2 * R * abs(math.sin(p / 2))
        kernel = -(1j * k / 4) * complex(mp.hankel1(1, k * rho)) * rho / (2 * R)
        total += kernel * complex(math.cos(m * p), math.sin(m * p)) * R
    return total * 2 * math.pi / n


# --------------------------------------------------------------------- data
def test_expand_single_exponential():
    t = gk.expand_datum(lambda th: np.exp(1j * th), 10)
    assert t[1] == pytest.approx(1.0, abs=1e-14)
    others = np.delete(t.coeffs, 1 + t.M)
    assert np.max(np.abs(others)) <= 1e-14


def test_expand_abs_x2():
    t = gk.expand_datum(lambda th: np.abs(np.sin(th)), 200, warn=False, n_quad=4096)
    assert t[0] == pytest.approx(2 / math.pi, abs=1e-6)
    assert t[2] == pytest.approx(-2 / (3 * math.pi), abs=1e-6)
    assert t[-2] == pytest.approx(-2 / (3 * math.pi), abs=1e-6)
    assert max(abs(t[m]) for m in range(1, 200, 2)) <= 1e-12
    closed = gk.builtin_datum("abs_x2", 200)
    assert np.max(np.abs(closed.coeffs - t.coeffs)) <= 1e-6


def test_gm_plus_exp_coefficients():
    t = gk.builtin_datum("gm_plus_exp", 80, mode=40)
    for m in (0, 1, 5, 40):
        bessel_i = float(mp.besseli(m, 1))
        expect = bessel_i + (1.0 if m == 40 else 0.0)
        assert t[m] == pytest.approx(expect, abs=1e-14)


def test_expand_explicit_forms():
    a = gk.expand_datum({0: 1.0, -2: 2.0, 9: 5.0}, 3, warn=False)
    assert a[0] == 1 and a[-2] == 2 and a[3] == 0
    b = gk.expand_datum([0, 1, 0], 1, warn=False)
    assert b[0] == 1
    with pytest.raises(ValueError):
        gk.expand_datum([1, 2], 1)
    with pytest.raises(ValueError):
        gk.expand_datum(np.cos, 100, n_quad=64)


def test_aliasing_warning():
    with pytest.warns(AliasingWarning):
        gk.expand_datum(lambda th: np.abs(np.sin(th)), 20)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        gk.expand_datum(lambda th: np.cos(th), 20)


# -------------------------------------------------------------------- norms
def test_sobolev_single_mode():
    t = FourierTrace.single_mode(1.0, 3, 0)
    for s in (-0.5, 0.0, 0.5, 2.0):
        assert gk.sobolev_norm(t, s) == pytest.approx(math.sqrt(2 * math.pi), rel=1e-15)
    t = FourierTrace.single_mode(0.5, 10, -7)
    assert gk.sobolev_norm(t, 0.5) == pytest.approx(math.sqrt(2 * math.pi * 0.5) * 50 ** 0.25, rel=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 12), st.floats(0.2, 3.0), st.integers(0, 2**32 - 1))
def test_parseval(M, radius, seed):
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(2 * M + 1) + 1j * rng.standard_normal(2 * M + 1)
    t = FourierTrace(radius, M, c)
    n = 8 * M + 16
    theta = 2 * math.pi * np.arange(n) / n
    l2 = math.sqrt(radius * 2 * math.pi / n * float(np.sum(np.abs(t.evaluate(theta)) ** 2)))
    assert gk.sobolev_norm(t, 0.0) == pytest.approx(l2, rel=1e-12)


def test_trace_truncation_roundtrip():
    t = FourierTrace(1.0, 2, np.arange(5))
    assert np.array_equal(t.truncated(4).truncated(2).coeffs, t.coeffs)
    assert t.truncated(1)[2] == 0 and t.truncated(1)[1] == 3
    with pytest.raises(ValueError):
        FourierTrace(1.0, 2, np.zeros(4))


# ------------------------------------------------------------------- blocks
@pytest.mark.parametrize("m", [0, 1, 3])
def test_block_entry_against_quadrature(m):
    cfg = GENERIC
    A, _ = gk.assemble_block(m, cfg)
    a = 2 * math.pi * cfg.r1
    k_out = [double_layer_quadrature(m, k, cfg.r1) for k in (cfg.kappa0.real, cfg.kappa1.real)]
    assert A[1, 0] == pytest.approx(-a * sum(k_out), rel=1e-7)


@pytest.mark.parametrize("m", [0, 4, 40])
def test_block_entries_closed_form(m):
    cfg = EXAMPLE_1
    A, factor = gk.assemble_block(m, cfg)
    r1, r0 = cfg.r1, cfg.r0
    s01, s11 = ops.symbols(m, cfg.kappa0 * r1), ops.symbols(m, cfg.kappa1 * r1)
    s00 = ops.symbols(m, cfg.kappa0 * r0)
    assert A[1, 1] == pytest.approx(-2 * math.pi * r1 * (r1 * s01.lamV + r1 * s11.lamV), rel=1e-13)
    assert A[1, 0] == pytest.approx(2 * math.pi * r1 * (1 + s01.lamK + s11.lamK), rel=1e-13)
    assert factor == pytest.approx(2 * math.pi * r0 * r0 * s00.lamV, rel=1e-13)
    A2, f2 = gk.assemble_block(-m, cfg)
    assert np.array_equal(A, A2) and factor == f2


# ------------------------------------------------------------------- solves
def test_single_mode_support():
    datum = gk.builtin_datum("mode", 40, mode=7)
    sol = gk.solve(GENERIC, datum)
    for tr in sol.traces().values():
        nz = np.nonzero(tr.coeffs)[0] - sol.M
        assert list(nz) == [7]


def test_example1_mode40_equivalence():
    sol = gk.solve(EXAMPLE_1, gk.builtin_datum("mode", 40, mode=40))
    ex = analytic.exact_traces(40, EXAMPLE_1)
    for got, exact in zip((sol.uD1[40], sol.uN1[40], sol.uD0[40], sol.uN0[40]),
                          (ex.d1, ex.n1t, ex.d0, ex.n0t)):
        assert abs(got - exact) <= 1e-8 * abs(exact)


@pytest.mark.parametrize("cfg", [GENERIC, EXAMPLE_1, EQUAL_MEDIA])
def test_equivalence_all_modes(cfg):
    M = 150
    for m in range(0, M + 1, 3):
        x, cond = gk.solve_mode(m, cfg)
        if cond > 1e8:
            continue
        ex = analytic.exact_traces(m, cfg)
        exact = np.array([ex.d1, ex.n1t, ex.d0, ex.n0t])
        assert np.max(np.abs(x - exact)) <= 1e-8 * np.max(np.abs(exact))


@pytest.mark.parametrize("m", [0, 10, 40, 120])
def test_dtn_residual_galerkin(m):
    x, _ = gk.solve_mode(m, EXAMPLE_1, 2.0 - 1.0j)
    assert analytic.dtn_residual(m, EXAMPLE_1, x[2], x[3], 2.0 - 1.0j) <= 1e-8


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_linearity(seed):
    rng = np.random.default_rng(seed)
    M = 12
    a = rng.standard_normal(2 * M + 1) + 1j * rng.standard_normal(2 * M + 1)
    b = rng.standard_normal(2 * M + 1) + 1j * rng.standard_normal(2 * M + 1)
    sa = gk.solve(GENERIC, FourierTrace(1.0, M, a))
    sb = gk.solve(GENERIC, FourierTrace(1.0, M, b))
    sab = gk.solve(GENERIC, FourierTrace(1.0, M, a + b))
    for key in ("uD1", "uN1", "uD0", "uN0"):
        lhs = sab.traces()[key].coeffs
        rhs = sa.traces()[key].coeffs + sb.traces()[key].coeffs
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(1.0, np.max(np.abs(rhs)))


def test_zero_datum_gives_zero():
    sol = gk.solve(EXAMPLE_1, FourierTrace.zeros(1.0, 20))
    for tr in sol.traces().values():
        assert not np.any(tr.coeffs)


def test_threads_do_not_change_result():
    datum = gk.builtin_datum("abs_x2", 80)
    a = gk.solve(EXAMPLE_1, datum, threads=1)
    b = gk.solve(EXAMPLE_1, datum, threads=4)
    for key in a.traces():
        assert np.array_equal(a.traces()[key].coeffs, b.traces()[key].coeffs)


# ------------------------------------------------------------------- errors
def test_finite_mode_datum_reaches_floor():
    datum = gk.expand_datum({0: 1.0, 3: -0.5, -5: 0.25j}, 40, warn=False)
    rep = gk.error_report(GENERIC, datum, [5, 10, 20], reference="galerkin")
    for name in ("eD0", "eN0", "eD1", "eN1"):
        assert all(e <= 1e-12 for e in rep.errors(name))


def test_errors_monotone_against_fixed_reference():
    datum = gk.builtin_datum("abs_x2", 200)
    rep = gk.error_report(EXAMPLE_1, datum, [20, 40, 60, 80, 100], reference="galerkin")
    for name in ("eD0", "eN0", "eD1", "eN1"):
        e = rep.errors(name)
        assert all(e[i + 1] <= e[i] for i in range(len(e) - 1))
    assert rep.reference_M == 200
    assert [row[0] for row in rep.table()] == [20, 40, 60, 80, 100]


def test_reference_too_small():
    datum = gk.builtin_datum("abs_x2", 100)
    with pytest.raises(ReferenceTooSmallError):
        gk.error_report(EXAMPLE_1, datum, [40, 60])
    ref = gk.solve(EXAMPLE_1, gk.builtin_datum("abs_x2", 60))
    with pytest.raises(ReferenceTooSmallError):
        gk.error_report(EXAMPLE_1, datum, [40, 60], reference=ref)


def test_fit_rates_recovers_known_curves():
    M = [10, 20, 40, 80]
    alg = gk.fit_rates(M, [m ** -2.0 for m in M], 1e-30)
    assert alg.algebraic_slope == pytest.approx(-2.0, abs=1e-12)
    exp = gk.fit_rates(M, [math.exp(-0.3 * m) for m in M], 1e-30)
    assert exp.exponential_rate == pytest.approx(0.3, abs=1e-12)
    assert exp.r2_exponential == pytest.approx(1.0, abs=1e-12)
    clipped = gk.fit_rates(M, [1e-3, 1e-9, 1e-16, 1e-16], 1e-14)
    assert clipped.n_points == 3
