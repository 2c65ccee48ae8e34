import math

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specbem import operators as ops
from specbem.operators import (BLOCKS, DIRECTIONS, EQUAL_MEDIA, EXAMPLE_1, GENERIC, OPS,
                               ConfigError, MediumConfig)


def oracle_symbols(m, x):
    with mp.workdps(40):
        j, jp = mp.besselj(m, x), mp.besselj(m, x, derivative=1)
        h = mp.hankel1(m, x)
        hp = (mp.hankel1(m - 1, x) - mp.hankel1(m + 1, x)) / 2
        c = 1j * mp.pi / 2
        return complex(c * j * h), complex(-c * x * jp * h), complex(c * x * x * jp * hp)


def test_lam_v_reference_value():
    # frozen from the mpmath product (i pi/2) J_0(1) H_0(1) at 40 digits
    s = ops.symbols(0, 1.0)
    assert s.lamV == pytest.approx(-0.106082198153078 + 0.919744445473464j, abs=1e-13)


@pytest.mark.parametrize("m,x", [(0, 1.0), (3, 2.5), (40, 31.86), (40, 45.055), (200, 63.72), (5, 3 + 0.2j)])
def test_symbols_against_oracle(m, x):
    s = ops.symbols(m, x)
    v, k, w = oracle_symbols(m, x)
    for got, exact in ((s.lamV, v), (s.lamK, k), (s.lamW, w)):
        assert abs(got - exact) <= 1e-11 * abs(exact)
    assert s.lamKprime == s.lamK


def test_lam_v_decay_envelope():
    # |lamV| = (pi/2)|J H| <= C/m once m >= e x
    for m in (16, 32, 64, 128, 256, 512):
        x = m / math.e
        assert abs(ops.symbols(m, x).lamV) * m <= 1.0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 400), st.floats(0.1, 300.0))
def test_calderon_product_identity(m, x):
    v, k, w = ops.scaled_symbols(m, x)
    lhs, rhs = v * w, k * (k + 1.0)
    d = lhs - rhs
    scale = max(lhs.log_abs(), rhs.log_abs(), 0.0)
    assert d.is_zero() or math.exp(d.log_abs() - scale) <= 1e-10


def test_same_surface_mass_and_signs():
    cfg = GENERIC
    m = 3
    k0, k1 = cfg.kappa0, cfg.kappa1
    s01, s11, s00 = ops.symbols(m, k0 * cfg.r1), ops.symbols(m, k1 * cfg.r1), ops.symbols(m, k0 * cfg.r0)
    a, b = 2 * math.pi * cfg.r1, 2 * math.pi * cfg.r0
    expect = {
        ("V", "G1k1"): a * cfg.r1 * s11.lamV,
        ("V", "G0k0"): b * cfg.r0 * s00.lamV,
        ("K", "G1k0"): -a * (0.5 + s01.lamK),
        ("K", "G1k1"): a * (0.5 + s11.lamK),
        ("W", "G0k0"): b * s00.lamW / cfg.r0,
        ("W", "G1k0"): a * s01.lamW / cfg.r1,
    }
    for (op, blk), value in expect.items():
        e = ops.same_surface_entry(op, blk, m, cfg)
        assert e.value == pytest.approx(value, rel=1e-13)
        assert e.row_surface == ("G0" if blk == "G0k0" else "G1")


def test_cross_entry_formula_v():
    cfg = EXAMPLE_1
    m = 50
    k0 = cfg.kappa0
    with mp.workdps(40):
        lam = 1j * mp.pi / 2 * mp.besselj(m, k0 * cfg.r0) * mp.hankel1(m, k0 * cfg.r0)
        ratio = mp.besselj(m, k0 * cfg.r1) / mp.besselj(m, k0 * cfg.r0)
        expect = complex(2 * mp.pi * cfg.r0 * cfg.r1 * lam * ratio)
    got = ops.cross_surface_entry("V", "G1<-G0", m, cfg).value
    assert abs(got - expect) <= 1e-11 * abs(expect)


@pytest.mark.parametrize("cfg", [EXAMPLE_1, GENERIC, EQUAL_MEDIA])
@pytest.mark.parametrize("m", [0, 1, 7, 40, 120])
def test_cross_entries_are_reciprocal(cfg, m):
    # symmetric kernel: V and W pair with themselves, K with K' across the circles
    c = ops.mode_entries(m, cfg).cross
    pairs = [(("V", "G0<-G1"), ("V", "G1<-G0")), (("W", "G0<-G1"), ("W", "G1<-G0")),
             (("K", "G1<-G0"), ("Kprime", "G0<-G1")), (("K", "G0<-G1"), ("Kprime", "G1<-G0"))]
    for p, q in pairs:
        assert c[p] == pytest.approx(c[q], rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("m", [0, 5, 60, 301])
def test_entries_even_in_m(m):
    for op in OPS:
        for blk in BLOCKS:
            assert (ops.same_surface_entry(op, blk, m, EXAMPLE_1)
                    == ops.same_surface_entry(op, blk, -m, EXAMPLE_1))
        for d in DIRECTIONS:
            assert (ops.cross_surface_entry(op, d, m, EXAMPLE_1)
                    == ops.cross_surface_entry(op, d, -m, EXAMPLE_1))


def test_cross_coupling_decays_under_envelope():
    cfg = EXAMPLE_1
    prev = None
    for m in range(50, 301, 25):
        cross = abs(ops.cross_surface_entry("V", "G0<-G1", m, cfg).value)
        same = abs(ops.same_surface_entry("V", "G0k0", m, cfg).value)
        ratio = cross / same
        envelope = math.exp((cfg.kappa0.real * cfg.r0 - m) * (cfg.r0 - cfg.r1) / cfg.r0)
        assert ratio <= 10 * envelope
        if prev is not None:
            assert ratio < prev
        prev = ratio
    assert prev < 1e-60


def test_entries_finite_at_high_order():
    cfg = MediumConfig(kappa=200.0)
    for m in (0, 256, 1024):
        e = ops.mode_entries(m, cfg)
        for v in list(e.same.values()) + list(e.cross.values()):
            assert math.isfinite(abs(v))


@pytest.mark.parametrize("kw", [
    dict(r1=1.0), dict(r1=-0.1), dict(n0=0.0), dict(kappa=0.0), dict(kappa=1 - 1j),
    dict(kappa="abc"), dict(r0=float("inf")), dict(n1=True),
])
def test_config_validation(kw):
    with pytest.raises(ConfigError):
        MediumConfig(**kw)


def test_config_derived_wavenumbers():
    cfg = MediumConfig(kappa=4.0, n0=0.25, n1=4.0)
    assert cfg.kappa0 == 2.0 and cfg.kappa1 == 8.0
    low = cfg.with_kappa(4 - 1e-3j, allow_lower=True)
    assert low.kappa.imag < 0 and low.r1 == cfg.r1
    with pytest.raises(ConfigError):
        cfg.with_kappa(4 - 1e-3j)


def test_bad_labels():
    with pytest.raises(ValueError):
        ops.same_surface_entry("X", "G0k0", 1, GENERIC)
    with pytest.raises(ValueError):
        ops.same_surface_entry("V", "G0k1", 1, GENERIC)
    with pytest.raises(ValueError):
        ops.cross_surface_entry("V", "G0<-G0", 1, GENERIC)
