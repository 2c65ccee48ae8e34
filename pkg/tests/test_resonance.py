import pytest

from specbem import galerkin as gk
from specbem import resonance as rs
from specbem.operators import EXAMPLE_1, MediumConfig


def test_scan_finds_example_candidates():
    c40 = rs.scan(40, EXAMPLE_1, (80, 100), 0.05)
    assert any(abs(c - 90.11) <= 0.1 for c in c40)
    c60 = rs.scan(60, EXAMPLE_1, (120, 140), 0.05)
    assert any(abs(c - 131.97) <= 0.1 for c in c60)


def test_scan_empty_window():
    assert rs.scan(40, EXAMPLE_1, (10, 20), 0.05) == []
    assert rs.find_resonances(40, EXAMPLE_1, (10, 20)) == []


def test_refine_mode40():
    r = rs.refine(40, EXAMPLE_1, 90.11)
    assert abs(r.kappa_star.real - 90.11) <= 0.01
    assert -1.06e-3 <= r.kappa_star.imag <= -8.7e-4
    assert r.residual <= 1e-9


def test_refine_mode60():
    r = rs.refine(60, EXAMPLE_1, 131.97)
    assert abs(r.kappa_star.real - 131.97) <= 0.01
    assert -4.26e-6 <= r.kappa_star.imag <= -3.48e-6
    assert r.residual <= 1e-9


def test_refine_is_idempotent():
    first = rs.refine(40, EXAMPLE_1, 90.11).kappa_star
    again = rs.refine(40, EXAMPLE_1, first).kappa_star
    assert abs(again - first) <= 1e-12 * abs(first)


def test_find_resonances_sorted_and_below_axis():
    found = rs.find_resonances(40, EXAMPLE_1, (80, 100), threads=4)
    assert found
    re = [r.kappa_star.real for r in found]
    assert re == sorted(re)
    assert all(r.kappa_star.imag < 0 for r in found)
    assert all(r.scan_window == (80.0, 100.0) for r in found)
    assert found == rs.find_resonances(40, EXAMPLE_1, (80, 100), threads=1)


def test_quasi_resonance_conditioning():
    root = rs.refine(40, EXAMPLE_1, 90.11).kappa_star
    near = MediumConfig(kappa=root.real)
    away = MediumConfig(kappa=root.real + 5)
    c_near = gk.block_condition(gk.assemble_block(40, near)[0])
    c_away = gk.block_condition(gk.assemble_block(40, away)[0])
    assert c_near >= 1e3 * c_away


def test_argument_errors():
    with pytest.raises(ValueError):
        rs.scan(40, EXAMPLE_1, (100, 80))
    with pytest.raises(ValueError):
        rs.scan(40, EXAMPLE_1, (80, 100), step=0.5)
    with pytest.raises(rs.NonConvergenceError):
        rs.refine(40, EXAMPLE_1, 90.11, max_iter=1)
