"""Field reconstruction from the four traces.

Inside each subdomain the solution is given by its representation
formula, a combination of single- and double-layer potentials of the
traces.  On circles these potentials act diagonally on ``g_m`` with radial
factors ``J_m(k r)/J_m(k R)`` (inside a circle of radius R) and
``H_m(k r)/H_m(k R)`` (outside), so the field is an exact finite Fourier
series at every radius; no quadrature is involved.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import analytic, operators
from . import specfun as sf
from .galerkin import TraceSolution
from .operators import MediumConfig

#: Minimum distance from a circle for potential evaluation.
SURFACE_GUARD = 1e-8


class NearSurfaceError(ValueError):
    """Evaluation point too close to a circle (and not exactly on it)."""


@dataclass
class FieldGrid:
    """Field values on a polar tensor grid; ``values[i, j]`` at ``(r_i, theta_j)``."""

    r_values: np.ndarray
    theta_values: np.ndarray
    values: np.ndarray


@dataclass
class _ModeWeights:
    inner: list   # coefficient of J_m(k1 r) per mode
    outer_h: list  # coefficient of H_m(k0 r)
    outer_j: list  # coefficient of J_m(k0 r)


def _weights(sol: TraceSolution, cfg: MediumConfig) -> _ModeWeights:
    r0, r1 = cfg.r0, cfg.r1
    k0, k1 = cfg.kappa0, cfg.kappa1
    M = sol.M
    inner, outer_h, outer_j = [], [], []
    cache = {}
    for m in range(-M, M + 1):
        n = abs(m)
        if n not in cache:
            v11, kk11, _ = operators.scaled_symbols(n, k1 * r1)
            v01, kk01, _ = operators.scaled_symbols(n, k0 * r1)
            v00, kk00, _ = operators.scaled_symbols(n, k0 * r0)
            cache[n] = (v11, kk11, v01, kk01, v00, kk00,
                        sf.bessel_j(n, k1 * r1), sf.hankel1(n, k0 * r1), sf.bessel_j(n, k0 * r0))
        v11, kk11, v01, kk01, v00, kk00, j11, h01, j00 = cache[n]
        d1, n1t = sol.uD1[m], sol.uN1[m]
        d0, n0t = sol.uD0[m], sol.uN0[m]
        # disc: -S_1 u_N1 + D_1 u_D1
        w_in = (v11 * (-n1t * r1) + (kk11 + 1.0) * d1) / j11
        # annulus, potentials from the inner circle (outgoing)
        w_h = (v01 * (n1t * r1) - kk01 * d1) / h01
        # annulus, potentials from the outer circle (regular)
        w_j = (v00 * (-n0t * r0) + (kk00 + 1.0) * d0) / j00
        inner.append(w_in)
        outer_h.append(w_h)
        outer_j.append(w_j)
    return _ModeWeights(inner, outer_h, outer_j)


def _classify(r: float, cfg: MediumConfig) -> str:
    if r < 0 or r > cfg.r0:
        raise NearSurfaceError(f"r={r} outside [0, r0]")
    if r == cfg.r1:
        return "on_inner"
    if r == cfg.r0:
        return "on_outer"
    if abs(r - cfg.r1) < SURFACE_GUARD or r > cfg.r0 - SURFACE_GUARD:
        raise NearSurfaceError(f"r={r} is within {SURFACE_GUARD:g} of a circle")
    return "inner" if r < cfg.r1 else "outer"


def _coefficients_at(sol: TraceSolution, cfg: MediumConfig, w: _ModeWeights, r: float) -> np.ndarray:
    where = _classify(r, cfg)
    M = sol.M
    if where == "on_inner":
        return sol.uD1.coeffs.copy()
    if where == "on_outer":
        return sol.uD0.coeffs.copy()
    out = np.zeros(2 * M + 1, dtype=complex)
    for i, m in enumerate(range(-M, M + 1)):
        n = abs(m)
        if where == "inner":
            val = w.inner[i] * sf.bessel_j(n, cfg.kappa1 * r)
        else:
            z = cfg.kappa0 * r
            val = w.outer_h[i] * sf.hankel1(n, z) + w.outer_j[i] * sf.bessel_j(n, z)
        out[i] = val.to_complex()
    return out


def mode_field_coefficients(sol: TraceSolution, cfg: MediumConfig, r: float) -> np.ndarray:
    """Fourier coefficients ``c_m(r)`` of the field on the circle of radius ``r``."""
    return _coefficients_at(sol, cfg, _weights(sol, cfg), float(r))


def eval_from_traces(sol: TraceSolution, cfg: MediumConfig, r_values, theta_values, *,
                     threads: int = 1) -> FieldGrid:
    """Evaluate the representation formulas on a polar grid.

    Points exactly on a circle use the Dirichlet trace there; points closer
    than ``1e-8`` to a circle raise :class:`NearSurfaceError`.
    """
    r_values = np.asarray(r_values, dtype=float).ravel()
    theta_values = np.asarray(theta_values, dtype=float).ravel()
    if np.any(np.diff(r_values) < 0) or np.any(np.diff(theta_values) < 0):
        raise ValueError("grid coordinates must be sorted ascending")
    for r in r_values:
        _classify(float(r), cfg)
    w = _weights(sol, cfg)

    def row(r):
        return _coefficients_at(sol, cfg, w, float(r))

    if threads == 1:
        rows = [row(r) for r in r_values]
    else:
        with ThreadPoolExecutor(max_workers=None if threads <= 0 else threads) as pool:
            rows = list(pool.map(row, r_values))
    C = np.array(rows).reshape(len(r_values), 2 * sol.M + 1)
    modes = np.arange(-sol.M, sol.M + 1)
    E = np.exp(1j * np.outer(modes, theta_values))
    return FieldGrid(r_values, theta_values, C @ E)


def interface_limits(sol: TraceSolution, cfg: MediumConfig) -> tuple[np.ndarray, np.ndarray]:
    """One-sided limits at ``r = r1`` of the disc and annulus series."""
    w = _weights(sol, cfg)
    M = sol.M
    inner = np.zeros(2 * M + 1, dtype=complex)
    outer = np.zeros(2 * M + 1, dtype=complex)
    z1, z0 = cfg.kappa1 * cfg.r1, cfg.kappa0 * cfg.r1
    for i, m in enumerate(range(-M, M + 1)):
        n = abs(m)
        inner[i] = (w.inner[i] * sf.bessel_j(n, z1)).to_complex()
        outer[i] = (w.outer_h[i] * sf.hankel1(n, z0) + w.outer_j[i] * sf.bessel_j(n, z0)).to_complex()
    return inner, outer


def interface_jump(sol: TraceSolution, cfg: MediumConfig) -> float:
    """Relative mismatch of the two one-sided Dirichlet limits at ``r1``."""
    inner, outer = interface_limits(sol, cfg)
    scale = max(np.linalg.norm(inner), np.linalg.norm(outer))
    if scale == 0:
        return 0.0
    return float(np.linalg.norm(inner - outer) / scale)


def radial_profile(m: int, cfg: MediumConfig, n_samples: int = 401) -> np.ndarray:
    """Samples ``(r, Re u_m, Im u_m)`` on a uniform grid of ``[0, r0]``.

    The interface radius is always included; there the disc branch is used.
    """
    if n_samples < 3:
        raise ValueError("need at least 3 samples")
    r = np.linspace(0.0, cfg.r0, n_samples)
    if not np.any(r == cfg.r1):
        r = np.sort(np.append(r, cfg.r1))
    coeffs = analytic.mode_coefficients(m, cfg)
    u = np.array([analytic.radial_solution(m, float(x), cfg, coeffs) for x in r])
    return np.column_stack([r, u.real, u.imag])


def peak_radius(profile: np.ndarray) -> tuple[float, float]:
    """Radius and value of ``max |u_m|`` in a radial profile."""
    mag = np.hypot(profile[:, 1], profile[:, 2])
    i = int(np.argmax(mag))
    return float(profile[i, 0]), float(mag[i])


def radial_from_traces(sol: TraceSolution, cfg: MediumConfig, m: int,
                       n_samples: int = 401) -> np.ndarray:
    """Radial coefficient ``c_m(r)`` rebuilt from the Galerkin traces.

    Same grid and column layout as :func:`radial_profile`; on the circles
    the Dirichlet traces are returned.
    """
    if n_samples < 3:
        raise ValueError("need at least 3 samples")
    if abs(m) > sol.M:
        raise ValueError(f"mode {m} is not resolved by M={sol.M}")
    r = np.linspace(0.0, cfg.r0, n_samples)
    if not np.any(r == cfg.r1):
        r = np.sort(np.append(r, cfg.r1))
    # snap samples that fall inside the guard band onto the circle
    r = np.where(np.abs(r - cfg.r1) < SURFACE_GUARD, cfg.r1, r)
    r = np.where(r > cfg.r0 - SURFACE_GUARD, cfg.r0, r)
    w = _weights(sol, cfg)
    i = m + sol.M
    n = abs(m)
    u = np.empty(len(r), dtype=complex)
    for k, x in enumerate(r):
        where = _classify(float(x), cfg)
        if where == "on_inner":
            u[k] = sol.uD1[m]
        elif where == "on_outer":
            u[k] = sol.uD0[m]
        elif where == "inner":
            u[k] = (w.inner[i] * sf.bessel_j(n, cfg.kappa1 * x)).to_complex()
        else:
            z = cfg.kappa0 * x
            u[k] = (w.outer_h[i] * sf.hankel1(n, z) + w.outer_j[i] * sf.bessel_j(n, z)).to_complex()
    return np.column_stack([r, u.real, u.imag])
