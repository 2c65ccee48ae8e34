"""Resonance wavenumbers of a single angular mode.

The resonances of mode ``m`` are the complex zeros (in the reference
wavenumber kappa) of the interface determinant
``W(kappa) = -k1 H_m(k0 r1) J_m'(k1 r1) + k0 J_m(k1 r1) H_m'(k0 r1)``
with ``k_j = kappa sqrt(n_j)``.  They lie below the real axis; for
whispering-gallery modes they are very close to it, so ``|W|`` shows a
deep narrow dip on the real line.  The search scans ``|W|`` on a real grid
and polishes each dip with Newton's method in the complex plane.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .operators import MediumConfig
from .scaled import ScaledComplex
from .specfun import wronskian_hj, wronskian_terms

MAX_ITER = 50
STEP_REL = 1e-6
TOL_REL = 1e-10


class NonConvergenceError(RuntimeError):
    """Newton's method did not converge."""


class PositiveImaginaryPartError(RuntimeError):
    """A root was found in the closed upper half plane."""


@dataclass(frozen=True)
class ResonanceResult:
    """A refined resonance of mode ``m``.

    ``residual`` is ``|W(kappa_star)|`` relative to the larger of the two
    terms of ``W``.
    """

    m: int
    kappa_star: complex
    residual: float
    iterations: int
    scan_window: tuple | None = None


def determinant(m: int, cfg_template: MediumConfig, kappa: complex) -> ScaledComplex:
    """``W`` of mode ``m`` at reference wavenumber ``kappa``."""
    kappa = complex(kappa)
    return wronskian_hj(m, kappa * math.sqrt(cfg_template.n0),
                        kappa * math.sqrt(cfg_template.n1), cfg_template.r1)


def relative_residual(m: int, cfg_template: MediumConfig, kappa: complex) -> float:
    kappa = complex(kappa)
    t1, t2 = wronskian_terms(m, kappa * math.sqrt(cfg_template.n0),
                             kappa * math.sqrt(cfg_template.n1), cfg_template.r1)
    total = t1 + t2
    if total.is_zero():
        return 0.0
    return math.exp(total.log_abs() - max(t1.log_abs(), t2.log_abs()))


def _log_abs_det(m, cfg, kappa):
    return determinant(m, cfg, kappa).log_abs()


def _grid_values(m, cfg, grid, threads):
    if threads == 1:
        return [_log_abs_det(m, cfg, k) for k in grid]
    workers = None if threads <= 0 else threads
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda k: _log_abs_det(m, cfg, k), grid))


def scan(m: int, cfg_template: MediumConfig, kappa_range: tuple[float, float],
         step: float = 0.05, *, threads: int = 1) -> list[float]:
    """Real wavenumbers where ``|W|`` has an interior local minimum.

    Each grid minimum is sharpened on a ten times finer grid spanning its
    two neighbours.  The result is sorted ascending and may be empty.
    """
    lo, hi = float(kappa_range[0]), float(kappa_range[1])
    if not hi > lo:
        raise ValueError("kappa_range must be increasing")
    if not 0 < step <= 0.1:
        raise ValueError("step must lie in (0, 0.1]")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    grid = [lo + i * step for i in range(n)]
    vals = _grid_values(m, cfg_template, grid, threads)
    out = []
    for i in range(1, n - 1):
        if vals[i] < vals[i - 1] and vals[i] <= vals[i + 1]:
            fine = [grid[i - 1] + j * step / 10.0 for j in range(21)]
            fine_vals = [_log_abs_det(m, cfg_template, k) for k in fine]
            out.append(fine[int(np.argmin(fine_vals))])
    return sorted(out)


def refine(m: int, cfg_template: MediumConfig, kappa_guess: complex, *,
           max_iter: int = MAX_ITER, tol: float = TOL_REL,
           scan_window: tuple | None = None) -> ResonanceResult:
    """Newton iteration for a zero of ``W`` starting from ``kappa_guess``.

    The derivative is a central difference with step ``1e-6 |kappa|``.

    Raises
    ------
    NonConvergenceError
        After ``max_iter`` iterations without ``|dk| <= tol |kappa|``.
    PositiveImaginaryPartError
        If the converged root has ``Im(kappa) >= 0``.
    """
    kappa = complex(kappa_guess)
    for it in range(1, max_iter + 1):
        h = STEP_REL * abs(kappa)
        w = determinant(m, cfg_template, kappa)
        dw = (determinant(m, cfg_template, kappa + h)
              - determinant(m, cfg_template, kappa - h)) / (2.0 * h)
        if dw.is_zero():
            raise NonConvergenceError(f"vanishing derivative at kappa={kappa}")
        delta = (w / dw).to_complex() if not w.is_zero() else 0j
        kappa = kappa - delta
        if abs(delta) <= tol * abs(kappa):
            break
    else:
        raise NonConvergenceError(
            f"no convergence for mode {m} after {max_iter} iterations (last {kappa})")
    if not kappa.imag < 0:
        raise PositiveImaginaryPartError(f"root {kappa} of mode {m} is not below the real axis")
    return ResonanceResult(m=m, kappa_star=kappa,
                           residual=relative_residual(m, cfg_template, kappa),
                           iterations=it, scan_window=scan_window)


def find_resonances(m: int, cfg_template: MediumConfig, kappa_range: tuple[float, float],
                    step: float = 0.05, *, threads: int = 1) -> list[ResonanceResult]:
    """Scan then refine; results ordered by ascending real part."""
    window = (float(kappa_range[0]), float(kappa_range[1]))
    found = []
    for guess in scan(m, cfg_template, kappa_range, step, threads=threads):
        try:
            found.append(refine(m, cfg_template, guess, scan_window=window))
        except (NonConvergenceError, PositiveImaginaryPartError):
            continue
    found.sort(key=lambda r: r.kappa_star.real)
    unique = []
    for r in found:
        if unique and abs(r.kappa_star - unique[-1].kappa_star) <= 1e-8 * abs(r.kappa_star):
            continue
        unique.append(r)
    return unique
