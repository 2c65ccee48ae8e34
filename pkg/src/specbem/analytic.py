"""Mode-by-mode exact solution for the two-circle transmission problem.

For the datum ``g = g_m`` on the outer circle the solution is
``u = u_m(r) g_m`` with

* ``u_m(r) = A12 J_m(k1 r)`` in the inner disc ``r < r1``,
* ``u_m(r) = A01 H_m(k0 r) + A02 J_m(k0 r)`` in the annulus ``r1 < r < r0``.

``A02 = (i pi r0 / 2) H_m(k0 r0)`` normalizes the impedance condition on
the outer circle and ``(A01, A12)`` solve the 2x2 interface system.  The
coefficients can overflow double precision for very high modes even
though the traces they produce are moderate, so they are kept in scaled
form.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from . import specfun as sf
from .operators import MediumConfig
from .scaled import ScaledComplex

#: Relative size of the interface determinant below which a mode is
#: reported as quasi-resonant.
QUASI_RESONANCE_TOL = 1e-12


class QuasiResonanceWarning(UserWarning):
    """The interface determinant is tiny compared with its two terms."""


@dataclass(frozen=True)
class ModeCoefficients:
    """Radial coefficients of one mode.

    Attributes
    ----------
    a01, a02, a11, a12 : ScaledComplex
        Coefficients of ``H_m(k0 r)``, ``J_m(k0 r)`` in the annulus and
        ``H_m(k1 r)`` (always zero), ``J_m(k1 r)`` in the inner disc.
    determinant : ScaledComplex
        Determinant of the interface system,
        ``-k1 H_m(k0 r1) J_m'(k1 r1) + k0 J_m(k1 r1) H_m'(k0 r1)``.
    relative_determinant : float
        ``|determinant|`` divided by the larger of its two terms.
    residual : float
        Relative residual of the interface system at the computed solution.
    """

    m: int
    a01: ScaledComplex
    a02: ScaledComplex
    a11: ScaledComplex
    a12: ScaledComplex
    determinant: ScaledComplex
    relative_determinant: float
    residual: float


@dataclass(frozen=True)
class ScatteringFunctions:
    """``R_m``, ``T_m`` and ``S_m`` with ``(A01, A12) = A02 (R, T)``."""

    R: complex
    T: complex
    S: complex


@dataclass(frozen=True)
class ExactTraces:
    """Per-mode factors of the four traces (datum coefficient ``alpha_m = 1``).

    ``d1``/``n1t`` are the Dirichlet and Neumann traces on the inner circle,
    ``d0``/``n0t`` those on the outer circle, with the Neumann traces carrying
    a minus sign and the medium wavenumber.
    """

    d1: complex
    n1t: complex
    d0: complex
    n0t: complex


def _relative_gap(total: ScaledComplex, *terms: ScaledComplex) -> float:
    scale = max(t.log_abs() for t in terms)
    if total.is_zero():
        return 0.0
    if scale == -math.inf:
        return math.inf
    return math.exp(min(total.log_abs() - scale, 700.0))


def mode_coefficients(m: int, cfg: MediumConfig, *, warn: bool = True) -> ModeCoefficients:
    """Solve the interface system of mode ``m`` by Cramer's rule in scaled form.

    Warns with :class:`QuasiResonanceWarning` when the determinant is below
    ``1e-12`` of its natural scale; the coefficients are still returned.
    """
    m = abs(int(m))
    k0, k1 = cfg.kappa0, cfg.kappa1
    z01, z11, z00 = k0 * cfg.r1, k1 * cfg.r1, k0 * cfg.r0

    h01 = sf.hankel1(m, z01)
    hp01 = sf.deriv("H1", m, z01)
    j01 = sf.bessel_j(m, z01)
    jp01 = sf.deriv("J", m, z01)
    j11 = sf.bessel_j(m, z11)
    jp11 = sf.deriv("J", m, z11)

    a02 = sf.hankel1(m, z00) * (0.5j * math.pi * cfg.r0)

    term1 = h01 * jp11 * (-k1)
    term2 = j11 * hp01 * k0
    det = term1 + term2
    rel_det = _relative_gap(det, term1, term2)
    if det.is_zero():
        raise ZeroDivisionError(f"interface determinant vanishes for mode {m}")
    if warn and rel_det < QUASI_RESONANCE_TOL:
        warnings.warn(f"mode {m}: interface determinant is {rel_det:.2e} of its scale "
                      f"(quasi-resonance at kappa={cfg.kappa})", QuasiResonanceWarning,
                      stacklevel=2)

    # Cramer's rule for
    #   [ H(k0r1)       -J(k1r1)      ] [A01]        [ J(k0r1)      ]
    #   [ k0 H'(k0r1)   -k1 J'(k1r1)  ] [A12] = -A02 [ k0 J'(k0r1)  ]
    a01 = a02 * (j01 * jp11 * k1 - j11 * jp01 * k0) / det
    a12 = a02 * (j01 * hp01 * k0 - h01 * jp01 * k0) / det

    # residual of both rows, relative to the largest term in each row
    res = 0.0
    row1 = (h01 * a01, -(j11 * a12), a02 * j01)
    row2 = (hp01 * a01 * k0, -(jp11 * a12 * k1), a02 * jp01 * k0)
    for row in (row1, row2):
        total = row[0] + row[1] + row[2]
        res = max(res, _relative_gap(total, *row))

    return ModeCoefficients(m=m, a01=a01, a02=a02, a11=ScaledComplex.zero(), a12=a12,
                            determinant=det, relative_determinant=rel_det, residual=res)


def scattering_functions(m: int, cfg: MediumConfig) -> ScatteringFunctions:
    """``R_m``, ``T_m``, ``S_m`` such that ``A01 = A02 R`` and ``A12 = A02 T``.

    ``S_m = -R_m H_m(k0 r1) / J_m(k0 r1)``.
    """
    m = abs(int(m))
    coeffs = mode_coefficients(m, cfg)
    z01 = cfg.kappa0 * cfg.r1
    r = coeffs.a01 / coeffs.a02
    t = coeffs.a12 / coeffs.a02
    s = -(r * sf.hankel1(m, z01) / sf.bessel_j(m, z01))
    return ScatteringFunctions(R=r.to_complex(), T=t.to_complex(), S=s.to_complex())


def s_from_interface(m: int, cfg: MediumConfig) -> tuple[complex, complex]:
    """``S_m`` recovered from the Dirichlet and from the Neumann interface rows.

    Independent cross-checks of :func:`scattering_functions`:
    ``A12 J(k1 r1) = A02 (1 - S) J(k0 r1)`` and
    ``k1 A12 J'(k1 r1) = A02 k0 (J'(k0 r1)/J(k0 r1) - S H'(k0 r1)/H(k0 r1)) J(k0 r1)``.
    """
    m = abs(int(m))
    c = mode_coefficients(m, cfg)
    k0, k1 = cfg.kappa0, cfg.kappa1
    z01, z11 = k0 * cfg.r1, k1 * cfg.r1
    j01 = sf.bessel_j(m, z01)
    s_dirichlet = 1.0 - (c.a12 * sf.bessel_j(m, z11) / (c.a02 * j01)).to_complex()
    lhs = c.a12 * sf.deriv("J", m, z11) * k1 / (c.a02 * j01 * k0)
    s_neumann = ((sf.deriv("J", m, z01) / j01 - lhs) * sf.hankel1(m, z01)
                 / sf.deriv("H1", m, z01)).to_complex()
    return s_dirichlet, s_neumann


def exact_traces_scaled(m: int, cfg: MediumConfig,
                        coeffs: ModeCoefficients | None = None) -> tuple[ScaledComplex, ...]:
    """Scaled ``(d1, n1t, d0, n0t)``; see :func:`exact_traces`."""
    m = abs(int(m))
    c = coeffs if coeffs is not None else mode_coefficients(m, cfg)
    k0, k1 = cfg.kappa0, cfg.kappa1
    z11, z00 = k1 * cfg.r1, k0 * cfg.r0
    d1 = c.a12 * sf.bessel_j(m, z11)
    n1t = c.a12 * sf.deriv("J", m, z11) * (-k1)
    d0 = c.a01 * sf.hankel1(m, z00) + c.a02 * sf.bessel_j(m, z00)
    n0t = (c.a01 * sf.deriv("H1", m, z00) + c.a02 * sf.deriv("J", m, z00)) * (-k0)
    return d1, n1t, d0, n0t


def exact_traces(m: int, cfg: MediumConfig) -> ExactTraces:
    """Exact trace factors of mode ``m`` for a unit datum coefficient."""
    d1, n1t, d0, n0t = (v.to_complex() for v in exact_traces_scaled(m, cfg))
    return ExactTraces(d1=d1, n1t=n1t, d0=d0, n0t=n0t)


def radial_solution(m: int, r: float, cfg: MediumConfig,
                    coeffs: ModeCoefficients | None = None) -> complex:
    """Radial profile ``u_m(r)`` for ``0 <= r <= r0``.

    At ``r == r1`` the inner-disc branch is returned.
    """
    m = abs(int(m))
    if not 0.0 <= r <= cfg.r0:
        raise ValueError(f"r must lie in [0, {cfg.r0}], got {r}")
    c = coeffs if coeffs is not None else mode_coefficients(m, cfg)
    if r <= cfg.r1:
        return (c.a12 * sf.bessel_j(m, cfg.kappa1 * r)).to_complex()
    z = cfg.kappa0 * r
    return (c.a01 * sf.hankel1(m, z) + c.a02 * sf.bessel_j(m, z)).to_complex()


def dtn_symbol(m: int, cfg: MediumConfig) -> complex:
    """Outgoing Dirichlet-to-Neumann eigenvalue ``k0 H_m'(k0 r0) / H_m(k0 r0)``."""
    z = cfg.kappa0 * cfg.r0
    return (sf.deriv("H1", m, z) / sf.hankel1(m, z) * cfg.kappa0).to_complex()


def dtn_residual(m: int, cfg: MediumConfig, d0: complex, n0t: complex, alpha: complex) -> float:
    """Relative defect of the impedance condition on the outer circle.

    With the trace convention of :func:`exact_traces` the radial derivative
    on the outer circle is ``-n0t``, so the condition reads
    ``-n0t - dtn_symbol * d0 = alpha``.
    """
    lhs = -n0t - dtn_symbol(m, cfg) * d0
    scale = max(abs(alpha), 1e-300)
    return abs(lhs - alpha) / scale
