"""Diagonal Galerkin entries of the boundary integral operators.

On a circle every layer operator is diagonal in the angular exponentials
``g_m = exp(i m theta)``.  The eigenvalues are products of a Bessel and a
Hankel factor and are evaluated here in scaled arithmetic, so that the
huge and tiny factors meet before rounding.  Galerkin entries include the
mass ``<g_m, g_m> = 2 pi R`` of the test circle.

Surfaces are labelled ``"G1"`` (inner circle, radius ``r1``) and ``"G0"``
(outer circle, radius ``r0``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Literal

from . import specfun as sf
from .scaled import ScaledComplex

Op = Literal["V", "K", "Kprime", "W"]
Block = Literal["G1k0", "G1k1", "G0k0"]
Direction = Literal["G0<-G1", "G1<-G0"]

OPS: tuple[str, ...] = ("V", "K", "Kprime", "W")
BLOCKS: tuple[str, ...] = ("G1k0", "G1k1", "G0k0")
DIRECTIONS: tuple[str, ...] = ("G0<-G1", "G1<-G0")

_HALF_I_PI = 0.5j * math.pi


class ConfigError(ValueError):
    """Invalid medium or run configuration."""


@dataclass(frozen=True)
class MediumConfig:
    """Two concentric circles with piecewise constant refractive index.

    Parameters
    ----------
    r0, r1 : float
        Outer and inner radius, ``0 < r1 < r0``.
    n0, n1 : float
        Refractive indices of the annulus and of the inner disc.
    kappa : complex
        Reference wavenumber, ``Im(kappa) >= 0`` and ``kappa != 0``.
        The medium wavenumbers ``kappa_j = kappa * sqrt(n_j)`` are derived.
    """

    r0: float = 1.0
    r1: float = 0.5
    n0: float = 0.5
    n1: float = 1.0
    kappa: complex = 90.11

    def __post_init__(self):
        for name in ("r0", "r1", "n0", "n1"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ConfigError(f"{name} must be finite")
            object.__setattr__(self, name, float(value))
        try:
            kappa = complex(self.kappa)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"kappa must be a number, got {self.kappa!r}") from exc
        object.__setattr__(self, "kappa", kappa)
        if not 0 < self.r1 < self.r0:
            raise ConfigError(f"radii must satisfy 0 < r1 < r0, got r1={self.r1}, r0={self.r0}")
        if self.n0 <= 0 or self.n1 <= 0:
            raise ConfigError("refractive indices must be positive")
        if not (math.isfinite(kappa.real) and math.isfinite(kappa.imag)):
            raise ConfigError("kappa must be finite")
        if kappa == 0:
            raise ConfigError("kappa must be nonzero")
        if kappa.imag < 0:
            raise ConfigError(f"Im(kappa) must be >= 0, got {kappa.imag}")

    @property
    def kappa0(self) -> complex:
        return self.kappa * math.sqrt(self.n0)

    @property
    def kappa1(self) -> complex:
        return self.kappa * math.sqrt(self.n1)

    def with_kappa(self, kappa: complex, *, allow_lower: bool = False) -> "MediumConfig":
        """Copy with a new wavenumber.

        ``allow_lower`` bypasses the ``Im(kappa) >= 0`` check; it is used only
        when evaluating functions of kappa below the real axis (resonances).
        """
        if not allow_lower:
            return replace(self, kappa=kappa)
        obj = object.__new__(MediumConfig)
        for name in ("r0", "r1", "n0", "n1"):
            object.__setattr__(obj, name, getattr(self, name))
        object.__setattr__(obj, "kappa", complex(kappa))
        return obj


#: Real parts of the resonances of modes 40 and 60 for the default media,
#: as returned by :func:`specbem.resonance.refine` (checked by the tests).
RESONANCE_M40_RE = 90.11035887650623
RESONANCE_M60_RE = 131.97295008242753

#: Example configurations used throughout the tests and scripts.  The first
#: two sit on the real part of a resonance; examples 3 and 4 reuse the first.
EXAMPLE_1 = MediumConfig(kappa=RESONANCE_M40_RE)
EXAMPLE_2 = MediumConfig(kappa=RESONANCE_M60_RE)
EQUAL_MEDIA = MediumConfig(n0=1.0, n1=1.0, kappa=20.0)
GENERIC = MediumConfig(kappa=5.0)


@dataclass(frozen=True)
class OperatorSymbol:
    """Eigenvalues of V, K, K' and W on a circle for one mode and argument."""

    lamV: complex
    lamK: complex
    lamKprime: complex
    lamW: complex


@dataclass(frozen=True)
class GalerkinEntry:
    """One diagonal Galerkin entry, tested on ``row_surface``."""

    row_surface: Literal["G0", "G1"]
    value: complex


def scaled_symbols(m: int, x: complex) -> tuple[ScaledComplex, ScaledComplex, ScaledComplex]:
    """Scaled ``(lamV, lamK, lamW)`` for mode ``m`` at argument ``x``.

    ``lamV = (i pi/2) J H``, ``lamK = -(i pi/2) x J' H`` and
    ``lamW = (i pi/2) x^2 J' H'`` with ``J = J_m(x)``, ``H = H^(1)_m(x)``.
    """
    x = complex(x)
    j = sf.bessel_j(m, x)
    jp = sf.deriv("J", m, x)
    h = sf.hankel1(m, x)
    hp = sf.deriv("H1", m, x)
    lam_v = j * h * _HALF_I_PI
    lam_k = jp * h * (-_HALF_I_PI * x)
    lam_w = jp * hp * (_HALF_I_PI * x * x)
    return lam_v, lam_k, lam_w


def symbols(m: int, x: complex) -> OperatorSymbol:
    """Operator eigenvalues as plain complex numbers (``lamKprime == lamK``)."""
    lam_v, lam_k, lam_w = scaled_symbols(m, x)
    k = lam_k.to_complex()
    return OperatorSymbol(lamV=lam_v.to_complex(), lamK=k, lamKprime=k, lamW=lam_w.to_complex())


@dataclass
class ModeEntries:
    """Every diagonal entry needed for one mode, computed in one pass."""

    m: int
    same: dict = field(default_factory=dict)   # (op, block) -> complex
    cross: dict = field(default_factory=dict)  # (op, direction) -> complex


def mode_entries(m: int, cfg: MediumConfig) -> ModeEntries:
    """All same-surface and cross-surface entries of mode ``m``."""
    m = abs(int(m))
    r0, r1 = cfg.r0, cfg.r1
    k0, k1 = cfg.kappa0, cfg.kappa1
    a = 2.0 * math.pi * r1
    b = 2.0 * math.pi * r0
    z01, z11, z00 = k0 * r1, k1 * r1, k0 * r0

    v01, kk01, w01 = scaled_symbols(m, z01)
    v11, kk11, w11 = scaled_symbols(m, z11)
    v00, kk00, w00 = scaled_symbols(m, z00)

    out = ModeEntries(m)
    s = out.same
    s[("V", "G1k0")] = a * r1 * v01.to_complex()
    s[("K", "G1k0")] = -a * (0.5 + kk01.to_complex())
    s[("W", "G1k0")] = a * w01.to_complex() / r1
    s[("V", "G1k1")] = a * r1 * v11.to_complex()
    s[("K", "G1k1")] = a * (0.5 + kk11.to_complex())
    s[("W", "G1k1")] = a * w11.to_complex() / r1
    s[("V", "G0k0")] = b * r0 * v00.to_complex()
    s[("K", "G0k0")] = b * (0.5 + kk00.to_complex())
    s[("W", "G0k0")] = b * w00.to_complex() / r0
    for blk in BLOCKS:
        s[("Kprime", blk)] = s[("K", blk)]

    # ratios of radial functions between the two circles; all decay with m
    h_out_over_in = sf.hankel1(m, z00) / sf.hankel1(m, z01)
    hp_out_over_in = sf.deriv("H1", m, z00) / sf.hankel1(m, z01)
    j_in_over_out = sf.bessel_j(m, z01) / sf.bessel_j(m, z00)
    jp_in_over_out = sf.deriv("J", m, z01) / sf.bessel_j(m, z00)

    c = out.cross
    two_pi = 2.0 * math.pi
    c[("V", "G0<-G1")] = (v01 * h_out_over_in * (two_pi * r0 * r1)).to_complex()
    c[("K", "G0<-G1")] = (kk01 * h_out_over_in * (-two_pi * r0)).to_complex()
    c[("Kprime", "G0<-G1")] = (v01 * hp_out_over_in * (-two_pi * r0 * r1 * k0)).to_complex()
    c[("W", "G0<-G1")] = (kk01 * hp_out_over_in * (two_pi * r0 * k0)).to_complex()
    c[("V", "G1<-G0")] = (v00 * j_in_over_out * (two_pi * r0 * r1)).to_complex()
    c[("K", "G1<-G0")] = ((kk00 + 1.0) * j_in_over_out * (two_pi * r1)).to_complex()
    c[("Kprime", "G1<-G0")] = (v00 * jp_in_over_out * (two_pi * r0 * r1 * k0)).to_complex()
    c[("W", "G1<-G0")] = ((kk00 + 1.0) * jp_in_over_out * (two_pi * r1 * k0)).to_complex()
    return out


def _check_op(op: str) -> None:
    if op not in OPS:
        raise ValueError(f"op must be one of {OPS}, got {op!r}")


def same_surface_entry(op: Op, block: Block, m: int, cfg: MediumConfig) -> GalerkinEntry:
    """Galerkin entry of a same-surface operator.

    ``block`` selects the test/trial circle and wavenumber: ``"G1k0"`` is the
    inner circle seen from the annulus, ``"G1k1"`` the inner circle seen
    from the disc and ``"G0k0"`` the outer circle.
    """
    _check_op(op)
    if block not in BLOCKS:
        raise ValueError(f"block must be one of {BLOCKS}, got {block!r}")
    value = mode_entries(m, cfg).same[(op, block)]
    return GalerkinEntry("G0" if block == "G0k0" else "G1", value)


def cross_surface_entry(op: Op, direction: Direction, m: int, cfg: MediumConfig) -> GalerkinEntry:
    """Galerkin entry coupling the two circles (annulus wavenumber).

    ``"G0<-G1"`` tests on the outer circle a density living on the inner one,
    ``"G1<-G0"`` the converse.
    """
    _check_op(op)
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    value = mode_entries(m, cfg).cross[(op, direction)]
    return GalerkinEntry("G0" if direction == "G0<-G1" else "G1", value)
