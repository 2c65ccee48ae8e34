"""Executable checks of the Bessel and Fourier-coefficient inequalities.

Each check samples one inequality on a grid inside its hypothesis and
reports the supremum of ``LHS / RHS``.  The Bessel and exponential
inequalities are theorems with explicit constants, so they must hold with
ratio at most one (up to rounding).  The Fourier-coefficient bounds and the
truncation-error envelopes carry an unquantified constant; it is set to one
and the measured supremum is required to stay below :data:`UNIFORM_BOUND`,
which detects a wrong exponent or rate without pinning a constant.

All comparisons are made on logarithms of scaled values, so extreme
orders and arguments neither overflow nor underflow.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import analytic
from . import galerkin
from . import specfun as sf
from .operators import EXAMPLE_1, MediumConfig

#: Pass threshold for measured ratios of bounds with an unspecified constant.
UNIFORM_BOUND = 100.0
#: Slack for inequalities with explicit constants (rounding of both sides).
ROUNDING_SLACK = 1e-9

DEFAULT_ETA = 0.9
#: Sobolev index offset used for the datum ``|x_2|`` (``s = 3/2 - eps``).
ABS_X2_EPS = 1e-3


class HypothesisError(ValueError):
    """A sample point lies outside the hypothesis of the inequality."""


@dataclass(frozen=True)
class ConvergenceParams:
    """Free parameters of the decay estimates.

    Parameters
    ----------
    eta : float
        In ``(0, 1)``.
    mu : float
        Must exceed ``e / (2 eta)``.
    s : float
        Sobolev order of the datum.
    r0, r1 : float
        Radii, used for ``nu``.
    kappa_max : float
        ``max(kappa0, kappa1)``, used for the truncation threshold.
    """

    eta: float
    mu: float
    s: float
    r0: float
    r1: float
    kappa_max: float

    def __post_init__(self):
        if not 0 < self.eta < 1:
            raise ValueError(f"eta must lie in (0, 1), got {self.eta}")
        if not self.mu > math.e / (2 * self.eta):
            raise ValueError(f"mu must exceed e/(2 eta) = {math.e / (2 * self.eta):.6g}")
        if not 0 < self.r1 < self.r0:
            raise ValueError("radii must satisfy 0 < r1 < r0")

    @property
    def nu(self) -> float:
        return 0.5 * ((self.r0 - self.r1) / self.r0) * ((self.mu - 1.0) / self.mu)

    @property
    def M_threshold(self) -> float:
        return 2.0 + self.r0 * self.mu * self.kappa_max

    @classmethod
    def default(cls, cfg: MediumConfig, s: float = 0.0, eta: float = DEFAULT_ETA,
                mu: float | None = None) -> "ConvergenceParams":
        """``mu = e/(2 eta) + 0.1`` unless given."""
        if mu is None:
            mu = math.e / (2 * eta) + 0.1
        kmax = max(abs(cfg.kappa0), abs(cfg.kappa1))
        return cls(eta=eta, mu=mu, s=s, r0=cfg.r0, r1=cfg.r1, kappa_max=kmax)


@dataclass
class BoundCheckReport:
    """Outcome of sampling one inequality.

    ``max_ratio`` is the supremum of ``LHS / RHS`` over the grid and
    ``argmax`` the sample where it is attained.
    """

    id: str
    grid: str
    n_samples: int
    max_ratio: float
    constant: float
    argmax: tuple = ()
    passed: bool = field(init=False)

    def __post_init__(self):
        if self.n_samples <= 0:
            raise ValueError(f"{self.id}: empty sample grid")
        if not math.isfinite(self.max_ratio):
            raise ArithmeticError(f"{self.id}: non-finite ratio at {self.argmax}")
        self.passed = self.max_ratio <= self.constant

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return (f"{flag} {self.id:<16s} max_ratio={self.max_ratio:.6g} "
                f"(<= {self.constant:g}, n={self.n_samples}, at {self.argmax})")


def _abs_log(v) -> float:
    return v.log_abs()


def _ratio(log_lhs: float, log_rhs: float) -> float:
    if log_lhs == -math.inf:
        return 0.0
    return math.exp(min(log_lhs - log_rhs, 700.0))


class _Sup:
    """Running supremum of ratios together with the sample that attains it."""

    def __init__(self):
        self.value = 0.0
        self.where: tuple = ()
        self.count = 0

    def add(self, ratio: float, where: tuple) -> None:
        self.count += 1
        if not math.isfinite(ratio):
            raise ArithmeticError(f"non-finite ratio at {where}")
        if ratio > self.value or not self.where:
            self.value, self.where = ratio, where

    def merge(self, other: "_Sup") -> None:
        self.count += other.count
        if other.where and (other.value > self.value or not self.where):
            self.value, self.where = other.value, other.where

    def report(self, id_: str, grid: str, constant: float) -> BoundCheckReport:
        return BoundCheckReport(id=id_, grid=grid, n_samples=self.count,
                                max_ratio=self.value, constant=constant,
                                argmax=tuple(round(float(w), 12) for w in self.where))


# --------------------------------------------------------------------------
# Appendix inequalities
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class AppendixGrid:
    """Sample grid for the Bessel and exponential inequalities.

    ``fractions`` are the arguments ``x / m`` in ``(0, 1]``; the two-argument
    inequality uses every ordered pair of them.  The exponential estimates
    run over the orders ``m`` in ``[m_lo, 4 m_lo]`` where ``m_lo`` is the
    smallest integer satisfying their hypothesis for ``cfg``.
    """

    orders: tuple = (1, 2, 3, 5, 10, 20, 40, 60, 100, 200, 300, 400)
    n_fractions: int = 16
    cfg: MediumConfig = EXAMPLE_1
    eta: float = DEFAULT_ETA
    mu: float | None = None

    @property
    def fractions(self) -> np.ndarray:
        # avoid x = 0 exactly; cluster towards both ends
        t = (np.arange(1, self.n_fractions + 1) - 0.5) / self.n_fractions
        pts = np.concatenate([[1e-3], 0.5 - 0.5 * np.cos(np.pi * t), [1.0]])
        return np.unique(pts[pts >= 1e-3])

    def params(self) -> ConvergenceParams:
        return ConvergenceParams.default(self.cfg, eta=self.eta, mu=self.mu)

    def refined(self) -> "AppendixGrid":
        return AppendixGrid(self.orders, 2 * self.n_fractions, self.cfg, self.eta, self.mu)


def _require(cond: bool, what: str) -> None:
    if not cond:
        raise HypothesisError(what)


def jmdiffarg_ratio(m: int, x: float, y: float) -> float:
    """``J_m(x) / (e^(y-x) (x/y)^m J_m(y))`` for ``0 < x <= y <= m``."""
    _require(m >= 1 and 0 < x <= y <= m, f"Jmdiffarg needs 0 < x <= y <= m, got {(m, x, y)}")
    lhs = _abs_log(sf.bessel_j(m, x))
    rhs = (y - x) + m * math.log(x / y) + _abs_log(sf.bessel_j(m, y))
    return _ratio(lhs, rhs)


def _log_jprime_over_j(m: int, x: float) -> float:
    return _abs_log(sf.deriv("J", m, x) / sf.bessel_j(m, x))


def jmest2_ratio(m: int, x: float) -> float:
    """``(J_m'(x)/J_m(x)) / (m/x)`` for ``0 < x <= m``.

    The sharper intermediate bound ``m/x - x/(2(m+1))`` is checked too and
    the larger of the two ratios is returned.
    """
    _require(m >= 1 and 0 < x <= m, f"Jmest2 needs 0 < x <= m, got {(m, x)}")
    jp = sf.deriv("J", m, x).mantissa.real
    j = sf.bessel_j(m, x).mantissa.real
    if j <= 0 or jp < 0:
        # outside the positive range the quotient form would be meaningless
        raise ArithmeticError(f"J_{m}({x}) or its derivative has the wrong sign")
    q = _log_jprime_over_j(m, x)
    sharp = m / x - x / (2.0 * (m + 1))
    r_sharp = _ratio(q, math.log(sharp)) if sharp > 0 else math.inf
    return max(_ratio(q, math.log(m / x)), r_sharp)


def hankelmono_ratio(m: int, x: float) -> float:
    """``|H'/H| / ((10/3)|J'/J|)`` and ``(10/3)|J'/J| / ((10/3) m/x)``, maximum."""
    _require(m >= 1 and 0 < x <= m, f"Hankelmono needs 0 < x <= m, got {(m, x)}")
    lh = _abs_log(sf.deriv("H1", m, x) / sf.hankel1(m, x))
    lj = _log_jprime_over_j(m, x)
    c = math.log(10.0 / 3.0)
    return max(_ratio(lh, c + lj), _ratio(lj, math.log(m / x)))


def hankelmono_value(m: int, x: float) -> tuple[float, float]:
    """``(|H_m'(x)/H_m(x)|, (10/3) m/x)``."""
    v = (sf.deriv("H1", m, x) / sf.hankel1(m, x)).to_complex()
    return abs(v), 10.0 / 3.0 * m / x


def consecj_ratio(m: int, x: float) -> float:
    """Chain ``J_m/J_{m-1} < T(x) <= T(m-1) <= 1`` on ``0 < x <= m - 1``.

    ``T(x) = (m - sqrt(m^2 - q x^2)) / (q x)`` with ``q = m/(m+1)``; returns
    the largest ratio of consecutive members of the chain.
    """
    _require(m >= 2 and 0 < x <= m - 1, f"consecJ needs m >= 2 and 0 < x <= m-1, got {(m, x)}")
    q = m / (m + 1.0)

    def T(t):
        # rationalized to avoid cancellation for small t
        return t / (m + math.sqrt(m * m - q * t * t))

    lhs = _abs_log(sf.bessel_j(m, x) / sf.bessel_j(m - 1, x))
    t_x, t_top = T(x), T(m - 1.0)
    return max(_ratio(lhs, math.log(t_x)), t_x / t_top, t_top)


def jyest_ratio(m: int, x: float) -> float:
    """``|J_m(x) Y_m(x)| / (2.09 / (2 pi sqrt(m^2 - x^2)))`` for ``0 < x < m``."""
    _require(m >= 1 and 0 < x < m, f"JYest needs 0 < x < m, got {(m, x)}")
    lhs = _abs_log(sf.bessel_j(m, x) * sf.bessel_y(m, x))
    rhs = math.log(2.09 / (2.0 * math.pi)) - 0.5 * math.log((m - x) * (m + x))
    return _ratio(lhs, rhs)


def jmest_ratio(m: int, x: float) -> float:
    """``|J_m(x)| / ((x/2)^m / m!)`` and ``((x/2)^m/m!) / (e x / (2m))^m``, maximum."""
    _require(m >= 1 and x > 0, f"Jmest needs m >= 1 and x > 0, got {(m, x)}")
    lhs = _abs_log(sf.bessel_j(m, x))
    mid = m * math.log(x / 2.0) - math.lgamma(m + 1.0)
    top = m * math.log(math.e * x / (2.0 * m))
    return max(_ratio(lhs, mid), _ratio(mid, top))


def _exp_terms(cfg: MediumConfig):
    k0 = cfg.kappa0.real
    k1 = cfg.kappa1.real
    delta = (cfg.r0 - cfg.r1) / cfg.r0
    return k0, k1, delta


def log_envelope(m: float, cfg: MediumConfig) -> float:
    """``log(e^(k0 (r0 - r1)) (r1/r0)^m)``."""
    k0 = cfg.kappa0.real
    return k0 * (cfg.r0 - cfg.r1) + m * math.log(cfg.r1 / cfg.r0)


def expest_ratio(m: int, cfg: MediumConfig) -> float:
    _require(m >= 0 and cfg.kappa0.real > 0, f"expest needs m >= 0, kappa0 > 0, got m={m}")
    k0, _, delta = _exp_terms(cfg)
    return _ratio(log_envelope(m, cfg), (k0 * cfg.r0 - m) * delta)


def exp2nue_ratio(m: int, cfg: MediumConfig, params: ConvergenceParams) -> float:
    """``e^((k0 r0 - m) delta) / e^(-2 nu m)`` for ``m >= mu k0 r0``; the
    chain starting from the envelope is checked as well."""
    k0, _, delta = _exp_terms(cfg)
    _require(m >= params.mu * k0 * cfg.r0, f"exp2nue needs m >= mu k0 r0, got m={m}")
    mid = (k0 * cfg.r0 - m) * delta
    rhs = -2.0 * params.nu * m
    return max(_ratio(mid, rhs), _ratio(log_envelope(m, cfg), rhs))


def combineexpest_ratio(m: int, cfg: MediumConfig, params: ConvergenceParams) -> float:
    k0, k1, _ = _exp_terms(cfg)
    _require(m >= params.mu * max(k0, k1) * cfg.r0,
             f"combineexpest needs m >= mu max(k0, k1) r0, got m={m}")
    dk = abs(cfg.kappa0 - cfg.kappa1)
    if dk == 0:
        return 0.0
    lhs = math.log(dk * cfg.r1) - math.log(m) / 3.0 + log_envelope(m, cfg)
    rhs = -math.log(params.nu) - params.nu * m
    return _ratio(lhs, rhs)


def exp_orders(cfg: MediumConfig, params: ConvergenceParams, which: str) -> list[int]:
    """Orders ``[m_lo, 4 m_lo]`` for the exponential estimates."""
    k0, k1, _ = _exp_terms(cfg)
    if which == "expest":
        lo = 0
        hi = max(8, int(math.ceil(4 * params.mu * k0 * cfg.r0)))
    elif which == "exp2nue":
        lo = int(math.ceil(params.mu * k0 * cfg.r0))
        hi = 4 * max(lo, 1)
    else:
        lo = int(math.ceil(params.mu * max(k0, k1) * cfg.r0))
        hi = 4 * max(lo, 1)
    return list(range(lo, hi + 1))


def _run(fn, items, threads: int) -> list:
    if threads == 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=None if threads <= 0 else threads) as pool:
        return list(pool.map(fn, items))


def _sup_over(id_: str, func, points: list, grid: str, constant: float,
              threads: int) -> BoundCheckReport:
    ratios = _run(lambda p: func(*p), points, threads)
    sup = _Sup()
    for p, r in zip(points, ratios):
        sup.add(r, p)
    return sup.report(id_, grid, constant)


def check_appendix(grid: AppendixGrid | None = None, *, threads: int = 1) -> list[BoundCheckReport]:
    """One report per appendix inequality, in a fixed order.

    Each must hold at every sample, so the pass constant is ``1`` plus a
    rounding slack.
    """
    grid = grid or AppendixGrid()
    params = grid.params()
    cfg = grid.cfg
    one = 1.0 + ROUNDING_SLACK
    fr = grid.fractions
    desc = f"m in {list(grid.orders)}, x/m on {len(fr)} points"
    reports = []

    pairs = [(m, a * m, b * m) for m in grid.orders if m >= 1
             for i, a in enumerate(fr) for b in fr[i:]]
    reports.append(_sup_over("Jmdiffarg", jmdiffarg_ratio, pairs, desc + " (pairs x<=y)", one, threads))

    pts = [(m, a * m) for m in grid.orders if m >= 1 for a in fr]
    reports.append(_sup_over("Hankelmono", hankelmono_ratio, pts, desc, one, threads))
    reports.append(_sup_over("Jmest2", jmest2_ratio, pts, desc, one, threads))

    pts_c = [(m, a * (m - 1)) for m in grid.orders if m >= 2 for a in fr]
    reports.append(_sup_over("consecJ", consecj_ratio, pts_c, desc + " (x <= m-1)", one, threads))

    pts_y = [(m, a * m) for m in grid.orders if m >= 1 for a in fr if a < 1]
    reports.append(_sup_over("JYest", jyest_ratio, pts_y, desc + " (x < m)", one, threads))

    pts_j = [(m, a * m) for m in grid.orders if m >= 1
             for a in np.concatenate([fr, 2 * fr[1:]]) if a * m <= sf.MAX_ABS_Z]
    reports.append(_sup_over("Jmest", jmest_ratio, pts_j, desc + " and x/m up to 2", one, threads))

    for name, fn in (("expest", lambda m: expest_ratio(m, cfg)),
                     ("exp2nue", lambda m: exp2nue_ratio(m, cfg, params)),
                     ("combineexpest", lambda m: combineexpest_ratio(m, cfg, params))):
        orders = exp_orders(cfg, params, name)
        sup = _Sup()
        for m in orders:
            sup.add(fn(m), (m,))
        reports.append(sup.report(name, f"m in [{orders[0]}, {orders[-1]}]", one))
    return reports


# --------------------------------------------------------------------------
# Fourier-coefficient decay
# --------------------------------------------------------------------------

FOURIER_ITEMS = ("a", "b", "c", "d", "e", "f")


def fourier_thresholds(cfg: MediumConfig, params: ConvergenceParams) -> dict[str, float]:
    """Smallest admissible ``|m|`` of every item."""
    k0, k1 = cfg.kappa0.real, cfg.kappa1.real
    base = cfg.r1 * max(params.mu * k0, k1)
    return {"a": params.mu * k0 * cfg.r0, "b": base, "c": 2 + base,
            "d": 2 + base, "e": base, "f": 2 + base}


def fourier_log_terms(m: int, cfg: MediumConfig) -> dict[str, tuple[float, float]]:
    """``(log LHS, log RHS)`` of every item for one mode, constant set to one."""
    m = abs(int(m))
    r0, r1 = cfg.r0, cfg.r1
    k0, k1 = cfg.kappa0, cfg.kappa1
    dk = abs(k0 - k1)
    z00, z11 = k0 * r0, k1 * r1
    c = analytic.mode_coefficients(m, cfg, warn=False)
    env = log_envelope(m, cfg)
    ldk = math.log(dk) if dk > 0 else -math.inf
    cube = math.log(m) / 3.0
    lm = math.log(m)

    out = {}
    out["a"] = (_abs_log(c.a02 * sf.bessel_j(m, z00)), math.log(r0) - lm)
    out["b"] = (_abs_log(c.a01 * sf.hankel1(m, z00)),
                math.log(r0 * r1) + ldk - 4.0 * cube + env)
    out["c"] = (_abs_log(c.a01 * sf.deriv("H1", m, z00) * k0),
                math.log(r1) + ldk - cube + env)
    out["d"] = (_abs_log(c.a02 * sf.deriv("J", m, z00) * k0), 0.0)
    out["e"] = (_abs_log(c.a12 * sf.bessel_j(m, z11)),
                math.log(math.pi * r0 / (2.0 * m)) + math.log1p(2.0 * dk * r1 / m ** (1 / 3)) + env)
    out["f"] = (_abs_log(c.a12 * sf.deriv("J", m, z11) * k1),
                math.log(math.pi * r0 / (2.0 * r1))
                + math.log1p(20.0 * dk * r1 / (3.0 * m ** (1 / 3))) + env)
    return out


def check_fourier_decay(cfg: MediumConfig, params: ConvergenceParams | None = None,
                        m_max: int = 300, *, stride: int = 1,
                        threads: int = 1) -> list[BoundCheckReport]:
    """Supremum of ``LHS / RHS`` (constant one) for the six coefficient bounds.

    Each item is sampled on the integers from its own threshold up to
    ``m_max`` (every ``stride``-th order) and passes when the supremum is at
    most :data:`UNIFORM_BOUND`.  When ``kappa0 == kappa1`` the coefficient of
    the outgoing wave vanishes and items b and c report ratio zero.
    """
    params = params or ConvergenceParams.default(cfg)
    th = fourier_thresholds(cfg, params)
    lo = max(1, int(math.ceil(min(th.values()))))
    if m_max < max(th.values()):
        raise HypothesisError(f"m_max={m_max} is below the largest threshold {max(th.values()):.4g}")
    orders = list(range(lo, m_max + 1, stride))
    terms = _run(lambda m: fourier_log_terms(m, cfg), orders, threads)
    reports = []
    for item in FOURIER_ITEMS:
        start = int(math.ceil(th[item]))
        sup = _Sup()
        for m, t in zip(orders, terms):
            if m < start:
                continue
            lhs, rhs = t[item]
            if rhs == -math.inf:
                # zero envelope: admissible only with a vanishing coefficient
                ratio = 0.0 if lhs == -math.inf else math.inf
            else:
                ratio = _ratio(lhs, rhs)
            sup.add(ratio, (m,))
        reports.append(sup.report(f"coeff_decay.{item}", f"m in [{start}, {m_max}] step {stride}",
                                  UNIFORM_BOUND))
    return reports


# --------------------------------------------------------------------------
# Truncation-error envelopes
# --------------------------------------------------------------------------

def theorem_envelopes(M: int, params: ConvergenceParams, g_norm: float) -> dict[str, float]:
    """Right-hand sides of the four truncation-error bounds (constant one)."""
    r0, r1, nu, s = params.r0, params.r1, params.nu, params.s
    alg = (1.0 + M) ** (-0.5 - s) * g_norm
    ex = math.exp(-nu * M)
    return {
        "eD0": math.sqrt(2.0) * r0 * (1.0 / nu + 1.0) * alg,
        "eN0": (1.0 / nu + 1.0) * alg,
        "eD1": math.pi * math.sqrt(r0 * r1 / 2.0) * (2.0 / nu + 1.0) * ex * alg,
        "eN1": math.pi * math.sqrt(r0 / (2.0 * r1)) * (20.0 / (3.0 * nu) + 1.0) * ex * alg,
    }


@dataclass
class TheoremCheck:
    """Envelope ratios per error and the exponential-rate verdicts."""

    envelope: BoundCheckReport
    ratios: dict
    gamma1_rates: dict
    nu: float
    rate_passed: bool

    @property
    def passed(self) -> bool:
        return self.envelope.passed and self.rate_passed


def envelope_check(rep: galerkin.ErrorReport, g_norm: float,
                   params: ConvergenceParams) -> TheoremCheck:
    """Compare an existing error report with the truncation-error envelopes.

    Each error is divided by its envelope with constant one; errors at or
    below the measurement floor are compared with the larger of envelope and
    floor.  The exponential rate of the inner-circle errors, as fitted in
    the report, must be at least ``nu`` whenever two or more samples lie
    above the floor.
    """
    sup = _Sup()
    ratios = {name: [] for name in ("eD0", "eN0", "eD1", "eN1")}
    for i, M in enumerate(rep.M_list):
        env = theorem_envelopes(M, params, g_norm)
        for name in ratios:
            e = rep.errors(name)[i]
            denom = max(env[name], rep.floors[name])
            r = e / denom
            ratios[name].append(r)
            sup.add(r, (M,))
    report = sup.report("theorem.envelope", f"M in {list(rep.M_list)}, reference M={rep.reference_M}",
                        UNIFORM_BOUND)
    rates, ok = {}, True
    for name in ("eD1", "eN1"):
        fit = rep.fits[name]
        rates[name] = fit.exponential_rate
        above = sum(1 for e in rep.errors(name) if e > rep.floors[name])
        if above >= 2 and not fit.exponential_rate >= params.nu:
            ok = False
    return TheoremCheck(envelope=report, ratios=ratios, gamma1_rates=rates,
                        nu=params.nu, rate_passed=ok)


def check_theorem_rates(cfg: MediumConfig, datum: galerkin.FourierTrace,
                        params: ConvergenceParams, M_list, *,
                        reference: galerkin.TraceSolution | str = "galerkin",
                        threads: int = 1) -> TheoremCheck:
    """Measured truncation errors against their envelopes.

    The reference defaults to the Galerkin solution at the datum's own
    order; see :func:`envelope_check` for the comparison rules.

    Raises
    ------
    HypothesisError
        If some ``M`` is below the truncation threshold or above half the
        reference order.
    """
    M_list = sorted(int(M) for M in M_list)
    ref_M = datum.M if isinstance(reference, str) else reference.M
    for M in M_list:
        _require(M >= params.M_threshold,
                 f"M={M} is below the threshold {params.M_threshold:.4g}")
        _require(2 * M <= ref_M, f"M={M} exceeds half the reference order {ref_M}")
    rep = galerkin.error_report(cfg, datum, M_list, reference, threads=threads)
    return envelope_check(rep, galerkin.sobolev_norm(datum, params.s), params)


def abs_x2_params(cfg: MediumConfig) -> ConvergenceParams:
    """Defaults for the datum ``|x_2|``, which lies in ``H^s`` for ``s < 3/2``."""
    return ConvergenceParams.default(cfg, s=1.5 - ABS_X2_EPS)
