"""Spectral Galerkin discretization on the two circles.

Because every operator is diagonal in ``g_m``, the Galerkin system splits
into one 4x4 block per mode with unknowns ordered
``[uD1, uN1, uD0, uN0]``: Dirichlet and Neumann trace on the inner circle,
then on the outer circle.  Fourier coefficients follow ``g = sum alpha_m g_m``;
the Sobolev norms use ``f_m = 2 pi alpha_m``.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import analytic
from .operators import MediumConfig, mode_entries


class AliasingWarning(UserWarning):
    """The highest retained Fourier coefficients of a datum are not small."""


class SingularBlockError(ArithmeticError):
    """A per-mode block is numerically singular."""

    def __init__(self, m: int, message: str = ""):
        self.m = m
        super().__init__(message or f"singular Galerkin block for mode {m}")


class ReferenceTooSmallError(ValueError):
    """The reference solution is not resolved enough for an error study."""


# ---------------------------------------------------------------------------
# traces
# ---------------------------------------------------------------------------
@dataclass
class FourierTrace:
    """Coefficients ``alpha_m``, ``|m| <= M``, of a function on a circle.

    ``coeffs[m + M]`` holds ``alpha_m``.
    """

    radius: float
    M: int
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.M < 0:
            raise ValueError("M must be non-negative")
        if self.coeffs.shape != (2 * self.M + 1,):
            raise ValueError(f"expected {2 * self.M + 1} coefficients, got {self.coeffs.shape}")

    @property
    def modes(self) -> np.ndarray:
        return np.arange(-self.M, self.M + 1)

    def __getitem__(self, m: int) -> complex:
        if abs(m) > self.M:
            return 0j
        return complex(self.coeffs[m + self.M])

    def fourier(self) -> np.ndarray:
        """Norm-convention coefficients ``f_m = 2 pi alpha_m``."""
        return 2.0 * math.pi * self.coeffs

    def truncated(self, M: int) -> "FourierTrace":
        """Restriction (``M`` smaller) or zero-padding (``M`` larger)."""
        out = np.zeros(2 * M + 1, dtype=complex)
        k = min(M, self.M)
        out[M - k:M + k + 1] = self.coeffs[self.M - k:self.M + k + 1]
        return FourierTrace(self.radius, M, out)

    def evaluate(self, theta) -> np.ndarray:
        """Synthesize ``sum alpha_m exp(i m theta)``."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        phases = np.exp(1j * np.outer(theta, self.modes))
        return phases @ self.coeffs

    @classmethod
    def zeros(cls, radius: float, M: int) -> "FourierTrace":
        return cls(radius, M, np.zeros(2 * M + 1, dtype=complex))

    @classmethod
    def single_mode(cls, radius: float, M: int, m: int, value: complex = 1.0) -> "FourierTrace":
        t = cls.zeros(radius, M)
        t.coeffs[m + M] = value
        return t


@dataclass
class TraceSolution:
    """The four Galerkin traces sharing one truncation order."""

    uD1: FourierTrace
    uN1: FourierTrace
    uD0: FourierTrace
    uN0: FourierTrace
    cond: np.ndarray

    def __post_init__(self):
        Ms = {self.uD1.M, self.uN1.M, self.uD0.M, self.uN0.M}
        if len(Ms) != 1:
            raise ValueError(f"traces have different truncation orders {sorted(Ms)}")

    @property
    def M(self) -> int:
        return self.uD1.M

    def traces(self) -> dict[str, FourierTrace]:
        return {"uD1": self.uD1, "uN1": self.uN1, "uD0": self.uD0, "uN0": self.uN0}

    def truncated(self, M: int) -> "TraceSolution":
        cond = np.full(2 * M + 1, np.nan)
        k = min(M, self.M)
        cond[M - k:M + k + 1] = self.cond[self.M - k:self.M + k + 1]
        return TraceSolution(self.uD1.truncated(M), self.uN1.truncated(M),
                             self.uD0.truncated(M), self.uN0.truncated(M), cond)


# ---------------------------------------------------------------------------
# data
# ---------------------------------------------------------------------------
def quadrature_size(M: int) -> int:
    return max(4 * M, 64)


def expand_datum(g, M: int, radius: float = 1.0, *, n_quad: int | None = None,
                 warn: bool = True) -> FourierTrace:
    """Fourier coefficients of a datum on the circle of given radius.

    Parameters
    ----------
    g : callable or sequence
        Either a function of the polar angle (vectorized over a numpy array)
        or explicit coefficients.  Explicit coefficients may be a length
        ``2M + 1`` sequence ordered ``m = -M..M`` or a mapping ``{m: alpha_m}``.
    M : int
        Truncation order.
    n_quad : int, optional
        Number of trapezoid nodes, at least ``max(4M, 64)``.

    Warns
    -----
    AliasingWarning
        If a coefficient with ``M - 2 <= |m| <= M`` exceeds ``1e-6`` of the
        largest one.
    """
    if M < 0:
        raise ValueError("M must be non-negative")
    if callable(g):
        n = quadrature_size(M) if n_quad is None else int(n_quad)
        if n < quadrature_size(M):
            raise ValueError(f"quadrature size {n} below max(4M, 64) = {quadrature_size(M)}")
        theta = 2.0 * math.pi * np.arange(n) / n
        values = np.asarray(g(theta), dtype=complex)
        if values.shape != theta.shape:
            values = np.broadcast_to(values, theta.shape).astype(complex)
        spectrum = np.fft.fft(values) / n
        idx = np.arange(-M, M + 1) % n
        coeffs = spectrum[idx]
    elif isinstance(g, dict):
        coeffs = np.zeros(2 * M + 1, dtype=complex)
        for m, value in g.items():
            if abs(int(m)) <= M:
                coeffs[int(m) + M] = value
    else:
        coeffs = np.asarray(g, dtype=complex)
        if coeffs.shape != (2 * M + 1,):
            raise ValueError(f"explicit coefficients must have length {2 * M + 1}")
    trace = FourierTrace(radius, M, coeffs)
    if warn:
        check_aliasing(trace)
    return trace


def check_aliasing(trace: FourierTrace, rel: float = 1e-6) -> bool:
    """Warn and return True if the edge coefficients are not negligible."""
    a = np.abs(trace.coeffs)
    top = a.max(initial=0.0)
    if top == 0 or trace.M < 2:
        return False
    modes = np.abs(trace.modes)
    edge = a[modes >= trace.M - 2].max()
    if edge > rel * top:
        warnings.warn(f"datum may be under-resolved: edge coefficient {edge:.2e} "
                      f"vs max {top:.2e} at M={trace.M}", AliasingWarning, stacklevel=2)
        return True
    return False


def abs_x2_coefficients(M: int, r0: float = 1.0) -> dict[int, float]:
    """Closed-form coefficients of ``|x_2| = r0 |sin theta|``."""
    out = {0: 2.0 * r0 / math.pi}
    for k in range(1, M // 2 + 1):
        c = -2.0 * r0 / (math.pi * (4 * k * k - 1))
        out[2 * k] = c
        out[-2 * k] = c
    return out


def builtin_datum(name: str, M: int, r0: float = 1.0, mode: int | None = None) -> FourierTrace:
    """Named data on the outer circle.

    ``"abs_x2"`` is ``|x_2|`` (closed-form coefficients, exact at any M);
    ``"gm_plus_exp"`` is ``g_mode + exp(x_1)`` (quadrature);
    ``"mode"`` is the single exponential ``g_mode``.
    """
    if name == "abs_x2":
        return expand_datum(abs_x2_coefficients(M, r0), M, r0, warn=False)
    if name == "gm_plus_exp":
        if mode is None:
            raise ValueError("gm_plus_exp needs a mode")
        mode = int(mode)

        def g(theta):
            return np.exp(1j * mode * theta) + np.exp(r0 * np.cos(theta))

        n = max(quadrature_size(M), 4 * abs(mode) + 64)
        return expand_datum(g, M, r0, n_quad=n)
    if name == "mode":
        if mode is None:
            raise ValueError("single-mode datum needs a mode")
        if abs(mode) > M:
            return FourierTrace.zeros(r0, M)
        return FourierTrace.single_mode(r0, M, int(mode))
    raise ValueError(f"unknown datum {name!r}")


# ---------------------------------------------------------------------------
# per-mode systems
# ---------------------------------------------------------------------------
def assemble_block(m: int, cfg: MediumConfig) -> tuple[np.ndarray, complex]:
    """4x4 Galerkin block of mode ``m`` and the right-hand-side factor.

    The right-hand side for datum coefficient ``alpha_m`` is
    ``[0, 0, 0, factor * alpha_m]`` with ``factor = 2 pi r0 * r0 lamV(k0 r0)``.
    """
    e = mode_entries(m, cfg)
    s, c = e.same, e.cross
    half_mass0 = 0.5 * 2.0 * math.pi * cfg.r0
    A = np.array([
        [-s["W", "G1k0"] - s["W", "G1k1"], -s["Kprime", "G1k0"] + s["Kprime", "G1k1"],
         -c["W", "G1<-G0"], c["Kprime", "G1<-G0"]],
        [-s["K", "G1k0"] + s["K", "G1k1"], -s["V", "G1k0"] - s["V", "G1k1"],
         -c["K", "G1<-G0"], c["V", "G1<-G0"]],
        [-c["W", "G0<-G1"], -c["Kprime", "G0<-G1"],
         -s["W", "G0k0"], half_mass0 + s["Kprime", "G0k0"]],
        [c["K", "G0<-G1"], c["V", "G0<-G1"],
         2.0 * s["K", "G0k0"], -2.0 * s["V", "G0k0"]],
    ], dtype=complex)
    return A, s["V", "G0k0"]


def block_condition(A: np.ndarray) -> float:
    """``||A||_1 ||A^{-1}||_1`` from the explicit inverse (inf if singular)."""
    try:
        inv = np.linalg.inv(A)
    except np.linalg.LinAlgError:
        return math.inf
    return float(np.linalg.norm(A, 1) * np.linalg.norm(inv, 1))


def solve_mode(m: int, cfg: MediumConfig, alpha: complex = 1.0) -> tuple[np.ndarray, float]:
    """Solve the block of mode ``m`` for datum coefficient ``alpha``.

    Returns the four trace coefficients and the condition estimate.
    """
    A, factor = assemble_block(m, cfg)
    cond = block_condition(A)
    if not math.isfinite(cond):
        raise SingularBlockError(m)
    if alpha == 0:
        return np.zeros(4, dtype=complex), cond
    rhs = np.array([0, 0, 0, factor * alpha], dtype=complex)
    try:
        x = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularBlockError(m) from exc
    if not np.all(np.isfinite(x)):
        raise SingularBlockError(m, f"non-finite solution for mode {m}")
    return x, cond


def _map(fn: Callable, items: Sequence, threads: int) -> list:
    if threads == 1 or len(items) <= 1:
        return [fn(i) for i in items]
    workers = None if threads <= 0 else threads
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def solve(cfg: MediumConfig, datum: FourierTrace, *, threads: int = 1) -> TraceSolution:
    """Galerkin traces for the datum ``g`` on the outer circle.

    Each mode is solved independently with LAPACK's partially pivoted LU.
    ``threads`` only changes the execution schedule, never the result.
    """
    M = datum.M

    def work(m):
        return solve_mode(m, cfg, datum[m])

    results = _map(work, list(range(-M, M + 1)), threads)
    X = np.array([r[0] for r in results]).reshape(2 * M + 1, 4)
    cond = np.array([r[1] for r in results])
    return TraceSolution(
        uD1=FourierTrace(cfg.r1, M, X[:, 0]),
        uN1=FourierTrace(cfg.r1, M, X[:, 1]),
        uD0=FourierTrace(cfg.r0, M, X[:, 2]),
        uN0=FourierTrace(cfg.r0, M, X[:, 3]),
        cond=cond,
    )


def exact_solution(cfg: MediumConfig, datum: FourierTrace) -> TraceSolution:
    """Traces of the exact solution for the truncated datum (no Galerkin solve)."""
    M = datum.M
    X = np.zeros((2 * M + 1, 4), dtype=complex)
    for i, m in enumerate(range(-M, M + 1)):
        alpha = datum[m]
        if alpha == 0:
            continue
        t = analytic.exact_traces(m, cfg)
        X[i] = alpha * np.array([t.d1, t.n1t, t.d0, t.n0t])
    return TraceSolution(FourierTrace(cfg.r1, M, X[:, 0]), FourierTrace(cfg.r1, M, X[:, 1]),
                         FourierTrace(cfg.r0, M, X[:, 2]), FourierTrace(cfg.r0, M, X[:, 3]),
                         cond=np.full(2 * M + 1, np.nan))


# ---------------------------------------------------------------------------
# norms and errors
# ---------------------------------------------------------------------------
def sobolev_norm(t: FourierTrace, s: float) -> float:
    """``(r / 2 pi * sum (1 + m^2)^s |f_m|^2)^(1/2)`` with ``f_m = 2 pi alpha_m``."""
    m = t.modes.astype(float)
    weights = (1.0 + m * m) ** s
    f = t.fourier()
    total = math.fsum((weights * (f.real ** 2 + f.imag ** 2)).tolist())
    return math.sqrt(t.radius / (2.0 * math.pi) * total)


#: Sobolev order used for each trace in the error functionals.
TRACE_ORDERS = {"uD1": 0.5, "uN1": -0.5, "uD0": 0.5, "uN0": -0.5}
ERROR_NAMES = {"uD1": "eD1", "uN1": "eN1", "uD0": "eD0", "uN0": "eN0"}


def trace_errors(sol: TraceSolution, ref: TraceSolution) -> dict[str, float]:
    """Sobolev-norm distance of each trace of ``sol`` to ``ref``."""
    M = max(sol.M, ref.M)
    a, b = sol.truncated(M), ref.truncated(M)
    out = {}
    for key, s in TRACE_ORDERS.items():
        ta, tb = a.traces()[key], b.traces()[key]
        diff = FourierTrace(ta.radius, M, ta.coeffs - tb.coeffs)
        out[ERROR_NAMES[key]] = sobolev_norm(diff, s)
    return out


@dataclass
class RateFit:
    """Least-squares fit of one error curve."""

    algebraic_slope: float
    exponential_rate: float
    r2_exponential: float
    n_points: int
    pairwise_eoc: list = field(default_factory=list)


@dataclass
class ErrorReport:
    """Errors of Galerkin solutions against a reference, per truncation order."""

    M_list: list
    eD0: list
    eN0: list
    eD1: list
    eN1: list
    reference_M: int
    floors: dict
    fits: dict

    def table(self) -> list[tuple]:
        return [(M, self.eD1[i], self.eN1[i], self.eD0[i], self.eN0[i])
                for i, M in enumerate(self.M_list)]

    def errors(self, name: str) -> list:
        return getattr(self, name)


def fit_rates(M_list: Sequence[int], errors: Sequence[float], floor: float) -> RateFit:
    """Algebraic and exponential least-squares fits of an error curve.

    The algebraic slope is fitted to ``log e`` against ``log M`` over all
    points with ``M > 0`` and ``e > 0``.  The exponential fit uses
    ``log e`` against ``M`` up to and including the first point at or below
    ``floor``; that point enters clamped to the floor.  The returned rate is
    the negated slope, so a decaying curve has a positive rate.
    """
    M_arr = np.asarray(M_list, dtype=float)
    e_arr = np.asarray(errors, dtype=float)
    mask = (M_arr > 0) & (e_arr > 0)
    if mask.sum() >= 2:
        slope = float(np.polyfit(np.log(M_arr[mask]), np.log(e_arr[mask]), 1)[0])
    else:
        slope = math.nan
    xs, ys = [], []
    for M, e in zip(M_arr, e_arr):
        if e <= floor:
            xs.append(M)
            ys.append(math.log(floor))
            break
        xs.append(M)
        ys.append(math.log(e))
    if len(xs) >= 2:
        coef = np.polyfit(xs, ys, 1)
        pred = np.polyval(coef, xs)
        ss_res = float(np.sum((np.asarray(ys) - pred) ** 2))
        ss_tot = float(np.sum((np.asarray(ys) - np.mean(ys)) ** 2))
        r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
        rate = -float(coef[0])
    else:
        rate, r2 = math.nan, math.nan
    pair = []
    for i in range(1, len(M_arr)):
        if M_arr[i - 1] > 0 and e_arr[i] > 0 and e_arr[i - 1] > 0:
            pair.append(float(math.log(e_arr[i] / e_arr[i - 1])
                              / math.log(M_arr[i] / M_arr[i - 1])))
        else:
            pair.append(math.nan)
    return RateFit(slope, rate, r2, len(xs), pair)


#: Absolute error floor; scaled by the reference norm when that exceeds 1.
ERROR_FLOOR = 1e-14


def error_report(cfg: MediumConfig, datum: FourierTrace, M_list: Sequence[int],
                 reference: TraceSolution | str = "analytic", *,
                 min_ratio: float = 2.0, threads: int = 1) -> ErrorReport:
    """Trace errors of the Galerkin solutions for each ``M`` in ``M_list``.

    Parameters
    ----------
    datum : FourierTrace
        Datum resolved at least as finely as the reference.
    reference : TraceSolution, "analytic" or "galerkin"
        Reference traces.  ``"analytic"`` uses the exact per-mode traces of
        ``datum`` at its own truncation order and ``"galerkin"`` the Galerkin
        solution at that order.
    min_ratio : float
        Required ratio ``reference.M / max(M_list)``.

    Raises
    ------
    ReferenceTooSmallError
        If the reference is coarser than ``min_ratio * max(M_list)`` or than
        the datum needed to compute it.
    """
    M_list = sorted(int(M) for M in M_list)
    if not M_list:
        raise ValueError("M_list is empty")
    if isinstance(reference, str):
        if reference == "analytic":
            ref = exact_solution(cfg, datum)
        elif reference == "galerkin":
            ref = solve(cfg, datum, threads=threads)
        else:
            raise ValueError(f"unknown reference {reference!r}")
    else:
        ref = reference
    if ref.M < min_ratio * max(M_list):
        raise ReferenceTooSmallError(
            f"reference M={ref.M} is below {min_ratio:g} x max(M_list)={max(M_list)}")
    if datum.M < max(M_list):
        raise ReferenceTooSmallError(f"datum resolved only up to M={datum.M}")

    rows = {name: [] for name in ERROR_NAMES.values()}
    for M in M_list:
        sol = solve(cfg, datum.truncated(M), threads=threads)
        errs = trace_errors(sol, ref)
        for name, value in errs.items():
            rows[name].append(value)

    floors, fits = {}, {}
    for key, name in ERROR_NAMES.items():
        ref_norm = sobolev_norm(ref.traces()[key], TRACE_ORDERS[key])
        floors[name] = ERROR_FLOOR * max(1.0, ref_norm)
        fits[name] = fit_rates(M_list, rows[name], floors[name])
    return ErrorReport(M_list=M_list, eD0=rows["eD0"], eN0=rows["eN0"], eD1=rows["eD1"],
                       eN1=rows["eN1"], reference_M=ref.M, floors=floors, fits=fits)
