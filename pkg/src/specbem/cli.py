"""Command-line front end.

Usage::

    python -m specbem <command> [--config CONFIG] [--out DIR] [--threads N]

Commands are ``solve``, ``resonance``, ``field``, ``converge`` and
``verify``.  The configuration is one JSON document; every output is CSV
(header row, LF line endings, ``%.17g`` floats) or JSON.

Exit codes: 0 success, 2 configuration error, 3 singular block,
4 under-resolved reference or datum, 5 bound violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
import warnings
from dataclasses import dataclass
from dataclasses import field as dc_field
from pathlib import Path

import numpy as np

from . import analytic, bounds, galerkin, operators, resonance
from . import field as fieldmod
from . import specfun as sf
from .operators import EQUAL_MEDIA, EXAMPLE_1, EXAMPLE_2, GENERIC, ConfigError, MediumConfig

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SINGULAR = 3
EXIT_UNDERRESOLVED = 4
EXIT_VIOLATION = 5

_TOP_KEYS = {"r0", "r1", "n0", "n1", "kappa", "M", "datum", "out",
             "resonance", "field", "converge"}
_DATUM_KEYS = {"mode", "expression", "coefficients", "coefficients_csv"}
_RESONANCE_KEYS = {"m", "kappa_range", "step"}
_FIELD_KEYS = {"n_r", "n_theta", "r_values", "radial_samples"}
_CONVERGE_KEYS = {"M_list", "reference_M", "reference", "min_ratio", "s", "eta", "mu"}


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------

@dataclass
class DatumSpec:
    """One of: a single mode, a named expression, or explicit coefficients.

    ``coefficients`` maps ``m`` to ``alpha_m``.
    """

    mode: int | None = None
    expression: str | None = None
    coefficients: dict | None = None

    def build(self, M: int, r0: float) -> galerkin.FourierTrace:
        if self.coefficients is not None:
            return galerkin.expand_datum(self.coefficients, M, r0, warn=False)
        if self.expression is not None:
            return galerkin.builtin_datum(self.expression, M, r0, mode=self.mode)
        return galerkin.builtin_datum("mode", M, r0, mode=self.mode)

    @property
    def single_mode(self) -> int | None:
        return self.mode if self.expression is None and self.coefficients is None else None


@dataclass
class RunConfig:
    """Validated run configuration; see :func:`load_config` for the JSON layout."""

    medium: MediumConfig
    M: int
    datum: DatumSpec
    out: str | None = None
    resonance: dict = dc_field(default_factory=dict)
    field: dict = dc_field(default_factory=dict)
    converge: dict = dc_field(default_factory=dict)


def _reject_unknown(obj: dict, allowed: set, where: str) -> None:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be a JSON object")
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(extra)}")


def _parse_kappa(value) -> complex:
    if isinstance(value, dict):
        _reject_unknown(value, {"re", "im"}, "kappa")
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(float(value))
    raise ConfigError(f"kappa must be a number, [re, im] or {{re, im}}, got {value!r}")


def _int(value, name: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}")
    return value


def _read_coefficients_csv(path: Path) -> dict:
    coeffs = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"m", "re", "im"} <= set(reader.fieldnames):
            raise ConfigError(f"{path}: expected columns m, re, im")
        for row in reader:
            coeffs[int(row["m"])] = complex(float(row["re"]), float(row["im"]))
    return coeffs


def _parse_datum(obj, base: Path) -> DatumSpec:
    _reject_unknown(obj, _DATUM_KEYS, "datum")
    kinds = [k for k in ("expression", "coefficients", "coefficients_csv") if k in obj]
    if len(kinds) > 1:
        raise ConfigError("datum takes one of expression, coefficients, coefficients_csv")
    mode = _int(obj["mode"], "datum.mode") if "mode" in obj else None
    if "expression" in obj:
        expr = obj["expression"]
        if expr not in ("abs_x2", "gm_plus_exp"):
            raise ConfigError(f"unknown datum expression {expr!r}")
        if expr == "gm_plus_exp" and mode is None:
            raise ConfigError("gm_plus_exp needs datum.mode")
        return DatumSpec(mode=mode, expression=expr)
    if "coefficients" in obj or "coefficients_csv" in obj:
        if mode is not None:
            raise ConfigError("datum.mode cannot be combined with explicit coefficients")
        if "coefficients_csv" in obj:
            path = Path(obj["coefficients_csv"])
            coeffs = _read_coefficients_csv(path if path.is_absolute() else base / path)
        else:
            coeffs = {}
            entries = obj["coefficients"]
            if not isinstance(entries, list):
                raise ConfigError("datum.coefficients must be a list of [m, re, im]")
            for entry in entries:
                if not isinstance(entry, list) or len(entry) not in (2, 3):
                    raise ConfigError(f"bad coefficient entry {entry!r}")
                m = _int(entry[0], "coefficient mode")
                im = float(entry[2]) if len(entry) == 3 else 0.0
                coeffs[m] = complex(float(entry[1]), im)
        return DatumSpec(coefficients=coeffs)
    if mode is None:
        raise ConfigError("datum needs a mode, an expression or coefficients")
    return DatumSpec(mode=mode)


def parse_config(obj: dict, base: Path = Path(".")) -> RunConfig:
    """Validate a decoded JSON configuration.

    Layout::

        {"r0": 1, "r1": 0.5, "n0": 0.5, "n1": 1, "kappa": 90.11 | [re, im],
         "M": 40, "datum": {"mode": 40} | {"expression": "abs_x2"}
                           | {"expression": "gm_plus_exp", "mode": 40}
                           | {"coefficients": [[m, re, im], ...]}
                           | {"coefficients_csv": "path"},
         "resonance": {"m": 40, "kappa_range": [80, 100], "step": 0.05},
         "field": {"n_r": 101, "n_theta": 128, "radial_samples": 401},
         "converge": {"M_list": [...], "reference_M": 300,
                      "reference": "galerkin", "min_ratio": 2, "s": 0,
                      "eta": 0.9, "mu": null}}

    Unknown keys are rejected at every level.
    """
    _reject_unknown(obj, _TOP_KEYS, "config")
    kw = {k: obj[k] for k in ("r0", "r1", "n0", "n1") if k in obj}
    for k, v in kw.items():
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{k} must be a real number, got {v!r}")
    if "kappa" in obj:
        kw["kappa"] = _parse_kappa(obj["kappa"])
    medium = MediumConfig(**kw)
    M = _int(obj.get("M", 0), "M", minimum=0)
    datum = _parse_datum(obj.get("datum", {"mode": 0}), base)

    res = obj.get("resonance", {})
    _reject_unknown(res, _RESONANCE_KEYS, "resonance")
    fld = obj.get("field", {})
    _reject_unknown(fld, _FIELD_KEYS, "field")
    conv = obj.get("converge", {})
    _reject_unknown(conv, _CONVERGE_KEYS, "converge")
    if "reference" in conv and conv["reference"] not in ("galerkin", "analytic"):
        raise ConfigError("converge.reference must be 'galerkin' or 'analytic'")
    out = obj.get("out")
    if out is not None and not isinstance(out, str):
        raise ConfigError("out must be a path string")
    return RunConfig(medium=medium, M=M, datum=datum, out=out,
                     resonance=dict(res), field=dict(fld), converge=dict(conv))


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    try:
        return parse_config(obj, base=path.parent)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


# --------------------------------------------------------------------------
# output helpers
# --------------------------------------------------------------------------

def fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    return "%.17g" % float(x)


def write_csv(path: Path, header: list[str], rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    path.write_bytes(buf.getvalue().encode("utf-8"))


def write_json(path: Path, obj) -> None:
    path.write_bytes((json.dumps(obj, indent=2, sort_keys=True) + "\n").encode("utf-8"))


def trace_rows(sol: galerkin.TraceSolution):
    """Rows ``(m, surface, kind, re, im)`` in a fixed order."""
    for m in range(-sol.M, sol.M + 1):
        for surface, kind, t in (("G1", "D", sol.uD1), ("G1", "N", sol.uN1),
                                 ("G0", "D", sol.uD0), ("G0", "N", sol.uN0)):
            v = t[m]
            yield (m, surface, kind, v.real, v.imag)


def load_traces(path: str | Path, cfg: MediumConfig) -> galerkin.TraceSolution:
    """Read a ``traces.csv`` back into a :class:`TraceSolution`."""
    data: dict = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            data[(row["surface"], row["kind"], int(row["m"]))] = complex(
                float(row["re"]), float(row["im"]))
    M = max(abs(k[2]) for k in data)
    modes = range(-M, M + 1)

    def col(surface, kind, radius):
        return galerkin.FourierTrace(radius, M, [data[(surface, kind, m)] for m in modes])

    return galerkin.TraceSolution(col("G1", "D", cfg.r1), col("G1", "N", cfg.r1),
                                  col("G0", "D", cfg.r0), col("G0", "N", cfg.r0),
                                  cond=np.full(2 * M + 1, np.nan))


def trace_norms(sol: galerkin.TraceSolution) -> dict:
    traces = sol.traces()
    return {key: galerkin.sobolev_norm(traces[key], s) for key, s in galerkin.TRACE_ORDERS.items()}


def _out_dir(args, rc: RunConfig | None) -> Path:
    out = Path(args.out or (rc.out if rc and rc.out else "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_solve(rc: RunConfig, out: Path, threads: int = 1) -> int:
    t0 = time.perf_counter()
    datum = rc.datum.build(rc.M, rc.medium.r0)
    t1 = time.perf_counter()
    sol = galerkin.solve(rc.medium, datum, threads=threads)
    t2 = time.perf_counter()
    write_csv(out / "traces.csv", ["m", "surface", "kind", "re", "im"], trace_rows(sol))
    cond = np.asarray(sol.cond)
    modes = np.arange(-sol.M, sol.M + 1)
    meta = {
        "M": sol.M,
        "kappa": [rc.medium.kappa.real, rc.medium.kappa.imag],
        "norms": trace_norms(sol),
        "datum_norm_L2": galerkin.sobolev_norm(datum, 0.0),
        "condition": {"min": float(cond.min()), "max": float(cond.max()),
                      "argmax_mode": int(modes[int(np.argmax(cond))])},
        "timings": {"datum_s": t1 - t0, "solve_s": t2 - t1},
    }
    write_json(out / "solution_meta.json", meta)
    print(f"solve: M={sol.M}, max condition {meta['condition']['max']:.3e} "
          f"at m={meta['condition']['argmax_mode']}; wrote {out / 'traces.csv'}")
    return EXIT_OK


def cmd_resonance(rc: RunConfig, out: Path, threads: int = 1) -> int:
    opts = rc.resonance
    if "m" not in opts or "kappa_range" not in opts:
        raise ConfigError("resonance needs m and kappa_range")
    m = _int(opts["m"], "resonance.m", minimum=0)
    kr = opts["kappa_range"]
    if not isinstance(kr, list) or len(kr) != 2:
        raise ConfigError("resonance.kappa_range must be [lo, hi]")
    step = float(opts.get("step", 0.05))
    try:
        found = resonance.find_resonances(m, rc.medium, (float(kr[0]), float(kr[1])), step,
                                          threads=threads)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    rows = [(r.m, r.kappa_star.real, r.kappa_star.imag, r.residual, r.iterations) for r in found]
    write_csv(out / "resonances.csv", ["m", "re_kappa", "im_kappa", "residual", "iterations"], rows)
    for r in found:
        print(f"resonance: m={r.m} kappa*={r.kappa_star.real:.10f}{r.kappa_star.imag:+.6e}i")
    if not found:
        print(f"resonance: none found for m={m} in [{kr[0]}, {kr[1]}]")
    return EXIT_OK


def _snap(r: np.ndarray, cfg: MediumConfig) -> np.ndarray:
    r = np.where(np.abs(r - cfg.r1) < fieldmod.SURFACE_GUARD, cfg.r1, r)
    return np.where(np.abs(r - cfg.r0) < fieldmod.SURFACE_GUARD, cfg.r0, r)


def cmd_field(rc: RunConfig, out: Path, threads: int = 1) -> int:
    cfg = rc.medium
    opts = rc.field
    datum = rc.datum.build(rc.M, cfg.r0)
    sol = galerkin.solve(cfg, datum, threads=threads)
    if "r_values" in opts:
        r = np.asarray(opts["r_values"], dtype=float)
    else:
        n_r = _int(opts.get("n_r", 101), "field.n_r", minimum=2)
        r = np.linspace(0.0, cfg.r0, n_r)
    r = _snap(np.sort(r), cfg)
    n_t = _int(opts.get("n_theta", 128), "field.n_theta", minimum=1)
    theta = 2.0 * math.pi * np.arange(n_t) / n_t
    try:
        grid = fieldmod.eval_from_traces(sol, cfg, r, theta, threads=threads)
    except fieldmod.NearSurfaceError as exc:
        raise ConfigError(str(exc)) from exc
    rows = ((grid.r_values[i], grid.theta_values[j], grid.values[i, j].real, grid.values[i, j].imag)
            for i in range(len(grid.r_values)) for j in range(len(grid.theta_values)))
    write_csv(out / "field.csv", ["r", "theta", "re_u", "im_u"], rows)
    m = rc.datum.single_mode
    if m is not None and abs(m) <= sol.M:
        n = _int(opts.get("radial_samples", 401), "field.radial_samples", minimum=3)
        prof = fieldmod.radial_from_traces(sol, cfg, m, n)
        write_csv(out / "radial.csv", ["r", "re", "im"], prof.tolist())
        rp, peak = fieldmod.peak_radius(prof)
        print(f"field: mode {m} peak |u|={peak:.6g} at r={rp:.4f}")
    print(f"field: wrote {out / 'field.csv'} ({len(r)} x {n_t} points)")
    return EXIT_OK


def cmd_converge(rc: RunConfig, out: Path, threads: int = 1) -> int:
    cfg = rc.medium
    opts = rc.converge
    if "M_list" not in opts:
        raise ConfigError("converge needs M_list")
    M_list = sorted(_int(M, "converge.M_list entry", minimum=0) for M in opts["M_list"])
    if not M_list:
        raise ConfigError("converge.M_list is empty")
    ref_M = _int(opts.get("reference_M", 2 * max(M_list)), "converge.reference_M", minimum=1)
    min_ratio = float(opts.get("min_ratio", 2.0))
    reference = opts.get("reference", "galerkin")
    with warnings.catch_warnings():
        warnings.simplefilter("error", galerkin.AliasingWarning)
        datum = rc.datum.build(ref_M, cfg.r0)
        rep = galerkin.error_report(cfg, datum, M_list, reference,
                                    min_ratio=min_ratio, threads=threads)
    write_csv(out / "errors.csv", ["M", "eD1", "eN1", "eD0", "eN0"], rep.table())
    eoc_rows = []
    for name in ("eD1", "eN1", "eD0", "eN0"):
        f = rep.fits[name]
        eoc_rows.append((name, f.algebraic_slope, f.exponential_rate, f.r2_exponential,
                         f.n_points, rep.floors[name]))
    write_csv(out / "eoc.csv", ["error", "algebraic_slope", "exponential_rate",
                                "r2_exponential", "n_points", "floor"], eoc_rows)

    kw = {k: float(opts[k]) for k in ("eta", "mu") if opts.get(k) is not None}
    params = bounds.ConvergenceParams.default(cfg, s=float(opts.get("s", 0.0)), **kw)
    inside = [i for i, M in enumerate(rep.M_list)
              if M >= params.M_threshold and 2 * M <= rep.reference_M]
    g_norm = galerkin.sobolev_norm(datum, params.s)
    summary = {"M_threshold": params.M_threshold, "nu": params.nu, "s": params.s,
               "M_in_hypothesis": [rep.M_list[i] for i in inside]}
    if inside:
        sub = galerkin.ErrorReport(
            M_list=[rep.M_list[i] for i in inside],
            **{n: [rep.errors(n)[i] for i in inside] for n in ("eD0", "eN0", "eD1", "eN1")},
            reference_M=rep.reference_M, floors=rep.floors,
            fits={n: galerkin.fit_rates([rep.M_list[i] for i in inside],
                                        [rep.errors(n)[i] for i in inside], rep.floors[n])
                  for n in ("eD0", "eN0", "eD1", "eN1")})
        check = bounds.envelope_check(sub, g_norm, params)
        summary.update({"max_ratio": check.envelope.max_ratio, "rate_passed": check.rate_passed,
                        "passed": check.passed})
    else:
        summary.update({"max_ratio": None, "rate_passed": None, "passed": None})
    write_json(out / "envelope.json", summary)
    for name, *vals in eoc_rows:
        print(f"converge: {name} slope={vals[0]:.4g} rate={vals[1]:.4g} r2={vals[2]:.4g}")
    verdict = {True: "PASS", False: "FAIL", None: "n/a (no M in hypothesis)"}[summary["passed"]]
    print(f"converge: envelope {verdict}")
    return EXIT_OK


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------

VERIFY_CONFIGS = {"example1": EXAMPLE_1, "example2": EXAMPLE_2,
                  "equal_media": EQUAL_MEDIA, "generic": GENERIC}
IDENTITY_ORDERS = (0, 1, 2, 5, 10, 20, 40, 60, 100, 200, 300, 400)
IDENTITY_ARGS = (0.5, 1.0, 2.0, 5.0, 10.0, 45.055, 63.72, 90.11, 131.97, 200.0)
IDENTITY_TOL = 1e-10
EQUIVALENCE_TOL = 1e-8
EQUIVALENCE_COND = 1e8
DTN_TOL = 1e-8
INTERFACE_TOL = 1e-6


def _check(id_: str, value: float, limit: float, grid: str, n: int) -> bounds.BoundCheckReport:
    return bounds.BoundCheckReport(id=id_, grid=grid, n_samples=n, max_ratio=value, constant=limit)


def wronskian_deviation() -> float:
    """Max relative deviation of ``J H' - J' H = 2i/(pi z)`` over the identity grid."""
    worst = 0.0
    for m in IDENTITY_ORDERS:
        for z in IDENTITY_ARGS:
            w = sf.bessel_j(m, z) * sf.deriv("H1", m, z) - sf.deriv("J", m, z) * sf.hankel1(m, z)
            exact = 2j / (math.pi * z)
            worst = max(worst, abs(w.to_complex() - exact) / abs(exact))
    return worst


def calderon_deviation() -> float:
    """Max relative defect of ``lamV lamW = lamK (lamK + 1)`` on the identity grid.

    This per-mode Calderon relation follows from the Bessel Wronskian and
    ties ``lamW`` to ``lamV`` and ``lamK``.
    """
    worst = 0.0
    for m in IDENTITY_ORDERS:
        for z in IDENTITY_ARGS:
            v, k, w = operators.scaled_symbols(m, z)
            lhs = v * w
            rhs = k * (k + 1.0)
            scale = max(lhs.log_abs(), rhs.log_abs(), 0.0)
            diff = lhs - rhs
            dev = 0.0 if diff.is_zero() else math.exp(min(diff.log_abs() - scale, 700.0))
            worst = max(worst, dev)
    return worst


def equivalence_deviation(cfg: MediumConfig, M: int = 300) -> tuple[float, int]:
    """Max relative Galerkin/analytic trace mismatch over well-conditioned modes."""
    worst, n = 0.0, 0
    for m in range(0, M + 1):
        x, cond = galerkin.solve_mode(m, cfg, 1.0)
        if cond > EQUIVALENCE_COND:
            continue
        t = analytic.exact_traces(m, cfg)
        ref = np.array([t.d1, t.n1t, t.d0, t.n0t])
        worst = max(worst, float(np.max(np.abs(x - ref)) / np.max(np.abs(ref))))
        n += 1
    return worst, n


def dtn_deviation(cfg: MediumConfig, M: int = 300) -> float:
    worst = 0.0
    for m in range(0, M + 1):
        x, _ = galerkin.solve_mode(m, cfg, 1.0)
        worst = max(worst, analytic.dtn_residual(m, cfg, x[2], x[3], 1.0))
    return worst


def interface_deviation(cfg: MediumConfig, M: int = 60) -> float:
    datum = galerkin.FourierTrace(cfg.r0, M, np.ones(2 * M + 1))
    return fieldmod.interface_jump(galerkin.solve(cfg, datum), cfg)


def run_verify(extra: dict | None = None, *, threads: int = 1, out=None) -> list:
    """Run every check; returns the list of reports."""
    out = sys.stdout if out is None else out
    reports = []
    cfgs = dict(VERIFY_CONFIGS)
    if extra:
        cfgs.update(extra)
    grid = f"m in {list(IDENTITY_ORDERS)}, z in {list(IDENTITY_ARGS)}"
    n_id = len(IDENTITY_ORDERS) * len(IDENTITY_ARGS)
    reports.append(_check("wronskian", wronskian_deviation(), IDENTITY_TOL, grid, n_id))
    reports.append(_check("calderon", calderon_deviation(), IDENTITY_TOL, grid, n_id))
    reports.extend(bounds.check_appendix(threads=threads))
    for name, cfg in cfgs.items():
        for r in bounds.check_fourier_decay(cfg, threads=threads):
            r.id = f"{r.id}[{name}]"
            reports.append(r)
        dev, n = equivalence_deviation(cfg)
        reports.append(_check(f"equivalence[{name}]", dev, EQUIVALENCE_TOL, "m in [0, 300]", n))
        reports.append(_check(f"dtn[{name}]", dtn_deviation(cfg), DTN_TOL, "m in [0, 300]", 301))
        reports.append(_check(f"interface[{name}]", interface_deviation(cfg), INTERFACE_TOL,
                              "all-ones datum, M=60", 121))
    for r in reports:
        print(r.line(), file=out)
    return reports


def cmd_verify(rc: RunConfig | None, out: Path | None, threads: int = 1) -> int:
    extra = {"config": rc.medium} if rc is not None else None
    reports = run_verify(extra, threads=threads)
    failed = sum(1 for r in reports if not r.passed)
    print(f"verify: {len(reports) - failed}/{len(reports)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VIOLATION


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------

COMMANDS = {"solve": cmd_solve, "resonance": cmd_resonance, "field": cmd_field,
            "converge": cmd_converge}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="specbem", description=__doc__.split("\n\n")[0])
    p.add_argument("command", choices=[*COMMANDS, "verify"])
    p.add_argument("--config", help="JSON configuration file")
    p.add_argument("--out", help="output directory (default: config 'out' or '.')")
    p.add_argument("--threads", type=int, default=1, help="worker threads, 0 = auto")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 0:
        print("error: --threads must be >= 0", file=sys.stderr)
        return EXIT_CONFIG
    try:
        rc = load_config(args.config) if args.config else None
        if args.command == "verify":
            return cmd_verify(rc, None, threads=args.threads)
        if rc is None:
            raise ConfigError(f"{args.command} needs --config")
        out = _out_dir(args, rc)
        return COMMANDS[args.command](rc, out, threads=args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except galerkin.SingularBlockError as exc:
        print(f"singular block: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (galerkin.ReferenceTooSmallError, galerkin.AliasingWarning) as exc:
        print(f"under-resolved: {exc}", file=sys.stderr)
        return EXIT_UNDERRESOLVED
    except sf.SpecfunError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
