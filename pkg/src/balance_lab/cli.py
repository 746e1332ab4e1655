"""Command-line harness: scenario files in, CSV reports and a pass/fail summary out.

A scenario is an INI file. ``[scenario]`` names the field, ``[flux]``,
``[grid]``, ``[init]`` and ``[source]`` describe it, every operation section
(``holder``, ``dafermos``, ...) runs in file order and ``[tolerances]``
overrides the defaults in :data:`TOLERANCES`. Example::

    [scenario]
    field = example33
    seed = 0

    [grid]
    nx = 4001
    x_span = [-1, 1]

    [holder]
    t = 0
    ell = 2
    expected = 1.4142135623730951

Exit codes: 0 when every check passes, 2 when a check fails, 1 on a usage
or configuration error (or a crash; files written so far keep a
``.partial`` suffix).
"""

from __future__ import annotations

import argparse
import configparser
import csv
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import covering, estimates, heisenberg, solver
from .flux import FluxModel, builtin_flux, check_fprime_separation, convexity_ratio_q, inflection_zeros, nonlinearity_constant

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class ConfigError(ValueError):
    """Malformed scenario or command line."""


# -- value parsing -------------------------------------------------------------------


def _floats(text: str) -> tuple[float, ...]:
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    parts = [p.strip() for p in body.split(",") if p.strip()]
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"expected a list of numbers, got {text!r}") from exc


def _pair(text: str) -> tuple[float, float]:
    v = _floats(text)
    if len(v) != 2:
        raise ConfigError(f"expected two numbers, got {text!r}")
    return v


def _ints(text: str) -> tuple[int, ...]:
    v = _floats(text)
    if any(x != int(x) for x in v):
        raise ConfigError(f"expected integers, got {text!r}")
    return tuple(int(x) for x in v)


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ConfigError(f"expected an integer, got {text!r}") from exc


def _float(text: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"expected a number, got {text!r}") from exc


@dataclass(frozen=True)
class Param:
    name: str
    parse: Callable[[str], Any]
    default: Any
    help: str
    choices: tuple[str, ...] | None = None


# -- parameter tables (single source for config keys and --help) --------------------------

TOLERANCES = {
    "abs": (1e-9, "absolute tolerance for exact-arithmetic identities"),
    "rel": (1e-6, "relative tolerance for scanned extrema"),
    "holder_rel": (1e-2, "relative slack on the Hoelder constant"),
    "holder_exponent": (0.02, "allowed |fitted exponent - 1/l|"),
    "lipschitz_rel": (1e-3, "relative slack on sup|g| for Lipschitz quotients"),
    "lipschitz_dt": (10.0, "additive slack per time step for Lipschitz quotients"),
    "oscillation_decay": (0.25, "required fraction(smallest delta) / fraction(largest delta)"),
    "covering": (1e-3, "mean |q - q(t,x)| at the smallest eps"),
    "residual": (5e-4, "weak residual bound"),
    "rademacher": (0.1, "R(s) at the smallest s"),
}

SCENARIO_KEYS = (
    Param("field", str, None, "analytic field name, 'solve' or 'csv'"),
    Param("csv", str, None, "field CSV (t,x,u,g) when field = csv"),
    Param("seed", _int, 0, "seed for every random draw"),
    Param("out", str, None, "output directory (overridden by --out)"),
    Param("c", _float, 1.0, "value of the constant field"),
    Param("interpolation", str, "exact", "exact or bilinear evaluation of analytic fields", ("exact", "bilinear")),
)
FLUX_KEYS = (
    Param("poly", _floats, None, "polynomial coefficients c0, c1, ... of f"),
    Param("builtin", str, None, "burgers, cubic or quartic", ("burgers", "cubic", "quartic")),
    Param("order", _int, None, "order l of nonlinearity"),
    Param("interval", _pair, (-10.0, 10.0), "state interval [a, b]"),
)
GRID_KEYS = (
    Param("nt", _int, None, "number of time nodes"),
    Param("nx", _int, None, "number of space nodes"),
    Param("t_span", _pair, None, "time range [t0, t1]"),
    Param("x_span", _pair, None, "space range [a, b]"),
    Param("dt", _float, None, "RK4 step (default dx / (1 + max|f'|))"),
)
INIT_KEYS = (
    Param("kind", str, "linear", "constant, linear or sqrt_sign", ("constant", "linear", "sqrt_sign")),
    Param("value", _float, 0.0, "constant value / offset"),
    Param("slope", _float, 1.0, "slope of the linear datum"),
)
SOURCE_KEYS = (
    Param("kind", str, "zero", "zero, constant or sign", ("zero", "constant", "sign")),
    Param("value", _float, 1.0, "amplitude of the source"),
    Param("breaks", _floats, (), "x-lines where g jumps"),
)

OPERATIONS: dict[str, tuple[str, tuple[Param, ...]]] = {
    "solve": ("build the field and write it as field.csv; check its weak residual", (
        Param("bumps", _int, 50, "number of test bumps"),
    )),
    "holder": ("1/l-Hoelder seminorm of u(t, .)", (
        Param("t", _float, 0.0, "time slice t"),
        Param("ell", _int, None, "order l (default: flux order)"),
        Param("window", _pair, None, "x-window [a, b] (default: whole row)"),
        Param("expected", _float, None, "reference constant (default: (4G/(q c_l))**(1/l))"),
    )),
    "dafermos": ("integral balances beside random characteristics", (
        Param("configs", _int, 20, "number of random (gamma, h, t1, t2) configurations"),
        Param("h_max", _float, 0.1, "largest band width h"),
        Param("span_max", _float, 0.5, "largest t2 - t1"),
        Param("concave", _bool, False, "reverse the inequalities for a concave flux"),
    )),
    "lipschitz": ("Lipschitz constant of u along characteristics", (
        Param("count", _int, 50, "number of characteristics"),
    )),
    "oscillation": ("fraction of points with A_delta above a threshold", (
        Param("samples", _int, 2000, "number of sample points"),
        Param("deltas", _floats, (0.2, 0.1, 0.05, 0.025, 0.0125), "scales delta"),
        Param("threshold", _float, 0.5, "threshold on A_delta"),
        Param("ell", _int, None, "order l (default: flux order)"),
    )),
    "covering": ("covering Lebesgue-point test", (
        Param("t", _float, None, "centre time sigma (default: middle of the time range)"),
        Param("x", _float, None, "centre position (default: middle of the space range)"),
        Param("q", str, "field", "averaged function: field (u) or source (g)", ("field", "source")),
        Param("rhos", _floats, covering.DEFAULT_RHOS, "width coefficients rho"),
        Param("epss", _floats, covering.DEFAULT_EPSILONS, "half-heights eps"),
        Param("ell", _int, None, "order l (default: flux order)"),
        Param("reference", _float, None, "declared Lebesgue value (default: q(t, x))"),
    )),
    "residual": ("weak residual of u_t + f(u)_x = g", (
        Param("bumps", _int, 50, "number of test bumps"),
    )),
    "heisenberg": ("intrinsic graph checks", (
        Param("surface", str, "sqrt", "linear, sqrt, zero, field (swap of the scenario field) or a y,t,phi,g CSV"),
        Param("mode", str, "rademacher", "rademacher, lip or balance", ("rademacher", "lip", "balance")),
        Param("point", _pair, (0.0, 0.5), "base point A0 = (y, t)"),
        Param("scales", _floats, (0.2, 0.1, 0.05, 0.025), "scales s"),
        Param("w", _float, 1.0, "slope of the linear surface"),
        Param("w_hat", _float, None, "coefficient w of the differential (default: g(A0))"),
        Param("pairs", _int, 20000, "sampled pairs for the Lipschitz constant"),
        Param("lip_bound", _float, None, "declared intrinsic Lipschitz constant"),
        Param("bumps", _int, 50, "number of test bumps"),
    )),
    "flux_audit": ("nonlinearity constants, q and f' separation", (
        Param("ells", _ints, None, "orders l to scan (default: 2 .. flux order)"),
        Param("I", _pair, None, "interval I for q (default: flux interval)"),
        Param("n", _int, 256, "scan resolution"),
    )),
}

FIELD_SECTIONS = {"scenario": SCENARIO_KEYS, "flux": FLUX_KEYS, "grid": GRID_KEYS, "init": INIT_KEYS, "source": SOURCE_KEYS}


def _parse_section(name: str, raw: dict[str, str], params: tuple[Param, ...]) -> dict[str, Any]:
    known = {p.name: p for p in params}
    unknown = sorted(set(raw) - set(known))
    if unknown:
        raise ConfigError(f"[{name}]: unknown key(s) {', '.join(unknown)}")
    out = {}
    for p in params:
        if p.name in raw:
            try:
                v = p.parse(raw[p.name])
            except ConfigError as exc:
                raise ConfigError(f"[{name}] {p.name}: {exc}") from None
            if p.choices and v not in p.choices:
                raise ConfigError(f"[{name}] {p.name}: expected one of {', '.join(p.choices)}, got {v!r}")
            out[p.name] = v
        else:
            out[p.name] = p.default
    return out


@dataclass
class Scenario:
    path: Path | None
    sections: dict[str, dict[str, Any]]
    operations: list[tuple[str, dict[str, Any]]]
    tolerances: dict[str, float]

    @property
    def seed(self) -> int:
        return self.sections["scenario"]["seed"]


def parse_scenario(text: str, path: Path | None = None) -> Scenario:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text, source=str(path or "<scenario>"))
    except configparser.Error as exc:
        raise ConfigError(str(exc).splitlines()[0]) from None
    sections: dict[str, dict[str, Any]] = {}
    ops: list[tuple[str, dict[str, Any]]] = []
    tol = {k: v for k, (v, _) in TOLERANCES.items()}
    for name in cp.sections():
        raw = dict(cp[name])
        if name in FIELD_SECTIONS:
            sections[name] = _parse_section(name, raw, FIELD_SECTIONS[name])
        elif name in OPERATIONS:
            ops.append((name, _parse_section(name, raw, OPERATIONS[name][1])))
        elif name == "tolerances":
            bad = sorted(set(raw) - set(tol))
            if bad:
                raise ConfigError(f"[tolerances]: unknown key(s) {', '.join(bad)}")
            tol.update({k: _float(v) for k, v in raw.items()})
        else:
            raise ConfigError(f"unknown section [{name}]")
    for name, params in FIELD_SECTIONS.items():
        sections.setdefault(name, _parse_section(name, {}, params))
    sc = Scenario(path, sections, ops, tol)
    _validate(sc)
    return sc


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc.strerror}") from None
    return parse_scenario(text, path)


def _resolve(sc: Scenario, rel: str) -> Path:
    p = Path(rel)
    if not p.is_absolute() and sc.path is not None:
        p = sc.path.parent / p
    return p


def _validate(sc: Scenario) -> None:
    s = sc.sections["scenario"]
    field = s["field"]
    allowed = solver.ANALYTIC_FIELDS + ("solve", "csv")
    needs_field = any(
        op not in ("heisenberg", "flux_audit") or (op == "heisenberg" and p["surface"] == "field")
        for op, p in sc.operations
    )
    if field is None and needs_field:
        raise ConfigError("[scenario] field is required")
    if field is not None and field not in allowed:
        raise ConfigError(f"[scenario] field: unknown field {field!r}; expected one of {', '.join(allowed)}")
    if field == "csv":
        if not s["csv"]:
            raise ConfigError("[scenario] csv: path required when field = csv")
        if not _resolve(sc, s["csv"]).is_file():
            raise ConfigError(f"[scenario] csv: no such file {s['csv']}")
    fl = sc.sections["flux"]
    if fl["poly"] is not None and fl["builtin"] is not None:
        raise ConfigError("[flux]: give either poly or builtin, not both")
    if field == "solve" and fl["poly"] is None and fl["builtin"] is None:
        raise ConfigError("[flux]: poly or builtin required when field = solve")
    a, b = fl["interval"]
    if not a < b:
        raise ConfigError("[flux] interval: need a < b")
    g = sc.sections["grid"]
    for k in ("nt", "nx"):
        if g[k] is not None and g[k] < 3:
            raise ConfigError(f"[grid] {k}: need at least 3 nodes")
    for k in ("t_span", "x_span"):
        if g[k] is not None and not g[k][0] < g[k][1]:
            raise ConfigError(f"[grid] {k}: need an increasing range")
    for op, p in sc.operations:
        if op == "heisenberg":
            surf = p["surface"]
            if surf not in ("linear", "sqrt", "zero", "field") and not _resolve(sc, surf).is_file():
                raise ConfigError(f"[heisenberg] surface: {surf!r} is neither a library surface nor a file")
        if op == "flux_audit" and fl["poly"] is None and fl["builtin"] is None and field is None:
            raise ConfigError("[flux_audit] needs a [flux] section or a field")
        if op == "covering" and (not p["rhos"] or not p["epss"]):
            raise ConfigError("[covering]: rhos and epss must be non-empty")
        if op == "oscillation" and not p["deltas"]:
            raise ConfigError("[oscillation] deltas: must be non-empty")
    for k, v in sc.tolerances.items():
        if not v >= 0:
            raise ConfigError(f"[tolerances] {k}: must be nonnegative")


# -- building fields -------------------------------------------------------------------


def _flux_from(sec: dict[str, Any]) -> FluxModel | None:
    if sec["poly"] is not None:
        return FluxModel.polynomial(sec["poly"], sec["interval"], sec["order"] or 2)
    if sec["builtin"] is not None:
        return builtin_flux(sec["builtin"], sec["interval"], sec["order"])
    return None


def build_field(sc: Scenario) -> solver.SolutionField:
    s, g = sc.sections["scenario"], sc.sections["grid"]
    flux = _flux_from(sc.sections["flux"])
    name = s["field"]
    if name == "csv":
        return solver.read_field_csv(_resolve(sc, s["csv"]), flux)
    if name == "solve":
        nt, nx = g["nt"] or 101, g["nx"] or 401
        t_span, x_span = g["t_span"] or (0.0, 1.0), g["x_span"] or (-1.0, 1.0)
        x = np.linspace(*x_span, nx)
        init = sc.sections["init"]
        if init["kind"] == "constant":
            u0 = np.full_like(x, init["value"])
        elif init["kind"] == "linear":
            u0 = init["slope"] * x + init["value"]
        else:
            u0 = np.sign(x) * np.sqrt(np.abs(x)) + init["value"]
        src = sc.sections["source"]
        amp = src["value"]
        breaks: tuple[float, ...] = tuple(src["breaks"])
        if src["kind"] == "zero":
            source, g_inf = 0.0, 0.0
        elif src["kind"] == "constant":
            source, g_inf = amp, abs(amp)
        else:
            def source(t, x, amp=amp):
                return amp * np.sign(x) * np.ones(np.broadcast(t, x).shape)
            g_inf = abs(amp)
            breaks = tuple(sorted(set(breaks) | {0.0}))
        dt = g["dt"] if g["dt"] is not None else (t_span[1] - t_span[0]) / (nt - 1)
        fld = solver.solve_characteristics(flux, x, u0, source, t_span, dt, breaks=breaks, g_inf=g_inf)
        return fld
    return solver.analytic_library(
        name, nt=g["nt"], nx=g["nx"], t_span=g["t_span"], x_span=g["x_span"],
        c=s["c"], flux=flux, interpolation=s["interpolation"],
    )


def build_surface(sc: Scenario | None, name: str, w: float, field: solver.SolutionField | None = None) -> heisenberg.GraphSurface:
    if name in ("linear", "sqrt", "zero"):
        return heisenberg.surface_library(name, w=w)
    if name == "field":
        if field is None:
            raise ConfigError("surface = field needs a scenario field")
        return heisenberg.GraphSurface.from_field(field)
    path = _resolve(sc, name) if sc is not None else Path(name)
    return heisenberg.read_surface_csv(path)


# -- running operations ------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    bound: float
    passed: bool


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "pass" if v else "fail"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


class Writer:
    """Writes CSVs as ``name.partial`` and renames them all on :meth:`commit`."""

    def __init__(self, out: Path):
        self.out = out
        self.files: list[Path] = []

    def table(self, name: str, header: list[str], rows) -> Path:
        self.out.mkdir(parents=True, exist_ok=True)
        final = self.out / name
        tmp = final.with_name(final.name + ".partial")
        with tmp.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for r in rows:
                w.writerow([_fmt(v) for v in r])
        self.files.append(tmp)
        return final

    def commit(self) -> None:
        for tmp in self.files:
            tmp.replace(tmp.with_name(tmp.name[: -len(".partial")]))
        self.files = []


def _ell(p, field):
    return p["ell"] if p["ell"] is not None else field.flux.order


def op_solve(p, field, sc, w):
    w.table("field.csv", ["t", "x", "u", "g"], _field_rows(field))
    r = solver.weak_residual(field, p["bumps"], sc.seed)
    return [Check("solve_weak_residual", r, sc.tolerances["residual"], r <= sc.tolerances["residual"])]


def _field_rows(field):
    G = field.source_nodes()
    for i, t in enumerate(field.t_grid):
        for j, x in enumerate(field.x_grid):
            yield float(t), float(x), float(field.u[i, j]), float(G[i, j])


def op_holder(p, field, sc, w):
    ell = _ell(p, field)
    rep = estimates.holder_seminorm(field, p["t"], ell, p["window"])
    w.table("holder.csv", ["t", "ell", "empirical", "theoretical", "theoretical_applicable", "exponent_fit", "fit_r2", "scales"],
            [(p["t"], ell, rep.empirical, rep.theoretical, rep.theoretical_applicable, rep.exponent_fit, rep.fit_r2, rep.scales)])
    tol = sc.tolerances
    if p["expected"] is not None:
        bound = p["expected"] * (1 + tol["holder_rel"])
    elif rep.theoretical_applicable:
        bound = rep.theoretical * (1 + tol["holder_rel"])
    else:
        bound = math.inf
    checks = [Check("holder_empirical", rep.empirical, bound, rep.empirical <= bound)]
    if p["expected"] is not None:
        lo = p["expected"] * (1 - tol["holder_rel"])
        checks.append(Check("holder_empirical_lower", rep.empirical, lo, rep.empirical >= lo))
    if rep.fit_reliable:
        dev = abs(rep.exponent_fit - 1.0 / ell)
        checks.append(Check("holder_exponent_deviation", dev, tol["holder_exponent"], dev <= tol["holder_exponent"]))
    return checks


def op_dafermos(p, field, sc, w):
    reps = estimates.balance_sweep(field, p["configs"], sc.seed, h_max=p["h_max"], span_max=p["span_max"],
                                   concave=p["concave"], dt=field.dt)
    w.table("dafermos.csv", ["h", "t1", "t2", "lhs_plus", "rhs_plus", "lhs_minus", "rhs_minus", "quad_error_bound", "pass"],
            [(r.h, r.t1, r.t2, r.lhs_plus, r.rhs_plus, r.lhs_minus, r.rhs_minus, r.quad_error_bound, r.satisfied) for r in reps])
    worst = max(max(0.0, -r.plus_margin - r.quad_error_bound, -r.minus_margin - r.quad_error_bound) for r in reps)
    return [Check("dafermos_violation", worst, 0.0, all(r.satisfied for r in reps))]


def op_lipschitz(p, field, sc, w):
    L = estimates.lipschitz_sweep(field, p["count"], sc.seed)
    tol = sc.tolerances
    bound = field.g_inf * (1 + tol["lipschitz_rel"]) + tol["lipschitz_dt"] * field.dt
    w.table("lipschitz.csv", ["index", "lipschitz"], enumerate(L.tolist()))
    m = float(L.max())
    return [Check("lipschitz_along", m, bound, m <= bound)]


def op_oscillation(p, field, sc, w):
    tab = estimates.oscillation_survey(field, p["samples"], p["deltas"], p["threshold"], _ell(p, field), sc.seed)
    w.table("oscillation.csv", ["delta", "fraction"], tab.rows())
    fr = tab.fractions
    # deltas run from largest to smallest; fractions must not increase along them
    rise = max(float(np.max(np.diff(fr), initial=0.0)), 0.0)
    bound = float(fr[0]) * sc.tolerances["oscillation_decay"]
    return [
        Check("oscillation_monotone", rise, 0.0, rise <= 0.0),
        Check("oscillation_decay", float(fr[-1]), bound, float(fr[-1]) <= bound),
    ]


def op_covering(p, field, sc, w):
    q = field if p["q"] == "field" else field.source
    breaks = field.all_breaks
    t = p["t"] if p["t"] is not None else 0.5 * sum(field.t_span)
    x = p["x"] if p["x"] is not None else 0.5 * sum(field.x_span)
    tab = covering.lebesgue_point_test(field, q, t, x, p["rhos"], p["epss"], tol=sc.tolerances["covering"],
                                       breaks=breaks, ell=p["ell"], reference=p["reference"])
    w.table("covering.csv", ["rho", "eps", "mean_abs_dev", "pass"], tab.rows())
    finals = []
    for row in tab.deviations:
        ok = ~np.isnan(row)
        finals.append(float(row[ok][np.argmin(np.asarray(tab.epss)[ok])]) if ok.any() else math.inf)
    worst = max(finals)
    return [Check("covering_mean_abs_dev", worst, tab.tol, tab.passed)]


def op_residual(p, field, sc, w):
    res = solver.weak_residuals(field, p["bumps"], sc.seed)
    w.table("residual.csv", ["bump", "residual"], enumerate(np.asarray(res).tolist()))
    r = float(np.max(res))
    return [Check("weak_residual", r, sc.tolerances["residual"], r <= sc.tolerances["residual"])]


def op_heisenberg(p, field, sc, w):
    surf = build_surface(sc, p["surface"], p["w"], field)
    mode = p["mode"]
    if mode == "rademacher":
        tab = heisenberg.rademacher_residual(surf, p["point"], p["scales"], tol=sc.tolerances["rademacher"], w_hat=p["w_hat"])
        w.table("rademacher.csv", ["s", "R", "pass"], tab.rows())
        ok = ~np.isnan(tab.residuals)
        final = float(tab.residuals[ok][-1]) if ok.any() else math.inf
        return [Check("rademacher_R", final, tab.tol, tab.passed)]
    if mode == "lip":
        L = heisenberg.intrinsic_lip_constant(surf, p["pairs"], 1e-3, sc.seed)
        bound = p["lip_bound"] if p["lip_bound"] is not None else (surf.lip_const if surf.lip_const is not None else math.inf)
        w.table("intrinsic_lip.csv", ["pairs", "lip"], [(p["pairs"], L)])
        return [Check("intrinsic_lip", L, bound, L <= bound * (1 + sc.tolerances["rel"]))]
    r = heisenberg.graph_balance_residual(surf, p["bumps"], sc.seed)
    w.table("graph_balance.csv", ["bumps", "residual"], [(p["bumps"], r)])
    return [Check("graph_balance_residual", r, sc.tolerances["residual"], r <= sc.tolerances["residual"])]


def flux_audit_rows(flux: FluxModel, ells, I=None, n: int = 256):
    """Rows ``ell, c_ell, separation_margin`` plus the inflection zeros and ``q``."""
    I = tuple(I) if I is not None else flux.interval
    rows = []
    for ell in ells:
        c = nonlinearity_constant(flux, ell, I, n)
        sep = check_fprime_separation(flux, ell, c, I, n)
        rows.append((ell, c, sep.margin))
    zeros = inflection_zeros(flux, I)
    try:
        q = convexity_ratio_q(flux, I).q
    except ValueError:
        q = math.nan
    return rows, zeros, q


def op_flux_audit(p, field, sc, w):
    flux = _flux_from(sc.sections["flux"]) or field.flux
    ells = p["ells"] or tuple(range(2, max(2, flux.order) + 1))
    rows, zeros, q = flux_audit_rows(flux, ells, p["I"], p["n"])
    w.table("flux_audit.csv", ["ell", "c_ell", "separation_margin"], rows)
    w.table("inflections.csv", ["zero"], [(z,) for z in zeros])
    worst = min(r[2] for r in rows)
    return [Check("fprime_separation_margin", worst, -sc.tolerances["abs"], worst >= -sc.tolerances["abs"])]


RUNNERS = {
    "solve": op_solve,
    "holder": op_holder,
    "dafermos": op_dafermos,
    "lipschitz": op_lipschitz,
    "oscillation": op_oscillation,
    "covering": op_covering,
    "residual": op_residual,
    "heisenberg": op_heisenberg,
    "flux_audit": op_flux_audit,
}


def execute(sc: Scenario, out: Path) -> int:
    """Run every operation of a validated scenario, write CSVs and ``summary.csv``."""
    writer = Writer(out)
    need_field = sc.sections["scenario"]["field"] is not None
    field = build_field(sc) if need_field else None
    checks: list[Check] = []
    for op, params in sc.operations:
        checks.extend(RUNNERS[op](params, field, sc, writer))
    writer.table("summary.csv", ["check", "value", "bound", "pass"],
                 [(c.name, float(c.value), float(c.bound), bool(c.passed)) for c in checks])
    writer.commit()
    for c in checks:
        print(f"{c.name}: value={c.value:.6g} bound={c.bound:.6g} {'pass' if c.passed else 'FAIL'}")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


# -- argparse --------------------------------------------------------------------------

SYMBOLS = """\
symbols:
  l (ell)   order of nonlinearity of the flux: |f(v+h)-f(v)-f'(v)h| >= c_l |h|**l
  c_l       nonlinearity constant of order l
  q         min f'' on I over max f'' on the enlarged interval J
  h         band width beside a characteristic in the Dafermos balances
  rho, eps  covering regions |t - sigma| <= eps, |x - gamma(t)| <= rho eps**l
"""


def _add_params(parser: argparse.ArgumentParser, params: tuple[Param, ...]) -> None:
    for p in params:
        kw: dict[str, Any] = dict(dest=f"p_{p.name}", default=None, metavar=p.name.upper())
        kw["help"] = p.help
        if p.default is not None:
            default = ",".join(str(v) for v in p.default) if isinstance(p.default, tuple) else p.default
            kw["help"] += f" (default: {default})"
        if p.choices:
            kw["choices"] = p.choices
        parser.add_argument(f"--{p.name.replace('_', '-')}", **kw)


def _overrides(ns: argparse.Namespace, params: tuple[Param, ...]) -> dict[str, str]:
    out = {}
    for p in params:
        v = getattr(ns, f"p_{p.name}", None)
        if v is not None:
            out[p.name] = v
    return out


def _common(parser: argparse.ArgumentParser, scenario_required: bool = False) -> None:
    parser.add_argument("--scenario", required=scenario_required, help="scenario INI file")
    parser.add_argument("--field", help="analytic field (example33, linear_decay, uniform_source, constant) when no scenario is given")
    parser.add_argument("--seed", type=int, default=None, help="random seed (default: scenario seed or 0)")
    parser.add_argument("--out", help="output directory (default: scenario out or ./out)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="balance-lab",
        description="Verification harness for continuous solutions of scalar balance laws u_t + f(u)_x = g.",
        epilog=SYMBOLS, formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run every operation of a scenario", epilog=SYMBOLS,
                         formatter_class=argparse.RawDescriptionHelpFormatter)
    run.add_argument("scenario", help="scenario INI file")
    run.add_argument("--out", help="output directory (default: scenario out or ./out)")

    for cmd, op in (("solve", "solve"), ("verify-dafermos", "dafermos"), ("holder", "holder"), ("oscillation", "oscillation"),
                    ("covering", "covering"), ("lipschitz", "lipschitz"), ("residual", "residual")):
        sp = sub.add_parser(cmd, help=OPERATIONS[op][0], epilog=SYMBOLS, formatter_class=argparse.RawDescriptionHelpFormatter)
        _common(sp)
        _add_params(sp, OPERATIONS[op][1])
        sp.set_defaults(op=op)

    hp = sub.add_parser("heisenberg", help="intrinsic graph checks on a surface", epilog=SYMBOLS,
                        formatter_class=argparse.RawDescriptionHelpFormatter)
    hp.add_argument("mode", choices=("rademacher", "lip", "balance"))
    hp.add_argument("--seed", type=int, default=None, help="random seed (default: 0)")
    hp.add_argument("--out", help="output directory (default: ./out)")
    _add_params(hp, tuple(p for p in OPERATIONS["heisenberg"][1] if p.name != "mode"))
    hp.set_defaults(op="heisenberg")

    fp = sub.add_parser("flux-audit", help=OPERATIONS["flux_audit"][0], epilog=SYMBOLS,
                        formatter_class=argparse.RawDescriptionHelpFormatter)
    fp.add_argument("--out", help="output directory (default: ./out)")
    _add_params(fp, FLUX_KEYS)
    _add_params(fp, OPERATIONS["flux_audit"][1])
    fp.set_defaults(op="flux_audit")
    return ap


def _ini(sections: dict[str, dict[str, str]]) -> str:
    lines = []
    for name, kv in sections.items():
        lines.append(f"[{name}]")
        lines.extend(f"{k} = {v}" for k, v in kv.items())
        lines.append("")
    return "\n".join(lines)


def scenario_from_args(ns: argparse.Namespace) -> Scenario:
    """Single-operation scenario: the scenario file (if any) with this command's options applied."""
    op = ns.op
    raw: dict[str, dict[str, str]] = {}
    path = None
    if getattr(ns, "scenario", None):
        path = Path(ns.scenario)
        cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
        cp.optionxform = str
        try:
            if not cp.read(path):
                raise ConfigError(f"cannot read scenario {path}")
        except configparser.Error as exc:
            raise ConfigError(str(exc).splitlines()[0]) from None
        raw = {s: dict(cp[s]) for s in cp.sections() if s not in OPERATIONS or s == op}
    raw.setdefault("scenario", {})
    if getattr(ns, "field", None):
        raw["scenario"]["field"] = ns.field
    if getattr(ns, "seed", None) is not None:
        raw["scenario"]["seed"] = str(ns.seed)
    if op == "heisenberg":
        raw.setdefault(op, {})["mode"] = ns.mode
    if op == "flux_audit":
        raw.setdefault("flux", {}).update(_overrides(ns, FLUX_KEYS))
    raw.setdefault(op, {}).update(_overrides(ns, OPERATIONS[op][1]))
    return parse_scenario(_ini(raw), path)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        sc = load_scenario(ns.scenario) if ns.command == "run" else scenario_from_args(ns)
        if ns.command != "run" and not sc.operations:
            raise ConfigError("nothing to run")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = Path(ns.out or sc.sections["scenario"]["out"] or "out")
    if sc.sections["scenario"]["out"] and not ns.out:
        out = _resolve(sc, sc.sections["scenario"]["out"])
    try:
        return execute(sc, out)
    except Exception as exc:  # crash: leave .partial files behind
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
