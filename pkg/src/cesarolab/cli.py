"""Command-line front end: sweeps, checks and flat report files.

Every subcommand is a ``cmd_*`` function taking a :class:`SweepConfig` and
returning a :class:`Report` (rows, manifest, violations); :func:`main` only
parses arguments and serializes.  Rows are produced in (n, alpha, x) order
and floats are written with ``repr`` so identical configurations give
byte-identical files.

Exit codes: 0 pass, 1 invariant violation, 2 configuration or I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from . import __version__, defaults
from .cesaro import coefficient_vector, mean_curves
from .func import FunctionHandle, make_named
from .identities import identity_2_8, identity_2_9, identity_2_10, identity_star
from .kernel import DiagnosticRow, ExtremalRow, diagnostic_rows, extremal_ledger, kernel_slice
from .ons import OrthonormalSystem, parse_system, validate
from .quad import DEFAULT_SPEC, QuadratureSpec

__all__ = [
    "ConfigError",
    "SweepConfig",
    "Report",
    "parse_function",
    "cmd_coeffs",
    "cmd_partial_sum",
    "cmd_cesaro",
    "cmd_kernel",
    "cmd_hn_sweep",
    "cmd_extremal_report",
    "cmd_verify_identity",
    "cmd_verify_ons",
    "cmd_theorem1_demo",
    "main",
]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    system: str = "cosine"
    alphas: tuple[float, ...] = (1.0,)
    ns: tuple[int, ...] = (8,)
    xs: tuple[float, ...] = (0.3,)
    functions: tuple[str, ...] = ()
    second_function: str | None = None
    out: str | None = None
    fmt: str | None = None  # None: the subcommand's default
    quad: QuadratureSpec = DEFAULT_SPEC
    seed: int = 0
    # subcommand options
    which: str = "2.10"
    as_printed: bool = False
    tol: float = defaults.SLACK_TOL
    samples: int = 101
    lemma2: bool = True
    timings: bool = False

    def __post_init__(self):
        if not self.ns or any(n < 1 for n in self.ns):
            raise ConfigError("n schedule must be a nonempty list of positive integers")
        if any(b <= a for a, b in zip(self.ns, self.ns[1:])):
            raise ConfigError(f"n schedule must be strictly increasing: {list(self.ns)}")
        if not self.xs or any(not 0.0 <= x <= 1.0 for x in self.xs):
            raise ConfigError(f"x values must lie in [0, 1]: {list(self.xs)}")
        if not self.alphas or any(not a > 0 for a in self.alphas):
            raise ConfigError(f"alpha values must be > 0: {list(self.alphas)}")
        if self.fmt not in (None, "csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.fmt!r}")

    def echo(self) -> dict[str, Any]:
        d = asdict(self)
        d.pop("timings")
        d["quad"] = asdict(self.quad)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}


@dataclass
class Report:
    command: str
    columns: tuple[str, ...]
    rows: list[tuple]
    thresholds: dict[str, Any] = field(default_factory=dict)
    summary: dict[str, Any] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)
    phases: dict[str, float] = field(default_factory=dict)
    default_format: str = "csv"

    @property
    def ok(self) -> bool:
        return not self.violations

    def manifest(self, config: SweepConfig) -> dict[str, Any]:
        m = {"tool": "cesarolab", "version": __version__, "command": self.command,
             "pilot_version": defaults.PILOT_VERSION, "config": config.echo(),
             "columns": list(self.columns), "thresholds": self.thresholds,
             "summary": self.summary, "violations": list(self.violations)}
        if config.timings:
            m["wall_time_s"] = self.phases
        return m

    @contextmanager
    def phase(self, name: str):
        t0 = time.perf_counter()
        yield
        self.phases[name] = self.phases.get(name, 0.0) + time.perf_counter() - t0


# ---------------------------------------------------------------------------
# parsing helpers


def parse_function(spec: str) -> FunctionHandle:
    """Catalog names, ``poly:c0,c1,...`` and ``phi:<system>:<k>``."""
    spec = spec.strip()
    if spec.startswith("phi:"):
        body, _, k = spec[4:].rpartition(":")
        if not body or not k.isdigit():
            raise ConfigError(f"bad element selector {spec!r}; expected phi:<system>:<k>")
        S = _system(body)
        k = int(k)
        try:
            S.check_index(k)
        except (IndexError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        return S.element(k)
    try:
        return make_named(spec)
    except KeyError as exc:
        raise ConfigError(exc.args[0]) from None


def _system(selector: str) -> OrthonormalSystem:
    try:
        return parse_system(selector)
    except (ValueError, OSError) as exc:
        raise ConfigError(str(exc)) from None


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    """Comma-separated integers and inclusive ranges ``a..b``."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if ".." in part:
                a, b = part.split("..")
                out.extend(range(int(a), int(b) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise ConfigError(f"expected integers or ranges a..b, got {text!r}") from None
    return out


def _triple(n, alpha, x) -> str:
    return f"(n={n}, alpha={alpha!r}, x={x!r})"


def _first_function(config: SweepConfig, default: str) -> FunctionHandle:
    return parse_function(config.functions[0] if config.functions else default)


def _grid_max(ns: Sequence[int], lo: int, hi: int, values: dict[int, float]) -> float | None:
    sel = [values[n] for n in ns if lo <= n <= hi]
    return max(sel) if sel else None


# ---------------------------------------------------------------------------
# subcommands


def cmd_coeffs(config: SweepConfig) -> Report:
    """Rows (k, C_k) for k = 1..max(n)."""
    S, f = _system(config.system), _first_function(config, "half_square")
    rep = Report("coeffs", ("k", "C_k"), [])
    with rep.phase("coefficients"):
        c = coefficient_vector(f, S, max(config.ns), config.quad).values
    rep.rows = [(k, float(v)) for k, v in enumerate(c, start=1)]
    return rep


def cmd_partial_sum(config: SweepConfig) -> Report:
    """Rows (n, x, S_n(x, f))."""
    S, f = _system(config.system), _first_function(config, "half_square")
    rep = Report("partial-sum", ("n", "x", "value"), [])
    N = max(config.ns)
    with rep.phase("coefficients"):
        c = coefficient_vector(f, S, N, config.quad).values
    with rep.phase("sums"):
        terms = c[:, None] * S.antiderivatives(np.arange(1, N + 1), np.asarray(config.xs), 0)
        for n in config.ns:
            for b, x in enumerate(config.xs):
                rep.rows.append((n, x, math.fsum(terms[:n, b])))
    return rep


def cmd_cesaro(config: SweepConfig) -> Report:
    """Rows (n, alpha, x, sigma_n^alpha(x, f))."""
    S, f = _system(config.system), _first_function(config, "half_square")
    rep = Report("cesaro", ("n", "alpha", "x", "value"), [])
    with rep.phase("coefficients"):
        c = coefficient_vector(f, S, max(config.ns), config.quad).values
    with rep.phase("means"):
        curves = {a: mean_curves(c, S, config.ns, a, config.xs) for a in config.alphas}
    for r, n in enumerate(config.ns):
        for a in config.alphas:
            for b, x in enumerate(config.xs):
                rep.rows.append((n, a, x, float(curves[a][r, b])))
    return rep


def cmd_kernel(config: SweepConfig) -> Report:
    """Rows (n, alpha, x, u, Q_n(u, x), int_0^u Q_n) on ``samples`` equispaced u."""
    S = _system(config.system)
    if config.samples < 2:
        raise ConfigError("--samples must be >= 2")
    u = np.linspace(0.0, 1.0, config.samples)
    rep = Report("kernel", ("n", "alpha", "x", "u", "q", "prefix"), [])
    with rep.phase("kernel"):
        for n in config.ns:
            for a in config.alphas:
                for x in config.xs:
                    sl = kernel_slice(S, n, a, x)
                    q, p = sl.q_handle.evaluator(u), sl.prefix_at(u)
                    rep.rows.extend((n, a, x, float(ui), float(qi), float(pi))
                                    for ui, qi, pi in zip(u, q, p))
    return rep


def cmd_hn_sweep(config: SweepConfig) -> Report:
    """One DiagnosticRow per (n, alpha, x) plus bound checks.

    Checks: H_n <= committed cap (cosine, haar, walsh only); no upward trend
    between n in [32, 64] and n in [256, 512] when both windows are swept;
    point-value ratio (1/n^2) sum phi_k(x)^2 <= const n^{-1/2} where a constant is committed; per-interval
    |Q| slack >= -tol when computed.
    """
    S = _system(config.system)
    rep = Report("hn-sweep", DiagnosticRow.FIELDS, [])
    with rep.phase("sweep"):
        rows = diagnostic_rows(S, config.ns, config.alphas, config.xs, lemma2=config.lemma2)
    rep.rows = [r.as_tuple() for r in rows]
    tol = config.tol
    cap = defaults.H_CAPS.get(S.name)
    lem1 = defaults.LEMMA1_CONST.get(S.name)
    if cap is not None:
        rep.thresholds["h_cap"] = cap
        rep.thresholds["trend_factor"] = defaults.TREND_FACTOR
    if lem1 is not None:
        rep.thresholds["lemma1_const"] = lem1
    rep.thresholds["slack_tol"] = tol
    hmax: dict[int, float] = {}
    for r in rows:
        hmax[r.n] = max(hmax.get(r.n, 0.0), r.h_value)
        where = _triple(r.n, r.alpha, r.x)
        if cap is not None and r.h_value > cap + tol:
            rep.violations.append(f"H_n <= {cap}: H={r.h_value!r} at {where}")
        if lem1 is not None and r.lemma1_ratio > lem1 / math.sqrt(r.n) + tol:
            rep.violations.append(f"lemma1 ratio <= {lem1}/sqrt(n): {r.lemma1_ratio!r} at {where}")
        if config.lemma2 and r.lemma2_worst_slack < -tol:
            rep.violations.append(f"interval |Q| bound: slack {r.lemma2_worst_slack!r} at {where}")
    rep.summary["max_h"] = max(hmax.values())
    early, late = _grid_max(config.ns, 32, 64, hmax), _grid_max(config.ns, 256, 512, hmax)
    if early is not None and late is not None:
        rep.summary["trend_ratio"] = late / early
        if cap is not None and late > defaults.TREND_FACTOR * early:
            worst = max((r for r in rows if 256 <= r.n <= 512), key=lambda r: r.h_value)
            rep.violations.append(
                f"no upward trend: max H over n in [256,512] = {late!r} > "
                f"{defaults.TREND_FACTOR} * {early!r} at {_triple(worst.n, worst.alpha, worst.x)}")
    return rep


def cmd_theorem1_demo(config: SweepConfig) -> Report:
    """Rows (f, n, alpha, x, sigma, running_sup) with the sup taken over the n schedule."""
    S = _system(config.system)
    names = config.functions or defaults.THEOREM1_FUNCTIONS
    cap = defaults.SIGMA_CAPS.get(S.name)
    rep = Report("theorem1-demo", ("f", "n", "alpha", "x", "sigma", "running_sup"), [])
    if cap is not None:
        rep.thresholds["sigma_cap"] = cap
    sups = {}
    for name in names:
        f = parse_function(name)
        with rep.phase("coefficients"):
            c = coefficient_vector(f, S, max(config.ns), config.quad).values
        with rep.phase("means"):
            curves = {a: mean_curves(c, S, config.ns, a, config.xs) for a in config.alphas}
        running = {(a, x): 0.0 for a in config.alphas for x in config.xs}
        for r, n in enumerate(config.ns):
            for a in config.alphas:
                for b, x in enumerate(config.xs):
                    s = float(curves[a][r, b])
                    running[a, x] = max(running[a, x], abs(s))
                    rep.rows.append((name, n, a, x, s, running[a, x]))
        (a_w, x_w), sup = max(running.items(), key=lambda kv: kv[1])
        sups[name] = sup
        if cap is not None and sup > cap + config.tol:
            n_w = max(config.ns, key=lambda n: abs(curves[a_w][config.ns.index(n),
                                                            config.xs.index(x_w)]))
            rep.violations.append(f"sup |sigma| <= {cap} for {name}: {sup!r} at {_triple(n_w, a_w, x_w)}")
    rep.summary["sup_abs_sigma"] = sups
    return rep


def cmd_extremal_report(config: SweepConfig) -> Report:
    """Per n: H_n(x0), |U_n(r_n)|, c_n, ||r_n||_Lip1, E_n statistics and the r_n knots."""
    if len(config.xs) != 1:
        raise ConfigError("extremal takes exactly one x")
    S = _system(config.system)
    x0 = config.xs[0]
    cols = ExtremalRow.FIELDS + ("r_breakpoints", "r_slopes")
    rep = Report("extremal", cols, [])
    lip_cap = 2.0
    rep.thresholds.update({"c_n_cap": defaults.CN_CAP, "lip1_cap": lip_cap, "slack_tol": config.tol})
    with rep.phase("extremal"):
        for n in config.ns:
            for a in config.alphas:
                row, r = extremal_ledger(S, n, a, x0, with_function=True)
                rep.rows.append(row.as_tuple() + (" ".join(repr(float(b)) for b in r.breakpoints),
                                                  " ".join(str(int(s)) for s in r.slopes)))
                where = _triple(n, a, x0)
                if row.lip1_norm > lip_cap + config.tol:
                    rep.violations.append(f"||r_n||_Lip1 <= 2: {row.lip1_norm!r} at {where}")
                if row.c_n > defaults.CN_CAP + config.tol:
                    rep.violations.append(f"c_n <= {defaults.CN_CAP}: {row.c_n!r} at {where}")
                if row.e_sum > row.e_bound + config.tol:
                    rep.violations.append(f"sign-change sum <= bound: {row.e_sum!r} > "
                                          f"{row.e_bound!r} at {where}")
    rep.summary["max_c_n"] = max(r[5] for r in rep.rows)
    rep.summary["max_lip1_norm"] = max(r[6] for r in rep.rows)
    return rep


_IDENTITY_NEEDS_SECOND = {"2.10", "star"}


def cmd_verify_identity(config: SweepConfig) -> Report:
    """One ledger per n (and per alpha, x for 2.8); gap <= tol unless ``as_printed``."""
    which = config.which
    if which not in ("2.10", "star", "2.8", "2.9"):
        raise ConfigError(f"--which must be 2.10, star, 2.8 or 2.9, got {which!r}")
    f = _first_function(config, "half_square")
    ledgers = []
    rep = Report("verify-identity", (), [], default_format="json")
    with rep.phase("identities"):
        if which in _IDENTITY_NEEDS_SECOND:
            if config.second_function is None:
                raise ConfigError(f"identity {which} needs --F")
            F = parse_function(config.second_function)
            fn = identity_2_10 if which == "2.10" else identity_star
            for n in config.ns:
                if n < 2:
                    raise ConfigError("identity needs n >= 2")
                ledgers.append(fn(f, F, n, config.as_printed, config.quad))
        else:
            if f.derivative is None:
                raise ConfigError(f"{f.name} carries no derivative")
            S = _system(config.system)
            for n in config.ns:
                if which == "2.9":
                    ledgers.append(identity_2_9(f, S, n, config.quad))
                    continue
                for a in config.alphas:
                    for x in config.xs:
                        ledgers.append(identity_2_8(f, S, n, a, x, config.quad))
    term_names = list(ledgers[0].rhs_terms)
    param_names = list(ledgers[0].parameters)
    rep.columns = ("identity", *param_names, "lhs", "rhs", *term_names, "abs_gap")
    for led in ledgers:
        rep.rows.append((led.name, *led.parameters.values(), led.lhs, led.rhs,
                         *led.rhs_terms.values(), led.abs_gap))
        if not config.as_printed and led.abs_gap > config.tol:
            p = led.parameters
            where = _triple(p.get("n", p.get("k")), p.get("alpha"), p.get("x"))
            rep.violations.append(f"identity {which} gap <= {config.tol}: {led.abs_gap!r} at {where}")
    rep.thresholds["gap_tol"] = config.tol
    rep.summary["max_abs_gap"] = max(led.abs_gap for led in ledgers)
    return rep


def cmd_verify_ons(config: SweepConfig) -> Report:
    """Gram and moment validation up to ``max(n)``; rows (k, mean, first_moment, gram_row_dev)."""
    S = _system(config.system)
    rep = Report("verify-ons", ("k", "mean", "first_moment", "gram_row_dev"), [], default_format="json")
    with rep.phase("validate"):
        m = validate(S, max(config.ns), config.tol, config.quad)
    rep.rows = [tuple(r) for r in m.rows]
    rep.thresholds["tol"] = config.tol
    rep.summary.update({"worst_orthonormality_error": m.worst_orthonormality_error,
                        "worst_mean": m.worst_mean, "worst_first_moment": m.worst_first_moment,
                        "passed": dict(m.passed)})
    for flag, ok in m.passed.items():
        if not ok:
            rep.violations.append(f"guarantee {flag} fails up to k={max(config.ns)} for {S.name}")
    return rep


COMMANDS: dict[str, Callable[[SweepConfig], Report]] = {
    "coeffs": cmd_coeffs,
    "partial-sum": cmd_partial_sum,
    "cesaro": cmd_cesaro,
    "kernel": cmd_kernel,
    "hn-sweep": cmd_hn_sweep,
    "extremal": cmd_extremal_report,
    "verify-identity": cmd_verify_identity,
    "verify-ons": cmd_verify_ons,
    "theorem1-demo": cmd_theorem1_demo,
}


# ---------------------------------------------------------------------------
# serialization


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return _json_value(v.item())
    return v


def _csv_value(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))  # shortest round-trip form, also for numpy scalars
    if isinstance(v, np.integer):
        return int(v)
    return v


def render(report: Report, config: SweepConfig) -> str:
    fmt = config.fmt or report.default_format
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(report.columns)
        w.writerows([_csv_value(v) for v in row] for row in report.rows)
        return buf.getvalue()
    # one line for the manifest and one per row keeps large sweeps diff-friendly
    dump = lambda obj: json.dumps(obj, default=_json_value)  # noqa: E731
    rows = [dump({k: _json_value(v) for k, v in zip(report.columns, row)}) for row in report.rows]
    body = ",\n  ".join(rows)
    return (f'{{"manifest": {dump(report.manifest(config))},\n "rows": [\n  {body}\n ]}}\n'
            if rows else f'{{"manifest": {dump(report.manifest(config))},\n "rows": []}}\n')


def write_report(report: Report, config: SweepConfig) -> None:
    text = render(report, config)
    fmt = config.fmt or report.default_format
    if config.out is None:
        sys.stdout.write(text)
        return
    with open(config.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    if fmt == "csv":
        with open(config.out + ".manifest.json", "w", encoding="utf-8") as fh:
            fh.write(json.dumps(report.manifest(config), default=_json_value) + "\n")


# ---------------------------------------------------------------------------
# argument parsing


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--system", default="cosine",
                   help="cosine | haar | walsh | cr:<system> | rand:<seed>:<count>:<gran> | csv:<path>")
    g.add_argument("--alpha", default="1", help="comma-separated alpha values (> 0)")
    g.add_argument("--n", default=None, help="n schedule: integers and ranges a..b, comma-separated")
    g.add_argument("--n-max", type=int, default=None, help="schedule n-min..n-max")
    g.add_argument("--n-min", type=int, default=1, help="first n when --n-max is used (default 1)")
    g.add_argument("--x", default=None, help="comma-separated evaluation points in [0, 1]")
    g.add_argument("--x-grid", type=int, default=None, help="M equispaced points 0, 1/(M-1), ..., 1")
    g.add_argument("--x-random", type=int, default=None, help="K uniform points drawn with --seed")
    g.add_argument("--f", action="append", default=None,
                   help="function: catalog name, poly:c0,c1,..., phi:<system>:<k> (repeatable)")
    g.add_argument("--F", dest="second", default=None, help="second function for identities")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default=None, help="output file (default stdout)")
    g.add_argument("--format", choices=("csv", "json"), default=None)
    g.add_argument("--tol", type=float, default=defaults.SLACK_TOL, help="tolerance of every check")
    g.add_argument("--timings", action="store_true", help="add wall time per phase to the manifest")
    g.add_argument("--quad-order", type=int, default=DEFAULT_SPEC.panel_rule_order)
    g.add_argument("--quad-min-panels", type=int, default=DEFAULT_SPEC.min_panels)
    g.add_argument("--quad-osc-panels", type=int, default=DEFAULT_SPEC.oscillation_panels_per_period)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="cesarolab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cesarolab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {name: (fn.__doc__ or "").splitlines()[0] for name, fn in COMMANDS.items()}
    parsers = {name: sub.add_parser(name, parents=[common], help=helps[name]) for name in COMMANDS}
    parsers["kernel"].add_argument("--samples", type=int, default=101)
    parsers["hn-sweep"].add_argument("--no-lemma2", action="store_true",
                                     help="skip the per-interval |Q| integrals (the costly part)")
    parsers["verify-identity"].add_argument("--which", required=True, choices=("2.10", "star", "2.8", "2.9"))
    parsers["verify-identity"].add_argument("--as-printed", action="store_true",
                                            help="stop the middle sums at n-1 and report the gap only")
    return parser


_DEFAULT_NS = {"hn-sweep": (2, 512), "theorem1-demo": (1, 512), "extremal": (1, 256), "verify-ons": (64, 64)}


def config_from_args(args: argparse.Namespace) -> SweepConfig:
    if args.n is not None and args.n_max is not None:
        raise ConfigError("give --n or --n-max, not both")
    if args.n is not None:
        ns = _ints(args.n)
    elif args.n_max is not None:
        ns = list(range(args.n_min, args.n_max + 1))
    else:
        lo, hi = _DEFAULT_NS.get(args.command, (8, 8))
        ns = list(range(lo, hi + 1))
    x_sources = [s is not None for s in (args.x, args.x_grid, args.x_random)]
    if sum(x_sources) > 1:
        raise ConfigError("give at most one of --x, --x-grid, --x-random")
    if args.x is not None:
        xs = _floats(args.x)
    elif args.x_grid is not None:
        if args.x_grid < 2:
            raise ConfigError("--x-grid needs at least 2 points")
        xs = [i / (args.x_grid - 1) for i in range(args.x_grid)]
    elif args.x_random is not None:
        xs = sorted(float(v) for v in np.random.default_rng(args.seed).uniform(0.0, 1.0, args.x_random))
    else:
        xs = [0.3]
    try:
        quad = QuadratureSpec(args.quad_order, args.quad_min_panels, args.quad_osc_panels)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return SweepConfig(
        system=args.system, alphas=tuple(_floats(args.alpha)), ns=tuple(ns), xs=tuple(xs),
        functions=tuple(args.f or ()), second_function=args.second, out=args.out, fmt=args.format,
        quad=quad, seed=args.seed, which=getattr(args, "which", "2.10"),
        as_printed=getattr(args, "as_printed", False), tol=args.tol,
        samples=getattr(args, "samples", 101), lemma2=not getattr(args, "no_lemma2", False),
        timings=args.timings)


def run(command: str, config: SweepConfig) -> Report:
    return COMMANDS[command](config)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        report = run(args.command, config)
        write_report(report, config)
    except (ConfigError, KeyError, IndexError, ValueError, OverflowError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"cesarolab: configuration error: {msg}", file=sys.stderr)
        return 2
    if report.violations:
        for v in report.violations:
            print(f"cesarolab: invariant violated: {v}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
