"""Command-line front end: config parsing, route orchestration,
cross-validation, coupling sweeps, and CSV/JSON emission.

Config files are flat UTF-8 text, one `section.key = value` per line, with
`#` comments. Exactly these keys exist (unknown keys are config errors):

    model.family          linear | tan | tabulated
    model.w1              slope of the linear superpotential
    model.alpha0          strength of the trigonometric superpotential
    model.kappa           electric coupling
    model.mass            fermion mass
    model.table_path      3-column text file (x, W, W') for tabulated W
    grid.n                interior lattice points
    grid.box_half_width   half-width L of the solver box
    solver.route          analytic | dirac | susy | all
    solver.levels         number of reduced levels (n_sigma <= levels-1)
    solver.tolerance      convergence tolerance for the lattice route
    output.format         csv | json
    output.path           output file (stdout when unset)

Command-line flags named after the keys (`--model.kappa 0.6`) override file
values. Numbers are serialized with 15 significant digits and all row orders
are deterministic, so identical configs give byte-identical output.

Exit codes: 0 ok, 1 verification failure, 2 config error, 3 critical or
unbound field on a closed-form route, 4 convergence failure, 5 level not
found.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import analytic, dirac_solver, susy_reduction
from .errors import (
    BracketError,
    ConfigError,
    ConvergenceError,
    CriticalFieldError,
    DegenerateStateError,
    DiracOscError,
    DomainError,
    IndexOutOfRangeError,
    NoRealEnergyError,
    ResourceError,
)
from .model import (
    Family,
    Grid,
    PhysicalParams,
    SpectrumRecord,
    Superpotential,
    build_grid,
)

__all__ = [
    "RunConfig",
    "parse_config_text",
    "load_config",
    "cmd_spectrum",
    "cmd_sweep_kappa",
    "cmd_verify",
    "cmd_wavefunction",
    "main",
]

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_CONFIG = 2
EXIT_CRITICAL_FIELD = 3
EXIT_CONVERGENCE = 4
EXIT_LEVEL_NOT_FOUND = 5

_STR_KEYS = {"model.family", "model.table_path", "solver.route", "output.format", "output.path"}
_FLOAT_KEYS = {"model.w1", "model.alpha0", "model.kappa", "model.mass",
               "grid.box_half_width", "solver.tolerance"}
_INT_KEYS = {"grid.n", "solver.levels"}
ALL_KEYS = _STR_KEYS | _FLOAT_KEYS | _INT_KEYS


@dataclass(frozen=True)
class RunConfig:
    family: str = "linear"
    w1: float = 1.0
    alpha0: float = 5.0
    kappa: float = 0.0
    mass: float = 1.0
    table_path: str | None = None
    n: int = 4000
    box_half_width: float | None = None
    route: str = "all"
    levels: int = 5
    tolerance: float = 1e-6
    format: str = "csv"
    path: str | None = None


_FIELD_OF_KEY = {
    "model.family": "family",
    "model.w1": "w1",
    "model.alpha0": "alpha0",
    "model.kappa": "kappa",
    "model.mass": "mass",
    "model.table_path": "table_path",
    "grid.n": "n",
    "grid.box_half_width": "box_half_width",
    "solver.route": "route",
    "solver.levels": "levels",
    "solver.tolerance": "tolerance",
    "output.format": "format",
    "output.path": "path",
}


def _coerce(key: str, raw: str):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc
    return raw


def parse_config_text(text: str) -> dict:
    """`section.key = value` lines -> validated {key: typed value} mapping."""
    out: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected `section.key = value`")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in ALL_KEYS:
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        out[key] = _coerce(key, raw)
    return out


def _validated(cfg: RunConfig) -> RunConfig:
    if cfg.family not in ("linear", "tan", "tabulated"):
        raise ConfigError(f"model.family must be linear|tan|tabulated, got {cfg.family!r}")
    if cfg.route not in ("analytic", "dirac", "susy", "all"):
        raise ConfigError(f"solver.route must be analytic|dirac|susy|all, got {cfg.route!r}")
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"output.format must be csv|json, got {cfg.format!r}")
    if cfg.levels < 1:
        raise ConfigError("solver.levels must be >= 1")
    if cfg.n < 3:
        raise ConfigError("grid.n must be >= 3")
    if not cfg.tolerance > 0.0:
        raise ConfigError("solver.tolerance must be positive")
    if cfg.family == "tabulated" and not cfg.table_path:
        raise ConfigError("model.table_path is required for the tabulated family")
    if not math.isfinite(cfg.kappa):
        raise ConfigError("model.kappa must be finite")
    if cfg.mass < 0.0:
        raise ConfigError("model.mass must be >= 0")
    return cfg


def load_config(path: str | None, overrides: dict) -> RunConfig:
    """Merge file values (if any) and CLI overrides into a RunConfig."""
    merged: dict = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                merged.update(parse_config_text(fh.read()))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for key, value in overrides.items():
        if value is None:
            continue
        if key not in ALL_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        merged[key] = _coerce(key, str(value))
    cfg = RunConfig(**{_FIELD_OF_KEY[k]: v for k, v in merged.items()})
    return _validated(cfg)


def _load_table(path: str) -> Superpotential:
    """3-column whitespace text (x, W, W') -> tabulated superpotential."""
    try:
        data = np.loadtxt(path, ndmin=2)
    except OSError as exc:
        raise ConfigError(f"cannot read table {path}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"malformed superpotential table {path}: {exc}") from exc
    if data.shape[1] != 3:
        raise ConfigError(
            f"superpotential table {path} must have 3 columns (x, W, W'), "
            f"got {data.shape[1]}"
        )
    return Superpotential.tabulated(data[:, 0], data[:, 1], data[:, 2])


def _build_problem(cfg: RunConfig) -> tuple[PhysicalParams, Grid]:
    if cfg.family == "linear":
        sp = Superpotential.linear(cfg.w1)
    elif cfg.family == "tan":
        sp = Superpotential.tangent(cfg.alpha0)
    else:
        sp = _load_table(cfg.table_path)
    params = PhysicalParams(superpotential=sp, kappa=cfg.kappa, mass=cfg.mass)
    if cfg.box_half_width is None:
        grid = dirac_solver.default_grid(params, n=cfg.n)
    else:
        grid = build_grid(cfg.box_half_width, cfg.n, sp.family)
    return params, grid


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return f"{x:.15g}"
    return str(x)


def _json_num(x):
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return None
    return float(f"{x:.15g}")


def _record_row(rec: SpectrumRecord) -> dict:
    return {
        "route": rec.route,
        "branch": "+" if rec.branch > 0 else "-",
        "sigma": rec.sigma,
        "n": rec.n,
        "n_sigma": rec.n_sigma,
        "E": rec.E,
        "epsilon": rec.epsilon,
        "converged": rec.converged,
        "err_est": rec.err_est,
    }


def _emit(rows: list[dict], header: list[str], cfg: RunConfig, preamble: list[str] = ()):
    """Serialize rows to CSV or JSON; write to output.path or stdout."""
    if cfg.format == "csv":
        buf = io.StringIO()
        for line in preamble:
            buf.write(f"# {line}\n")
        buf.write(",".join(header) + "\n")
        for row in rows:
            buf.write(",".join(_fmt(row.get(col)) for col in header) + "\n")
        text = buf.getvalue()
    else:
        payload = [
            {col: (_json_num(v) if isinstance((v := row.get(col)), float) else v)
             for col in header}
            for row in rows
        ]
        if preamble:
            payload = {"info": list(preamble), "records": payload}
        text = json.dumps(payload, indent=1) + "\n"
    if cfg.path:
        with open(cfg.path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


SPECTRUM_HEADER = ["route", "branch", "sigma", "n", "n_sigma", "E", "epsilon",
                   "converged", "err_est"]


def _analytic_records(params, max_n):
    return analytic.full_spectrum(params, max_n)


def _susy_records(params, grid, max_n):
    if abs(params.kappa) >= 1.0:
        raise CriticalFieldError(
            f"|kappa| = {abs(params.kappa)} >= 1: no bound states on this route"
        )
    sp = params.superpotential
    if sp.family is Family.TABULATED:
        indices = [(-1, n) for n in range(max_n + 1)] + [(1, n) for n in range(max_n)]
    else:
        admissible = analytic._admissible_n_sigma(params, max_n)
        indices = [(-1, k) for k in admissible] + [(1, k - 1) for k in admissible if k >= 1]
    records = []
    for sigma, n in indices:
        plus, minus = susy_reduction.solve_nonlinear_level(params, sigma, n, grid)
        records.extend([plus, minus])
    records.sort(key=lambda r: (abs(r.E), r.sigma, -r.branch))
    return records


def _dirac_result(params, grid, cfg) -> dirac_solver.ConvergeResult:
    return dirac_solver.converge_box_full(
        params, count=cfg.levels, tol=cfg.tolerance, grid=grid
    )


def _xcheck_column(rows: list[dict]) -> None:
    """Per (branch, n_sigma) group: max pairwise cross-route |dE|, relative
    to max(|E|, 1) in the group."""
    groups: dict = {}
    for row in rows:
        groups.setdefault((row["branch"], row["n_sigma"]), []).append(row)
    for members in groups.values():
        by_route: dict = {}
        for row in members:
            by_route.setdefault(row["route"], row["E"])
        vals = list(by_route.values())
        worst = 0.0
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                scale = max(abs(vals[i]), abs(vals[j]), 1.0)
                worst = max(worst, abs(vals[i] - vals[j]) / scale)
        for row in members:
            row["xcheck"] = worst


def cmd_spectrum(cfg: RunConfig) -> int:
    """Run the selected route(s) and emit the spectrum table. route=all adds
    a per-level cross-route max-discrepancy column."""
    params, grid = _build_problem(cfg)
    max_n = cfg.levels - 1
    rows: list[dict] = []
    if cfg.route in ("analytic", "all"):
        rows.extend(_record_row(r) for r in _analytic_records(params, max_n))
    if cfg.route in ("susy", "all"):
        rows.extend(_record_row(r) for r in _susy_records(params, grid, max_n))
    if cfg.route in ("dirac", "all"):
        rows.extend(_record_row(r) for r in _dirac_result(params, grid, cfg).records)
    header = list(SPECTRUM_HEADER)
    if cfg.route == "all":
        _xcheck_column(rows)
        header.append("xcheck")
    rows.sort(key=lambda r: (abs(r["E"]), r["n_sigma"], r["sigma"],
                             r["branch"], r["route"]))
    _emit(rows, header, cfg)
    return EXIT_OK


SWEEP_HEADER = ["kappa"] + SPECTRUM_HEADER + ["pr"]


def cmd_sweep_kappa(cfg: RunConfig, kappa_list: list[float]) -> int:
    """One lattice-route row per (kappa, level view): energies, convergence
    flags (the unbound marker beyond the critical coupling), participation
    ratios. Rows are ordered by kappa ascending, then |E|."""
    if not kappa_list:
        raise ConfigError("sweep needs at least one kappa value")
    for k in kappa_list:
        if not -1.5 <= k <= 1.5:
            raise ConfigError(f"sweep kappa {k} outside [-1.5, 1.5]")
    rows: list[dict] = []
    for kappa in sorted(kappa_list):
        point_cfg = replace(cfg, kappa=kappa)
        try:
            params, grid = _build_problem(point_cfg)
            result = _dirac_result(params, grid, point_cfg)
        except DiracOscError as exc:
            print(f"sweep point kappa={kappa:g} failed: {exc}", file=sys.stderr)
            rows.append({"kappa": kappa, "route": "dirac", "converged": False})
            continue
        for rec, state in zip(result.records, result.states):
            row = {"kappa": kappa, **_record_row(rec)}
            row["pr"] = state.participation_ratio if state is not None else None
            rows.append(row)
    _emit(rows, SWEEP_HEADER, cfg)
    return EXIT_OK


def _verify_checks(cfg: RunConfig):
    """(name, passed, detail) triples for the internal consistency audit."""
    params, grid = _build_problem(cfg)
    if params.superpotential.family is Family.TABULATED:
        raise ConfigError("verify needs a certified family (linear or tan)")
    max_n = min(cfg.levels - 1, 4)
    ana = _analytic_records(params, max_n)
    susy = _susy_records(params, grid, max_n)
    dirac = dirac_solver.converge_box(
        params, count=max_n + 1, tol=cfg.tolerance, grid=grid
    )
    checks = []

    def keyed(records):
        out = {}
        for rec in records:
            out.setdefault((rec.branch, rec.n_sigma), rec.E)
        return out

    worst = 0.0
    ka, ks, kd = keyed(ana), keyed(susy), keyed(dirac)
    for key, ea in ka.items():
        for other in (ks, kd):
            if key in other:
                worst = max(worst, abs(ea - other[key]) / max(abs(ea), 1.0))
    checks.append(("three-route agreement", worst <= 1e-4,
                   f"max cross-route discrepancy {worst:.3e} (limit 1e-04)"))

    bad = sorted({(r.branch, r.n_sigma) for r in dirac if not r.converged})
    drift = max((r.err_est for r in dirac if r.err_est is not None), default=0.0)
    checks.append((
        "lattice resolution", not bad,
        f"levels (branch, n_sigma) = {bad} still drift under refinement, "
        f"max inter-round shift {drift:.3e}" if bad
        else f"all {len(dirac)} lattice levels stationary under box refinement",
    ))

    ok = True
    details = []
    for name, records in (("analytic", ana), ("dirac", dirac)):
        for branch in (1, -1):
            subset = [r for r in records if r.branch == branch]
            pairs, unpaired = analytic.degenerate_pairs(subset)
            paired_k = {p[0].n_sigma for p in pairs}
            expect = {r.n_sigma for r in subset if r.n_sigma >= 1
                      and any(s.n_sigma == r.n_sigma and s.sigma != r.sigma
                              for s in subset)}
            if paired_k != expect:
                ok = False
                details.append(f"{name} branch {branch:+d}: paired {sorted(paired_k)}"
                               f" expected {sorted(expect)}")
            if any(r.n_sigma == 0 and r.sigma == -1 for p in pairs for r in p):
                ok = False
                details.append(f"{name} branch {branch:+d}: ground level paired")
    checks.append(("degeneracy pairing", ok, "; ".join(details) or "all nonzero levels paired, ground unpaired"))

    worst = 0.0
    for keymap in (ka, ks, kd):
        for (branch, k_sig), e in keymap.items():
            if branch != 1:
                continue
            mirror = keymap.get((-1, k_sig))
            if mirror is None:
                continue
            worst = max(worst, abs(e + mirror) / max(abs(e), 1.0))
    checks.append(("branch symmetry", worst <= 1e-5,
                   f"max |E+ + E-| deviation {worst:.3e} (limit 1e-05)"))

    x = grid.x
    worst = 0.0
    for e_probe in (0.0, 0.5, 1.0, max(params.mass, 1.0) * 1.5):
        weff = susy_reduction.effective_superpotential(
            params.superpotential, params.kappa, e_probe)
        shift = (params.kappa * e_probe) ** 2 / (1.0 - params.kappa**2)
        for sigma in (-1, 1):
            v13 = weff.value(x) ** 2 + sigma * weff.derivative(x)
            v12 = susy_reduction.squared_form_potential(
                params.superpotential, params.kappa, e_probe, sigma, x)
            scale = np.maximum(1.0, np.maximum(np.abs(v12), np.abs(v13)))
            worst = max(worst, float(np.max(np.abs(v13 - v12 - shift) / scale)))
    checks.append(("potential identity", worst <= 1e-10,
                   f"max pointwise deviation {worst:.3e} (limit 1e-10)"))

    worst = 0.0
    omk = 1.0 - params.kappa**2
    sp = params.superpotential
    for rec in ana:
        eps = rec.E**2 / omk - params.mass**2
        if sp.family is Family.TANGENT:
            alpha = sp.alpha0 * math.sqrt(omk)
            beta = params.kappa * rec.E / math.sqrt(omk)
            law = analytic.tan_epsilon(alpha, beta, rec.n_sigma)
        else:
            law = analytic.linear_epsilon(sp.w1, params.kappa, rec.n_sigma)
        worst = max(worst, abs(law - eps) / max(abs(eps), 1.0))
    checks.append(("closed-form level residual", worst <= 1e-12,
                   f"max level-law residual {worst:.3e} (limit 1e-12)"))
    return checks


def cmd_verify(cfg: RunConfig) -> int:
    """Cross-route and internal-identity audit; PASS/FAIL line per check,
    exit 0 iff all pass."""
    checks = _verify_checks(cfg)
    lines = []
    for name, passed, detail in checks:
        lines.append(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
    report = "\n".join(lines) + "\n"
    if cfg.path:
        with open(cfg.path, "w", encoding="utf-8") as fh:
            fh.write(report)
    else:
        sys.stdout.write(report)
    return EXIT_OK if all(c[1] for c in checks) else EXIT_VERIFY_FAIL


def cmd_wavefunction(cfg: RunConfig, sigma: int, n: int, branch: int = 1) -> int:
    """Emit per-point probability densities of one level from both the
    lattice eigenvector and the reconstructed reduced-route state, plus their
    overlap. Exits 5 when the requested level is not a bound state."""
    if sigma not in (-1, 1):
        raise ConfigError("sigma must be -1 or +1")
    if n < 0:
        raise ConfigError("n must be >= 0")
    if branch not in (-1, 1):
        raise ConfigError("branch must be -1 or +1")
    params, grid = _build_problem(cfg)
    n_sigma = n + (1 + sigma) // 2
    result = dirac_solver.converge_box_full(
        params, count=max(cfg.levels, n_sigma + 2), tol=cfg.tolerance, grid=grid
    )
    match = None
    for rec, state in zip(result.records, result.states):
        if (rec.sigma, rec.n, rec.branch) == (sigma, n, branch):
            match = (rec, state)
            break
    if match is None:
        raise IndexOutOfRangeError(
            f"no lattice level with sigma={sigma}, n={n}, branch={branch:+d}"
        )
    rec, dstate = match
    if not rec.converged or dstate is None:
        raise ConvergenceError(
            f"level (sigma={sigma}, n={n}, branch={branch:+d}) is not a "
            "converged bound state"
        )
    _, sstate = susy_reduction.susy_state(params, sigma, n, result.base_grid, branch)
    g = result.base_grid
    overlap = float(abs(g.h * np.sum(
        np.conj(sstate.psi1) * dstate.psi1
        + np.conj(sstate.psi2) * dstate.psi2)))
    q_d = np.abs(dstate.psi1) ** 2 + np.abs(dstate.psi2) ** 2
    q_s = np.abs(sstate.psi1) ** 2 + np.abs(sstate.psi2) ** 2
    cum_d = np.cumsum(q_d) * g.h
    cum_s = np.cumsum(q_s) * g.h
    rows = []
    for i in range(g.n):
        rows.append({
            "x": float(g.x[i]),
            "psi1_sq_dirac": float(np.abs(dstate.psi1[i]) ** 2),
            "psi2_sq_dirac": float(np.abs(dstate.psi2[i]) ** 2),
            "cum_dirac": float(cum_d[i]),
            "psi1_sq_susy": float(np.abs(sstate.psi1[i]) ** 2),
            "psi2_sq_susy": float(np.abs(sstate.psi2[i]) ** 2),
            "cum_susy": float(cum_s[i]),
        })
    header = ["x", "psi1_sq_dirac", "psi2_sq_dirac", "cum_dirac",
              "psi1_sq_susy", "psi2_sq_susy", "cum_susy"]
    preamble = [
        f"level sigma={sigma} n={n} branch={branch:+d} E={_fmt(rec.E)}",
        f"overlap = {_fmt(overlap)}",
    ]
    _emit(rows, header, cfg, preamble=preamble)
    return EXIT_OK


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="config file (section.key = value lines)")
    for key in sorted(ALL_KEYS):
        p.add_argument(f"--{key}", dest=key, metavar="V", help=argparse.SUPPRESS)
    p.add_argument("--output", dest="output.path_alias", metavar="PATH",
                   help="output file (default stdout)")
    p.add_argument("--format", dest="output.format_alias", choices=("csv", "json"),
                   help="output format (default csv)")


def _config_from_args(args) -> RunConfig:
    overrides = {key: getattr(args, key, None) for key in ALL_KEYS}
    alias_path = getattr(args, "output.path_alias", None)
    if alias_path is not None:
        overrides["output.path"] = alias_path
    alias_fmt = getattr(args, "output.format_alias", None)
    if alias_fmt is not None:
        overrides["output.format"] = alias_fmt
    return load_config(args.config, overrides)


def _parse_kappas(raw: str) -> list[float]:
    try:
        return [float(tok) for tok in raw.replace(",", " ").split()]
    except ValueError as exc:
        raise ConfigError(f"bad --kappas list: {raw!r}") from exc


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="diracosc",
        description="Spectra of the (1+1)D Dirac oscillator in a "
                    "superpotential-shaped electric field.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_spec = sub.add_parser("spectrum", help="level table from the selected route(s)")
    _add_config_flags(p_spec)

    p_sweep = sub.add_parser("sweep-kappa", help="lattice spectrum vs coupling")
    _add_config_flags(p_sweep)
    p_sweep.add_argument("--kappas", required=True,
                         help="comma- or space-separated coupling values")

    p_verify = sub.add_parser("verify", help="cross-route consistency audit")
    _add_config_flags(p_verify)

    p_wave = sub.add_parser("wavefunction", help="per-point densities of one level")
    _add_config_flags(p_wave)
    p_wave.add_argument("--sigma", type=int, required=True, choices=(-1, 1))
    p_wave.add_argument("--n", type=int, required=True)
    p_wave.add_argument("--branch", type=int, default=1, choices=(-1, 1))

    args = parser.parse_args(argv)
    wavefunction = args.command == "wavefunction"
    try:
        cfg = _config_from_args(args)
        if args.command == "spectrum":
            return cmd_spectrum(cfg)
        if args.command == "sweep-kappa":
            return cmd_sweep_kappa(cfg, _parse_kappas(args.kappas))
        if args.command == "verify":
            return cmd_verify(cfg)
        return cmd_wavefunction(cfg, sigma=args.sigma, n=args.n, branch=args.branch)
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IndexOutOfRangeError, DegenerateStateError, NoRealEnergyError) as exc:
        print(f"level not found: {exc}", file=sys.stderr)
        return EXIT_LEVEL_NOT_FOUND
    except CriticalFieldError as exc:
        if wavefunction:
            print(f"level not found: {exc}", file=sys.stderr)
            return EXIT_LEVEL_NOT_FOUND
        print(f"critical field: {exc}", file=sys.stderr)
        return EXIT_CRITICAL_FIELD
    except (ConvergenceError, ResourceError, BracketError) as exc:
        if wavefunction:
            print(f"level not found: {exc}", file=sys.stderr)
            return EXIT_LEVEL_NOT_FOUND
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
