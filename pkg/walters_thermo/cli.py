"""
Command-line entry point for walters-thermo.

Every command builds a CommandReport, writes it to stdout (or --out) as CSV or
JSON, and exits 0 on success, 2 on validation failures and 3 on numerical
failures. Logs go to stderr.
"""
import argparse
import hashlib
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

from walters_thermo import __version__
from walters_thermo.config import Config
from walters_thermo.eigen import eigen_residual, h_values
from walters_thermo.errors import HypothesisViolation, SpecValidationError, WaltersThermoError
from walters_thermo.gibbs import PURE_RUN_MODES, SUBTRACT, cylinder_measure, s0_s1, top_cylinders
from walters_thermo.logging_config import get_logger, setup_logging
from walters_thermo.oracle import CONSTANT_EXTENSION, PERIODIC_EXTENSION, oracle_cylinder, oracle_pressure
from walters_thermo.potential import PatternPoint, WaltersPotential, Word
from walters_thermo.pressure import example_pressure_identity, pressure
from walters_thermo.reports import CommandReport
from walters_thermo.specs import example1, load_potential
from walters_thermo.sweep import map_grid, parse_t_grid
from walters_thermo.zerotemp import (
    PeriodicAttainer,
    Subaction,
    calibration_residual,
    check_max_hypothesis,
    compute_A,
    cylinder_rate,
    epsilon_rate,
    is_nonpositive,
    limit_report,
    nonpositive_A,
    nonpositive_case,
    psi,
    select_measure,
)

logger = get_logger(__name__)

COMMANDS = ("validate", "pressure", "eigen", "gibbs", "zero-temp", "select", "rates", "oracle", "example1", "runs")
DEFAULT_WORDS = ("0", "1", "01", "10")
DEFAULT_RATE_GRID = "20:80:4"
DEFAULT_DEPTHS = (4, 6, 8, 10, 12)
EXAMPLE_TEMPERATURES = (1.0, 5.0, 20.0)
EXAMPLE_RATE_GRID = (20.0, 40.0, 60.0, 80.0)
EXAMPLE_A = -3.5


@dataclass
class RunConfig:
    """
    One CLI invocation.

    Attributes:
        command: Command name
        spec_path: JSON potential spec, exclusive with builtin
        builtin: Built-in potential name
        t: Single inverse temperature
        t_grid: Grid text "A:B:N[:log]"
        words: Cylinder words
        depths: Oracle memory depths
        tol: Pressure tolerance override
        fmt: "csv" or "json"
        q_max: Pattern depth for eigenfunction and subaction tables
        pure_runs: Pure-run measure mode
        extension: Oracle extension convention
        out: Output file, stdout when None
        store: Save the report in the run store
        limit: Number of stored runs to list
        run_command: Only list stored runs of this command
        show: Stored run id to print in full
        delete: Stored run id to remove
    """

    command: str
    spec_path: Optional[str] = None
    builtin: Optional[str] = None
    t: Optional[float] = None
    t_grid: Optional[str] = None
    words: tuple = ()
    depths: tuple = ()
    tol: Optional[float] = None
    fmt: str = "csv"
    q_max: int = 10
    pure_runs: str = SUBTRACT
    extension: str = CONSTANT_EXTENSION
    out: Optional[str] = field(default=None, compare=False)
    store: bool = field(default=False, compare=False)
    limit: int = 20
    run_command: Optional[str] = None
    show: Optional[int] = None
    delete: Optional[int] = None

    def validate(self) -> None:
        """
        Raises:
            SpecValidationError: On any inconsistent or out-of-range field
        """
        if self.command not in COMMANDS:
            raise SpecValidationError(f"unknown command {self.command!r}", module="cli")
        if self.t is not None and self.t_grid is not None:
            raise SpecValidationError("give either --t or --t-grid, not both", module="cli")
        if self.t is not None and not self.t > 0:
            raise SpecValidationError(f"t must be positive, got {self.t}", module="cli")
        if self.t_grid is not None:
            parse_t_grid(self.t_grid)
        for w in self.words:
            try:
                Word(w)
            except ValueError as e:
                raise SpecValidationError(str(e), module="cli")
        if any(k < 2 for k in self.depths):
            raise SpecValidationError("oracle depths must be >= 2", module="cli")
        if self.tol is not None and not 0 < self.tol < 1:
            raise SpecValidationError(f"tol must lie in (0, 1), got {self.tol}", module="cli")
        if self.q_max < 1:
            raise SpecValidationError(f"q-max must be >= 1, got {self.q_max}", module="cli")
        if self.fmt not in ("csv", "json"):
            raise SpecValidationError(f"unknown format {self.fmt!r}", module="cli")
        if self.show is not None and self.delete is not None:
            raise SpecValidationError("give either --show or --delete, not both", module="cli")
        if self.limit < 1:
            raise SpecValidationError(f"limit must be >= 1, got {self.limit}", module="cli")

    def grid(self, default: Optional[str] = None) -> list[float]:
        if self.t is not None:
            return [float(self.t)]
        if self.t_grid is not None:
            return parse_t_grid(self.t_grid)
        if default is not None:
            return parse_t_grid(default)
        return [1.0]

    def potential_label(self) -> str:
        return self.spec_path or self.builtin or ""

    def digest(self) -> str:
        """SHA-256 of the canonical JSON of every field that shapes the report."""
        data = asdict(self)
        data.pop("out")
        data.pop("store")
        canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _exp(log_value: float) -> float:
    if log_value > 709.0:
        return math.inf
    return math.exp(log_value)


def _words(config: RunConfig) -> tuple:
    return config.words or DEFAULT_WORDS


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _cmd_validate(f: WaltersPotential, config: RunConfig) -> CommandReport:
    report = CommandReport("validate", f.name, notes=list(f.notes))
    rows = report.rows
    for key, seq in f.sequences().items():
        rows.append({"check": f"limit {key}", "value": seq.limit, "status": "info"})
        rows.append({"check": f"tail sum {key}", "value": seq.tail_sum(1), "status": "pass"})
    equal = f.a == f.c
    rows.append({"check": "beta(f) = a = c", "value": f.a - f.c, "status": _status(equal)})
    if equal:
        screen = check_max_hypothesis(f)
        if isinstance(screen, PeriodicAttainer):
            rows.append({"check": "maximizing measures in span{delta_0, delta_1}",
                         "value": screen.excess, "status": "fail"})
            report.notes.append(f"periodic orbit (0^{screen.j0 + 1} 1^{screen.j1 + 1})^inf attains beta(f)")
        else:
            rows.append({"check": "maximizing measures in span{delta_0, delta_1}",
                         "value": screen.sup_d + screen.sup_b - 2 * f.a, "status": "pass"})
    else:
        rows.append({"check": "maximizing measures in span{delta_0, delta_1}", "value": None, "status": "n/a"})
    in_class = is_nonpositive(f)
    rows.append({"check": "non-positive class", "value": float(in_class), "status": "info"})
    if in_class:
        rows.append({"check": "non-positive case", "value": float(nonpositive_case(f)), "status": "info"})
    report.summary = {"hypotheses_hold": all(r["status"] != "fail" for r in rows), "non_positive": in_class}
    return report


def _cmd_pressure(f: WaltersPotential, config: RunConfig) -> CommandReport:
    solutions = map_grid(lambda t: pressure(f, t, config.tol), config.grid())
    rows = [
        {"t": s.t, "P": s.P, "epsilon": s.epsilon, "iterations": s.iterations, "residual": s.residual}
        for s in solutions
    ]
    report = CommandReport("pressure", f.name, notes=list(f.notes), rows=rows)
    if len(solutions) == 1:
        report.summary = {"P": solutions[0].P, "epsilon": solutions[0].epsilon}
    return report


def _cmd_eigen(f: WaltersPotential, config: RunConfig) -> CommandReport:
    points = [PatternPoint.zero_inf(), PatternPoint.one_inf()]
    points += [PatternPoint.zero_run(q) for q in range(1, config.q_max + 1)]
    points += [PatternPoint.one_run(q) for q in range(1, config.q_max + 1)]
    rows = []
    worst = 0.0
    for t in config.grid():
        e = h_values(f, t, tol=config.tol)
        for p in points:
            log_h = e.on_pattern(p)
            residual = eigen_residual(f, t, p, e)
            worst = max(worst, residual)
            rows.append({"t": t, "pattern": p.label(), "log_h": log_h, "h": _exp(log_h), "residual": residual})
    return CommandReport("eigen", f.name, notes=list(f.notes), rows=rows, summary={"max_residual": worst})


def _cmd_gibbs(f: WaltersPotential, config: RunConfig) -> CommandReport:
    rows = []
    for t in config.grid():
        for w in _words(config):
            log_mu = cylinder_measure(f, t, w, config.pure_runs, config.tol)
            rows.append({"t": t, "word": w, "measure": _exp(log_mu), "log_measure": log_mu})
    return CommandReport("gibbs", f.name, notes=list(f.notes), rows=rows)


def _cmd_zero_temp(f: WaltersPotential, config: RunConfig) -> CommandReport:
    result = limit_report(f, q_max=config.q_max)
    rows = [{"pattern": label, "V": value} for label, value in result.V.items()]
    summary = {
        "beta": result.beta,
        "A": result.A,
        "A_case": result.A_case,
        "calibration_residual": result.calibration_residual,
        "selection": result.selection.verdict.value,
    }
    if result.selection.in_class:
        summary["nonpositive_case"] = nonpositive_case(f)
        summary["nonpositive_A"] = nonpositive_A(f)
    return CommandReport("zero-temp", f.name, notes=list(f.notes), rows=rows, summary=summary)


def _cmd_select(f: WaltersPotential, config: RunConfig) -> CommandReport:
    verdict = select_measure(f)
    rows = [
        {"quantity": "sum_a", "value": verdict.sum_a},
        {"quantity": "sum_c", "value": verdict.sum_c},
        {"quantity": "b+d+sum_c", "value": verdict.rhs_one},
        {"quantity": "b+d+sum_a", "value": verdict.rhs_zero},
    ]
    notes = list(f.notes)
    if not verdict.in_class:
        notes.append("outside the non-positive class; no selection verdict is issued")
    return CommandReport(
        "select", f.name, notes=notes, rows=rows,
        summary={"verdict": verdict.verdict.value, "in_class": verdict.in_class},
    )


def _rate_rows(label: str, fit) -> list[dict]:
    return [
        {"label": label, "t": t, "log_value": y, "per_point_rate": rate,
         "slope": fit.slope, "r_squared": fit.r_squared}
        for t, y, rate in zip(fit.ts, fit.log_values, fit.per_point)
    ]


def _cmd_rates(f: WaltersPotential, config: RunConfig) -> CommandReport:
    grid = config.grid(DEFAULT_RATE_GRID)
    fits = {"epsilon": epsilon_rate(f, grid)}
    for w in config.words:
        fits[w] = cylinder_rate(f, w, grid)
    rows = []
    for label, fit in fits.items():
        rows += _rate_rows(label, fit)
    summary = {f"slope[{label}]": fit.slope for label, fit in fits.items()}
    notes = list(f.notes)
    try:
        A, _ = compute_A(f)
    except HypothesisViolation as e:
        # Zero and constant potentials have no A.
        logger.warning(f"Rates reported without A: {e}")
        notes.append(f"A and psi omitted: {e}")
    else:
        summary["A"] = A
        summary["psi"] = [[t, psi(f, t, A)] for t in grid]
    return CommandReport("rates", f.name, notes=notes, rows=rows, summary=summary)


def _oracle_depths(config: RunConfig, notes: list) -> tuple:
    if config.depths:
        return config.depths
    for k in DEFAULT_DEPTHS:
        if k > Config.MAX_DEPTH:
            notes.append(f"default depth {k} skipped: above WALTERS_THERMO_MAX_DEPTH={Config.MAX_DEPTH}")
    return tuple(k for k in DEFAULT_DEPTHS if k <= Config.MAX_DEPTH)


def _cmd_oracle(f: WaltersPotential, config: RunConfig) -> CommandReport:
    notes = list(f.notes)
    depths = _oracle_depths(config, notes)
    rows = []
    for t in config.grid():
        P = pressure(f, t, config.tol).P
        log_lambdas = map_grid(lambda k: oracle_pressure(f, t, int(k), config.extension), depths)
        for k, log_lambda in zip(depths, log_lambdas):
            base = {"t": t, "k": k, "log_lambda": log_lambda, "pressure": P, "gap": abs(log_lambda - P)}
            words = [w for w in config.words if len(w) <= k]
            if not words:
                rows.append({**base, "word": None, "oracle_measure": None,
                             "gibbs_measure": None, "measure_gap": None})
            for w in words:
                approx = oracle_cylinder(f, t, k, w, config.extension)
                exact = _exp(cylinder_measure(f, t, w, config.pure_runs, config.tol))
                rows.append({**base, "word": w, "oracle_measure": approx,
                             "gibbs_measure": exact, "measure_gap": abs(approx - exact)})
    return CommandReport("oracle", f.name, notes=notes, rows=rows)


def _check(rows: list, name: str, expected: float, observed: float, ok: bool) -> None:
    rows.append({"check": name, "expected": expected, "observed": observed, "status": _status(ok)})


def _cmd_example1(f: WaltersPotential, config: RunConfig) -> CommandReport:
    rows = []
    A, case = compute_A(f)
    _check(rows, "A", EXAMPLE_A, A, abs(A - EXAMPLE_A) <= 1e-12 and case == "A1")

    for t in EXAMPLE_TEMPERATURES:
        observed = _exp(h_values(f, t).beta_inf)
        expected = math.exp(-t / 2)
        _check(rows, f"beta_inf(t={t:g})", expected, observed, abs(observed / expected - 1) <= 1e-8)

    for t in EXAMPLE_TEMPERATURES:
        mu0 = _exp(top_cylinders(f, t).mu0)
        _check(rows, f"mu[0](t={t:g})", 0.5, mu0, abs(mu0 - 0.5) <= 1e-10)
        log_s0, log_s1 = s0_s1(f, t)
        _check(rows, f"log S0 - log S1(t={t:g})", 0.0, log_s0 - log_s1, abs(log_s0 - log_s1) <= 1e-10)

    t = 5.0
    for j in range(2, 7):
        left = cylinder_measure(f, t, "0" * j + "1")
        right = cylinder_measure(f, t, "1" * j + "0")
        gap = abs(math.expm1(left - right))
        _check(rows, f"mu[0^{j}1] / mu[1^{j}0] - 1 (t={t:g})", 0.0, gap, gap <= 1e-8)

    V = Subaction(f, A)
    _check(rows, "V(1^inf)", -0.5, V.one_inf(), abs(V.one_inf() + 0.5) <= 1e-12)
    for p in range(1, 7):
        expected = f.b - f.a_seq.partial_sum(1, p - 1)
        observed = V.zero_run(p)
        _check(rows, f"V(0^{p}1z)", expected, observed, abs(observed - expected) <= 1e-12)
    for p in range(1, 7):
        expected = f.b - f.c_seq.partial_sum(1, p - 1)
        observed = V.one_run(p)
        _check(rows, f"V(1^{p}0z)", expected, observed, abs(observed - expected) <= 1e-12)
    residual = calibration_residual(f, V)
    _check(rows, "calibration residual", 0.0, residual, residual < 1e-9)

    for t in (1.0, 5.0):
        identity = example_pressure_identity(f, t)
        _check(rows, f"pressure identity residual(t={t:g})", 0.0, identity, identity < 1e-9)
        e = h_values(f, t)
        worst = max(
            abs(e.alpha(q) - e.beta(q) - t * (f.c_seq.partial_sum(1, q - 1) - f.a_seq.partial_sum(1, q - 1)))
            for q in range(2, 11)
        )
        _check(rows, f"alpha/beta ratio identity(t={t:g})", 0.0, worst, worst <= 1e-10)

    fits = {"epsilon": epsilon_rate(f, EXAMPLE_RATE_GRID)}
    for w in ("01", "10", "001"):
        fits[f"[{w}]"] = cylinder_rate(f, w, EXAMPLE_RATE_GRID)
    for label, fit in fits.items():
        first, last = abs(fit.per_point[0] - EXAMPLE_A), abs(fit.per_point[-1] - EXAMPLE_A)
        _check(rows, f"(1/t) log {label} at t={fit.ts[-1]:g}", EXAMPLE_A, fit.per_point[-1],
               last < 0.2 and last < first)

    failed = [r["check"] for r in rows if r["status"] == "fail"]
    summary = {"checks": len(rows), "failed": len(failed), "all_pass": not failed}
    notes = list(f.notes) + [f"failed: {name}" for name in failed]
    return CommandReport("example1", f.name, notes=notes, rows=rows, summary=summary)


def _run_row(record) -> dict:
    return {
        "id": record.id, "command": record.command, "potential": record.potential,
        "config_digest": record.config_digest, "exit_code": record.exit_code,
        "created_at": str(record.created_at),
    }


def _cmd_runs(config: RunConfig) -> CommandReport:
    """List stored runs, or show or delete one by id."""
    from walters_thermo.db.crud import delete_run, get_run, list_runs
    from walters_thermo.db.session import get_db_session, init_db

    init_db()
    report = CommandReport("runs", "")
    found = True
    with get_db_session() as session:
        if config.delete is not None:
            found = delete_run(session, config.delete)
            report.summary = {"deleted": config.delete}
        elif config.show is not None:
            record = get_run(session, config.show)
            found = record is not None
            if found:
                report.rows.append(_run_row(record))
                report.summary = {"report": json.loads(record.report_json)}
        else:
            report.rows = [_run_row(r) for r in list_runs(session, config.run_command, config.limit)]

    if not found:
        run_id = config.show if config.delete is None else config.delete
        raise SpecValidationError(f"no stored run with id {run_id}", module="store")
    return report


HANDLERS: dict[str, Callable[[WaltersPotential, RunConfig], CommandReport]] = {
    "validate": _cmd_validate,
    "pressure": _cmd_pressure,
    "eigen": _cmd_eigen,
    "gibbs": _cmd_gibbs,
    "zero-temp": _cmd_zero_temp,
    "select": _cmd_select,
    "rates": _cmd_rates,
    "oracle": _cmd_oracle,
    "example1": _cmd_example1,
}


def _resolve_potential(config: RunConfig) -> WaltersPotential:
    if config.command == "example1" and config.spec_path is None:
        if config.builtin is None:
            return example1()
        if not config.builtin.startswith("example1"):
            raise SpecValidationError("example1 only runs on example1[:<b1>]", module="cli")
    return load_potential(config.spec_path, config.builtin)


def run(config: RunConfig) -> tuple[int, CommandReport]:
    """
    Execute one command.

    Returns:
        (exit code, report); on failure the report carries the error and its module
    """
    try:
        config.validate()
        if config.command == "runs":
            return 0, _cmd_runs(config)
        f = _resolve_potential(config)
        report = HANDLERS[config.command](f, config)
    except WaltersThermoError as e:
        logger.error(f"{config.command} failed: {e}")
        report = CommandReport(
            config.command, config.potential_label(), notes=[str(e)],
            summary={"error": type(e).__name__, "module": e.module},
        )
        return e.exit_code, report
    if config.command == "example1" and not report.summary["all_pass"]:
        return 3, report
    return 0, report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="walters_thermo",
        description="Thermodynamic formalism and zero-temperature limits of Walters potentials",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, help="Available commands")

    helps = {
        "validate": "Check the potential and the standing hypotheses",
        "pressure": "Pressure P(tf) and the excess over t*beta(f)",
        "eigen": "Eigenfunction values with recurrence residuals",
        "gibbs": "Gibbs cylinder measures",
        "zero-temp": "A, the selected subaction V and the calibration residual",
        "select": "Measure-selection verdict on the non-positive class",
        "rates": "Fitted zero-temperature rates over a t-grid",
        "oracle": "Depth-k transfer-matrix convergence table",
        "example1": "End-to-end checklist for the worked example",
        "runs": "List stored runs",
    }
    for name in COMMANDS:
        sub = subparsers.add_parser(name, help=helps[name])
        sub.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv", help="Report format")
        sub.add_argument("--out", "-o", help="Write the report to this file instead of stdout")
        if name == "runs":
            sub.add_argument("--limit", type=int, default=20, help="Number of runs to list (default: 20)")
            sub.add_argument("--command", dest="run_command", choices=[c for c in COMMANDS if c != "runs"],
                             help="Only list runs of this command")
            target = sub.add_mutually_exclusive_group()
            target.add_argument("--show", type=int, metavar="ID", help="Print one stored run with its report")
            target.add_argument("--delete", type=int, metavar="ID", help="Remove one stored run")
            continue
        source = sub.add_mutually_exclusive_group()
        source.add_argument("--spec", dest="spec_path", help="JSON potential spec file")
        source.add_argument("--builtin", help="Built-in potential (zero, constant:<k>, example1[:<b1>], thm2, ...)")
        temps = sub.add_mutually_exclusive_group()
        temps.add_argument("--t", type=float, help="Inverse temperature")
        temps.add_argument("--t-grid", help="Grid A:B:N[:log] of inverse temperatures")
        sub.add_argument("--word", dest="words", action="append", default=[], help="Cylinder word (repeatable)")
        sub.add_argument("--depth", dest="depths", type=int, action="append", default=[],
                         help="Oracle memory depth (repeatable)")
        sub.add_argument("--tol", type=float, help="Pressure tolerance (default: WALTERS_THERMO_PRESSURE_TOL)")
        sub.add_argument("--q-max", type=int, default=10, help="Pattern depth for tables (default: 10)")
        sub.add_argument("--pure-runs", choices=PURE_RUN_MODES, default=SUBTRACT,
                         help="How pure-run cylinders are evaluated")
        sub.add_argument("--extension", choices=[CONSTANT_EXTENSION, PERIODIC_EXTENSION],
                         default=CONSTANT_EXTENSION, help="Oracle extension of truncated words")
        sub.add_argument("--store", action="store_true", help="Save the report in the run store")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        spec_path=getattr(args, "spec_path", None),
        builtin=getattr(args, "builtin", None),
        t=getattr(args, "t", None),
        t_grid=getattr(args, "t_grid", None),
        words=tuple(getattr(args, "words", ())),
        depths=tuple(getattr(args, "depths", ())),
        tol=getattr(args, "tol", None),
        fmt=args.fmt,
        q_max=getattr(args, "q_max", 10),
        pure_runs=getattr(args, "pure_runs", SUBTRACT),
        extension=getattr(args, "extension", CONSTANT_EXTENSION),
        out=args.out,
        store=getattr(args, "store", False),
        limit=getattr(args, "limit", 20),
        run_command=getattr(args, "run_command", None),
        show=getattr(args, "show", None),
        delete=getattr(args, "delete", None),
    )


def store_report(config: RunConfig, exit_code: int, report: CommandReport) -> int:
    """Save an emitted report; returns the new record id."""
    from walters_thermo.db.crud import save_run
    from walters_thermo.db.session import get_db_session, init_db

    init_db()
    with get_db_session() as session:
        record = save_run(
            session,
            command=config.command,
            potential=config.potential_label() or report.potential,
            config_digest=config.digest(),
            exit_code=exit_code,
            report_json=report.to_json(),
        )
        return record.id


def main(argv: Optional[list[str]] = None) -> int:
    """
    Main entry point for the walters-thermo CLI.
    """
    setup_logging(Config.log_level())
    args = build_parser().parse_args(argv)
    config = config_from_args(args)

    logger.info("=" * 60)
    logger.info(f"walters-thermo {__version__}: {config.command}")
    logger.info(f"Potential: {config.potential_label() or '-'}")
    logger.info("=" * 60)

    exit_code, report = run(config)
    text = report.render(config.fmt)
    if config.out:
        with open(config.out, "w") as handle:
            handle.write(text)
        logger.info(f"Report written to {config.out}")
    else:
        sys.stdout.write(text)

    if config.store and config.command != "runs":
        try:
            run_id = store_report(config, exit_code, report)
            logger.info(f"Stored run {run_id}")
        except Exception as e:
            logger.error(f"Failed to store run: {e}")

    if exit_code != 0:
        logger.error(f"{config.command} finished with exit code {exit_code}")
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
