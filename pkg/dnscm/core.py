# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Core API for DNSCM: one entry point per experiment."""

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from dnscm.config import ExperimentConfig
from dnscm.distributions import EmpiricalDist, StepCdf, density_grid, kde_density
from dnscm.formats import CSVWriter, FormatWriter, SVGPlotWriter
from dnscm.forwardsim import (
    GRID_COLUMNS,
    AnalyticVariances,
    GridRow,
    StabilityParams,
    analytic_variances,
    estimate_counterfactual,
    estimate_interventional,
    generate_truth,
    point_seed,
    regime,
    run_grid,
    run_point,
)
from dnscm.manifest import generate_manifest
from dnscm.policy import (
    Budget,
    TreatmentTemplate,
    UnitAssignment,
    all_decision_sets,
    cf_optimize,
    cf_post_treatment_cdf,
    count_assignments,
    decision_set_assignment,
    ewm_optimize,
    ewm_post_treatment_cdf,
    observed_domain,
    potential_outcomes,
)
from dnscm.rng import derive_seed
from dnscm.scm import abduct, equality_example_sample, equality_example_scm
from dnscm.welfare import format_fraction, welfare_functional

logger = logging.getLogger(__name__)

# Exact Gini values of the worked example
EXPECTED_EWM_WELFARE = {
    "G_∅": Fraction(35, 36),
    "G_0": Fraction(56, 36),
    "G_1": Fraction(46, 36),
}
EXPECTED_EWM_OPTIMUM = "G_0"
EXPECTED_CF_WELFARE = {
    (1, 1, 0, 0): Fraction(26, 16),
    (1, 0, 1, 0): Fraction(32, 16),
}
EXPECTED_TABLE = (
    # U_X, U_Z, U_Y, Y(0), Y(1)
    (0.0, 0.0, 1.0, 1.0, 2.0),
    (0.0, 0.0, 2.0, 2.0, 3.0),
    (1.0, 0.0, 0.0, 1.0, 2.0),
    (1.0, 0.0, 1.0, 2.0, 3.0),
)
# Published variances at sigma_u = sigma_mu = 5, delta = 1
PUBLISHED_VARIANCES = {"y0": 12.2, "y1_true": 9.36, "y1_cf": 9.61, "y1_int": 51.1}
VARIANCE_COLUMNS = ["distribution", "single_run", "averaged", "analytic", "published"]


@dataclass
class Check:
    """One built-in expectation of an experiment."""

    name: str
    expected: str
    actual: str

    @property
    def passed(self) -> bool:
        return self.expected == self.actual


@dataclass
class ExperimentResult:
    """
    Result of an experiment command.

    Attributes:
        command: Experiment command
        report: Human-readable report (printed to stdout)
        output_files: Files written
        manifest_path: Path to the manifest file
        checks: Built-in expectations and their outcome
    """

    command: str
    report: str = ""
    output_files: List[str] = field(default_factory=list)
    manifest_path: Optional[str] = None
    checks: List[Check] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def _fmt(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def _cdf_text(cdf: StepCdf) -> str:
    return ", ".join(f"{_fmt(y)}: {level}" for y, level in zip(cdf.support, cdf.cum))


def _write_table(path: Path, columns: List[str], rows: List[Dict[str, Any]]) -> str:
    with CSVWriter(str(path), columns=columns) as writer:
        writer.write_rows(rows)
    return str(path)


def _write_plot(path: Path, columns: List[str], rows: List[Dict[str, Any]], **options: Any) -> str:
    writer: FormatWriter = SVGPlotWriter(str(path), **options)
    with writer:
        writer.write_header(columns)
        writer.write_rows(rows)
    return str(path)


def _finish(result: ExperimentResult, config: ExperimentConfig, summary: Dict[str, Any]) -> ExperimentResult:
    result.manifest_path = generate_manifest(result.command, config, result.output_files, summary)
    logger.info("Wrote %d file(s) and manifest %s", len(result.output_files), result.manifest_path)
    return result


def run_ewm_example(config: ExperimentConfig) -> ExperimentResult:
    """
    Exact worked example contrasting EWM and counterfactual treatment choice.

    Uses the built-in equality example (no randomness). Reports the abducted
    noise and potential outcomes of the four units, the EWM post-treatment
    CDFs and their welfare, the two unit assignments of the example and the
    counterfactual optimum under ``config.budget``, and checks every exact
    value against the known fractions.
    """
    scm = equality_example_scm()
    sample = equality_example_sample()
    template = TreatmentTemplate("Z", "atomic", treated_value=1.0, control_value=0.0)
    result = ExperimentResult(command="ewm-example")
    lines: List[str] = []

    posterior = abduct(scm, sample)
    outcomes = potential_outcomes(scm, sample, template)
    lines.append("Observed units, abducted noise and potential outcomes")
    lines.append("unit  X  Z  Y  U_X  U_Z  U_Y  Y(0)  Y(1)")
    for i in range(sample.n):
        observed = sample.unit(i)
        noise = posterior.unit(i)
        row = (noise["U_X"], noise["U_Z"], noise["U_Y"], float(outcomes.y0[i]), float(outcomes.y1[i]))
        lines.append(
            f"{i + 1:>4}  {_fmt(observed['X'])}  {_fmt(observed['Z'])}  {_fmt(observed['Y'])}"
            f"  {_fmt(row[0]):>3}  {_fmt(row[1]):>3}  {_fmt(row[2]):>3}  {_fmt(row[3]):>4}  {_fmt(row[4]):>4}"
        )
        result.checks.append(Check(f"unit {i + 1}", repr(EXPECTED_TABLE[i]), repr(row)))

    lines.append("")
    lines.append("Interventional (EWM) policies")
    feasible = all_decision_sets(observed_domain(sample, "X"), max_size=1)
    cdf_rows: List[Dict[str, Any]] = []
    for policy in feasible:
        cdf = ewm_post_treatment_cdf(scm, sample, policy, template)
        gini = welfare_functional("gini", cdf)
        assert gini.exact is not None
        lines.append(f"P_{policy.label}(y) steps {{{_cdf_text(cdf)}}}")
        lines.append(f"W({policy.label}) = {format_fraction(gini.exact, 36)}")
        cdf_rows.extend({"policy": policy.label, **row} for row in cdf.to_rows())
        if policy.label in EXPECTED_EWM_WELFARE:
            result.checks.append(
                Check(f"W({policy.label})", str(EXPECTED_EWM_WELFARE[policy.label]), str(gini.exact))
            )

    best_policy, best_ewm = ewm_optimize(scm, sample, feasible, config.welfare, template)
    lines.append(f"G*_EWM = {best_policy.label} ({config.welfare} welfare {best_ewm.value})")
    if config.welfare == "gini":
        result.checks.append(Check("G*_EWM", EXPECTED_EWM_OPTIMUM, best_policy.label))

    lines.append("")
    lines.append("Counterfactual (CF) unit assignments")
    for w, expected in EXPECTED_CF_WELFARE.items():
        value = welfare_functional("gini", cf_post_treatment_cdf(scm, sample, UnitAssignment(w), template))
        assert value.exact is not None
        label = "[" + ",".join(str(x) for x in w) + "]"
        lines.append(f"W_cf({label}) = {format_fraction(value.exact, 16)}")
        result.checks.append(Check(f"W_cf({label})", str(expected), str(value.exact)))

    optimum = cf_optimize(
        scm,
        sample,
        Budget(config.budget),
        config.welfare,
        template,
        mode=config.mode,
        threads=config.threads,
    )
    ewm_assignment = decision_set_assignment(sample, "X", best_policy)
    ewm_as_units = welfare_functional(
        config.welfare, cf_post_treatment_cdf(scm, sample, ewm_assignment, template)
    )
    searched = (
        f"{count_assignments(sample.n, config.budget)} assignments"
        if config.mode == "exhaustive"
        else f"{optimum.evaluated} evaluations"
    )
    w_text = "[" + ",".join(str(x) for x in optimum.assignment.w) + "]"
    ewm_text = "[" + ",".join(str(x) for x in ewm_assignment.w) + "]"
    lines.append(
        f"G*_CF = {w_text} ({config.mode}, budget {config.budget}, {searched}) "
        f"W = {_welfare_text(optimum.welfare.value)}"
    )
    comparison = optimum.welfare.beats(ewm_as_units)
    lines.append(
        f"W(G*_CF) = {_welfare_text(optimum.welfare.value)} "
        f"{'>' if comparison else '<='} W(G*_EWM as assignment {ewm_text}) = {_welfare_text(ewm_as_units.value)}"
    )
    if config.welfare == "gini" and config.budget == 2:
        result.checks.append(Check("G*_CF", "(1, 0, 1, 0)", str(optimum.assignment.w)))
        result.checks.append(Check("W(G*_CF)", "2", str(optimum.welfare.value)))
        result.checks.append(Check("W(G*_CF) > W(G*_EWM)", "True", str(comparison)))

    lines.append("")
    failures = [check for check in result.checks if not check.passed]
    if failures:
        for check in failures:
            lines.append(f"MISMATCH {check.name}: expected {check.expected}, got {check.actual}")
    else:
        lines.append(f"All {len(result.checks)} checks passed")
    result.report = "\n".join(lines)

    out_dir = Path(config.out_dir)
    result.output_files.append(
        _write_table(out_dir / "ewm-example.cdfs.csv", ["policy", "y", "cdf"], cdf_rows)
    )
    optimum_path = out_dir / "ewm-example.cf_optimum.json"
    optimum_path.parent.mkdir(parents=True, exist_ok=True)
    optimum_path.write_text(json.dumps(optimum.to_dict(), indent=2) + "\n", encoding="utf-8")
    result.output_files.append(str(optimum_path))
    result.data["cf_optimum"] = optimum.to_dict()
    return _finish(result, config, {"checks_passed": result.passed, "cf_optimum": optimum.to_dict()})


def _welfare_text(value: Any) -> str:
    if isinstance(value, Fraction):
        return format_fraction(value, 16) if (value * 16).denominator == 1 else str(value)
    return repr(value)


def _cell_name(sigma_u: float, sigma_mu: float, delta: float) -> str:
    return f"su{_fmt(sigma_u)}_smu{_fmt(sigma_mu)}_d{_fmt(delta)}"


def _stability_params(config: ExperimentConfig) -> StabilityParams:
    return StabilityParams(
        n=config.n,
        mu_z=config.mu_z,
        sigma_z=config.sigma_z,
        sigma_u=config.sigma_u_values[0],
        sigma_mu=config.sigma_mu_values[0],
        delta=config.delta_values[0],
        seed=config.seed,
        noise_scale=config.noise_scale,
    )


def density_cell(
    p: StabilityParams, bandwidth: Any, grid_points: int
) -> Tuple[List[Dict[str, float]], List[Dict[str, float]]]:
    """
    Density curves and scatter rows of one (sigma_u, sigma_mu, delta) cell.

    Returns:
        (rows with y, true, interventional, counterfactual densities;
        per-unit y0, y1_true, w rows)
    """
    data = generate_truth(p)
    samples = {
        "true": EmpiricalDist(data.y1_true),
        "interventional": estimate_interventional(data, p).dist,
        "counterfactual": estimate_counterfactual(data, p).dist,
    }
    grid = density_grid(list(samples.values()), bandwidth, grid_points)
    curves = {name: kde_density(dist, bandwidth, grid) for name, dist in samples.items()}
    rows = [
        {"y": float(y), **{name: curves[name][j][1] for name in samples}}
        for j, y in enumerate(grid)
    ]
    return rows, data.scatter_rows()


def run_densities(config: ExperimentConfig) -> ExperimentResult:
    """Density curves of the truth and both estimates, plus (Y0, Y1) scatter, per cell."""
    template = _stability_params(config)
    out_dir = Path(config.out_dir)
    result = ExperimentResult(command="densities")
    cells = [
        (sigma_u, sigma_mu, delta)
        for delta in config.delta_values
        for sigma_mu in config.sigma_mu_values
        for sigma_u in config.sigma_u_values
    ]

    def compute(cell: Tuple[float, float, float]) -> Tuple[List[Dict[str, float]], List[Dict[str, float]]]:
        sigma_u, sigma_mu, delta = cell
        p = template.with_values(
            sigma_u=sigma_u,
            sigma_mu=sigma_mu,
            delta=delta,
            seed=point_seed(config.seed, sigma_u, sigma_mu, delta),
        )
        return density_cell(p, config.bandwidth, config.grid_points)

    with ThreadPoolExecutor(max_workers=config.threads) as executor:
        computed = list(executor.map(compute, cells))

    lines = ["cell                     regime  file"]
    for cell, (curve_rows, scatter_rows) in zip(cells, computed):
        name = _cell_name(*cell)
        density_path = _write_table(
            out_dir / f"densities_{name}.csv",
            ["y", "true", "interventional", "counterfactual"],
            curve_rows,
        )
        scatter_path = _write_table(out_dir / f"scatter_{name}.csv", ["y0", "y1_true", "w"], scatter_rows)
        result.output_files.extend([density_path, scatter_path])
        if config.svg:
            result.output_files.append(
                _write_plot(
                    out_dir / f"densities_{name}.svg",
                    ["y", "true", "interventional", "counterfactual"],
                    curve_rows,
                    title=f"sigma_u={_fmt(cell[0])}, sigma_mu={_fmt(cell[1])}, delta={_fmt(cell[2])}",
                    xlabel="Y1",
                    ylabel="density",
                )
            )
        stability, structure = regime(template.with_values(sigma_u=cell[0], sigma_mu=cell[1]))
        lines.append(f"{name:<24} {stability}/{structure}   {density_path}")
    result.report = "\n".join(lines)
    return _finish(result, config, {"cells": len(cells)})


def run_sweep_kl(config: ExperimentConfig) -> ExperimentResult:
    """KL of both estimates against the truth over the configured grid."""
    rows = run_grid(
        config.sigma_u_values,
        config.sigma_mu_values,
        config.delta_values,
        _stability_params(config),
        k=config.k,
        threads=config.threads,
    )
    out_dir = Path(config.out_dir)
    result = ExperimentResult(command="sweep-kl")
    result.output_files.append(
        _write_table(out_dir / "sweep-kl.csv", GRID_COLUMNS, [row.to_dict() for row in rows])
    )
    if config.svg:
        for delta in config.delta_values:
            for sigma_mu in config.sigma_mu_values:
                series = [
                    {
                        "sigma_u": row.sigma_u,
                        "kl_true_vs_int": row.kl_true_vs_int,
                        "kl_true_vs_cf": row.kl_true_vs_cf,
                    }
                    for row in rows
                    if row.delta == delta and row.sigma_mu == sigma_mu
                ]
                result.output_files.append(
                    _write_plot(
                        out_dir / f"sweep-kl_smu{_fmt(sigma_mu)}_d{_fmt(delta)}.svg",
                        ["sigma_u", "kl_true_vs_int", "kl_true_vs_cf"],
                        series,
                        title=f"sigma_mu={_fmt(sigma_mu)}, delta={_fmt(delta)}",
                        ylabel="estimated KL (nats)",
                        labels={"kl_true_vs_int": "interventional", "kl_true_vs_cf": "counterfactual"},
                    )
                )
    result.report = f"{len(rows)} grid points written to {result.output_files[0]}"
    result.data["rows"] = rows
    return _finish(result, config, {"grid_points": len(rows)})


@dataclass
class VarianceSummary:
    """Variances of Y0 and the three Y1 distributions at one parameter point."""

    params: StabilityParams
    single_run: GridRow
    averaged: Dict[str, float]
    analytic: AnalyticVariances
    repetitions: int

    @property
    def claim_holds(self) -> bool:
        """Interventional variance above Var(Y0), true and counterfactual below it."""
        a = self.analytic
        return a.y1_int > a.y0 and a.y1_true < a.y0 and a.y1_cf < a.y0

    def rows(self) -> List[Dict[str, Any]]:
        analytic = {
            "y0": self.analytic.y0,
            "y1_true": self.analytic.y1_true,
            "y1_cf": self.analytic.y1_cf,
            "y1_int": self.analytic.y1_int,
        }
        return [
            {
                "distribution": name,
                "single_run": getattr(self.single_run, f"var_{name}"),
                "averaged": self.averaged[name],
                "analytic": analytic[name],
                "published": PUBLISHED_VARIANCES[name],
            }
            for name in ("y0", "y1_true", "y1_cf", "y1_int")
        ]


def variance_summary(
    p: StabilityParams, repetitions: int, k: int = 10, threads: int = 1
) -> VarianceSummary:
    """
    Average the four variances over independent repetitions.

    Repetition ``r`` runs under ``derive_seed(p.seed, "repetition", r)``.
    """
    params = [p.with_values(seed=derive_seed(p.seed, "repetition", r)) for r in range(repetitions)]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        rows = list(executor.map(lambda point: run_point(point, k), params))
    averaged = {
        name: float(np.mean([getattr(row, f"var_{name}") for row in rows]))
        for name in ("y0", "y1_true", "y1_cf", "y1_int")
    }
    return VarianceSummary(
        params=p, single_run=rows[0], averaged=averaged, analytic=analytic_variances(p), repetitions=repetitions
    )


def run_variance_table(config: ExperimentConfig) -> ExperimentResult:
    """Variance table at the first configured (sigma_u, sigma_mu, delta)."""
    p = _stability_params(config)
    summary = variance_summary(p, config.repetitions, config.k, config.threads)
    rows = summary.rows()
    result = ExperimentResult(command="variance-table")
    result.output_files.append(_write_table(Path(config.out_dir) / "variance-table.csv", VARIANCE_COLUMNS, rows))

    names = {
        "y0": "V[Y0]",
        "y1_true": "V[Y1 true]",
        "y1_cf": "V[Y1 counterfactual]",
        "y1_int": "V[Y1 interventional]",
    }
    lines = [
        f"sigma_u={_fmt(p.sigma_u)} sigma_mu={_fmt(p.sigma_mu)} delta={_fmt(p.delta)} "
        f"n={p.n} noise_scale={p.noise_scale} repetitions={summary.repetitions}",
        f"{'':<22}{'single run':>12}{'averaged':>12}{'analytic':>12}{'published':>12}",
    ]
    for row in rows:
        lines.append(
            f"{names[row['distribution']]:<22}{row['single_run']:>12.3f}{row['averaged']:>12.3f}"
            f"{row['analytic']:>12.3f}{row['published']:>12.2f}"
        )
    lines.append(
        "Interventional variance exceeds V[Y0] while true and counterfactual variances fall below it: "
        + ("yes" if summary.claim_holds else "NO")
    )
    result.checks.append(Check("variance ordering", "True", str(summary.claim_holds)))
    result.report = "\n".join(lines)
    result.data["summary"] = summary
    return _finish(result, config, {"rows": rows, "claim_holds": summary.claim_holds})


COMMANDS = {
    "ewm-example": run_ewm_example,
    "densities": run_densities,
    "sweep-kl": run_sweep_kl,
    "variance-table": run_variance_table,
}


def run_experiment(command: str, config: ExperimentConfig) -> ExperimentResult:
    """
    Run an experiment command.

    Raises:
        ValueError: If the command is unknown
    """
    if command not in COMMANDS:
        raise ValueError(f"Unknown command: {command}. Available commands: {', '.join(COMMANDS)}")
    logger.info("Running %s (seed %d, %d thread(s))", command, config.seed, config.threads)
    return COMMANDS[command](config)
