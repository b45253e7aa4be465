"""Parameter sweeps and figure-reproduction pipelines.

Sweeps evaluate the exact solvers over a temperature grid and write CSV
artifacts plus a manifest with content hashes; Monte Carlo never backs a
figure. Cells are independent and run on a small thread pool; per-cell
failures are recorded in the manifest without aborting the rest.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from . import charts
from .formats import file_sha256, fmt, write_csv
from .inequality import income_distribution, lorenz_gini, write_lorenz_csv, write_summary_json
from .kernel import (
    StateDistribution,
    block_choice_probabilities,
    build_kernel,
    stationary_analytic,
    stationary_eigen,
    stationary_mean,
    stationary_power,
    write_distribution_csv,
)
from .model import ModelParams, ParameterError

THREADS_ENV_VAR = "GRAVITATION_THREADS"


class Method(Enum):
    POWER = "power"
    EIGEN = "eigen"
    ANALYTIC = "analytic"


class OutputKind(Enum):
    STATIONARY = "stationary"
    MEAN = "mean"
    CHOICE_FREQUENCIES = "choice_frequencies"
    GINI = "gini"


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: a producer count, a temperature grid, and what to emit."""

    n_producers: int
    temperatures: tuple[float, ...]
    outputs: frozenset[OutputKind]
    output_dir: Path
    method: Method = Method.ANALYTIC

    def __post_init__(self) -> None:
        temps = tuple(float(t) for t in self.temperatures)
        object.__setattr__(self, "temperatures", temps)
        object.__setattr__(self, "outputs", frozenset(self.outputs))
        object.__setattr__(self, "output_dir", Path(self.output_dir))
        if not temps:
            raise ParameterError("temperature grid must be non-empty")
        if any(t <= 0 or not math.isfinite(t) for t in temps):
            raise ParameterError("temperatures must all be positive")
        if any(b <= a for a, b in zip(temps, temps[1:])):
            raise ParameterError("temperatures must be strictly increasing")
        if not self.outputs:
            raise ParameterError("outputs set must be non-empty")

    def to_dict(self) -> dict:
        return {
            "n_producers": self.n_producers,
            "temperatures": list(self.temperatures),
            "outputs": sorted(kind.value for kind in self.outputs),
            "method": self.method.value,
            "output_dir": str(self.output_dir),
        }


def solve_stationary(params: ModelParams, method: Method,
                     tol: float = 1e-12) -> StateDistribution:
    """Dispatch to one of the three stationary solvers."""
    if method is Method.ANALYTIC:
        return stationary_analytic(params)
    kernel = build_kernel(params)
    if method is Method.POWER:
        return stationary_power(kernel, tol=tol)
    return stationary_eigen(kernel)


def thread_count(requested: int | None = None) -> int:
    """Resolve the worker count: argument, then $GRAVITATION_THREADS, then cores."""
    if requested is not None:
        if requested < 1:
            raise ParameterError("thread count must be at least 1")
        return requested
    env = os.environ.get(THREADS_ENV_VAR)
    if env:
        try:
            value = int(env)
        except ValueError as exc:
            raise ParameterError(f"{THREADS_ENV_VAR} must be an integer, got {env!r}") from exc
        if value < 1:
            raise ParameterError(f"{THREADS_ENV_VAR} must be at least 1")
        return value
    return os.cpu_count() or 1


def _artifact(root: Path, path: Path, kind: str) -> dict:
    return {
        "path": path.relative_to(root).as_posix(),
        "kind": kind,
        "sha256": file_sha256(path),
    }


def _sweep_cell(spec: SweepSpec, temperature: float):
    """Compute one grid cell; returns (per-cell artifacts, aggregate row)."""
    params = ModelParams(spec.n_producers, temperature)
    artifacts = []
    row: dict = {}
    needs_dist = bool(spec.outputs & {OutputKind.STATIONARY, OutputKind.MEAN,
                                      OutputKind.GINI})
    dist = solve_stationary(params, spec.method) if needs_dist else None
    if OutputKind.STATIONARY in spec.outputs:
        path = spec.output_dir / f"stationary_T{temperature!r}.csv"
        write_distribution_csv(dist, path)
        artifacts.append(_artifact(spec.output_dir, path, "stationary"))
        row["stationary"] = dist
    if OutputKind.MEAN in spec.outputs:
        row["mean"] = stationary_mean(dist)
    if OutputKind.CHOICE_FREQUENCIES in spec.outputs:
        probs = block_choice_probabilities(params)
        row["f_shortside"] = probs["low"]
        row["f_longside"] = probs["high"]
    if OutputKind.GINI in spec.outputs:
        p_win = income_distribution(params, dist)
        row["p_win"] = p_win
        row["gini"] = lorenz_gini(p_win, params.payoff_short, params.payoff_long).gini
    return artifacts, row


def _run_sweep(spec: SweepSpec, threads: int | None = None):
    """Execute every cell; returns (manifest, per-temperature row data)."""
    spec.output_dir.mkdir(parents=True, exist_ok=True)
    workers = min(thread_count(threads), len(spec.temperatures))
    results: dict[float, tuple[list, dict]] = {}
    failures = []
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {t: pool.submit(_sweep_cell, spec, t) for t in spec.temperatures}
        for t in spec.temperatures:
            try:
                results[t] = futures[t].result()
            except Exception as exc:
                failures.append({"temperature": t, "error": str(exc)})

    artifacts = []
    rows = {}
    for t in spec.temperatures:
        if t in results:
            cell_artifacts, row = results[t]
            artifacts.extend(cell_artifacts)
            rows[t] = row

    done = [t for t in spec.temperatures if t in rows]
    if OutputKind.MEAN in spec.outputs:
        path = spec.output_dir / "mean.csv"
        write_csv(path, "temperature,mean_corn_fraction",
                  (f"{fmt(t)},{fmt(rows[t]['mean'])}" for t in done))
        artifacts.append(_artifact(spec.output_dir, path, "mean"))
    if OutputKind.CHOICE_FREQUENCIES in spec.outputs:
        path = spec.output_dir / "choice_frequencies.csv"
        write_csv(path, "temperature,f_corn_shortside,f_corn_longside",
                  (f"{fmt(t)},{fmt(rows[t]['f_shortside'])},{fmt(rows[t]['f_longside'])}"
                   for t in done))
        artifacts.append(_artifact(spec.output_dir, path, "choice_frequencies"))
    if OutputKind.GINI in spec.outputs:
        path = spec.output_dir / "gini.csv"
        write_csv(path, "temperature,p_win,gini",
                  (f"{fmt(t)},{fmt(rows[t]['p_win'])},{fmt(rows[t]['gini'])}" for t in done))
        artifacts.append(_artifact(spec.output_dir, path, "gini"))

    manifest = {"spec": spec.to_dict(), "artifacts": artifacts, "failures": failures}
    return manifest, rows


def write_manifest(manifest: dict, directory: Path) -> Path:
    path = Path(directory) / "manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def sweep(spec: SweepSpec, threads: int | None = None) -> dict:
    """Run the sweep and write ``manifest.json`` next to its artifacts.

    Returns the manifest: the sweep spec, every artifact with its SHA-256
    hash, and any per-cell failures.
    """
    manifest, _ = _run_sweep(spec, threads)
    write_manifest(manifest, spec.output_dir)
    return manifest


def verify_manifest(directory: Path) -> list[dict]:
    """Re-hash every artifact under a manifest; returns the mismatches."""
    directory = Path(directory)
    with open(directory / "manifest.json") as fh:
        manifest = json.load(fh)
    problems = []
    for entry in manifest["artifacts"]:
        target = directory / entry["path"]
        actual = file_sha256(target) if target.exists() else None
        if actual != entry["sha256"]:
            problems.append({"path": entry["path"], "expected": entry["sha256"],
                             "actual": actual})
    return problems


FIG4_TEMPERATURES = tuple(
    float(t) for t in np.logspace(math.log10(0.05), math.log10(20.0), 61)
)
FIG6_TEMPERATURES = (0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0)
FIG5_TEMPERATURE = 10.0
FIGURE_N_PRODUCERS = 100


def reproduce_figures(output_dir, threads: int | None = None) -> dict:
    """Run the three canonical pipelines and render one SVG per figure.

    * staffing-vs-temperature line chart (dense log grid),
    * ergodic distribution small multiples over the temperature grid,
    * Lorenz curve with the equality diagonal at the large-T point.

    Everything is exact (no sampling); outputs are byte-deterministic.
    """
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    n = FIGURE_N_PRODUCERS
    artifacts = []
    failures = []

    staffing_spec = SweepSpec(
        n_producers=n,
        temperatures=FIG4_TEMPERATURES,
        outputs=frozenset({OutputKind.MEAN, OutputKind.CHOICE_FREQUENCIES}),
        output_dir=output_dir / "fig4",
    )
    staffing_manifest, staffing_rows = _run_sweep(staffing_spec, threads)
    artifacts.extend(_reroot(staffing_manifest["artifacts"], "fig4"))
    failures.extend(staffing_manifest["failures"])

    temps = [t for t in FIG4_TEMPERATURES if t in staffing_rows]
    chart = charts.line_chart(
        [
            ("short-side corn frequency", temps,
             [staffing_rows[t]["f_shortside"] for t in temps]),
            ("long-side corn frequency", temps,
             [staffing_rows[t]["f_longside"] for t in temps]),
            ("mean corn fraction", temps, [staffing_rows[t]["mean"] for t in temps]),
        ],
        title=f"Producer staffing vs. behavior scale (N={n})",
        xlabel="behavior scale T (log)",
        ylabel="frequency / fraction",
        log_x=True,
        y_range=(0.0, 1.0),
    )
    artifacts.append(_write_svg(output_dir, "fig4.svg", chart))

    ergodic_spec = SweepSpec(
        n_producers=n,
        temperatures=FIG6_TEMPERATURES,
        outputs=frozenset({OutputKind.STATIONARY}),
        output_dir=output_dir / "fig6",
    )
    ergodic_manifest, ergodic_rows = _run_sweep(ergodic_spec, threads)
    artifacts.extend(_reroot(ergodic_manifest["artifacts"], "fig6"))
    failures.extend(ergodic_manifest["failures"])

    panels = [
        (f"T={t!r}", list(ergodic_rows[t]["stationary"].probabilities))
        for t in FIG6_TEMPERATURES if t in ergodic_rows
    ]
    chart = charts.bar_panel_grid(
        panels,
        title=f"Stationary distribution of corn producers (N={n})",
        xlabel="corn producers",
    )
    artifacts.append(_write_svg(output_dir, "fig6.svg", chart))

    fig5_dir = output_dir / "fig5"
    fig5_dir.mkdir(parents=True, exist_ok=True)
    params = ModelParams(n, FIG5_TEMPERATURE)
    dist = stationary_analytic(params)
    p_win = income_distribution(params, dist)
    lorenz = lorenz_gini(p_win, params.payoff_short, params.payoff_long)
    lorenz_path = write_lorenz_csv(lorenz, fig5_dir / "lorenz.csv")
    artifacts.append(_artifact(output_dir, lorenz_path, "lorenz"))
    summary_path = write_summary_json(p_win, lorenz, fig5_dir / "summary.json")
    artifacts.append(_artifact(output_dir, summary_path, "summary"))
    xs = [x for x, _ in lorenz.lorenz_points]
    ys = [y for _, y in lorenz.lorenz_points]
    chart = charts.line_chart(
        [
            ("Lorenz curve", xs, ys),
            ("perfect equality", [0.0, 1.0], [0.0, 1.0]),
        ],
        title=f"Lorenz curve of ergodic income (N={n}, T={FIG5_TEMPERATURE:g}, "
              f"Gini={lorenz.gini:.4f})",
        xlabel="cumulative population share",
        ylabel="cumulative income share",
        y_range=(0.0, 1.0),
    )
    artifacts.append(_write_svg(output_dir, "fig5.svg", chart))

    manifest = {
        "spec": {
            "pipeline": "figures",
            "n_producers": n,
            "staffing_temperatures": list(FIG4_TEMPERATURES),
            "ergodic_temperatures": list(FIG6_TEMPERATURES),
            "lorenz_temperature": FIG5_TEMPERATURE,
            "output_dir": str(output_dir),
        },
        "artifacts": sorted(artifacts, key=lambda a: a["path"]),
        "failures": failures,
    }
    write_manifest(manifest, output_dir)
    return manifest


def _reroot(artifacts: list[dict], prefix: str) -> list[dict]:
    return [
        {"path": f"{prefix}/{entry['path']}", "kind": entry["kind"],
         "sha256": entry["sha256"]}
        for entry in artifacts
    ]


def _write_svg(root: Path, name: str, content: str) -> dict:
    path = root / name
    with open(path, "w") as fh:
        fh.write(content)
    return _artifact(root, path, "figure")
