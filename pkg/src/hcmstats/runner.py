"""Scenario execution: every service endpoint and CLI subcommand lands here.

Each task produces a :class:`Table` (columns, rows, metadata), which the
service returns as JSON and the CLI renders as CSV.  Output is
deterministic given the scenario (and seed), so reruns are byte-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .config import (
    ContextConfig,
    FigureSpec,
    Scenario,
    build_measurement,
    normalization_constant,
)
from .densities import correlation_pdf
from .errors import ConfigError
from .moments import moment_report
from .oracles import (
    ClassicalPSampler,
    bin_averaged_density,
    empirical_product_histogram,
    simulate_counts,
)
from .states import Coherent, Fock, Gaussian

__all__ = ["Table", "run_scenario", "run_figure", "FIGURE_NUMBERS"]

FIGURE_NUMBERS = (2, 3, 4, 5, 6, 7)

_SCAN_COLUMNS = [
    "phi",
    "E_M",
    "var_M",
    "r",
    "D",
    "var_x",
    "var_n",
    "cross",
    "nonclassical_by_r",
    "anomalous_by_d",
]


@dataclass
class Table:
    """Column-oriented result with free-form header metadata."""

    columns: list[str]
    rows: list[list]
    meta: dict[str, str] = field(default_factory=dict)

    def to_csv(self) -> str:
        lines = [f"# {key} = {value}" for key, value in self.meta.items()]
        lines.append(",".join(self.columns))
        for row in self.rows:
            lines.append(",".join(_format_cell(v) for v in row))
        return "\n".join(lines) + "\n"


def _format_cell(value) -> str:
    if value is None:
        return "nan"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _config_meta(cfg: ContextConfig) -> str:
    return json.dumps(cfg.model_dump(), sort_keys=True, separators=(",", ":"))


def _m_grid_values(grid) -> np.ndarray:
    """Evaluation grid for M; the exact zero is excluded (density may diverge)."""
    values = np.linspace(grid.start, grid.stop, grid.points)
    return values[values != 0.0]


def _phi_grid_values(grid) -> np.ndarray:
    return np.linspace(grid.start, grid.stop, grid.points)


# ---------------------------------------------------------------------------
# tasks
# ---------------------------------------------------------------------------

def run_pdf(scenario: Scenario) -> Table:
    cfg = scenario.config
    ctx, state = build_measurement(cfg)
    density = correlation_pdf(state, ctx)
    const = normalization_constant(scenario.normalization, cfg, ctx)
    grid = _m_grid_values(scenario.m_grid)
    rows = []
    for x in grid:
        m = float(x) * const
        rows.append([float(x), const * density.pdf(m)])
    meta = {
        "task": "pdf",
        "state": density.kind,
        "m_normalized_by": scenario.normalization,
        "norm_constant": f"{const:.12g}",
        "sigma1_sigma2": f"{ctx.sigma_product:.12g}",
        "config": _config_meta(cfg),
    }
    if density.joint is not None:
        meta["joint_s1_s2_corr"] = (
            f"{density.joint.s1:.12g},{density.joint.s2:.12g},{density.joint.corr:.12g}"
        )
    return Table(columns=["M_norm", "w"], rows=rows, meta=meta)


def _scan_row(phi: float, cfg: ContextConfig) -> list:
    ctx, state = build_measurement(cfg, phi=phi)
    report = moment_report(state, ctx, phi=phi)
    m = report.moments
    return [
        phi,
        report.mean_m,
        report.var_m,
        report.r,
        report.d,
        m.var_x if m else None,
        m.var_n if m else None,
        m.cross if m else None,
        report.nonclassical_by_r,
        report.anomalous_by_d,
    ]


def run_moments(scenario: Scenario) -> Table:
    cfg = scenario.config
    build_measurement(cfg)  # validate eagerly so errors carry field context
    row = _scan_row(cfg.lo.phase, cfg)
    return Table(
        columns=_SCAN_COLUMNS,
        rows=[row],
        meta={"task": "moments", "config": _config_meta(cfg)},
    )


def run_phase_scan(scenario: Scenario) -> Table:
    cfg = scenario.config
    _, state = build_measurement(cfg)
    if not isinstance(state, (Gaussian, Coherent)):
        raise ConfigError("scan-phase requires a Gaussian (or coherent) signal state")
    rows = [_scan_row(float(phi), cfg) for phi in _phi_grid_values(scenario.phi_grid)]
    return Table(
        columns=_SCAN_COLUMNS,
        rows=rows,
        meta={"task": "scan-phase", "config": _config_meta(cfg)},
    )


def run_nonclassicality(scenario: Scenario) -> Table:
    cfg = scenario.config
    ctx, state = build_measurement(cfg)
    report = moment_report(state, ctx, phi=cfg.lo.phase)
    row = [
        report.r,
        report.nonclassical_by_r,
        report.d,
        report.anomalous_by_d,
    ]
    meta = {
        "task": "nonclassicality",
        "r_tol": f"{report.r_tol:.3g}",
        "d_tol": f"{report.d_tol:.3g}",
        "config": _config_meta(cfg),
    }
    return Table(
        columns=["r", "nonclassical_by_r", "D", "anomalous_by_d"], rows=[row], meta=meta
    )


def run_simulate(scenario: Scenario) -> Table:
    cfg = scenario.config
    ctx, state = build_measurement(cfg)
    sampler = ClassicalPSampler(state)
    run = simulate_counts(sampler, ctx, seed=scenario.seed, n=scenario.samples)
    m_range = (scenario.m_grid.start, scenario.m_grid.stop)
    centers, density, counts = empirical_product_histogram(
        run, bins=scenario.bins, m_range=m_range
    )
    closed = correlation_pdf(state, ctx)
    edges = np.linspace(m_range[0], m_range[1], scenario.bins + 1)
    w_bin = bin_averaged_density(closed, edges)
    # the center value is undefined where the density is singular (M = 0)
    w_center = [
        closed.pdf_normalized(c) if c != 0.0 else None for c in centers
    ]
    w_center = [None if w is not None and not math.isfinite(w) else w for w in w_center]
    sup_distance = float(np.max(np.abs(density - w_bin)))
    emp_mean, emp_var = run.product_mean_var()
    rows = [
        [float(c), float(d), int(k), None if wc is None else float(wc), float(wb)]
        for c, d, k, wc, wb in zip(centers, density, counts, w_center, w_bin)
    ]
    meta = {
        "task": "simulate",
        "seed": str(scenario.seed),
        "samples": str(scenario.samples),
        "sup_distance": f"{sup_distance:.12g}",
        "empirical_mean_M": f"{emp_mean:.12g}",
        "empirical_var_M": f"{emp_var:.12g}",
        "sigma1_sigma2": f"{ctx.sigma_product:.12g}",
        "config": _config_meta(cfg),
    }
    return Table(
        columns=["bin_center", "density", "count", "w_closed_center", "w_closed_bin"],
        rows=rows,
        meta=meta,
    )


# ---------------------------------------------------------------------------
# figure reproduction
# ---------------------------------------------------------------------------

def load_figure_spec(figure: int) -> FigureSpec:
    if figure not in FIGURE_NUMBERS:
        raise ConfigError(f"no such figure scenario: {figure} (have {FIGURE_NUMBERS})")
    text = resources.files("hcmstats.figures").joinpath(f"fig{figure}.json").read_text()
    return FigureSpec.model_validate_json(text)


def run_figure(
    figure: int, grid_points: int | None = None, seed: int | None = None
) -> Table:
    """Emit the dataset behind one of the reference figures.

    Each checked-in figure spec is a list of labeled measurement
    configurations plus a task; the output table carries the label columns
    followed by the task's columns.
    """
    if grid_points is not None and grid_points < 2:
        raise ConfigError(f"grid_points must be >= 2, got {grid_points}")
    spec = load_figure_spec(figure)
    label_keys = list(spec.datasets[0].label.keys())
    columns = None
    rows: list[list] = []
    meta = {
        "task": "figure",
        "figure": str(spec.figure),
        "description": spec.description,
        "normalization": spec.normalization,
    }
    for dataset in spec.datasets:
        scenario = Scenario(
            task=spec.task,
            config=dataset.config,
            m_grid=spec.m_grid if grid_points is None
            else spec.m_grid.model_copy(update={"points": grid_points}),
            phi_grid=spec.phi_grid if grid_points is None
            else spec.phi_grid.model_copy(update={"points": grid_points}),
            normalization=spec.normalization,
            seed=seed if seed is not None else 12345,
        )
        sub = run_pdf(scenario) if spec.task == "pdf" else run_phase_scan(scenario)
        if columns is None:
            columns = label_keys + sub.columns
        label_values = [dataset.label[k] for k in label_keys]
        rows.extend(label_values + row for row in sub.rows)
        # record each dataset's normalization constant in the header; the
        # scan columns (E_M, var_M, D) are raw and divide out against it
        ctx, _ = build_measurement(dataset.config)
        const = normalization_constant(spec.normalization, dataset.config, ctx)
        label_str = ",".join(f"{k}={dataset.label[k]}" for k in label_keys)
        meta[f"norm_constant[{label_str}]"] = f"{const:.12g}"
    return Table(columns=columns, rows=rows, meta=meta)


_TASK_RUNNERS = {
    "pdf": run_pdf,
    "moments": run_moments,
    "scan-phase": run_phase_scan,
    "nonclassicality": run_nonclassicality,
    "simulate": run_simulate,
}


def run_scenario(scenario: Scenario) -> Table:
    if scenario.task == "figure":
        return run_figure(scenario.figure, seed=scenario.seed)
    return _TASK_RUNNERS[scenario.task](scenario)
