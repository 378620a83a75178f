"""Random instance generation and the experiment harness.

Experiments reproduce four studies as plot-ready CSV: the closed-form
attack lower bound over (n, l_min) grids, the cost of all scheduling and
attack strategies versus the mean job allowance, the budgeted-attack
lower/upper bounds versus the alteration fraction, and the budgeted
attack ratio on identical evenly spaced jobs.

Reproducibility: every trial draws from an RNG stream derived from the
master seed and the trial's position, so reruns with the same
configuration emit byte-identical CSV regardless of execution order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import max_cost_bound_value
from .attacker import (
    attack_budget,
    full_attack_dp,
    limited_attack_curve,
    limited_greedy_from_partition,
    online_edf_attack,
)
from .model import CostModel, Instance, Job, baseline_cost, evaluate_cost
from .scheduler import min_cost, schedule_online_even

log = logging.getLogger(__name__)


class Experiment(Enum):
    FIG2_BOUND = "fig2"
    FIG3_COSTS = "fig3"
    FIG4_MAXMIN_BOUNDS = "fig4"
    FIG5_ORDERED_RATIO = "fig5"


@dataclass(frozen=True)
class GenParams:
    """Parameters of the random instance generator.

    Arrivals follow a Poisson-style process: interarrival gaps are
    exponential with the given mean, rounded to the nearest integer and
    floored at 1 (so arrivals are strictly increasing and the first job
    arrives at slot 1).  Allowances are exponential, rounded, floored at
    1; energies are uniform on [energy_low, energy_high].
    """

    n: int
    mean_interarrival: float
    mean_allowance: float
    energy_low: float
    energy_high: float
    seed: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.mean_interarrival <= 0 or self.mean_allowance <= 0:
            raise ValueError("interarrival and allowance means must be positive")
        if not 0 < self.energy_low <= self.energy_high:
            raise ValueError(f"need 0 < energy_low <= energy_high, got ({self.energy_low}, {self.energy_high})")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


def generate_instance(params: GenParams) -> Instance:
    """Deterministically draw an instance from the generator parameters."""
    rng = np.random.default_rng(params.seed)
    gaps = np.maximum(1, np.rint(rng.exponential(params.mean_interarrival, size=params.n - 1))).astype(np.int64)
    allowances = np.maximum(1, np.rint(rng.exponential(params.mean_allowance, size=params.n))).astype(np.int64)
    energies = rng.uniform(params.energy_low, params.energy_high, size=params.n)
    arrivals = np.concatenate(([1], 1 + np.cumsum(gaps)))
    jobs = [
        Job(idx, int(arrivals[idx]), int(arrivals[idx] + allowances[idx]), float(energies[idx]))
        for idx in range(params.n)
    ]
    return Instance(jobs)


def make_identical_instance(n: int, energy: float, allowance: int, interarrival: int) -> Instance:
    """n identical jobs spaced ``interarrival`` slots apart, first arrival at slot 1."""
    if n < 1 or energy <= 0 or allowance < 1 or interarrival < 1:
        raise ValueError("all identical-instance parameters must be positive")
    jobs = [
        Job(idx, 1 + idx * interarrival, 1 + idx * interarrival + allowance, float(energy))
        for idx in range(n)
    ]
    return Instance(jobs)


_FIG3_ALLOWANCE_MEANS = tuple(float(v) for v in range(5, 55, 5))
_FIG4_BETAS = tuple(i / 10 for i in range(1, 11))
_FIG5_BETAS = tuple(i / 50 for i in range(1, 51))
_DEFAULT_TRIALS = {
    Experiment.FIG2_BOUND: 1,
    Experiment.FIG3_COSTS: 20,
    Experiment.FIG4_MAXMIN_BOUNDS: 5,
    Experiment.FIG5_ORDERED_RATIO: 1,
}


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment run: which study, its sweep grids, and the master seed.

    Defaults encode the reference setups of the four experiments;
    ``default`` builds a config
    for a given experiment and ``validate`` checks the parameters the
    experiment actually uses.
    """

    experiment: Experiment
    seed: int
    trials: int
    exponent: float = 2.0
    out_path: str | None = None
    # closed-form bound sweep
    n_grid: tuple[int, ...] = (50, 100, 200)
    lmin_grid: tuple[int, ...] = tuple(range(5, 55, 5))
    mean_energy: float = 10.0
    # shared generator knobs
    mean_interarrival: float = 5.0
    # allowance-mean sweep
    fig3_jobs: int = 100
    fig3_energy: tuple[float, float] = (1.0, 5.0)
    allowance_means: tuple[float, ...] = _FIG3_ALLOWANCE_MEANS
    # budgeted-attack bound sweep
    fig4_jobs: int = 50
    fig4_energy: tuple[float, float] = (1.0, 20.0)
    fig4_mean_allowance: float = 40.0
    betas: tuple[float, ...] = _FIG4_BETAS
    # identical-job ratio sweep
    fig5_jobs: int = 50
    fig5_energy: float = 5.0
    fig5_allowance: int = 50
    interarrival_grid: tuple[int, ...] = (1, 2, 5, 10)
    fig5_betas: tuple[float, ...] = _FIG5_BETAS

    @classmethod
    def default(
        cls,
        experiment: Experiment,
        seed: int,
        trials: int | None = None,
        exponent: float = 2.0,
        out_path: str | None = None,
    ) -> "ExperimentConfig":
        config = cls(
            experiment=experiment,
            seed=seed,
            trials=trials if trials is not None else _DEFAULT_TRIALS[experiment],
            exponent=exponent,
            out_path=out_path,
        )
        config.validate()
        return config

    def validate(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.exponent < 1.0:
            raise ValueError(f"cost exponent must be >= 1, got {self.exponent}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.experiment is Experiment.FIG2_BOUND:
            if not self.n_grid or not self.lmin_grid:
                raise ValueError("fig2 needs non-empty n and l_min grids")
            if any(l < 1 for l in self.lmin_grid) or any(n < 1 for n in self.n_grid):
                raise ValueError("fig2 grids must be positive")
            if self.mean_energy <= 0 or self.mean_interarrival <= 0:
                raise ValueError("fig2 means must be positive")
        elif self.experiment is Experiment.FIG3_COSTS:
            if not self.allowance_means or any(m <= 0 for m in self.allowance_means):
                raise ValueError("fig3 needs a positive allowance-mean sweep")
            GenParams(self.fig3_jobs, self.mean_interarrival, 1.0, *self.fig3_energy, seed=0)
        elif self.experiment is Experiment.FIG4_MAXMIN_BOUNDS:
            if not self.betas or any(not 0 <= b <= 1 for b in self.betas):
                raise ValueError("fig4 needs a beta grid inside [0, 1]")
            GenParams(self.fig4_jobs, self.mean_interarrival, self.fig4_mean_allowance, *self.fig4_energy, seed=0)
        elif self.experiment is Experiment.FIG5_ORDERED_RATIO:
            if not self.fig5_betas or any(not 0 <= b <= 1 for b in self.fig5_betas):
                raise ValueError("fig5 needs a beta grid inside [0, 1]")
            if not self.interarrival_grid or any(m < 1 for m in self.interarrival_grid):
                raise ValueError("fig5 needs interarrival values >= 1")
            make_identical_instance(self.fig5_jobs, self.fig5_energy, self.fig5_allowance, 1)

    def with_out_path(self, out_path: str | None) -> "ExperimentConfig":
        return replace(self, out_path=out_path)


@dataclass
class ExperimentResult:
    """CSV-shaped experiment output: a metadata preamble, a header, and rows."""

    preamble: str
    header: tuple[str, ...]
    rows: list[tuple]

    def to_csv_text(self) -> str:
        lines = [self.preamble, ",".join(self.header)]
        for row in self.rows:
            lines.append(",".join(_format_cell(cell) for cell in row))
        return "\n".join(lines) + "\n"

    def write(self, path: str | Path) -> None:
        path = Path(path)
        try:
            path.write_text(self.to_csv_text(), encoding="utf-8", newline="\n")
        except OSError as exc:
            raise OSError(f"cannot write experiment output to {path}: {exc}") from exc

    def rows_as_dicts(self) -> list[dict[str, float]]:
        return [dict(zip(self.header, row)) for row in self.rows]


def _format_cell(cell) -> str:
    if isinstance(cell, bool):
        return str(int(cell))
    if isinstance(cell, (int, np.integer)):
        return str(int(cell))
    return f"{float(cell):.12g}"


def _trial_seed(master_seed: int, *key: int) -> int:
    words = np.random.SeedSequence(master_seed, spawn_key=tuple(key)).generate_state(2, dtype=np.uint32)
    return (int(words[0]) << 32) | int(words[1])


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run one experiment and return its rows; writes CSV when out_path is set."""
    config.validate()
    runner = {
        Experiment.FIG2_BOUND: _run_fig2,
        Experiment.FIG3_COSTS: _run_fig3,
        Experiment.FIG4_MAXMIN_BOUNDS: _run_fig4,
        Experiment.FIG5_ORDERED_RATIO: _run_fig5,
    }[config.experiment]
    result = runner(config)
    if config.out_path is not None:
        result.write(config.out_path)
    return result


def _preamble(config: ExperimentConfig, extra: str = "") -> str:
    base = (
        f"# experiment={config.experiment.value} seed={config.seed} "
        f"trials={config.trials} b={_format_cell(config.exponent)} version={__version__}"
    )
    return base + (f" {extra}" if extra else "")


def _run_fig2(config: ExperimentConfig) -> ExperimentResult:
    """Closed-form attack lower bound over an (n, l_min) grid.

    Uses the expected totals of the generator setup: total energy
    mean_energy * n and arrival span mean_interarrival * (n - 1).
    """
    rows = []
    for n in config.n_grid:
        span = int(round(config.mean_interarrival * (n - 1)))
        for l_min in config.lmin_grid:
            bound = max_cost_bound_value(l_min, config.mean_energy * n, span, config.exponent)
            rows.append((n, l_min, bound))
    return ExperimentResult(_preamble(config), ("n", "l_min", "lower_bound"), rows)


def _run_fig3(config: ExperimentConfig) -> ExperimentResult:
    """Average strategy costs versus the mean job allowance."""
    cost = CostModel(config.exponent)
    header = (
        "allowance_mean",
        "c_min_offline",
        "c_min_online",
        "c_base",
        "c_max_offline",
        "c_max_online",
        "max_offline_over_base",
        "min_offline_over_base",
    )
    rows = []
    for point, mean_allowance in enumerate(config.allowance_means):
        sums = np.zeros(5)
        for trial in range(config.trials):
            seed = _trial_seed(config.seed, point, trial)
            try:
                instance = generate_instance(
                    GenParams(
                        n=config.fig3_jobs,
                        mean_interarrival=config.mean_interarrival,
                        mean_allowance=mean_allowance,
                        energy_low=config.fig3_energy[0],
                        energy_high=config.fig3_energy[1],
                        seed=seed,
                    )
                )
                _, _, c_max_offline = full_attack_dp(instance, cost)
                _, _, c_max_online = online_edf_attack(instance, cost)
                sums += (
                    min_cost(instance, cost),
                    evaluate_cost(schedule_online_even(instance), cost),
                    baseline_cost(instance, cost),
                    c_max_offline,
                    c_max_online,
                )
            except Exception as exc:
                raise RuntimeError(
                    f"fig3 trial failed (allowance_mean={mean_allowance}, trial={trial}, seed={seed}): {exc}"
                ) from exc
        means = sums / config.trials
        rows.append(
            (
                mean_allowance,
                means[0],
                means[1],
                means[2],
                means[3],
                means[4],
                means[3] / means[2],
                means[0] / means[2],
            )
        )
    return ExperimentResult(_preamble(config), header, rows)


def _draw_unique_arrivals(config: ExperimentConfig, trial: int) -> tuple[Instance, int, int]:
    """Draw a fig4 instance, redrawing on arrival collisions (precondition of the upper bound)."""
    redraws = 0
    for attempt in range(100):
        seed = _trial_seed(config.seed, trial, attempt)
        instance = generate_instance(
            GenParams(
                n=config.fig4_jobs,
                mean_interarrival=config.mean_interarrival,
                mean_allowance=config.fig4_mean_allowance,
                energy_low=config.fig4_energy[0],
                energy_high=config.fig4_energy[1],
                seed=seed,
            )
        )
        arrivals = [j.arrival for j in instance.jobs]
        if len(set(arrivals)) == len(arrivals):
            return instance, seed, redraws
        redraws += 1
        log.info("fig4 trial %d: arrival collision, redrawing (attempt %d)", trial, attempt + 1)
    raise RuntimeError(f"fig4 trial {trial}: could not draw collision-free arrivals in 100 attempts")


def _run_fig4(config: ExperimentConfig) -> ExperimentResult:
    """Budgeted-attack lower and upper bounds versus the alteration fraction."""
    cost = CostModel(config.exponent)
    budgets = [attack_budget(beta, config.fig4_jobs) for beta in config.betas]
    max_budget = max(budgets)
    sums = np.zeros((len(config.betas), 4))
    total_redraws = 0
    for trial in range(config.trials):
        instance, seed, redraws = _draw_unique_arrivals(config, trial)
        total_redraws += redraws
        try:
            _, partition, c_max = full_attack_dp(instance, cost)
            c_base = baseline_cost(instance, cost)
            upper = limited_attack_curve(instance, cost, max_budget)
            for idx, beta in enumerate(config.betas):
                _, lower = limited_greedy_from_partition(instance, partition, beta, cost)
                sums[idx] += (lower, float(upper[budgets[idx]]), c_base, c_max)
        except Exception as exc:
            raise RuntimeError(f"fig4 trial failed (trial={trial}, seed={seed}): {exc}") from exc
    header = ("beta", "budget", "c_maxmin_lower", "c_maxmin_upper", "c_base", "c_max")
    rows = []
    for idx, beta in enumerate(config.betas):
        means = sums[idx] / config.trials
        rows.append((beta, budgets[idx], means[0], means[1], means[2], means[3]))
    return ExperimentResult(_preamble(config, f"redraws={total_redraws}"), header, rows)


def _run_fig5(config: ExperimentConfig) -> ExperimentResult:
    """Budgeted attack ratio to the optimal attack on identical evenly spaced jobs."""
    cost = CostModel(config.exponent)
    header = ("interarrival", "beta", "budget", "ratio", "c_limited", "c_max")
    rows = []
    for interarrival in config.interarrival_grid:
        instance = make_identical_instance(
            config.fig5_jobs, config.fig5_energy, config.fig5_allowance, interarrival
        )
        _, partition, c_max = full_attack_dp(instance, cost)
        for beta in config.fig5_betas:
            _, value = limited_greedy_from_partition(instance, partition, beta, cost)
            rows.append(
                (
                    interarrival,
                    beta,
                    attack_budget(beta, config.fig5_jobs),
                    value / c_max,
                    value,
                    c_max,
                )
            )
    return ExperimentResult(_preamble(config), header, rows)
