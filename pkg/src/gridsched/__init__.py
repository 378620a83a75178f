"""Slotted demand scheduling, demand-alteration attacks, and their performance bounds."""

__version__ = "0.1.0"

from .model import (
    ENERGY_TOL,
    AttackPlan,
    CliqueBlock,
    CliquePartition,
    CostFamily,
    CostModel,
    Instance,
    Job,
    Schedule,
    apply_attack,
    baseline_cost,
    baseline_schedule,
    evaluate_cost,
    read_instance_csv,
    write_instance_csv,
)
from .scheduler import (
    CriticalInterval,
    compute_intensity,
    critical_interval,
    edf_fill,
    min_cost,
    optimal_load_segments,
    schedule_online_even,
    schedule_optimal_offline,
)
from .attacker import (
    KnapsackResult,
    attack_budget,
    fractional_knapsack,
    full_attack_dp,
    limited_attack_curve,
    limited_attack_dp,
    limited_greedy_attack,
    limited_greedy_from_partition,
    online_edf_attack,
    realized_attack_cost,
)
from .analysis import (
    BoundReport,
    allowance_ratio,
    arrival_packing_ratio,
    bound_report,
    limited_attack_lower_bound,
    max_cost_bound_value,
    max_cost_lower_bound,
    online_attack_factor,
)
from .oracle import (
    ENUMERATION_GUARD,
    MinOptimalityResult,
    brute_force_limited_attack,
    brute_force_max_cost,
    check_min_optimality,
    exact_limited_attack_curve,
)
from .harness import (
    Experiment,
    ExperimentConfig,
    ExperimentResult,
    GenParams,
    generate_instance,
    make_identical_instance,
    run_experiment,
)

__all__ = [
    "__version__",
    "ENERGY_TOL",
    "ENUMERATION_GUARD",
    "AttackPlan",
    "BoundReport",
    "CliqueBlock",
    "CliquePartition",
    "CostFamily",
    "CostModel",
    "CriticalInterval",
    "Experiment",
    "ExperimentConfig",
    "ExperimentResult",
    "GenParams",
    "Instance",
    "Job",
    "KnapsackResult",
    "MinOptimalityResult",
    "Schedule",
    "allowance_ratio",
    "apply_attack",
    "arrival_packing_ratio",
    "attack_budget",
    "baseline_cost",
    "baseline_schedule",
    "bound_report",
    "brute_force_limited_attack",
    "brute_force_max_cost",
    "check_min_optimality",
    "compute_intensity",
    "critical_interval",
    "edf_fill",
    "evaluate_cost",
    "exact_limited_attack_curve",
    "fractional_knapsack",
    "full_attack_dp",
    "generate_instance",
    "limited_attack_curve",
    "limited_attack_dp",
    "limited_attack_lower_bound",
    "limited_greedy_attack",
    "limited_greedy_from_partition",
    "make_identical_instance",
    "max_cost_bound_value",
    "max_cost_lower_bound",
    "min_cost",
    "online_attack_factor",
    "online_edf_attack",
    "optimal_load_segments",
    "read_instance_csv",
    "realized_attack_cost",
    "run_experiment",
    "schedule_online_even",
    "schedule_optimal_offline",
    "write_instance_csv",
]
