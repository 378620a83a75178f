"""Demand-alteration attack strategies.

An unlimited attacker compresses every job to a single slot, which turns
cost maximization into finding a clique partition of the induced interval
graph that maximizes the summed per-clique cost.  Because every maximal
clique of an interval graph is anchored at some window endpoint, an
interval dynamic program over endpoint pairs solves this exactly; a
single-pass EDF grouping gives an online alternative.

A budget-limited attacker alters at most floor(beta * n) jobs.  The
greedy strategy reuses the unlimited partition and picks whole cliques,
or a fraction of the next clique, via fractional knapsack; it reports the
cost of the compressed components only, a certified lower bound.  A
second dynamic program estimates an upper bound by optimizing the attack
against a controller that serves demands inelastically at their arrival
slots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import (
    AttackPlan,
    CliqueBlock,
    CliquePartition,
    CostModel,
    Instance,
    apply_attack,
    evaluate_cost,
)
from .scheduler import schedule_optimal_offline

_BUDGET_EPS = 1e-9


def attack_budget(beta: float, n: int) -> int:
    """Alteration budget floor(beta * n), robust to float beta just below an integer."""
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta!r}")
    return int(math.floor(beta * n + _BUDGET_EPS))


@dataclass(frozen=True)
class KnapsackResult:
    """Greedy fractional-knapsack selection.

    ``order`` permutes the input items by non-increasing value/weight
    ratio (ties by larger value, then input position).  The first
    ``chosen_count`` items of that order fit the weight budget whole;
    ``fraction`` of the next item's weight would exhaust it exactly.
    ``chosen_value`` sums the whole items only.
    """

    chosen_count: int
    fraction: float
    chosen_value: float
    order: tuple[int, ...]


def fractional_knapsack(items: Sequence[tuple[float, float]], budget_fraction: float) -> KnapsackResult:
    """Greedy solution for a weight budget of ``budget_fraction`` times the total weight.

    Items are (value >= 0, weight > 0) pairs.  Comparisons against the
    budget carry a relative 1e-9 slack so that budgets meant to be whole
    numbers of unit-weight items are not lost to float rounding.
    """
    if not items:
        raise ValueError("fractional knapsack needs at least one item")
    if not 0.0 <= budget_fraction <= 1.0:
        raise ValueError(f"budget fraction must lie in [0, 1], got {budget_fraction!r}")
    for value, weight in items:
        if weight <= 0.0:
            raise ValueError(f"item weights must be positive, got {weight!r}")
        if value < 0.0:
            raise ValueError(f"item values must be non-negative, got {value!r}")

    order = sorted(
        range(len(items)),
        key=lambda idx: (-(items[idx][0] / items[idx][1]), -items[idx][0], idx),
    )
    total_weight = sum(weight for _, weight in items)
    budget = budget_fraction * total_weight
    slack = _BUDGET_EPS * max(1.0, abs(total_weight))

    chosen = 0
    used = 0.0
    value_sum = 0.0
    for idx in order:
        value, weight = items[idx]
        if used + weight <= budget + slack:
            used += weight
            value_sum += value
            chosen += 1
        else:
            break
    if chosen < len(items):
        next_weight = items[order[chosen]][1]
        fraction = min(1.0, max(0.0, (budget - used) / next_weight))
    else:
        fraction = 0.0
    return KnapsackResult(chosen, fraction, value_sum, tuple(order))


def _endpoint_index(instance: Instance):
    points = np.array(instance.endpoints(), dtype=np.int64)
    arrivals = np.array([j.arrival for j in instance.jobs], dtype=np.int64)
    deadlines = np.array([j.deadline for j in instance.jobs], dtype=np.int64)
    a_idx = np.searchsorted(points, arrivals)
    d_idx = np.searchsorted(points, deadlines)
    return points, a_idx, d_idx


def full_attack_dp(instance: Instance, cost: CostModel) -> tuple[AttackPlan, CliquePartition, float]:
    """Optimal unlimited attack: maximum-cost clique partition by interval DP.

    Solves, over endpoint pairs [k, l] in increasing width, the recursion
    that anchors a maximal clique at some endpoint z of [k, l] (the
    contained jobs covering z) and recurses on [k, z-1] and [z+1, l].
    Returns the full-compression plan, the achieving partition, and the
    maximum cost.  Ties prefer the smallest anchor slot.
    """
    if instance.n == 0:
        return AttackPlan.empty(), CliquePartition(()), 0.0

    points, a_idx, d_idx = _endpoint_index(instance)
    q = points.size
    energies = np.array([j.energy for j in instance.jobs], dtype=np.float64)

    weights = np.bincount(a_idx * q + d_idx, weights=energies, minlength=q * q).reshape(q, q)
    prefix = np.zeros((q + 1, q + 1))
    prefix[1:, 1:] = weights.cumsum(axis=0).cumsum(axis=1)

    table = np.zeros((q + 2, q + 2))
    anchor = np.zeros((q, q), dtype=np.int64)
    for width in range(q):
        i = np.arange(q - width, dtype=np.int64)
        j = i + width
        z = i[:, None] + np.arange(width + 1, dtype=np.int64)[None, :]
        jj = (j + 1)[:, None]
        ii = i[:, None]
        # clique energy: jobs with arrival index in [i, z] and deadline index in [z, j]
        clique = prefix[z + 1, jj] - prefix[ii, jj] - prefix[z + 1, z] + prefix[ii, z]
        left = table[ii + 1, z]
        right = table[z + 2, jj]
        combined = cost(clique) + left + right
        table[i + 1, j + 1] = combined.max(axis=1)
        anchor[i, j] = i + combined.argmax(axis=1)
    c_max = float(table[1, q])

    blocks: list[CliqueBlock] = []
    stack = [(0, q - 1)]
    while stack:
        i, j = stack.pop()
        if i > j:
            continue
        if prefix[q, j + 1] - prefix[i, j + 1] == 0.0:
            continue  # no contained jobs
        z = int(anchor[i, j])
        members = frozenset(
            job.id
            for job, ai, di in zip(instance.jobs, a_idx, d_idx)
            if i <= ai <= z <= di <= j
        )
        if members:
            blocks.append(CliqueBlock(int(points[z]), members))
        stack.append((i, z - 1))
        stack.append((z + 1, j))
    blocks.sort(key=lambda block: block.slot)
    partition = CliquePartition(tuple(blocks))
    return partition.to_plan(instance), partition, c_max


def online_edf_attack(instance: Instance, cost: CostModel) -> tuple[AttackPlan, CliquePartition, float]:
    """Single-pass attack grouping jobs into cliques by earliest deadline.

    Repeatedly take the earliest deadline among remaining jobs, gather
    every remaining job arriving by then into one block pinned at that
    deadline, and drop them.  Runs in O(n log n); the value never exceeds
    the optimal attack.
    """
    jobs = instance.jobs
    if not jobs:
        return AttackPlan.empty(), CliquePartition(()), 0.0
    suffix_min = [0] * len(jobs)
    running = jobs[-1].deadline
    for idx in range(len(jobs) - 1, -1, -1):
        running = min(running, jobs[idx].deadline)
        suffix_min[idx] = running

    blocks: list[CliqueBlock] = []
    value = 0.0
    idx = 0
    while idx < len(jobs):
        pin = suffix_min[idx]
        group = []
        while idx < len(jobs) and jobs[idx].arrival <= pin:
            group.append(jobs[idx])
            idx += 1
        blocks.append(CliqueBlock(pin, frozenset(j.id for j in group)))
        value += float(cost(sum(j.energy for j in group)))
    partition = CliquePartition(tuple(blocks))
    return partition.to_plan(instance), partition, value


def limited_greedy_from_partition(
    instance: Instance,
    partition: CliquePartition,
    beta: float,
    cost: CostModel,
) -> tuple[AttackPlan, float]:
    """Budgeted greedy attack given an already-computed optimal clique partition.

    Step one ranks whole cliques by cost per member and compresses as many
    as the budget admits; step two instead spends the whole budget inside
    the next clique on its highest-energy members.  The better of the two
    is adopted, and only the compressed components are counted, so the
    reported value is a lower bound on what the attack actually forces.
    """
    budget = attack_budget(beta, instance.n)
    blocks = partition.blocks
    if not blocks:
        return AttackPlan.empty(), 0.0

    block_energy = [partition.block_energy(instance, block) for block in blocks]
    block_size = [len(block.members) for block in blocks]
    clique_pick = fractional_knapsack(
        [(float(cost(energy)), float(size)) for energy, size in zip(block_energy, block_size)],
        beta,
    )
    whole = clique_pick.chosen_count
    cost_whole = clique_pick.chosen_value

    cost_partial = 0.0
    partial_jobs: list[int] = []
    partial_slot = 0
    if whole < len(blocks):
        nxt = blocks[clique_pick.order[whole]]
        partial_slot = nxt.slot
        member_ids = sorted(nxt.members)
        inner_fraction = min(1.0, budget / len(member_ids))
        job_pick = fractional_knapsack(
            [(instance.job(jid).energy, 1.0) for jid in member_ids],
            inner_fraction,
        )
        partial_jobs = [member_ids[pos] for pos in job_pick.order[: job_pick.chosen_count]]
        cost_partial = float(cost(sum(instance.job(jid).energy for jid in partial_jobs)))

    slots: dict[int, int] = {}
    if cost_whole >= cost_partial:
        for idx in clique_pick.order[:whole]:
            for jid in blocks[idx].members:
                slots[jid] = blocks[idx].slot
    else:
        for jid in partial_jobs:
            slots[jid] = partial_slot
    plan = AttackPlan.from_compression(instance, slots)
    return plan, max(cost_whole, cost_partial)


def limited_greedy_attack(instance: Instance, beta: float, cost: CostModel) -> tuple[AttackPlan, float]:
    """Budgeted greedy attack: optimal partition first, then knapsack selection.

    With beta = 1 the whole partition is compressed and the value equals
    the optimal unlimited attack exactly.
    """
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta!r}")
    if instance.n == 0:
        return AttackPlan.empty(), 0.0
    _, partition, _ = full_attack_dp(instance, cost)
    return limited_greedy_from_partition(instance, partition, beta, cost)


def realized_attack_cost(instance: Instance, plan: AttackPlan, cost: CostModel) -> float:
    """Cost the optimal controller actually pays once the plan is applied.

    Always at least the conservative value reported for the same plan by
    the greedy attack, since uncompressed jobs only add load.
    """
    altered = apply_attack(instance, plan)
    return evaluate_cost(schedule_optimal_offline(altered, cost), cost)


def _maxplus_machinery(cap: int):
    """Index machinery to max-plus convolve saturating (cap+1)-vectors."""
    grid = np.add.outer(np.arange(cap + 1), np.arange(cap + 1)).ravel()
    order = np.argsort(grid, kind="stable")
    starts = np.searchsorted(grid[order], np.arange(2 * cap + 1))
    return order, starts


def limited_attack_curve(instance: Instance, cost: CostModel, max_budget: int) -> np.ndarray:
    """Upper-bound estimates for the budgeted attack, one entry per budget 0..max_budget.

    Assumes the controller serves every demand at its (possibly altered)
    arrival slot, and that at most one job arrives per slot (rejected
    otherwise).  An interval DP anchors a clique at an endpoint z of each
    considered interval: the job arriving exactly at z joins for free,
    each further member costs one budget unit, members are added in
    non-increasing energy order (ties by id), and members covering z but
    left out are charged as singletons at their own arrivals.  Remaining
    budget splits freely between the two sub-intervals.  Entry 0 equals
    the inelastic baseline cost.

    Budget vectors are non-decreasing and saturate once every contained
    job can be altered, so each subproblem is solved only up to its own
    job count and empty anchors repeated inside one endpoint gap are
    collapsed.
    """
    if max_budget < 0:
        raise ValueError("budget must be non-negative")
    arrivals = [j.arrival for j in instance.jobs]
    if len(set(arrivals)) != len(arrivals):
        raise ValueError("upper-bound recursion requires at most one arrival per slot")
    n = instance.n
    if n == 0:
        return np.zeros(max_budget + 1)

    budget = min(max_budget, n)
    points, a_idx, d_idx = _endpoint_index(instance)
    q = points.size
    energy = np.array([j.energy for j in instance.jobs], dtype=np.float64)
    job_ids = np.array([j.id for j in instance.jobs], dtype=np.int64)
    single_cost = np.asarray(cost(energy), dtype=np.float64)

    counts = np.bincount(a_idx * q + d_idx, minlength=q * q).reshape(q, q)
    cnt = np.zeros((q + 1, q + 1), dtype=np.int64)
    cnt[1:, 1:] = counts.cumsum(axis=0).cumsum(axis=1)

    # jobs covering each endpoint, pre-sorted by energy desc (ties by id)
    cover_order: list[np.ndarray] = []
    for z in range(q):
        cov = np.flatnonzero((a_idx <= z) & (d_idx >= z))
        cover_order.append(cov[np.lexsort((job_ids[cov], -energy[cov]))])
    arrival_at = np.full(q, -1, dtype=np.int64)
    for idx, ai in enumerate(a_idx):
        arrival_at[ai] = idx

    machinery: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def convolve_rows(left: np.ndarray, right: np.ndarray, cap: int) -> np.ndarray:
        order, starts = machinery.setdefault(cap, _maxplus_machinery(cap))
        stacked = (left[:, :, None] + right[:, None, :]).reshape(left.shape[0], -1)
        return np.maximum.reduceat(stacked[:, order], starts, axis=1)[:, : cap + 1]

    table = np.zeros((q + 2, q + 2, budget + 1))
    for width in range(q):
        for i in range(q - width):
            j = i + width
            contained = int(cnt[q, j + 1] - cnt[i, j + 1])
            if contained == 0:
                continue
            cap = min(budget, contained)
            cols = cap + 1
            z_all = np.arange(i, j + 1, dtype=np.int64)
            member_counts = (
                cnt[z_all + 1, j + 1] - cnt[i, j + 1] - cnt[z_all + 1, z_all] + cnt[i, z_all]
            )
            has_members = member_counts > 0
            # consecutive memberless anchors split identically; keep the first of each run
            keep = has_members.copy()
            keep[0] = True
            keep[1:] |= has_members[:-1]
            z_vec = z_all[keep]
            kept_members = has_members[keep]

            left = table[i + 1, z_vec, :cols]
            right = table[z_vec + 2, j + 1, :cols]
            split = convolve_rows(left, right, cap)

            gains = np.zeros((z_vec.size, cols))
            budget_axis = np.arange(cols)
            for row, z in enumerate(z_vec):
                if not kept_members[row]:
                    continue
                cov = cover_order[z]
                members = cov[(a_idx[cov] >= i) & (d_idx[cov] <= j)]
                anchor = arrival_at[z]
                anchor_energy = 0.0
                if anchor >= 0 and a_idx[anchor] >= i and d_idx[anchor] <= j:
                    anchor_energy = float(energy[anchor])
                    members = members[members != anchor]
                picked_energy = np.concatenate(([0.0], np.cumsum(energy[members])))
                picked_single = np.concatenate(([0.0], np.cumsum(single_cost[members])))
                values = np.asarray(cost(anchor_energy + picked_energy), dtype=np.float64)
                values += picked_single[-1] - picked_single
                gains[row] = values[np.minimum(budget_axis, members.size)]
            best = convolve_rows(gains, split, cap).max(axis=0)
            cell = table[i + 1, j + 1]
            cell[:cols] = best
            if cols <= budget:
                cell[cols:] = best[-1]

    curve = table[1, q].copy()
    if max_budget > budget:
        curve = np.concatenate([curve, np.full(max_budget - budget, curve[-1])])
    return curve


def limited_attack_dp(instance: Instance, beta: float, cost: CostModel) -> float:
    """Upper-bound estimate for the budgeted attack at fraction beta.

    See limited_attack_curve for the recursion; this evaluates it at
    budget floor(beta * n).  At beta = 0 the value is the inelastic
    baseline cost.
    """
    budget = attack_budget(beta, instance.n)
    if instance.n == 0:
        return 0.0
    return float(limited_attack_curve(instance, cost, budget)[budget])
