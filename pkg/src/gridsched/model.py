"""Core domain model for slotted demand scheduling under adversarial alteration.

Time is discrete, 1-based and inclusive on both ends: a job with
arrival == deadline == t occupies exactly slot t, and a window [k, l]
spans l - k + 1 slots.  Energies are real valued; attack slots are
integers.  All types are immutable values after construction and every
operation is a pure function, so everything here is safe to share across
concurrent callers.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Mapping

ENERGY_TOL = 1e-9
"""Absolute tolerance for energy-conservation checks on real-valued schedules."""

INSTANCE_CSV_HEADER = ("id", "arrival", "deadline", "energy")


@dataclass(frozen=True)
class Job:
    """A single energy demand: serve ``energy`` units within [arrival, deadline]."""

    id: int
    arrival: int
    deadline: int
    energy: float

    def __post_init__(self) -> None:
        if not isinstance(self.id, int) or isinstance(self.id, bool) or self.id < 0:
            raise ValueError(f"job id must be an integer >= 0, got {self.id!r}")
        for name in ("arrival", "deadline"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ValueError(f"job {self.id}: {name} must be an integer slot >= 1, got {value!r}")
        if self.arrival > self.deadline:
            raise ValueError(f"job {self.id}: arrival {self.arrival} exceeds deadline {self.deadline}")
        object.__setattr__(self, "energy", float(self.energy))
        if not math.isfinite(self.energy) or self.energy <= 0.0:
            raise ValueError(f"job {self.id}: energy must be a finite positive real, got {self.energy!r}")

    @property
    def allowance(self) -> int:
        """Slack between deadline and arrival; the window spans allowance + 1 slots."""
        return self.deadline - self.arrival

    def covers(self, slot: int) -> bool:
        return self.arrival <= slot <= self.deadline


@dataclass(frozen=True, init=False)
class Instance:
    """An ordered collection of jobs, sorted by arrival (ties by id)."""

    jobs: tuple[Job, ...]

    def __init__(self, jobs: Iterable[Job] = ()) -> None:
        ordered = tuple(sorted(jobs, key=lambda j: (j.arrival, j.id)))
        seen: set[int] = set()
        for job in ordered:
            if not isinstance(job, Job):
                raise TypeError(f"expected Job, got {type(job).__name__}")
            if job.id in seen:
                raise ValueError(f"duplicate job id {job.id}")
            seen.add(job.id)
        object.__setattr__(self, "jobs", ordered)

    def __len__(self) -> int:
        return len(self.jobs)

    def __iter__(self) -> Iterator[Job]:
        return iter(self.jobs)

    @property
    def n(self) -> int:
        return len(self.jobs)

    @property
    def horizon(self) -> int:
        """Largest deadline over all jobs; 0 for an empty instance."""
        return max((j.deadline for j in self.jobs), default=0)

    @cached_property
    def _by_id(self) -> dict[int, Job]:
        return {j.id: j for j in self.jobs}

    def job(self, job_id: int) -> Job:
        try:
            return self._by_id[job_id]
        except KeyError:
            raise KeyError(f"unknown job id {job_id}") from None

    @property
    def job_ids(self) -> frozenset[int]:
        return frozenset(self._by_id)

    @cached_property
    def total_energy(self) -> float:
        return float(sum(j.energy for j in self.jobs))

    def endpoints(self) -> tuple[int, ...]:
        """Sorted set of all arrival and deadline slots."""
        points = {j.arrival for j in self.jobs} | {j.deadline for j in self.jobs}
        return tuple(sorted(points))

    def contained(self, start: int, end: int) -> tuple[Job, ...]:
        """Jobs whose whole window lies inside [start, end]."""
        return tuple(j for j in self.jobs if j.arrival >= start and j.deadline <= end)

    def covering(self, slot: int) -> tuple[Job, ...]:
        """Jobs whose window contains the given slot."""
        return tuple(j for j in self.jobs if j.covers(slot))

    def allowance_range(self) -> tuple[int, int]:
        """(smallest, largest) allowance over the jobs; rejects empty instances."""
        if not self.jobs:
            raise ValueError("allowance range of an empty instance is undefined")
        allowances = [j.allowance for j in self.jobs]
        return min(allowances), max(allowances)


class CostFamily(Enum):
    POWER = "power"


@dataclass(frozen=True)
class CostModel:
    """Per-slot cost of serving a load: non-decreasing, convex, with zero cost at zero load.

    The power family charges load ** exponent; exponent 1 is the linear
    edge case, exponent 2 the quadratic cost used in the experiments.
    Calls accept scalars or numpy arrays.
    """

    exponent: float
    family: CostFamily = CostFamily.POWER

    def __post_init__(self) -> None:
        object.__setattr__(self, "exponent", float(self.exponent))
        if not math.isfinite(self.exponent) or self.exponent < 1.0:
            raise ValueError(f"cost exponent must be a finite real >= 1, got {self.exponent!r}")
        if self.family is not CostFamily.POWER:
            raise ValueError(f"unsupported cost family {self.family!r}")

    def __call__(self, load):
        return load ** self.exponent


@dataclass(frozen=True, init=False)
class Schedule:
    """Energy allocations (job id, slot) -> amount for one instance.

    Invariants enforced at construction: allocations are non-negative,
    stay inside each job's window, and sum to each job's energy within
    ENERGY_TOL.  Zero entries are dropped.
    """

    instance: Instance
    allocations: dict[tuple[int, int], float]

    def __init__(self, instance: Instance, allocations: Mapping[tuple[int, int], float]) -> None:
        cleaned: dict[tuple[int, int], float] = {}
        totals: dict[int, float] = {j.id: 0.0 for j in instance.jobs}
        for (job_id, slot), raw in allocations.items():
            amount = float(raw)
            if amount == 0.0:
                continue
            if amount < 0.0:
                raise ValueError(f"negative allocation {amount!r} for job {job_id} at slot {slot}")
            try:
                job = instance.job(job_id)
            except KeyError as exc:
                raise ValueError(str(exc)) from None
            if not isinstance(slot, int) or not job.covers(slot):
                raise ValueError(f"job {job_id}: slot {slot} outside window [{job.arrival}, {job.deadline}]")
            cleaned[(job_id, slot)] = cleaned.get((job_id, slot), 0.0) + amount
            totals[job_id] += amount
        for job in instance.jobs:
            if abs(totals[job.id] - job.energy) > ENERGY_TOL:
                raise ValueError(
                    f"job {job.id}: allocated {totals[job.id]!r} does not conserve energy {job.energy!r}"
                )
        object.__setattr__(self, "instance", instance)
        object.__setattr__(self, "allocations", cleaned)

    def slot_loads(self) -> dict[int, float]:
        """Total load per slot, ascending by slot; zero-load slots omitted."""
        loads: dict[int, float] = {}
        for (_, slot), amount in self.allocations.items():
            loads[slot] = loads.get(slot, 0.0) + amount
        return dict(sorted(loads.items()))

    def load(self, slot: int) -> float:
        return sum(amount for (_, s), amount in self.allocations.items() if s == slot)

    def job_allocation(self, job_id: int) -> dict[int, float]:
        """Per-slot allocation of one job, ascending by slot."""
        self.instance.job(job_id)
        pairs = {slot: amount for (jid, slot), amount in self.allocations.items() if jid == job_id}
        return dict(sorted(pairs.items()))


@dataclass(frozen=True)
class AttackPlan:
    """Per-job compression slots plus the set of ids whose window actually changed.

    A compressed job is forced to arrival == deadline == slot; jobs whose
    window already equals (slot, slot) appear in ``compressed`` but not in
    ``altered``.  Energies are never modified.
    """

    compressed: dict[int, int]
    altered: frozenset[int]

    @classmethod
    def empty(cls) -> "AttackPlan":
        return cls({}, frozenset())

    @classmethod
    def from_compression(cls, instance: Instance, slots: Mapping[int, int]) -> "AttackPlan":
        """Build a validated plan from a job id -> slot mapping."""
        compressed = {int(jid): int(slot) for jid, slot in slots.items()}
        altered = set()
        for jid, slot in compressed.items():
            job = _plan_job(instance, jid)
            _check_plan_slot(job, slot)
            if (job.arrival, job.deadline) != (slot, slot):
                altered.add(jid)
        return cls(compressed, frozenset(altered))

    def validate(self, instance: Instance) -> None:
        """Raise ValueError when the plan is infeasible (hence detectable) for the instance."""
        altered = set()
        for jid, slot in self.compressed.items():
            job = _plan_job(instance, jid)
            _check_plan_slot(job, slot)
            if (job.arrival, job.deadline) != (slot, slot):
                altered.add(jid)
        if altered != set(self.altered):
            raise ValueError(f"altered set {set(self.altered)!r} inconsistent with compression {altered!r}")

    @property
    def size(self) -> int:
        """Number of jobs actually altered."""
        return len(self.altered)


def _plan_job(instance: Instance, job_id: int) -> Job:
    try:
        return instance.job(job_id)
    except KeyError:
        raise ValueError(f"attack plan references unknown job id {job_id}") from None


def _check_plan_slot(job: Job, slot: int) -> None:
    if not job.covers(slot):
        raise ValueError(
            f"attack plan moves job {job.id} to slot {slot} outside its window "
            f"[{job.arrival}, {job.deadline}]"
        )


@dataclass(frozen=True)
class CliqueBlock:
    """A set of job ids sharing a common feasible slot."""

    slot: int
    members: frozenset[int]


@dataclass(frozen=True)
class CliquePartition:
    """Blocks of jobs, each block pinned to one slot covered by all members."""

    blocks: tuple[CliqueBlock, ...]

    def validate(self, instance: Instance) -> None:
        seen: set[int] = set()
        for block in self.blocks:
            for jid in block.members:
                if jid in seen:
                    raise ValueError(f"job {jid} appears in more than one block")
                seen.add(jid)
                job = _plan_job(instance, jid)
                if not job.covers(block.slot):
                    raise ValueError(f"job {jid} does not cover block slot {block.slot}")
        if seen != set(instance.job_ids):
            missing = set(instance.job_ids) - seen
            raise ValueError(f"blocks do not cover job ids {sorted(missing)}")

    def to_plan(self, instance: Instance) -> AttackPlan:
        """Compression plan sending every member to its block slot."""
        slots = {jid: block.slot for block in self.blocks for jid in block.members}
        return AttackPlan.from_compression(instance, slots)

    def block_energy(self, instance: Instance, block: CliqueBlock) -> float:
        return float(sum(instance.job(jid).energy for jid in block.members))


def apply_attack(instance: Instance, plan: AttackPlan) -> Instance:
    """Return the instance the controller sees after the attack.

    Each compressed job gets arrival = deadline = its plan slot; other
    jobs and all energies are unchanged.  Rejects plans referencing
    unknown ids or slots outside a job's window.
    """
    plan.validate(instance)
    jobs = []
    for job in instance.jobs:
        slot = plan.compressed.get(job.id)
        if slot is None:
            jobs.append(job)
        else:
            jobs.append(Job(job.id, slot, slot, job.energy))
    return Instance(jobs)


def evaluate_cost(schedule: Schedule, cost: CostModel) -> float:
    """Total cost of a schedule: sum of the per-slot cost over its load profile."""
    return float(sum(cost(load) for load in schedule.slot_loads().values()))


def baseline_schedule(instance: Instance) -> Schedule:
    """The inelastic schedule: every job served entirely at its arrival slot."""
    return Schedule(instance, {(j.id, j.arrival): j.energy for j in instance.jobs})


def baseline_cost(instance: Instance, cost: CostModel) -> float:
    """Cost of inelastic service; jobs sharing an arrival slot stack before the cost applies."""
    loads: dict[int, float] = {}
    for job in instance.jobs:
        loads[job.arrival] = loads.get(job.arrival, 0.0) + job.energy
    return float(sum(cost(load) for _, load in sorted(loads.items())))


def read_instance_csv(path: str | Path) -> Instance:
    """Parse an instance file: header ``id,arrival,deadline,energy``, one job per line.

    Violations of the job invariants are rejected with the offending line
    number in the error message.
    """
    path = Path(path)
    jobs: list[Job] = []
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: line 1: missing header {','.join(INSTANCE_CSV_HEADER)}") from None
        if tuple(col.strip() for col in header) != INSTANCE_CSV_HEADER:
            raise ValueError(f"{path}: line 1: expected header {','.join(INSTANCE_CSV_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 4:
                raise ValueError(f"{path}: line {lineno}: expected 4 fields, got {len(row)}")
            try:
                job = Job(
                    id=int(row[0]),
                    arrival=int(row[1]),
                    deadline=int(row[2]),
                    energy=float(row[3]),
                )
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
            jobs.append(job)
    try:
        return Instance(jobs)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def write_instance_csv(instance: Instance, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", newline="\n", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(INSTANCE_CSV_HEADER)
        for job in instance.jobs:
            writer.writerow([job.id, job.arrival, job.deadline, repr(job.energy)])
