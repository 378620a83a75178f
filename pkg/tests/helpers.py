"""Shared random-instance builders for the test suite."""

from __future__ import annotations

import numpy as np

from gridsched.model import Instance, Job


def random_instance(
    rng: np.random.Generator,
    max_jobs: int = 7,
    min_jobs: int = 1,
    max_gap: int = 3,
    max_window: int = 5,
    min_window: int = 1,
    energy_low: float = 1.0,
    energy_high: float = 5.0,
) -> Instance:
    """Jobs with strictly increasing arrivals (one arrival per slot) and bounded windows."""
    n = int(rng.integers(min_jobs, max_jobs + 1))
    jobs = []
    arrival = 1
    for idx in range(n):
        if idx:
            arrival += int(rng.integers(1, max_gap + 1))
        width = int(rng.integers(min_window, max_window + 1))
        energy = float(rng.uniform(energy_low, energy_high))
        jobs.append(Job(idx, arrival, arrival + width - 1, energy))
    return Instance(jobs)


def random_instance_in_horizon(
    rng: np.random.Generator,
    max_jobs: int,
    horizon: int,
    max_window: int = 5,
    energy_low: float = 1.0,
    energy_high: float = 5.0,
) -> Instance:
    """Jobs packed inside [1, horizon]; arrivals may collide."""
    n = int(rng.integers(1, max_jobs + 1))
    jobs = []
    for idx in range(n):
        arrival = int(rng.integers(1, horizon + 1))
        deadline = int(rng.integers(arrival, min(arrival + max_window - 1, horizon) + 1))
        energy = float(rng.uniform(energy_low, energy_high))
        jobs.append(Job(idx, arrival, deadline, energy))
    return Instance(jobs)
