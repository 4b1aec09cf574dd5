"""Shared fixtures: the reference seeded workload and its simulation runs."""

import pytest

from trispirit import RngStreams, presample_noise, sample_tasks
from trispirit.sim import (
    SystemVariant,
    ablation_suite,
    run_variant,
    sensitivity_sweep,
    summarize,
)

N_TASKS = 2000


@pytest.fixture(scope="session")
def streams():
    return RngStreams()


@pytest.fixture(scope="session")
def tasks2000(streams):
    return sample_tasks(N_TASKS, rng=streams)


@pytest.fixture(scope="session")
def noise2000(streams):
    return presample_noise(N_TASKS, rng=streams)


@pytest.fixture(scope="session")
def variant_records(tasks2000, noise2000, streams):
    return {
        v: run_variant(tasks2000, v, noise=noise2000, rng=streams)
        for v in SystemVariant
    }


@pytest.fixture(scope="session")
def variant_summaries(variant_records):
    return {v: summarize(records) for v, records in variant_records.items()}


@pytest.fixture(scope="session")
def ablation(tasks2000, noise2000, streams):
    return ablation_suite(tasks2000, noise2000, rng=streams)


@pytest.fixture(scope="session")
def sweep_cells(tasks2000, noise2000, streams):
    return sensitivity_sweep(tasks2000, noise2000, rng=streams)
