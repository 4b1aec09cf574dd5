import numpy as np
import pytest

from trispirit.sim import SystemVariant, sensitivity_sweep
from trispirit.sim.sweep import GAMMA_A_BAND, GAMMA_R_BAND, TAU_A_GRID, TAU_R_GRID


@pytest.fixture()
def cells(sweep_cells):
    return sweep_cells


def test_grid_shape(cells):
    by_grid = {}
    for c in cells:
        by_grid.setdefault(c.grid, []).append(c)
    assert len(by_grid["tau_r"]) == len(TAU_R_GRID) * len(GAMMA_R_BAND)
    assert len(by_grid["tau_a"]) == len(TAU_A_GRID) * len(GAMMA_A_BAND)
    assert len(by_grid["heatmap"]) == len(TAU_R_GRID) * len(TAU_A_GRID)


def test_latency_monotone_in_tau_r_per_band(cells):
    for gamma_r in GAMMA_R_BAND:
        band = sorted(
            (c for c in cells if c.grid == "tau_r" and c.gamma_r == gamma_r),
            key=lambda c: c.tau_r,
        )
        latencies = [c.mean_latency_ms for c in band]
        assert all(a >= b - 1e-9 for a, b in zip(latencies, latencies[1:]))


def test_latency_monotone_in_tau_a_at_default_gamma(cells):
    band = sorted(
        (c for c in cells if c.grid == "tau_a" and c.gamma_a == 0.75),
        key=lambda c: c.tau_a,
    )
    latencies = [c.mean_latency_ms for c in band]
    assert all(a >= b - 1e-9 for a, b in zip(latencies, latencies[1:]))


def test_saturation_above_tau_r_030(cells):
    band = {
        round(c.tau_r, 6): c.mean_latency_ms
        for c in cells
        if c.grid == "tau_r" and c.gamma_r == 0.30
    }
    lat_030, lat_040 = band[0.3], band[0.4]
    assert abs(lat_040 - lat_030) / lat_030 < 0.01


def test_dominance_over_cloud_everywhere(cells, variant_summaries):
    cloud = variant_summaries[SystemVariant.CLOUD_CENTRIC]
    for c in cells:
        assert c.mean_latency_ms < cloud.latency.mean
        assert c.mean_energy_mj < cloud.energy.mean


def test_offline_insensitive_to_thresholds(cells):
    offline = [c.offline_pct for c in cells]
    assert min(offline) > 70.0
    assert max(offline) < 85.0


def test_sweep_is_reproducible(cells, tasks2000, noise2000, streams):
    again = sensitivity_sweep(tasks2000, noise2000, rng=streams)
    assert again == cells


class TestAblation:
    def test_all_variants_present(self, ablation):
        assert set(ablation.summaries) == {v.value for v in SystemVariant}

    def test_attribution_identities(self, ablation):
        a = ablation.attribution
        means = {k: s.latency.mean for k, s in ablation.summaries.items()}
        assert a.total_ms == pytest.approx(means["cloud-centric"] - means["ts-full"])
        assert a.local_execution_ms == pytest.approx(
            means["cloud-centric"] - means["ts-local-only"]
        )
        assert a.reflex_ms == pytest.approx(means["ts-no-reflex"] - means["ts-full"])
        assert a.habit_ms == pytest.approx(means["ts-no-habit"] - means["ts-full"])

    def test_local_execution_dominates_the_gap(self, ablation):
        a = ablation.attribution
        assert a.share_of_gap(a.local_execution_ms) > 0.9
        assert a.share_of_gap(a.routing_intelligence_ms) < 0.05

    def test_random_route_within_ci_overlap(self, ablation):
        full = ablation.summaries["ts-full"].latency
        rnd = ablation.summaries["ts-random-route"].latency
        assert abs(rnd.mean - full.mean) < (full.width + rnd.width) / 2

    def test_no_habit_equals_main_no_habit(self, ablation):
        a = ablation.summaries["ts-no-habit"]
        b = ablation.summaries["ts-main-no-habit"]
        assert a.latency.mean == b.latency.mean
        assert a.calls.mean == b.calls.mean

    def test_habit_saves_calls_and_energy(self, ablation):
        no_habit = ablation.summaries["ts-no-habit"]
        full = ablation.summaries["ts-full"]
        assert no_habit.calls.mean > full.calls.mean
        assert no_habit.energy.mean > full.energy.mean
