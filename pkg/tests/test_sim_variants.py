from collections import Counter

import pytest

from trispirit import RngStreams, Thresholds, TaskType, route
from trispirit.sim import SystemVariant, assign_paths, run_variant


class TestBaselines:
    def test_cloud_centric_all_cloud(self, variant_records):
        records = variant_records[SystemVariant.CLOUD_CENTRIC]
        assert all(r.path == "cloud-baseline" for r in records)
        assert all(not r.offline_ok for r in records)

    def test_edge_only_all_edge(self, variant_records, variant_summaries):
        records = variant_records[SystemVariant.EDGE_ONLY]
        assert all(r.path == "edge-baseline" for r in records)
        assert all(r.offline_ok for r in records)
        # Oracle: analytic mean 155 with standard error 30/sqrt(2000).
        assert abs(variant_summaries[SystemVariant.EDGE_ONLY].latency.mean - 155) <= 2

    def test_edge_only_charges_one_call(self, variant_records):
        records = variant_records[SystemVariant.EDGE_ONLY]
        assert all(r.model_calls == 1 for r in records)


class TestTsVariants:
    def test_local_only_never_touches_network(self, variant_records, tasks2000):
        records = variant_records[SystemVariant.TS_LOCAL_ONLY]
        assert all(r.path in ("reflex", "agent") for r in records)
        # Super-routed tasks fall back to the agent tier, others unchanged.
        for task, record in zip(tasks2000, records):
            base = route(task).value
            assert record.path == ("agent" if base == "super" else base)

    def test_no_reflex_moves_reflex_to_agent(self, variant_records, tasks2000):
        records = variant_records[SystemVariant.TS_NO_REFLEX]
        assert all(r.path != "reflex" for r in records)
        full = variant_records[SystemVariant.TS_FULL]
        for nr, f in zip(records, full):
            assert nr.path == ("agent" if f.path == "reflex" else f.path)

    def test_no_habit_matches_plain_routing(self, variant_records, tasks2000):
        for variant in (SystemVariant.TS_NO_HABIT, SystemVariant.TS_MAIN_NO_HABIT):
            for task, record in zip(tasks2000, variant_records[variant]):
                assert record.path == route(task).value

    def test_full_puts_every_type_c_on_habit(self, variant_records, tasks2000):
        records = variant_records[SystemVariant.TS_FULL]
        for task, record in zip(tasks2000, records):
            if task.kind is TaskType.REPEATED_C:
                assert record.path == "habit"
            else:
                assert record.path == route(task).value

    def test_random_route_preserves_exact_counts(self, variant_records):
        full = Counter(r.path for r in variant_records[SystemVariant.TS_FULL])
        rnd = Counter(r.path for r in variant_records[SystemVariant.TS_RANDOM_ROUTE])
        assert full == rnd

    def test_random_route_actually_shuffles(self, variant_records):
        full = [r.path for r in variant_records[SystemVariant.TS_FULL]]
        rnd = [r.path for r in variant_records[SystemVariant.TS_RANDOM_ROUTE]]
        assert full != rnd

    def test_random_route_deterministic(self, tasks2000, noise2000):
        a = run_variant(
            tasks2000, SystemVariant.TS_RANDOM_ROUTE, noise=noise2000, rng=RngStreams()
        )
        b = run_variant(
            tasks2000, SystemVariant.TS_RANDOM_ROUTE, noise=noise2000, rng=RngStreams()
        )
        assert a == b


class TestNoiseSharing:
    def test_threshold_change_never_changes_cost_draws(self, tasks2000, noise2000, streams):
        default = run_variant(
            tasks2000, SystemVariant.TS_MAIN_NO_HABIT, noise=noise2000, rng=streams
        )
        widened = run_variant(
            tasks2000,
            SystemVariant.TS_MAIN_NO_HABIT,
            Thresholds(0.40, 0.30, 0.70, 0.75),
            noise=noise2000,
            rng=streams,
        )
        moved = 0
        for a, b in zip(default, widened):
            if a.path == b.path:
                assert (a.latency_ms, a.energy_mj) == (b.latency_ms, b.energy_mj)
            else:
                moved += 1
        assert moved > 0

    def test_variants_share_per_task_path_costs(self, variant_records):
        # The same (task, path) pair costs the same in every variant.
        seen: dict[tuple[int, str], tuple[float, float]] = {}
        for records in variant_records.values():
            for r in records:
                key = (r.task_id, r.path)
                cost = (r.latency_ms, r.energy_mj)
                assert seen.setdefault(key, cost) == cost


class TestQualityPenalty:
    def test_reasoning_tasks_penalised_below_capability(self, variant_records, tasks2000):
        for variant in (SystemVariant.EDGE_ONLY, SystemVariant.TS_LOCAL_ONLY):
            for task, record in zip(tasks2000, variant_records[variant]):
                if task.kind is TaskType.REASONING_B:
                    assert record.quality_penalty == 1.0
                else:
                    assert record.quality_penalty == 0.0

    def test_no_penalty_on_capable_paths(self, variant_records):
        for records in variant_records.values():
            for r in records:
                if r.path in ("super", "cloud-baseline"):
                    assert r.quality_penalty == 0.0


class TestErrors:
    def test_noise_required(self, tasks2000):
        with pytest.raises(ValueError):
            run_variant(tasks2000, SystemVariant.TS_FULL)

    def test_noise_must_cover_workload(self, tasks2000, noise2000):
        with pytest.raises(ValueError):
            run_variant(tasks2000, SystemVariant.TS_FULL, noise=noise2000[:100])

    def test_assign_paths_covers_every_variant(self, tasks2000):
        for variant in SystemVariant:
            paths = assign_paths(tasks2000[:50], variant)
            assert len(paths) == 50
