import numpy as np
import pytest

from trispirit import ConfigurationError
from trispirit.sim import CostModel, sample_cost
from trispirit.sim.costs import BASELINE_PATHS, PathCost


ZERO_NOISE = np.zeros((4, 4))


class TestDefaults:
    def test_zero_noise_reflex_means(self):
        cost = sample_cost("reflex", 0, ZERO_NOISE)
        assert cost.latency_ms == 5.5
        assert cost.energy_mj == 0.48
        assert cost.model_calls == 0
        assert not cost.requires_network

    def test_super_costs_two_calls_and_network(self):
        cost = sample_cost("super", 0, ZERO_NOISE)
        assert cost.model_calls == 2
        assert cost.requires_network

    def test_all_default_paths_present(self):
        model = CostModel()
        assert set(model.paths) == {
            "reflex",
            "agent",
            "super",
            "habit",
            "cloud-baseline",
            "edge-baseline",
        }

    def test_baselines_mirror_layer_costs_with_one_call(self):
        model = CostModel()
        assert model.paths["cloud-baseline"].latency_mean == model.paths["super"].latency_mean
        assert model.paths["edge-baseline"].latency_mean == model.paths["agent"].latency_mean
        assert model.paths["cloud-baseline"].model_calls == 1
        assert model.paths["edge-baseline"].model_calls == 1


class TestClamping:
    def test_deep_negative_draw_clamps_to_zero(self):
        noise = np.full((1, 4), -10.0)
        cost = sample_cost("reflex", 0, noise)
        # Oracle: max(0, 5.5 - 14) = 0.
        assert cost.latency_ms == 0.0
        assert cost.energy_mj == 0.0

    def test_costs_never_negative_over_random_noise(self):
        rng = np.random.default_rng(1)
        noise = rng.standard_normal((500, 4)) * 4
        for path in ("reflex", "agent", "super", "habit"):
            for i in range(0, 500, 25):
                cost = sample_cost(path, i, noise)
                assert cost.latency_ms >= 0
                assert cost.energy_mj >= 0


class TestNoiseColumns:
    def test_system_paths_read_columns_0_1(self):
        noise = np.array([[1.0, 2.0, -1.0, -2.0]])
        cost = sample_cost("agent", 0, noise)
        assert cost.latency_ms == 155.0 + 30.0 * 1.0
        assert cost.energy_mj == 10.2 + 2.0 * 2.0

    def test_baseline_paths_read_columns_2_3(self):
        noise = np.array([[1.0, 2.0, -1.0, 0.5]])
        cost = sample_cost("cloud-baseline", 0, noise)
        assert cost.latency_ms == 1920.0 - 280.0
        assert cost.energy_mj == 40.5 + 7.0 * 0.5

    def test_same_task_same_path_same_cost(self):
        rng = np.random.default_rng(2)
        noise = rng.standard_normal((10, 4))
        a = sample_cost("super", 3, noise)
        b = sample_cost("super", 3, noise)
        assert a == b


class TestErrors:
    def test_unknown_path(self):
        with pytest.raises(ConfigurationError):
            sample_cost("warp-drive", 0, ZERO_NOISE)

    def test_missing_noise_row(self):
        with pytest.raises(ValueError, match="noise row"):
            sample_cost("reflex", 99, ZERO_NOISE)


class TestOverrides:
    def test_cloud_calls_switch(self):
        assert CostModel(cloud_calls=2).paths["cloud-baseline"].model_calls == 2
        with pytest.raises(ConfigurationError):
            CostModel(cloud_calls=3)

    def test_with_overrides(self):
        model = CostModel().with_overrides({"agent": {"latency_mean": 120.0}})
        assert model.paths["agent"].latency_mean == 120.0
        assert model.paths["agent"].latency_sd == 30.0

    def test_unknown_override_path(self):
        with pytest.raises(ConfigurationError):
            CostModel().with_overrides({"nope": {"latency_mean": 1.0}})

    def test_unknown_override_field(self):
        with pytest.raises(ConfigurationError):
            CostModel().with_overrides({"agent": {"warp": 1.0}})

    def test_baseline_paths_constant(self):
        assert BASELINE_PATHS == {"cloud-baseline", "edge-baseline"}
        assert isinstance(CostModel().paths["reflex"], PathCost)
