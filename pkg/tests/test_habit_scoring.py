import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trispirit import ConfigurationError, HabitWeights, TaskClassStats, habit_score
from trispirit.habit import Action, ExecutionTrace, TraceLog, class_stats, detect_candidates


def stats(f, c, s, key="k"):
    return TaskClassStats(class_key=key, frequency=f, consistency=c, similarity=s)


def trace(key, names=("a",), context=(1.0, 0.0)):
    return ExecutionTrace(key, tuple(Action(n) for n in names), context)


class TestScore:
    def test_maximum(self):
        assert habit_score(stats(1.0, 1.0, 1.0)) == pytest.approx(1.0)

    def test_promotable_example(self):
        s = habit_score(stats(0.9, 0.8, 0.7))
        assert s == pytest.approx(0.81)
        assert s > HabitWeights().delta

    def test_midpoint_not_promotable(self):
        s = habit_score(stats(0.5, 0.5, 0.5))
        assert s == pytest.approx(0.5)
        assert not s > HabitWeights().delta

    @given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
    def test_identity_squash_is_dot_product(self, f, c, s):
        w = HabitWeights()
        expected = w.w_f * f + w.w_c * c + w.w_s * s
        assert habit_score(stats(f, c, s), w) == pytest.approx(expected)

    @given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
    def test_score_stays_in_unit_interval(self, f, c, s):
        for squash in ("identity", "sigmoid"):
            w = HabitWeights(squash=squash)
            assert -1e-12 <= habit_score(stats(f, c, s), w) <= 1 + 1e-12

    def test_sigmoid_squash_is_monotone_and_bounded(self):
        w = HabitWeights(squash="sigmoid")
        values = [habit_score(stats(x, x, x), w) for x in np.linspace(0, 1, 11)]
        assert values == sorted(values)
        assert values[0] == pytest.approx(0.0, abs=1e-12)
        assert values[-1] == pytest.approx(1.0, abs=1e-12)

    def test_weight_sum_violation(self):
        with pytest.raises(ConfigurationError):
            HabitWeights(w_f=0.5, w_c=0.3, w_s=0.3)
        with pytest.raises(ConfigurationError):
            HabitWeights(w_f=-0.1, w_c=0.6, w_s=0.5)

    def test_components_must_be_clamped(self):
        with pytest.raises(ValueError):
            stats(1.2, 0.5, 0.5)


class TestDetect:
    def test_perfectly_regular_class_scores_one(self):
        log = TraceLog()
        for i in range(10):
            log.append(trace("only", context=(1.0, 0.0)), at=float(i))
        flagged = detect_candidates(log)
        assert flagged == [("only", pytest.approx(1.0))]

    def test_orthogonal_contexts_not_flagged(self):
        # Frequency and periodicity are perfect but contexts are mutually
        # orthogonal one-hot vectors: 0.4 + 0.3 + 0 = 0.7 < 0.75.
        log = TraceLog()
        for i in range(10):
            onehot = tuple(1.0 if j == i else 0.0 for j in range(10))
            log.append(trace("only", context=onehot), at=float(i))
        st_ = class_stats(log.window)["only"]
        assert st_.similarity == pytest.approx(0.0)
        assert habit_score(st_) == pytest.approx(0.7)
        assert detect_candidates(log) == []

    def test_exact_threshold_not_flagged(self):
        # f=0.6, CoV=0.2, mean cosine 0.9 gives exactly the default delta.
        log = TraceLog()
        v3 = (0.85, math.sqrt(1 - 0.85**2))
        log.append(trace("x", context=(1.0, 0.0)), at=0.0)
        log.append(trace("x", context=(1.0, 0.0)), at=0.8)
        log.append(trace("x", context=v3), at=2.0)
        log.append(trace("other", context=(1.0, 0.0)), at=3.0)
        log.append(trace("other", context=(1.0, 0.0)), at=4.0)
        st_ = class_stats(log.window)["x"]
        assert st_.frequency == pytest.approx(0.6)
        assert st_.consistency == pytest.approx(0.8)
        assert st_.similarity == pytest.approx(0.9)
        score = habit_score(st_)
        assert score == pytest.approx(0.75)
        assert "x" not in dict(detect_candidates(log))

    def test_promotion_is_strict_at_delta(self):
        log = TraceLog()
        for i in range(4):
            log.append(trace("k"), at=float(i))
        score = dict(detect_candidates(log, HabitWeights(delta=0.0)))["k"]
        at_delta = HabitWeights(delta=score)
        assert "k" not in dict(detect_candidates(log, at_delta))

    def test_single_occurrence_has_zero_consistency(self):
        log = TraceLog()
        log.append(trace("solo"), at=0.0)
        log.append(trace("busy"), at=1.0)
        log.append(trace("busy"), at=2.0)
        st_ = class_stats(log.window)["solo"]
        assert st_.consistency == 0.0
        assert st_.similarity == 0.0

    def test_empty_window_rejected(self):
        with pytest.raises(ValueError):
            class_stats([])

    def test_sliding_window_evicts_oldest(self):
        log = TraceLog(maxlen=3)
        for i in range(5):
            log.append(trace(f"c{i}"), at=float(i))
        assert len(log) == 3
        assert [t.class_key for _, t in log.window] == ["c2", "c3", "c4"]

    def test_zero_vector_context_counts_as_dissimilar(self):
        log = TraceLog()
        log.append(trace("z", context=(0.0, 0.0)), at=0.0)
        log.append(trace("z", context=(0.0, 0.0)), at=1.0)
        assert class_stats(log.window)["z"].similarity == 0.0
