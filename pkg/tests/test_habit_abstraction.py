import pytest

from trispirit.habit import (
    AbstractionError,
    Action,
    ExecutionTrace,
    abstract_traces,
    dtw_align,
    dtw_distance,
)


def trace(names_params, key="k", context=(0.0,)):
    actions = tuple(
        Action(n, p) if isinstance(p, dict) else Action(n)
        for n, p in names_params
    )
    return ExecutionTrace(key, actions, context)


def simple(*names, key="k"):
    return trace([(n, None) for n in names], key=key)


class TestDtw:
    def test_equal_length_identical_is_diagonal(self):
        # Oracle for equal-length traces: positional comparison.
        path = dtw_align(list("abcd"), list("abcd"))
        assert path == [(i, i) for i in range(4)]
        assert dtw_distance(list("abcd"), list("abcd")) == 0

    def test_single_substitution(self):
        assert dtw_distance(list("abc"), list("axc")) == 1

    def test_hand_computed_deletion(self):
        # Aligning [a, c] against [a, b, c]: b has no partner, cost 1,
        # path (0,0) (1,0) (2,1) under diagonal-preferring tie-break.
        path = dtw_align(["a", "b", "c"], ["a", "c"])
        assert path == [(0, 0), (1, 0), (2, 1)]
        assert dtw_distance(["a", "b", "c"], ["a", "c"]) == 1

    def test_path_covers_both_sequences(self):
        path = dtw_align(list("abcab"), list("bca"))
        assert {i for i, _ in path} == set(range(5))
        assert {j for _, j in path} == set(range(3))


class TestAbstraction:
    def test_identical_traces_idempotent(self):
        t = trace([("open", {"x": 1}), ("send", {})])
        canonical = abstract_traces([t, t])
        assert [tpl.name for tpl in canonical.templates] == ["open", "send"]
        assert canonical.slot_count == 0
        assert dict(canonical.templates[0].literals) == {"x": 1}

    def test_differing_parameter_becomes_slot(self):
        a = trace([("open", {"x": 1}), ("send", None)])
        b = trace([("open", {"x": 2}), ("send", None)])
        canonical = abstract_traces([a, b])
        assert [tpl.name for tpl in canonical.templates] == ["open", "send"]
        open_tpl = canonical.templates[0]
        assert dict(open_tpl.slots) == {"x": 0}
        assert dict(open_tpl.literals) == {}

    def test_non_universal_action_dropped(self):
        canonical = abstract_traces([simple("a", "b", "c"), simple("a", "c")])
        assert [tpl.name for tpl in canonical.templates] == ["a", "c"]

    def test_mixed_literals_and_slots(self):
        a = trace([("fetch", {"host": "h", "port": 1})])
        b = trace([("fetch", {"host": "h", "port": 2})])
        canonical = abstract_traces([a, b])
        tpl = canonical.templates[0]
        assert dict(tpl.literals) == {"host": "h"}
        assert dict(tpl.slots) == {"port": 0}

    def test_slot_indices_follow_discovery_order(self):
        a = trace([("f", {"p": 1}), ("g", {"q": 10, "r": 5})])
        b = trace([("f", {"p": 2}), ("g", {"q": 20, "r": 5})])
        canonical = abstract_traces([a, b])
        assert dict(canonical.templates[0].slots) == {"p": 0}
        assert dict(canonical.templates[1].slots) == {"q": 1}
        assert dict(canonical.templates[1].literals) == {"r": 5}

    def test_no_common_action_is_an_error(self):
        with pytest.raises(AbstractionError):
            abstract_traces([simple("a", "b"), simple("x", "y")])

    def test_fewer_than_two_traces_rejected(self):
        with pytest.raises(ValueError):
            abstract_traces([simple("a")])

    def test_mixed_classes_rejected(self):
        with pytest.raises(ValueError):
            abstract_traces([simple("a", key="k1"), simple("a", key="k2")])

    def test_medoid_is_alignment_reference(self):
        # Two short traces agree, one long outlier differs; the canonical
        # trace follows the majority shape.
        traces = [
            simple("a", "b"),
            simple("a", "b"),
            simple("a", "x", "y", "z", "b"),
        ]
        canonical = abstract_traces(traces)
        assert [tpl.name for tpl in canonical.templates] == ["a", "b"]

    def test_missing_parameter_key_becomes_slot(self):
        a = trace([("open", {"x": 1})])
        b = trace([("open", {})])
        canonical = abstract_traces([a, b])
        tpl = canonical.templates[0]
        assert dict(tpl.slots) == {"x": 0}
        assert dict(tpl.literals) == {}


def test_empty_trace_rejected():
    with pytest.raises(ValueError):
        ExecutionTrace("k", (), (0.0,))
