import itertools
import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_perturbation, random_world_body
from hsgkit.errors import MalformedInputError, SimulationInvariantError
from hsgkit.neuro.neuron import (
    NF0Body,
    NeuronFunction,
    Point3,
    check_body_adjunction,
    eval_neuron,
    free_body,
    underlying,
)
from hsgkit.neuro.shapes import (
    check_sk_cosk_adjunction,
    count_simplicial_maps,
    enumerate_shapes,
    shape,
    shape_truncate,
)
from hsgkit.neuro.world import (
    LearningFiber,
    Write,
    activity_density,
    causality_probe,
    empty_world,
    hebbian_update,
    run,
    self_loop_body,
    step_world,
    summary,
    trace_bytes,
    world_from_body,
)

GOLDEN = Path(__file__).parent / "golden"


# --- neurons -----------------------------------------------------------------


def test_zero_neuron_outputs_baseline():
    n = NeuronFunction(W=((0.0,),), c=(0.0,), theta=0.3, baseline=0.0, delay=2)
    out, at, fired = eval_neuron(n, {"potential": 0.9}, 4)
    assert out == {"spike": 0.0} and at == 6 and not fired


def test_phi_saturates():
    n = NeuronFunction(W=((5.0, 5.0), (-5.0, 0.0)), c=(0.0, 0.0), w=(1.0, 1.0), input_channels=("a", "b"))
    assert n.phi([10.0, 10.0]) == (1.0, 0.0)


def test_threshold_arithmetic():
    n = NeuronFunction(delay=2)
    out, at, fired = eval_neuron(n, {"potential": 0.6}, 3)
    assert fired and out == {"spike": 1.0} and at == 5


def test_missing_input_channel():
    with pytest.raises(MalformedInputError):
        eval_neuron(NeuronFunction(), {}, 0)


@settings(max_examples=60, deadline=None)
@given(st.floats(-10, 10), st.floats(-2, 2), st.floats(-1, 1))
def test_phi_in_unit_interval(x, wv, c):
    n = NeuronFunction(W=((wv,),), c=(c,))
    (p,) = n.phi([x])
    assert 0.0 <= p <= 1.0


def _pts(k, prefix="p"):
    return [Point3(f"{prefix}{i}", float(i)) for i in range(k)]


def test_free_body():
    b = free_body(_pts(3))
    assert len(b.neurons) == 3 and all(n == NeuronFunction() for n in b.neurons.values())
    assert underlying(free_body(_pts(2))) == tuple(_pts(2))
    assert free_body([]).points == ()


def test_body_adjunction_counts():
    r = check_body_adjunction([_pts(0), _pts(1), _pts(2)], [free_body(_pts(2, "b"))])
    assert r.ok
    counts = r.data["counts"]
    assert counts[(0, 0)] == (1, 1)
    assert counts[(1, 0)] == (2, 2)
    assert counts[(2, 0)] == (4, 4)


def test_body_needs_decorations():
    with pytest.raises(MalformedInputError):
        NF0Body(tuple(_pts(1)), {}, {})


# --- shapes -------------------------------------------------------------------


def _maps_oracle(x, y):
    """Count vertex maps sending every simplex of x to a simplex of y."""
    count = 0
    for img in itertools.product(y.vertices, repeat=len(x.vertices)):
        f = dict(zip(x.vertices, img))
        if all(frozenset(f[v] for v in s) in y.simplices for s in x.simplices):
            count += 1
    return count


TETRA = shape("abcd", ["abcd"])
TRI_BOUNDARY = shape("abc", ["ab", "bc", "ac"])
EDGE = shape("uv", ["uv"])
POINT = shape("p")


def test_skeleton_of_tetrahedron():
    assert shape_truncate(TETRA, 1).counts() == (4, 6, 0, 0)
    assert shape_truncate(TETRA, 3) == TETRA


def test_coskeleton_fills_triangle():
    assert shape_truncate(TRI_BOUNDARY, 1, "coskeleton").counts() == (3, 3, 1, 0)


def test_face_closure_enforced():
    with pytest.raises(MalformedInputError):
        from hsgkit.neuro.shapes import SimplicialShape

        SimplicialShape(("a", "b"), frozenset({frozenset("a"), frozenset("ab")}))


def test_sk_cosk_named_cases(backend):
    assert check_sk_cosk_adjunction(EDGE, TRI_BOUNDARY, 1).ok
    r = check_sk_cosk_adjunction(POINT, TRI_BOUNDARY, 1)
    assert r.data["left"] == r.data["right"] == 3
    assert check_sk_cosk_adjunction(shape("abc", ["abc"]), EDGE, 1).ok


def test_shape_classes():
    shapes = enumerate_shapes(4)
    assert len(shapes) == 29
    assert [sum(1 for s in shapes if len(s.vertices) == k) for k in range(5)] == [1, 1, 2, 5, 20]


def test_kernel_matches_oracle(backend):
    shapes = enumerate_shapes(3)
    for x, y in itertools.product(shapes, repeat=2):
        assert count_simplicial_maps(x, y) == _maps_oracle(x, y)


def test_coskeleton_idempotent_inflationary():
    for s in enumerate_shapes(4):
        for n in (1, 2):
            c = shape_truncate(s, n, "coskeleton")
            assert s.simplices <= c.simplices
            assert shape_truncate(c, n, "coskeleton") == c


# --- worlds -------------------------------------------------------------------


def test_self_loop_golden_trace():
    w = run(world_from_body(self_loop_body()), 5)
    assert [w.value("n0", t, "spike") for t in range(5)] == [0.0, 1.0, 0.0, 1.0, 0.0]
    assert [w.value("n0", t, "potential") for t in range(1, 5)] == [0.0, 1.0, 0.0, 1.0]
    assert trace_bytes(w) == (GOLDEN / "self_loop_trace.tsv").read_bytes()


def test_empty_world_advances_clock():
    w = run(empty_world(), 3)
    assert w.clock == 3 and w.events == ()


def _two_writer_world(policy):
    body = {
        "points": [{"id": "a", "neuron": {"theta": 2.0}}],
        "fibers": [
            {"kind": "input", "drive": {"a": [0.3]}},
            {"kind": "input", "drive": {"a": [0.45]}},
        ],
        "policy": policy,
    }
    return world_from_body(body)


def test_sum_policy_is_order_independent():
    w = _two_writer_world("sum")
    forward = step_world(w)
    backward = step_world(w.__class__(**{**w.__dict__, "fibers": tuple(reversed(w.fibers))}))
    assert forward.value("a", 1, "potential") == backward.value("a", 1, "potential") == 0.75


def test_max_and_last_policies():
    assert step_world(_two_writer_world("max")).value("a", 1, "potential") == 0.45
    assert step_world(_two_writer_world("last")).value("a", 1, "potential") == 0.45


def test_clamp_after_reconcile():
    body = {"points": [{"id": "a", "neuron": {"theta": 5.0}}], "fibers": [{"kind": "input", "drive": {"a": [0.8]}}] * 2}
    assert step_world(world_from_body(body)).value("a", 1, "potential") == 1.0


def test_past_write_is_invariant_error():
    with pytest.raises(SimulationInvariantError):
        step_world(world_from_body(self_loop_body()), [Write("n0", 0, "potential", 0.1)])


def _pair(potential, learning=True, weight=0.2):
    body = {
        "points": [
            {"id": "a", "carrier": {"potential": potential[0]}},
            {"id": "b", "carrier": {"potential": potential[1]}},
        ],
        "synapses": [{"pre": "a", "post": "b", "weight": weight}],
        "fibers": [{"kind": "neural"}] + ([{"kind": "learning", "eta": 0.1, "w_max": 1.0}] if learning else []),
    }
    return world_from_body(body)


def test_hebbian_both_fire():
    w = hebbian_update(_pair((0.9, 0.9)))
    assert w.synapses[("a", "b")] == pytest.approx(0.3)


def test_hebbian_one_silent():
    w = hebbian_update(_pair((0.9, 0.1)))
    assert w.synapses[("a", "b")] == 0.2


def test_hebbian_saturates():
    w = _pair((0.9, 0.9))
    for _ in range(20):
        w = hebbian_update(w)
    assert w.synapses[("a", "b")] == 1.0


def test_activity_density_silent_and_always_on():
    silent = run(world_from_body({"points": [{"id": "a"}]}), 10)
    assert activity_density(silent)["counts"] == {"a": 0}
    body = {"points": [{"id": "a", "neuron": {"theta": 0.0}}], "fibers": [{"kind": "neural"}]}
    busy = run(world_from_body(body), 10)
    assert activity_density(busy)["density"]["a"] == 1.0


def test_learning_doubles_events_at_cofiring_point():
    body = {
        "points": [{"id": "a", "neuron": {"theta": 0.0}}, {"id": "b", "neuron": {"theta": 0.0}}],
        "synapses": [{"pre": "a", "post": "b", "weight": 0.5}],
        "fibers": [{"kind": "neural"}],
    }
    without = activity_density(run(world_from_body(body), 10))["counts"]
    body["fibers"].append({"kind": "learning"})
    with_learning = activity_density(run(world_from_body(body), 10))["counts"]
    assert with_learning["b"] == 2 * without["b"]
    assert with_learning["a"] == without["a"]


@pytest.mark.parametrize("seed", range(15))
def test_random_worlds_respect_causality(seed):
    rng = random.Random(seed)
    body = random_world_body(rng)
    w = world_from_body(body)
    for _ in range(5):
        res = causality_probe(w, random_perturbation(rng, body, 12), 12)
        assert res["ok"]
        if res["divergence"] is not None:
            assert res["divergence"]["tick"] >= res["bound"]


@pytest.mark.parametrize("seed", range(10))
def test_runs_are_deterministic(seed):
    body = random_world_body(random.Random(seed))
    a = summary(run(world_from_body(body), 20))
    b = summary(run(world_from_body(body), 20))
    assert a == b


def test_seed_changes_noise_only_when_present():
    body = {"points": [{"id": "a", "neuron": {"theta": 5.0}}], "fibers": [{"kind": "input", "noise": 0.1}]}
    t1 = trace_bytes(run(world_from_body(body, seed=1), 5))
    t2 = trace_bytes(run(world_from_body(body, seed=2), 5))
    assert t1 != t2
    quiet = {"points": [{"id": "a"}]}
    assert trace_bytes(run(world_from_body(quiet, seed=1), 5)) == trace_bytes(run(world_from_body(quiet, seed=2), 5))


def test_learning_fiber_needs_no_extra_state():
    assert LearningFiber().delay(empty_world()) == 1
