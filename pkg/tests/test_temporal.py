import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_temporal_instance
from hsgkit.errors import PreconditionError
from hsgkit.grid import Axis, build_grid, grid_to_body
from hsgkit.canon import canonical_json
from hsgkit.temporal import (
    DepGraph,
    TimeBinding,
    check_time_monotonicity,
    enforce_no_future,
    evaluate_at_time,
    future_violations,
)

TB = TimeBinding("time")


def _line(times, delta=None):
    axis = Axis("time", tuple(range(max(times) + 1)))
    return build_grid([axis], [(f"t{i}", (t,)) for i, t in enumerate(times)], delta)


def test_future_edge_reported():
    g = build_grid([Axis("time", (0, 1, 2))], [("x", (1,)), ("y", (2,))])
    assert future_violations(g, DepGraph((("x", "y"),)), TB) == [("x", "y")]


def test_past_edges_and_self_edges_are_fine():
    g = build_grid([Axis("time", (0, 1, 2))], [("x", (2,)), ("y", (1,))])
    assert future_violations(g, DepGraph((("x", "y"), ("y", "y"), ("x", "x"))), TB) == []


def test_apply_flips_only_violator():
    g = build_grid([Axis("time", (0, 1, 2))], [("x", (1,)), ("y", (2,)), ("z", (0,))])
    res = enforce_no_future(g, DepGraph((("x", "y"),)), TB, "apply")
    assert res.flipped == ("x",)
    assert res.grid.delta == {"x": False, "y": True, "z": True}
    again = enforce_no_future(res.grid, DepGraph((("x", "y"),)), TB, "apply")
    assert again.flipped == () and again.grid == res.grid


def test_report_mode_leaves_grid():
    g = build_grid([Axis("time", (0, 1))], [("x", (0,)), ("y", (1,))])
    res = enforce_no_future(g, DepGraph((("x", "y"),)), TB, "report")
    assert res.grid == g and not res.report.ok


def test_transitive_chain():
    g = build_grid([Axis("time", (0, 1, 2))], [("z", (1,)), ("x", (1,)), ("y", (2,))])
    d = DepGraph((("z", "x"), ("x", "y")))
    res = enforce_no_future(g, d, TB, "apply_transitive")
    assert set(res.flipped) == {"x", "z"}
    assert res.grid.delta["y"]


def test_bad_mode_and_axis():
    g = _line([0])
    with pytest.raises(PreconditionError):
        enforce_no_future(g, DepGraph(), TB, "nope")
    with pytest.raises(PreconditionError):
        future_violations(g, DepGraph(), TimeBinding("clock"))


def _transitive_oracle(g, d):
    """Fixed-point iteration from scratch: ⊥ spreads to dependents until stable."""
    bad = {x for x, y in d.edges if g.coords[(y, "time")] > g.coords[(x, "time")]}
    changed = True
    while changed:
        changed = False
        for x, y in d.edges:
            if y in bad and x not in bad:
                bad.add(x)
                changed = True
    return {t: g.delta[t] and t not in bad for t in g.tokens}


@pytest.mark.parametrize("seed", range(40))
def test_apply_transitive_matches_oracle(seed):
    g, d = random_temporal_instance(random.Random(seed))
    assert enforce_no_future(g, d, TB, "apply_transitive").grid.delta == _transitive_oracle(g, d)


@pytest.mark.parametrize("seed", range(40))
@pytest.mark.parametrize("mode", ["apply", "apply_transitive"])
def test_enforcement_invariant_and_idempotent(seed, mode):
    g, d = random_temporal_instance(random.Random(seed))
    once = enforce_no_future(g, d, TB, mode).grid
    assert not [(x, y) for x, y in future_violations(once, d, TB) if once.delta[x]]
    twice = enforce_no_future(once, d, TB, mode)
    assert twice.flipped == ()
    assert canonical_json(grid_to_body(twice.grid)) == canonical_json(grid_to_body(once))


def test_evaluate_at_time():
    g = build_grid([Axis("time", (0, 1, 2, 3))], [("x", (2,)), ("y", (0,))])
    assert evaluate_at_time(g, DepGraph(), TB, 2, "x") == {"x"}
    assert evaluate_at_time(g, DepGraph(), TB, 1, "x") == frozenset()
    assert evaluate_at_time(g, DepGraph((("x", "y"),)), TB, 3, "x") == {"x", "y"}


def test_monotonicity_vacuous_for_undefined():
    g = build_grid([Axis("time", (0, 1))], [("x", (0,))], {"x": "⊥"})
    assert all(not evaluate_at_time(g, DepGraph(), TB, t, "x") for t in (0, 1))
    assert check_time_monotonicity(g, DepGraph(), TB, "x")


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_monotonicity_on_random_graphs(seed):
    g, d = random_temporal_instance(random.Random(seed))
    for x in g.tokens:
        assert check_time_monotonicity(g, d, TB, x)
        # recompute from scratch per t: once nonempty, stays nonempty
        seen = False
        for t in g.axis("time").indices:
            now = bool(evaluate_at_time(g, d, TB, t, x))
            assert now or not seen
            seen = seen or now
