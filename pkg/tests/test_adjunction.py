import itertools
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsgkit.adjunction import (
    DEFINE,
    EMPTY,
    NONEMPTY,
    UNDEF,
    ListMonad,
    builtin_adjunction,
    c1,
    check_idempotent,
    check_list_monad_laws,
    check_monad_laws,
    finset_category,
    function_of,
    identity_adjunction,
    monad_of,
    morphism_of,
    poset_category,
    underlying_size,
    verify_adjunction,
)
from hsgkit.category import FinNatTrans, validate_category
from hsgkit.errors import CapacityError
from hsgkit.grid import Axis, build_grid
from hsgkit.suites import WIDE_CAP, definability_grid


def _grid(deltas):
    axis = Axis("time", tuple(range(len(deltas))))
    return build_grid([axis], [(f"x{i}", (i,)) for i in range(len(deltas))], {f"x{i}": d for i, d in enumerate(deltas)})


def test_definability_classes():
    adj = builtin_adjunction("definability", _grid(["⊥", "⊤", "⊤"]))
    assert [adj.left.ob(x) for x in ("x0", "x1", "x2")] == [UNDEF, DEFINE, DEFINE]


def test_emptiness_right_adjoint():
    adj = builtin_adjunction("emptiness", 3)
    assert adj.right.ob(EMPTY) == "0"
    assert adj.right.ob(NONEMPTY) == "1"


def test_discrete_order_is_reflexive_only():
    adj = builtin_adjunction("discrete_order", 2)
    p = adj.left.ob("2")
    pos = adj.upper
    assert underlying_size(pos, p) == 2
    # only monotone self maps of a discrete 2-set: all four functions
    assert len(pos.hom(p, p)) == 4


@pytest.mark.parametrize("name", ["definability", "emptiness", "discrete_order"])
def test_builtins_verify(name):
    params = {"definability": definability_grid(), "emptiness": 3, "discrete_order": 3}[name]
    adj = builtin_adjunction(name, params, WIDE_CAP)
    assert validate_category(adj.lower).ok and validate_category(adj.upper).ok
    assert verify_adjunction(adj, WIDE_CAP).ok


def _hom_count_oracle(adj):
    """Count both sides of the hom bijection directly from the categories."""
    out = {}
    for x in adj.lower.objects:
        for a in adj.upper.objects:
            out[(x, a)] = (len(adj.upper.hom(adj.left.ob(x), a)), len(adj.lower.hom(x, adj.right.ob(a))))
    return out


@pytest.mark.parametrize("n", [1, 2, 3])
def test_emptiness_hom_counts_match_oracle(n):
    adj = builtin_adjunction("emptiness", n)
    counts = verify_adjunction(adj).data["hom_counts"]
    oracle = _hom_count_oracle(adj)
    assert counts == oracle
    assert all(left == right for left, right in oracle.values())


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from(["⊥", "⊤"]), min_size=1, max_size=5))
def test_definability_on_random_grids(deltas):
    adj = builtin_adjunction("definability", _grid(deltas))
    assert verify_adjunction(adj).ok


def test_swapped_unit_breaks_triangles():
    s = finset_category(2)
    adj = identity_adjunction(s)
    comps = dict(adj.unit.components)
    comps["2"] = morphism_of(s, "2", "2", (1, 0))
    bad = replace(adj, unit=FinNatTrans(adj.unit.source, adj.unit.target, comps, "η"))
    codes = verify_adjunction(bad).codes()
    assert {"triangle-left", "triangle-right"} <= codes


def test_cap_is_enforced():
    with pytest.raises(CapacityError):
        builtin_adjunction("discrete_order", 3)


def test_finset_and_poset_counts():
    # |Hom(i, j)| = j^i
    s = finset_category(3)
    for i, j in itertools.product(range(4), repeat=2):
        assert len(s.hom(str(i), str(j))) == j**i
    # posets up to iso on 0..2 points: 1, 1, 2 (antichain, chain), plus 5 on 3
    p = poset_category(2)
    assert len(p.objects) == 1 + 1 + 2


def test_morphism_roundtrip():
    s = finset_category(2)
    m = morphism_of(s, "2", "1", (0, 0))
    assert function_of(s, m) == (0, 0)


def test_t1_values():
    m = monad_of(builtin_adjunction("emptiness", 3))
    assert m.endofunctor.ob("0") == "0"
    assert {m.endofunctor.ob(x) for x in ("1", "2", "3")} == {"1"}
    assert check_monad_laws(m).ok


def test_t0_collapses_to_representatives():
    g = definability_grid()
    m = monad_of(builtin_adjunction("definability", g))
    bottoms = {m.endofunctor.ob(x) for x in g.tokens if not g.delta[x]}
    tops = {m.endofunctor.ob(x) for x in g.tokens if g.delta[x]}
    assert len(bottoms) == len(tops) == 1
    assert check_monad_laws(m).ok


def test_identity_monad():
    c = c1()
    m = monad_of(identity_adjunction(c))
    assert all(m.endofunctor.ob(x) == x for x in c.objects)
    assert check_idempotent(m)


def test_reflective_monads_are_idempotent():
    assert check_idempotent(monad_of(builtin_adjunction("definability", definability_grid())))
    assert check_idempotent(monad_of(builtin_adjunction("emptiness", 3)))


def test_list_monad_is_not_idempotent():
    lm = ListMonad()
    assert check_list_monad_laws(lm).ok
    res = check_idempotent(lm)
    assert not res
    a, b = res.witness
    assert a != b and lm.multiply(a) == lm.multiply(b)
