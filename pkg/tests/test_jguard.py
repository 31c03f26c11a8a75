import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsgkit.adjunction import c0, c1
from hsgkit.category import validate_functor
from hsgkit.errors import GuardTypeError, MalformedInputError
from hsgkit.fixtures import j_fixtures
from hsgkit.grid import Axis, build_grid
from hsgkit.jguard import (
    ExternalCriterion,
    check_quasi_adjunction,
    guard_eval,
    kappa_transform,
    parse_guard,
    preset_guard,
    tr_functor,
)
from hsgkit.temporal import DepGraph

AX = [Axis("time", tuple(range(6)))]


def _grid(**delta):
    return build_grid(AX, [(x, (i,)) for i, x in enumerate(delta)], delta)


def test_delta_guard():
    g = _grid(x="⊤", y="⊥")
    j = ExternalCriterion("(delta_is ⊤)")
    assert guard_eval(j, g, "x") == {"•"}
    assert guard_eval(j, g, "y") == frozenset()


def test_coord_guard():
    g = build_grid(AX, [("x", (5,))])
    assert guard_eval(ExternalCriterion("(coord_cmp time ≤ 3)"), g, "x") == frozenset()


@pytest.mark.parametrize(
    "text",
    ["", "(", "(and)", "(not true false)", "(delta_is)", "(frob 1)", "x", "(delta_is ⊤))", "(coord_cmp (time) < 1)"],
)
def test_parse_errors(text):
    with pytest.raises(MalformedInputError):
        parse_guard(text)


def test_type_errors():
    g = _grid(x="⊤")
    for text in ["(coord_cmp mass < 1)", "(coord_cmp time < one)", "(delta_is maybe)", "(reachable_within 1)"]:
        with pytest.raises(GuardTypeError):
            guard_eval(ExternalCriterion(text), g, "x")


_atoms = st.sampled_from(["true", "false", "(delta_is ⊤)", "(delta_is ⊥)", "(coord_cmp time < 2)"])
_exprs = st.recursive(
    _atoms,
    lambda inner: st.one_of(
        st.builds(lambda a: f"(not {a})", inner),
        st.builds(lambda xs: "(and " + " ".join(xs) + ")", st.lists(inner, min_size=1, max_size=3)),
        st.builds(lambda xs: "(or " + " ".join(xs) + ")", st.lists(inner, min_size=1, max_size=3)),
    ),
    max_leaves=8,
)


@settings(max_examples=80, deadline=None)
@given(_exprs)
def test_guard_print_parse_roundtrip(text):
    e = parse_guard(text)
    assert parse_guard(str(e)) == e


def test_tr_is_a_functor():
    tr = tr_functor()
    assert tr.source == c0() and tr.target == c1()
    assert validate_functor(tr).ok


def test_kappa_identities_under_j0_j1():
    g = _grid(x="⊤", y="⊥")
    k = kappa_transform(ExternalCriterion("(delta_is ⊤)"), g)
    assert k.exists
    assert all(c1().is_identity(m) for m in k.components.values())


def test_kappa_under_j0_only_has_arrow_component():
    g = _grid(x="⊤", y="⊤", z="⊥")
    k = kappa_transform(ExternalCriterion({"x": True}), g)
    assert k.exists
    assert c1().morphisms[k.components["y"]] == ("Empty", "NonEmpty")


def test_kappa_missing_names_token():
    g = _grid(x="⊤", y="⊥")
    k = kappa_transform(ExternalCriterion("true"), g)
    assert not k.exists and k.witness == "y"


def test_quasi_adjunction_modes():
    g = _grid(x="⊤", y="⊤", z="⊥")
    iso = check_quasi_adjunction(ExternalCriterion("(delta_is ⊤)"), g)
    assert iso.mode == "isomorphism"
    assert all(left == right for left, right in iso.table.values())
    imp = check_quasi_adjunction(ExternalCriterion({"x": True}), g)
    assert imp.mode == "implication"
    # at the defined token with empty carrier: the emptiness side is inhabited at Empty, the definability side is not
    assert imp.table[("y", "Empty")] == (1, 0)
    fail = check_quasi_adjunction(ExternalCriterion("true"), g)
    assert fail.mode == "fails" and fail.witness == "z"


@pytest.mark.parametrize("fx", j_fixtures(), ids=lambda fx: fx.name)
def test_fixture_classification(fx):
    qa = check_quasi_adjunction(fx.criterion, fx.grid)
    assert qa.mode == fx.expected
    if fx.expected == "fails":
        assert qa.witness is not None and not fx.grid.delta[qa.witness]


def test_fixture_counts():
    modes = [fx.expected for fx in j_fixtures()]
    assert len(modes) == 30
    assert {m: modes.count(m) for m in set(modes)} == {"isomorphism": 10, "implication": 10, "fails": 10}


def test_presets():
    g = _grid(x="⊤", y="⊤")
    obs = preset_guard("observation", {"observed": ["x"]})
    assert guard_eval(obs, g, "x") and not guard_eval(obs, g, "y")
    auth = preset_guard("authorization", {"granted": []})
    assert not any(guard_eval(auth, g, t) for t in g.tokens)
    g2 = build_grid(AX, [("a", (0,)), ("b", (1,))])
    reach = preset_guard("reachability", {"t": 0, "dep": DepGraph((("a", "b"),))})
    assert guard_eval(reach, g2, "a") == frozenset()
