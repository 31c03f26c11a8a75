import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsgkit.adjunction import c0, c1
from hsgkit.category import chain, constant_functor, discrete_category, identity_functor, terminal_category
from hsgkit.errors import PreconditionError
from hsgkit.fixtures import (
    _parallel,
    bc_disjoint_square,
    bc_product_square,
    kan_fixtures,
    set_functor,
    thin_functor,
)
from hsgkit.kan import (
    SetValuedFunctor,
    beck_chevalley_check,
    comma_category,
    delete_element,
    duplicate_element,
    finset_colimit,
    finset_limit,
    kan_extend,
    validate_set_functor,
    verify_kan_universal,
)

FIXTURES = {fx.name: fx for fx in kan_fixtures()}


def test_comma_over_identity_is_slice():
    c = chain(["a", "b", "c"])
    cc = comma_category(identity_functor(c), "b")
    # objects of c/b are the arrows into b
    assert sorted(p[0] for p in cc.pairs.values()) == ["a", "b"]


def test_comma_along_tr():
    tr = thin_functor(c0(), c1(), {"Undef": "Empty", "Define": "NonEmpty"})
    cc = comma_category(tr, "NonEmpty")
    assert sorted(p[0] for p in cc.pairs.values()) == ["Define", "Undef"]


def test_comma_of_constant_without_arrows_is_empty():
    k = constant_functor(c0(), c1(), "NonEmpty")
    assert comma_category(k, "Empty").category.objects == ()


def test_colimit_of_discrete_is_coproduct(backend):
    ab = discrete_category(["a", "b"])
    col = finset_colimit(set_functor(ab, {"a": ("a",), "b": ("b",)}))
    assert len(col.elements) == 2


def test_colimit_identifies_along_arrow(backend):
    ch = chain(["0", "1"])
    col = finset_colimit(set_functor(ch, {"0": (0, 1), "1": ("u",)}, {"0→1": {0: "u", 1: "u"}}))
    assert len(col.elements) == 1


def test_colimit_and_limit_of_empty_source(backend):
    empty = discrete_category([])
    f = SetValuedFunctor(empty, {}, {})
    assert finset_colimit(f).elements == ()
    assert finset_limit(f).elements == ((),)


def test_limit_of_discrete_is_product():
    ab = discrete_category(["a", "b"])
    assert len(finset_limit(set_functor(ab, {"a": (0, 1), "b": (0, 1, 2)})).elements) == 6


def test_equalizer():
    par = _parallel()
    f = SetValuedFunctor(
        par,
        {"a": (0, 1), "b": ("x", "y")},
        {"id_a": {0: 0, 1: 1}, "id_b": {"x": "x", "y": "y"}, "f": {0: "x", 1: "y"}, "g": {0: "x", 1: "x"}},
    )
    assert len(finset_limit(f).elements) == 1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=4), st.sampled_from(["left", "right"]))
def test_collapse_of_discrete_is_sum_or_product(sizes, side):
    names = [f"o{i}" for i in range(len(sizes))]
    c = discrete_category(names)
    f = set_functor(c, {n: tuple(range(s)) for n, s in zip(names, sizes)})
    ext = kan_extend(side, f, constant_functor(c, terminal_category(), "*"))
    expected = sum(sizes) if side == "left" else math.prod(sizes)
    assert len(ext.functor.value["*"]) == expected


@pytest.mark.parametrize("side", ["left", "right"])
def test_identity_extension_is_pointwise_same(side):
    fx = FIXTURES["identity-chain"]
    ext = kan_extend(side, fx.f, fx.k)
    assert ext.functor.cardinalities() == fx.f.cardinalities()


@pytest.mark.parametrize("name", sorted(FIXTURES))
@pytest.mark.parametrize("side", ["left", "right"])
def test_fixture_is_universal_and_perturbations_rejected(name, side, backend):
    fx = FIXTURES[name]
    assert validate_set_functor(fx.f).ok
    ext = kan_extend(side, fx.f, fx.k)
    assert validate_set_functor(ext.functor).ok
    assert verify_kan_universal(ext, fx.f, fx.k, side, [ext]).ok
    for x in fx.k.target.objects:
        for v in ext.functor.value[x]:
            deleted = delete_element(ext.functor, x, v)
            duplicated = duplicate_element(ext.functor, x, v)
            assert not verify_kan_universal(deleted, fx.f, fx.k, side, [ext, deleted]).ok
            assert not verify_kan_universal(duplicated, fx.f, fx.k, side, [ext, duplicated]).ok


def test_beck_chevalley_identity_square():
    c = chain(["a", "b"])
    i = identity_functor(c)
    f = set_functor(c, {"a": (0,), "b": (0, 1)}, {"a→b": {0: 1}})
    assert beck_chevalley_check(i, i, i, i, f).ok


def test_beck_chevalley_product_square():
    assert beck_chevalley_check(*bc_product_square()).ok


def test_beck_chevalley_disjoint_square_has_pointwise_witness():
    r = beck_chevalley_check(*bc_disjoint_square())
    assert not r.ok
    assert r.locations("base-change") == [("*",)]
    assert r.data["sizes"]["*"] == (2, 1)


def test_beck_chevalley_requires_commuting_square():
    p, q, k, h, f = bc_product_square()
    with pytest.raises(PreconditionError):
        beck_chevalley_check(q, p, k, h, f)
