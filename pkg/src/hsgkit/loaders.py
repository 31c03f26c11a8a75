"""Turn validated document bodies into the objects the checkers work on."""
from __future__ import annotations

from typing import Mapping

from .adjunction import Adjunction, builtin_adjunction
from .category import (
    FinCategory,
    FinFunctor,
    FinNatTrans,
    chain,
    compose_functors,
    discrete_category,
    identity_functor,
    make_category,
)
from .errors import MalformedInputError
from .grid import Grid, grid_from_body
from .jguard import ExternalCriterion
from .kan import SetValuedFunctor
from .rings import FinRing, from_tables, zmod
from .temporal import DepGraph, TimeBinding, dep_from_body


def category_from_body(b: Mapping) -> FinCategory:
    name = b.get("name", "")
    if "chain" in b:
        return chain(list(b["chain"]), name)
    if "discrete" in b:
        return discrete_category(list(b["discrete"]), name)
    compose = {}
    for g, f, h in b["compose"]:
        if (g, f) in compose and compose[(g, f)] != h:
            raise MalformedInputError(f"composite {g}∘{f} given twice with different results")
        compose[(g, f)] = h
    return make_category(
        b["objects"],
        {m: tuple(st) for m, st in b["morphisms"].items()},
        dict(b["identity"]),
        compose,
        dict(b["grade"]) if "grade" in b else None,
        name,
    )


def functor_between(src: FinCategory, tgt: FinCategory, b: Mapping, name: str = "") -> FinFunctor:
    obj, mor = dict(b["objects"]), dict(b["morphisms"])
    # identities may be left implicit
    for x in src.objects:
        if src.identity[x] not in mor and x in obj and obj[x] in tgt.identity:
            mor[src.identity[x]] = tgt.identity[obj[x]]
    return FinFunctor(src, tgt, obj, mor, name)


def functor_from_body(b: Mapping) -> FinFunctor:
    return functor_between(category_from_body(b["source"]), category_from_body(b["target"]), b, b.get("name", ""))


def adjunction_from_body(b: Mapping, cap=None) -> Adjunction:
    kw = {} if cap is None else {"cap": cap}
    if "builtin" in b:
        name = b["builtin"]
        if name == "definability":
            if "grid" not in b:
                raise MalformedInputError("definability adjunction needs a grid")
            return builtin_adjunction(name, grid_from_body(b["grid"]), **kw)
        return builtin_adjunction(name, b.get("n"), **kw)
    lower, upper = category_from_body(b["lower"]), category_from_body(b["upper"])
    f = functor_between(lower, upper, b["left"], "F")
    g = functor_between(upper, lower, b["right"], "G")
    unit = FinNatTrans(identity_functor(lower), compose_functors(g, f), dict(b["unit"]), "η")
    counit = FinNatTrans(compose_functors(f, g), identity_functor(upper), dict(b["counit"]), "ε")
    return Adjunction(f, g, unit, counit, b.get("name", ""))


def diagram_from_body(b: Mapping) -> tuple[SetValuedFunctor, FinFunctor, str]:
    src, tgt = category_from_body(b["source"]), category_from_body(b["target"])
    k = functor_between(src, tgt, b["k"], "K")
    values = {x: tuple(vs) for x, vs in b["values"].items()}
    actions = {m: dict(fn) for m, fn in b.get("actions", {}).items()}
    for x in src.objects:
        i = src.identity[x]
        if i not in actions and x in values:
            actions[i] = {v: v for v in values[x]}
    return SetValuedFunctor(src, values, actions, b.get("name", "F")), k, b.get("side", "both")


def temporal_from_body(b: Mapping) -> tuple[DepGraph, TimeBinding]:
    return dep_from_body(b.get("dep", [])), TimeBinding(b.get("time", "time"))


def criterion_from_body(b: Mapping) -> tuple[Grid, ExternalCriterion]:
    g = grid_from_body(b["grid"])
    dep = time = None
    if "dep" in b or "time" in b:
        dep, time = temporal_from_body(b)
    return g, ExternalCriterion(b["guard"], b.get("carrier", {}), dep, time)


def ring_from_body(b: Mapping) -> FinRing:
    if "zmod" in b:
        return zmod(int(b["zmod"]))
    return from_tables(b["elements"], b["add"], b["mul"], b["zero"], b["one"], b.get("name", ""))
