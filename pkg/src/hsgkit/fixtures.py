"""Builtin fixture pack used by ``check --builtin`` and the test-suite."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .adjunction import c0, c1
from .category import (
    FinCategory,
    FinFunctor,
    chain,
    constant_functor,
    discrete_category,
    identity_functor,
    make_category,
    product_category,
    projection,
    terminal_category,
)
from .grid import Axis, Grid, build_grid, grid_from_body
from .institution import Institution, InstitutionMorphism
from .jguard import ExternalCriterion
from .kan import SetValuedFunctor, representable


# --- J criteria ---------------------------------------------------------------


@dataclass(frozen=True)
class JFixture:
    name: str
    grid: Grid
    criterion: ExternalCriterion
    expected: str  # isomorphism | implication | fails


_DELTA_PATTERNS = (
    "⊥⊤", "⊤⊥", "⊥⊥⊤", "⊥⊤⊤", "⊤⊥⊤", "⊥⊥⊤⊤", "⊤⊤⊥⊥", "⊥⊤⊥⊤", "⊥⊤⊤⊤", "⊥⊥⊥⊤",
)


def _time_grid(pattern: str) -> Grid:
    n = len(pattern)
    axis = Axis("time", tuple(range(n)))
    return build_grid([axis], [(f"x{i}", (i,)) for i in range(n)], {f"x{i}": s for i, s in enumerate(pattern)})


def _iso_criterion(g: Grid, i: int) -> ExternalCriterion:
    defined = [x for x in g.tokens if g.delta[x]]
    if i % 3 == 0:
        return ExternalCriterion("(delta_is ⊤)", name=f"iso-{i}")
    if i % 3 == 1:
        carrier = {x: tuple(range(1 + k % 3)) for k, x in enumerate(defined)}
        return ExternalCriterion({x: True for x in defined}, carrier, name=f"iso-{i}")
    return ExternalCriterion("(or (delta_is ⊤) false)", name=f"iso-{i}")


def j_fixtures() -> list[JFixture]:
    """Ten fixtures in each class, all on one-axis time grids."""
    out = []
    for i, pat in enumerate(_DELTA_PATTERNS):
        g = _time_grid(pat)
        out.append(JFixture(f"j-iso-{i}", g, _iso_criterion(g, i), "isomorphism"))
    for i, pat in enumerate(_DELTA_PATTERNS):
        g = _time_grid(pat)
        defined = [x for x in g.tokens if g.delta[x]]
        keep = defined[:-1] if i % 2 == 0 else defined[1:]
        crit = ExternalCriterion({x: True for x in keep}, name=f"impl-{i}")
        out.append(JFixture(f"j-impl-{i}", g, crit, "implication"))
    for i, pat in enumerate(_DELTA_PATTERNS):
        g = _time_grid(pat)
        undefined = [x for x in g.tokens if not g.delta[x]]
        if i % 2 == 0:
            crit = ExternalCriterion("true", name=f"fail-{i}")
        else:
            chosen = {undefined[0]} | {x for x in g.tokens if g.delta[x]}
            crit = ExternalCriterion({x: True for x in chosen}, name=f"fail-{i}")
        out.append(JFixture(f"j-fail-{i}", g, crit, "fails"))
    return out


# --- Kan diagrams ------------------------------------------------------------------


@dataclass(frozen=True)
class KanFixture:
    name: str
    f: SetValuedFunctor
    k: FinFunctor


def thin_functor(src: FinCategory, tgt: FinCategory, obj_map: dict, name: str = "") -> FinFunctor:
    """Functor into a thin category, fixed by its action on objects."""
    mor = {m: tgt.hom(obj_map[s], obj_map[t])[0] for m, (s, t) in src.morphisms.items()}
    return FinFunctor(src, tgt, obj_map, mor, name)


def set_functor(c: FinCategory, value: dict, arrows: dict | None = None, name: str = "") -> SetValuedFunctor:
    """Identities act trivially; ``arrows`` gives the remaining actions."""
    arrows = arrows or {}
    action = {}
    for m, (s, _t) in c.morphisms.items():
        if c.is_identity(m):
            action[m] = {v: v for v in value[s]}
        else:
            action[m] = dict(arrows[m])
    return SetValuedFunctor(c, value, action, name)


def _parallel() -> FinCategory:
    return make_category(
        ["a", "b"],
        {"id_a": ("a", "a"), "id_b": ("b", "b"), "f": ("a", "b"), "g": ("a", "b")},
        {"a": "id_a", "b": "id_b"},
        {
            ("id_a", "id_a"): "id_a", ("id_b", "id_b"): "id_b",
            ("f", "id_a"): "f", ("id_b", "f"): "f", ("g", "id_a"): "g", ("id_b", "g"): "g",
        },
        name="⇉",
    )


def _span() -> FinCategory:
    return make_category(
        ["l", "c", "r"],
        {"id_l": ("l", "l"), "id_c": ("c", "c"), "id_r": ("r", "r"), "u": ("c", "l"), "v": ("c", "r")},
        {"l": "id_l", "c": "id_c", "r": "id_r"},
        {
            ("id_l", "id_l"): "id_l", ("id_c", "id_c"): "id_c", ("id_r", "id_r"): "id_r",
            ("u", "id_c"): "u", ("id_l", "u"): "u", ("v", "id_c"): "v", ("id_r", "v"): "v",
        },
        name="span",
    )


def kan_fixtures() -> list[KanFixture]:
    T = terminal_category()
    ab = discrete_category(["a", "b"], "{a,b}")
    ch2 = chain(["0", "1"], "2")
    ch3 = chain(["0", "1", "2"], "3")
    par, span = _parallel(), _span()
    C0, C1 = c0(), c1()
    tr = thin_functor(C0, C1, {"Undef": "Empty", "Define": "NonEmpty"}, "Tr")
    out = [
        KanFixture("collapse-discrete", set_functor(ab, {"a": ("p", "q"), "b": ("r",)}), constant_functor(ab, T, "*")),
        KanFixture(
            "collapse-arrow",
            set_functor(ch2, {"0": (0, 1, 2), "1": ("u", "v")}, {"0→1": {0: "u", 1: "u", 2: "v"}}),
            constant_functor(ch2, T, "*"),
        ),
        KanFixture(
            "identity-chain",
            set_functor(ch2, {"0": (0, 1), "1": (0,)}, {"0→1": {0: 0, 1: 0}}),
            identity_functor(ch2),
        ),
        KanFixture("point-at-bottom", set_functor(discrete_category(["a"]), {"a": ("p", "q")}), thin_functor(discrete_category(["a"]), ch2, {"a": "0"})),
        KanFixture("point-at-top", set_functor(discrete_category(["a"]), {"a": ("p", "q")}), thin_functor(discrete_category(["a"]), ch2, {"a": "1"})),
        KanFixture(
            "coequalizer",
            SetValuedFunctor(
                par,
                {"a": (0, 1), "b": ("x", "y", "z")},
                {"id_a": {0: 0, 1: 1}, "id_b": {"x": "x", "y": "y", "z": "z"}, "f": {0: "x", 1: "y"}, "g": {0: "y", 1: "y"}},
            ),
            constant_functor(par, T, "*"),
        ),
        KanFixture(
            "pushout",
            set_functor(span, {"l": ("a", "b"), "c": (0,), "r": ("c", "d")}, {"u": {0: "a"}, "v": {0: "c"}}),
            constant_functor(span, T, "*"),
        ),
        KanFixture(
            "chain-squash",
            set_functor(
                ch3,
                {"0": (0,), "1": (0, 1), "2": (0, 1)},
                {"0→1": {0: 0}, "1→2": {0: 0, 1: 1}, "0→2": {0: 0}},
            ),
            thin_functor(ch3, ch2, {"0": "0", "1": "0", "2": "1"}),
        ),
        KanFixture("discrete-into-chain", set_functor(ab, {"a": (0,), "b": (0, 1)}), thin_functor(ab, ch2, {"a": "0", "b": "1"})),
        KanFixture("representable-along-Tr", representable(C0, "Undef"), tr),
        KanFixture("corepresentable-along-Tr", representable(C0, "Define"), tr),
        KanFixture("empty-values", set_functor(ab, {"a": (), "b": (0,)}), constant_functor(ab, T, "*")),
    ]
    return out


# --- Beck–Chevalley squares --------------------------------------------------------


def bc_product_square():
    """Projections out of C0 × C1 over the terminal category."""
    C, D, T = c0(), c1(), terminal_category()
    P = product_category([C, D])
    return (
        projection([C, D], 0, P),
        projection([C, D], 1, P),
        constant_functor(C, T, "*"),
        constant_functor(D, T, "*"),
        representable(C, "Undef"),
    )


def bc_disjoint_square():
    """Two points collapsed onto one: restriction then extension double counts."""
    T = terminal_category()
    P = discrete_category(["p", "q"])
    p = constant_functor(P, T, "*")
    i = identity_functor(T)
    return p, p, i, i, SetValuedFunctor(T, {"*": ("•",)}, {"id_*": {"•": "•"}})


# --- planted state-identity grids ------------------------------------------------


def planted_state_grid(seed: int) -> tuple[Grid, list]:
    """Grid with planted duplicate classes among ⊤ tokens, plus ⊥ decoys.

    Returns the grid and the sorted list of planted classes.
    """
    rng = random.Random(seed)
    axes = [Axis("time", tuple(range(4))), Axis("depth", tuple(range(3)))]
    cells = [(t, d) for t in range(4) for d in range(3)]
    rng.shuffle(cells)
    tokens, delta, classes = [], {}, []
    n_classes = rng.randint(0, 3)
    idx = 0
    for c in range(n_classes):
        cell = cells.pop()
        members = []
        for _ in range(rng.randint(2, 3)):
            tid = f"t{idx}"
            idx += 1
            tokens.append((tid, cell))
            delta[tid] = "⊤"
            members.append(tid)
        classes.append(sorted(members))
    for _ in range(rng.randint(1, 4)):
        cell = cells.pop()
        tid = f"t{idx}"
        idx += 1
        tokens.append((tid, cell))
        delta[tid] = "⊤"
        # ⊥ decoys sharing the cell of a defined token
        for _ in range(rng.randint(0, 2)):
            did = f"t{idx}"
            idx += 1
            tokens.append((did, cell))
            delta[did] = "⊥"
    cell = cells.pop()
    for _ in range(rng.randint(0, 3)):
        did = f"t{idx}"
        idx += 1
        tokens.append((did, cell))
        delta[did] = "⊥"
    return build_grid(axes, tokens, delta), sorted(classes)


# --- institutions ------------------------------------------------------------------


def _prop_institution(name: str, sentences: tuple, models: tuple, truth) -> Institution:
    return Institution(
        ("Σ",),
        {"Σ": sentences},
        {"Σ": models},
        {"Σ": {(m, s): truth(m, s) for m in models for s in sentences}},
        name,
    )


def institution_fixtures() -> list[tuple[str, InstitutionMorphism]]:
    """Small propositional institutions: models are sets of true atoms."""
    atoms2 = ("p", "q")
    models2 = ("", "p", "q", "pq")

    def truth2(m, s):
        if s == "⊤":
            return True
        if s == "p∧q":
            return "p" in m and "q" in m
        if s == "p∨q":
            return "p" in m or "q" in m
        return s in m

    src = _prop_institution("Prop{p,q}", ("⊤", *atoms2, "p∧q", "p∨q"), models2, truth2)
    models1 = ("", "p")
    tgt = _prop_institution("Prop{p}", ("⊤", "p", "¬p"), models1, lambda m, s: s == "⊤" or (s == "p") == ("p" in m))

    def morph(name, sen, mod, a=src, b=src):
        return name, InstitutionMorphism(a, b, {"Σ": "Σ"}, {"Σ": sen}, {"Σ": mod}, name)

    ident = {s: s for s in src.sentences["Σ"]}
    swap_sen = {"⊤": "⊤", "p": "q", "q": "p", "p∧q": "p∧q", "p∨q": "p∨q"}
    swap_mod = {"": "", "p": "q", "q": "p", "pq": "pq"}
    return [
        morph("identity", ident, {m: m for m in models2}),
        morph("swap", swap_sen, swap_mod),
        morph("swap-sentences-only", swap_sen, {m: m for m in models2}),
        morph("forget-q", {"⊤": "⊤", "p": "p", "q": "⊤", "p∧q": "p", "p∨q": "⊤"}, {"": "", "p": "p", "q": "", "pq": "p"}, src, tgt),
        morph("forget-q-badly", {"⊤": "⊤", "p": "p", "q": "p", "p∧q": "p", "p∨q": "p"}, {"": "", "p": "p", "q": "", "pq": "p"}, src, tgt),
        morph("negate", {"⊤": "⊤", "p": "¬p", "q": "⊤", "p∧q": "¬p", "p∨q": "⊤"}, {"": "", "p": "p", "q": "", "pq": "p"}, src, tgt),
    ]


# --- table grids -----------------------------------------------------------------------


@lru_cache(maxsize=None)
def _tables() -> dict:
    return json.loads(resources.files("hsgkit.data").joinpath("tables.json").read_text(encoding="utf-8"))


def table_document(name: str) -> dict:
    """Grid document for ``table1`` or ``table2``."""
    return _tables()[name]


def table_grid(name: str) -> Grid:
    return grid_from_body(table_document(name)["body"])
