"""Finite categories, functors and natural transformations presented by tables.

Ids of objects and morphisms are opaque strings.  Every structure here is
immutable; operations return new values.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import CapacityError, MalformedInputError, PreconditionError, TruncationError
from .report import Finding, Report

DEFAULT_PATH_BOUND = 8


@dataclass(frozen=True)
class EnumerationCap:
    max_objects: int = 6
    max_morphisms: int = 64

    def check(self, c: "FinCategory", what: str = "category"):
        if len(c.objects) > self.max_objects or len(c.morphisms) > self.max_morphisms:
            raise CapacityError(
                f"{what} {c.name or ''} has {len(c.objects)} objects / "
                f"{len(c.morphisms)} morphisms; cap is {self.max_objects}/{self.max_morphisms}"
            )


DEFAULT_CAP = EnumerationCap()


def _freeze(m):
    return MappingProxyType(dict(m))


@dataclass(frozen=True)
class FinCategory:
    """A finite category given by explicit tables.

    ``compose[(g, f)]`` is ``g∘f`` and is defined exactly when
    ``target(f) == source(g)``.
    """

    objects: tuple
    morphisms: Mapping[str, tuple]
    identity: Mapping[str, str]
    compose: Mapping[tuple, str]
    grade: Mapping[str, int]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "morphisms", _freeze({m: tuple(st) for m, st in self.morphisms.items()}))
        object.__setattr__(self, "identity", _freeze(self.identity))
        object.__setattr__(self, "compose", _freeze({tuple(k): v for k, v in self.compose.items()}))
        object.__setattr__(self, "grade", _freeze(self.grade))

    def source(self, m: str) -> str:
        return self.morphisms[m][0]

    def target(self, m: str) -> str:
        return self.morphisms[m][1]

    def comp(self, g: str, f: str) -> str:
        return self.compose[(g, f)]

    @cached_property
    def _homs(self):
        homs = {}
        for m, (s, t) in self.morphisms.items():
            homs.setdefault((s, t), []).append(m)
        return {k: tuple(v) for k, v in homs.items()}

    def hom(self, x: str, y: str) -> tuple:
        return self._homs.get((x, y), ())

    @cached_property
    def _out(self):
        out = {x: [] for x in self.objects}
        for m, (s, _t) in self.morphisms.items():
            out.setdefault(s, []).append(m)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def _into(self):
        into = {x: [] for x in self.objects}
        for m, (_s, t) in self.morphisms.items():
            into.setdefault(t, []).append(m)
        return {k: tuple(v) for k, v in into.items()}

    def out_of(self, x: str) -> tuple:
        return self._out.get(x, ())

    def into(self, x: str) -> tuple:
        return self._into.get(x, ())

    @cached_property
    def identities(self) -> frozenset:
        return frozenset(self.identity.values())

    def is_identity(self, m: str) -> bool:
        return m in self.identities

    def is_iso(self, m: str) -> bool:
        s, t = self.morphisms[m]
        ids, idt = self.identity[s], self.identity[t]
        return any(
            self.compose.get((m, k)) == idt and self.compose.get((k, m)) == ids
            for k in self.hom(t, s)
        )

    def composable_pairs(self):
        for f, (_s, t) in self.morphisms.items():
            for g in self.out_of(t):
                yield g, f

    @property
    def max_grade(self) -> int:
        return max(self.grade.values(), default=0)

    def __repr__(self):
        return f"FinCategory({self.name or '?'}: {len(self.objects)} objects, {len(self.morphisms)} morphisms)"


def make_category(objects, morphisms, identity, compose, grade=None, name="") -> FinCategory:
    """Build a category, defaulting grades to 0 on identities and 1 elsewhere."""
    if grade is None:
        ids = set(identity.values())
        grade = {m: 0 if m in ids else 1 for m in morphisms}
    return FinCategory(tuple(objects), morphisms, identity, compose, grade, name)


def discrete_category(objects: Iterable[str], name: str = "") -> FinCategory:
    objects = tuple(objects)
    ids = {x: f"id_{x}" for x in objects}
    return FinCategory(
        objects,
        {ids[x]: (x, x) for x in objects},
        ids,
        {(ids[x], ids[x]): ids[x] for x in objects},
        {ids[x]: 0 for x in objects},
        name,
    )


def terminal_category() -> FinCategory:
    return discrete_category(["*"], name="1")


def _check_malformed(c: FinCategory):
    objs = set(c.objects)
    if len(objs) != len(c.objects):
        raise MalformedInputError(f"duplicate object ids in {c.name or 'category'}")
    for m, (s, t) in c.morphisms.items():
        if s not in objs or t not in objs:
            raise MalformedInputError(f"morphism {m} references undeclared object ({s} -> {t})")
    if set(c.identity) != objs:
        missing = sorted(objs - set(c.identity))
        extra = sorted(set(c.identity) - objs)
        raise MalformedInputError(f"identity table not total: missing {missing}, undeclared {extra}")
    for x, i in c.identity.items():
        if i not in c.morphisms:
            raise MalformedInputError(f"identity of {x} is undeclared morphism {i}")
    for (g, f), h in c.compose.items():
        for m in (g, f, h):
            if m not in c.morphisms:
                raise MalformedInputError(f"compose entry ({g}, {f}) -> {h} references undeclared morphism {m}")
    for m in c.grade:
        if m not in c.morphisms:
            raise MalformedInputError(f"grade given for undeclared morphism {m}")
    for m in c.morphisms:
        if m not in c.grade:
            raise MalformedInputError(f"grade missing for morphism {m}")


def validate_category(c: FinCategory) -> Report:
    """Check identity, associativity and grading laws exhaustively."""
    _check_malformed(c)
    out: list[Finding] = []
    for x, i in c.identity.items():
        if c.morphisms[i] != (x, x):
            out.append(Finding("identity-typing", f"identity of {x} is not an endomorphism of {x}", (i,)))
        if c.grade[i] != 0:
            out.append(Finding("grade", f"identity {i} has grade {c.grade[i]} (must be 0)", (i,)))
    for (g, f), h in c.compose.items():
        if c.target(f) != c.source(g):
            out.append(Finding("composition-typing", f"composition of non-composable pair ({g}, {f})", (g, f)))
        elif c.morphisms[h] != (c.source(f), c.target(g)):
            out.append(Finding("composition-typing", f"composite {g}∘{f} = {h} has wrong endpoints", (g, f)))
    for f, (s, t) in c.morphisms.items():
        ids, idt = c.identity[s], c.identity[t]
        if c.compose.get((idt, f)) != f:
            out.append(Finding("identity-law", f"identity law ({idt}, {f})", (idt, f)))
        if c.compose.get((f, ids)) != f:
            out.append(Finding("identity-law", f"identity law ({f}, {ids})", (f, ids)))
    ids = c.identities
    for g, f in c.composable_pairs():
        if (g, f) not in c.compose and g not in ids and f not in ids:
            out.append(Finding("closure", f"composition undefined ({g}, {f})", (g, f)))
    for g, f in c.composable_pairs():
        gf = c.compose.get((g, f))
        if gf is None:
            continue
        want = max(c.grade[g], c.grade[f])
        if c.grade[gf] != want:
            out.append(Finding("grade", f"grade({g}∘{f}) = {c.grade[gf]}, expected {want}", (g, f)))
        for h in c.out_of(c.target(g)):
            hg = c.compose.get((h, g))
            if hg is None:
                continue
            left = c.compose.get((h, gf))
            right = c.compose.get((hg, f))
            if left is not None and right is not None and left != right:
                out.append(Finding("associativity", f"associativity ({h}, {g}, {f}): {left} != {right}", (h, g, f)))
    return Report(c.name or "category", tuple(out))


# --- preorders -------------------------------------------------------------


@dataclass(frozen=True)
class Preorder:
    elements: tuple
    leq: frozenset

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "leq", frozenset(tuple(p) for p in self.leq))

    @classmethod
    def from_function(cls, elements, le) -> "Preorder":
        elements = tuple(elements)
        return cls(elements, frozenset((x, y) for x in elements for y in elements if le(x, y)))

    def violations(self) -> list[str]:
        els = set(self.elements)
        bad = []
        for x, y in self.leq:
            if x not in els or y not in els:
                bad.append(f"relation ({x}, {y}) mentions undeclared element")
        for x in self.elements:
            if (x, x) not in self.leq:
                bad.append(f"not reflexive at {x}")
        for x, y in self.leq:
            for y2, z in self.leq:
                if y == y2 and (x, z) not in self.leq:
                    bad.append(f"not transitive: {x}≤{y}≤{z}")
        return bad


def thin_from_preorder(p: Preorder, name: str = "") -> FinCategory:
    """The thin category with one arrow ``x→y`` for each ``x ≤ y``.

    Invertible arrows get grade 0, all others grade 1; this keeps
    ``grade(g∘f) = max`` valid for preorders that are not antisymmetric.
    """
    bad = p.violations()
    if bad:
        raise PreconditionError("not a preorder: " + "; ".join(sorted(set(bad))[:5]))

    def arrow(x, y):
        return f"id_{x}" if x == y else f"{x}→{y}"

    morphisms, grade = {}, {}
    for x in p.elements:
        for y in p.elements:
            if (x, y) in p.leq:
                m = arrow(x, y)
                morphisms[m] = (x, y)
                grade[m] = 0 if (y, x) in p.leq else 1
    compose = {}
    for x in p.elements:
        for y in p.elements:
            if (x, y) not in p.leq:
                continue
            for z in p.elements:
                if (y, z) in p.leq:
                    compose[(arrow(y, z), arrow(x, y))] = arrow(x, z)
    identity = {x: arrow(x, x) for x in p.elements}
    return FinCategory(p.elements, morphisms, identity, compose, grade, name)


def chain(elements: Sequence[str], name: str = "") -> FinCategory:
    """Thin category of a finite total order given in increasing order."""
    idx = {x: i for i, x in enumerate(elements)}
    return thin_from_preorder(Preorder.from_function(elements, lambda a, b: idx[a] <= idx[b]), name)


# --- products --------------------------------------------------------------


def tuple_id(parts) -> str:
    return json.dumps(list(parts), ensure_ascii=False)


def split_id(tid: str) -> list:
    return json.loads(tid)


def product_category(cs: Sequence[FinCategory]) -> FinCategory:
    """Cartesian product; ids are JSON arrays of component ids."""
    cs = list(cs)
    name = " × ".join(c.name or "?" for c in cs) if cs else "1"
    objs = [tuple_id(t) for t in itertools.product(*[c.objects for c in cs])]
    mors, grade = {}, {}
    mor_lists = [list(c.morphisms) for c in cs]
    for parts in itertools.product(*mor_lists):
        mid = tuple_id(parts)
        mors[mid] = (
            tuple_id([c.source(m) for c, m in zip(cs, parts)]),
            tuple_id([c.target(m) for c, m in zip(cs, parts)]),
        )
        grade[mid] = max((c.grade[m] for c, m in zip(cs, parts)), default=0)
    identity = {}
    for parts in itertools.product(*[c.objects for c in cs]):
        identity[tuple_id(parts)] = tuple_id([c.identity[x] for c, x in zip(cs, parts)])
    compose = {}
    pair_lists = [[(g, f, h) for (g, f), h in c.compose.items()] for c in cs]
    for combo in itertools.product(*pair_lists):
        g = tuple_id([t[0] for t in combo])
        f = tuple_id([t[1] for t in combo])
        compose[(g, f)] = tuple_id([t[2] for t in combo])
    return FinCategory(tuple(objs), mors, identity, compose, grade, name)


# --- functors --------------------------------------------------------------


@dataclass(frozen=True)
class FinFunctor:
    source: FinCategory
    target: FinCategory
    object_map: Mapping[str, str]
    morphism_map: Mapping[str, str]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "object_map", _freeze(self.object_map))
        object.__setattr__(self, "morphism_map", _freeze(self.morphism_map))

    def __call__(self, x: str) -> str:
        """Apply to an object id or a morphism id of the source."""
        if x in self.object_map:
            return self.object_map[x]
        return self.morphism_map[x]

    def ob(self, x: str) -> str:
        return self.object_map[x]

    def mor(self, m: str) -> str:
        return self.morphism_map[m]

    def same_as(self, other: "FinFunctor") -> bool:
        return dict(self.object_map) == dict(other.object_map) and dict(self.morphism_map) == dict(
            other.morphism_map
        )

    def __repr__(self):
        return f"FinFunctor({self.name or '?'}: {self.source.name or '?'} → {self.target.name or '?'})"


def identity_functor(c: FinCategory) -> FinFunctor:
    return FinFunctor(c, c, {x: x for x in c.objects}, {m: m for m in c.morphisms}, f"Id_{c.name}")


def compose_functors(g: FinFunctor, f: FinFunctor, name: str = "") -> FinFunctor:
    """``g∘f``: apply ``f`` first."""
    if f.target != g.source:
        raise PreconditionError(f"cannot compose {g.name or 'functor'} after {f.name or 'functor'}: target and source differ")
    return FinFunctor(
        f.source,
        g.target,
        {x: g.object_map[y] for x, y in f.object_map.items()},
        {m: g.morphism_map[n] for m, n in f.morphism_map.items()},
        name or f"{g.name}{f.name}",
    )


def projection(cs: Sequence[FinCategory], i: int, product: FinCategory | None = None) -> FinFunctor:
    prod = product if product is not None else product_category(cs)
    return FinFunctor(
        prod,
        cs[i],
        {x: split_id(x)[i] for x in prod.objects},
        {m: split_id(m)[i] for m in prod.morphisms},
        f"π{i}",
    )


def constant_functor(source: FinCategory, target: FinCategory, obj: str) -> FinFunctor:
    idm = target.identity[obj]
    return FinFunctor(source, target, {x: obj for x in source.objects}, {m: idm for m in source.morphisms}, f"Δ{obj}")


def validate_functor(f: FinFunctor) -> Report:
    """Check preservation of endpoints, identities and composition."""
    s, t = f.source, f.target
    if set(f.object_map) != set(s.objects):
        raise MalformedInputError(f"object map of {f.name or 'functor'} is not total on the source")
    for x, y in f.object_map.items():
        if y not in set(t.objects):
            raise MalformedInputError(f"object map sends {x} to undeclared object {y}")
    if set(f.morphism_map) != set(s.morphisms):
        raise MalformedInputError(f"morphism map of {f.name or 'functor'} is not total on the source")
    for m, n in f.morphism_map.items():
        if n not in t.morphisms:
            raise MalformedInputError(f"morphism map sends {m} to undeclared morphism {n}")
    out = []
    for m, (a, b) in s.morphisms.items():
        n = f.morphism_map[m]
        if t.morphisms[n] != (f.object_map[a], f.object_map[b]):
            out.append(Finding("functor-endpoints", f"{m}: {a}→{b} maps to {n} with wrong endpoints", (m,)))
    for x, i in s.identity.items():
        if f.morphism_map[i] != t.identity[f.object_map[x]]:
            out.append(Finding("functor-identity", f"identity {i} maps to {f.morphism_map[i]}, not an identity", (i,)))
    for (g, h), gh in s.compose.items():
        fg, fh = f.morphism_map[g], f.morphism_map[h]
        want = t.compose.get((fg, fh))
        if want != f.morphism_map[gh]:
            out.append(Finding("functor-composition", f"F({g}∘{h}) = {f.morphism_map[gh]} but F{g}∘F{h} = {want}", (g, h)))
    return Report(f.name or "functor", tuple(out))


# --- natural transformations ----------------------------------------------


@dataclass(frozen=True)
class FinNatTrans:
    source: FinFunctor
    target: FinFunctor
    components: Mapping[str, str]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "components", _freeze(self.components))

    def __getitem__(self, x: str) -> str:
        return self.components[x]


def identity_nat(f: FinFunctor) -> FinNatTrans:
    return FinNatTrans(f, f, {x: f.target.identity[f.object_map[x]] for x in f.source.objects}, f"id_{f.name}")


def vertical(beta: FinNatTrans, alpha: FinNatTrans) -> FinNatTrans:
    """``β·α``: first ``α: F⇒G`` then ``β: G⇒H``."""
    d = alpha.source.target
    return FinNatTrans(
        alpha.source,
        beta.target,
        {x: d.comp(beta[x], alpha[x]) for x in alpha.source.source.objects},
        f"{beta.name}·{alpha.name}",
    )


def whisker_left(h: FinFunctor, alpha: FinNatTrans) -> FinNatTrans:
    """``Hα: HF ⇒ HG``."""
    return FinNatTrans(
        compose_functors(h, alpha.source),
        compose_functors(h, alpha.target),
        {x: h.morphism_map[alpha[x]] for x in alpha.source.source.objects},
        f"{h.name}{alpha.name}",
    )


def whisker_right(alpha: FinNatTrans, k: FinFunctor) -> FinNatTrans:
    """``αK: FK ⇒ GK``."""
    return FinNatTrans(
        compose_functors(alpha.source, k),
        compose_functors(alpha.target, k),
        {x: alpha[k.object_map[x]] for x in k.source.objects},
        f"{alpha.name}{k.name}",
    )


def validate_nat_trans(a: FinNatTrans) -> Report:
    """Check component typing and every naturality square."""
    f, g = a.source, a.target
    if f.source is not g.source and f.source != g.source:
        raise MalformedInputError("transformation between non-parallel functors")
    c, d = f.source, f.target
    for x in c.objects:
        if x not in a.components:
            raise MalformedInputError(f"missing component at {x}")
        if a.components[x] not in d.morphisms:
            raise MalformedInputError(f"component at {x} is undeclared morphism {a.components[x]}")
    out = []
    for x in c.objects:
        if d.morphisms[a[x]] != (f.ob(x), g.ob(x)):
            out.append(Finding("component-typing", f"component at {x} is not {f.ob(x)}→{g.ob(x)}", (x,)))
    if out:
        return Report(a.name or "transformation", tuple(out))
    for m, (x, y) in c.morphisms.items():
        left = d.compose.get((g.mor(m), a[x]))
        right = d.compose.get((a[y], f.mor(m)))
        if left is None or right is None or left != right:
            out.append(Finding("naturality", f"naturality square for {m}: {x}→{y} does not commute", (m,)))
    return Report(a.name or "transformation", tuple(out))


# --- mapping-hierarchy grading ----------------------------------------------


def grade_truncate(c: FinCategory, k: int) -> FinCategory:
    """Keep only morphisms of grade ≤ k; objects are unchanged."""
    keep = {m for m, g in c.grade.items() if g <= k}
    if len(keep) == len(c.morphisms):
        return c
    return FinCategory(
        c.objects,
        {m: st for m, st in c.morphisms.items() if m in keep},
        c.identity,
        {gf: h for gf, h in c.compose.items() if gf[0] in keep and gf[1] in keep},
        {m: g for m, g in c.grade.items() if m in keep},
        c.name,
    )


def _generator_list(generators, objects):
    gens = []
    used = set()
    for i, g in enumerate(generators):
        if len(g) == 3:
            gid, s, t = g
        else:
            s, t = g
            gid = f"{s}⇝{t}"
            if gid in used:
                gid = f"{gid}#{i}"
        if s not in objects or t not in objects:
            raise MalformedInputError(f"generator {gid} has undeclared endpoint ({s}, {t})")
        if gid in used:
            raise MalformedInputError(f"duplicate generator id {gid}")
        used.add(gid)
        gens.append((gid, s, t))
    return gens


def grade_extend(c: FinCategory, generators, max_length: int = DEFAULT_PATH_BOUND) -> FinCategory:
    """Freely adjoin generators one grade above the current top grade.

    Morphisms of the result are normal forms ``h_n ∘ g_n ∘ … ∘ g_1 ∘ h_0``
    with ``h_i`` old morphisms and ``g_i`` new generators, so only the old
    composition table and the identity laws are imposed.  Paths with more
    than ``max_length`` generators raise :class:`TruncationError`.
    """
    objects = set(c.objects)
    gens = _generator_list(generators, objects)
    if not gens:
        return c
    level = c.max_grade + 1
    gen_ids = {g for g, _, _ in gens}
    clash = gen_ids & set(c.morphisms)
    if clash:
        raise MalformedInputError(f"generator ids collide with existing morphisms: {sorted(clash)}")

    # open prefixes (h0, g1, ..., hk-1, gk), grouped by number of generators
    prefixes = [(h, g) for g, s, _t in gens for h in c.into(s)]
    forms: list[tuple] = [(m,) for m in c.morphisms]
    n = 1
    while prefixes:
        if n > max_length:
            raise TruncationError(
                f"free extension has composites with more than {max_length} generators "
                f"(cycle through generators starting {prefixes[0][-1]})"
            )
        for p in prefixes:
            end = _gen_target(gens, p[-1])
            forms.extend(p + (h,) for h in c.out_of(end))
        prefixes = [p + (h, g) for p in prefixes for g, s, _t in gens for h in c.hom(_gen_target(gens, p[-1]), s)]
        n += 1

    def name(form):
        if len(form) == 1:
            return form[0]
        parts = [x for x in form if x not in c.identities]
        return "∘".join(reversed(parts))

    def endpoints(form):
        return c.source(form[0]), c.target(form[-1])

    ids = {}
    morphisms, grade = {}, {}
    for form in forms:
        nm = name(form)
        if nm in ids and ids[nm] != form:
            raise MalformedInputError(f"path name collision on {nm}")
        ids[nm] = form
        morphisms[nm] = endpoints(form)
        grade[nm] = c.grade[form[0]] if len(form) == 1 else level
    by_form = {form: nm for nm, form in ids.items()}

    def cat(second, first):
        joined = first[:-1] + (c.comp(second[0], first[-1]),) + second[1:]
        return joined

    compose = {}
    for f_form, f_name in by_form.items():
        t = c.target(f_form[-1])
        for g_form, g_name in by_form.items():
            if c.source(g_form[0]) != t:
                continue
            h = cat(g_form, f_form)
            if h not in by_form:
                raise TruncationError(f"composite {g_name}∘{f_name} exceeds the path bound {max_length}")
            compose[(g_name, f_name)] = by_form[h]
    return FinCategory(c.objects, morphisms, c.identity, compose, grade, c.name)


def _gen_target(gens, gid):
    for g, _s, t in gens:
        if g == gid:
            return t
    raise KeyError(gid)
