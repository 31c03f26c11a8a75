"""Pointwise Kan extensions of finite-set-valued functors.

Elements of value sets are arbitrary hashable values.  Value sets are tuples so
that "element index" is well defined for canonical representatives.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Sequence

from . import kernels
from .category import (
    DEFAULT_CAP,
    EnumerationCap,
    FinCategory,
    FinFunctor,
    compose_functors,
)
from .errors import CapacityError, MalformedInputError, PreconditionError
from .report import WARNING, Finding, Report


@dataclass(frozen=True)
class SetValuedFunctor:
    source: FinCategory
    value: Mapping[str, tuple]
    action: Mapping[str, Mapping]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "value", MappingProxyType({k: tuple(v) for k, v in self.value.items()}))
        object.__setattr__(
            self, "action", MappingProxyType({m: MappingProxyType(dict(fn)) for m, fn in self.action.items()})
        )

    def apply(self, m: str, v):
        return self.action[m][v]

    def size(self) -> int:
        return sum(len(v) for v in self.value.values())

    def cardinalities(self) -> dict:
        return {x: len(self.value[x]) for x in self.source.objects}


def validate_set_functor(f: SetValuedFunctor) -> Report:
    c = f.source
    if set(f.value) != set(c.objects):
        raise MalformedInputError("value sets are not given for exactly the source objects")
    if set(f.action) != set(c.morphisms):
        raise MalformedInputError("actions are not given for exactly the source morphisms")
    out = []
    for x, vs in f.value.items():
        if len(set(vs)) != len(vs):
            out.append(Finding("value-set", f"value set at {x} repeats an element", (x,)))
    for m, (s, t) in c.morphisms.items():
        fn = f.action[m]
        if set(fn) != set(f.value[s]) or not set(fn.values()) <= set(f.value[t]):
            out.append(Finding("action-typing", f"action of {m} is not a function {s}→{t}", (m,)))
    if out:
        return Report(f.name or "set functor", tuple(out))
    for x, i in c.identity.items():
        if any(f.action[i][v] != v for v in f.value[x]):
            out.append(Finding("functor-identity", f"identity {i} acts non-trivially", (i,)))
    for (g, h), gh in c.compose.items():
        s = c.source(h)
        if any(f.action[gh][v] != f.action[g][f.action[h][v]] for v in f.value[s]):
            out.append(Finding("functor-composition", f"action of {g}∘{h} differs from composite action", (g, h)))
    return Report(f.name or "set functor", tuple(out))


def precompose(f: SetValuedFunctor, k: FinFunctor) -> SetValuedFunctor:
    """``F∘K`` for ``K`` into the source of ``F``."""
    return SetValuedFunctor(
        k.source,
        {x: f.value[k.ob(x)] for x in k.source.objects},
        {m: f.action[k.mor(m)] for m in k.source.morphisms},
        f"{f.name}∘{k.name}",
    )


def representable(c: FinCategory, x: str, name: str = "") -> SetValuedFunctor:
    """``Hom(x, -)``, the functor freely generated by one point at ``x``."""
    return SetValuedFunctor(
        c,
        {y: c.hom(x, y) for y in c.objects},
        {m: {u: c.comp(m, u) for u in c.hom(x, c.source(m))} for m in c.morphisms},
        name or f"Hom({x},-)",
    )


def constant_set_functor(c: FinCategory, values, name: str = "") -> SetValuedFunctor:
    values = tuple(values)
    return SetValuedFunctor(
        c, {x: values for x in c.objects}, {m: {v: v for v in values} for m in c.morphisms}, name
    )


# --- comma categories ------------------------------------------------------


def _cid(*parts) -> str:
    return json.dumps(list(parts), ensure_ascii=False)


@dataclass(frozen=True)
class CommaCategory:
    """``(K↓d)`` for ``side="over"`` or ``(d↓K)`` for ``side="under"``."""

    k: FinFunctor
    anchor: str
    side: str
    category: FinCategory
    pairs: Mapping[str, tuple]  # object id -> (c, arrow)
    lifts: Mapping[str, str]  # morphism id -> underlying morphism of the source of k
    projection: FinFunctor = field(repr=False, default=None)


def comma_category(k: FinFunctor, d: str, side: str = "over") -> CommaCategory:
    c, dd = k.source, k.target
    if d not in set(dd.objects):
        raise MalformedInputError(f"anchor {d!r} is not an object of the target")
    if side not in ("over", "under"):
        raise PreconditionError("side must be 'over' or 'under'")
    pairs = {}
    for x in c.objects:
        arrows = dd.hom(k.ob(x), d) if side == "over" else dd.hom(d, k.ob(x))
        for f in arrows:
            pairs[_cid(x, f)] = (x, f)
    morphisms, lifts, grade = {}, {}, {}
    for o1, (x1, f1) in pairs.items():
        for o2, (x2, f2) in pairs.items():
            for u in c.hom(x1, x2):
                ku = k.mor(u)
                ok = dd.comp(f2, ku) == f1 if side == "over" else dd.comp(ku, f1) == f2
                if ok:
                    mid = _cid(u, o1, o2)
                    morphisms[mid] = (o1, o2)
                    lifts[mid] = u
                    grade[mid] = c.grade[u]
    identity = {o: _cid(c.identity[x], o, o) for o, (x, _f) in pairs.items()}
    compose = {}
    for m1, (a, b) in morphisms.items():
        for m2, (b2, e) in morphisms.items():
            if b2 == b:
                compose[(m2, m1)] = _cid(c.comp(lifts[m2], lifts[m1]), a, e)
    cat = FinCategory(tuple(pairs), morphisms, identity, compose, grade, f"({k.name}{'↓' if side == 'over' else '↑'}{d})")
    proj = FinFunctor(cat, c, {o: p[0] for o, p in pairs.items()}, dict(lifts), "P")
    return CommaCategory(k, d, side, cat, MappingProxyType(pairs), MappingProxyType(lifts), proj)


# --- finite limits and colimits -------------------------------------------


@dataclass(frozen=True)
class Colimit:
    elements: tuple  # canonical representatives (object, value)
    injections: Mapping[str, Mapping]  # object -> value -> representative


@dataclass(frozen=True)
class Limit:
    elements: tuple  # families, one value per source object in source order
    projections: Mapping[str, Mapping]  # object -> family -> value


def finset_colimit(f: SetValuedFunctor) -> Colimit:
    """Disjoint union modulo the zigzag relation generated by the action.

    The representative of a class is its least ``(object id, element index)``.
    """
    c = f.source
    nodes = [(x, i) for x in sorted(c.objects) for i in range(len(f.value[x]))]
    index = {(x, f.value[x][i]): n for n, (x, i) in enumerate(nodes)}
    edges = []
    for m, (s, t) in c.morphisms.items():
        for v in f.value[s]:
            edges.append((index[(s, v)], index[(t, f.action[m][v])]))
    reps = kernels.zigzag_classes(len(nodes), edges)

    def element(n):
        x, i = nodes[n]
        return (x, f.value[x][i])

    elements = tuple(element(n) for n in sorted(set(reps)))
    inj = {x: MappingProxyType({v: element(reps[index[(x, v)]]) for v in f.value[x]}) for x in c.objects}
    return Colimit(elements, MappingProxyType(inj))


def finset_limit(f: SetValuedFunctor) -> Limit:
    """Matching families, enumerated by backtracking in source object order."""
    c = f.source
    objs = list(c.objects)
    pos = {x: i for i, x in enumerate(objs)}
    checks = [[] for _ in objs]  # morphisms whose endpoints are both assigned at step i
    for m, (s, t) in c.morphisms.items():
        if m in c.identities:
            continue
        checks[max(pos[s], pos[t])].append((m, pos[s], pos[t]))
    families = []
    current: list = []

    def go(i):
        if i == len(objs):
            families.append(tuple(current))
            return
        for v in f.value[objs[i]]:
            current.append(v)
            if all(f.action[m][current[a]] == current[b] for m, a, b in checks[i]):
                go(i + 1)
            current.pop()

    go(0)
    proj = {x: MappingProxyType({fam: fam[i] for fam in families}) for i, x in enumerate(objs)}
    return Limit(tuple(families), MappingProxyType(proj))


# --- Kan extensions ---------------------------------------------------------


@dataclass(frozen=True)
class KanExtension:
    side: str
    functor: SetValuedFunctor
    f: SetValuedFunctor
    k: FinFunctor
    # left: unit components η_c: F(c) → (Lan F)(Kc); right: counit ε_c: (Ran F)(Kc) → F(c)
    transformation: Mapping[str, Mapping]


def _check_cap(cats, cap):
    for cat in cats:
        if len(cat.objects) > cap.max_objects or len(cat.morphisms) > cap.max_morphisms:
            raise CapacityError(
                f"{cat.name or 'category'} has {len(cat.objects)} objects / {len(cat.morphisms)} morphisms;"
                f" cap is {cap.max_objects}/{cap.max_morphisms}"
            )


def kan_extend(side: str, f: SetValuedFunctor, k: FinFunctor, cap: EnumerationCap = DEFAULT_CAP) -> KanExtension:
    """Pointwise left (colimit over ``K↓d``) or right (limit over ``d↓K``) extension."""
    if f.source != k.source:
        raise PreconditionError("functor and extension direction have different sources")
    _check_cap([k.source, k.target], cap)
    d = k.target
    if side == "left":
        value, colims, commas = {}, {}, {}
        for y in d.objects:
            cc = comma_category(k, y, "over")
            colim = finset_colimit(precompose(f, cc.projection))
            commas[y], colims[y] = cc, colim
            value[y] = colim.elements
        action = {}
        for g, (y1, y2) in d.morphisms.items():
            cc1, cc2 = commas[y1], commas[y2]
            fn = {}
            for o, v in colims[y1].elements:
                x, arrow = cc1.pairs[o]
                target_obj = _cid(x, d.comp(g, arrow))
                fn[(o, v)] = colims[y2].injections[target_obj][v]
            action[g] = fn
        ext = SetValuedFunctor(d, value, action, f"Lan_{k.name}{f.name}")
        unit = {}
        for x in k.source.objects:
            o = _cid(x, d.identity[k.ob(x)])
            unit[x] = {v: colims[k.ob(x)].injections[o][v] for v in f.value[x]}
        return KanExtension("left", ext, f, k, MappingProxyType(unit))
    if side == "right":
        value, lims, commas = {}, {}, {}
        for y in d.objects:
            cc = comma_category(k, y, "under")
            lim = finset_limit(precompose(f, cc.projection))
            commas[y], lims[y] = cc, lim
            value[y] = lim.elements
        action = {}
        for g, (y1, y2) in d.morphisms.items():
            objs1 = list(commas[y1].category.objects)
            idx1 = {o: i for i, o in enumerate(objs1)}
            fn = {}
            for fam in lims[y1].elements:
                new = []
                for o in commas[y2].category.objects:
                    x, arrow = commas[y2].pairs[o]
                    new.append(fam[idx1[_cid(x, d.comp(arrow, g))]])
                fn[fam] = tuple(new)
            action[g] = fn
        ext = SetValuedFunctor(d, value, action, f"Ran_{k.name}{f.name}")
        counit = {}
        for x in k.source.objects:
            y = k.ob(x)
            i = list(commas[y].category.objects).index(_cid(x, d.identity[y]))
            counit[x] = {fam: fam[i] for fam in lims[y].elements}
        return KanExtension("right", ext, f, k, MappingProxyType(counit))
    raise PreconditionError("side must be 'left' or 'right'")


# --- transformations between set-valued functors ---------------------------


def enumerate_transformations(a: SetValuedFunctor, b: SetValuedFunctor, limit: int | None = None):
    """Yield every natural transformation ``a ⇒ b`` as ``{object: {value: value}}``."""
    c = a.source
    objs = list(c.objects)
    pos = {x: i for i, x in enumerate(objs)}
    checks = [[] for _ in objs]
    for m, (s, t) in c.morphisms.items():
        if m in c.identities:
            continue
        checks[max(pos[s], pos[t])].append((m, s, t))
    current: dict = {}
    count = 0

    def go(i):
        nonlocal count
        if limit is not None and count >= limit:
            return
        if i == len(objs):
            count += 1
            yield {x: dict(current[x]) for x in objs}
            return
        x = objs[i]
        dom = a.value[x]
        for images in itertools.product(b.value[x], repeat=len(dom)):
            current[x] = dict(zip(dom, images))
            if all(
                b.action[m][current[s][v]] == current[t][a.action[m][v]]
                for m, s, t in checks[i]
                for v in a.value[s]
            ):
                yield from go(i + 1)
        current.pop(x, None)

    yield from go(0)


def _freeze_nat(n) -> tuple:
    return tuple((x, tuple(sorted(n[x].items(), key=repr))) for x in sorted(n))


@dataclass(frozen=True)
class UniversalityResult:
    report: Report
    alpha: object = None
    weak: bool = False


def verify_kan_universal(
    ext,
    f: SetValuedFunctor,
    k: FinFunctor,
    side: str,
    candidates: Sequence = (),
    cap: EnumerationCap = DEFAULT_CAP,
) -> Report:
    """Check the universal property of ``ext`` against a finite frame.

    Every transformation ``α`` of the right shape is tried as the (co)unit.
    For each competitor ``G`` (``ext`` itself plus ``candidates``) and every
    ``β``, the number of ``σ`` with ``σK∘α = β`` (left) or ``α∘σK = β`` (right)
    must be exactly one.  The report passes if some ``α`` succeeds; otherwise
    it describes the failures of the best ``α``.
    """
    if isinstance(ext, KanExtension):
        ext = ext.functor
    candidates = [c.functor if isinstance(c, KanExtension) else c for c in candidates]
    _check_cap([k.source, k.target], cap)
    if side not in ("left", "right"):
        raise PreconditionError("side must be 'left' or 'right'")
    for g in [ext, *candidates]:
        if g.source != k.target:
            raise PreconditionError("candidate is not a functor on the target of the extension direction")
    subject = f"{side} Kan universality of {ext.name or 'candidate'}"
    ek = precompose(ext, k)
    alphas = list(
        enumerate_transformations(f, ek) if side == "left" else enumerate_transformations(ek, f)
    )
    if not alphas:
        kind = "unit" if side == "left" else "counit"
        return Report(
            subject,
            (Finding("existence", f"no {kind} transformation of the required shape exists", ()),),
            {"alpha_count": 0},
        )
    family = [ext, *candidates]
    per_g = []
    for gi, g in enumerate(family):
        gk = precompose(g, k)
        sigmas = list(enumerate_transformations(ext, g) if side == "left" else enumerate_transformations(g, ext))
        betas = {
            _freeze_nat(b)
            for b in (enumerate_transformations(f, gk) if side == "left" else enumerate_transformations(gk, f))
        }
        per_g.append((gi, g, sigmas, betas))

    best = None
    for ai, alpha in enumerate(alphas):
        failures = []
        for gi, g, sigmas, betas in per_g:
            counts: dict = {}
            for s in sigmas:
                if side == "left":
                    comp = {x: {v: s[k.ob(x)][alpha[x][v]] for v in f.value[x]} for x in k.source.objects}
                else:
                    comp = {x: {v: alpha[x][s[k.ob(x)][v]] for v in g.value[k.ob(x)]} for x in k.source.objects}
                key = _freeze_nat(comp)
                counts[key] = counts.get(key, 0) + 1
            missing = [b for b in betas if b not in counts]
            multiple = [b for b, n in counts.items() if n > 1]
            if missing:
                failures.append(
                    Finding(
                        "existence",
                        f"{len(missing)} transformation(s) into candidate {gi} ({g.name or '?'}) have no factorization",
                        (gi,),
                    )
                )
            if multiple:
                failures.append(
                    Finding(
                        "uniqueness",
                        f"{len(multiple)} transformation(s) into candidate {gi} ({g.name or '?'}) factor in more than one way",
                        (gi,),
                    )
                )
        if not failures:
            best = (ai, alpha, [])
            break
        if best is None or len(failures) < len(best[2]):
            best = (ai, alpha, failures)
    ai, alpha, failures = best
    findings = list(failures)
    weak = not candidates
    if weak:
        findings.append(
            Finding("weak-check", "no competing candidates supplied; only the candidate itself was tested", (), WARNING)
        )
    return Report(subject, tuple(findings), {"alpha_count": len(alphas), "alpha_index": ai, "weak": weak})


# --- perturbations used by the harness ------------------------------------


def delete_element(g: SetValuedFunctor, x: str, v) -> SetValuedFunctor:
    """Largest subfunctor avoiding ``v ∈ G(x)``: also drops everything that maps onto it."""
    c = g.source
    removed = {(x, v)}
    changed = True
    while changed:
        changed = False
        for m, (s, t) in c.morphisms.items():
            for w in g.value[s]:
                if (s, w) not in removed and (t, g.action[m][w]) in removed:
                    removed.add((s, w))
                    changed = True
    value = {y: tuple(w for w in g.value[y] if (y, w) not in removed) for y in c.objects}
    action = {m: {w: g.action[m][w] for w in value[c.source(m)]} for m in c.morphisms}
    return SetValuedFunctor(c, value, action, f"{g.name}−{v!r}")


def duplicate_element(g: SetValuedFunctor, x: str, v, tag="′") -> SetValuedFunctor:
    """Add a copy of ``v ∈ G(x)`` with the same outgoing actions."""
    c = g.source
    copy = ("copy", v, tag)
    value = {y: g.value[y] + ((copy,) if y == x else ()) for y in c.objects}
    action = {}
    for m, (s, _t) in c.morphisms.items():
        fn = dict(g.action[m])
        if s == x:
            fn[copy] = copy if m == c.identity[x] else g.action[m][v]
        action[m] = fn
    return SetValuedFunctor(c, value, action, f"{g.name}+{v!r}")


# --- Beck–Chevalley ---------------------------------------------------------


def beck_chevalley_check(
    p: FinFunctor, q: FinFunctor, k: FinFunctor, h: FinFunctor, f: SetValuedFunctor,
    cap: EnumerationCap = DEFAULT_CAP,
) -> Report:
    """Compare ``Lan_q(F∘p)`` with ``(Lan_k F)∘h`` for the square ``k∘p = h∘q``.

    ``p: P→C``, ``q: P→E``, ``k: C→D``, ``h: E→D`` and ``F: C→Set``.  The
    canonical comparison map is computed at every object of ``E`` and must be
    a bijection there.
    """
    if not compose_functors(k, p).same_as(compose_functors(h, q)):
        raise PreconditionError("square does not commute on the nose")
    if f.source != k.source:
        raise PreconditionError("functor does not live on the source of k")
    lhs = kan_extend("left", precompose(f, p), q, cap)
    rhs = kan_extend("left", f, k, cap)
    e, d = q.target, k.target
    out, sizes = [], {}
    for b in e.objects:
        hb = h.ob(b)
        rhs_values = rhs.functor.value[hb]
        cc = comma_category(k, hb, "over")
        colim_rhs = finset_colimit(precompose(f, cc.projection))
        image = {}
        for o, v in lhs.functor.value[b]:
            x, arrow = json.loads(o)
            target_obj = _cid(p.ob(x), h.mor(arrow))
            image[(o, v)] = colim_rhs.injections[target_obj][v]
        sizes[b] = (len(lhs.functor.value[b]), len(rhs_values))
        vals = list(image.values())
        bijective = len(set(vals)) == len(vals) and set(vals) == set(rhs_values)
        if not bijective:
            out.append(
                Finding(
                    "base-change",
                    f"at {b}: restricted-then-extended has {sizes[b][0]} elements, "
                    f"extended-then-restricted has {sizes[b][1]}; comparison is not a bijection",
                    (b,),
                )
            )
    return Report("Beck–Chevalley", tuple(out), {"sizes": sizes})
