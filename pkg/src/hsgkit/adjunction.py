"""Adjunctions between finite categories, induced monads and idempotency."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import singledispatch
from typing import Mapping

from .category import (
    DEFAULT_CAP,
    EnumerationCap,
    FinCategory,
    FinFunctor,
    FinNatTrans,
    Preorder,
    chain,
    compose_functors,
    identity_functor,
    identity_nat,
    thin_from_preorder,
    validate_functor,
    validate_nat_trans,
)
from .errors import CapacityError, MalformedInputError, NotFoundError, PreconditionError
from .grid import Grid
from .report import Finding, Report

UNDEF, DEFINE = "Undef", "Define"
EMPTY, NONEMPTY = "Empty", "NonEmpty"


def c0() -> FinCategory:
    return chain([UNDEF, DEFINE], name="C0")


def c1() -> FinCategory:
    return chain([EMPTY, NONEMPTY], name="C1")


def two() -> FinCategory:
    return chain(["⊥", "⊤"], name="2")


@dataclass(frozen=True)
class Adjunction:
    left: FinFunctor
    right: FinFunctor
    unit: FinNatTrans
    counit: FinNatTrans
    name: str = ""

    @property
    def lower(self) -> FinCategory:
        """Source of the left adjoint."""
        return self.left.source

    @property
    def upper(self) -> FinCategory:
        return self.left.target


@dataclass(frozen=True)
class Monad:
    endofunctor: FinFunctor
    unit: FinNatTrans
    multiplication: FinNatTrans
    name: str = ""


# --- skeletal finite sets and posets -------------------------------------


def _fn_id(src: str, tgt: str, fn: tuple) -> str:
    return f"{src}→{tgt}:" + ",".join(map(str, fn))


def _build_concrete(objects: list, size: dict, admissible, name: str) -> FinCategory:
    """Category whose morphisms are functions between underlying sets ``range(size)``.

    ``admissible(x, y, fn)`` filters the functions kept as morphisms.
    """
    morphisms, fns, by_fn = {}, {}, {}
    for x in objects:
        for y in objects:
            for fn in itertools.product(range(size[y]), repeat=size[x]):
                if admissible(x, y, fn):
                    m = _fn_id(x, y, fn)
                    morphisms[m] = (x, y)
                    fns[m] = fn
                    by_fn[(x, y, fn)] = m
    identity = {x: by_fn[(x, x, tuple(range(size[x])))] for x in objects}
    compose = {}
    for f, (x, y) in morphisms.items():
        for z in objects:
            for fn_g in itertools.product(range(size[z]), repeat=size[y]):
                g = by_fn.get((y, z, fn_g))
                if g is None:
                    continue
                compose[(g, f)] = by_fn[(x, z, tuple(fn_g[i] for i in fns[f]))]
    # all morphisms sit at grade 0: these categories carry no mapping hierarchy
    grade = {m: 0 for m in morphisms}
    c = FinCategory(tuple(objects), morphisms, identity, compose, grade, name)
    object.__setattr__(c, "_functions", fns)
    object.__setattr__(c, "_by_function", by_fn)
    return c


def function_of(c: FinCategory, m: str) -> tuple:
    return c._functions[m]


def morphism_of(c: FinCategory, x: str, y: str, fn) -> str:
    return c._by_function[(x, y, tuple(fn))]


def _finset_morphism_count(n: int) -> int:
    return sum(m**k for k in range(n + 1) for m in range(n + 1))


def finset_category(n: int, cap: EnumerationCap = DEFAULT_CAP) -> FinCategory:
    """Skeletal FinSet on sizes 0..n; object ``"k"`` is ``{0, …, k-1}``."""
    if n < 0:
        raise PreconditionError("size bound must be nonnegative")
    if n + 1 > cap.max_objects or _finset_morphism_count(n) > cap.max_morphisms:
        raise CapacityError(
            f"finite sets of size ≤ {n} need {n + 1} objects / {_finset_morphism_count(n)} morphisms;"
            f" cap is {cap.max_objects}/{cap.max_morphisms}"
        )
    objects = [str(k) for k in range(n + 1)]
    return _build_concrete(objects, {x: int(x) for x in objects}, lambda x, y, fn: True, f"FinSet≤{n}")


def _poset_name(k: int, strict: tuple) -> str:
    return f"P{k}[" + ",".join(f"{a}<{b}" for a, b in strict) + "]"


def poset_classes(k: int) -> list[tuple]:
    """Canonical strict-order relations on ``range(k)``, one per isomorphism class."""
    pairs = [(a, b) for a in range(k) for b in range(k) if a != b]
    seen, out = set(), []
    for bits in range(1 << len(pairs)):
        rel = {pairs[i] for i in range(len(pairs)) if bits >> i & 1}
        if any((b, a) in rel for a, b in rel):
            continue
        if any((a, c) not in rel for a, b in rel for b2, c in rel if b == b2 and a != c):
            continue
        canon = min(tuple(sorted((p[a], p[b]) for a, b in rel)) for p in itertools.permutations(range(k)))
        if canon not in seen:
            seen.add(canon)
            out.append(canon)
    return sorted(out, key=lambda r: (len(r), r))


def _poset_object_count(n: int) -> int:
    return sum(len(poset_classes(k)) for k in range(n + 1))


def poset_category(n: int, cap: EnumerationCap = DEFAULT_CAP) -> FinCategory:
    """Finite posets of size ≤ n up to isomorphism, with monotone maps."""
    if n < 0:
        raise PreconditionError("size bound must be nonnegative")
    count = _poset_object_count(n) if n <= 4 else cap.max_objects + 1
    if count > cap.max_objects:
        raise CapacityError(f"posets of size ≤ {n} give {count} objects; cap is {cap.max_objects}")
    objects, size, order = [], {}, {}
    for k in range(n + 1):
        for strict in poset_classes(k):
            x = _poset_name(k, strict)
            objects.append(x)
            size[x] = k
            order[x] = set(strict) | {(i, i) for i in range(k)}

    def monotone(x, y, fn):
        return all((fn[a], fn[b]) in order[y] for a, b in order[x])

    c = _build_concrete(objects, size, monotone, f"Pos≤{n}")
    if len(c.morphisms) > cap.max_morphisms:
        raise CapacityError(f"{c.name} has {len(c.morphisms)} morphisms; cap is {cap.max_morphisms}")
    object.__setattr__(c, "_orders", order)
    return c


def underlying_size(c: FinCategory, x: str) -> int:
    return len(function_of(c, c.identity[x]))


# --- builtin adjunctions --------------------------------------------------


def _definability(grid: Grid, cap: EnumerationCap) -> Adjunction:
    tokens = list(grid.tokens)
    delta = dict(grid.delta)
    bottoms = [t for t in tokens if not delta[t]]
    tops = [t for t in tokens if delta[t]]
    if not bottoms:
        tokens.append("⊥_δ")
        delta["⊥_δ"] = False
        bottoms = ["⊥_δ"]
    if not tops:
        tokens.append("⊤_δ")
        delta["⊤_δ"] = True
        tops = ["⊤_δ"]
    if len(tokens) > cap.max_objects:
        raise CapacityError(f"definability category has {len(tokens)} objects; cap is {cap.max_objects}")
    t_delta = thin_from_preorder(Preorder.from_function(tokens, lambda x, y: delta[x] <= delta[y]), "T_δ")
    cap.check(t_delta, "T_δ")
    target = c0()
    cls = {x: DEFINE if delta[x] else UNDEF for x in tokens}
    sigma = FinFunctor(
        t_delta,
        target,
        cls,
        {m: target.hom(cls[s], cls[t])[0] for m, (s, t) in t_delta.morphisms.items()},
        "Σ_def",
    )
    rep = {UNDEF: bottoms[0], DEFINE: tops[0]}
    iota = FinFunctor(
        target,
        t_delta,
        rep,
        {m: t_delta.hom(rep[s], rep[t])[0] for m, (s, t) in target.morphisms.items()},
        "ι₀",
    )
    gf = compose_functors(iota, sigma)
    fg = compose_functors(sigma, iota)
    unit = FinNatTrans(identity_functor(t_delta), gf, {x: t_delta.hom(x, gf.ob(x))[0] for x in tokens}, "η")
    counit = FinNatTrans(fg, identity_functor(target), {a: target.identity[a] for a in target.objects}, "ε")
    return Adjunction(sigma, iota, unit, counit, "definability")


def _emptiness(n: int, cap: EnumerationCap) -> Adjunction:
    sets = finset_category(n, cap)
    b = c1()
    cls = {x: EMPTY if x == "0" else NONEMPTY for x in sets.objects}
    sigma = FinFunctor(
        sets, b, cls, {m: b.hom(cls[s], cls[t])[0] for m, (s, t) in sets.morphisms.items()}, "Σ_emp"
    )
    if n < 1:
        raise PreconditionError("emptiness adjunction needs sets of size up to at least 1")
    rep = {EMPTY: "0", NONEMPTY: "1"}
    iota = FinFunctor(
        b, sets, rep, {m: sets.hom(rep[s], rep[t])[0] for m, (s, t) in b.morphisms.items()}, "ι₁"
    )
    gf = compose_functors(iota, sigma)
    unit = {}
    for x in sets.objects:
        k = int(x)
        unit[x] = morphism_of(sets, x, gf.ob(x), (0,) * k)
    counit = {a: b.identity[a] for a in b.objects}
    return Adjunction(
        sigma,
        iota,
        FinNatTrans(identity_functor(sets), gf, unit, "η"),
        FinNatTrans(compose_functors(sigma, iota), identity_functor(b), counit, "ε"),
        "emptiness",
    )


def _discrete_order(n: int, cap: EnumerationCap) -> Adjunction:
    sets = finset_category(n, cap)
    pos = poset_category(n, cap)
    discrete = {str(k): _poset_name(k, ()) for k in range(n + 1)}
    delta = FinFunctor(
        sets,
        pos,
        discrete,
        {m: morphism_of(pos, discrete[s], discrete[t], function_of(sets, m)) for m, (s, t) in sets.morphisms.items()},
        "Δ",
    )
    forget_obj = {x: str(underlying_size(pos, x)) for x in pos.objects}
    forget = FinFunctor(
        pos,
        sets,
        forget_obj,
        {m: morphism_of(sets, forget_obj[s], forget_obj[t], function_of(pos, m)) for m, (s, t) in pos.morphisms.items()},
        "U_pos",
    )
    gf = compose_functors(forget, delta)
    fg = compose_functors(delta, forget)
    unit = {x: sets.identity[x] for x in sets.objects}
    counit = {
        p: morphism_of(pos, fg.ob(p), p, tuple(range(underlying_size(pos, p)))) for p in pos.objects
    }
    return Adjunction(
        delta,
        forget,
        FinNatTrans(identity_functor(sets), gf, unit, "η"),
        FinNatTrans(fg, identity_functor(pos), counit, "ε"),
        "discrete_order",
    )


def identity_adjunction(c: FinCategory) -> Adjunction:
    i = identity_functor(c)
    return Adjunction(i, i, identity_nat(i), identity_nat(i), f"identity on {c.name}")


def builtin_adjunction(name: str, params=None, cap: EnumerationCap = DEFAULT_CAP) -> Adjunction:
    """Construct a named adjunction.

    ``definability`` takes a :class:`Grid` (or ``{"grid": Grid}``);
    ``emptiness`` and ``discrete_order`` take a size bound ``n`` (or ``{"n": n}``).
    """
    if isinstance(params, Mapping):
        params = params.get("grid", params.get("n"))
    if name == "definability":
        if not isinstance(params, Grid):
            raise PreconditionError("definability adjunction needs a grid")
        return _definability(params, cap)
    if name == "emptiness":
        return _emptiness(3 if params is None else int(params), cap)
    if name == "discrete_order":
        return _discrete_order(2 if params is None else int(params), cap)
    raise NotFoundError(f"unknown builtin adjunction {name!r}")


# --- verification ----------------------------------------------------------


def _too_big(c: FinCategory, cap: EnumerationCap) -> bool:
    return len(c.objects) > cap.max_objects or len(c.morphisms) > cap.max_morphisms


def verify_adjunction(adj: Adjunction, cap: EnumerationCap = DEFAULT_CAP) -> Report:
    """Exhaustive check of triangle identities and the hom-set bijection.

    The bijection is witnessed by the transposition ``φ(f) = G f ∘ η_x`` and
    checked natural in both variables.
    """
    f, g, eta, eps = adj.left, adj.right, adj.unit, adj.counit
    c, d = f.source, f.target
    for cat in (c, d):
        if _too_big(cat, cap):
            raise CapacityError(
                f"{cat.name or 'category'} has {len(cat.objects)} objects / {len(cat.morphisms)} morphisms;"
                f" cap is {cap.max_objects}/{cap.max_morphisms}"
            )
    if g.source != d or g.target != c:
        raise MalformedInputError("left and right adjoints are not opposite functors")
    subject = adj.name or "adjunction"
    findings = list(validate_functor(f).findings) + list(validate_functor(g).findings)
    if set(eta.components) != set(c.objects):
        raise MalformedInputError("unit components are not total on the lower category")
    if set(eps.components) != set(d.objects):
        raise MalformedInputError("counit components are not total on the upper category")
    for x in c.objects:
        if c.morphisms[eta[x]] != (x, g.ob(f.ob(x))):
            findings.append(Finding("unit-typing", f"unit component at {x} is not {x}→GF{x}", (x,)))
    for a in d.objects:
        if d.morphisms[eps[a]] != (f.ob(g.ob(a)), a):
            findings.append(Finding("counit-typing", f"counit component at {a} is not FG{a}→{a}", (a,)))
    if findings:
        return Report(subject, tuple(findings))
    findings += [
        Finding("unit-naturality", fi.message, fi.location) for fi in validate_nat_trans(eta).findings
    ]
    findings += [
        Finding("counit-naturality", fi.message, fi.location) for fi in validate_nat_trans(eps).findings
    ]
    for x in c.objects:
        fx = f.ob(x)
        lhs = d.compose.get((eps[fx], f.mor(eta[x])))
        if lhs != d.identity[fx]:
            findings.append(
                Finding("triangle-left", f"(εF)∘(Fη) at {x} is {lhs}, expected {d.identity[fx]}", (x, eta[x], eps[fx]))
            )
    for a in d.objects:
        ga = g.ob(a)
        lhs = c.compose.get((g.mor(eps[a]), eta[ga]))
        if lhs != c.identity[ga]:
            findings.append(
                Finding("triangle-right", f"(Gε)∘(ηG) at {a} is {lhs}, expected {c.identity[ga]}", (a, eps[a], eta[ga]))
            )
    counts = {}
    for x in c.objects:
        for a in d.objects:
            left = d.hom(f.ob(x), a)
            right = c.hom(x, g.ob(a))
            counts[(x, a)] = (len(left), len(right))
            if len(left) != len(right):
                findings.append(
                    Finding("hom-count", f"|Hom(F{x},{a})| = {len(left)} but |Hom({x},G{a})| = {len(right)}", (x, a))
                )
                continue
            images = [c.compose.get((g.mor(h), eta[x])) for h in left]
            if len(set(images)) != len(images) or set(images) != set(right):
                findings.append(Finding("hom-bijection", f"transposition at ({x}, {a}) is not a bijection", (x, a)))
    # naturality of φ in each variable
    for x in c.objects:
        for a in d.objects:
            for h in d.hom(f.ob(x), a):
                phi = c.compose.get((g.mor(h), eta[x]))
                for k in d.out_of(a):
                    lhs = c.compose.get((g.mor(d.comp(k, h)), eta[x]))
                    rhs = c.compose.get((g.mor(k), phi))
                    if lhs != rhs:
                        findings.append(
                            Finding("hom-naturality", f"transposition not natural in the upper variable at {k}", (x, a, h, k))
                        )
                for u in c.into(x):
                    w = c.source(u)
                    lhs = c.compose.get((g.mor(d.comp(h, f.mor(u))), eta[w]))
                    rhs = c.compose.get((phi, u))
                    if lhs != rhs:
                        findings.append(
                            Finding("hom-naturality", f"transposition not natural in the lower variable at {u}", (x, a, h, u))
                        )
    return Report(subject, tuple(findings), {"hom_counts": counts})


# --- monads ----------------------------------------------------------------


def monad_of(adj: Adjunction) -> Monad:
    """``T = G∘F`` with unit η and multiplication ``GεF``."""
    f, g = adj.left, adj.right
    t = compose_functors(g, f, name=f"{g.name}{f.name}")
    mu = {x: g.mor(adj.counit[f.ob(x)]) for x in f.source.objects}
    tt = compose_functors(t, t)
    return Monad(
        t,
        FinNatTrans(adj.unit.source, t, dict(adj.unit.components), "η"),
        FinNatTrans(tt, t, mu, "μ"),
        f"monad of {adj.name}",
    )


def check_monad_laws(m: Monad) -> Report:
    t, eta, mu = m.endofunctor, m.unit, m.multiplication
    c = t.source
    out = list(validate_nat_trans(eta).findings) + list(validate_nat_trans(mu).findings)
    for x in c.objects:
        tx = t.ob(x)
        idt = c.identity[tx]
        if c.compose.get((mu[x], eta[tx])) != idt:
            out.append(Finding("monad-unit", f"μ∘ηT ≠ id at {x}", (x,)))
        if c.compose.get((mu[x], t.mor(eta[x]))) != idt:
            out.append(Finding("monad-unit", f"μ∘Tη ≠ id at {x}", (x,)))
        if c.compose.get((mu[x], t.mor(mu[x]))) != c.compose.get((mu[x], mu[tx])):
            out.append(Finding("monad-associativity", f"μ∘Tμ ≠ μ∘μT at {x}", (x,)))
    return Report(m.name or "monad", tuple(out))


@dataclass(frozen=True)
class IdempotencyResult:
    idempotent: bool
    witness: object = None
    detail: str = ""

    def __bool__(self):
        return self.idempotent


@singledispatch
def check_idempotent(m) -> IdempotencyResult:
    raise TypeError(f"no idempotency check for {type(m).__name__}")


@check_idempotent.register
def _(m: Monad) -> IdempotencyResult:
    c = m.endofunctor.source
    for x in c.objects:
        if not c.is_iso(m.multiplication[x]):
            return IdempotencyResult(False, x, f"μ at {x} is not invertible")
    return IdempotencyResult(True)


@dataclass(frozen=True)
class ListMonad:
    """The list monad on a finite alphabet, enumerated up to a length bound.

    Every monad on a finite category is idempotent, so the non-idempotent
    fixture has to live on sets: ``T X`` is the set of words over ``X``.
    """

    alphabet: tuple = ("a",)
    bound: int = 2

    def words(self, letters=None, bound=None):
        letters = self.alphabet if letters is None else letters
        bound = self.bound if bound is None else bound
        return [w for n in range(bound + 1) for w in itertools.product(letters, repeat=n)]

    def unit(self, a):
        return (a,)

    def multiply(self, ww):
        return tuple(itertools.chain.from_iterable(ww))

    def nested(self):
        return self.words(self.words())


def check_list_monad_laws(m: ListMonad) -> Report:
    out = []
    for w in m.words():
        if m.multiply(tuple(m.unit(a) for a in w)) != w:
            out.append(Finding("monad-unit", f"μ∘Tη ≠ id at {list(w)}", (w,)))
        if m.multiply(m.unit(w)) != w:
            out.append(Finding("monad-unit", f"μ∘ηT ≠ id at {list(w)}", (w,)))
    for www in m.words(m.nested(), 2):
        if m.multiply(tuple(m.multiply(ww) for ww in www)) != m.multiply(m.multiply(www)):
            out.append(Finding("monad-associativity", f"μ∘Tμ ≠ μ∘μT at {www}", (www,)))
    return Report("list monad", tuple(out))


@check_idempotent.register
def _(m: ListMonad) -> IdempotencyResult:
    seen = {}
    for ww in m.nested():
        w = m.multiply(ww)
        if w in seen and seen[w] != ww:
            return IdempotencyResult(
                False,
                (seen[w], ww),
                f"μ sends both {[list(v) for v in seen[w]]} and {[list(v) for v in ww]} to {list(w)}",
            )
        seen.setdefault(w, ww)
    return IdempotencyResult(True)
