"""External criteria as guarded evaluation, the comparison κ, and the J-relative
quasi-adjunction between the definability and emptiness levels."""
from __future__ import annotations

import operator
import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Union

from .adjunction import DEFINE, EMPTY, NONEMPTY, UNDEF, c0, c1
from .category import (
    FinCategory,
    FinFunctor,
    FinNatTrans,
    Preorder,
    thin_from_preorder,
    validate_functor,
    validate_nat_trans,
)
from .errors import GuardTypeError, MalformedInputError, NotFoundError
from .grid import Grid, parse_delta
from .report import Finding, Report
from .temporal import DepGraph, TimeBinding, evaluate_at_time

# --- guard expressions -----------------------------------------------------

_OPS = {
    "<": operator.lt, "≤": operator.le, "<=": operator.le,
    "=": operator.eq, "==": operator.eq, "≠": operator.ne, "!=": operator.ne,
    ">": operator.gt, "≥": operator.ge, ">=": operator.ge,
}
_EQ_OPS = {"=", "==", "≠", "!="}


@dataclass(frozen=True)
class GuardExpr:
    op: str  # and | or | not | delta_is | coord_cmp | reachable_within | true | false
    args: tuple = ()

    def __str__(self):
        if self.op in ("true", "false"):
            return self.op
        return "(" + " ".join([self.op, *(str(a) for a in self.args)]) + ")"


TRUE = GuardExpr("true")

_TOKEN = re.compile(r"\s*(\(|\)|[^\s()]+)")


def parse_guard(text: str) -> GuardExpr:
    """Parse ``expr := atom | (and expr+) | (or expr+) | (not expr)``."""
    if not isinstance(text, str):
        raise MalformedInputError("guard must be a string")
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise MalformedInputError(f"guard: unexpected character at offset {pos}")
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    if not tokens:
        raise MalformedInputError("guard: empty expression")
    i = 0

    def expect(what):
        nonlocal i
        if i >= len(tokens):
            raise MalformedInputError(f"guard: unexpected end of input, expected {what}")
        tok = tokens[i]
        i += 1
        return tok

    def parse():
        tok, at = expect("expression")
        if tok == ")":
            raise MalformedInputError(f"guard: unexpected ')' at offset {at}")
        if tok != "(":
            if tok in ("true", "false"):
                return GuardExpr(tok)
            raise MalformedInputError(f"guard: bare symbol {tok!r} at offset {at}")
        head, hat = expect("operator")
        if head in ("(", ")"):
            raise MalformedInputError(f"guard: expected operator at offset {hat}")
        if head in ("and", "or", "not"):
            args = []
            while i < len(tokens) and tokens[i][0] != ")":
                args.append(parse())
            expect("')'")
            if not args or (head == "not" and len(args) != 1):
                raise MalformedInputError(f"guard: wrong number of operands for {head} at offset {hat}")
            return GuardExpr(head, tuple(args))
        args = []
        while i < len(tokens) and tokens[i][0] != ")":
            tok2, at2 = expect("argument")
            if tok2 == "(":
                raise MalformedInputError(f"guard: nested expression inside atom at offset {at2}")
            args.append(tok2)
        expect("')'")
        arity = {"delta_is": 1, "coord_cmp": 3, "reachable_within": 1}
        if head not in arity:
            raise MalformedInputError(f"guard: unknown operator {head!r} at offset {hat}")
        if len(args) != arity[head]:
            raise MalformedInputError(f"guard: {head} takes {arity[head]} argument(s) at offset {hat}")
        return GuardExpr(head, tuple(args))

    expr = parse()
    if i != len(tokens):
        raise MalformedInputError(f"guard: trailing input at offset {tokens[i][1]}")
    return expr


def _literal(axis_kind: str, s: str):
    if axis_kind == "int":
        try:
            return int(s)
        except ValueError:
            raise GuardTypeError(f"constant {s!r} is not an integer") from None
    return s


def typecheck_guard(e: GuardExpr, g: Grid, temporal: bool) -> None:
    """Raise :class:`GuardTypeError` if ``e`` cannot be evaluated on ``g``."""
    if e.op in ("true", "false"):
        return
    if e.op in ("and", "or", "not"):
        for a in e.args:
            typecheck_guard(a, g, temporal)
        return
    if e.op == "delta_is":
        try:
            parse_delta(e.args[0])
        except MalformedInputError:
            raise GuardTypeError(f"delta_is expects ⊤ or ⊥, got {e.args[0]!r}") from None
        return
    if e.op == "coord_cmp":
        name, op, const = e.args
        try:
            axis = g.axis(name)
        except NotFoundError:
            raise GuardTypeError(f"coord_cmp on unknown axis {name!r}") from None
        if op not in _OPS:
            raise GuardTypeError(f"unknown comparison {op!r}")
        if axis.kind == "symbol" and op not in _EQ_OPS:
            raise GuardTypeError(f"axis {name} is symbolic; only = and ≠ apply")
        _literal(axis.kind, const)
        return
    if e.op == "reachable_within":
        if not temporal:
            raise GuardTypeError("reachable_within needs a dependency graph and a time axis")
        _literal("int", e.args[0])
        return
    raise GuardTypeError(f"unknown guard operator {e.op!r}")


@dataclass(frozen=True)
class ExternalCriterion:
    """``J(x)`` is ``carrier[x]`` when the guard holds at ``x`` and ∅ otherwise.

    ``guard`` is a :class:`GuardExpr`, its text, or a table token → bool.
    Tokens without an explicit carrier get the one-point carrier ``{•}``.
    """

    guard: Union[GuardExpr, Mapping[str, bool], str] = TRUE
    carrier: Mapping[str, tuple] = field(default_factory=dict)
    dep: DepGraph | None = None
    time: TimeBinding | None = None
    name: str = ""

    def __post_init__(self):
        if isinstance(self.guard, str):
            object.__setattr__(self, "guard", parse_guard(self.guard))
        elif not isinstance(self.guard, GuardExpr):
            object.__setattr__(self, "guard", MappingProxyType({k: bool(v) for k, v in self.guard.items()}))
        object.__setattr__(self, "carrier", MappingProxyType({k: tuple(v) for k, v in self.carrier.items()}))

    @property
    def is_table(self) -> bool:
        return not isinstance(self.guard, GuardExpr)

    def carrier_of(self, x: str) -> tuple:
        return self.carrier.get(x, ("•",))


def validate_criterion(j: ExternalCriterion, g: Grid) -> None:
    if j.is_table:
        unknown = set(j.guard) - set(g.delta)
        if unknown:
            raise MalformedInputError(f"guard table mentions unknown tokens {sorted(unknown)}")
    else:
        typecheck_guard(j.guard, g, j.dep is not None and j.time is not None)
    unknown = set(j.carrier) - set(g.delta)
    if unknown:
        raise MalformedInputError(f"carrier given for unknown tokens {sorted(unknown)}")


def _holds(e: GuardExpr, j: ExternalCriterion, g: Grid, x: str) -> bool:
    if e.op == "true":
        return True
    if e.op == "false":
        return False
    if e.op == "and":
        return all(_holds(a, j, g, x) for a in e.args)
    if e.op == "or":
        return any(_holds(a, j, g, x) for a in e.args)
    if e.op == "not":
        return not _holds(e.args[0], j, g, x)
    if e.op == "delta_is":
        return g.delta[x] == parse_delta(e.args[0])
    if e.op == "coord_cmp":
        name, op, const = e.args
        axis = g.axis(name)
        return _OPS[op](g.coords[(x, name)], _literal(axis.kind, const))
    if e.op == "reachable_within":
        return bool(evaluate_at_time(g, j.dep, j.time, int(e.args[0]), x))
    raise GuardTypeError(f"unknown guard operator {e.op!r}")


def guard_holds(j: ExternalCriterion, g: Grid, x: str) -> bool:
    if x not in g.delta:
        raise NotFoundError(f"unknown token {x!r}")
    if j.is_table:
        return bool(j.guard.get(x, False))
    return _holds(j.guard, j, g, x)


def guard_eval(j: ExternalCriterion, g: Grid, x: str) -> frozenset:
    """``J(x)``: the carrier when the guard holds, else the empty set."""
    validate_criterion(j, g)
    return frozenset(j.carrier_of(x)) if guard_holds(j, g, x) else frozenset()


def criterion_values(j: ExternalCriterion, g: Grid) -> dict:
    validate_criterion(j, g)
    return {x: (frozenset(j.carrier_of(x)) if guard_holds(j, g, x) else frozenset()) for x in g.tokens}


# --- comparison transformation and quasi-adjunction ------------------------

TR = {UNDEF: EMPTY, DEFINE: NONEMPTY}
TR_INV = {v: k for k, v in TR.items()}


def tr_functor() -> FinFunctor:
    a, b = c0(), c1()
    return FinFunctor(
        a, b, dict(TR),
        {m: b.hom(TR[s], TR[t])[0] for m, (s, t) in a.morphisms.items()},
        "Tr",
    )


def _sigma_def(x_delta: bool) -> str:
    return DEFINE if x_delta else UNDEF


def _sigma_emp(carrier: frozenset) -> str:
    return NONEMPTY if carrier else EMPTY


@dataclass(frozen=True)
class KappaResult:
    exists: bool
    components: Mapping[str, str]
    witness: str | None = None
    transformation: FinNatTrans | None = None
    domain: FinCategory | None = None
    report: Report = field(default_factory=Report)

    def __bool__(self):
        return self.exists


def kappa_transform(j: ExternalCriterion, g: Grid) -> KappaResult:
    """Build ``κ: Σ_emp∘J ⇒ Tr∘Σ_def`` or return the first token blocking it.

    ``Σ_emp∘J`` is only functorial on the wide subcategory of ``T_δ`` whose
    arrows also respect emptiness of ``J``; naturality is checked there.
    """
    vals = criterion_values(j, g)
    b = c1()
    src = {x: _sigma_emp(vals[x]) for x in g.tokens}
    tgt = {x: TR[_sigma_def(g.delta[x])] for x in g.tokens}
    comps = {}
    for x in g.tokens:
        hom = b.hom(src[x], tgt[x])
        if not hom:
            return KappaResult(
                False,
                MappingProxyType(comps),
                x,
                report=Report(
                    "κ",
                    (Finding("kappa-missing", f"no arrow {src[x]}→{tgt[x]} in C1 at token {x}", (x,)),),
                ),
            )
        comps[x] = hom[0]
    order = {EMPTY: 0, NONEMPTY: 1}
    w = thin_from_preorder(
        Preorder.from_function(
            g.tokens,
            lambda x, y: g.delta[x] <= g.delta[y] and order[src[x]] <= order[src[y]],
        ),
        "W_δ",
    )
    left = FinFunctor(w, b, src, {m: b.hom(src[s], src[t])[0] for m, (s, t) in w.morphisms.items()}, "Σ_emp∘J")
    right = FinFunctor(w, b, tgt, {m: b.hom(tgt[s], tgt[t])[0] for m, (s, t) in w.morphisms.items()}, "Tr∘Σ_def")
    nat = FinNatTrans(left, right, comps, "κ")
    rep = validate_functor(left).merged(validate_functor(right), validate_nat_trans(nat), subject="κ")
    return KappaResult(rep.ok, MappingProxyType(comps), None, nat, w, rep)


@dataclass(frozen=True)
class QuasiAdjunctionReport:
    mode: str  # isomorphism | implication | fails
    table: Mapping[tuple, tuple]  # (x, b) -> (|Hom_C1(Σ_emp J x, b)|, |Hom_C0(Σ_def x, Tr⁻¹ b)|)
    report: Report
    witness: str | None = None
    j0: bool = True
    j1: bool = True

    def to_dict(self):
        return {
            "mode": self.mode,
            "witness": self.witness,
            "j0": self.j0,
            "j1": self.j1,
            "table": [
                {"token": x, "b": b, "left": l, "right": r} for (x, b), (l, r) in self.table.items()
            ],
            **self.report.to_dict(),
        }


def check_quasi_adjunction(j: ExternalCriterion, g: Grid) -> QuasiAdjunctionReport:
    """Classify ``J`` by comparing the two hom tables cell by cell.

    ``isomorphism``: counts agree everywhere.  ``implication``: wherever the
    definability side is inhabited so is the emptiness side.  ``fails``: κ does
    not exist.
    """
    vals = criterion_values(j, g)
    a, b = c0(), c1()
    table = {}
    for x in g.tokens:
        for obj in b.objects:
            left = len(b.hom(_sigma_emp(vals[x]), obj))
            right = len(a.hom(_sigma_def(g.delta[x]), TR_INV[obj]))
            table[(x, obj)] = (left, right)
    j0 = all(not vals[x] for x in g.tokens if not g.delta[x])
    j1 = all(vals[x] for x in g.tokens if g.delta[x])
    kappa = kappa_transform(j, g)
    findings = []
    if not kappa.exists:
        findings.extend(kappa.report.findings)
        return QuasiAdjunctionReport("fails", MappingProxyType(table), Report("quasi-adjunction", tuple(findings)), kappa.witness, j0, j1)
    if all(l == r for l, r in table.values()):
        mode = "isomorphism"
    elif all(l > 0 for l, r in table.values() if r > 0):
        mode = "implication"
        for (x, obj), (l, r) in table.items():
            if l != r:
                findings.append(
                    Finding(
                        "one-way",
                        f"at ({x}, {obj}) the emptiness side has {l} arrow(s), the definability side {r}",
                        (x, obj),
                        "info",
                    )
                )
    else:
        mode = "fails"
        for (x, obj), (l, r) in table.items():
            if r > 0 and l == 0:
                findings.append(Finding("implication", f"implication broken at ({x}, {obj})", (x, obj)))
    return QuasiAdjunctionReport(mode, MappingProxyType(table), Report("quasi-adjunction", tuple(findings)), None, j0, j1)


# --- presets -----------------------------------------------------------------


def preset_guard(name: str, params: Mapping | None = None) -> ExternalCriterion:
    """``observation`` / ``authorization`` take a token set (``observed`` /
    ``granted``); ``reachability`` takes ``t``, ``dep`` and optionally ``time``."""
    params = dict(params or {})
    carrier = params.get("carrier", {})
    if name == "observation":
        return ExternalCriterion({x: True for x in params.get("observed", ())}, carrier, name="observation")
    if name == "authorization":
        return ExternalCriterion({x: True for x in params.get("granted", ())}, carrier, name="authorization")
    if name == "reachability":
        dep = params.get("dep") or DepGraph()
        if not isinstance(dep, DepGraph):
            dep = DepGraph(tuple(tuple(e) for e in dep))
        time = params.get("time") or TimeBinding(params.get("axis", "time"))
        t = int(params.get("t", 0))
        return ExternalCriterion(GuardExpr("reachable_within", (str(t),)), carrier, dep, time, "reachability")
    raise NotFoundError(f"unknown guard preset {name!r}")
