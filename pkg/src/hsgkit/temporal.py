"""Time binding, dependency graphs and the no-future-reference guard."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import MalformedInputError, NotFoundError, PreconditionError
from .grid import Grid, project
from .report import Finding, Report

MODES = ("report", "apply", "apply_transitive")


@dataclass(frozen=True)
class DepGraph:
    """Edges ``(x, y)`` read "x depends on y"."""

    edges: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(dict.fromkeys(tuple(e) for e in self.edges)))

    def check_against(self, g: Grid):
        for x, y in self.edges:
            for t in (x, y):
                if t not in g.delta:
                    raise MalformedInputError(f"dependency edge ({x}, {y}) mentions unknown token {t!r}")

    def successors(self, x: str) -> list:
        return [y for a, y in self.edges if a == x]

    def predecessors(self, y: str) -> list:
        return [a for a, b in self.edges if b == y]


@dataclass(frozen=True)
class TimeBinding:
    axis: str = "time"

    def validate(self, g: Grid):
        try:
            a = g.axis(self.axis)
        except NotFoundError as e:
            raise PreconditionError(f"time axis {self.axis!r} is not an axis of the grid") from e
        if a.kind != "int":
            raise PreconditionError(f"time axis {self.axis!r} is not integer-indexed")
        return a

    def tau(self, g: Grid, x: str) -> int:
        return project(g, x, self.axis)

    def horizon(self, g: Grid) -> int:
        return max(self.validate(g).indices)


def future_violations(g: Grid, d: DepGraph, tb: TimeBinding) -> list[tuple]:
    """Edges whose target lies strictly later than their source, in edge order."""
    tb.validate(g)
    d.check_against(g)
    return [(x, y) for x, y in d.edges if tb.tau(g, y) > tb.tau(g, x)]


@dataclass(frozen=True)
class Enforcement:
    grid: Grid
    report: Report
    flipped: tuple


def enforce_no_future(g: Grid, d: DepGraph, tb: TimeBinding, mode: str = "apply") -> Enforcement:
    """Force δ = ⊥ on tokens with a future dependency.

    ``apply_transitive`` also sends ⊥ back along dependency edges until
    nothing changes; ``report`` leaves the grid as it is.
    """
    if mode not in MODES:
        raise PreconditionError(f"mode must be one of {', '.join(MODES)}")
    viol = future_violations(g, d, tb)
    findings = [
        Finding("future-reference", f"{x} (τ={tb.tau(g, x)}) depends on {y} (τ={tb.tau(g, y)})", (x, y))
        for x, y in viol
    ]
    if mode == "report":
        return Enforcement(g, Report("no-future-reference", tuple(findings)), ())
    bad = {x for x, _y in viol}
    if mode == "apply_transitive":
        frontier = list(bad)
        while frontier:
            y = frontier.pop()
            for x in d.predecessors(y):
                if x not in bad:
                    bad.add(x)
                    frontier.append(x)
    flipped = tuple(t for t in g.tokens if t in bad and g.delta[t])
    new = g.with_delta({t: False for t in bad}) if bad else g
    info = [Finding("undefined", f"δ({t}) set to ⊥", (t,), "info") for t in flipped]
    return Enforcement(new, Report("no-future-reference", tuple(info)), flipped)


def reachable(d: DepGraph, x: str) -> frozenset:
    seen = {x}
    stack = [x]
    while stack:
        for y in d.successors(stack.pop()):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return frozenset(seen)


def evaluate_at_time(g: Grid, d: DepGraph, tb: TimeBinding, t: int, x: str) -> frozenset:
    """The tokens consulted to evaluate ``x`` at time ``t``, or the empty set.

    Evaluation succeeds when every token reachable from ``x`` (itself
    included) is defined and no later than ``t``.
    """
    if x not in g.delta:
        raise NotFoundError(f"unknown token {x!r}")
    tb.validate(g)
    closure = reachable(d, x)
    if all(g.delta[y] and tb.tau(g, y) <= t for y in closure):
        return closure
    return frozenset()


def check_time_monotonicity(g: Grid, d: DepGraph, tb: TimeBinding, x: str) -> bool:
    axis = tb.validate(g)
    times = sorted(axis.indices)
    seen_defined = False
    for t in times:
        ok = bool(evaluate_at_time(g, d, tb, t, x))
        if seen_defined and not ok:
            return False
        seen_defined = seen_defined or ok
    return True


def dep_from_body(edges: Iterable) -> DepGraph:
    out = []
    for e in edges:
        if isinstance(e, dict):
            out.append((e["from"], e["to"]))
        else:
            x, y = e
            out.append((x, y))
    return DepGraph(tuple(out))
