"""State grids: axes with finite index sets, tokens with coordinates, and δ."""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import MalformedInputError, NotFoundError
from .report import Finding, Report

TOP = True
BOTTOM = False

_DELTA_WORDS = {
    "⊤": True, "top": True, "T": True, "1": True, "true": True,
    "⊥": False, "bottom": False, "F": False, "0": False, "false": False,
}


def parse_delta(v) -> bool:
    if isinstance(v, bool):
        return v
    if isinstance(v, str) and v in _DELTA_WORDS:
        return _DELTA_WORDS[v]
    raise MalformedInputError(f"definability value must be ⊤ or ⊥, got {v!r}")


def delta_symbol(v: bool) -> str:
    return "⊤" if v else "⊥"


@dataclass(frozen=True)
class Axis:
    name: str
    indices: tuple
    kind: str = "int"  # "int" or "symbol"
    labels: Mapping = field(default_factory=dict)
    descending: bool = False  # render order only

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(self.indices))
        object.__setattr__(self, "labels", MappingProxyType(dict(self.labels)))
        if not self.name:
            raise MalformedInputError("axis name must be nonempty")
        if not self.indices:
            raise MalformedInputError(f"axis {self.name} has no indices")
        if len(set(self.indices)) != len(self.indices):
            raise MalformedInputError(f"axis {self.name} has repeated indices")
        if self.kind not in ("int", "symbol"):
            raise MalformedInputError(f"axis {self.name}: kind must be int or symbol")
        for i in self.indices:
            ok = isinstance(i, int) and not isinstance(i, bool) if self.kind == "int" else isinstance(i, str)
            if not ok:
                raise MalformedInputError(f"axis {self.name}: index {i!r} is not of kind {self.kind}")

    def label(self, i) -> str:
        return str(self.labels.get(i, self.labels.get(str(i), i)))

    def position(self, i) -> int:
        return self.indices.index(i)


@dataclass(frozen=True)
class Token:
    id: str
    coords: tuple
    delta: bool
    label: str = ""


@dataclass(frozen=True)
class Grid:
    axes: tuple
    tokens: tuple
    coords: Mapping[tuple, object]
    delta: Mapping[str, bool]
    labels: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "coords", MappingProxyType(dict(self.coords)))
        object.__setattr__(self, "delta", MappingProxyType(dict(self.delta)))
        object.__setattr__(self, "labels", MappingProxyType(dict(self.labels)))

    def axis(self, name: str) -> Axis:
        for a in self.axes:
            if a.name == name:
                return a
        raise NotFoundError(f"unknown axis {name!r}")

    @property
    def axis_names(self) -> tuple:
        return tuple(a.name for a in self.axes)

    def coordinate_tuple(self, t: str) -> tuple:
        return tuple(self.coords[(t, a.name)] for a in self.axes)

    def token(self, t: str) -> Token:
        if t not in self.delta:
            raise NotFoundError(f"unknown token {t!r}")
        return Token(t, self.coordinate_tuple(t), self.delta[t], self.labels.get(t, ""))

    def with_delta(self, updates: Mapping[str, bool]) -> "Grid":
        d = dict(self.delta)
        for t, v in updates.items():
            if t not in d:
                raise NotFoundError(f"unknown token {t!r}")
            d[t] = v
        return Grid(self.axes, self.tokens, self.coords, d, self.labels)

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return (
            self.axes == other.axes
            and self.tokens == other.tokens
            and dict(self.coords) == dict(other.coords)
            and dict(self.delta) == dict(other.delta)
            and dict(self.labels) == dict(other.labels)
        )

    def __hash__(self):
        return hash((self.axes, self.tokens, tuple(sorted(self.delta.items()))))


def build_grid(axes: Iterable[Axis], tokens, delta=None, labels=None) -> Grid:
    """Validate and assemble a grid.

    ``tokens`` is a sequence of ``(id, coords)`` pairs or a mapping; ``coords``
    is a mapping axis name → index or a tuple in axis order.  δ defaults to ⊤.
    """
    axes = tuple(axes)
    names = [a.name for a in axes]
    if len(set(names)) != len(names):
        raise MalformedInputError("duplicate axis names")
    items = list(tokens.items()) if isinstance(tokens, Mapping) else list(tokens)
    delta = dict(delta or {})
    labels = dict(labels or {})
    order, coords, dmap = [], {}, {}
    for tid, c in items:
        if not isinstance(tid, str) or not tid:
            raise MalformedInputError(f"token id must be a nonempty string, got {tid!r}")
        if tid in dmap:
            raise MalformedInputError(f"duplicate token id {tid!r}")
        if not isinstance(c, Mapping):
            c = tuple(c)
            if len(c) != len(axes):
                raise MalformedInputError(f"token {tid}: expected {len(axes)} coordinates, got {len(c)}")
            c = dict(zip(names, c))
        extra = set(c) - set(names)
        if extra:
            raise MalformedInputError(f"token {tid}: coordinates on undeclared axes {sorted(extra)}")
        for a in axes:
            if a.name not in c:
                raise MalformedInputError(f"token {tid}: missing coordinate on axis {a.name}")
            v = c[a.name]
            if v not in a.indices or (a.kind == "int" and isinstance(v, bool)):
                raise MalformedInputError(
                    f"token {tid}: coordinate {v!r} outside index set of axis {a.name}"
                )
            coords[(tid, a.name)] = v
        order.append(tid)
        dmap[tid] = parse_delta(delta.get(tid, True))
    unknown = (set(delta) | set(labels)) - set(dmap)
    if unknown:
        raise MalformedInputError(f"δ or labels given for undeclared tokens {sorted(unknown)}")
    return Grid(axes, tuple(order), coords, dmap, labels)


def project(g: Grid, t: str, a: str):
    if t not in g.delta:
        raise NotFoundError(f"unknown token {t!r}")
    g.axis(a)
    return g.coords[(t, a)]


def def_subuniverse(g: Grid) -> tuple:
    """Tokens with δ = ⊤, in grid order."""
    return tuple(t for t in g.tokens if g.delta[t])


def check_state_identity(g: Grid) -> Report:
    """One finding per class of defined tokens sharing a coordinate tuple."""
    classes: dict[tuple, list] = {}
    for t in def_subuniverse(g):
        classes.setdefault(g.coordinate_tuple(t), []).append(t)
    findings = [
        Finding(
            "duplicate-state",
            f"defined tokens {', '.join(ts)} share coordinates {coords}",
            tuple(ts),
        )
        for coords, ts in classes.items()
        if len(ts) > 1
    ]
    return Report("state-identity", tuple(findings), {"classes": [list(f.location) for f in findings]})


def grid_to_body(g: Grid) -> dict:
    return {
        "axes": [
            {
                "name": a.name,
                "kind": a.kind,
                "indices": list(a.indices),
                **({"labels": {str(k): v for k, v in a.labels.items()}} if a.labels else {}),
                **({"descending": True} if a.descending else {}),
            }
            for a in g.axes
        ],
        "tokens": [
            {
                "id": t,
                "coords": {a.name: g.coords[(t, a.name)] for a in g.axes},
                "delta": delta_symbol(g.delta[t]),
                **({"label": g.labels[t]} if t in g.labels else {}),
            }
            for t in g.tokens
        ],
    }


def grid_from_body(body: Mapping) -> Grid:
    axes = []
    for a in body.get("axes", []):
        kind = a.get("kind", "int")
        labels = dict(a.get("labels", {}))
        if kind == "int":
            labels = {int(k) if isinstance(k, str) and k.lstrip("-").isdigit() else k: v for k, v in labels.items()}
        axes.append(Axis(a["name"], tuple(a["indices"]), kind, labels, bool(a.get("descending", False))))
    tokens, delta, labels = [], {}, {}
    for t in body.get("tokens", []):
        tokens.append((t["id"], t.get("coords", {})))
        if "delta" in t:
            delta[t["id"]] = t["delta"]
        if "label" in t:
            labels[t["id"]] = t["label"]
    return build_grid(axes, tokens, delta, labels)
