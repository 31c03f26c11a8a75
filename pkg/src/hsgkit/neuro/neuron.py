"""Neuron functions: a clamped affine receptive stage followed by a delayed
threshold gate, and bodies of such functions on points in space."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from ..errors import CapacityError, MalformedInputError
from ..report import Finding, Report


@dataclass(frozen=True)
class Point3:
    id: str
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise MalformedInputError("point id must be a nonempty string")
        for v in (self.x, self.y, self.z):
            if not math.isfinite(float(v)):
                raise MalformedInputError(f"point {self.id} has a non-finite coordinate")


@dataclass(frozen=True)
class ChannelSpec:
    lo: float = 0.0
    hi: float = 1.0
    persist: bool = True
    units: str = ""

    def clamp(self, v: float) -> float:
        return min(self.hi, max(self.lo, v))


DEFAULT_CHANNELS = MappingProxyType(
    {
        "potential": ChannelSpec(0.0, 1.0, True, "model units"),
        "spike": ChannelSpec(0.0, 1.0, False, "events"),
    }
)


def _clamp01(v: float) -> float:
    return 0.0 if v < 0.0 else 1.0 if v > 1.0 else v


@dataclass(frozen=True)
class NeuronFunction:
    """``b(φ(x))`` delivered ``delay`` ticks later.

    ``φ(x) = clamp₀₁(W x + c)``; ``b`` outputs ``amplitude`` when
    ``⟨w, φ(x)⟩ ≥ theta`` and ``baseline`` otherwise.
    """

    W: tuple = ((1.0,),)
    c: tuple = (0.0,)
    w: tuple = (1.0,)
    theta: float = 0.5
    amplitude: float = 1.0
    baseline: float = 0.0
    delay: int = 1
    input_channels: tuple = ("potential",)
    output_channel: str = "spike"

    def __post_init__(self):
        W = tuple(tuple(float(v) for v in row) for row in self.W)
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "c", tuple(float(v) for v in self.c))
        object.__setattr__(self, "w", tuple(float(v) for v in self.w))
        object.__setattr__(self, "input_channels", tuple(self.input_channels))
        if not isinstance(self.delay, int) or isinstance(self.delay, bool) or self.delay < 1:
            raise MalformedInputError("neuron delay must be an integer ≥ 1")
        m, k = len(W), len(self.input_channels)
        if m == 0 or any(len(row) != k for row in W):
            raise MalformedInputError(f"W must be {m}×{k} over the input channels")
        if len(self.c) != m or len(self.w) != m:
            raise MalformedInputError("offset and threshold weights must match the rows of W")

    def phi(self, x: Sequence[float]) -> tuple:
        return tuple(
            _clamp01(math.fsum([*(wij * xj for wij, xj in zip(row, x)), ci])) for row, ci in zip(self.W, self.c)
        )

    def fires(self, p: Sequence[float]) -> bool:
        return math.fsum(wi * pi for wi, pi in zip(self.w, p)) >= self.theta


def eval_neuron(n: NeuronFunction, inputs: Mapping[str, float], t: int) -> tuple[dict, int, bool]:
    """Return ``(output carrier, delivery tick, fired)``."""
    missing = [ch for ch in n.input_channels if ch not in inputs]
    if missing:
        raise MalformedInputError(f"input carrier lacks channels {missing}")
    p = n.phi([float(inputs[ch]) for ch in n.input_channels])
    fired = n.fires(p)
    return {n.output_channel: n.amplitude if fired else n.baseline}, t + n.delay, fired


@dataclass(frozen=True)
class NF0Body:
    points: tuple
    neurons: Mapping[str, NeuronFunction] = field(default_factory=dict)
    carriers: Mapping[str, Mapping[str, float]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        ids = [p.id for p in self.points]
        if len(set(ids)) != len(ids):
            raise MalformedInputError("duplicate point ids in body")
        object.__setattr__(self, "neurons", MappingProxyType(dict(self.neurons)))
        object.__setattr__(
            self, "carriers", MappingProxyType({k: MappingProxyType(dict(v)) for k, v in self.carriers.items()})
        )
        missing = [i for i in ids if i not in self.neurons or i not in self.carriers]
        if missing:
            raise MalformedInputError(f"undecorated points {missing}")

    @property
    def ids(self) -> tuple:
        return tuple(p.id for p in self.points)


def free_body(points: Iterable[Point3], channels: Mapping[str, ChannelSpec] = DEFAULT_CHANNELS) -> NF0Body:
    """Decorate every point with the default neuron and a zeroed carrier."""
    points = tuple(points)
    return NF0Body(
        points,
        {p.id: NeuronFunction() for p in points},
        {p.id: {ch: 0.0 for ch in channels} for p in points},
    )


def underlying(body: NF0Body) -> tuple:
    return body.points


BODY_CAP = 3


def _count_maps(src: Sequence, tgt: Sequence) -> int:
    return sum(1 for _ in itertools.product(tgt, repeat=len(src)))


def check_body_adjunction(p_sets: Iterable[Sequence[Point3]], bodies: Iterable[NF0Body]) -> Report:
    """Compare ``|Hom(F P, B)|`` with ``|Hom(P, U B)|`` for every pair.

    Body morphisms are arbitrary functions between point sets; the left side
    enumerates them on decorated bodies and the right side on bare points.
    """
    p_sets, bodies = [tuple(p) for p in p_sets], list(bodies)
    if any(len(p) > BODY_CAP for p in p_sets) or any(len(b.points) > BODY_CAP for b in bodies):
        raise CapacityError(f"body adjunction check is limited to {BODY_CAP} points")
    out, counts = [], {}
    for i, p in enumerate(p_sets):
        fp = free_body(p)
        if underlying(fp) != p:
            out.append(Finding("unit", f"U(F(P{i})) differs from P{i}", (i,)))
        for j, b in enumerate(bodies):
            left = _count_maps(fp.ids, b.ids)
            right = _count_maps([q.id for q in p], [q.id for q in underlying(b)])
            counts[(i, j)] = (left, right)
            if left != right:
                out.append(Finding("hom-count", f"P{i}, B{j}: {left} body maps vs {right} point maps", (i, j)))
    return Report("F_N ⊣ U_N", tuple(out), {"counts": counts})
