"""Discrete-time world: fibers over a shared material base.

Each tick every fiber reads the snapshot at the current clock and schedules
delta writes at later ticks. Pending writes for the next tick are reconciled
onto the carried values and clamped to channel bounds.
"""
from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Mapping, Sequence

from ..errors import CapacityError, MalformedInputError, PreconditionError, SimulationInvariantError
from .neuron import DEFAULT_CHANNELS, ChannelSpec, NeuronFunction, Point3, eval_neuron
from .shapes import SimplicialShape, shape

POLICIES = ("sum", "max", "last")
TICK_CAP = 100_000


@dataclass(frozen=True)
class Write:
    point: str
    tick: int
    channel: str
    delta: float
    order: tuple = ()  # (fiber index, sequence) for order-sensitive policies


@dataclass(frozen=True)
class Event:
    tick: int
    point: str
    kind: str  # fire | learn | modulate


@dataclass(frozen=True)
class Effects:
    writes: tuple = ()
    events: tuple = ()
    weights: Mapping = field(default_factory=dict)


@dataclass(frozen=True)
class NeuralFiber:
    kind: str = "neural"

    def delay(self, w: "World") -> int:
        return min([1, *(n.delay for n in w.neurons.values())])

    def act(self, w: "World", t: int, snap: Mapping) -> Effects:
        writes, events, fired = [], [], set()
        for pid in w.point_ids:
            n = w.neurons[pid]
            inputs = {ch: snap[(pid, ch)] for ch in n.input_channels if (pid, ch) in snap}
            out, at, fire = eval_neuron(n, inputs, t)
            for ch, v in out.items():
                if v:
                    writes.append(Write(pid, at, ch, v))
            if fire:
                fired.add(pid)
                events.append(Event(t, pid, "fire"))
                for ch in n.input_channels:
                    if snap[(pid, ch)]:
                        writes.append(Write(pid, t + 1, ch, -snap[(pid, ch)]))
        for (pre, post), weight in sorted(w.synapses.items()):
            s = snap.get((pre, "spike"), 0.0)
            if s and weight:
                writes.append(Write(post, t + 1, "potential", weight * s))
        return Effects(tuple(writes), tuple(events))


def fired_at(w: "World", t: int) -> frozenset:
    return frozenset(e.point for e in w.events if e.tick == t and e.kind == "fire")


@dataclass(frozen=True)
class LearningFiber:
    eta: float = 0.1
    w_max: float = 1.0
    kind: str = "learning"

    def delay(self, w: "World") -> int:
        return 1

    def act(self, w: "World", t: int, snap: Mapping) -> Effects:
        # firing decisions are read from the snapshot, not from other fibers' output
        fire = {pid for pid in w.point_ids if _would_fire(w, pid, snap)}
        weights, events = {}, []
        for (pre, post), weight in sorted(w.synapses.items()):
            if pre in fire and post in fire:
                weights[(pre, post)] = min(self.w_max, max(0.0, weight + self.eta))
                events.append(Event(t, post, "learn"))
        return Effects((), tuple(events), weights)


def _would_fire(w: "World", pid: str, snap: Mapping) -> bool:
    n = w.neurons[pid]
    return n.fires(n.phi([snap.get((pid, ch), 0.0) for ch in n.input_channels]))


@dataclass(frozen=True)
class ModulatorFiber:
    schedule: tuple = ()
    window: int = 1
    lag: int = 2
    channel: str = "modulator"
    targets: tuple = ()
    gain: float = 1.0
    kind: str = "modulator"

    def delay(self, w: "World") -> int:
        return self.lag

    def act(self, w: "World", t: int, snap: Mapping) -> Effects:
        if not self.schedule:
            return Effects()
        vals = [self.schedule[i] for i in range(max(0, t - self.window + 1), t + 1) if i < len(self.schedule)]
        if not vals:
            return Effects()
        mean = math.fsum(vals) / len(vals)
        targets = self.targets or w.point_ids
        writes = tuple(Write(p, t + self.lag, self.channel, self.gain * mean) for p in targets if mean)
        return Effects(writes, tuple(Event(t, wr.point, "modulate") for wr in writes))


@dataclass(frozen=True)
class InputFiber:
    drive: Mapping[str, tuple] = field(default_factory=dict)
    lag: int = 1
    noise: float = 0.0
    channel: str = "potential"
    kind: str = "input"

    def delay(self, w: "World") -> int:
        return self.lag

    def act(self, w: "World", t: int, snap: Mapping) -> Effects:
        writes = []
        for pid in sorted(set(self.drive) | (set(w.point_ids) if self.noise else set())):
            sched = self.drive.get(pid, ())
            v = sched[t % len(sched)] if sched else 0.0
            if self.noise:
                # stream keyed by (seed, tick, point) so perturbations never shift it
                v += random.Random(f"{w.seed}:{t}:{pid}").uniform(-self.noise, self.noise)
            if v:
                writes.append(Write(pid, t + self.lag, self.channel, v))
        return Effects(tuple(writes))


FIBER_KINDS = {"neural": NeuralFiber, "learning": LearningFiber, "modulator": ModulatorFiber, "input": InputFiber}


@dataclass(frozen=True)
class World:
    points: tuple
    neurons: Mapping[str, NeuronFunction]
    channels: Mapping[str, ChannelSpec]
    synapses: Mapping[tuple, float]
    fibers: tuple
    policy: str = "sum"
    seed: int = 0
    clock: int = 0
    history: tuple = ()  # snapshots for ticks 0..clock
    pending: Mapping[int, tuple] = field(default_factory=dict)
    events: tuple = ()
    shape: SimplicialShape | None = None

    def __post_init__(self):
        if self.policy not in POLICIES:
            raise MalformedInputError(f"unknown policy {self.policy!r}")
        ids = [p.id for p in self.points]
        if len(set(ids)) != len(ids):
            raise MalformedInputError("duplicate point ids in world")
        for pre, post in self.synapses:
            if pre not in ids or post not in ids:
                raise MalformedInputError(f"synapse {pre}→{post} names an unknown point")
        for f in self.fibers:
            for wr_ch in {getattr(f, "channel", None)} - {None}:
                if wr_ch not in self.channels:
                    raise MalformedInputError(f"{f.kind} fiber writes undeclared channel {wr_ch!r}")

    @property
    def point_ids(self) -> tuple:
        return tuple(sorted(p.id for p in self.points))

    @property
    def min_delay(self) -> int:
        return min([f.delay(self) for f in self.fibers], default=1)

    @property
    def max_delay(self) -> int:
        return max([1, *(f.delay(self) for f in self.fibers), *(n.delay for n in self.neurons.values())])

    def snapshot(self, t: int) -> Mapping:
        return self.history[t]

    def value(self, point: str, t: int, channel: str) -> float:
        return self.history[t][(point, channel)]


def _reconcile(prev: Mapping, writes: Sequence[Write], channels: Mapping[str, ChannelSpec], points, policy: str) -> Mapping:
    grouped: dict = {}
    for wr in writes:
        if wr.channel not in channels:
            raise SimulationInvariantError(f"write to undeclared channel {wr.channel!r}")
        grouped.setdefault((wr.point, wr.channel), []).append(wr)
    out = {}
    for pid in points:
        for ch, spec in channels.items():
            base = prev[(pid, ch)] if spec.persist else spec.clamp(0.0)
            ws = grouped.get((pid, ch))
            if ws:
                if policy == "sum":
                    base = math.fsum([base, *(w.delta for w in ws)])
                elif policy == "max":
                    base = base + max(w.delta for w in ws)
                else:
                    base = base + max(ws, key=lambda w: w.order).delta
            out[(pid, ch)] = spec.clamp(base)
    return MappingProxyType(out)


def step_world(w: World, extra: Sequence[Write] = ()) -> World:
    """Advance one tick. ``extra`` writes are scheduled as if by an outside fiber."""
    t = w.clock
    snap = w.history[t]
    scheduled, events, weights = [], [], dict(w.synapses)
    for i, f in enumerate(w.fibers):
        eff = f.act(w, t, snap)
        scheduled.extend(replace(wr, order=(i, k, wr.point)) for k, wr in enumerate(eff.writes))
        events.extend(eff.events)
        weights.update(eff.weights)
    scheduled.extend(replace(wr, order=(len(w.fibers), k, wr.point)) for k, wr in enumerate(extra))
    pending = {k: list(v) for k, v in w.pending.items()}
    for wr in scheduled:
        if wr.tick <= t:
            raise SimulationInvariantError(f"write at tick {wr.tick} into the frozen past (clock {t})")
        if wr.tick > t + w.max_delay:
            raise SimulationInvariantError(f"write at tick {wr.tick} beyond the delay horizon")
        pending.setdefault(wr.tick, []).append(wr)
    now = pending.pop(t + 1, [])
    nxt = _reconcile(snap, now, w.channels, w.point_ids, w.policy)
    return replace(
        w,
        clock=t + 1,
        history=w.history + (nxt,),
        pending=MappingProxyType({k: tuple(v) for k, v in sorted(pending.items())}),
        events=w.events + tuple(sorted(events, key=lambda e: (e.tick, e.point, e.kind))),
        synapses=MappingProxyType(weights),
    )


def hebbian_update(w: World) -> World:
    """Apply only the learning rule at the current clock."""
    fibers = [f for f in w.fibers if isinstance(f, LearningFiber)]
    if not fibers:
        raise PreconditionError("world has no learning fiber")
    snap = w.history[w.clock]
    weights = dict(w.synapses)
    events = list(w.events)
    for f in fibers:
        eff = f.act(replace(w, synapses=MappingProxyType(weights)), w.clock, snap)
        weights.update(eff.weights)
        events.extend(eff.events)
    return replace(w, synapses=MappingProxyType(weights), events=tuple(events))


def run(w: World, ticks: int, extra: Mapping[int, Sequence[Write]] | None = None) -> World:
    if ticks < 0 or ticks > TICK_CAP:
        raise CapacityError(f"tick count must be in 0..{TICK_CAP}")
    extra = extra or {}
    for _ in range(ticks):
        w = step_world(w, extra.get(w.clock, ()))
    return w


def activity_density(w: World, window: tuple[int, int] | None = None) -> dict:
    """Count fire, learn and modulate events per point over ``[t0, t1)``."""
    t0, t1 = window if window is not None else (0, w.clock)
    if not 0 <= t0 <= t1 <= w.clock:
        raise PreconditionError(f"window [{t0}, {t1}) outside recorded ticks [0, {w.clock})")
    span = t1 - t0
    counts = {pid: 0 for pid in w.point_ids}
    for e in w.events:
        if t0 <= e.tick < t1:
            counts[e.point] += 1
    total = sum(counts.values())
    return {
        "window": [t0, t1],
        "counts": counts,
        "density": {p: (c / span if span else 0.0) for p, c in counts.items()},
        "total": total,
        "total_density": total / span if span else 0.0,
    }


def causality_probe(w: World, perturbation: tuple, horizon: int) -> dict:
    """Compare a baseline run with one receiving an outside write during tick ``s``.

    The write lands at ``s + min Δ``, the earliest tick any fiber can reach.
    """
    point, s, channel, magnitude = perturbation
    if s > horizon:
        raise PreconditionError("perturbation tick exceeds the horizon")
    if point not in w.point_ids or channel not in w.channels:
        raise MalformedInputError("perturbation names an unknown point or channel")
    bound = s + w.min_delay
    steps = horizon - w.clock
    base = run(w, steps)
    pert = run(w, steps, {s: (Write(point, bound, channel, float(magnitude)),)} if bound <= horizon else {})
    first = None
    for t in range(w.clock, horizon + 1):
        a, b = base.history[t], pert.history[t]
        diff = sorted(k for k in a if a[k] != b[k])
        if diff:
            first = {"tick": t, "point": diff[0][0], "channel": diff[0][1], "points": sorted({k[0] for k in diff})}
            break
    return {
        "perturbation": {"point": point, "tick": s, "channel": channel, "magnitude": magnitude},
        "horizon": horizon,
        "bound": bound,
        "divergence": first,
        "ok": first is None or first["tick"] >= bound,
    }


def trace_lines(w: World) -> list:
    """One TSV record per (tick, point, channel) for ticks ``0..clock-1``."""
    out = []
    for t in range(w.clock):
        snap = w.history[t]
        for pid in w.point_ids:
            for ch in sorted(w.channels):
                out.append(f"{t}\t{pid}\t{ch}\t{format(snap[(pid, ch)], '.17g')}\n")
    return out


def trace_bytes(w: World) -> bytes:
    return "".join(trace_lines(w)).encode("utf-8")


def summary(w: World) -> dict:
    act = activity_density(w)
    return {
        "ticks": w.clock,
        "points": len(w.points),
        "events": act["total"],
        "total_density": act["total_density"],
        "per_point": act["counts"],
        "weights": {f"{a}→{b}": v for (a, b), v in sorted(w.synapses.items())},
        "trace_sha256": hashlib.sha256(trace_bytes(w)).hexdigest(),
    }


# documents ---------------------------------------------------------------

def _neuron_from(d: Mapping | None) -> NeuronFunction:
    d = dict(d or {})
    if "input_channels" in d:
        d["input_channels"] = tuple(d["input_channels"])
    for k in ("W",):
        if k in d:
            d[k] = tuple(tuple(r) for r in d[k])
    for k in ("c", "w"):
        if k in d:
            d[k] = tuple(d[k])
    try:
        return NeuronFunction(**d)
    except TypeError as exc:
        raise MalformedInputError(f"bad neuron fields: {exc}") from None


def _fiber_from(d: Mapping):
    d = dict(d)
    kind = d.pop("kind", None)
    if kind not in FIBER_KINDS:
        raise MalformedInputError(f"unknown fiber kind {kind!r}")
    for k in ("schedule", "targets"):
        if k in d:
            d[k] = tuple(d[k])
    if "drive" in d:
        d["drive"] = MappingProxyType({p: tuple(v) for p, v in d["drive"].items()})
    try:
        f = FIBER_KINDS[kind](**d)
    except TypeError as exc:
        raise MalformedInputError(f"bad {kind} fiber fields: {exc}") from None
    if getattr(f, "lag", 1) < 1 or getattr(f, "window", 1) < 1:
        raise MalformedInputError(f"{kind} fiber delay and window must be ≥ 1")
    return f


def world_from_body(body: Mapping, seed: int | None = None) -> World:
    channels = dict(DEFAULT_CHANNELS)
    for name, spec in body.get("channels", {}).items():
        channels[name] = ChannelSpec(float(spec.get("lo", 0.0)), float(spec.get("hi", 1.0)), bool(spec.get("persist", True)), spec.get("units", ""))
        if channels[name].lo > channels[name].hi:
            raise MalformedInputError(f"channel {name!r} has lo > hi")
    points, neurons, initial = [], {}, {}
    for p in body.get("points", []):
        pos = tuple(p.get("pos", (0, 0, 0)))
        if len(pos) != 3:
            raise MalformedInputError(f"point {p.get('id')} needs three coordinates")
        pt = Point3(p["id"], *map(float, pos))
        points.append(pt)
        neurons[pt.id] = _neuron_from(p.get("neuron"))
        carrier = dict(p.get("carrier", {}))
        for ch in carrier:
            if ch not in channels:
                raise MalformedInputError(f"point {pt.id} sets undeclared channel {ch!r}")
        for ch, spec in channels.items():
            v = float(carrier.get(ch, 0.0))
            if not spec.lo <= v <= spec.hi:
                raise MalformedInputError(f"point {pt.id} channel {ch} = {v} outside [{spec.lo}, {spec.hi}]")
            initial[(pt.id, ch)] = v
    synapses = {}
    for s in body.get("synapses", []):
        key = (s["pre"], s["post"])
        if key in synapses:
            raise MalformedInputError(f"duplicate synapse {key}")
        synapses[key] = float(s.get("weight", 1.0))
    fibers = tuple(_fiber_from(f) for f in body.get("fibers", [{"kind": "neural"}]))
    shp = None
    if "shape" in body:
        shp = shape([p.id for p in points], body["shape"])
    return World(
        tuple(points),
        MappingProxyType(neurons),
        MappingProxyType(channels),
        MappingProxyType(synapses),
        fibers,
        body.get("policy", "sum"),
        int(body.get("seed", 0) if seed is None else seed),
        0,
        (MappingProxyType(initial),),
        MappingProxyType({}),
        (),
        shp,
    )


def empty_world(seed: int = 0) -> World:
    return world_from_body({"points": [], "fibers": []}, seed)


def self_loop_body(potential: float = 0.8) -> dict:
    """One default neuron feeding itself through a unit synapse."""
    return {
        "points": [{"id": "n0", "pos": [0, 0, 0], "carrier": {"potential": potential}}],
        "synapses": [{"pre": "n0", "post": "n0", "weight": 1.0}],
        "fibers": [{"kind": "neural"}],
        "policy": "sum",
        "seed": 0,
    }
