"""Random instance generators shared by the unit and acceptance tests."""
import random

from hsgkit.grid import Axis, build_grid
from hsgkit.temporal import DepGraph


def random_temporal_instance(rng: random.Random, max_tokens: int = 8):
    """A grid on (time, depth) with random δ and a random dependency graph."""
    n = rng.randint(1, max_tokens)
    horizon = rng.randint(0, 4)
    axes = [Axis("time", tuple(range(horizon + 1))), Axis("depth", (0, 1))]
    tokens = [(f"x{i}", (rng.randint(0, horizon), rng.randint(0, 1))) for i in range(n)]
    delta = {f"x{i}": rng.choice(["⊤", "⊤", "⊥"]) for i in range(n)}
    edges = [
        (f"x{rng.randrange(n)}", f"x{rng.randrange(n)}") for _ in range(rng.randint(0, 2 * n))
    ]
    return build_grid(axes, tokens, delta), DepGraph(tuple(edges))


def random_world_body(rng: random.Random, max_points: int = 4) -> dict:
    """A small world with random neurons, synapses and a random fiber mix."""
    n = rng.randint(1, max_points)
    ids = [f"p{i}" for i in range(n)]
    points = []
    for pid in ids:
        neuron = {
            "theta": round(rng.uniform(0.2, 0.9), 3),
            "delay": rng.randint(1, 3),
            "c": [round(rng.uniform(-0.2, 0.2), 3)],
            "amplitude": rng.choice([1.0, 0.5]),
        }
        points.append(
            {
                "id": pid,
                "pos": [rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 3)],
                "carrier": {"potential": round(rng.random(), 3)},
                "neuron": neuron,
            }
        )
    synapses = [
        {"pre": a, "post": b, "weight": round(rng.uniform(0.0, 1.0), 3)}
        for a in ids
        for b in ids
        if rng.random() < 0.4
    ]
    fibers = [{"kind": "neural"}]
    if rng.random() < 0.5:
        fibers.append({"kind": "learning", "eta": 0.1, "w_max": 1.0})
    if rng.random() < 0.5:
        fibers.append({"kind": "modulator", "schedule": [rng.random() for _ in range(5)], "window": 2, "lag": rng.randint(1, 3)})
    if rng.random() < 0.5:
        fibers.append({"kind": "input", "drive": {ids[0]: [0.3, 0.0]}, "noise": 0.05, "lag": rng.randint(1, 2)})
    return {
        "channels": {"modulator": {"lo": 0.0, "hi": 1.0, "persist": False}},
        "points": points,
        "synapses": synapses,
        "fibers": fibers,
        "policy": rng.choice(["sum", "max", "last"]),
        "seed": rng.randrange(2**32),
    }


def random_perturbation(rng: random.Random, body: dict, horizon: int) -> tuple:
    point = rng.choice(body["points"])["id"]
    s = rng.randint(0, horizon - 1)
    channel = rng.choice(["potential", "spike", "modulator"])
    return point, s, channel, rng.choice([-0.7, 0.25, 1.0])
