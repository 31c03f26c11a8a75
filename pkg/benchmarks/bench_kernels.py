"""Compare the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Each workload is timed on every available backend. The script also confirms
that the backends return identical answers.
"""
import argparse
import random
import timeit

from hsgkit import kernels
from hsgkit.neuro.shapes import _masks, enumerate_shapes


def _zigzag_workload(seed: int = 0, n: int = 2000, m: int = 6000):
    rng = random.Random(seed)
    edges = [(rng.randrange(n), rng.randrange(n)) for _ in range(m)]
    return lambda mod: mod.zigzag_classes(n, edges)


def _simplicial_workload():
    shapes = enumerate_shapes(4)
    pairs = [
        (len(s.vertices), _masks(s, s.maximal()), len(t.vertices), _masks(t, t.simplices)) for s in shapes for t in shapes
    ]
    return lambda mod: [mod.count_simplicial_maps(*p) for p in pairs]


WORKLOADS = {
    "zigzag_classes (2000 nodes, 6000 edges)": _zigzag_workload(),
    "count_simplicial_maps (29x29 shapes)": _simplicial_workload(),
}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    names = sorted(kernels.BACKENDS)
    if "native" not in names:
        print("compiled backend unavailable; timing the fallback only")
    for title, work in WORKLOADS.items():
        answers = {name: work(kernels.BACKENDS[name]) for name in names}
        agree = len({repr(a) for a in answers.values()}) == 1
        times = {name: min(timeit.repeat(lambda m=kernels.BACKENDS[name]: work(m), number=1, repeat=args.repeat)) for name in names}
        print(title)
        for name in names:
            print(f"  {name:<7} {times[name] * 1e3:9.2f} ms")
        if "native" in times and "python" in times:
            print(f"  speedup {times['python'] / times['native']:8.1f}x   results agree: {agree}")


if __name__ == "__main__":
    main()
