import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsgkit import kernels
from hsgkit.kernels import _fallback


def _classes_oracle(n, edges):
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return [find(i) for i in range(n)]


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 30), st.data())
def test_zigzag_matches_oracle(n, data):
    edges = data.draw(st.lists(st.tuples(st.integers(0, max(n - 1, 0)), st.integers(0, max(n - 1, 0))), max_size=40)) if n else []
    expected = _classes_oracle(n, edges)
    for mod in kernels.BACKENDS.values():
        assert list(mod.zigzag_classes(n, edges)) == expected


def _maps_oracle(nx, x_masks, ny, y_masks):
    ys = set(y_masks)
    count = 0
    import itertools

    for img in itertools.product(range(ny), repeat=nx):
        ok = True
        for m in x_masks:
            im = 0
            for v in range(nx):
                if m >> v & 1:
                    im |= 1 << img[v]
            if im not in ys:
                ok = False
                break
        count += ok
    return count


@pytest.mark.parametrize("seed", range(30))
def test_simplicial_count_matches_oracle(seed):
    rng = random.Random(seed)
    nx, ny = rng.randint(0, 4), rng.randint(1, 4)
    x_masks = [rng.randrange(1, 1 << nx) for _ in range(rng.randint(0, 4))] if nx else []
    y_masks = sorted({1 << v for v in range(ny)} | {rng.randrange(1, 1 << ny) for _ in range(3)})
    expected = _maps_oracle(nx, x_masks, ny, y_masks)
    for mod in kernels.BACKENDS.values():
        assert mod.count_simplicial_maps(nx, x_masks, ny, y_masks) == expected


def test_backend_switch_roundtrip():
    prev = kernels.use_backend("python")
    assert kernels.zigzag_classes is _fallback.zigzag_classes
    kernels.use_backend(prev)
    assert kernels.BACKEND == prev
    with pytest.raises(ValueError):
        kernels.use_backend("fortran")
