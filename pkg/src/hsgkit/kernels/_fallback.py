"""Pure-Python kernels; the compiled module must agree with these exactly."""
from __future__ import annotations


def zigzag_classes(n: int, edges) -> list[int]:
    """Union-find over ``range(n)``; each node maps to the least index of its class."""
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb
    return [find(i) for i in range(n)]


def count_simplicial_maps(n_src: int, src_masks, n_tgt: int, tgt_masks) -> int:
    """Count vertex maps sending every source simplex onto a target simplex.

    Simplices are bitmasks over vertex indices; passing only the maximal
    source simplices is enough because the target family is face-closed.
    """
    if n_src == 0:
        return 1
    if n_tgt == 0:
        return 0
    allowed = bytearray(1 << n_tgt)
    for m in tgt_masks:
        allowed[m] = 1
    src = list(src_masks)
    images = [0] * n_src
    count = 0
    while True:
        ok = True
        for s in src:
            img = 0
            v = 0
            while s:
                if s & 1:
                    img |= 1 << images[v]
                s >>= 1
                v += 1
            if not allowed[img]:
                ok = False
                break
        if ok:
            count += 1
        i = 0
        while i < n_src:
            images[i] += 1
            if images[i] < n_tgt:
                break
            images[i] = 0
            i += 1
        if i == n_src:
            return count
