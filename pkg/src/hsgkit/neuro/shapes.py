"""Face-closed simplicial shapes of dimension ≤ 3 with skeleton and
coskeleton truncation."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .. import kernels
from ..errors import CapacityError, MalformedInputError
from ..report import Finding, Report

MAX_SIZE = 4  # vertices per simplex, i.e. dimension 3
SHAPE_CAP = 5


@dataclass(frozen=True)
class SimplicialShape:
    vertices: tuple
    simplices: frozenset  # of frozensets, nonempty, including every vertex

    def __post_init__(self):
        vs = tuple(self.vertices)
        if len(set(vs)) != len(vs):
            raise MalformedInputError("duplicate shape vertices")
        object.__setattr__(self, "vertices", vs)
        simp = frozenset(frozenset(s) for s in self.simplices)
        object.__setattr__(self, "simplices", simp)
        vset = set(vs)
        for s in simp:
            if not s or len(s) > MAX_SIZE or not s <= vset:
                raise MalformedInputError(f"bad simplex {sorted(s)}")
            for k in range(1, len(s)):
                for face in itertools.combinations(sorted(s), k):
                    if frozenset(face) not in simp:
                        raise MalformedInputError(f"face {list(face)} of {sorted(s)} is missing")
        if any(frozenset((v,)) not in simp for v in vs):
            raise MalformedInputError("every vertex must be a 0-simplex")

    def of_dim(self, d: int) -> list:
        return sorted((sorted(s) for s in self.simplices if len(s) == d + 1))

    def maximal(self) -> list:
        return [s for s in self.simplices if not any(s < t for t in self.simplices)]

    def counts(self) -> tuple:
        return tuple(sum(1 for s in self.simplices if len(s) == d + 1) for d in range(MAX_SIZE))


def shape(vertices: Iterable, generators: Iterable[Iterable] = ()) -> SimplicialShape:
    """Smallest face-closed shape on ``vertices`` containing ``generators``."""
    vertices = tuple(vertices)
    simp = {frozenset((v,)) for v in vertices}
    for g in generators:
        g = tuple(g)
        if len(g) > MAX_SIZE:
            raise MalformedInputError(f"simplex {list(g)} exceeds dimension 3")
        for k in range(1, len(g) + 1):
            simp.update(frozenset(c) for c in itertools.combinations(g, k))
    return SimplicialShape(vertices, frozenset(simp))


def shape_truncate(s: SimplicialShape, n: int, mode: str = "skeleton") -> SimplicialShape:
    if not 0 <= n <= 3:
        raise MalformedInputError("truncation level must be in 0..3")
    if mode == "skeleton":
        return SimplicialShape(s.vertices, frozenset(x for x in s.simplices if len(x) <= n + 1))
    if mode != "coskeleton":
        raise MalformedInputError(f"unknown truncation mode {mode!r}")
    simp = set(s.simplices)
    for size in range(n + 2, MAX_SIZE + 1):
        for cand in itertools.combinations(s.vertices, size):
            c = frozenset(cand)
            if c not in simp and all(c - {v} in simp for v in c):
                simp.add(c)
    return SimplicialShape(s.vertices, frozenset(simp))


def _masks(s: SimplicialShape, simplices) -> list:
    index = {v: i for i, v in enumerate(s.vertices)}
    return [sum(1 << index[v] for v in x) for x in simplices]


def count_simplicial_maps(x: SimplicialShape, y: SimplicialShape) -> int:
    """Vertex maps ``x → y`` sending every simplex onto a simplex."""
    return kernels.count_simplicial_maps(
        len(x.vertices), _masks(x, x.maximal()), len(y.vertices), _masks(y, y.simplices)
    )


def check_sk_cosk_adjunction(x: SimplicialShape, y: SimplicialShape, n: int) -> Report:
    if len(x.vertices) > SHAPE_CAP or len(y.vertices) > SHAPE_CAP:
        raise CapacityError(f"shapes are limited to {SHAPE_CAP} vertices")
    left = count_simplicial_maps(shape_truncate(x, n, "skeleton"), y)
    right = count_simplicial_maps(x, shape_truncate(y, n, "coskeleton"))
    findings = () if left == right else (
        Finding("hom-count", f"|Maps(sk{n} x, y)| = {left} but |Maps(x, cosk{n} y)| = {right}", (n,)),
    )
    return Report(f"Sk{n} ⊣ CoSk{n}", findings, {"left": left, "right": right})


def _canonical(k: int, simp: frozenset) -> tuple:
    best = None
    for perm in itertools.permutations(range(k)):
        key = tuple(sorted(tuple(sorted(perm[v] for v in s)) for s in simp))
        if best is None or key < best:
            best = key
    return best


def enumerate_shapes(max_vertices: int = 4) -> list:
    """One representative per isomorphism class, on vertices ``0..k-1``."""
    if max_vertices > SHAPE_CAP:
        raise CapacityError(f"shape enumeration is limited to {SHAPE_CAP} vertices")
    out = []
    for k in range(max_vertices + 1):
        higher = [frozenset(c) for size in range(2, min(k, MAX_SIZE) + 1) for c in itertools.combinations(range(k), size)]
        seen = set()
        for bits in range(1 << len(higher)):
            chosen = {higher[i] for i in range(len(higher)) if bits >> i & 1}
            if any(c - {v} not in chosen for c in chosen if len(c) > 2 for v in c):
                continue
            simp = frozenset(chosen | {frozenset((v,)) for v in range(k)})
            key = _canonical(k, simp)
            if key not in seen:
                seen.add(key)
                out.append(SimplicialShape(tuple(range(k)), simp))
    return out
