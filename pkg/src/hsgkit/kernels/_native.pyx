# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels mirroring ``_fallback``."""
from libc.stdlib cimport malloc, free


def zigzag_classes(Py_ssize_t n, edges):
    cdef Py_ssize_t *parent = <Py_ssize_t *> malloc(max(n, 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t i, a, b, ra, rb
    if parent == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            parent[i] = i
        for a, b in edges:
            ra = a
            while parent[ra] != ra:
                parent[ra] = parent[parent[ra]]
                ra = parent[ra]
            rb = b
            while parent[rb] != rb:
                parent[rb] = parent[parent[rb]]
                rb = parent[rb]
            if ra != rb:
                if ra < rb:
                    parent[rb] = ra
                else:
                    parent[ra] = rb
        out = []
        for i in range(n):
            ra = i
            while parent[ra] != ra:
                ra = parent[ra]
            out.append(ra)
        return out
    finally:
        free(parent)


def count_simplicial_maps(int n_src, src_masks, int n_tgt, tgt_masks):
    cdef int i, v, ok
    cdef unsigned int s, img
    cdef long long count = 0
    cdef int n_simp
    cdef unsigned int *src
    cdef int *images
    cdef unsigned char *allowed
    if n_src == 0:
        return 1
    if n_tgt == 0:
        return 0
    src_list = list(src_masks)
    n_simp = len(src_list)
    src = <unsigned int *> malloc(max(n_simp, 1) * sizeof(unsigned int))
    images = <int *> malloc(n_src * sizeof(int))
    allowed = <unsigned char *> malloc((1 << n_tgt) * sizeof(unsigned char))
    if src == NULL or images == NULL or allowed == NULL:
        free(src); free(images); free(allowed)
        raise MemoryError()
    try:
        for i in range(1 << n_tgt):
            allowed[i] = 0
        for m in tgt_masks:
            allowed[<unsigned int> m] = 1
        for i in range(n_simp):
            src[i] = src_list[i]
        for i in range(n_src):
            images[i] = 0
        while True:
            ok = 1
            for i in range(n_simp):
                s = src[i]
                img = 0
                v = 0
                while s:
                    if s & 1:
                        img |= 1u << images[v]
                    s >>= 1
                    v += 1
                if not allowed[img]:
                    ok = 0
                    break
            count += ok
            i = 0
            while i < n_src:
                images[i] += 1
                if images[i] < n_tgt:
                    break
                images[i] = 0
                i += 1
            if i == n_src:
                return count
    finally:
        free(src); free(images); free(allowed)
