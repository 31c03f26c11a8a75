"""Hot loops with a compiled implementation and a pure-Python fallback.

The compiled module is used when it imports; setting ``HSG_PURE_PYTHON`` to a
non-empty value forces the fallback.
"""
import os

from . import _fallback

BACKENDS = {"python": _fallback}
try:
    from . import _native  # type: ignore[attr-defined]
except ImportError:  # not built
    _native = None
else:
    BACKENDS["native"] = _native

if _native is not None and not os.environ.get("HSG_PURE_PYTHON"):
    BACKEND = "native"
else:
    BACKEND = "python"

zigzag_classes = BACKENDS[BACKEND].zigzag_classes
count_simplicial_maps = BACKENDS[BACKEND].count_simplicial_maps


def use_backend(name: str) -> str:
    """Switch the module-level kernels; returns the previous backend name."""
    global BACKEND, zigzag_classes, count_simplicial_maps
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} is not available; have {sorted(BACKENDS)}")
    previous, BACKEND = BACKEND, name
    zigzag_classes = BACKENDS[name].zigzag_classes
    count_simplicial_maps = BACKENDS[name].count_simplicial_maps
    return previous


__all__ = ["BACKEND", "BACKENDS", "count_simplicial_maps", "use_backend", "zigzag_classes"]
