"""Integer-sequence kernels with a compiled fast path.

``lcs_pairs`` and ``edit_distance`` come from the Cython extension when it
was built, otherwise from the pure-Python fallback. ``BACKEND`` records
which one is active; ``available_backends()`` lets tests and the benchmark
exercise both.
"""

from __future__ import annotations

from segimt.kernels import _pykernels

try:
    from segimt.kernels import _ckernels  # type: ignore[attr-defined]
except ImportError:
    _ckernels = None

if _ckernels is not None:
    BACKEND = "c"
    lcs_pairs = _ckernels.lcs_pairs
    edit_distance = _ckernels.edit_distance
else:
    BACKEND = "python"
    lcs_pairs = _pykernels.lcs_pairs
    edit_distance = _pykernels.edit_distance


def available_backends() -> dict[str, object]:
    """Name -> module for every backend importable in this environment."""
    backends: dict[str, object] = {"python": _pykernels}
    if _ckernels is not None:
        backends["c"] = _ckernels
    return backends


__all__ = ["BACKEND", "lcs_pairs", "edit_distance", "available_backends"]
