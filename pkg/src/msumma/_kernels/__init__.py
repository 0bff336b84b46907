"""Scaled-coefficient kernels: compiled core with pure-python fallback.

Set MSUMMA_PURE=1 to force the numpy fallback (used by the benchmark and
as an escape hatch on platforms without a compiler).
"""
import os

if os.environ.get("MSUMMA_PURE"):
    from . import _fallback as impl
else:
    try:
        from . import _core as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _fallback as impl

BACKEND = impl.BACKEND
normalize = impl.normalize
add = impl.add
mul = impl.mul
scale = impl.scale
axpy_shift = impl.axpy_shift
eval_scaled = impl.eval_scaled

__all__ = [
    "BACKEND",
    "normalize",
    "add",
    "mul",
    "scale",
    "axpy_shift",
    "eval_scaled",
]
