"""Kernel selector: the compiled extension when available, numpy otherwise.

Set COXTORUS_PURE=1 to force the fallback (used by the benchmark and the
kernel agreement tests).
"""
import os

BACKEND = "python"
if os.environ.get("COXTORUS_PURE") != "1":
    try:
        from ._kernels import echelon_insert, geometric_divide, poly_mul_mod, rank_mod_p  # noqa: F401
        BACKEND = "cython"
    except ImportError:
        pass
if BACKEND == "python":
    from ._fallback import echelon_insert, geometric_divide, poly_mul_mod, rank_mod_p  # noqa: F401

from . import _fallback as fallback  # noqa: E402,F401
