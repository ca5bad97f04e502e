"""Backend selection for the numerical kernels.

Prefers the compiled extension (halfinv._kernels, built from Cython) and
falls back to the NumPy implementation when the extension is missing.
Set HALFINV_BACKEND=python to force the fallback, =compiled to require
the extension (ImportError if absent).
"""

import os

_choice = os.environ.get("HALFINV_BACKEND", "").strip().lower()

if _choice == "python":
    from . import _kernels_py as _impl
    BACKEND = "python"
elif _choice == "compiled":
    from . import _kernels as _impl
    BACKEND = "compiled"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl
        BACKEND = "python"

shoot_classical = _impl.shoot_classical
shoot_rotating = _impl.shoot_rotating
goursat_sweep = _impl.goursat_sweep
