"""Backend selection for the collar distance kernels.

The compiled extension is used when importable; set ``SINGPLATEAU_PURE=1``
to force the NumPy fallback.
"""
import os

from . import _pykernels as python_backend

compiled_backend = None
if not os.environ.get("SINGPLATEAU_PURE"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

backend = compiled_backend if compiled_backend is not None else python_backend
BACKEND_NAME = "compiled" if compiled_backend is not None else "python"

TAG_AMBIENT = python_backend.TAG_AMBIENT
TAG_COLLAR = python_backend.TAG_COLLAR
