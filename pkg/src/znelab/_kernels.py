"""Backend selection for the hot stencils.

The compiled extension is preferred; set ``ZNELAB_PURE=1`` to force the
numpy fallback.
"""

import os

if os.environ.get("ZNELAB_PURE", "") not in ("", "0"):
    from . import _pykernels as backend
    BACKEND = "python"
else:
    try:
        from . import _ckernels as backend
        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _pykernels as backend
        BACKEND = "python"

apply_1q = backend.apply_1q
apply_2q = backend.apply_2q
conjugate_1q = backend.conjugate_1q
conjugate_2q = backend.conjugate_2q
channel_1q = backend.channel_1q
channel_2q = backend.channel_2q
adam_update = backend.adam_update

__all__ = [
    "BACKEND",
    "apply_1q",
    "apply_2q",
    "conjugate_1q",
    "conjugate_2q",
    "channel_1q",
    "channel_2q",
    "adam_update",
]
