import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from znelab import _kernels, _pykernels  # noqa: E402

try:
    from znelab import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels

KERNEL_NAMES = ("apply_1q", "apply_2q", "conjugate_1q", "conjugate_2q", "channel_1q", "channel_2q",
                "adam_update")


@pytest.fixture(params=sorted(BACKENDS))
def backend(request, monkeypatch):
    """Run the test once per available kernel backend."""
    module = BACKENDS[request.param]
    for name in KERNEL_NAMES:
        monkeypatch.setattr(_kernels, name, getattr(module, name))
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20231018)


PI = math.pi
