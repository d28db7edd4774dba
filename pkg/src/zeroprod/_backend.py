"""Kernel backend chosen at import.

The compiled module is used when it imports; set ZEROPROD_BACKEND=python to
force the pure-Python kernels.
"""

import os

from . import _pykernels

python = _pykernels

try:
    from . import _ckernels as compiled
except ImportError:  # extension not built
    compiled = None

if os.environ.get("ZEROPROD_BACKEND", "").lower() == "python" or compiled is None:
    kernels = _pykernels
else:
    kernels = compiled

NAME = kernels.NAME


def available():
    return [m for m in (compiled, _pykernels) if m is not None]
