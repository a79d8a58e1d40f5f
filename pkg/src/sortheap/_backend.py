"""Select the forest kernel at import time.

``SORTHEAP_BACKEND`` may be ``python``, ``compiled`` or ``auto`` (default).
``auto`` uses the compiled extension when it imports, else the pure-Python
kernel.
"""

import os

from . import _forest_py

_choice = os.environ.get("SORTHEAP_BACKEND", "auto").lower()

PythonForest = _forest_py.Forest
try:
    from ._forest import Forest as CompiledForest
except ImportError:
    CompiledForest = None

if _choice == "python":
    Forest = PythonForest
elif _choice == "compiled":
    if CompiledForest is None:
        raise ImportError("SORTHEAP_BACKEND=compiled but sortheap._forest is not built")
    Forest = CompiledForest
elif _choice == "auto":
    Forest = CompiledForest if CompiledForest is not None else PythonForest
else:
    raise ValueError(f"unknown SORTHEAP_BACKEND {_choice!r}")

BACKENDS = {"python": PythonForest}
if CompiledForest is not None:
    BACKENDS["compiled"] = CompiledForest

NIL = -1
