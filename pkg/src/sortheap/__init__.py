"""Sort heap priority queue, its potential audit, and a pure-heap VM."""

from ._backend import BACKENDS, Forest
from .core import (
    CapacityError,
    CostLedger,
    DomainError,
    HeapError,
    NodeHandle,
    StaleHandleError,
    StructureError,
    UnderflowError,
    validate,
)
from .pairing_heap import PairingHeap
from .sort_heap import EAGER, MODEL, SortHeap

__all__ = [
    "BACKENDS", "Forest", "CapacityError", "CostLedger", "DomainError",
    "HeapError", "NodeHandle", "StaleHandleError", "StructureError",
    "UnderflowError", "validate", "PairingHeap", "SortHeap", "EAGER", "MODEL",
]
