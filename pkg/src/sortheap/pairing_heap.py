"""Two-pass pairing heap on the same lazy forest, used as a baseline."""

from __future__ import annotations

from .core import HeapBase


class PairingHeap(HeapBase):
    """Lazy two-pass pairing heap.

    Extract-Min first pairs adjacent roots left to right, then folds the
    results right to left into one tree, and removes its root. An odd root
    left over from the first pass enters the second pass unpaired.
    The charged cost is the root count plus the ``k - 1`` pairings.
    """

    def __init__(self, *, pair_log: list | None = None, **kw):
        super().__init__(**kw)
        self.pair_log = pair_log

    def extract_min(self) -> int:
        self._check_nonempty()
        f = self.forest
        k = f.root_count
        pairings = f.consolidate_two_pass(self.pair_log)
        m = f.first_root
        value = f.value(m)
        f.remove_root(m)
        self.ledger.record("extract_min", k + pairings)
        return value

    def peek_min(self) -> int:
        self._check_nonempty()
        return self.forest.value(self.forest.min_root())
