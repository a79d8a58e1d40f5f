"""The sort heap.

Insert and Decrease-Key are the lazy forest operations from :mod:`core`.
Extract-Min combines the roots by cutting the root list into blocks of
``ceil(log2 n)`` roots, sorting each block and pairing it from the largest
key down (one descending chain per block), then pairing the block winners
left to right.
"""

from __future__ import annotations

import math

from .core import HeapBase

EAGER = "eager"
MODEL = "model"


def block_size(n: int) -> int:
    """``max(1, ceil(log2(max(2, n))))``."""
    return max(1, math.ceil(math.log2(max(2, n))))


def block_partition(roots: list, b: int) -> list[list]:
    return [roots[i:i + b] for i in range(0, len(roots), b)]


def sort_cost(m: int) -> int:
    """Charged comparison cost of sorting a block of ``m`` roots."""
    return math.ceil(m * math.log2(max(2, m)))


def consolidation_cost(k: int, b: int) -> int:
    """Actual cost of combining ``k`` roots with block size ``b``.

    ``k`` for the scan, the block sorts, then ``k - 1`` pairings
    (``k - l`` inside blocks and ``l - 1`` between block winners).
    """
    if k == 0:
        return 0
    full, rest = divmod(k, b)
    sorting = full * sort_cost(b) + (sort_cost(rest) if rest else 0)
    return k + sorting + (k - 1)


class SortHeap(HeapBase):
    """Sort heap over a link-based forest.

    ``strategy="eager"`` removes the minimum root first and consolidates its
    children together with the other roots, leaving a single tree.
    ``strategy="model"`` consolidates first (so the minimum is the unique
    root), then removes it; its children stay as roots until the next
    Extract-Min.
    """

    def __init__(self, strategy: str = EAGER, *, record_blocks: bool = False,
                 pair_log: list | None = None, **kw):
        if strategy not in (EAGER, MODEL):
            raise ValueError(f"unknown strategy {strategy!r}")
        super().__init__(**kw)
        self.strategy = strategy
        self.record_blocks = record_blocks
        self.last_blocks: list[list[int]] | None = None
        self.last_block_size = 0
        self.pair_log = pair_log
        # Set by the VM driver to run consolidation as a suboperation program.
        self.consolidator = None
        self.last_subops = None

    def extract_min(self) -> int:
        self._check_nonempty()
        f = self.forest
        if self.strategy == EAGER:
            m = f.min_root()
            value = f.value(m)
            f.remove_root(m)
            k = f.root_count
            b = block_size(f.n)
            self._consolidate(b)
        else:
            k = f.root_count
            b = block_size(f.n)
            self._consolidate(b)
            m = f.first_root
            value = f.value(m)
            f.remove_root(m)
        self.last_block_size = b
        self.ledger.record("extract_min", consolidation_cost(k, b))
        return value

    def _consolidate(self, b: int) -> None:
        blocks = [] if self.record_blocks else None
        if self.consolidator is not None:
            self.last_subops = self.consolidator(self, b, blocks)
        else:
            self.forest.consolidate_sort(b, blocks, self.pair_log)
        self.last_blocks = blocks

    def peek_min(self) -> int:
        self._check_nonempty()
        return self.forest.value(self.forest.min_root())


def chain_violations(forest, blocks: list[list[int]], b: int) -> list[str]:
    """Full blocks whose members are not one ancestor chain sorted by key."""
    bad = []
    for bi, block in enumerate(blocks):
        if len(block) < b:
            continue
        for hi, lo in zip(block, block[1:]):
            # ``lo`` (larger key) must be a descendant of ``hi``
            x = forest.parent(lo)
            while x != -1 and x != hi:
                x = forest.parent(x)
            if x != hi or not forest.less(hi, lo):
                bad.append(f"block {bi}: {lo} is not below {hi}")
                break
    return bad
