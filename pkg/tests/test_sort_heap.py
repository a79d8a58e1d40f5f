import random

import pytest

from sortheap import EAGER, MODEL, SortHeap, UnderflowError
from sortheap.core import to_nested
from sortheap.sort_heap import (block_partition, block_size, chain_violations,
                                consolidation_cost, sort_cost)


@pytest.mark.parametrize("n,b", [(0, 1), (1, 1), (2, 1), (3, 2), (4, 2), (5, 3), (1024, 10), (1025, 11)])
def test_block_size(n, b):
    assert block_size(n) == b


def test_block_partition_positional():
    assert block_partition([1, 2, 3, 4, 5], 2) == [[1, 2], [3, 4], [5]]


def test_costs():
    assert sort_cost(1) == 1 and sort_cost(2) == 2 and sort_cost(3) == 5
    assert consolidation_cost(0, 3) == 0
    assert consolidation_cost(3, 2) == 3 + 2 + 1 + 2


def test_hundred_inserts_are_lazy(forest_cls):
    h = SortHeap(forest_cls=forest_cls, pair_log=[])
    for v in range(100):
        h.insert(v)
    assert h.forest.root_count == 100
    assert h.pair_log == []


def test_eager_worked_example(forest_cls):
    h = SortHeap(EAGER, forest_cls=forest_cls, record_blocks=True)
    for v in (5, 3, 8, 1):
        h.insert(v)
    f = h.forest
    assert [f.value(r) for r in f.roots()] == [1, 8, 3, 5]
    assert h.extract_min() == 1
    assert h.last_block_size == 2
    assert [[f.value(x) for x in b] for b in h.last_blocks] == [[3, 8], [5]]
    assert to_nested(f) == ((3, ((5, ()), (8, ()))),)
    assert h.ledger.extract_min_actual_cost == 8


def test_model_consolidates_before_removal(forest_cls):
    h = SortHeap(MODEL, forest_cls=forest_cls)
    for v in (5, 3, 8, 1):
        h.insert(v)
    assert h.extract_min() == 1
    # n = 4 so B = 2: blocks [1,8] and [3,5] -> 1(8), 3(5) -> 1(3(5), 8)
    assert to_nested(h.forest) == ((3, ((5, ()),)), (8, ()))
    assert h.ledger.extract_min_actual_cost == consolidation_cost(4, 2)


@pytest.mark.parametrize("strategy", [EAGER, MODEL])
def test_single_root(forest_cls, strategy):
    h = SortHeap(strategy, forest_cls=forest_cls, pair_log=[])
    h.insert(42)
    assert h.extract_min() == 42
    assert len(h) == 0 and h.pair_log == []
    with pytest.raises(UnderflowError):
        h.extract_min()
    with pytest.raises(UnderflowError):
        h.peek_min()


def test_eager_leaves_single_tree(forest_cls):
    rng = random.Random(1)
    h = SortHeap(EAGER, forest_cls=forest_cls)
    for _ in range(200):
        h.insert(rng.randrange(1000))
    while len(h) > 1:
        h.extract_min()
        assert h.forest.root_count == 1


@pytest.mark.parametrize("strategy", [EAGER, MODEL])
def test_sorts(forest_cls, strategy):
    rng = random.Random(2)
    vals = [rng.randrange(-10**9, 10**9) for _ in range(2000)]
    h = SortHeap(strategy, forest_cls=forest_cls)
    for v in vals:
        h.insert(v)
    assert [h.extract_min() for _ in vals] == sorted(vals)


def test_chains_after_eager_extract(forest_cls):
    rng = random.Random(3)
    h = SortHeap(EAGER, forest_cls=forest_cls, record_blocks=True)
    for _ in range(500):
        h.insert(rng.randrange(10**6))
    for _ in range(50):
        h.extract_min()
        assert chain_violations(h.forest, h.last_blocks, h.last_block_size) == []


def test_chain_check_detects_break(forest_cls):
    h = SortHeap(EAGER, forest_cls=forest_cls, record_blocks=True)
    for v in (4, 3, 2, 1, 0):
        h.insert(v)
    h.extract_min()
    f = h.forest
    block = h.last_blocks[0]
    f.decrease_key(block[-1], 0)  # cut the bottom of the first chain
    assert chain_violations(f, h.last_blocks, h.last_block_size)


def test_peek_and_key(forest_cls):
    h = SortHeap(forest_cls=forest_cls)
    a = h.insert(10)
    h.insert(20)
    h.decrease_key(a, 15)
    assert h.peek_min() == -5 and h.key(a) == -5


def test_unknown_strategy():
    with pytest.raises(ValueError):
        SortHeap("lazy")
