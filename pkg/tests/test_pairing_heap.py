import random

import pytest

from sortheap import PairingHeap, UnderflowError
from sortheap.core import to_nested


def test_two_pass_example(forest_cls):
    log = []
    h = PairingHeap(forest_cls=forest_cls, pair_log=log)
    for v in (2, 3, 1, 4):
        h.insert(v)
    f = h.forest
    assert [f.value(r) for r in f.roots()] == [4, 1, 3, 2]
    assert h.extract_min() == 1
    assert len(log) == 3
    # 1 won both passes: its children were 2(3) and 4, now roots
    assert to_nested(f) == ((2, ((3, ()),)), (4, ()))
    assert h.ledger.extract_min_actual_cost == 4 + 3


def test_single_root(forest_cls):
    h = PairingHeap(forest_cls=forest_cls, pair_log=[])
    h.insert(9)
    assert h.extract_min() == 9
    assert h.pair_log == [] and h.ledger.extract_min_actual_cost == 1
    with pytest.raises(UnderflowError):
        h.extract_min()


def test_sorts_with_decrease_keys(forest_cls):
    rng = random.Random(4)
    h = PairingHeap(forest_cls=forest_cls)
    vals = {}
    for _ in range(1000):
        v = rng.randrange(10**6)
        vals[h.insert(v)] = v
    for nh in rng.sample(sorted(vals), 300):
        d = rng.randrange(1000)
        h.decrease_key(nh, d)
        vals[nh] -= d
    assert [h.extract_min() for _ in range(len(vals))] == sorted(vals.values())
