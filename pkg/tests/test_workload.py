import logging

import pytest

from sortheap import PairingHeap, SortHeap
from sortheap import workload as wl


def test_splitmix_known_values():
    # reference outputs for seed 0 (first values of the published generator)
    r = wl.SplitMix64(0)
    assert r.next_u64() == 0xE220A8397B1DCDAF
    assert r.next_u64() == 0x6E789E6AA1B965F4


def test_splitmix_ranges():
    r = wl.SplitMix64(5)
    assert all(0 <= r.below(7) < 7 for _ in range(200))
    assert all(3 <= r.between(3, 4) <= 4 for _ in range(200))
    assert all(-2**63 <= r.signed64() < 2**63 for _ in range(200))


def test_rounds_counts():
    ops = wl.gen_rounds(16, 1, 1)
    kinds = [op[0] for op in ops]
    assert kinds.count("I") == 17 and kinds.count("D") == 4 and kinds.count("X") == 1
    ops = wl.gen_rounds(2, 3, 1)
    assert [op[0] for op in ops].count("D") == 3


def test_rounds_rejects_tiny_n():
    with pytest.raises(ValueError):
        wl.gen_rounds(1, 5, 0)


def test_rounds_values_and_deltas_in_range():
    for op in wl.gen_rounds(64, 50, 4):
        if op[0] == "I":
            assert 0 <= op[1] < 2**32
        elif op[0] == "D":
            assert 0 <= op[2] <= 2**16


def test_same_seed_same_file(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    wl.write_workload(wl.gen_rounds(100, 20, 9), a)
    wl.write_workload(wl.gen_rounds(100, 20, 9), b)
    assert a.read_bytes() == b.read_bytes()
    assert wl.gen_rounds(100, 20, 10) != wl.gen_rounds(100, 20, 9)


def test_roundtrip(tmp_path):
    ops = wl.gen_rounds(50, 10, 2)
    p = tmp_path / "w.txt"
    wl.write_workload(ops, p)
    assert wl.read_workload(p) == ops


@pytest.mark.parametrize("text,msg", [
    ("I 1\nD 3 1\n", "line 2"),
    ("I 1\nD 0 -1\n", "negative"),
    ("I x\n", "line 1"),
    ("# c\nQ\n", "line 2"),
])
def test_parse_errors(text, msg):
    with pytest.raises(wl.WorkloadError, match=msg):
        wl.parse_workload(text)


def test_replay_skips_dead_target(caplog, forest_cls):
    ops = wl.parse_workload("I 5\nI 7\nX\nD 0 1\nX\n")
    with caplog.at_level(logging.WARNING):
        out = wl.replay(ops, SortHeap(forest_cls=forest_cls))
    assert out == [5, 7]
    assert "skipped" in caplog.text
    assert wl.reference_extracts(ops) == [5, 7]


def test_monotonic_targets_roots_only(forest_cls):
    ops = wl.gen_monotonic(64, 40, 3, forest_cls=forest_cls)
    heap = SortHeap("model", forest_cls=forest_cls)
    handles = []
    for op in ops:
        if op[0] == "I":
            handles.append(heap.insert(op[1]))
        elif op[0] == "D":
            h = handles[op[1]]
            assert heap.forest.is_root(h.index)
            heap.decrease_key(h, op[2])
        else:
            heap.extract_min()
    assert wl.gen_monotonic(64, 40, 3) == ops


@pytest.mark.parametrize("make", [lambda c: SortHeap("eager", forest_cls=c),
                                  lambda c: SortHeap("model", forest_cls=c),
                                  lambda c: PairingHeap(forest_cls=c)])
def test_cross_heap_agreement(forest_cls, make):
    ops = wl.gen_rounds(200, 150, 6)
    assert wl.replay(ops, make(forest_cls)) == wl.reference_extracts(ops)


def test_heapsort_workload():
    ops = wl.gen_heapsort(100, 1)
    assert sum(op[0] == "X" for op in ops) == 100
    assert any(op[0] == "I" and op[1] < 0 for op in ops)
