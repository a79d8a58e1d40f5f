import random

import pytest

from sortheap import SortHeap
from sortheap.core import from_nested, to_nested
from sortheap.rank import RankParams, RankState
from sortheap.sort_heap import MODEL, block_size
from sortheap.vm import (OPCODES, VM, ConfigError, Subop, SubopProgram, VMError,
                         compile_sort_extract_min, format_trace, vm_consolidator, vm_run)


def S(op, *args, result=None):
    return Subop(op, args, result)


TWO_ROOT_PROGRAM = [
    S("HasParent", 1, result=False), S("Set", 2, 1), S("HasRightSibling", 2, result=True),
    S("MoveToRightSibling", 2), S("HasParent", 2, result=False), S("Compare", 1, 2, result=True),
    S("Pair", 1, 2), S("HasParent", 1, result=False), S("HasLeftSibling", 1, result=False),
    S("HasRightSibling", 1, result=False), S("End"),
]


def test_twelve_opcodes():
    assert len(OPCODES) == 12


def test_single_root_program(forest_cls):
    f = forest_cls()
    f.insert(3)
    prog = [S("HasParent", 1), S("HasLeftSibling", 1), S("HasRightSibling", 1), S("End")]
    res = vm_run(f, prog)
    assert res.cost == 4 and res.value == 3 and f.n == 0
    assert [s.result for s in res.trace[:3]] == [False, False, False]


def test_two_root_program(forest_cls):
    f = forest_cls()
    b = f.insert(8)
    a = f.insert(2)
    res = vm_run(f, TWO_ROOT_PROGRAM, remove=False)
    assert res.cost == 11
    assert f.leftmost_child(a) == b


def test_pair_without_compare_is_rejected(forest_cls):
    f = forest_cls()
    f.insert(8)
    f.insert(2)
    prog = [s for s in TWO_ROOT_PROGRAM if s.op != "Compare"]
    with pytest.raises(VMError) as exc:
        vm_run(f, prog)
    assert exc.value.index == 5
    assert "key(1) < key(2)" in exc.value.reason


def test_pair_without_root_check_is_rejected(forest_cls):
    f = forest_cls()
    f.insert(8)
    f.insert(2)
    prog = [s for s in TWO_ROOT_PROGRAM if not (s.op == "HasParent" and s.args == (2,))]
    with pytest.raises(VMError, match="is_root"):
        vm_run(f, prog)


def test_lenient_mode_checks_truth_only(forest_cls):
    f = forest_cls()
    f.insert(8)
    f.insert(2)
    prog = [S("Set", 2, 1), S("MoveToRightSibling", 2), S("Pair", 1, 2), S("End")]
    assert vm_run(f, prog, strict=False).cost == 4
    g = forest_cls()
    g.insert(2)
    g.insert(8)
    with pytest.raises(VMError, match="smaller key"):
        vm_run(g, prog, strict=False)


def test_move_clears_facts(forest_cls):
    f = forest_cls()
    f.insert(1)
    f.insert(2)
    vm = VM(f)
    vm.step(S("HasRightSibling", 1))
    vm.step(S("MoveToRightSibling", 1))
    with pytest.raises(VMError):
        vm.step(S("MoveToLeftSibling", 1))


def test_recorded_result_mismatch(forest_cls):
    f = forest_cls()
    f.insert(1)
    with pytest.raises(VMError, match="differs"):
        vm_run(f, [S("HasParent", 1, result=True)])


def test_config_errors(forest_cls):
    f = forest_cls()
    with pytest.raises(ConfigError):
        VM(f)
    f.insert(1)
    with pytest.raises(ConfigError):
        compile_sort_extract_min(f, n_cursors=1)
    with pytest.raises(ConfigError):
        vm_run(f, [])
    with pytest.raises(VMError, match="cursor"):
        vm_run(f, [S("HasParent", 3)])
    with pytest.raises(VMError, match="End"):
        vm_run(f, [S("HasParent", 1)])


def test_end_requires_monoarboral(forest_cls):
    f = forest_cls()
    f.insert(1)
    f.insert(2)
    prog = [S("HasParent", 1), S("HasLeftSibling", 1), S("HasRightSibling", 1), S("End")]
    with pytest.raises(VMError, match="no cursor verified"):
        vm_run(f, prog)


def test_compile_single_root(forest_cls):
    f = forest_cls()
    f.insert(5)
    prog = compile_sort_extract_min(f)
    assert prog.cost == 4 and prog.instructions[-1].op == "End"


def test_compile_worked_example(forest_cls):
    f = forest_cls()
    for v in (5, 3, 8, 1):
        f.insert(v)
    prog = compile_sort_extract_min(f)
    direct = f.copy()
    direct.consolidate_sort(block_size(f.n))
    vm_run(f, prog, remove=False)
    assert to_nested(f) == to_nested(direct) == ((1, ((3, ((5, ()),)), (8, ()))),)
    assert prog.count("Pair") == 3 and prog.count("Compare") == 3


def test_compiled_program_replays_from_trace(forest_cls):
    rng = random.Random(7)
    f = forest_cls()
    for _ in range(40):
        f.insert(rng.randrange(100))
    prog = compile_sort_extract_min(f)
    text = format_trace(prog.instructions)
    assert text.splitlines()[0].startswith("0 ")
    res = vm_run(f, prog)
    assert res.cost == prog.cost and f.n == 39


def test_random_snapshot_equivalence(forest_cls):
    rng = random.Random(11)
    for _ in range(30):
        h = SortHeap(MODEL, forest_cls=forest_cls)
        hs = [h.insert(rng.randrange(1000)) for _ in range(rng.randint(1, 80))]
        for _ in range(rng.randint(0, 3)):
            h.extract_min()
            for nh in rng.sample(hs, min(5, len(hs))):
                if h.is_live(nh):
                    h.decrease_key(nh, rng.randrange(300))
        if not len(h):
            continue
        f = h.forest
        prog = compile_sort_extract_min(f)
        direct = f.copy()
        direct.consolidate_sort(block_size(f.n))
        vm_run(f, prog, remove=False)
        assert to_nested(f) == to_nested(direct)


def test_vm_consolidator_drives_sort_heap(forest_cls):
    rng = random.Random(5)
    vals = [rng.randrange(10**6) for _ in range(300)]
    traces = []
    h = SortHeap(MODEL, forest_cls=forest_cls)
    h.consolidator = vm_consolidator(traces=traces)
    for v in vals:
        h.insert(v)
    assert [h.extract_min() for _ in vals] == sorted(vals)
    assert len(traces) == len(vals)
    cost, compares, pairs = h.last_subops
    assert cost >= 4 and pairs == compares


def test_rank_augmented_pair(forest_cls):
    f = forest_cls()
    f.insert(8)
    f.insert(2)
    ranks = RankState(RankParams(1, 1))
    res = vm_run(f, TWO_ROOT_PROGRAM, ranks=ranks, remove=False)
    pair_line = res.trace[6]
    assert pair_line.rank_incremented is True
    assert pair_line.line(6) == "6 Pair(1,2) rank+"


def test_subop_program_cost():
    p = SubopProgram([S("HasParent", 1), S("End")])
    assert p.cost == 2 and p.count("End") == 1
