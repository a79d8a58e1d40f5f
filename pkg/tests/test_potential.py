import random
from fractions import Fraction

import pytest

from sortheap import workload as wl
from sortheap.core import from_nested
from sortheap.potential import (Auditor, audit_run, check_all_lemmas, check_detach_lemma,
                                check_growth_fact, check_path_lemma, check_sibling_lemma,
                                classify, compute_stats, detach_increase, extract_bound,
                                growth_gap, insert_bound, loglog, snapshot, zeta,
                                zeta_by_cases, zeta_clamped)
from sortheap.shapes import forests_upto, labelled, random_shape, size
from sortheap.sort_heap import MODEL, SortHeap


def build(shape, cls=None):
    f, order = from_nested(labelled(shape, range(size(shape))), cls)
    return f, order


def test_single_node_stats(forest_cls):
    f = forest_cls()
    x = f.insert(1)
    assert tuple(compute_stats(f)[x]) == (1, 0, 1)


def test_balanced_node_is_half():
    assert zeta_clamped(4, 4) == Fraction(1, 2)
    assert zeta(4, 8) == Fraction(1, 2)


def test_rightmost_child_is_left_heavy(forest_cls):
    f, order = build(((), (), ((),)), forest_cls)
    st = compute_stats(f)
    rightmost = f.roots()[-1]
    assert st[rightmost].R == 0 and zeta(st[rightmost].L, st[rightmost].S) == 0


@pytest.mark.parametrize("L,R,kind,z", [(1, 2, "right_heavy", 1), (2, 1, "left_heavy", 0),
                                        (2, 2, "transitional", Fraction(1, 2))])
def test_classify(L, R, kind, z):
    assert classify(L, R) == kind
    assert zeta_by_cases(L, R) == z == zeta_clamped(L, R)


def test_clamp_matches_cases_small():
    for L in range(1, 40):
        for R in range(0, 40):
            assert zeta_clamped(L, R) == zeta_by_cases(L, R) == zeta(L, L + R)


def test_loglog_guard():
    assert loglog(1) == loglog(4) == 1.0
    assert loglog(16) == 2.0


def test_snapshot_sums_exactly(forest_cls):
    f, _ = build((((), ()), (), ((),)), forest_cls)
    snap = snapshot(f)
    assert snap.zeta_total == sum(snap.per_node.values(), Fraction(0))
    assert isinstance(snap.zeta_total, Fraction)
    assert snap.phi_total == pytest.approx(float(snap.zeta_total) * 64 * loglog(f.n))


def test_singleton_lemmas_trivial(forest_cls):
    f, _ = build(((), ((),)), forest_cls)
    st = compute_stats(f)
    for x in st:
        assert check_sibling_lemma(f, [x], st) == []
        assert check_path_lemma(f, [x], st) == []


def test_detach_leaf_under_right_heavy_ancestors(forest_cls):
    # root list: A(leaf child) then a big right sibling keeps A right heavy
    shape = (((),), (), (), (), (), ())
    f, order = build(shape, forest_cls)
    st = compute_stats(f)
    a, leaf = order[0], order[1]
    assert classify(st[a].L, st[a].R) == "right_heavy"
    assert detach_increase(f, leaf) <= 0
    assert check_detach_lemma(f, leaf) == []


def test_detach_does_not_modify_input(forest_cls):
    f, order = build((((), ()),), forest_cls)
    before = snapshot(f).zeta_total
    detach_increase(f, order[1])
    assert snapshot(f).zeta_total == before and f.root_count == 1


def test_lemmas_exhaustive_small(forest_cls):
    for shape in forests_upto(5):
        f, _ = build(shape, forest_cls)
        assert check_all_lemmas(f) == [], shape


def test_lemmas_random(forest_cls):
    rng = random.Random(8)
    for _ in range(40):
        f, _ = build(random_shape(rng.randint(1, 200), rng), forest_cls)
        assert check_all_lemmas(f) == []


def test_growth_fact():
    assert growth_gap(4) == pytest.approx(4 * (1 - 0.6644), abs=1e-3)
    assert growth_gap(4) <= 2
    assert check_growth_fact([4, 10, 10**6]) == []
    gaps = [growth_gap(n) for n in range(8, 2000)]
    assert all(a >= b for a, b in zip(gaps, gaps[1:]))
    with pytest.raises(ValueError):
        check_growth_fact([3])


def test_bounds():
    assert insert_bound(16, 1) == 15 * 2 + 2
    assert extract_bound(2, 1) == extract_bound(4, 1)


def test_auditor_tracks_snapshot(forest_cls):
    ops = wl.gen_rounds(32, 60, 3)
    aud = Auditor(forest_cls=forest_cls)

    def check(k, op):
        s = snapshot(aud.heap.forest)
        assert float(s.zeta_total) == pytest.approx(aud.zeta_total, abs=1e-9)
        assert aud.phi == pytest.approx(s.phi_total, abs=1e-6)

    out = wl.replay(ops, aud, on_op=check)
    assert out == wl.reference_extracts(ops)
    rep = aud.report
    assert len(rep.rows) == len(ops)
    assert rep.chain_violations == []
    assert rep.total_actual == aud.heap.ledger.total
    assert rep.max_ratio("insert") == rep.max_ratio_by_kind["insert"]


def test_insert_into_empty_amortized(forest_cls):
    aud = Auditor(forest_cls=forest_cls)
    aud.insert(5)
    row = aud.last_row
    assert row.actual == 1 and row.delta_phi == 0.0 and row.amortized <= row.bound


def test_phi_is_nonnegative_and_total_covers_actual(forest_cls):
    rep = audit_run(wl.gen_rounds(64, 100, 9), forest_cls=forest_cls)
    assert rep.total_amortized >= rep.total_actual - 1e-6
    assert all(r.ratio <= 1 for r in rep.rows)


def test_auditor_rejects_model_strategy():
    with pytest.raises(ValueError):
        Auditor(SortHeap(MODEL, track_sizes=True))
    with pytest.raises(ValueError):
        Auditor(SortHeap())
