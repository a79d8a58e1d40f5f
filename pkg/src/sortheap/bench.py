"""Benchmark runs: workload selection, instrumentation and CSV output."""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field

from . import workload as wl
from ._backend import NIL
from .graph import random_graph, reference_dijkstra, run_dijkstra
from .pairing_heap import PairingHeap
from .potential import DEFAULT_C, Auditor
from .rank import RankParams, RankState
from .sort_heap import EAGER, MODEL, SortHeap
from .vm import vm_consolidator

CSV_FIELDS = ["op_index", "kind", "actual", "delta_phi", "amortized", "bound", "ratio", "subops"]
DIJKSTRA_ARCS_PER_NODE = 10
DIJKSTRA_MAX_WEIGHT = 10_000


@dataclass
class RunConfig:
    heap: str = "sort"
    strategy: str = EAGER
    workload: str = "rounds"
    n: int = 1024
    rounds: int = 1000
    seed: int = 1
    audit: bool = False
    vm: bool = False
    rank: RankParams | None = None
    csv_path: str | None = None
    workload_out: str | None = None
    c: float = DEFAULT_C
    forest_cls: object = None

    def __post_init__(self):
        if self.heap not in ("sort", "pairing"):
            raise ValueError(f"unknown heap {self.heap!r}")
        if self.strategy not in (EAGER, MODEL):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        kind = self.workload.split(":", 1)[0]
        if kind not in ("rounds", "heapsort", "dijkstra", "file", "monotonic"):
            raise ValueError(f"unknown workload {self.workload!r}")
        if self.n < 1 or self.rounds < 0:
            raise ValueError("n must be positive and rounds nonnegative")
        if self.audit and (self.heap != "sort" or self.strategy != EAGER):
            raise ValueError("--audit prices the sort heap with the eager strategy")
        if self.vm and (self.heap != "sort" or self.strategy != MODEL):
            raise ValueError("--vm runs the sort heap's model strategy")


@dataclass
class BenchResult:
    rows: list[dict] = field(default_factory=list)
    extracted: list[int] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow(r)
        return buf.getvalue()


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


class _Instrumented:
    """Heap facade recording one CSV row per operation."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.rows: list[dict] = []
        self.subops_total = 0
        self.vm_compares = 0
        self.ranks = RankState(cfg.rank) if cfg.rank else None
        self.rank_drops = 0
        self.pair_log = [] if (self.ranks is not None and not cfg.vm) else None
        kw = {"forest_cls": cfg.forest_cls}
        if cfg.heap == "pairing":
            self.heap = PairingHeap(pair_log=self.pair_log, **kw)
        elif cfg.audit:
            self.heap = SortHeap(EAGER, track_sizes=True, record_blocks=True,
                                 pair_log=self.pair_log, **kw)
        else:
            self.heap = SortHeap(cfg.strategy, pair_log=self.pair_log, **kw)
        if cfg.vm:
            self.heap.consolidator = vm_consolidator(ranks=self.ranks)
        self.auditor = Auditor(self.heap, c=cfg.c, keep_rows=False) if cfg.audit else None
        self.target = self.auditor or self.heap

    def __len__(self):
        return len(self.heap)

    def is_live(self, h):
        return self.heap.is_live(h)

    def _row(self, kind, actual, subops=None):
        a = self.auditor.last_row if self.auditor else None
        self.rows.append({
            "op_index": len(self.rows), "kind": kind, "actual": actual,
            "delta_phi": _fmt(a.delta_phi) if a else "",
            "amortized": _fmt(a.amortized) if a else "",
            "bound": _fmt(a.bound) if a else "",
            "ratio": _fmt(a.ratio) if a else "",
            "subops": "" if subops is None else subops,
        })

    def insert(self, value):
        h = self.target.insert(value)
        self._row("insert", 1)
        return h

    def decrease_key(self, h, delta):
        f = self.heap.forest
        parent = f.parent(h.index) if self.heap.is_live(h) else NIL
        self.target.decrease_key(h, delta)
        if self.ranks is not None:
            changes = self.ranks.unmark_on_decrease_key(f, h.index, parent)
            self.rank_drops += sum(1 for _, old, new in changes if new < old)
        self._row("decrease_key", 1)

    def extract_min(self):
        heap = self.heap
        before = heap.ledger.extract_min_actual_cost
        value = self.target.extract_min()
        subops = None
        if self.cfg.vm and heap.last_subops is not None:
            subops, compares, _ = heap.last_subops
            self.subops_total += subops
            self.vm_compares += compares
        if self.ranks is not None:
            self._update_ranks()
        self._row("extract_min", heap.ledger.extract_min_actual_cost - before, subops)
        return value

    def _update_ranks(self):
        st = self.ranks
        if self.pair_log is not None:
            for w, l in self.pair_log:
                st.apply_pairing(w, l)
            self.pair_log.clear()
        f = self.heap.forest
        for x in [x for x in st.runs if not f.is_live(x)]:
            st.forget(x)
        st.marked = {x for x in st.marked if f.is_live(x)}


def _load_workload(cfg: RunConfig):
    kind, _, arg = cfg.workload.partition(":")
    if kind == "rounds":
        return wl.gen_rounds(cfg.n, cfg.rounds, cfg.seed)
    if kind == "monotonic":
        return wl.gen_monotonic(cfg.n, cfg.rounds, cfg.seed, cfg.strategy, cfg.forest_cls)
    if kind == "heapsort":
        return wl.gen_heapsort(cfg.n, cfg.seed)
    if kind == "file":
        return wl.read_workload(arg)
    return None


def bench(cfg: RunConfig) -> BenchResult:
    """Run ``cfg``; writes the CSV (and workload file) when paths are set."""
    res = BenchResult()
    inst = _Instrumented(cfg)
    t0 = time.perf_counter()
    ok = True
    if cfg.workload == "dijkstra":
        rng = wl.SplitMix64(cfg.seed)
        g = random_graph(cfg.n, DIJKSTRA_ARCS_PER_NODE * cfg.n, DIJKSTRA_MAX_WEIGHT, rng)
        dist = run_dijkstra(g, 1, inst)
        elapsed = time.perf_counter() - t0
        ok = dist == reference_dijkstra(g, 1)
        res.summary["dijkstra_matches_reference"] = ok
    else:
        ops = _load_workload(cfg)
        if cfg.workload_out:
            wl.write_workload(ops, cfg.workload_out)
        res.extracted = wl.replay(ops, inst)
        elapsed = time.perf_counter() - t0
        if cfg.workload == "heapsort":
            ok = all(a <= b for a, b in zip(res.extracted, res.extracted[1:]))
            res.summary["sorted"] = ok
        else:
            ok = res.extracted == wl.reference_extracts(ops)
            res.summary["matches_reference"] = ok
    res.rows = inst.rows
    ledger = inst.heap.ledger
    s = res.summary
    s.update(heap=cfg.heap, strategy=cfg.strategy if cfg.heap == "sort" else "",
             workload=cfg.workload, n=cfg.n, seed=cfg.seed,
             backend=inst.heap.forest.backend, ops=len(res.rows),
             total_actual=ledger.total, inserts=ledger.inserts,
             decrease_keys=ledger.decrease_keys, extract_mins=ledger.extract_mins,
             extract_min_actual=ledger.extract_min_actual_cost,
             wall_seconds=round(elapsed, 6))
    if inst.auditor is not None:
        rep = inst.auditor.report
        s["max_amortized"] = dict(rep.max_by_kind)
        s["max_ratio"] = dict(rep.max_ratio_by_kind)
        s["chain_violations"] = len(rep.chain_violations)
        s["total_amortized"] = rep.total_amortized
        ok = ok and not rep.chain_violations and all(v <= 1 for v in rep.max_ratio_by_kind.values())
    if cfg.vm:
        s["vm_subops"] = inst.subops_total
        s["vm_compares"] = inst.vm_compares
    if inst.ranks is not None:
        s["rank_drops"] = inst.rank_drops
    s["ok"] = ok
    if cfg.csv_path:
        with open(cfg.csv_path, "w", newline="") as fh:
            fh.write(res.csv_text())
    return res
