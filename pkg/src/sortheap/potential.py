"""Potential of a sort heap and the lemmas it rests on.

For a node ``x``, ``L`` is the size of its subtree, ``R`` the total size of
the subtrees of its right siblings and ``S = L + R``. Roots count as one
sibling group in root-list order. The raw potential ``zeta`` is 1 when
``3R >= 2S``, 0 when ``3L >= 2S`` and ``(3R - S) / S`` in between; the
potential of the heap is ``sum(zeta) * c * log2(log2(n))``.

All zeta sums are exact :class:`~fractions.Fraction` values; only the log
factors are floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from ._backend import NIL
from .sort_heap import EAGER, SortHeap, chain_violations

DEFAULT_C = 64
DETACH_LIMIT = 13
LOG_3_2 = math.log(1.5)
TOL = 1e-9
FAST_MARGIN = 1e-6


class SubtreeStats(NamedTuple):
    L: int
    R: int
    S: int


RIGHT_HEAVY = "right_heavy"
LEFT_HEAVY = "left_heavy"
TRANSITIONAL = "transitional"


def classify(L: int, R: int) -> str:
    S = L + R
    if 3 * R >= 2 * S:
        return RIGHT_HEAVY
    if 3 * L >= 2 * S:
        return LEFT_HEAVY
    return TRANSITIONAL


def zeta(L: int, S: int) -> Fraction | int:
    """Raw potential from subtree size ``L`` and suffix size ``S``."""
    num = 3 * (S - L) - S
    if num <= 0:
        return 0
    if num >= S:
        return 1
    return Fraction(num, S)


def zeta_clamped(L: int, R: int) -> Fraction:
    S = L + R
    return min(Fraction(1), max(Fraction(0), Fraction(3 * R - S, S)))


def zeta_by_cases(L: int, R: int) -> Fraction:
    S = L + R
    kind = classify(L, R)
    if kind == RIGHT_HEAVY:
        return Fraction(1)
    if kind == LEFT_HEAVY:
        return Fraction(0)
    return (Fraction(R) - Fraction(S, 3)) / Fraction(S, 3)


def loglog(n: int) -> float:
    return math.log2(math.log2(max(n, 4)))


def log_3_2(n: int) -> float:
    return math.log(n) / LOG_3_2 if n > 1 else 0.0


def subtree_sizes(forest) -> dict[int, int]:
    """Subtree size of every live node, computed from the links alone."""
    sizes: dict[int, int] = {}
    stack = [(r, False) for r in forest.roots()]
    while stack:
        x, done = stack.pop()
        if done:
            s = 1
            c = forest.leftmost_child(x)
            while c != NIL:
                s += sizes[c]
                c = forest.right_sibling(c)
            sizes[x] = s
        else:
            stack.append((x, True))
            c = forest.leftmost_child(x)
            while c != NIL:
                stack.append((c, False))
                c = forest.right_sibling(c)
    return sizes


def compute_stats(forest) -> dict[int, SubtreeStats]:
    sizes = subtree_sizes(forest)
    stats: dict[int, SubtreeStats] = {}

    def group(first):
        members = []
        x = first
        while x != NIL:
            members.append(x)
            x = forest.right_sibling(x)
        suffix = 0
        for x in reversed(members):
            L = sizes[x]
            stats[x] = SubtreeStats(L, suffix, L + suffix)
            suffix += L

    group(forest.first_root)
    for x in sizes:
        group(forest.leftmost_child(x))
    return stats


@dataclass
class PotentialSnapshot:
    per_node: dict[int, Fraction]
    zeta_total: Fraction
    phi_total: float
    n: int
    c: float = DEFAULT_C


def snapshot(forest, c: float = DEFAULT_C) -> PotentialSnapshot:
    stats = compute_stats(forest)
    per = {x: Fraction(zeta(s.L, s.S)) for x, s in stats.items()}
    total = exact_sum(per.values())
    n = forest.n
    phi = float(total) * c * loglog(n) if n else 0.0
    return PotentialSnapshot(per, total, phi, n, c)


def exact_sum(values) -> Fraction:
    """Sum of ints/Fractions, grouping by denominator to keep gcds cheap."""
    whole = 0
    by_den: dict[int, int] = {}
    for v in values:
        if isinstance(v, int):
            whole += v
        else:
            d = v.denominator
            by_den[d] = by_den.get(d, 0) + v.numerator
    total = Fraction(whole)
    for d, num in by_den.items():
        total += Fraction(num, d)
    return total


# -- lemma checks -------------------------------------------------------------

def sibling_groups(forest) -> list[list[int]]:
    groups = [forest.roots()]
    for r in list(_all_nodes(forest)):
        kids = forest.children(r)
        if kids:
            groups.append(kids)
    return groups


def root_to_leaf_paths(forest) -> list[list[int]]:
    paths = []
    stack = [(r, (r,)) for r in forest.roots()]
    while stack:
        x, path = stack.pop()
        kids = forest.children(x)
        if not kids:
            paths.append(list(path))
        for c in kids:
            stack.append((c, path + (c,)))
    return paths


def _all_nodes(forest):
    stack = list(forest.roots())
    while stack:
        x = stack.pop()
        yield x
        stack.extend(forest.children(x))


def check_sibling_lemma(forest, group, stats=None) -> list[str]:
    """Sum of zeta over ``k`` mutual siblings is at least ``k - log_1.5 n``.

    Only meaningful for ``n >= 2``: a lone node has zeta 0 while the bound
    would ask for 1.
    """
    n = forest.n
    if n < 2:
        return []
    stats = stats or compute_stats(forest)
    k = len(group)
    total = exact_sum(zeta(stats[x].L, stats[x].S) for x in group)
    rhs = k - log_3_2(n)
    # the float test settles all but near-ties; those fall through to exact
    if float(total) > rhs + FAST_MARGIN or total >= rhs + TOL:
        return []
    if abs(float(total) - rhs) <= TOL and total >= k - math.ceil(log_3_2(n)):
        return []
    return [f"sibling group of {k} at {group[0]}: sum {total} < {rhs:.6f}"]


def _path_ok(total: Fraction, n: int) -> bool:
    rhs = log_3_2(n)
    return float(total) < rhs - FAST_MARGIN or total <= rhs + TOL


def check_path_lemma(forest, chain, stats=None) -> list[str]:
    """Sum of zeta over mutual ancestors/descendants is at most ``log_1.5 n``."""
    stats = stats or compute_stats(forest)
    total = exact_sum(zeta(stats[x].L, stats[x].S) for x in chain)
    if _path_ok(total, forest.n):
        return []
    return [f"chain of {len(chain)} from {chain[0]}: sum {total} > {log_3_2(forest.n):.6f}"]


def check_all_paths(forest, stats=None) -> list[str]:
    """Path lemma on every root-to-leaf path, sharing prefix sums."""
    stats = stats or compute_stats(forest)
    n = forest.n
    bad = []
    stack = []
    for r in forest.roots():
        st = stats[r]
        stack.append((r, Fraction(zeta(st.L, st.S))))
    while stack:
        x, acc = stack.pop()
        c = forest.leftmost_child(x)
        if c == NIL:
            if not _path_ok(acc, n):
                bad.append(f"path ending at {x}: sum {acc} > {log_3_2(n):.6f}")
            continue
        while c != NIL:
            st = stats[c]
            stack.append((c, acc + zeta(st.L, st.S)))
            c = forest.right_sibling(c)
    return bad


def detach_increase(forest, i, stats=None) -> Fraction:
    """Exact change of the zeta sum of nodes outside ``i``'s subtree.

    Works on a copy; ``forest`` is left untouched.
    """
    stats = stats or compute_stats(forest)
    other = forest.copy()
    other.cut(i)
    inside = set()
    stack = [i]
    while stack:
        x = stack.pop()
        inside.add(x)
        stack.extend(forest.children(x))
    after = compute_stats(other)
    diffs = []
    for x, s in after.items():
        if x in inside:
            continue
        old = stats[x]
        if old.L != s.L or old.S != s.S:
            diffs.append(Fraction(zeta(s.L, s.S)) - zeta(old.L, old.S))
    return exact_sum(diffs)


def check_detach_lemma(forest, i, stats=None) -> list[str]:
    if forest.parent(i) == NIL:
        return []
    inc = detach_increase(forest, i, stats)
    if inc <= DETACH_LIMIT:
        return []
    return [f"detaching {i} raised outside zeta by {inc} > {DETACH_LIMIT}"]


def check_all_lemmas(forest, detach=True) -> list[str]:
    stats = compute_stats(forest)
    bad = []
    for g in sibling_groups(forest):
        bad += check_sibling_lemma(forest, g, stats)
    bad += check_all_paths(forest, stats)
    if detach:
        for x in stats:
            bad += check_detach_lemma(forest, x, stats)
    return bad


def growth_gap(n: int) -> float:
    """``n*loglog(n) - n*loglog(n-1)`` with base-2 logs."""
    return n * math.log2(math.log2(n)) - n * math.log2(math.log2(n - 1))


def check_growth_fact(ns) -> list[str]:
    bad = []
    for n in ns:
        if n < 4:
            raise ValueError("growth fact is checked for n >= 4")
        g = growth_gap(n)
        if g > 2 + TOL:
            bad.append(f"n={n}: gap {g} > 2")
    return bad


# -- amortized audit ----------------------------------------------------------

class AuditRow(NamedTuple):
    op_index: int
    kind: str
    actual: int
    delta_phi: float
    amortized: float
    bound: float
    ratio: float


def insert_bound(n: int, c: float) -> float:
    return 15 * c * loglog(n) + 2


def extract_bound(n: int, c: float) -> float:
    n = max(n, 4)
    return c * log_3_2(n) * loglog(n)


@dataclass
class AuditReport:
    rows: list[AuditRow] = field(default_factory=list)
    chain_violations: list[str] = field(default_factory=list)
    total_actual: int = 0
    total_amortized: float = 0.0
    max_by_kind: dict = field(default_factory=dict)
    max_ratio_by_kind: dict = field(default_factory=dict)

    def max_ratio(self, kind: str) -> float:
        return max((r.ratio for r in self.rows if r.kind == kind), default=0.0)

    def max_amortized(self, kind: str) -> float:
        return max((r.amortized for r in self.rows if r.kind == kind), default=0.0)


class Auditor:
    """Runs a sort heap (eager strategy) and prices every operation.

    Each operation is charged ``actual + (phi_after - phi_before)``. The
    change of the zeta sum is computed exactly from the nodes the operation
    can affect; the running zeta total is kept as a float.
    """

    def __init__(self, heap: SortHeap | None = None, c: float = DEFAULT_C,
                 check_chains: bool = True, keep_rows: bool = True, **kw):
        if heap is None:
            heap = SortHeap(EAGER, track_sizes=True, record_blocks=check_chains, **kw)
        if heap.strategy != EAGER:
            raise ValueError("the audit prices the eager strategy")
        if not heap.forest.track_sizes:
            raise ValueError("the audit needs a forest with subtree sizes")
        self.heap = heap
        self.c = c
        self.check_chains = check_chains
        heap.record_blocks = heap.record_blocks or check_chains
        self.report = AuditReport()
        self.keep_rows = keep_rows
        self.maxima = self.report.max_by_kind
        self.max_ratios = self.report.max_ratio_by_kind
        self.last_row: AuditRow | None = None
        self.zeta_total = float(snapshot(heap.forest).zeta_total) if heap.forest.n else 0.0
        self._ops = 0

    @property
    def phi(self) -> float:
        n = self.heap.forest.n
        return self.zeta_total * self.c * loglog(n) if n else 0.0

    def _finish(self, kind, actual, dz, n_before, n_after, bound):
        z_before = self.zeta_total
        self.zeta_total = z_before + float(dz)
        phi_before = z_before * self.c * loglog(n_before) if n_before else 0.0
        phi_after = self.zeta_total * self.c * loglog(n_after) if n_after else 0.0
        dphi = phi_after - phi_before
        amort = actual + dphi
        row = AuditRow(self._ops, kind, actual, dphi, amort, bound, amort / bound)
        self._ops += 1
        rep = self.report
        rep.total_actual += actual
        rep.total_amortized += amort
        self.last_row = row
        if self.keep_rows:
            rep.rows.append(row)
        if amort > self.maxima.get(kind, -math.inf):
            self.maxima[kind] = amort
        if row.ratio > self.max_ratios.get(kind, -math.inf):
            self.max_ratios[kind] = row.ratio
        return row

    def is_live(self, h):
        return self.heap.is_live(h)

    def insert(self, value):
        f = self.heap.forest
        n0 = f.n
        h = self.heap.insert(value)
        self._finish("insert", 1, zeta(1, n0 + 1), n0, n0 + 1, insert_bound(n0 + 1, self.c))
        return h

    def decrease_key(self, h, delta):
        f = self.heap.forest
        n = f.n
        y = h.index
        if not self.heap.is_live(h):
            self.heap.decrease_key(h, delta)  # raises
        M = f.subtree_size(y)
        old = []
        new = []
        z = y
        while True:
            p = f.parent(z)
            if p == NIL:
                first, S = f.first_root, n
            else:
                first, S = f.leftmost_child(p), f.subtree_size(p) - 1
            u = first
            while u != z:
                L = f.subtree_size(u)
                old.append(zeta(L, S))
                new.append(zeta(L, S - M))
                S -= L
                u = f.right_sibling(u)
            L = f.subtree_size(z)
            old.append(zeta(L, S))
            if z == y:
                new.append(zeta(M, n))
            else:
                new.append(zeta(L - M, S - M))
            if p == NIL:
                break
            z = p
        self.heap.decrease_key(h, delta)
        dz = exact_sum(new) - exact_sum(old)
        self._finish("decrease_key", 1, dz, n, n, insert_bound(n, self.c))

    def extract_min(self):
        heap = self.heap
        f = heap.forest
        n0 = f.n
        before_cost = heap.ledger.extract_min_actual_cost
        old = []
        S = n0
        roots = []
        r = f.first_root
        m = f.min_root()
        while r != NIL:
            L = f.subtree_size(r)
            old.append(zeta(L, S))
            S -= L
            roots.append(r)
            r = f.right_sibling(r)
        kids = []
        S = f.subtree_size(m) - 1
        c = f.leftmost_child(m)
        while c != NIL:
            L = f.subtree_size(c)
            old.append(zeta(L, S))
            S -= L
            kids.append(c)
            c = f.right_sibling(c)
        value = heap.extract_min()
        actual = heap.ledger.extract_min_actual_cost - before_cost
        touched = [x for x in roots if x != m] + kids
        new = self._zeta_of(touched)
        dz = exact_sum(new) - exact_sum(old)
        if self.check_chains and heap.last_blocks:
            bad = chain_violations(f, heap.last_blocks, heap.last_block_size)
            self.report.chain_violations += [f"op {self._ops}: {b}" for b in bad]
        self._finish("extract_min", actual, dz, n0, f.n, extract_bound(n0, self.c))
        return value

    def _zeta_of(self, nodes):
        f = self.heap.forest
        by_parent: dict[int, set] = {}
        out = []
        for x in nodes:
            by_parent.setdefault(f.parent(x), set()).add(x)
        for p, members in by_parent.items():
            if p == NIL:
                first, S = f.first_root, f.n
            else:
                first, S = f.leftmost_child(p), f.subtree_size(p) - 1
            left = len(members)
            u = first
            while left:
                L = f.subtree_size(u)
                if u in members:
                    out.append(zeta(L, S))
                    left -= 1
                S -= L
                u = f.right_sibling(u)
        return out


def audit_run(workload, c: float = DEFAULT_C, check_chains: bool = True,
              keep_rows: bool = True, **kw) -> AuditReport:
    """Replay ``workload`` (see :mod:`sortheap.workload`) under the audit."""
    from .workload import replay

    aud = Auditor(c=c, check_chains=check_chains, keep_rows=keep_rows, **kw)
    replay(workload, aud)
    return aud.report
