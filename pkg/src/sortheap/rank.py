"""Ranks and marks of heap nodes.

The rank of a node is computed from its unmarked children, taken right to
left (the order in which they were attached). A child is *efficiently
linked* when ``r - w <= rank(child) <= r`` for the running rank ``r``. The
rank goes up by one when either

* the child is efficiently linked and is the ``t``-th efficiently linked
  child of the current run, or
* the current run reaches ``2**w`` children,

where a run is the child together with its non-incrementing siblings to the
right. An incrementing child ends the run. A node whose rank rises becomes
marked until the next Decrease-Key on it; marked children are ignored by
their parent. Marks are analysis state only and live here, not in the heap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ._backend import NIL


@dataclass(frozen=True)
class RankParams:
    window_w: int
    threshold_t: int

    def __post_init__(self):
        if self.window_w < 1 or self.threshold_t < 1:
            raise ValueError("window_w and threshold_t must be >= 1")

    @property
    def run_limit(self) -> int:
        return 1 << self.window_w


@dataclass
class RunState:
    rank: int = 0
    run_len: int = 0
    run_eff: int = 0


def step(state: RunState, child_rank: int, params: RankParams) -> tuple[bool, bool]:
    """Feed one unmarked child into the recurrence.

    Returns ``(efficient, incremented)``; ``state`` is updated in place.
    """
    r = state.rank
    eff = r - params.window_w <= child_rank <= r
    state.run_len += 1
    if eff:
        state.run_eff += 1
    if (eff and state.run_eff >= params.threshold_t) or state.run_len >= params.run_limit:
        state.rank = r + 1
        state.run_len = 0
        state.run_eff = 0
        return eff, True
    return eff, False


@dataclass
class RankState:
    """Ranks, marks and per-node recurrence state over one forest."""

    params: RankParams
    runs: dict[int, RunState] = field(default_factory=dict)
    marked: set[int] = field(default_factory=set)

    def rank(self, x: int) -> int:
        st = self.runs.get(x)
        return st.rank if st is not None else 0

    def is_marked(self, x: int) -> bool:
        return x in self.marked

    def unmarked_children_rtl(self, forest, x: int) -> list[int]:
        kids = [c for c in forest.children(x) if c not in self.marked]
        kids.reverse()
        return kids

    def compute_rank(self, forest, x: int) -> tuple[RunState, list[bool]]:
        """From-scratch recurrence over ``x``'s unmarked children.

        Uses the stored ranks of the children. Returns the final state and
        the efficient-link label of each child (right to left).
        """
        st = RunState()
        labels = []
        for c in self.unmarked_children_rtl(forest, x):
            eff, _ = step(st, self.rank(c), self.params)
            labels.append(eff)
        return st, labels

    def recompute_all(self, forest) -> dict[int, int]:
        """Recompute every rank bottom-up from the structure; returns ranks."""
        order = []
        stack = list(forest.roots())
        while stack:
            x = stack.pop()
            order.append(x)
            stack.extend(forest.children(x))
        for x in reversed(order):
            st, _ = self.compute_rank(forest, x)
            self.runs[x] = st
        return {x: self.runs[x].rank for x in order}

    def apply_pairing(self, winner: int, loser: int) -> bool:
        """Account for ``loser`` having just become ``winner``'s leftmost child.

        Only the winner's rank can change. Returns whether it went up; if so
        the winner is marked.
        """
        if loser in self.marked:
            return False
        st = self.runs.setdefault(winner, RunState())
        _, inc = step(st, self.rank(loser), self.params)
        if inc:
            self.marked.add(winner)
        return inc

    def unmark_on_decrease_key(self, forest, x: int, old_parent: int = NIL) -> list[tuple]:
        """Clear ``x``'s mark after a Decrease-Key cut it from ``old_parent``.

        If ``x`` was an unmarked child its former ancestors lose part of their
        unmarked subtree; they are recomputed and the changes returned as
        ``(node, old_rank, new_rank)``.
        """
        was_marked = x in self.marked
        self.marked.discard(x)
        changes = []
        if old_parent == NIL or was_marked:
            return changes
        a = old_parent
        while a != NIL:
            before = self.rank(a)
            st, _ = self.compute_rank(forest, a)
            self.runs[a] = st
            if st.rank == before:
                break
            changes.append((a, before, st.rank))
            if st.rank > before:
                if a in self.marked:
                    break
                self.marked.add(a)
            elif a in self.marked:
                break
            a = forest.parent(a)
        return changes

    def forget(self, x: int) -> None:
        self.runs.pop(x, None)
        self.marked.discard(x)


# -- lemma checks --------------------------------------------------------------

def unmarked_sizes(forest, state: RankState) -> dict[int, int]:
    sizes: dict[int, int] = {}
    stack = [(r, False) for r in forest.roots()]
    while stack:
        x, done = stack.pop()
        if done:
            sizes[x] = 1 + sum(sizes[c] for c in forest.children(x)
                               if c not in state.marked)
        else:
            stack.append((x, True))
            stack.extend((c, False) for c in forest.children(x))
    return sizes


def check_size_lemma(forest, state: RankState) -> list[str]:
    """Unmarked subtree of a rank-``k`` unmarked node has at most ``t**k`` nodes."""
    t = state.params.threshold_t
    bad = []
    for x, s in unmarked_sizes(forest, state).items():
        if x in state.marked:
            continue
        k = state.rank(x)
        if s > t ** k:
            bad.append(f"node {x}: rank {k}, unmarked size {s} > {t}^{k}")
    return bad


def check_efficient_children_lemma(forest, state: RankState) -> list[str]:
    """Rank >= k with at most (k/2)*2**w unmarked children implies at least
    k/2 efficiently linked unmarked children of rank < k."""
    p = state.params
    bad = []
    stack = list(forest.roots())
    while stack:
        v = stack.pop()
        kids = forest.children(v)
        stack.extend(kids)
        rv = state.rank(v)
        if rv == 0:
            continue
        unmarked = state.unmarked_children_rtl(forest, v)
        _, labels = state.compute_rank(forest, v)
        for k in range(1, rv + 1):
            if 2 * len(unmarked) > k * p.run_limit:
                continue
            eff = sum(1 for c, e in zip(unmarked, labels) if e and state.rank(c) < k)
            if 2 * eff < k:
                bad.append(f"node {v}: rank {rv}, k={k}: {eff} efficient children")
    return bad


def check_incremental(forest, state: RankState) -> list[str]:
    """Stored (incrementally maintained) ranks equal a from-scratch pass."""
    scratch = RankState(state.params, marked=set(state.marked))
    fresh = scratch.recompute_all(forest)
    bad = []
    for x, r in fresh.items():
        if state.rank(x) != r:
            bad.append(f"node {x}: incremental rank {state.rank(x)} != {r}")
    return bad


def simulate(params: RankParams, n_nodes: int, rng, forest_cls=None,
             cut_prob: float = 0.0, check_every: int = 0):
    """Random pairing/marking run in the regime where keys track ranks.

    Nodes start as rank-0 roots with key 0. Each step either pairs two random
    roots (smaller key wins) or performs a Decrease-Key on a random marked
    node, setting its key to minus its rank. With ``cut_prob > 0`` some steps
    instead cut a random unmarked non-root, which the monotone regime never
    does. Stops when one root with no marks remains (or after a step cap). Returns
    ``(forest, state, violations)`` where violations come from the
    incremental-vs-scratch check every ``check_every`` steps (0 = at the end).
    """
    from ._backend import Forest

    cls = forest_cls or Forest
    forest = cls()
    state = RankState(params)
    for _ in range(n_nodes):
        forest.insert(0)
    violations = []
    steps = 0
    max_steps = 50 * n_nodes + 100
    while (forest.root_count > 1 or state.marked) and steps < max_steps:
        steps += 1
        roll = rng.random()
        marked = state.marked
        if cut_prob and roll < cut_prob:
            cands = [x for x in _nonroots(forest) if x not in marked]
            if cands:
                x = rng.choice(cands)
                p = forest.parent(x)
                forest.decrease_key(x, 0)
                state.unmark_on_decrease_key(forest, x, p)
                continue
        if marked and (forest.root_count < 2 or roll < 0.3):
            x = rng.choice(sorted(marked))
            p = forest.parent(x)
            forest.decrease_key(x, forest.value(x) + state.rank(x))
            state.unmark_on_decrease_key(forest, x, p)
        elif forest.root_count >= 2:
            roots = forest.roots()
            a, b = rng.sample(roots, 2)
            w = forest.pair(a, b)
            state.apply_pairing(w, b if w == a else a)
        if check_every and steps % check_every == 0:
            violations += check_incremental(forest, state)
    violations += check_incremental(forest, state)
    return forest, state, violations


def _nonroots(forest):
    out = []
    stack = list(forest.roots())
    while stack:
        x = stack.pop()
        kids = forest.children(x)
        out.extend(kids)
        stack.extend(kids)
    return out


def location(forest, x: int) -> tuple[int, ...]:
    """Position of ``x`` counted from the right at every level, top down."""
    path = []
    while x != NIL:
        k = 0
        y = forest.right_sibling(x)
        while y != NIL:
            k += 1
            y = forest.right_sibling(y)
        path.append(k)
        x = forest.parent(x)
    return tuple(reversed(path))
