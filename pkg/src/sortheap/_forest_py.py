"""Pure-Python forest kernel.

Arena of heap nodes linked by parent / leftmost-child / left / right
pointers, with roots forming one more sibling list. Every method here has
an identical counterpart in ``_forest.pyx``; the two are interchangeable and
the test-suite runs against both.

Keys are ordered by ``(value, seq)`` where ``seq`` is the insertion sequence
number, so no two live keys compare equal.
"""

NIL = -1


class Forest:
    """Link-based ordered forest of heap-ordered trees."""

    backend = "python"

    def __init__(self, track_sizes=False):
        self._value = []
        self._seq = []
        self._parent = []
        self._child = []
        self._left = []
        self._right = []
        self._size = []
        self._gen = []
        self._alive = []
        self._free = []
        self._first = NIL
        self._n = 0
        self._nroots = 0
        self._next_seq = 0
        self._track = bool(track_sizes)

    # -- bookkeeping -------------------------------------------------------

    @property
    def n(self):
        return self._n

    @property
    def root_count(self):
        return self._nroots

    @property
    def first_root(self):
        return self._first

    @property
    def track_sizes(self):
        return self._track

    def capacity(self):
        return len(self._value)

    def copy(self):
        other = Forest.__new__(Forest)
        for name, val in self.__dict__.items():
            setattr(other, name, list(val) if isinstance(val, list) else val)
        return other

    def new_node(self, value):
        """Allocate a detached node and return its slot index."""
        seq = self._next_seq
        self._next_seq += 1
        if self._free:
            i = self._free.pop()
            self._value[i] = value
            self._seq[i] = seq
            self._parent[i] = self._child[i] = NIL
            self._left[i] = self._right[i] = NIL
            self._size[i] = 1
            self._alive[i] = True
        else:
            i = len(self._value)
            self._value.append(value)
            self._seq.append(seq)
            self._parent.append(NIL)
            self._child.append(NIL)
            self._left.append(NIL)
            self._right.append(NIL)
            self._size.append(1)
            self._gen.append(0)
            self._alive.append(True)
        self._n += 1
        return i

    def free_node(self, i):
        self._alive[i] = False
        self._gen[i] += 1
        self._parent[i] = self._child[i] = NIL
        self._left[i] = self._right[i] = NIL
        self._free.append(i)
        self._n -= 1

    # -- accessors ---------------------------------------------------------

    def is_live(self, i):
        return 0 <= i < len(self._alive) and self._alive[i]

    def generation(self, i):
        return self._gen[i]

    def value(self, i):
        return self._value[i]

    def seq(self, i):
        return self._seq[i]

    def parent(self, i):
        return self._parent[i]

    def leftmost_child(self, i):
        return self._child[i]

    def left_sibling(self, i):
        return self._left[i]

    def right_sibling(self, i):
        return self._right[i]

    def subtree_size(self, i):
        return self._size[i]

    def is_root(self, i):
        return self._parent[i] == NIL

    def less(self, a, b):
        va = self._value[a]
        vb = self._value[b]
        return va < vb or (va == vb and self._seq[a] < self._seq[b])

    def roots(self):
        out = []
        r = self._first
        while r != NIL:
            out.append(r)
            r = self._right[r]
        return out

    def children(self, i):
        out = []
        c = self._child[i]
        while c != NIL:
            out.append(c)
            c = self._right[c]
        return out

    def raw_set(self, field, i, j):
        """Overwrite one field; only for fault-injection tests."""
        getattr(self, "_" + field)[i] = j

    # -- structural primitives ---------------------------------------------

    def push_root(self, i):
        """Make the detached node ``i`` the leftmost root."""
        first = self._first
        self._parent[i] = NIL
        self._left[i] = NIL
        self._right[i] = first
        if first != NIL:
            self._left[first] = i
        self._first = i
        self._nroots += 1

    def insert(self, value):
        i = self.new_node(value)
        self.push_root(i)
        return i

    def cut(self, i):
        """Detach ``i`` (with its subtree) from its parent or the root list."""
        left = self._left[i]
        right = self._right[i]
        p = self._parent[i]
        if p == NIL:
            if left == NIL:
                self._first = right
            else:
                self._right[left] = right
            self._nroots -= 1
        else:
            if left == NIL:
                self._child[p] = right
            else:
                self._right[left] = right
            if self._track:
                m = self._size[i]
                a = p
                while a != NIL:
                    self._size[a] -= m
                    a = self._parent[a]
        if right != NIL:
            self._left[right] = left
        self._parent[i] = NIL
        self._left[i] = NIL
        self._right[i] = NIL

    def decrease_key(self, i, delta):
        self.cut(i)
        self._value[i] -= delta
        self.push_root(i)

    def link(self, p, c):
        """Attach the detached node ``c`` as leftmost child of root ``p``."""
        first = self._child[p]
        self._parent[c] = p
        self._left[c] = NIL
        self._right[c] = first
        if first != NIL:
            self._left[first] = c
        self._child[p] = c
        if self._track:
            m = self._size[c]
            a = p
            while a != NIL:
                self._size[a] += m
                a = self._parent[a]

    def pair(self, a, b):
        """Pair two distinct roots; return the winner (smaller key)."""
        if self.less(b, a):
            a, b = b, a
        self.cut(b)
        self.link(a, b)
        return a

    def remove_root(self, i):
        """Delete root ``i``; its children become the leftmost roots in order."""
        self.cut(i)
        c = self._child[i]
        if c != NIL:
            last = c
            k = 0
            while True:
                self._parent[last] = NIL
                k += 1
                nxt = self._right[last]
                if nxt == NIL:
                    break
                last = nxt
            first = self._first
            self._right[last] = first
            if first != NIL:
                self._left[first] = last
            self._first = c
            self._nroots += k
        self.free_node(i)

    def min_root(self):
        r = self._first
        best = r
        while r != NIL:
            if self.less(r, best):
                best = r
            r = self._right[r]
        return best

    # -- consolidation kernels ---------------------------------------------

    def consolidate_sort(self, block_size, blocks=None, log=None):
        """Block-sorted chain pairing of all roots into one tree.

        Roots are cut into positional blocks of ``block_size``; each block is
        sorted and paired from largest to smallest, which leaves a chain whose
        top is the block minimum. Block winners are then paired left to
        right. Returns the number of pairings. When given, ``blocks`` receives
        each block's members in ascending key order and ``log`` receives every
        ``(winner, loser)`` pair in execution order.
        """
        roots = self.roots()
        k = len(roots)
        if k <= 1:
            if blocks is not None and k == 1:
                blocks.append([roots[0]])
            return 0
        value = self._value
        seq = self._seq
        keyf = lambda r: (value[r], seq[r])
        winners = []
        pairings = 0
        for start in range(0, k, block_size):
            block = sorted(roots[start:start + block_size], key=keyf)
            if blocks is not None:
                blocks.append(block)
            cur = block[-1]
            for j in range(len(block) - 2, -1, -1):
                w = block[j]
                self.cut(cur)
                self.link(w, cur)
                if log is not None:
                    log.append((w, cur))
                cur = w
                pairings += 1
            winners.append(cur)
        w = winners[0]
        for b in winners[1:]:
            nw = self.pair(w, b)
            if log is not None:
                log.append((nw, b if nw == w else w))
            w = nw
            pairings += 1
        return pairings

    def consolidate_two_pass(self, log=None):
        """Classic two-pass pairing of all roots; returns pairings made."""
        roots = self.roots()
        k = len(roots)
        if k <= 1:
            return 0
        firsts = []
        for j in range(0, k - 1, 2):
            a, b = roots[j], roots[j + 1]
            w = self.pair(a, b)
            if log is not None:
                log.append((w, b if w == a else a))
            firsts.append(w)
        if k % 2:
            firsts.append(roots[-1])
        acc = firsts[-1]
        for j in range(len(firsts) - 2, -1, -1):
            a = firsts[j]
            w = self.pair(a, acc)
            if log is not None:
                log.append((w, acc if w == a else a))
            acc = w
        return k - 1
