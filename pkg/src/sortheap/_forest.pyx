# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled forest kernel; method-for-method twin of ``_forest_py.Forest``.

Values are 64-bit signed integers here. Slots live in growable C arrays.
"""

from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memcpy
from libc.stdint cimport int64_t, INT64_MIN

cdef enum:
    NIL_ = -1

NIL = -1


cdef struct Node:
    int64_t value
    int64_t seq
    Py_ssize_t parent
    Py_ssize_t child
    Py_ssize_t left
    Py_ssize_t right
    Py_ssize_t size
    Py_ssize_t gen
    bint alive


cdef class Forest:
    """Link-based ordered forest of heap-ordered trees."""

    cdef Node* nodes
    cdef Py_ssize_t cap
    cdef Py_ssize_t used
    cdef Py_ssize_t* freelist
    cdef Py_ssize_t nfree
    cdef Py_ssize_t first
    cdef Py_ssize_t count
    cdef Py_ssize_t nroots
    cdef int64_t next_seq
    cdef bint track
    cdef Py_ssize_t* scratch
    cdef Py_ssize_t scratch_cap

    backend = "compiled"

    def __cinit__(self, track_sizes=False):
        self.cap = 16
        self.nodes = <Node*> malloc(self.cap * sizeof(Node))
        self.freelist = <Py_ssize_t*> malloc(self.cap * sizeof(Py_ssize_t))
        self.scratch_cap = 16
        self.scratch = <Py_ssize_t*> malloc(self.scratch_cap * sizeof(Py_ssize_t))
        if self.nodes == NULL or self.freelist == NULL or self.scratch == NULL:
            raise MemoryError()
        self.used = 0
        self.nfree = 0
        self.first = NIL_
        self.count = 0
        self.nroots = 0
        self.next_seq = 0
        self.track = track_sizes

    def __dealloc__(self):
        free(self.nodes)
        free(self.freelist)
        free(self.scratch)

    cdef int _grow(self) except -1:
        cdef Py_ssize_t cap = self.cap * 2
        cdef Node* nodes = <Node*> realloc(self.nodes, cap * sizeof(Node))
        if nodes == NULL:
            raise MemoryError("forest arena exhausted")
        self.nodes = nodes
        cdef Py_ssize_t* fl = <Py_ssize_t*> realloc(self.freelist, cap * sizeof(Py_ssize_t))
        if fl == NULL:
            raise MemoryError("forest arena exhausted")
        self.freelist = fl
        self.cap = cap
        return 0

    cdef int _need_scratch(self, Py_ssize_t k) except -1:
        cdef Py_ssize_t* s
        if k > self.scratch_cap:
            s = <Py_ssize_t*> realloc(self.scratch, k * sizeof(Py_ssize_t))
            if s == NULL:
                raise MemoryError()
            self.scratch = s
            self.scratch_cap = k
        return 0

    # -- bookkeeping -------------------------------------------------------

    @property
    def n(self):
        return self.count

    @property
    def root_count(self):
        return self.nroots

    @property
    def first_root(self):
        return self.first

    @property
    def track_sizes(self):
        return self.track

    def capacity(self):
        return self.used

    def copy(self):
        cdef Forest other = Forest(self.track)
        while other.cap < self.cap:
            other._grow()
        memcpy(other.nodes, self.nodes, self.used * sizeof(Node))
        memcpy(other.freelist, self.freelist, self.nfree * sizeof(Py_ssize_t))
        other.used = self.used
        other.nfree = self.nfree
        other.first = self.first
        other.count = self.count
        other.nroots = self.nroots
        other.next_seq = self.next_seq
        return other

    cpdef Py_ssize_t new_node(self, int64_t value) except -1:
        cdef Py_ssize_t i
        if self.nfree > 0:
            self.nfree -= 1
            i = self.freelist[self.nfree]
        else:
            if self.used == self.cap:
                self._grow()
            i = self.used
            self.used += 1
            self.nodes[i].gen = 0
        cdef Node* x = &self.nodes[i]
        x.value = value
        x.seq = self.next_seq
        self.next_seq += 1
        x.parent = NIL_
        x.child = NIL_
        x.left = NIL_
        x.right = NIL_
        x.size = 1
        x.alive = True
        self.count += 1
        return i

    cpdef free_node(self, Py_ssize_t i):
        cdef Node* x = &self.nodes[i]
        x.alive = False
        x.gen += 1
        x.parent = NIL_
        x.child = NIL_
        x.left = NIL_
        x.right = NIL_
        self.freelist[self.nfree] = i
        self.nfree += 1
        self.count -= 1

    # -- accessors ---------------------------------------------------------

    cpdef bint is_live(self, Py_ssize_t i):
        return 0 <= i < self.used and self.nodes[i].alive

    cpdef Py_ssize_t generation(self, Py_ssize_t i):
        return self.nodes[i].gen

    cpdef int64_t value(self, Py_ssize_t i):
        return self.nodes[i].value

    cpdef int64_t seq(self, Py_ssize_t i):
        return self.nodes[i].seq

    cpdef Py_ssize_t parent(self, Py_ssize_t i):
        return self.nodes[i].parent

    cpdef Py_ssize_t leftmost_child(self, Py_ssize_t i):
        return self.nodes[i].child

    cpdef Py_ssize_t left_sibling(self, Py_ssize_t i):
        return self.nodes[i].left

    cpdef Py_ssize_t right_sibling(self, Py_ssize_t i):
        return self.nodes[i].right

    cpdef Py_ssize_t subtree_size(self, Py_ssize_t i):
        return self.nodes[i].size

    cpdef bint is_root(self, Py_ssize_t i):
        return self.nodes[i].parent == NIL_

    cpdef bint less(self, Py_ssize_t a, Py_ssize_t b):
        return self._less(a, b)

    cdef inline bint _less(self, Py_ssize_t a, Py_ssize_t b):
        cdef Node* x = &self.nodes[a]
        cdef Node* y = &self.nodes[b]
        return x.value < y.value or (x.value == y.value and x.seq < y.seq)

    def roots(self):
        out = []
        cdef Py_ssize_t r = self.first
        while r != NIL_:
            out.append(r)
            r = self.nodes[r].right
        return out

    def children(self, Py_ssize_t i):
        out = []
        cdef Py_ssize_t c = self.nodes[i].child
        while c != NIL_:
            out.append(c)
            c = self.nodes[c].right
        return out

    def raw_set(self, field, Py_ssize_t i, int64_t j):
        """Overwrite one field; only for fault-injection tests."""
        cdef Node* x = &self.nodes[i]
        if field == "parent":
            x.parent = j
        elif field == "child":
            x.child = j
        elif field == "left":
            x.left = j
        elif field == "right":
            x.right = j
        elif field == "size":
            x.size = j
        elif field == "value":
            x.value = j
        else:
            raise ValueError(field)

    # -- structural primitives ---------------------------------------------

    cpdef push_root(self, Py_ssize_t i):
        cdef Py_ssize_t first = self.first
        cdef Node* x = &self.nodes[i]
        x.parent = NIL_
        x.left = NIL_
        x.right = first
        if first != NIL_:
            self.nodes[first].left = i
        self.first = i
        self.nroots += 1

    cpdef Py_ssize_t insert(self, int64_t value) except -1:
        cdef Py_ssize_t i = self.new_node(value)
        self.push_root(i)
        return i

    cpdef cut(self, Py_ssize_t i):
        cdef Node* x = &self.nodes[i]
        cdef Py_ssize_t left = x.left
        cdef Py_ssize_t right = x.right
        cdef Py_ssize_t p = x.parent
        cdef Py_ssize_t a, m
        if p == NIL_:
            if left == NIL_:
                self.first = right
            else:
                self.nodes[left].right = right
            self.nroots -= 1
        else:
            if left == NIL_:
                self.nodes[p].child = right
            else:
                self.nodes[left].right = right
            if self.track:
                m = x.size
                a = p
                while a != NIL_:
                    self.nodes[a].size -= m
                    a = self.nodes[a].parent
        if right != NIL_:
            self.nodes[right].left = left
        x.parent = NIL_
        x.left = NIL_
        x.right = NIL_

    cpdef decrease_key(self, Py_ssize_t i, int64_t delta):
        cdef int64_t v = self.nodes[i].value
        if delta > 0 and v < INT64_MIN + delta:
            raise OverflowError("key underflows 64-bit range")
        self.cut(i)
        self.nodes[i].value = v - delta
        self.push_root(i)

    cpdef link(self, Py_ssize_t p, Py_ssize_t c):
        cdef Node* y = &self.nodes[c]
        cdef Py_ssize_t first = self.nodes[p].child
        cdef Py_ssize_t a, m
        y.parent = p
        y.left = NIL_
        y.right = first
        if first != NIL_:
            self.nodes[first].left = c
        self.nodes[p].child = c
        if self.track:
            m = y.size
            a = p
            while a != NIL_:
                self.nodes[a].size += m
                a = self.nodes[a].parent

    cpdef Py_ssize_t pair(self, Py_ssize_t a, Py_ssize_t b):
        cdef Py_ssize_t t
        if self._less(b, a):
            t = a
            a = b
            b = t
        self.cut(b)
        self.link(a, b)
        return a

    cpdef remove_root(self, Py_ssize_t i):
        self.cut(i)
        cdef Py_ssize_t c = self.nodes[i].child
        cdef Py_ssize_t last, nxt, first
        cdef Py_ssize_t k = 0
        if c != NIL_:
            last = c
            while True:
                self.nodes[last].parent = NIL_
                k += 1
                nxt = self.nodes[last].right
                if nxt == NIL_:
                    break
                last = nxt
            first = self.first
            self.nodes[last].right = first
            if first != NIL_:
                self.nodes[first].left = last
            self.first = c
            self.nroots += k
        self.free_node(i)

    cpdef Py_ssize_t min_root(self):
        cdef Py_ssize_t r = self.first
        cdef Py_ssize_t best = r
        while r != NIL_:
            if self._less(r, best):
                best = r
            r = self.nodes[r].right
        return best

    # -- consolidation kernels ---------------------------------------------

    def consolidate_sort(self, Py_ssize_t block_size, blocks=None, log=None):
        """Block-sorted chain pairing of all roots into one tree.

        See ``_forest_py.Forest.consolidate_sort`` for the contract.
        """
        cdef Py_ssize_t k = self.nroots
        cdef Py_ssize_t i, j, m, start, r, cur, w, nw, b, nwin, key_j
        cdef Py_ssize_t pairings = 0
        cdef Py_ssize_t* buf
        if k <= 1:
            if blocks is not None and k == 1:
                blocks.append([self.first])
            return 0
        self._need_scratch(k)
        buf = self.scratch
        r = self.first
        i = 0
        while r != NIL_:
            buf[i] = r
            i += 1
            r = self.nodes[r].right
        nwin = 0
        start = 0
        while start < k:
            m = block_size if start + block_size <= k else k - start
            # insertion sort of buf[start:start+m]
            for i in range(start + 1, start + m):
                key_j = buf[i]
                j = i - 1
                while j >= start and self._less(key_j, buf[j]):
                    buf[j + 1] = buf[j]
                    j -= 1
                buf[j + 1] = key_j
            if blocks is not None:
                blocks.append([buf[x] for x in range(start, start + m)])
            cur = buf[start + m - 1]
            for j in range(start + m - 2, start - 1, -1):
                w = buf[j]
                self.cut(cur)
                self.link(w, cur)
                if log is not None:
                    log.append((w, cur))
                cur = w
                pairings += 1
            # winners are compacted to the front of the scratch buffer
            buf[nwin] = cur
            nwin += 1
            start += m
        w = buf[0]
        for i in range(1, nwin):
            b = buf[i]
            nw = self.pair(w, b)
            if log is not None:
                log.append((nw, b if nw == w else w))
            w = nw
            pairings += 1
        return pairings

    def consolidate_two_pass(self, log=None):
        """Classic two-pass pairing of all roots; returns pairings made."""
        cdef Py_ssize_t k = self.nroots
        cdef Py_ssize_t i, j, a, b, w, nf, acc, r
        cdef Py_ssize_t* buf
        if k <= 1:
            return 0
        self._need_scratch(k)
        buf = self.scratch
        r = self.first
        i = 0
        while r != NIL_:
            buf[i] = r
            i += 1
            r = self.nodes[r].right
        nf = 0
        j = 0
        while j + 1 < k:
            a = buf[j]
            b = buf[j + 1]
            w = self.pair(a, b)
            if log is not None:
                log.append((w, b if w == a else a))
            buf[nf] = w
            nf += 1
            j += 2
        if k % 2:
            buf[nf] = buf[k - 1]
            nf += 1
        acc = buf[nf - 1]
        for j in range(nf - 2, -1, -1):
            a = buf[j]
            w = self.pair(a, acc)
            if log is not None:
                log.append((w, acc if w == a else a))
            acc = w
        return k - 1
