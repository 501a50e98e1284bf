# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled link-cut forest; mirrors ``_lct_py.LinkCutForest`` exactly."""

from libcpp.vector cimport vector

from ._lct_py import LinkCutError


cdef class LinkCutForest:
    cdef vector[int] _l, _r, _par, _deg, _free
    cdef vector[char] _rev, _alive
    cdef int _count

    backend = "cython"

    def __cinit__(self):
        self._l.push_back(0)
        self._r.push_back(0)
        self._par.push_back(0)
        self._deg.push_back(0)
        self._rev.push_back(0)
        self._alive.push_back(0)
        self._count = 0

    def __len__(self):
        return self._count

    def make_node(self):
        cdef int x
        if self._free.size():
            x = self._free.back()
            self._free.pop_back()
            self._l[x] = 0
            self._r[x] = 0
            self._par[x] = 0
            self._rev[x] = 0
            self._deg[x] = 0
            self._alive[x] = 1
        else:
            x = <int>self._l.size()
            self._l.push_back(0)
            self._r.push_back(0)
            self._par.push_back(0)
            self._rev.push_back(0)
            self._deg.push_back(0)
            self._alive.push_back(1)
        self._count += 1
        return x

    def discard_node(self, int x):
        self._check(x)
        if self._deg[x]:
            raise LinkCutError(f"node {x} still has tree edges")
        self._access(x)
        self._l[x] = 0
        self._r[x] = 0
        self._par[x] = 0
        self._rev[x] = 0
        self._alive[x] = 0
        self._free.push_back(x)
        self._count -= 1

    cdef void _check(self, long x) except *:
        if not (0 < x < <long>self._alive.size() and self._alive[x]):
            raise LinkCutError(f"invalid node {x}")

    cdef inline bint _is_root(self, int x) noexcept:
        cdef int p = self._par[x]
        return p == 0 or (self._l[p] != x and self._r[p] != x)

    cdef inline void _push(self, int x) noexcept:
        cdef int a, b
        if self._rev[x]:
            a = self._l[x]
            b = self._r[x]
            self._l[x] = b
            self._r[x] = a
            if a:
                self._rev[a] = not self._rev[a]
            if b:
                self._rev[b] = not self._rev[b]
            self._rev[x] = 0

    cdef void _rotate(self, int x) noexcept:
        cdef int y = self._par[x]
        cdef int z = self._par[y]
        cdef int b
        if not self._is_root(y):
            if self._l[z] == y:
                self._l[z] = x
            else:
                self._r[z] = x
        self._par[x] = z
        if self._l[y] == x:
            b = self._r[x]
            self._l[y] = b
            self._r[x] = y
        else:
            b = self._l[x]
            self._r[y] = b
            self._l[x] = y
        if b:
            self._par[b] = y
        self._par[y] = x

    cdef void _splay(self, int x) noexcept:
        cdef vector[int] stack
        cdef int y = x
        cdef int z
        cdef Py_ssize_t i
        stack.push_back(x)
        while not self._is_root(y):
            y = self._par[y]
            stack.push_back(y)
        i = <Py_ssize_t>stack.size() - 1
        while i >= 0:
            self._push(stack[i])
            i -= 1
        while not self._is_root(x):
            y = self._par[x]
            if not self._is_root(y):
                z = self._par[y]
                if (self._l[y] == x) == (self._l[z] == y):
                    self._rotate(y)
                else:
                    self._rotate(x)
            self._rotate(x)

    cdef int _access(self, int x) noexcept:
        cdef int last = 0
        cdef int y = x
        while y:
            self._splay(y)
            self._r[y] = last
            last = y
            y = self._par[y]
        self._splay(x)
        return last

    cdef int _find_root(self, int x) noexcept:
        self._access(x)
        self._push(x)
        while self._l[x]:
            x = self._l[x]
            self._push(x)
        self._splay(x)
        return x

    cdef int _rightmost(self, int p) noexcept:
        self._push(p)
        while self._r[p]:
            p = self._r[p]
            self._push(p)
        return p

    def root(self, int x):
        self._check(x)
        return self._find_root(x)

    def connected(self, int u, int v):
        self._check(u)
        self._check(v)
        return u == v or self._find_root(u) == self._find_root(v)

    def evert(self, int x):
        self._check(x)
        self._access(x)
        self._rev[x] = not self._rev[x]
        self._push(x)

    def link(self, int u, int v):
        """Make ``u`` the parent of root ``v``."""
        self._check(u)
        self._check(v)
        if self._find_root(v) != v:
            raise LinkCutError(f"node {v} is not a root")
        if self._find_root(u) == v:
            raise LinkCutError(f"nodes {u} and {v} are already connected")
        self._access(v)
        self._par[v] = u
        self._deg[u] += 1
        self._deg[v] += 1

    def cut(self, int v):
        cdef int left, p
        self._check(v)
        self._access(v)
        self._push(v)
        left = self._l[v]
        if not left:
            raise LinkCutError(f"node {v} is a root")
        p = self._rightmost(left)
        self._par[left] = 0
        self._l[v] = 0
        self._deg[v] -= 1
        self._deg[p] -= 1

    def parent(self, int v):
        cdef int p
        self._check(v)
        self._access(v)
        self._push(v)
        p = self._l[v]
        if not p:
            return None
        p = self._rightmost(p)
        self._splay(p)
        return p

    def lca(self, int u, int v):
        if not self.connected(u, v):
            raise LinkCutError(f"nodes {u} and {v} are in different trees")
        self._access(u)
        return self._access(v)

    def degree(self, int v):
        self._check(v)
        return self._deg[v]

    def path(self, int u, int v):
        """Nodes on the tree path from ``u`` to ``v``; the root is left unchanged."""
        cdef int r, x
        cdef vector[int] stack
        if not self.connected(u, v):
            raise LinkCutError(f"nodes {u} and {v} are in different trees")
        r = self._find_root(u)
        self.evert(u)
        self._access(v)
        out = []
        x = v
        while stack.size() or x:
            if x:
                self._push(x)
                stack.push_back(x)
                x = self._l[x]
            else:
                x = stack.back()
                stack.pop_back()
                out.append(x)
                x = self._r[x]
        self.evert(r)
        return out
