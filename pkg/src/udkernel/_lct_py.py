"""Pure-Python link-cut forest (splay-based path decomposition).

Node 0 is the nil sentinel; handles start at 1.  ``_par`` holds either the
splay parent or the path-parent pointer; a node is a splay root when its
parent does not list it as a child.
"""

from __future__ import annotations


class LinkCutError(ValueError):
    pass


class LinkCutForest:
    backend = "python"

    def __init__(self):
        self._l = [0]
        self._r = [0]
        self._par = [0]
        self._rev = [False]
        self._deg = [0]
        self._alive = [False]
        self._free: list[int] = []
        self._count = 0

    def __len__(self) -> int:
        return self._count

    # -- node lifecycle ----------------------------------------------------

    def make_node(self) -> int:
        if self._free:
            x = self._free.pop()
            self._l[x] = self._r[x] = self._par[x] = 0
            self._rev[x] = False
            self._deg[x] = 0
            self._alive[x] = True
        else:
            x = len(self._l)
            self._l.append(0)
            self._r.append(0)
            self._par.append(0)
            self._rev.append(False)
            self._deg.append(0)
            self._alive.append(True)
        self._count += 1
        return x

    def discard_node(self, x: int) -> None:
        self._check(x)
        if self._deg[x]:
            raise LinkCutError(f"node {x} still has tree edges")
        self._access(x)
        self._l[x] = self._r[x] = self._par[x] = 0
        self._rev[x] = False
        self._alive[x] = False
        self._free.append(x)
        self._count -= 1

    def _check(self, x: int) -> None:
        if not (0 < x < len(self._alive) and self._alive[x]):
            raise LinkCutError(f"invalid node {x}")

    # -- splay machinery ---------------------------------------------------

    def _is_root(self, x: int) -> bool:
        p = self._par[x]
        return p == 0 or (self._l[p] != x and self._r[p] != x)

    def _push(self, x: int) -> None:
        if self._rev[x]:
            L, R, rev = self._l, self._r, self._rev
            a, b = L[x], R[x]
            L[x], R[x] = b, a
            if a:
                rev[a] = not rev[a]
            if b:
                rev[b] = not rev[b]
            rev[x] = False

    def _rotate(self, x: int) -> None:
        L, R, P = self._l, self._r, self._par
        y = P[x]
        z = P[y]
        if not self._is_root(y):
            if L[z] == y:
                L[z] = x
            else:
                R[z] = x
        P[x] = z
        if L[y] == x:
            b = R[x]
            L[y] = b
            R[x] = y
        else:
            b = L[x]
            R[y] = b
            L[x] = y
        if b:
            P[b] = y
        P[y] = x

    def _splay(self, x: int) -> None:
        stack = [x]
        y = x
        while not self._is_root(y):
            y = self._par[y]
            stack.append(y)
        for y in reversed(stack):
            self._push(y)
        L, P = self._l, self._par
        while not self._is_root(x):
            y = P[x]
            if not self._is_root(y):
                z = P[y]
                if (L[y] == x) == (L[z] == y):
                    self._rotate(y)
                else:
                    self._rotate(x)
            self._rotate(x)

    def _access(self, x: int) -> int:
        last = 0
        y = x
        R, P = self._r, self._par
        while y:
            self._splay(y)
            R[y] = last
            last = y
            y = P[y]
        self._splay(x)
        return last

    def _find_root(self, x: int) -> int:
        self._access(x)
        L = self._l
        self._push(x)
        while L[x]:
            x = L[x]
            self._push(x)
        self._splay(x)
        return x

    # -- public operations ---------------------------------------------------

    def root(self, x: int) -> int:
        self._check(x)
        return self._find_root(x)

    def connected(self, u: int, v: int) -> bool:
        self._check(u)
        self._check(v)
        return u == v or self._find_root(u) == self._find_root(v)

    def evert(self, x: int) -> None:
        self._check(x)
        self._access(x)
        self._rev[x] = not self._rev[x]
        self._push(x)

    def link(self, u: int, v: int) -> None:
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

    def cut(self, v: int) -> None:
        self._check(v)
        self._access(v)
        self._push(v)
        left = self._l[v]
        if not left:
            raise LinkCutError(f"node {v} is a root")
        # predecessor of v on the root path is its parent
        p = left
        self._push(p)
        while self._r[p]:
            p = self._r[p]
            self._push(p)
        self._par[left] = 0
        self._l[v] = 0
        self._deg[v] -= 1
        self._deg[p] -= 1

    def parent(self, v: int) -> int | None:
        self._check(v)
        self._access(v)
        self._push(v)
        p = self._l[v]
        if not p:
            return None
        self._push(p)
        while self._r[p]:
            p = self._r[p]
            self._push(p)
        self._splay(p)
        return p

    def lca(self, u: int, v: int) -> int:
        self._check(u)
        self._check(v)
        if not self.connected(u, v):
            raise LinkCutError(f"nodes {u} and {v} are in different trees")
        self._access(u)
        return self._access(v)

    def degree(self, v: int) -> int:
        self._check(v)
        return self._deg[v]

    def path(self, u: int, v: int) -> list[int]:
        """Nodes on the tree path from ``u`` to ``v``; the root is left unchanged."""
        if not self.connected(u, v):
            raise LinkCutError(f"nodes {u} and {v} are in different trees")
        r = self._find_root(u)
        self.evert(u)
        self._access(v)
        out: list[int] = []
        stack: list[int] = []
        x = v
        L, R = self._l, self._r
        while stack or x:
            if x:
                self._push(x)
                stack.append(x)
                x = L[x]
            else:
                x = stack.pop()
                out.append(x)
                x = R[x]
        self.evert(r)
        return out
