"""Compare the compiled and pure-Python link-cut forests on one random workload."""

import argparse
import random
import time

from udkernel.lcforest import CyLinkCutForest, PyLinkCutForest


def workload(n: int, ops: int, seed: int):
    """Random link/cut/evert/connected/lca sequence, valid by construction."""
    rng = random.Random(seed)
    parent = [None] * n
    script = []

    def root(x):
        while parent[x] is not None:
            x = parent[x]
        return x

    for _ in range(ops):
        r = rng.random()
        u = rng.randrange(n)
        if r < 0.35:
            v = rng.randrange(n)
            rv = root(v)
            if root(u) != rv:
                script.append(("evert", v))
                # mirror evert in the naive forest
                path = [v]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                for a, b in zip(path, path[1:]):
                    parent[b] = a
                parent[v] = u
                script.append(("link", u, v))
        elif r < 0.55:
            if parent[u] is not None:
                parent[u] = None
                script.append(("cut", u))
        elif r < 0.8:
            script.append(("connected", u, rng.randrange(n)))
        else:
            v = rng.randrange(n)
            if root(u) == root(v):
                script.append(("lca", u, v))
    return script


def replay(cls, n: int, script) -> float:
    f = cls()
    nodes = [f.make_node() for _ in range(n)]
    t0 = time.perf_counter()
    for op, *args in script:
        getattr(f, op)(*(nodes[a] for a in args))
    return time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--ops", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    script = workload(args.n, args.ops, args.seed)
    py = replay(PyLinkCutForest, args.n, script)
    print(f"python  {len(script)} ops  {py:.3f}s  {1e9 * py / len(script):.0f} ns/op")
    if CyLinkCutForest is None:
        print("cython  backend not built")
        return
    cy = replay(CyLinkCutForest, args.n, script)
    print(f"cython  {len(script)} ops  {cy:.3f}s  {1e9 * cy / len(script):.0f} ns/op")
    print(f"speedup {py / cy:.1f}x")


if __name__ == "__main__":
    main()
