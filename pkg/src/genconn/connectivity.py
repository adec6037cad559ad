"""Classical connectivity machinery via unit-vertex-capacity maximum flow.

Everything is built on one flow routine over the standard vertex-split
network: vertex v becomes v_in -> v_out with capacity 1 (overridable per
vertex), and each graph edge uv becomes the two arcs u_out -> v_in and
v_out -> u_in with capacity 1.  Augmenting paths are found by BFS in
ascending-id arc order, so path systems, fans, and connectivity values are
deterministic for a given input graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .graphs import Graph, is_complete, is_connected

_BIG = 1 << 30


@dataclass
class Fan:
    """Paths from `apex` to distinct vertices of `targets`, pairwise sharing
    only the apex.  `complete` is False when the requested size was not
    achievable; callers decide whether that is fatal."""

    apex: int
    targets: tuple
    paths: list
    requested: int
    complete: bool = True

    @property
    def achieved(self) -> int:
        return len(self.paths)


class _SplitFlowNet:
    # arcs stored as parallel lists; arcs[i] and arcs[i^1] are a residual pair
    def __init__(self, G: Graph, caps=None):
        n2 = 2 * G.n
        self.head = [[] for _ in range(n2)]
        self.to = []
        self.cap = []
        caps = caps or {}
        for v in range(G.n):
            self._arc(2 * v, 2 * v + 1, caps.get(v, 1))
        for v in range(G.n):
            for w in G.neighbors(v):
                self._arc(2 * v + 1, 2 * w, 1)

    def _arc(self, a, b, c):
        self.head[a].append(len(self.to))
        self.to.append(b)
        self.cap.append(c)
        self.head[b].append(len(self.to))
        self.to.append(a)
        self.cap.append(0)

    def augment(self, s, t):
        """One BFS augmenting path from s_out to t_in; returns False if none."""
        src, dst = 2 * s + 1, 2 * t
        prev = {src: None}
        queue = deque([src])
        while queue:
            a = queue.popleft()
            if a == dst:
                break
            for i in self.head[a]:
                b = self.to[i]
                if self.cap[i] > 0 and b not in prev:
                    prev[b] = i
                    queue.append(b)
        if dst not in prev:
            return False
        b = dst
        while prev[b] is not None:
            i = prev[b]
            self.cap[i] -= 1
            self.cap[i ^ 1] += 1
            b = self.to[i ^ 1]
        return True

    def decompose(self, s, t, value):
        """Split the current flow into `value` vertex-id paths s..t."""
        # net forward flow on an even arc equals the residual on its partner
        flow = {}
        for i in range(0, len(self.to), 2):
            if self.cap[i ^ 1] > 0:
                flow[i] = self.cap[i ^ 1]
        paths = []
        for _ in range(value):
            node = 2 * s + 1
            path = [s]
            while node != 2 * t:
                picked = None
                for i in self.head[node]:
                    if i % 2 == 0 and flow.get(i, 0) > 0:
                        picked = i
                        break
                if picked is None:
                    raise AssertionError("flow decomposition failed")
                flow[picked] -= 1
                node = self.to[picked]
                if node % 2 == 0 and node != 2 * t:
                    # entering v_in; traverse the split arc next
                    v = node // 2
                    for i in self.head[node]:
                        if i % 2 == 0 and flow.get(i, 0) > 0 and self.to[i] == 2 * v + 1:
                            flow[i] -= 1
                            node = 2 * v + 1
                            break
                    else:
                        raise AssertionError("flow decomposition failed at vertex %d" % v)
                    path.append(v)
            path.append(t)
            paths.append(path)
        return paths


def _flow_paths(G: Graph, s: int, t: int, caps=None, limit=None):
    """Maximum set of s-t paths, vertex-capacitated; returns (value, paths)."""
    caps = dict(caps or {})
    caps.setdefault(s, _BIG)
    caps.setdefault(t, _BIG)
    net = _SplitFlowNet(G, caps)
    value = 0
    while (limit is None or value < limit) and net.augment(s, t):
        value += 1
    return value, net.decompose(s, t, value)


def capped_flow_value(G: Graph, s: int, t: int, caps=None, limit=None) -> int:
    """Max s-t flow value with per-vertex capacities (default 1 internal)."""
    caps = dict(caps or {})
    caps.setdefault(s, _BIG)
    caps.setdefault(t, _BIG)
    net = _SplitFlowNet(G, caps)
    value = 0
    while (limit is None or value < limit) and net.augment(s, t):
        value += 1
    return value


def disjoint_paths(G: Graph, x: int, y: int, want=None) -> list:
    """Maximum-cardinality (capped at `want`) internally disjoint x-y paths.

    A direct edge counts as one path.  Returns [] for a disconnected pair.
    Paths are sorted by (length, sequence) so the direct edge, if any, comes
    first.
    """
    if x == y:
        raise ValueError("endpoints must differ")
    _, paths = _flow_paths(G, x, y, limit=want)
    return sorted(paths, key=lambda p: (len(p), p))


def local_connectivity(G: Graph, x: int, y: int) -> int:
    return len(disjoint_paths(G, x, y))


def vertex_connectivity(G: Graph) -> int:
    """kappa(G): n-1 for complete graphs, 0 if disconnected, else the minimum
    over the standard candidate pairs of vertex-disjoint-path counts."""
    if G.n == 0:
        raise ValueError("empty graph")
    if G.n == 1:
        return 0
    if not is_connected(G):
        return 0
    if is_complete(G):
        return G.n - 1
    # fix a minimum-degree root; a minimum cut either avoids it (then it
    # separates it from some non-neighbor) or contains it (then it separates
    # two of its neighbors, which are non-adjacent across the cut)
    x0 = min(range(G.n), key=lambda u: (G.degree(u), u))
    best = G.degree(x0)
    nbrs = set(G.neighbors(x0))
    for v in range(G.n):
        if v != x0 and v not in nbrs:
            val = capped_flow_value(G, x0, v, limit=best)
            if val < best:
                best = val
    ns = sorted(nbrs)
    for i in range(len(ns)):
        for j in range(i + 1, len(ns)):
            u, w = ns[i], ns[j]
            if not G.has_edge(u, w):
                val = capped_flow_value(G, u, w, limit=best)
                if val < best:
                    best = val
    return best


def expand(G: Graph, U) -> tuple:
    """Add one new vertex adjacent to exactly U; returns (graph, new id)."""
    U = sorted(set(U))
    if not U:
        raise ValueError("expansion set must be nonempty")
    for u in U:
        if not 0 <= u < G.n:
            raise ValueError("expansion vertex %s out of range" % u)
    y = G.n
    return Graph(G.n + 1, list(G.edges()) + [(u, y) for u in U]), y


def fan(G: Graph, x: int, U, k: int) -> Fan:
    """An (x, U)-fan of size k when achievable, else the maximum fan, flagged.

    Realized as a flow to a virtual sink behind U; each returned path is
    truncated at its first vertex of U, and any two paths share only x.
    """
    U = sorted(set(U))
    if len(U) < k:
        raise ValueError("target set smaller than requested fan size")
    if x in U:
        raise ValueError("apex may not lie in the target set")
    GU, sink = expand(G, U)
    _, raw = _flow_paths(GU, x, sink, limit=k)
    paths = []
    for p in raw:
        cut = next(i for i, v in enumerate(p) if v in U or v == sink)
        paths.append(p[: cut + 1])
    paths.sort(key=lambda p: p[-1])
    return Fan(apex=x, targets=tuple(U), paths=paths, requested=k, complete=len(paths) == k)
