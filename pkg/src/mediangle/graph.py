"""Finite simple graphs and their metric primitives.

Vertices are the integers ``0..n-1``.  A :class:`Graph` is immutable once
built; every derived quantity (distance rows, interval bitmasks, convex cycle
lists) is cached on the instance.

Vertex sets are returned as sorted tuples.  Internally many routines use
Python ints as bitmasks over the vertex set, which keeps interval and
convexity tests cheap at desk scale.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, NotGatedError, UnreachableError

DISTANCE_CACHE_CAP = 20_000

VertexSet = tuple  # sorted tuple of vertex ids
Cycle = tuple  # cyclic vertex sequence, canonically rotated


@dataclass(frozen=True)
class BallInfo:
    """Marks a graph as the radius-``radius`` ball around ``center`` of a larger graph."""

    center: int
    radius: int


class Graph:
    def __init__(self, n: int, edges: Iterable[Sequence[int]] = (), ball: BallInfo | None = None,
                 distance_cache_cap: int = DISTANCE_CACHE_CAP):
        if n < 0:
            raise InputError("vertex count must be nonnegative")
        nbrs = [set() for _ in range(n)]
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge {u}-{v} out of range for {n} vertices")
            if u == v:
                raise InputError(f"self-loop at {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.n = n
        self.adj = tuple(frozenset(s) for s in nbrs)
        self.edges = tuple(sorted((u, v) for u in range(n) for v in nbrs[u] if u < v))
        self.edge_index = {e: i for i, e in enumerate(self.edges)}
        if ball is not None and not (0 <= ball.center < max(n, 1)):
            raise InputError("ball center out of range")
        self.ball = ball
        self.distance_cache_cap = distance_cache_cap
        self._memo = {}
        self._rows = {}
        self._interval_rows = {}

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"

    def __len__(self):
        return self.n

    def memo(self, key, compute):
        """Per-instance cache for derived data keyed by ``key``."""
        try:
            return self._memo[key]
        except KeyError:
            value = self._memo[key] = compute()
            return value

    # -- adjacency -----------------------------------------------------

    def neighbors(self, v: int) -> frozenset:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def edge_id(self, u: int, v: int) -> int:
        return self.edge_index[(u, v) if u < v else (v, u)]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    # -- metric --------------------------------------------------------

    def _bfs(self, source: int) -> np.ndarray:
        row = np.full(self.n, -1, dtype=np.int64)
        row[source] = 0
        queue = deque([source])
        adj = self.adj
        while queue:
            u = queue.popleft()
            du = row[u] + 1
            for w in adj[u]:
                if row[w] < 0:
                    row[w] = du
                    queue.append(w)
        row.setflags(write=False)
        return row

    @cached_property
    def distances(self) -> np.ndarray:
        """All-pairs distance matrix (-1 marks unreachable pairs)."""
        if self.n > self.distance_cache_cap:
            raise MemoryError(f"{self.n} vertices exceeds the distance cache cap")
        d = np.stack([self.dist_row(x) for x in range(self.n)]) if self.n else np.zeros((0, 0), np.int64)
        d.setflags(write=False)
        return d

    def dist_row(self, x: int) -> np.ndarray:
        if "distances" in self.__dict__:
            return self.__dict__["distances"][x]
        row = self._rows.get(x)
        if row is None:
            row = self._bfs(x)
            if self.n <= self.distance_cache_cap:
                self._rows[x] = row
        return row

    def distance(self, x: int, y: int) -> int:
        d = int(self.dist_row(x)[y])
        if d < 0:
            raise UnreachableError(x, y)
        return d

    @cached_property
    def is_connected(self) -> bool:
        return self.n == 0 or bool((self.dist_row(0) >= 0).all())

    @cached_property
    def diameter(self) -> int:
        if self.n == 0:
            return 0
        return int(max(int(self.dist_row(x).max()) for x in range(self.n)))

    @cached_property
    def is_bipartite(self) -> bool:
        colour = [-1] * self.n
        for s in range(self.n):
            if colour[s] >= 0:
                continue
            colour[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self.adj[u]:
                    if colour[w] < 0:
                        colour[w] = 1 - colour[u]
                        queue.append(w)
                    elif colour[w] == colour[u]:
                        return False
        return True

    def interval_mask(self, x: int, y: int) -> int:
        """Bitmask of ``I(x, y)``; bit ``z`` is set iff ``d(x,y) = d(x,z) + d(z,y)``."""
        masks = self._interval_rows.get(x)
        if masks is None:
            rx = self.dist_row(x)
            if self.n <= self.distance_cache_cap:
                d = self.distances
                inside = (rx[None, :] + d) == rx[:, None]
                inside &= (rx[None, :] >= 0) & (d >= 0) & (rx[:, None] >= 0)
                masks = [bits_from_bool(inside[y_]) for y_ in range(self.n)]
                self._interval_rows[x] = masks
            else:
                ry = self.dist_row(y)
                return bits_from_bool((rx + ry == rx[y]) & (rx >= 0) & (ry >= 0))
        return masks[y]

    # -- subgraphs -----------------------------------------------------

    def induced_components(self, vertices: Iterable[int], removed_edges=frozenset()) -> list[VertexSet]:
        """Connected components of the subgraph induced on ``vertices`` minus ``removed_edges``."""
        vs = set(vertices)
        seen = set()
        comps = []
        for s in sorted(vs):
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self.adj[u]:
                    if w in vs and w not in seen and (min(u, w), max(u, w)) not in removed_edges:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
            comps.append(tuple(sorted(comp)))
        return comps

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["Graph", tuple]:
        """Return the induced subgraph (renumbered) and the list of original ids."""
        keep = tuple(sorted(set(vertices)))
        pos = {v: i for i, v in enumerate(keep)}
        edges = [(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos]
        return Graph(len(keep), edges), keep


def bits_from_bool(arr: np.ndarray) -> int:
    return int.from_bytes(np.packbits(arr.astype(bool), bitorder="little").tobytes(), "little")


def bits(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members(mask: int) -> VertexSet:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def as_vertex_set(vertices: Iterable[int]) -> VertexSet:
    return tuple(sorted(set(int(v) for v in vertices)))


# ---------------------------------------------------------------------------
# graph_core operations
# ---------------------------------------------------------------------------


def distance(g: Graph, x: int, y: int) -> int:
    return g.distance(x, y)


def interval(g: Graph, x: int, y: int) -> VertexSet:
    """Vertices lying on some geodesic between ``x`` and ``y``."""
    g.distance(x, y)
    return members(g.interval_mask(x, y))


def cliques(g: Graph) -> list[VertexSet]:
    """All maximal complete subgraphs, sorted (Bron-Kerbosch with pivoting)."""

    def compute():
        out = []

        def expand(r, p, x):
            if not p and not x:
                out.append(tuple(sorted(r)))
                return
            pivot = max(p | x, key=lambda u: len(g.adj[u] & p))
            for v in sorted(p - g.adj[pivot]):
                expand(r | {v}, p & g.adj[v], x & g.adj[v])
                p = p - {v}
                x = x | {v}

        expand(frozenset(), frozenset(range(g.n)), frozenset())
        return sorted(out)

    return list(g.memo("cliques", compute))


def triangles(g: Graph) -> list[tuple]:
    def compute():
        out = []
        for u, v in g.edges:
            for w in g.adj[u] & g.adj[v]:
                if w > v:
                    out.append((u, v, w))
        return sorted(out)

    return g.memo("triangles", compute)


def is_convex(g: Graph, s: Iterable[int]) -> bool:
    """True iff every geodesic between two vertices of ``s`` stays inside ``s``."""
    return convexity_witness(g, s) is None


def convexity_witness(g: Graph, s: Iterable[int]):
    """Return ``(x, y, z)`` with ``x, y`` in ``s`` and ``z`` in ``I(x,y) - s``, or None."""
    vs = as_vertex_set(s)
    outside = ~bits(vs)
    for i, x in enumerate(vs):
        row = g.dist_row(x)
        for y in vs[i + 1:]:
            if row[y] < 0:
                continue
            bad = g.interval_mask(x, y) & outside
            if bad:
                return x, y, (bad & -bad).bit_length() - 1
    return None


def gate(g: Graph, s: Iterable[int], x: int) -> int:
    """The unique ``y`` in ``s`` lying on a geodesic from ``x`` to every vertex of ``s``."""
    vs = np.fromiter(as_vertex_set(s), dtype=np.int64)
    if len(vs) == 0:
        raise InputError("gate onto an empty set")
    row = g.dist_row(x)
    dxs = row[vs]
    if (dxs < 0).any():
        raise NotGatedError(x)
    y = int(vs[int(np.argmin(dxs))])
    if not (row[y] + g.dist_row(y)[vs] == dxs).all():
        closest = vs[dxs == dxs.min()]
        raise NotGatedError(x, closest.tolist())
    return y


def gate_map(g: Graph, s: Iterable[int]) -> dict:
    """Gates of every vertex onto ``s``; vertices with no gate map to None."""
    vs = np.fromiter(as_vertex_set(s), dtype=np.int64)
    if len(vs) == 0:
        raise InputError("gate onto an empty set")
    d = g.distances
    sub = d[:, vs]
    ys = vs[np.argmin(np.where(sub < 0, np.iinfo(np.int64).max, sub), axis=1)]
    ok = (d[np.arange(g.n), ys][:, None] + d[ys][:, vs] == sub).all(axis=1) & (sub >= 0).all(axis=1)
    return {x: (int(ys[x]) if ok[x] else None) for x in range(g.n)}


def is_gated(g: Graph, s: Iterable[int]) -> bool:
    vs = as_vertex_set(s)
    if not vs:
        return False
    return all(y is not None for y in gate_map(g, vs).values())


def is_connected_set(g: Graph, s: Iterable[int]) -> bool:
    vs = as_vertex_set(s)
    return len(g.induced_components(vs)) <= 1


def canonical_cycle(seq: Sequence[int]) -> Cycle:
    """Rotate/reflect a cyclic sequence so it starts at its least vertex, then its lesser neighbour."""
    seq = list(seq)
    i = seq.index(min(seq))
    seq = seq[i:] + seq[:i]
    if len(seq) > 2 and seq[-1] < seq[1]:
        seq = [seq[0]] + seq[:0:-1]
    return tuple(seq)


def cycle_edges(c: Cycle) -> list[tuple]:
    return [(min(a, b), max(a, b)) for a, b in zip(c, c[1:] + c[:1])]


def isometric_cycles(g: Graph, length: int, unique_short_geodesics: bool = False) -> list[Cycle]:
    """All isometrically embedded cycles of the given length, canonically ordered.

    Depth-first search from each start vertex ``s`` (the cycle's least vertex);
    a partial path is abandoned as soon as one of its vertices is closer in
    ``g`` to an earlier vertex than it would be along the cycle.  With
    ``unique_short_geodesics`` it is also abandoned when two of its vertices
    less than half the length apart are joined by more than one geodesic,
    which no convex cycle allows.
    """
    L = length
    out = []
    adj = g.adj
    for s in range(g.n):
        path = [s]
        rows = [g.dist_row(s)]
        on_path = {s}

        def extend():
            k = len(path)
            if k == L:
                if path[1] < path[-1]:
                    out.append(tuple(path))
                return
            for v in sorted(adj[path[-1]]):
                if v <= s or v in on_path:
                    continue
                if all(rows[i][v] == min(k - i, L - k + i) for i in range(k - 1)):
                    if unique_short_geodesics and any(
                            g.interval_mask(path[i], v).bit_count() != k - i + 1
                            for i in range(max(0, k - (L - 1) // 2), k - 1)):
                        continue
                    path.append(v)
                    rows.append(g.dist_row(v))
                    on_path.add(v)
                    extend()
                    on_path.discard(v)
                    rows.pop()
                    path.pop()

        extend()
    return sorted(out)


def default_max_len(g: Graph) -> int:
    return max(4, 2 * g.diameter)


def resolve_max_len(g: Graph, max_len: int | None) -> int:
    """Default to twice the diameter and round down to an even number."""
    if max_len is None:
        max_len = default_max_len(g)
    return max_len - max_len % 2


def convex_even_cycles(g: Graph, max_len: int | None = None) -> list[Cycle]:
    """Every convex cycle of even length in ``[4, max_len]``, once up to rotation and reflection.

    ``max_len`` defaults to twice the diameter.
    """
    max_len = resolve_max_len(g, max_len)

    def compute():
        found = []
        for L in range(4, max_len + 1, 2):
            found.extend(c for c in isometric_cycles(g, L, unique_short_geodesics=True) if is_convex(g, c))
        return tuple(found)

    return list(g.memo(("convex_even_cycles", max_len), compute))


K4MINUS = "K4minus"
K32 = "K32"


def find_induced(g: Graph, pattern: str):
    """A vertex set inducing ``K4minus`` or ``K32``, or None.

    Witnesses are returned as tuples: ``(u, v, a, b)`` for K4minus with ``u-v``
    the shared edge and ``a, b`` the non-adjacent pair; ``(p, q, a, b, c)``
    for K32 with ``{p, q}`` the small side.
    """
    if pattern == K4MINUS:
        for u, v in g.edges:
            common = sorted(g.adj[u] & g.adj[v])
            for a, b in combinations(common, 2):
                if b not in g.adj[a]:
                    return (u, v, a, b)
        return None
    if pattern == K32:
        for p in range(g.n):
            for q in range(p + 1, g.n):
                if q in g.adj[p]:
                    continue
                common = sorted(g.adj[p] & g.adj[q])
                if len(common) < 3:
                    continue
                for a, b, c in combinations(common, 3):
                    if b not in g.adj[a] and c not in g.adj[a] and c not in g.adj[b]:
                        return (p, q, a, b, c)
        return None
    raise InputError(f"unknown pattern {pattern!r}")


def is_locally_convex(g: Graph, s: Iterable[int], max_len: int | None = None) -> bool:
    """Every convex even cycle with a subpath of at least half its length in ``s`` lies in ``s``."""
    sm = bits(as_vertex_set(s))
    for c in convex_even_cycles(g, max_len):
        if bits(c) & ~sm == 0:
            continue
        L = len(c)
        # longest run of consecutive cycle vertices inside s, measured in edges
        inside = [(sm >> v) & 1 for v in c]
        if all(inside):
            continue
        best = run = 0
        for flag in inside + inside:
            run = run + 1 if flag else 0
            best = max(best, run)
        if best - 1 >= L // 2:
            return False
    return True


def is_locally_gated(g: Graph, s: Iterable[int], max_len: int | None = None) -> bool:
    """Triangles with an edge in ``s`` and convex even cycles with two consecutive edges in ``s`` lie in ``s``."""
    sm = bits(as_vertex_set(s))
    for t in triangles(g):
        inside = sum((sm >> v) & 1 for v in t)
        if inside == 2:
            return False
    for c in convex_even_cycles(g, max_len):
        L = len(c)
        inside = [(sm >> v) & 1 for v in c]
        if all(inside):
            continue
        if any(inside[i] and inside[(i + 1) % L] and inside[(i + 2) % L] for i in range(L)):
            return False
    return True
