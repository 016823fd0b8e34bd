"""Hyperplanes, sectors, carriers, transversality and exact angles.

A hyperplane is a class of edges under the closure of two relations: lying
in a common triangle, and being opposite in a convex even cycle.  Classes
are computed once per ``(graph, max_len)`` and cached on the graph.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np
from scipy.cluster.hierarchy import DisjointSet
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import AngleMismatchError, InputError, NotTransverseError
from .graph import (
    Graph, as_vertex_set, cliques, convex_even_cycles, convexity_witness, cycle_edges, gate_map,
    resolve_max_len, triangles,
)


@dataclass(frozen=True)
class Hyperplane:
    id: int
    edges: tuple

    def __len__(self):
        return len(self.edges)


@dataclass(frozen=True)
class SectorDecomposition:
    hyperplane: int
    sectors: tuple

    def sector_of(self, v: int) -> int:
        for i, s in enumerate(self.sectors):
            if v in s:
                return i
        raise InputError(f"vertex {v} not in any sector")


@dataclass(frozen=True)
class Carrier:
    hyperplane: int
    vertices: tuple
    fibres: tuple
    degenerate: bool


@dataclass(frozen=True, order=True)
class Angle:
    """An exact angle ``fraction * pi``."""

    fraction: Fraction

    @property
    def numerator(self) -> int:
        return self.fraction.numerator

    @property
    def denominator(self) -> int:
        return self.fraction.denominator

    def lam(self) -> int:
        """``pi / angle``; raises when it is not an integer."""
        q = 1 / self.fraction
        if q.denominator != 1:
            raise InputError(f"pi / ({self}) = {q} is not an integer")
        return int(q)

    def __str__(self):
        if self.numerator == 1:
            return f"pi/{self.denominator}"
        return f"{self.numerator}pi/{self.denominator}"

    def to_json(self):
        return {"numerator": self.numerator, "denominator": self.denominator, "text": str(self)}


class HyperplaneSystem:
    """All hyperplanes of a graph together with their sector labels."""

    def __init__(self, g: Graph, max_len: int | None = None):
        self.graph = g
        self.max_len = max_len = resolve_max_len(g, max_len)
        m = len(g.edges)
        ds = DisjointSet(range(m))
        for t in triangles(g):
            a, b, c = (g.edge_id(*e) for e in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2])))
            ds.merge(a, b)
            ds.merge(a, c)
        self.cycles = convex_even_cycles(g, max_len)
        cycle_ids = []
        for c in self.cycles:
            ids = [g.edge_id(*e) for e in cycle_edges(c)]
            half = len(c) // 2
            for i in range(half):
                ds.merge(ids[i], ids[i + half])
            cycle_ids.append(ids)
        # classes ordered by their least edge id
        groups = sorted((sorted(s) for s in ds.subsets()), key=lambda s: s[0])
        self.edge_class = np.empty(m, dtype=np.int64)
        for k, s in enumerate(groups):
            self.edge_class[s] = k
        self.hyperplanes = [Hyperplane(k, tuple(g.edges[i] for i in s)) for k, s in enumerate(groups)]
        # per cycle, the class of each edge in cycle order (edge i joins c[i], c[i+1])
        self.cycle_classes = [[int(self.edge_class[i]) for i in ids] for ids in cycle_ids]
        self.cycles_by_class = [[] for _ in groups]
        for ci, cls in enumerate(self.cycle_classes):
            for k in sorted(set(cls)):
                self.cycles_by_class[k].append(ci)
        self._labels = None

    def __len__(self):
        return len(self.hyperplanes)

    def class_of(self, u: int, v: int) -> int:
        return int(self.edge_class[self.graph.edge_id(u, v)])

    def _resolve(self, j) -> int:
        k = j.id if isinstance(j, Hyperplane) else int(j)
        if not 0 <= k < len(self.hyperplanes):
            raise InputError(f"no hyperplane with id {k}")
        return k

    @property
    def labels(self) -> np.ndarray:
        """``labels[k, v]`` is the index of the sector of hyperplane ``k`` containing ``v``."""
        if self._labels is None:
            g = self.graph
            n = g.n
            edges = np.array(g.edges, dtype=np.int64).reshape(-1, 2)
            out = np.empty((len(self.hyperplanes), n), dtype=np.int64)
            for k in range(len(self.hyperplanes)):
                keep = edges[self.edge_class != k]
                adj = coo_matrix((np.ones(len(keep)), (keep[:, 0], keep[:, 1])), shape=(n, n))
                _, raw = connected_components(adj, directed=False)
                # renumber so sectors are ordered by their least vertex
                first = {}
                for v, r in enumerate(raw.tolist()):
                    first.setdefault(r, len(first))
                out[k] = [first[r] for r in raw.tolist()]
            out.setflags(write=False)
            self._labels = out
        return self._labels

    def sectors(self, j) -> SectorDecomposition:
        k = self._resolve(j)
        row = self.labels[k]
        count = int(row.max()) + 1 if len(row) else 0
        secs = tuple(tuple(int(v) for v in np.flatnonzero(row == s)) for s in range(count))
        return SectorDecomposition(k, secs)

    def separating(self, x: int, y: int) -> list:
        lab = self.labels
        return [self.hyperplanes[k] for k in np.flatnonzero(lab[:, x] != lab[:, y])]

    def separation_matrix(self) -> np.ndarray:
        """Number of hyperplanes separating each pair of vertices."""
        lab = self.labels
        n = self.graph.n
        out = np.zeros((n, n), dtype=np.int64)
        for row in lab:
            out += row[:, None] != row[None, :]
        return out

    def separating_sets(self, a, b) -> list:
        """Hyperplanes with ``a`` inside one sector and ``b`` inside a different one."""
        a, b = as_vertex_set(a), as_vertex_set(b)
        lab = self.labels
        out = []
        for k, row in enumerate(lab):
            sa, sb = set(row[list(a)].tolist()), set(row[list(b)].tolist())
            if len(sa) == 1 and len(sb) == 1 and sa != sb:
                out.append(k)
        return out

    def crossing(self, s) -> list:
        """Hyperplanes meeting at least two of their sectors inside ``s``."""
        s = list(as_vertex_set(s))
        return [k for k, row in enumerate(self.labels) if len(set(row[s].tolist())) > 1]

    def cliques_of(self, j) -> list:
        k = self._resolve(j)
        return [c for c in cliques(self.graph) if len(c) >= 2 and self.class_of(c[0], c[1]) == k]

    def carrier(self, j) -> Carrier:
        k = self._resolve(j)
        g = self.graph
        verts = set()
        for u, v in self.hyperplanes[k].edges:
            verts.update((u, v))
        for t in triangles(g):
            if self.class_of(t[0], t[1]) == k:
                verts.update(t)
        for ci in self.cycles_by_class[k]:
            verts.update(self.cycles[ci])
        removed = frozenset(self.hyperplanes[k].edges)
        fibres = tuple(g.induced_components(verts, removed))
        return Carrier(k, tuple(sorted(verts)), fibres, not self.cycles_by_class[k])

    def transverse(self, j1, j2) -> bool:
        k1, k2 = self._resolve(j1), self._resolve(j2)
        if k1 == k2:
            raise InputError("transversality of a hyperplane with itself (identical)")
        return bool(set(self.cycles_by_class[k1]) & set(self.cycles_by_class[k2]))

    def cycle_angle(self, ci: int, k1: int, k2: int) -> Angle:
        """Angle between two hyperplanes at one convex cycle crossed by both."""
        cls = self.cycle_classes[ci]
        L = len(cls)
        p1 = [i for i, k in enumerate(cls) if k == k1]
        p2 = [i for i, k in enumerate(cls) if k == k2]
        if not p1 or not p2:
            raise NotTransverseError(f"cycle {ci} is not crossed by both hyperplanes")
        # edges i and j at cyclic gap delta have closest endpoints delta - 1 apart along the cycle
        delta = min(min((i - j) % L, (j - i) % L) for i in p1 for j in p2)
        return Angle(Fraction(2 * delta, L))

    def angle(self, j1, j2) -> Angle:
        k1, k2 = self._resolve(j1), self._resolve(j2)
        if k1 == k2 or not self.transverse(k1, k2):
            raise NotTransverseError(f"hyperplanes {k1} and {k2} are not transverse")
        shared = sorted(set(self.cycles_by_class[k1]) & set(self.cycles_by_class[k2]))
        values = {ci: self.cycle_angle(ci, k1, k2) for ci in shared}
        first = values[shared[0]]
        for ci in shared[1:]:
            if values[ci] != first:
                raise AngleMismatchError(
                    f"hyperplanes {k1}, {k2}: {first} at {self.cycles[shared[0]]} but {values[ci]} at {self.cycles[ci]}")
        return first

    def angle_table(self) -> dict:
        """Angles of every transverse pair ``(k1, k2)`` with ``k1 < k2``."""
        out = {}
        for k1, k2 in combinations(range(len(self.hyperplanes)), 2):
            if self.transverse(k1, k2):
                out[(k1, k2)] = self.angle(k1, k2)
        return out

    def edge_colouring(self) -> dict:
        return {e: int(self.edge_class[i]) for i, e in enumerate(self.graph.edges)}


def system(g: Graph, max_len: int | None = None) -> HyperplaneSystem:
    max_len = resolve_max_len(g, max_len)
    return g.memo(("hyperplanes", max_len), lambda: HyperplaneSystem(g, max_len))


def hyperplanes(g: Graph, max_len: int | None = None) -> list:
    return list(system(g, max_len).hyperplanes)


def sectors(g: Graph, j, max_len: int | None = None) -> SectorDecomposition:
    return system(g, max_len).sectors(j)


def separating_hyperplanes(g: Graph, x: int, y: int, max_len: int | None = None) -> list:
    return system(g, max_len).separating(x, y)


def carrier(g: Graph, j, max_len: int | None = None) -> Carrier:
    return system(g, max_len).carrier(j)


def transverse(g: Graph, j1, j2, max_len: int | None = None) -> bool:
    return system(g, max_len).transverse(j1, j2)


def angle(g: Graph, j1, j2, max_len: int | None = None) -> Angle:
    return system(g, max_len).angle(j1, j2)


@dataclass
class Report:
    """Per-item pass/fail with the first few violations of each item."""

    items: dict

    @property
    def holds(self) -> bool:
        return all(not v for v in self.items.values())

    def to_json(self) -> dict:
        return {"holds": self.holds,
                "items": {k: {"holds": not v, "violations": v} for k, v in sorted(self.items.items())}}


def _geodesic_trees(g: Graph, source: int, rng: random.Random | None):
    """Parents of a BFS tree from ``source``; with ``rng`` each parent is a random predecessor."""
    row = g.dist_row(source)
    order = np.argsort(row, kind="stable").tolist()
    parent = {}
    for v in order:
        if row[v] <= 0:
            continue
        preds = sorted(w for w in g.adj[v] if row[w] == row[v] - 1)
        parent[v] = rng.choice(preds) if rng else preds[0]
    return order, parent


def verify_bighyp(g: Graph, max_len: int | None = None, random_trees: int = 2, seed: int = 0,
                  limit: int = 10) -> Report:
    """Check the structure theorem for hyperplanes exhaustively.

    ``i``: each hyperplane separates the vertices of each of its cliques and
    every sector meets every such clique.  ``ii``: sectors are convex.
    ``iii``: distance equals the separation count for all pairs, and
    geodesics (one BFS tree per source plus ``random_trees`` random
    geodesic trees) cross each hyperplane at most once.
    """
    hs = system(g, max_len)
    lab = hs.labels
    items = {"i": [], "ii": [], "iii": []}
    for k in range(len(hs)):
        row = lab[k]
        nsec = int(row.max()) + 1
        for c in hs.cliques_of(k):
            secs = [int(row[v]) for v in c]
            if len(set(secs)) != len(c) or len(set(secs)) != nsec:
                if len(items["i"]) < limit:
                    items["i"].append({"hyperplane": k, "clique": list(c), "sectors": secs, "sector_count": nsec})
        for s in hs.sectors(k).sectors:
            w = convexity_witness(g, s)
            if w is not None and len(items["ii"]) < limit:
                items["ii"].append({"hyperplane": k, "sector": list(s), "x": w[0], "y": w[1], "outside": w[2]})
    if g.n:
        d = g.distances
        sep = hs.separation_matrix()
        bad = np.argwhere(np.triu(d != sep, 1))
        for x, y in bad[:limit].tolist():
            items["iii"].append({"kind": "distance", "x": x, "y": y, "distance": int(d[x, y]),
                                 "separating": int(sep[x, y])})
    rng = random.Random(seed)
    edge_class = hs.edge_class
    crossings = []
    for x in range(g.n):
        for t in range(1 + random_trees):
            order, parent = _geodesic_trees(g, x, rng if t else None)
            mask = {x: 0}
            for v in order:
                p = parent.get(v)
                if p is None:
                    continue
                bit = 1 << int(edge_class[g.edge_id(p, v)])
                if mask[p] & bit and len(crossings) < limit:
                    crossings.append({"kind": "double-crossing", "x": x, "y": v,
                                      "hyperplane": bit.bit_length() - 1})
                mask[v] = mask[p] | bit
    items["iii"].extend(crossings[: max(0, limit - len(items["iii"]))])
    return Report(items)


def clique_embedding(g: Graph, max_len: int | None = None):
    """Map each vertex to its gates on one chosen clique per hyperplane.

    Returns ``(chosen_cliques, coords)`` with ``coords[v, k]`` the gate of
    ``v`` on the clique chosen for hyperplane ``k``.
    """
    hs = system(g, max_len)
    chosen = []
    coords = np.empty((g.n, len(hs)), dtype=np.int64)
    for k in range(len(hs)):
        cs = hs.cliques_of(k)
        if not cs:
            raise InputError(f"hyperplane {k} contains no clique")
        c = cs[0]
        gm = gate_map(g, c)
        if any(v is None for v in gm.values()):
            raise InputError(f"clique {c} is not gated")
        chosen.append(c)
        coords[:, k] = [gm[v] for v in range(g.n)]
    return chosen, coords


def verify_isometric_embedding(g: Graph, max_len: int | None = None, limit: int = 10) -> Report:
    """Hamming distance between gate vectors must equal graph distance for every pair."""
    _, coords = clique_embedding(g, max_len)
    ham = np.zeros((g.n, g.n), dtype=np.int64)
    for k in range(coords.shape[1]):
        col = coords[:, k]
        ham += col[:, None] != col[None, :]
    bad = np.argwhere(np.triu(ham != g.distances, 1))[:limit].tolist()
    return Report({"isometric": [{"x": x, "y": y, "distance": int(g.distances[x, y]), "hamming": int(ham[x, y])}
                                 for x, y in bad]})
