"""Deterministic generators for the example families used as a test corpus.

Vertex numbering is lexicographic in each family's natural coordinates, so
serialized output is byte-stable across runs.  ``corpus()`` bundles a fixed
selection of family members together with the class labels the recognizers
are expected to assign.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations, product

from .errors import InputError
from .graph import BallInfo, Graph
from .recognition import BIPARTITE_MEDIANGLE, MEDIAN, MEDIANGLE, QUASI_MEDIAN

ALL = frozenset({MEDIAN, QUASI_MEDIAN, MEDIANGLE, BIPARTITE_MEDIANGLE})
QM = frozenset({QUASI_MEDIAN, MEDIANGLE})
BM = frozenset({MEDIANGLE, BIPARTITE_MEDIANGLE})
NONE = frozenset()


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: tuple = ()

    def __str__(self):
        if not self.params:
            return self.name
        return f"{self.name}:" + ",".join(str(p) for p in self.params)

    @classmethod
    def parse(cls, text: str) -> "FamilySpec":
        """Parse ``name`` or ``name:p1,p2``; nested specs for products use ``name:a/b``."""
        name, _, rest = text.partition(":")
        params = []
        for tok in (rest.split(",") if rest else []):
            tok = tok.strip()
            try:
                params.append(int(tok))
            except ValueError:
                params.append(tok)
        return cls(name.strip(), tuple(params))


def _check(cond, msg):
    if not cond:
        raise InputError(msg)


def hypercube(n: int) -> Graph:
    _check(0 <= n <= 12, "hypercube dimension must be in 0..12")
    # bit i of the vertex id is coordinate n-1-i, so ids are lexicographic in coordinates
    edges = [(v, v ^ (1 << i)) for v in range(1 << n) for i in range(n) if not v & (1 << i)]
    return Graph(1 << n, edges)


def complete(k: int) -> Graph:
    _check(k >= 1, "complete graph needs at least one vertex")
    return Graph(k, [(i, j) for i in range(k) for j in range(i + 1, k)])


def cartesian_product(g1: Graph, g2: Graph) -> Graph:
    """Vertex ``(a, b)`` gets id ``a * g2.n + b``."""
    n2 = g2.n
    edges = [(a * n2 + u, a * n2 + v) for a in range(g1.n) for u, v in g2.edges]
    edges += [(u * n2 + b, v * n2 + b) for u, v in g1.edges for b in range(n2)]
    return Graph(g1.n * n2, edges)


def hamming(*sizes: int) -> Graph:
    _check(len(sizes) >= 1 and all(k >= 1 for k in sizes), "hamming needs positive factor sizes")
    g = complete(sizes[0])
    for k in sizes[1:]:
        g = cartesian_product(g, complete(k))
    return g


def cycle(n: int) -> Graph:
    _check(n >= 3, "cycle length must be at least 3")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def even_cycle(length: int) -> Graph:
    _check(length >= 4 and length % 2 == 0, "even_cycle needs an even length >= 4")
    return cycle(length)


def coxeter_dihedral(m: int) -> Graph:
    """Cayley graph of the dihedral group of order ``2m``: the ``2m``-cycle."""
    _check(m >= 2, "dihedral parameter must be >= 2")
    return cycle(2 * m)


def path(n: int) -> Graph:
    _check(n >= 1, "path needs at least one vertex")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def tree(kind: str = "random", n: int = 10, seed: int = 0) -> Graph:
    """Trees: ``path``, ``star``, ``binary`` (heap order) or ``random`` (seeded Pruefer sequence)."""
    _check(n >= 1, "tree needs at least one vertex")
    if kind == "path":
        return path(n)
    if kind == "star":
        return Graph(n, [(0, i) for i in range(1, n)])
    if kind == "binary":
        return Graph(n, [((i - 1) // 2, i) for i in range(1, n)])
    if kind == "random":
        if n <= 2:
            return path(n)
        rng = random.Random(seed)
        seq = [rng.randrange(n) for _ in range(n - 2)]
        degree = [1] * n
        for v in seq:
            degree[v] += 1
        edges = []
        for v in seq:
            leaf = min(u for u in range(n) if degree[u] == 1)
            edges.append((leaf, v))
            degree[leaf] -= 1
            degree[v] -= 1
        u, w = [x for x in range(n) if degree[x] == 1]
        edges.append((u, w))
        return Graph(n, edges)
    raise InputError(f"unknown tree kind {kind!r}")


def square_grid(a: int, b: int) -> Graph:
    """``a x b`` grid of vertices; a finite piece of the square tiling (C(4)-T(4), median)."""
    return cartesian_product(path(a), path(b))


def cube_minus_vertex() -> Graph:
    """The 3-cube with vertex ``111`` deleted: bipartite, isometric in Q3, but not mediangle."""
    q = hypercube(3)
    g, _ = q.induced_subgraph(range(7))
    return g


def k4_minus() -> Graph:
    return Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)])


def k32() -> Graph:
    """Complete bipartite graph with parts ``{0, 1}`` and ``{2, 3, 4}``."""
    return Graph(5, [(p, q) for p in (0, 1) for q in (2, 3, 4)])


def bowtie() -> Graph:
    """Two triangles sharing the vertex 0."""
    return Graph(5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])


def hexagons_sharing_two_edges() -> Graph:
    """Two convex hexagons glued along the path ``1-0-2``; violates the even-cycle intersection axiom.

    Vertices: 0 is the middle of the shared path, 1 and 2 its ends; 3,4,5 and
    6,7,8 are the inner vertices of the two length-4 paths from 1 to 2.
    """
    return Graph(9, [(0, 1), (0, 2), (1, 3), (3, 4), (4, 5), (5, 2), (1, 6), (6, 7), (7, 8), (8, 2)])


def symmetric_group_cayley(n: int) -> Graph:
    """Cayley graph of ``S_n`` for the adjacent transpositions (Coxeter type ``A_{n-1}``).

    Built directly from permutations, independently of the word-rewriting code.
    Vertices are permutations of ``range(n)`` in lexicographic order.
    """
    _check(1 <= n <= 7, "symmetric group degree must be in 1..7")
    perms = list(permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    edges = set()
    for p in perms:
        for i in range(n - 1):
            q = list(p)
            q[i], q[i + 1] = q[i + 1], q[i]
            j = index[tuple(q)]
            edges.add((min(index[p], j), max(index[p], j)))
    return Graph(len(perms), sorted(edges))


def hexagonal_tiling_ball(r: int) -> Graph:
    """Ball of radius ``r`` in the hexagonal tiling (brick-wall model), flagged as a ball.

    Lattice points ``(i, j)``; horizontal edges ``(i,j)-(i+1,j)`` always,
    vertical edges ``(i,j)-(i,j+1)`` when ``i + j`` is even.
    """
    _check(r >= 0, "radius must be nonnegative")

    def nbrs(p):
        i, j = p
        out = [(i - 1, j), (i + 1, j)]
        out.append((i, j + 1) if (i + j) % 2 == 0 else (i, j - 1))
        return out

    dist = {(0, 0): 0}
    frontier = [(0, 0)]
    for step in range(1, r + 1):
        nxt = []
        for p in frontier:
            for q in nbrs(p):
                if q not in dist:
                    dist[q] = step
                    nxt.append(q)
        frontier = nxt
    pts = sorted(dist)
    index = {p: k for k, p in enumerate(pts)}
    edges = {(min(index[p], index[q]), max(index[p], index[q])) for p in pts for q in nbrs(p) if q in index}
    return Graph(len(pts), sorted(edges), ball=BallInfo(index[(0, 0)], r))


def presentation_ball(presentation, radius=None):
    from .periagroup import cayley_ball

    return cayley_ball(presentation, radius=radius).graph


_SIMPLE = {
    "hypercube": hypercube,
    "hamming": hamming,
    "even_cycle": even_cycle,
    "cycle": cycle,
    "complete": complete,
    "path": path,
    "coxeter_dihedral": coxeter_dihedral,
    "square_grid": square_grid,
    "cube_minus_vertex": cube_minus_vertex,
    "k4_minus": k4_minus,
    "k32": k32,
    "bowtie": bowtie,
    "hexagons_sharing_two_edges": hexagons_sharing_two_edges,
    "hexagonal_tiling_ball": hexagonal_tiling_ball,
}

FAMILIES = sorted(list(_SIMPLE) + ["tree", "cartesian_product", "coxeter_cayley", "graph_product_ball"])


def generate(spec: FamilySpec | str, presentation=None) -> Graph:
    """Build the graph named by ``spec``.

    ``coxeter_cayley`` takes ``A<n>`` (symmetric group via adjacent
    transpositions) or, with ``presentation`` given, the Cayley graph of any
    finite presentation.  ``graph_product_ball`` requires a presentation
    whose labels are all 2.  ``cartesian_product`` takes two family specs
    written with ``/`` in place of ``,`` (for example ``even_cycle:6`` and
    ``hamming:2``).
    """
    if isinstance(spec, str):
        spec = FamilySpec.parse(spec)
    name, params = spec.name, spec.params
    try:
        if name in _SIMPLE:
            return _SIMPLE[name](*params)
        if name == "tree":
            return tree(*params)
        if name == "cartesian_product":
            _check(len(params) == 2, "cartesian_product takes two family specs")
            a, b = (generate(str(p).replace("/", ",")) for p in params)
            return cartesian_product(a, b)
        if name == "coxeter_cayley":
            if presentation is not None:
                return presentation_ball(presentation)
            _check(len(params) == 1 and str(params[0]).upper().startswith("A"), "coxeter_cayley takes A<n>")
            return symmetric_group_cayley(int(str(params[0])[1:]) + 1)
        if name == "graph_product_ball":
            _check(presentation is not None, "graph_product_ball needs a presentation")
            _check(all(lam == 2 for lam in presentation.labels.values()), "graph products need every label equal to 2")
            return presentation_ball(presentation, radius=params[0] if params else None)
    except TypeError as exc:
        raise InputError(f"bad parameters for {name}: {exc}") from None
    raise InputError(f"unknown family {name!r}")


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    graph: Graph
    labels: frozenset
    max_len: int | None = None


def corpus(include_cayley: bool = True) -> list[CorpusEntry]:
    """Fixed corpus of family members annotated with their expected labels."""
    out = [CorpusEntry(f"hypercube:{n}", hypercube(n), ALL) for n in range(1, 5)]
    out += [CorpusEntry(f"tree:{kind},{n},{seed}", tree(kind, n, seed), ALL)
            for kind, n, seed in [("path", 7, 0), ("star", 9, 0), ("binary", 15, 0),
                                  ("random", 30, 1), ("random", 50, 2)]]
    out += [
        CorpusEntry("hamming:2,3", hamming(2, 3), QM),
        CorpusEntry("hamming:3,3", hamming(3, 3), QM),
        CorpusEntry("hamming:3,3,3", hamming(3, 3, 3), QM),
        CorpusEntry("complete:4", complete(4), QM),
        CorpusEntry("bowtie", bowtie(), QM),
        CorpusEntry("square_grid:4,5", square_grid(4, 5), ALL),
        CorpusEntry("even_cycle:4", even_cycle(4), ALL),
        CorpusEntry("even_cycle:6", even_cycle(6), BM),
        CorpusEntry("even_cycle:8", even_cycle(8), BM),
        CorpusEntry("even_cycle:10", even_cycle(10), BM),
        CorpusEntry("cartesian_product:even_cycle:6,hypercube:1",
                    cartesian_product(even_cycle(6), hypercube(1)), BM),
        CorpusEntry("cartesian_product:even_cycle:8,hypercube:1",
                    cartesian_product(even_cycle(8), hypercube(1)), BM),
        CorpusEntry("cartesian_product:even_cycle:6,even_cycle:6",
                    cartesian_product(even_cycle(6), even_cycle(6)), BM),
        CorpusEntry("cartesian_product:even_cycle:6,complete:3",
                    cartesian_product(even_cycle(6), complete(3)), frozenset({MEDIANGLE})),
        CorpusEntry("coxeter_cayley:A2", symmetric_group_cayley(3), BM),
        CorpusEntry("coxeter_cayley:A3", symmetric_group_cayley(4), BM),
        CorpusEntry("coxeter_cayley:A4", symmetric_group_cayley(5), BM),
        CorpusEntry("hypercube:7", hypercube(7), ALL),
        CorpusEntry("square_grid:8,8", square_grid(8, 8), ALL),
        CorpusEntry("hamming:4,4,4", hamming(4, 4, 4), QM),
        CorpusEntry("cartesian_product:even_cycle:8,even_cycle:8",
                    cartesian_product(even_cycle(8), even_cycle(8)), BM),
        CorpusEntry("cartesian_product:even_cycle:10,even_cycle:10,hypercube:1",
                    cartesian_product(cartesian_product(even_cycle(10), even_cycle(10)), hypercube(1)), BM),
        CorpusEntry("cycle:5", cycle(5), NONE),
        CorpusEntry("k4_minus", k4_minus(), NONE),
        CorpusEntry("k32", k32(), NONE),
        CorpusEntry("cube_minus_vertex", cube_minus_vertex(), NONE),
        CorpusEntry("hexagons_sharing_two_edges", hexagons_sharing_two_edges(), NONE),
    ]
    if include_cayley:
        from .periagroup import cayley_ball, corpus_presentations

        for name, p in corpus_presentations().items():
            out.append(CorpusEntry(f"cayley:{name}", cayley_ball(p).graph, frozenset(expected_presentation_labels(p))))
    return out


def expected_presentation_labels(p) -> set:
    """Labels of the Cayley graph of a finite periagroup, read off its presentation.

    Every such graph is mediangle.  It is bipartite iff every vertex group
    has order two, and has a convex cycle longer than four iff some label
    exceeds two.
    """
    labels = {MEDIANGLE}
    coxeter = all(grp.order == 2 for grp in p.groups)
    right_angled = all(lam == 2 for lam in p.labels.values())
    if coxeter:
        labels.add(BIPARTITE_MEDIANGLE)
    if right_angled:
        labels.add(QUASI_MEDIAN)
        if coxeter:
            labels.add(MEDIAN)
    return labels


def lexicographic_coordinates(sizes):
    return list(product(*(range(k) for k in sizes)))
