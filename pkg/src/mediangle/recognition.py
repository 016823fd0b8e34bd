"""Brute-force recognizers for median, quasi-median and mediangle graphs.

Every check is exhaustive over vertex tuples.  A failing verdict carries a
witness naming the violated axiom and the vertices involved; witnesses are
the first violation in lexicographic tuple order, so they are reproducible.

For graphs flagged as balls (``Graph.ball``), universally quantified
conditions are only asserted for tuples lying within ``radius - margin`` of
the centre, and the verdict's mode is ``"interior-only"``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .graph import (
    K4MINUS, K32, Graph, bits, convex_even_cycles, cycle_edges, find_induced, resolve_max_len,
)

MEDIAN = "median"
QUASI_MEDIAN = "quasi-median"
MEDIANGLE = "mediangle"
BIPARTITE_MEDIANGLE = "bipartite-mediangle"
LABELS = (MEDIAN, QUASI_MEDIAN, MEDIANGLE, BIPARTITE_MEDIANGLE)


@dataclass
class Verdict:
    holds: bool
    witness: dict | None = None
    cap_used: int | None = None
    mode: str = "exact"
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        out = {"holds": self.holds, "witness": self.witness, "cap_used": self.cap_used, "mode": self.mode}
        if self.details:
            out["details"] = self.details
        return out


def _interior(g: Graph, margin):
    """Vertices over which universal conditions are asserted, and the verdict mode."""
    if g.ball is None:
        return range(g.n), "exact"
    row = g.dist_row(g.ball.center)
    keep = [v for v in range(g.n) if 0 <= row[v] <= g.ball.radius - margin]
    return keep, "interior-only"


def _margin(max_len, margin):
    return max_len // 2 if margin is None else margin


def check_triangle_condition(g: Graph, margin: int | None = None) -> Verdict:
    """For ``d(o,x) = d(o,y)`` and ``x ~ y``, some common neighbour of ``x, y`` is one step closer to ``o``."""
    inner, mode = _interior(g, margin or 0)
    inner_set = set(inner)
    for o in inner:
        row = g.dist_row(o)
        for x, y in g.edges:
            if x not in inner_set or y not in inner_set:
                continue
            if row[x] != row[y] or row[x] < 0:
                continue
            common = g.adj[x] & g.adj[y]
            if not any(row[z] == row[x] - 1 for z in common):
                return Verdict(False, {"axiom": "triangle", "o": o, "x": x, "y": y}, mode=mode)
    return Verdict(True, mode=mode)


def cycles_through_corners(g: Graph, max_len: int) -> dict:
    """Map ``(z, x, y)`` with ``x < y`` to the convex even cycles containing edges ``z-x`` and ``z-y``.

    Each entry is a list of ``(cycle, opposite_vertex)``.
    """

    def compute():
        out = {}
        for c in convex_even_cycles(g, max_len):
            L = len(c)
            for i, z in enumerate(c):
                a, b = c[i - 1], c[(i + 1) % L]
                key = (z, min(a, b), max(a, b))
                out.setdefault(key, []).append((c, c[(i + L // 2) % L]))
        return out

    return g.memo(("corners", max_len), compute)


def check_cycle_condition(g: Graph, max_len: int | None = None, margin: int | None = None) -> Verdict:
    """For ``d(o,x) = d(o,y) = d(o,z) - 1`` with ``x, y`` neighbours of ``z``, a convex even cycle
    through ``x-z-y`` has its vertex opposite ``z`` in ``I(o,x) & I(o,y)``."""
    max_len = resolve_max_len(g, max_len)
    inner, mode = _interior(g, _margin(max_len, margin))
    inner_set = set(inner)
    corners = cycles_through_corners(g, max_len)
    for o in inner:
        row = g.dist_row(o)
        for z in inner:
            dz = row[z]
            if dz < 1:
                continue
            lower = sorted(w for w in g.adj[z] if row[w] == dz - 1 and w in inner_set)
            for x, y in combinations(lower, 2):
                ok = False
                for c, opp in corners.get((z, x, y), ()):
                    half = len(c) // 2
                    # on a convex cycle d(opp, x) = d(opp, y) = half - 1
                    if row[opp] + half - 1 == row[x]:
                        ok = True
                        break
                if not ok:
                    return Verdict(False, {"axiom": "cycle", "o": o, "x": x, "y": y, "z": z},
                                   cap_used=max_len, mode=mode)
    return Verdict(True, cap_used=max_len, mode=mode)


def check_even_cycle_intersections(g: Graph, max_len: int | None = None, margin: int | None = None) -> Verdict:
    """Distinct convex even cycles share at most one edge."""
    max_len = resolve_max_len(g, max_len)
    inner, mode = _interior(g, _margin(max_len, margin))
    inner_mask = bits(inner)
    cycles = [c for c in convex_even_cycles(g, max_len) if bits(c) & ~inner_mask == 0]
    by_edge = {}
    for idx, c in enumerate(cycles):
        for e in cycle_edges(c):
            by_edge.setdefault(e, []).append(idx)
    shared = {}
    for e, idxs in sorted(by_edge.items()):
        for i, j in combinations(idxs, 2):
            shared.setdefault((i, j), []).append(e)
    for (i, j), es in sorted(shared.items()):
        if len(es) > 1:
            return Verdict(False, {"axiom": "even-cycle-intersection", "cycles": [list(cycles[i]), list(cycles[j])],
                                   "shared_edges": [list(e) for e in es]}, cap_used=max_len, mode=mode)
    return Verdict(True, cap_used=max_len, mode=mode)


def check_no_k4_minus(g: Graph) -> Verdict:
    w = find_induced(g, K4MINUS)
    if w is not None:
        return Verdict(False, {"axiom": "no-K4minus", "vertices": list(w)})
    return Verdict(True)


def check_connected(g: Graph) -> Verdict:
    if g.is_connected:
        return Verdict(True)
    row = g.dist_row(0)
    far = int(next(v for v in range(g.n) if row[v] < 0))
    return Verdict(False, {"axiom": "connected", "x": 0, "y": far})


def is_mediangle(g: Graph, max_len: int | None = None, margin: int | None = None) -> Verdict:
    """Connected, triangle condition, no induced K4minus, cycle condition, even-cycle intersections."""
    max_len = resolve_max_len(g, max_len)
    margin = _margin(max_len, margin)
    mode = "exact" if g.ball is None else "interior-only"
    checks = (
        lambda: check_connected(g),
        lambda: check_triangle_condition(g, margin),
        lambda: check_no_k4_minus(g),
        lambda: check_cycle_condition(g, max_len, margin),
        lambda: check_even_cycle_intersections(g, max_len, margin),
    )
    for check in checks:
        v = check()
        if not v.holds:
            v.cap_used, v.mode = max_len, mode
            return v
    return Verdict(True, cap_used=max_len, mode=mode)


def is_median(g: Graph) -> Verdict:
    """Every triple of vertices has exactly one median point."""
    if not g.is_connected:
        return check_connected(g)
    n = g.n
    for x in range(n):
        for y in range(x + 1, n):
            ixy = g.interval_mask(x, y)
            for z in range(y + 1, n):
                m = ixy & g.interval_mask(y, z) & g.interval_mask(x, z)
                if m == 0 or m & (m - 1):
                    count = bin(m).count("1")
                    return Verdict(False, {"axiom": "unique-median", "triple": [x, y, z], "medians": count})
    return Verdict(True)


def has_long_convex_cycle(g: Graph, max_len: int):
    for c in convex_even_cycles(g, max_len):
        if len(c) > 4:
            return c
    return None


def is_quasi_median(g: Graph, max_len: int | None = None) -> Verdict:
    """Mediangle with no convex even cycle of length greater than four."""
    max_len = resolve_max_len(g, max_len)
    v = is_mediangle(g, max_len)
    if not v.holds:
        return v
    c = has_long_convex_cycle(g, max_len)
    if c is not None:
        return Verdict(False, {"axiom": "no-long-convex-cycle", "cycle": list(c)}, cap_used=max_len, mode=v.mode)
    return Verdict(True, cap_used=max_len, mode=v.mode)


def check_quadrangle_condition(g: Graph) -> Verdict:
    for o in range(g.n):
        row = g.dist_row(o)
        for z in range(g.n):
            dz = row[z]
            if dz < 1:
                continue
            lower = sorted(w for w in g.adj[z] if row[w] == dz - 1)
            for x, y in combinations(lower, 2):
                if not any(row[w] == dz - 2 for w in g.adj[x] & g.adj[y]):
                    return Verdict(False, {"axiom": "quadrangle", "o": o, "x": x, "y": y, "z": z})
    return Verdict(True)


def is_quasi_median_direct(g: Graph) -> Verdict:
    """Weakly modular with no induced K4minus or K32, checked from the definition."""
    for v in (check_connected(g), check_triangle_condition(g), check_quadrangle_condition(g), check_no_k4_minus(g)):
        if not v.holds:
            return v
    w = find_induced(g, K32)
    if w is not None:
        return Verdict(False, {"axiom": "no-K32", "vertices": list(w)})
    return Verdict(True)


def classify(g: Graph, max_len: int | None = None) -> set:
    max_len = resolve_max_len(g, max_len)
    labels = set()
    if not is_mediangle(g, max_len).holds:
        return labels
    labels.add(MEDIANGLE)
    if g.is_bipartite:
        labels.add(BIPARTITE_MEDIANGLE)
    if has_long_convex_cycle(g, max_len) is None:
        labels.add(QUASI_MEDIAN)
        if is_median(g).holds:
            labels.add(MEDIAN)
    return labels


def recognize(g: Graph, cls: str, max_len: int | None = None) -> Verdict:
    if cls == MEDIAN:
        return is_median(g)
    if cls == QUASI_MEDIAN:
        return is_quasi_median(g, max_len)
    if cls == MEDIANGLE:
        return is_mediangle(g, max_len)
    if cls == BIPARTITE_MEDIANGLE:
        v = is_mediangle(g, max_len)
        if v.holds and not g.is_bipartite:
            return Verdict(False, {"axiom": "bipartite"}, cap_used=v.cap_used, mode=v.mode)
        return v
    raise ValueError(f"unknown class {cls!r}")
