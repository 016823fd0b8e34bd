"""Rotation systems for explicit finite permutation actions on graphs.

Permutations are tuples ``p`` with ``p[v]`` the image of vertex ``v``;
``compose(p, q)`` applies ``q`` first.  Subgroups are explicit frozensets of
permutations.  Only cliques with at least two vertices take part in the
rotation axioms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .errors import CapExceededError, InputError, PreconditionError, VerificationError
from .graph import Graph, cliques
from .groups import GroupSpec, find_isomorphism
from .hyperplane import system as hyperplane_system
from .periagroup import CayleyBall, Presentation, cayley_ball

DEFAULT_ELEMENT_CAP = 100_000


def compose(p: tuple, q: tuple) -> tuple:
    return tuple(p[x] for x in q)


def inverse(p: tuple) -> tuple:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def identity(n: int) -> tuple:
    return tuple(range(n))


def closure(gens, n: int, cap: int = DEFAULT_ELEMENT_CAP) -> frozenset:
    """The permutation group generated by ``gens`` on ``n`` points."""
    gens = sorted(set(tuple(g) for g in gens))
    e = identity(n)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        raise CapExceededError(f"group has more than {cap} elements")
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def setwise_stabilizer(elements, s) -> frozenset:
    s = frozenset(s)
    return frozenset(g for g in elements if frozenset(g[v] for v in s) == s)


class GroupAction:
    """A graph with a group of automorphisms given by generating permutations."""

    def __init__(self, graph: Graph, generators, element_cap: int = DEFAULT_ELEMENT_CAP):
        self.graph = graph
        self.element_cap = element_cap
        gens = []
        for p in generators:
            p = tuple(int(x) for x in p)
            if sorted(p) != list(range(graph.n)):
                raise InputError(f"generator {list(p)} is not a permutation of {graph.n} vertices")
            for u, v in graph.edges:
                if not graph.has_edge(p[u], p[v]):
                    raise InputError(f"generator {list(p)} is not an automorphism: edge {u}-{v} maps to a non-edge")
            gens.append(p)
        self.generators = tuple(gens)
        self._elements = None

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def elements(self) -> frozenset:
        if self._elements is None:
            self._elements = closure(self.generators, self.n, self.element_cap)
        return self._elements

    def subgroup(self, gens) -> frozenset:
        return closure(gens, self.n, self.element_cap)

    @classmethod
    def from_json(cls, obj) -> tuple["GroupAction", list]:
        """Parse an action document; returns the action and its candidate subgroups."""
        from .io import graph_from_json

        try:
            g = graph_from_json(obj["graph"])
            action = cls(g, obj.get("generators", []), int(obj.get("element_cap", DEFAULT_ELEMENT_CAP)))
            subs = []
            for entry in obj.get("subgroups", []):
                gens = []
                for item in entry:
                    if isinstance(item, int):
                        gens.append(action.generators[item])
                    else:
                        gens.append(tuple(int(x) for x in item))
                subs.append(action.subgroup(gens))
        except (KeyError, IndexError, TypeError) as exc:
            raise InputError(f"malformed action: {exc}") from None
        return action, subs


def _perm_json(p):
    return list(p)


@dataclass
class RotationReport:
    """Maps each check name to None (passed) or a witness describing the failure."""

    checks: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(w is None for w in self.checks.values())

    def failed(self) -> list:
        return [k for k, w in self.checks.items() if w is not None]

    def to_json(self) -> dict:
        return {"holds": self.holds,
                "checks": {k: {"holds": w is None, "witness": w} for k, w in sorted(self.checks.items())}}


def rotative_stabilizers(action: GroupAction, r, clique) -> list:
    """Members of ``r`` stabilising ``clique`` and acting freely-transitively on it."""
    c = frozenset(clique)
    out = []
    for i, sub in enumerate(r):
        if len(sub) != len(c):
            continue
        if any(frozenset(g[v] for v in c) != c for g in sub):
            continue
        v0 = min(c)
        if {g[v0] for g in sub} == c:
            out.append(i)
    return out


def _rotation_cliques(g: Graph) -> list:
    return [c for c in cliques(g) if len(c) >= 2]


def verify_presystem(action: GroupAction, r) -> RotationReport:
    r = [frozenset(s) for s in r]
    rep = RotationReport()
    for i, sub in enumerate(r):
        if len(sub) <= 1:
            raise InputError(f"subgroup {i} is trivial")
    # conjugation-closed under generators
    rset = set(r)
    wit = None
    for i, sub in enumerate(r):
        for gi, g in enumerate(action.generators):
            gi_inv = inverse(g)
            conj = frozenset(compose(compose(g, x), gi_inv) for x in sub)
            if conj not in rset:
                wit = {"subgroup": i, "generator": gi}
                break
        if wit:
            break
    rep.checks["conjugation_closed"] = wit
    gen = action.subgroup([x for sub in r for x in sub])
    g_all = action.elements
    rep.checks["generating"] = None if gen == g_all else {"generated_order": len(gen), "group_order": len(g_all)}
    wit = None
    used = set()
    for c in _rotation_cliques(action.graph):
        hits = rotative_stabilizers(action, r, c)
        used.update(hits)
        if len(hits) != 1 and wit is None:
            wit = {"clique": list(c), "rotative_stabilizers": hits}
    rep.checks["unique_rotative_stabilizer"] = wit
    unused = sorted(set(range(len(r))) - used)
    rep.checks["every_subgroup_rotates_a_clique"] = {"subgroups": unused} if unused else None
    return rep


def barriers(action: GroupAction, r) -> dict:
    """Map each member of ``r`` to the edges of the cliques it rotates."""
    r = [frozenset(s) for s in r]
    out = {}
    for c in _rotation_cliques(action.graph):
        hits = rotative_stabilizers(action, r, c)
        if len(hits) == 1:
            es = out.setdefault(hits[0], set())
            es.update((a, b) for i, a in enumerate(c) for b in c[i + 1:])
    return {k: frozenset(v) for k, v in out.items()}


def verify_rotation_system(action: GroupAction, r) -> RotationReport:
    rep = verify_presystem(action, r)
    g = action.graph
    r = [frozenset(s) for s in r]
    bars = barriers(action, r)
    wit = None
    for c in _rotation_cliques(g):
        hits = rotative_stabilizers(action, r, c)
        if len(hits) != 1:
            continue
        comps = g.induced_components(range(g.n), bars[hits[0]])
        where = {v: i for i, comp in enumerate(comps) for v in comp}
        for i, x in enumerate(c):
            for y in c[i + 1:]:
                if where[x] == where[y]:
                    wit = {"clique": list(c), "subgroup": hits[0], "x": x, "y": y}
                    break
            if wit:
                break
        if wit:
            break
    rep.checks["barrier_separates"] = wit
    wit = None
    for p in sorted(action.elements):
        fixed = [v for v in range(g.n) if p[v] == v]
        if fixed and len(fixed) < g.n:
            wit = {"element": _perm_json(p), "fixed_vertex": fixed[0]}
            break
    rep.checks["free"] = wit
    orbit = {p[0] for p in action.elements} if g.n else set()
    missing = sorted(set(range(g.n)) - orbit)
    rep.checks["transitive"] = {"basepoint": 0, "missing": missing[:10]} if missing else None
    return rep


def _group_spec_from_perms(elems: list) -> GroupSpec:
    """Group spec for permutations listed with the identity first, multiplied by composition."""
    index = {p: i for i, p in enumerate(elems)}
    table = [[index[compose(a, b)] for b in elems] for a in elems]
    k = len(elems)
    if all(table[i][j] == (i + j) % k for i in range(k) for j in range(k)):
        return GroupSpec.cyclic(k)
    return GroupSpec.from_table(table)


@dataclass
class Extraction:
    presentation: Presentation
    cliques: list
    elements: list
    """``elements[i][e]`` is the permutation for element ``e`` of vertex group ``i``."""
    vertex_map: tuple = ()
    """Vertex of the action graph reached from the basepoint by each vertex of the presentation's ball."""


def extract(action: GroupAction, r, basepoint: int = 0, check: bool = True) -> Extraction:
    if check:
        rep = verify_rotation_system(action, r)
        if not rep.holds:
            raise PreconditionError(f"not a rotation system: failed {rep.failed()}")
    g = action.graph
    if not 0 <= basepoint < max(g.n, 1):
        raise InputError("basepoint out of range")
    r = [frozenset(s) for s in r]
    at_o = [c for c in _rotation_cliques(g) if basepoint in c]
    groups, elements = [], []
    for c in at_o:
        sub = r[rotative_stabilizers(action, r, c)[0]]
        by_image = {p[basepoint]: p for p in sub}
        order = [basepoint] + [v for v in c if v != basepoint]
        elems = [by_image[v] for v in order]
        elements.append(elems)
        groups.append(_group_spec_from_perms(elems))
    hs = hyperplane_system(g)
    k_of = [hs.class_of(c[0], c[1]) for c in at_o]
    labels = {}
    for i in range(len(at_o)):
        for j in range(i + 1, len(at_o)):
            if k_of[i] == k_of[j]:
                raise VerificationError(f"cliques {at_o[i]} and {at_o[j]} lie in one hyperplane")
            if hs.transverse(k_of[i], k_of[j]):
                lam = hs.angle(k_of[i], k_of[j]).lam()
                if lam < 2:
                    raise VerificationError(f"angle between cliques {at_o[i]} and {at_o[j]} gives lambda {lam}")
                labels[(i, j)] = lam
    try:
        pres = Presentation(Graph(len(at_o), labels.keys()), labels, groups)
    except InputError as exc:
        raise VerificationError(f"extracted data is not a periagroup presentation: {exc}") from None
    ext = Extraction(pres, at_o, elements)
    if check:
        ext.vertex_map = _verify_extraction(action, ext, basepoint)
    return ext


def _verify_extraction(action: GroupAction, ext: Extraction, basepoint: int) -> tuple:
    g = action.graph
    ball = cayley_ball(ext.presentation, vertex_cap=max(g.n, 1) + 1)
    if not ball.complete or ball.order != g.n:
        raise VerificationError(f"presentation has {ball.order} elements but the graph has {g.n} vertices")
    e = identity(g.n)
    image = []
    for w in ball.reps:
        p = e
        for s in w:
            p = compose(p, ext.elements[s.vertex][s.element])
        image.append(p[basepoint])
    if sorted(image) != list(range(g.n)):
        raise VerificationError("word evaluation is not a bijection onto the vertices")
    mapped = {(min(image[u], image[v]), max(image[u], image[v])) for u, v in ball.graph.edges}
    if mapped != set(g.edges):
        raise VerificationError("word evaluation does not carry Cayley edges onto graph edges")
    return tuple(image)


def extract_periagroup(action: GroupAction, r, basepoint: int = 0) -> Presentation:
    """Read a periagroup presentation off a rotation system and check it against the graph."""
    return extract(action, r, basepoint).presentation


def rotation_structure(ball: CayleyBall) -> tuple[GroupAction, list]:
    """Left-multiplication action on a complete Cayley ball with the conjugates of the vertex groups."""
    grp = ball.group()
    p = ball.presentation
    gens = [grp.left_perm(ball.index[(s,)]) for s in ball.syllables]
    action = GroupAction(ball.graph, gens)
    subs = set()
    for u in range(p.n):
        vg = grp.vertex_group(u)
        for g in range(grp.n):
            subs.add(frozenset(grp.left_perm(x) for x in grp.conjugate_set(g, vg)))
    return action, sorted(subs, key=lambda s: sorted(s))


def presentations_isomorphic(p1: Presentation, p2: Presentation) -> dict | None:
    """A label-preserving isomorphism of the decorated graphs matching vertex groups up to isomorphism."""
    if p1.n != p2.n or len(p1.labels) != len(p2.labels):
        return None
    iso_cache = {}

    def groups_match(u, v):
        key = (u, v)
        if key not in iso_cache:
            a, b = p1.groups[u], p2.groups[v]
            if a.finite != b.finite or a.order != b.order:
                iso_cache[key] = False
            elif not a.finite:
                iso_cache[key] = True
            else:
                iso_cache[key] = find_isomorphism(a.multiplication_table(), b.multiplication_table()) is not None
        return iso_cache[key]

    for perm in permutations(range(p2.n)):
        if not all(groups_match(u, perm[u]) for u in range(p1.n)):
            continue
        if all(p2.lam(perm[u], perm[v]) == lam for (u, v), lam in p1.labels.items()):
            return {u: perm[u] for u in range(p1.n)}
    return None


@dataclass
class Decomposition:
    family: list
    rot: frozenset
    y: tuple
    stab_y: frozenset
    checks: dict
    presentation: Presentation | None
    quotient: Graph | None = None

    @property
    def holds(self) -> bool:
        return all(v is None for v in self.checks.values())

    def to_json(self) -> dict:
        return {"holds": self.holds, "family": self.family, "rot_order": len(self.rot),
                "stab_y_order": len(self.stab_y), "y": list(self.y),
                "checks": {k: {"holds": v is None, "witness": v} for k, v in sorted(self.checks.items())},
                "presentation": self.presentation.to_json() if self.presentation is not None else None}


def rotation_subgroup(source, seeds, basepoint: int = 0, max_len: int | None = None,
                      reference_groups=None) -> Decomposition:
    """Split the acting group as ``Rot`` times ``stab(Y)`` for a family of hyperplanes.

    ``source`` is a complete :class:`CayleyBall` (acted on by left
    multiplication) or a :class:`GroupAction`.  The seed hyperplanes are
    closed under the group action; ``Rot`` is generated by the rotative
    stabilisers of the family and ``Y`` is the intersection of the sectors
    containing ``basepoint``.
    """
    if isinstance(source, CayleyBall):
        action, _ = rotation_structure(source)
        if reference_groups is None:
            reference_groups = [g.multiplication_table() for g in source.presentation.groups]
    else:
        action = source
    g = action.graph
    hs = hyperplane_system(g, max_len)
    n = g.n
    elements = sorted(action.elements)
    seeds = sorted(set(int(k) for k in seeds))
    for k in seeds:
        if not 0 <= k < len(hs):
            raise InputError(f"no hyperplane with id {k}")

    def image(p, k):
        u, v = hs.hyperplanes[k].edges[0]
        return hs.class_of(p[u], p[v])

    family = set(seeds)
    frontier = list(seeds)
    while frontier:
        nxt = []
        for k in frontier:
            for p in action.generators:
                j = image(p, k)
                if j not in family:
                    family.add(j)
                    nxt.append(j)
        frontier = nxt
    family = sorted(family)

    labels = hs.labels
    stabs = {}
    for k in family:
        sub = frozenset(elements)
        for c in hs.cliques_of(k):
            sub = setwise_stabilizer(sub, c)
        row = labels[k]
        nsec = int(row.max()) + 1
        reps = [int(np.flatnonzero(row == s)[0]) for s in range(nsec)]
        # freely-transitive on sectors: one element per sector image of sector 0
        images = sorted(int(row[p[reps[0]]]) for p in sub)
        if images != list(range(nsec)):
            raise PreconditionError(f"rotative stabiliser of hyperplane {k} does not permute its sectors freely-transitively")
        stabs[k] = sub

    rot = action.subgroup([x for k in family for x in stabs[k]]) if family else frozenset({identity(n)})
    if family:
        sig = labels[family].T
        o_sig = sig[basepoint]
        y = tuple(int(v) for v in np.flatnonzero((sig == o_sig).all(axis=1)))
    else:
        sig = np.zeros((n, 0), dtype=np.int64)
        y = tuple(range(n))
    stab_y = setwise_stabilizer(elements, y)
    checks = {}
    products = {compose(a, b) for a in rot for b in stab_y}
    checks["product_is_whole_group"] = None if len(products) == len(elements) else {
        "product_size": len(products), "group_order": len(elements)}
    meet = rot & stab_y
    checks["trivial_intersection"] = None if len(meet) == 1 else {"intersection_order": len(meet)}

    # quotient graph: classes of equal sector signature, adjacent when joined by an edge
    keys = sorted({tuple(row) for row in sig.tolist()})
    cls_index = {kk: i for i, kk in enumerate(keys)}
    cls = [cls_index[tuple(row)] for row in sig.tolist()]
    q_edges = {(min(cls[u], cls[v]), max(cls[u], cls[v])) for u, v in g.edges if cls[u] != cls[v]}
    omega = Graph(len(keys), sorted(q_edges))
    class_rep = [cls.index(i) for i in range(len(keys))]

    def restrict(p):
        return tuple(cls[p[class_rep[i]]] for i in range(len(keys)))

    rot_gens = sorted({x for k in family for x in stabs[k]})
    q_action = GroupAction(omega, [restrict(p) for p in rot_gens] or [identity(len(keys))])
    restricted = {restrict(p) for p in rot}
    checks["rot_faithful_on_quotient"] = None if len(restricted) == len(rot) else {
        "restricted_order": len(restricted), "rot_order": len(rot)}
    q_r = sorted({frozenset(restrict(p) for p in stabs[k]) for k in family}, key=lambda s: sorted(s))
    rep = verify_rotation_system(q_action, q_r)
    checks["quotient_rotation_system"] = None if rep.holds else {"failed": rep.failed()}
    presentation = None
    if rep.holds:
        ext = extract(q_action, q_r, cls[basepoint])
        presentation = ext.presentation
        presentation.validate()
        tangent = {k for k in family
                   if any((u in y) != (v in y) for u, v in hs.hyperplanes[k].edges)}
        basis = {frozenset(restrict(p) for p in stabs[k]) for k in tangent}
        got = {frozenset(elems) for elems in ext.elements}
        checks["basis_is_tangent_stabilisers"] = None if basis == got else {
            "tangent": sorted(tangent), "basis_size": len(got)}
        if reference_groups is not None:
            bad = [i for i, grp in enumerate(presentation.groups)
                   if not any(len(t) == grp.order and find_isomorphism(grp.multiplication_table(), t) is not None
                              for t in reference_groups)]
            checks["vertex_groups_in_reference"] = {"vertices": bad} if bad else None
    return Decomposition(family, rot, y, stab_y, checks, presentation, omega)
