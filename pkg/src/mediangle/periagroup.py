"""Periagroup presentations, the word rewriting system, normal forms and Cayley balls.

A word is a tuple of :class:`Syllable` ``(vertex, element)``.  Three moves
rewrite words without changing the group element they represent:

* reduction deletes an identity syllable;
* fusion merges two adjacent syllables from the same vertex group;
* the dihedral move replaces an alternating window ``a b a ...`` of length
  ``lambda(u, v)`` by ``b a b ...``.

``reduce`` reaches a minimal-length word by exploring dihedral flips and
applying fusions whenever one becomes available.  ``canonical_form`` picks
the lexicographically least reduced word in the flip-closure, which decides
the word problem.
"""
from __future__ import annotations

import logging
import os
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import (
    BudgetExceededError, CapExceededError, IncompleteBallError, InputError, MoveError, PreconditionError,
    VerificationError,
)
from .graph import BallInfo, Graph, gate_map, is_gated
from .groups import GroupSpec

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10 ** 6
DEFAULT_VERTEX_CAP = 20_000


def default_budget() -> int:
    """Node budget for flip-closure exploration; ``MEDIANGLE_BUDGET`` overrides it."""
    env = os.environ.get("MEDIANGLE_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"MEDIANGLE_BUDGET must be an integer, got {env!r}") from None
    return DEFAULT_BUDGET


class Syllable(NamedTuple):
    vertex: int
    element: int

    def to_json(self):
        return {"vertex": self.vertex, "element": self.element}


Word = tuple


class Presentation:
    """Decorated graph ``(gamma, labels)`` with one vertex group per vertex of ``gamma``."""

    def __init__(self, gamma: Graph, labels: dict, groups, validate: bool = True):
        self.gamma = gamma
        self.labels = {(min(u, v), max(u, v)): int(lam) for (u, v), lam in labels.items()}
        self.groups = tuple(groups)
        self._cache = {}
        if validate:
            self.validate()

    def __repr__(self):
        return f"Presentation(n={self.n}, labels={self.labels}, groups={[g.to_json() for g in self.groups]})"

    @property
    def n(self) -> int:
        return self.gamma.n

    def lam(self, u: int, v: int):
        return self.labels.get((min(u, v), max(u, v)))

    def validate(self) -> None:
        if len(self.groups) != self.n:
            raise InputError(f"{self.n} vertices but {len(self.groups)} vertex groups")
        if set(self.labels) != set(self.gamma.edges):
            raise InputError("labels must be defined exactly on the edges of gamma")
        for (u, v), lam in sorted(self.labels.items()):
            if lam < 2:
                raise InputError(f"label {lam} on edge {u}-{v} is below 2")
            if lam > 2 and not (self.groups[u].order == 2 and self.groups[v].order == 2):
                raise InputError(f"edge {u}-{v} has label {lam} > 2 but its vertex groups are not both of order two")

    @property
    def phi(self) -> tuple:
        """Vertices whose group has order two."""
        return tuple(u for u in range(self.n) if self.groups[u].order == 2)

    @property
    def psi(self) -> tuple:
        return tuple(u for u in range(self.n) if self.groups[u].order != 2)

    @property
    def finite_groups(self) -> bool:
        return all(g.finite for g in self.groups)

    @property
    def is_coxeter(self) -> bool:
        return all(g.order == 2 for g in self.groups)

    def syllables(self) -> list:
        if not self.finite_groups:
            raise InputError("infinite cyclic vertex group: syllables cannot be enumerated")
        return [Syllable(u, a) for u in range(self.n) for a in self.groups[u].nontrivial()]

    def sub(self, vertices) -> tuple["Presentation", tuple]:
        """Induced sub-presentation on ``vertices`` (renumbered) and the list of original ids."""
        sub_gamma, keep = self.gamma.induced_subgraph(vertices)
        labels = {(i, j): self.lam(keep[i], keep[j]) for i, j in sub_gamma.edges}
        return Presentation(sub_gamma, labels, [self.groups[u] for u in keep]), keep

    def to_json(self) -> dict:
        return {"vertices": [{"id": u, "group": g.to_json()} for u, g in enumerate(self.groups)],
                "edges": [{"u": u, "v": v, "lambda": lam} for (u, v), lam in sorted(self.labels.items())]}

    @classmethod
    def from_json(cls, obj) -> "Presentation":
        try:
            verts = sorted(obj["vertices"], key=lambda d: d["id"])
            ids = [int(d["id"]) for d in verts]
            if ids != list(range(len(ids))):
                raise InputError("vertex ids must be 0..n-1")
            groups = [GroupSpec.from_json(d["group"]) for d in verts]
            labels = {}
            for e in obj.get("edges", []):
                u, v = int(e["u"]), int(e["v"])
                labels[(min(u, v), max(u, v))] = int(e.get("lambda", 2))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"malformed presentation: {exc}") from None
        return cls(Graph(len(groups), labels.keys()), labels, groups)

    # -- words ---------------------------------------------------------

    def word(self, items) -> Word:
        """Build a word from syllables, ``(vertex, element)`` pairs, dicts, or bare vertex ids.

        A bare vertex id stands for element 1 of that vertex group.  Identity
        syllables are dropped with a warning.
        """
        out = []
        for it in items:
            if isinstance(it, dict):
                try:
                    it = (it["vertex"], it["element"])
                except KeyError as exc:
                    raise InputError(f"syllable missing field {exc}") from None
            elif isinstance(it, (int, np.integer)) and not isinstance(it, bool):
                it = (int(it), 1)
            try:
                u, a = it
            except (TypeError, ValueError):
                raise InputError(f"bad syllable {it!r}") from None
            if not isinstance(u, (int, np.integer)) or isinstance(u, bool) or not 0 <= u < self.n:
                raise InputError(f"syllable vertex {u!r} out of range")
            a = self.groups[u].check_element(a)
            if a == 0:
                log.warning("dropping identity syllable at vertex %d", u)
                continue
            out.append(Syllable(int(u), a))
        return tuple(out)

    def inverse(self, w: Word) -> Word:
        return tuple(Syllable(s.vertex, self.groups[s.vertex].inv(s.element)) for s in reversed(w))

    def word_key(self, w: Word) -> tuple:
        return tuple((s.vertex, self.groups[s.vertex].key(s.element)) for s in w)


def word_to_json(w: Word) -> list:
    return [s.to_json() for s in w]


# ---------------------------------------------------------------------------
# moves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Move:
    kind: str
    i: int
    edge: tuple | None = None

    @classmethod
    def reduction(cls, i):
        return cls("reduction", i)

    @classmethod
    def fusion(cls, i):
        return cls("fusion", i)

    @classmethod
    def dihedral(cls, i, edge=None):
        return cls("dihedral", i, edge)


def _dihedral_at(p: Presentation, w: Word, i: int):
    """The flipped window starting at ``i``, or None when no dihedral move applies there."""
    if i + 1 >= len(w):
        return None
    a, b = w[i], w[i + 1]
    if a.vertex == b.vertex:
        return None
    lam = p.lam(a.vertex, b.vertex)
    if lam is None or i + lam > len(w):
        return None
    for k in range(lam):
        if w[i + k] != (a if k % 2 == 0 else b):
            return None
    return tuple(b if k % 2 == 0 else a for k in range(lam)), lam


def _as_word(w) -> Word:
    return tuple(Syllable(int(s[0]), int(s[1])) for s in w)


def apply_move(p: Presentation, w: Word, move: Move) -> Word:
    w = _as_word(w)
    i = move.i
    if not 0 <= i < len(w):
        raise MoveError(f"position {i} outside a word of length {len(w)}")
    if move.kind == "reduction":
        if w[i].element != 0:
            raise MoveError(f"syllable {i} is not the identity")
        return w[:i] + w[i + 1:]
    if move.kind == "fusion":
        if i + 1 >= len(w) or w[i].vertex != w[i + 1].vertex:
            raise MoveError(f"syllables {i}, {i + 1} are not in the same vertex group")
        u = w[i].vertex
        return w[:i] + (Syllable(u, p.groups[u].mul(w[i].element, w[i + 1].element)),) + w[i + 2:]
    if move.kind == "dihedral":
        flip = _dihedral_at(p, w, i)
        if flip is None:
            raise MoveError(f"no alternating window of the right length starts at {i}")
        new, lam = flip
        if move.edge is not None and set(move.edge) != {w[i].vertex, w[i + 1].vertex}:
            raise MoveError(f"window at {i} is not on edge {move.edge}")
        return w[:i] + new + w[i + lam:]
    raise MoveError(f"unknown move {move.kind!r}")


def _strip(w) -> Word:
    return tuple(Syllable(int(s[0]), int(s[1])) for s in w if s[1] != 0)


def _flips(p: Presentation, w: Word):
    for i in range(len(w) - 1):
        flip = _dihedral_at(p, w, i)
        if flip is not None:
            new, lam = flip
            yield w[:i] + new + w[i + lam:]


def _closure_iter(p: Presentation, w: Word, budget: int):
    seen = {w}
    queue = deque([w])
    while queue:
        x = queue.popleft()
        yield x
        for y in _flips(p, x):
            if y not in seen:
                seen.add(y)
                if len(seen) > budget:
                    raise BudgetExceededError(f"flip-closure exceeded the budget of {budget} words")
                queue.append(y)


def flip_closure(p: Presentation, w: Word, budget: int | None = None) -> list:
    """All words reachable from ``w`` by dihedral moves, in breadth-first order."""
    return list(_closure_iter(p, _as_word(w), budget or default_budget()))


def _fusion_position(w: Word):
    for i in range(len(w) - 1):
        if w[i].vertex == w[i + 1].vertex:
            return i
    return None


def reduce(p: Presentation, w, budget: int | None = None) -> Word:
    """A minimal-length word representing the same element as ``w``."""
    budget = budget or default_budget()
    w = _strip(w)
    while True:
        hit = None
        for x in _closure_iter(p, w, budget):
            i = _fusion_position(x)
            if i is not None:
                hit = (x, i)
                break
        if hit is None:
            return w
        x, i = hit
        w = _strip(apply_move(p, x, Move.fusion(i)))


def is_reduced(p: Presentation, w, budget: int | None = None) -> bool:
    w = _strip(w)
    return len(reduce(p, w, budget)) == len(w)


def canonical_form(p: Presentation, w, budget: int | None = None) -> Word:
    """Lexicographically least reduced word, keyed by ``(vertex, element key)``, equal to ``w``."""
    w = _strip(w)
    cache = p._cache
    hit = cache.get(w)
    if hit is not None:
        return hit
    budget = budget or default_budget()
    r = reduce(p, w, budget)
    best = min(_closure_iter(p, r, budget), key=p.word_key)
    if len(cache) > 500_000:
        cache.clear()
    cache[w] = best
    return best


def words_equal(p: Presentation, w1, w2, budget: int | None = None) -> bool:
    return canonical_form(p, w1, budget) == canonical_form(p, w2, budget)


def word_length(p: Presentation, w, budget: int | None = None) -> int:
    return len(reduce(p, w, budget))


def exchange_check(p: Presentation, w, s, budget: int | None = None) -> dict:
    """Check the exchange property for the reduced word ``w`` and the syllable ``s``."""
    w = _strip(w)
    s = Syllable(*s)
    if not is_reduced(p, w, budget):
        raise InputError("exchange_check needs a reduced word")
    n_g = len(w)
    n_gs = word_length(p, w + (s,), budget)
    u, s_inv = s.vertex, p.groups[s.vertex].inv(s.element)
    report = {"len_g": n_g, "len_gs": n_gs}
    if n_gs > n_g:
        report.update(case="longer", holds=True, witness=None)
        return report
    closure = flip_closure(p, w, budget)
    if n_gs == n_g:
        hits = [x for x in closure if x and x[-1].vertex == u and x[-1].element not in (0, s_inv)]
        report["case"] = "equal"
    else:
        hits = [x for x in closure if x and x[-1] == (u, s_inv)]
        report["case"] = "shorter"
    report["holds"] = bool(hits)
    report["witness"] = word_to_json(min(hits, key=p.word_key)) if hits else None
    return report


def coset_min_rep(p: Presentation, w, t, budget: int | None = None) -> Word:
    """The shortest element of the coset ``w <t>`` in a Coxeter group."""
    if not p.is_coxeter:
        raise PreconditionError("coset representatives need every vertex group of order two")
    t = sorted(set(t))
    for u in t:
        if not 0 <= u < p.n:
            raise InputError(f"vertex {u} out of range")
    w = reduce(p, w, budget)
    changed = True
    while changed:
        changed = False
        for u in t:
            shorter = reduce(p, w + (Syllable(u, 1),), budget)
            if len(shorter) < len(w):
                w, changed = shorter, True
                break
    return canonical_form(p, w, budget)


# ---------------------------------------------------------------------------
# Cayley balls and finite groups
# ---------------------------------------------------------------------------


@dataclass
class CayleyBall:
    """Ball around the identity in the Cayley graph for the union of the vertex groups.

    ``labels[(i, j)]`` with ``i < j`` is the syllable ``s`` with
    ``reps[j] = reps[i] * s``.  ``right[i, k]`` is the vertex reached from
    ``i`` by right-multiplying with ``syllables[k]`` (-1 outside the ball).
    """

    presentation: Presentation
    graph: Graph
    reps: list
    index: dict
    labels: dict
    right: np.ndarray
    syllables: list
    complete: bool
    radius: int | None
    _group: "FiniteGroup | None" = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return self.graph.n

    def syllable_index(self, s) -> int:
        return self.syllables.index(Syllable(*s))

    def element_of(self, w) -> int:
        """Vertex representing the word ``w``; raises when the walk leaves the ball."""
        pos = {s: k for k, s in enumerate(self.syllables)}
        x = 0
        for s in _strip(w):
            x = int(self.right[x, pos[s]])
            if x < 0:
                raise IncompleteBallError(f"word {list(w)} leaves the ball")
        return x

    def group(self) -> "FiniteGroup":
        if not self.complete:
            raise IncompleteBallError("the ball does not cover the whole group")
        if self._group is None:
            self._group = FiniteGroup(self)
        return self._group

    def to_json(self) -> dict:
        return {"vertices": self.graph.n, "complete": self.complete, "radius": self.radius,
                "edges": [[u, v] for u, v in self.graph.edges],
                "labels": [{"edge": [u, v], "vertex": s.vertex, "element": s.element}
                           for (u, v), s in sorted(self.labels.items())],
                "reps": [word_to_json(w) for w in self.reps]}


def cayley_ball(p: Presentation, radius: int | None = None, vertex_cap: int = DEFAULT_VERTEX_CAP,
                budget: int | None = None) -> CayleyBall:
    """Breadth-first enumeration of group elements by syllable length.

    Vertices are numbered in BFS order with the identity at 0 and each vertex
    carries its canonical word.  ``complete`` is true iff no element beyond
    the enumerated ones was met.
    """
    if not p.finite_groups:
        raise InputError("cayley_ball does not support infinite cyclic vertex groups")
    if radius is not None and radius < 0:
        raise InputError("radius must be nonnegative")
    syl = sorted(p.syllables(), key=lambda s: (s.vertex, p.groups[s.vertex].key(s.element)))
    reps = [()]
    index = {(): 0}
    rows = {}
    complete = True
    frontier = [0]
    depth = 0
    while frontier:
        nxt = []
        for i in frontier:
            row = []
            for s in syl:
                cf = canonical_form(p, reps[i] + (s,), budget)
                j = index.get(cf)
                if j is None:
                    if radius is not None and depth >= radius:
                        complete = False
                        row.append(-1)
                        continue
                    if len(reps) >= vertex_cap:
                        if radius is None:
                            raise CapExceededError(f"more than {vertex_cap} group elements")
                        complete = False
                        row.append(-1)
                        continue
                    j = len(reps)
                    reps.append(cf)
                    index[cf] = j
                    nxt.append(j)
                row.append(j)
            rows[i] = row
        frontier = nxt
        depth += 1
    n = len(reps)
    right = np.array([rows[i] for i in range(n)], dtype=np.int64).reshape(n, len(syl))
    labels = {}
    for i in range(n):
        for k, s in enumerate(syl):
            j = int(right[i, k])
            if j < 0:
                continue
            if i < j:
                labels[(i, j)] = s
            else:
                labels[(j, i)] = Syllable(s.vertex, p.groups[s.vertex].inv(s.element))
    ball = None if complete else BallInfo(0, radius if radius is not None else depth)
    g = Graph(n, labels.keys(), ball=ball)
    return CayleyBall(p, g, reps, index, labels, right, syl, complete, radius)


class FiniteGroup:
    """Multiplication table of a finite periagroup read off a complete Cayley ball."""

    def __init__(self, ball: CayleyBall):
        self.ball = ball
        p = ball.presentation
        n = ball.order
        pos = {s: k for k, s in enumerate(ball.syllables)}
        mul = np.empty((n, n), dtype=np.int64)
        cols = np.arange(n)
        # column b of the table is the right action of reps[b] applied to every element
        for b, w in enumerate(ball.reps):
            x = cols.copy()
            for s in w:
                x = ball.right[x, pos[s]]
            mul[:, b] = x
        mul.setflags(write=False)
        self.mul = mul
        self.n = n
        self.inv = np.argmax(mul == 0, axis=1)
        self.presentation = p

    def product(self, *xs) -> int:
        out = 0
        for x in xs:
            out = int(self.mul[out, x])
        return out

    def conj(self, g: int, x: int) -> int:
        """``g x g^-1``."""
        return int(self.mul[self.mul[g, x], self.inv[g]])

    def subgroup(self, gens) -> frozenset:
        seen = {0}
        frontier = [0]
        gens = sorted(set(int(x) for x in gens))
        while frontier:
            nxt = []
            for x in frontier:
                for gg in gens:
                    y = int(self.mul[x, gg])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def vertex_group(self, u: int) -> frozenset:
        return frozenset([0] + [self.ball.index[(s,)] for s in self.ball.syllables if s.vertex == u])

    def parabolic_subgroup(self, xi) -> frozenset:
        xi = set(xi)
        return self.subgroup(self.ball.index[(s,)] for s in self.ball.syllables if s.vertex in xi)

    def conjugate_set(self, g: int, h) -> frozenset:
        return frozenset(self.conj(g, x) for x in h)

    def left_perm(self, g: int) -> tuple:
        return tuple(int(x) for x in self.mul[g])


def parabolic(p: Presentation, ball: CayleyBall, g, xi) -> tuple:
    """The coset ``g <xi>`` as a vertex set of a complete ball; checked to be gated."""
    grp = ball.group()
    _check_vertices(p, xi)
    gv = ball.element_of(g)
    coset = tuple(sorted(int(grp.mul[gv, x]) for x in grp.parabolic_subgroup(xi)))
    if not is_gated(ball.graph, coset):
        raise VerificationError(f"coset {coset} is not gated")
    return coset


def _check_vertices(p, xi):
    for u in xi:
        if not 0 <= u < p.n:
            raise InputError(f"vertex {u} out of range")


@dataclass
class ParabolicIntersection:
    k: Word
    xi: tuple
    projection: tuple
    elements: frozenset


def parabolic_intersection(p: Presentation, ball: CayleyBall, first, second) -> ParabolicIntersection:
    """Intersect ``g<phi>g^-1`` and ``h<psi>h^-1`` via the projection of ``h<psi>`` onto ``g<phi>``.

    The answer ``k<xi>k^-1`` is compared with the brute-force intersection of
    the two element sets; a mismatch raises :class:`VerificationError`.
    """
    (g, phi), (h, psi) = first, second
    grp = ball.group()
    a = parabolic(p, ball, g, phi)
    b = parabolic(p, ball, h, psi)
    gm = gate_map(ball.graph, a)
    proj = tuple(sorted({gm[x] for x in b}))
    inside = set(proj)
    xi = tuple(sorted({s.vertex for (u, v), s in ball.labels.items() if u in inside and v in inside}))
    k = proj[0]
    gv, hv = ball.element_of(g), ball.element_of(h)
    lhs = grp.conjugate_set(gv, grp.parabolic_subgroup(phi)) & grp.conjugate_set(hv, grp.parabolic_subgroup(psi))
    rhs = grp.conjugate_set(k, grp.parabolic_subgroup(xi))
    if lhs != rhs:
        raise VerificationError(f"intersection has {len(lhs)} elements but k<xi>k^-1 has {len(rhs)}")
    return ParabolicIntersection(ball.reps[k], xi, proj, lhs)


def verify_semidirect(p: Presentation, ball: CayleyBall | None = None) -> dict:
    """Check the splitting of a finite periagroup over its Coxeter part.

    The retraction deletes syllables from vertex groups of order other than
    two and evaluates the rest in the sub-presentation on order-two vertices.
    """
    if ball is None:
        ball = cayley_ball(p)
    grp = ball.group()
    phi = p.phi
    cp, keep = p.sub(phi)
    back = {i: u for i, u in enumerate(keep)}
    fwd = {u: i for i, u in enumerate(keep)}
    cball = cayley_ball(cp)
    cgrp = cball.group()
    retract = np.array([cball.element_of([(fwd[s.vertex], s.element) for s in w if s.vertex in fwd])
                        for w in ball.reps], dtype=np.int64)
    hom = bool((retract[grp.mul] == cgrp.mul[retract[:, None], retract[None, :]]).all())
    kernel = frozenset(int(x) for x in np.flatnonzero(retract == 0))
    section = [ball.element_of([(back[s.vertex], s.element) for s in w]) for w in cball.reps]
    section_ok = all(retract[x] == c for c, x in enumerate(section))
    trivial_meet = set(section) & kernel == {0}
    gens = set()
    for u in p.psi:
        for x in grp.vertex_group(u):
            for g in range(grp.n):
                gens.add(grp.conj(g, x))
    generated = grp.subgroup(gens) == kernel
    order_ok = grp.n == len(kernel) * cgrp.n
    checks = {"homomorphism": hom, "section": section_ok, "order": order_ok,
              "trivial_intersection": trivial_meet, "kernel_generated_by_conjugates": generated}
    return {"holds": all(checks.values()), "checks": checks, "order": grp.n, "kernel_order": len(kernel),
            "coxeter_order": cgrp.n, "coxeter_vertices": list(phi)}


# ---------------------------------------------------------------------------
# standard presentations
# ---------------------------------------------------------------------------


def coxeter(n: int, labels: dict) -> Presentation:
    """Coxeter presentation on ``n`` generators; unlisted pairs generate a free product."""
    return Presentation(Graph(n, labels.keys()), labels, [GroupSpec.cyclic(2)] * n)


def dihedral(m: int) -> Presentation:
    return coxeter(2, {(0, 1): m})


def coxeter_a(n: int) -> Presentation:
    """Type ``A_n``: the symmetric group on ``n + 1`` letters."""
    labels = {(i, j): (3 if j == i + 1 else 2) for i in range(n) for j in range(i + 1, n)}
    return coxeter(n, labels)


def graph_product(groups, edges) -> Presentation:
    groups = [g if isinstance(g, GroupSpec) else GroupSpec.cyclic(g) for g in groups]
    labels = {(min(u, v), max(u, v)): 2 for u, v in edges}
    return Presentation(Graph(len(groups), labels.keys()), labels, groups)


def corpus_presentations() -> dict:
    """Finite presentations used as a test corpus."""
    s3z3 = Presentation(Graph(3, [(0, 1), (0, 2), (1, 2)]), {(0, 1): 3, (0, 2): 2, (1, 2): 2},
                        [GroupSpec.cyclic(2), GroupSpec.cyclic(2), GroupSpec.cyclic(3)])
    return {
        "hexagon": dihedral(3),
        "prism": graph_product([3, 2], [(0, 1)]),
        "s3xz3": s3z3,
        "a3": coxeter_a(3),
        "b2": dihedral(4),
        "z4": graph_product([4], []),
        "z2xz3xz4": graph_product([2, 3, 4], [(0, 1), (0, 2), (1, 2)]),
    }
