"""Vertex groups: finite cyclic, infinite cyclic, or given by a multiplication table.

Elements are integers.  Finite groups use indices ``0..order-1`` with the
identity at 0.  The infinite cyclic group uses the integers under addition.
"""
from __future__ import annotations

from itertools import product

import numpy as np

from .errors import InputError


class GroupSpec:
    CYCLIC = "cyclic"
    INFINITE = "infinite-cyclic"
    TABLE = "table"

    def __init__(self, kind: str, order: int | None = None, table=None):
        self.kind = kind
        if kind == self.CYCLIC:
            if order is None or order < 2:
                raise InputError("cyclic groups need order >= 2")
            self.order = order
            self.table = None
        elif kind == self.INFINITE:
            self.order = None
            self.table = None
        elif kind == self.TABLE:
            t = np.asarray(table, dtype=np.int64)
            _validate_table(t)
            t.setflags(write=False)
            self.table = t
            self.order = len(t)
            self._inv = np.argmax(t == 0, axis=1)
        else:
            raise InputError(f"unknown group kind {kind!r}")

    @classmethod
    def cyclic(cls, n: int) -> "GroupSpec":
        return cls(cls.CYCLIC, n)

    @classmethod
    def infinite(cls) -> "GroupSpec":
        return cls(cls.INFINITE)

    @classmethod
    def from_table(cls, table) -> "GroupSpec":
        return cls(cls.TABLE, table=table)

    @classmethod
    def from_json(cls, obj) -> "GroupSpec":
        if isinstance(obj, str):
            s = obj.replace(" ", "")
            if s == "Z":
                return cls.infinite()
            if s.startswith("Z/"):
                try:
                    return cls.cyclic(int(s[2:]))
                except ValueError:
                    pass
            raise InputError(f"unrecognised group {obj!r}")
        if isinstance(obj, dict) and "table" in obj:
            return cls.from_table(obj["table"])
        raise InputError(f"unrecognised group {obj!r}")

    def to_json(self):
        if self.kind == self.CYCLIC:
            return f"Z/{self.order}"
        if self.kind == self.INFINITE:
            return "Z"
        return {"table": self.table.tolist()}

    def __repr__(self):
        return f"GroupSpec({self.to_json()!r})" if self.kind != self.TABLE else f"GroupSpec(table, order={self.order})"

    def __eq__(self, other):
        if not isinstance(other, GroupSpec) or self.kind != other.kind or self.order != other.order:
            return False
        return self.table is None or bool((self.table == other.table).all())

    def __hash__(self):
        return hash((self.kind, self.order))

    @property
    def finite(self) -> bool:
        return self.order is not None

    identity = 0

    def mul(self, a: int, b: int) -> int:
        if self.kind == self.CYCLIC:
            return (a + b) % self.order
        if self.kind == self.INFINITE:
            return a + b
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        if self.kind == self.CYCLIC:
            return (-a) % self.order
        if self.kind == self.INFINITE:
            return -a
        return int(self._inv[a])

    def check_element(self, a) -> int:
        if isinstance(a, bool) or not isinstance(a, (int, np.integer)):
            raise InputError(f"group element must be an integer, got {a!r}")
        a = int(a)
        if self.finite and not 0 <= a < self.order:
            raise InputError(f"element {a} out of range for a group of order {self.order}")
        return a

    def elements(self) -> list:
        if not self.finite:
            raise InputError("the infinite cyclic group has no finite element list")
        return list(range(self.order))

    def nontrivial(self) -> list:
        return self.elements()[1:]

    def key(self, a: int) -> int:
        """Sort key: element index for finite groups; ``1, -1, 2, -2, ...`` for the integers."""
        if self.kind == self.INFINITE:
            return 2 * abs(a) - (a > 0)
        return a

    def element_order(self, a: int) -> int | None:
        if not self.finite:
            return None if a else 1
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def multiplication_table(self) -> np.ndarray:
        if self.table is not None:
            return self.table
        n = self.order
        if n is None:
            raise InputError("infinite group has no multiplication table")
        i = np.arange(n)
        return (i[:, None] + i[None, :]) % n


def _validate_table(t: np.ndarray) -> None:
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] < 2:
        raise InputError("group table must be square with at least two rows")
    n = len(t)
    if t.min() < 0 or t.max() >= n:
        raise InputError("group table entries out of range")
    idx = np.arange(n)
    if not ((t[0] == idx).all() and (t[:, 0] == idx).all()):
        raise InputError("element 0 must be the identity of the group table")
    for row in t:
        if len(set(row.tolist())) != n:
            raise InputError("group table rows must be permutations (inverses/cancellation fail)")
    for col in t.T:
        if len(set(col.tolist())) != n:
            raise InputError("group table columns must be permutations")
    # (ab)c == a(bc) for all triples, vectorised
    left = t[t[:, :, None], idx[None, None, :]]
    right = t[idx[:, None, None], t[None, :, :]]
    if not (left == right).all():
        raise InputError("group table is not associative")


def find_isomorphism(t1, t2) -> dict | None:
    """An isomorphism between two finite groups given by tables, or None.

    Backtracking over images of a greedily chosen generating set, pruned by
    element orders; adequate for the small groups arising here.
    """
    t1 = np.asarray(t1)
    t2 = np.asarray(t2)
    n = len(t1)
    if n != len(t2):
        return None

    def orders(t):
        out = []
        for a in range(len(t)):
            k, x = 1, a
            while x != 0:
                x = int(t[x, a])
                k += 1
            out.append(k)
        return out

    o1, o2 = orders(t1), orders(t2)
    if sorted(o1) != sorted(o2):
        return None

    def closure(gens, t):
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for gidx in gens:
                    y = int(t[x, gidx])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen

    gens = []
    span = {0}
    for a in sorted(range(n), key=lambda a: -o1[a]):
        if a not in span:
            gens.append(a)
            span = closure(gens, t1)
        if len(span) == n:
            break

    # words expressing each element of G1 in the generators, via BFS
    word = {0: ()}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for i, gidx in enumerate(gens):
                y = int(t1[x, gidx])
                if y not in word:
                    word[y] = word[x] + (i,)
                    nxt.append(y)
        frontier = nxt

    candidates = [[b for b in range(n) if o2[b] == o1[a]] for a in gens]
    for images in product(*candidates):
        phi = {}
        for x, w in word.items():
            y = 0
            for i in w:
                y = int(t2[y, images[i]])
            phi[x] = y
        if len(set(phi.values())) != n:
            continue
        if all(phi[int(t1[a, b])] == int(t2[phi[a], phi[b]]) for a in range(n) for b in range(n)):
            return phi
    return None


def groups_isomorphic(g1: GroupSpec, g2: GroupSpec) -> bool:
    if g1.finite != g2.finite:
        return False
    if not g1.finite:
        return True
    return find_isomorphism(g1.multiplication_table(), g2.multiplication_table()) is not None
