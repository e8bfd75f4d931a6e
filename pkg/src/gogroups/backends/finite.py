"""Finite groups given by a multiplication table."""

from __future__ import annotations

from collections import deque


class FiniteSubgroup:
    __slots__ = ("group", "gens", "elts")

    def __init__(self, group, gens, elts):
        self.group = group
        self.gens = tuple(gens)
        self.elts = frozenset(elts)

    def __repr__(self):
        return f"FiniteSubgroup(order={len(self.elts)})"

    def contains(self, x):
        return x in self.elts

    def is_trivial(self):
        return len(self.elts) == 1

    def order(self):
        return len(self.elts)

    def index(self):
        return self.group.order() // len(self.elts)

    def index_in(self, sup):
        return len(sup.elts) // len(self.elts)

    def intersect(self, other):
        common = self.elts & other.elts
        return FiniteSubgroup(self.group, sorted(common), common)

    def join(self, other):
        return self.group.subgroup(sorted(self.elts | other.elts))

    def conjugate(self, g):
        G = self.group
        gi = G.inv(g)
        elts = {G.mul(G.mul(gi, x), g) for x in self.elts}
        return FiniteSubgroup(self.group, [G.mul(G.mul(gi, x), g) for x in self.gens], elts)

    def equals(self, other):
        return self.elts == other.elts

    def decompose(self, x):
        word = self.group.express(x, list(self.gens))
        if word is None:
            raise ValueError("element not in subgroup")
        return word

    def elements(self):
        return sorted(self.elts)


class FiniteGroup:
    kind = "finite"

    def __init__(self, table):
        n = len(table)
        if n == 0 or any(len(row) != n for row in table):
            raise ValueError("multiplication table must be square and non-empty")
        for row in table:
            if sorted(row) != list(range(n)):
                raise ValueError("table rows must be permutations of 0..n-1")
        for j in range(n):
            if sorted(table[i][j] for i in range(n)) != list(range(n)):
                raise ValueError("table columns must be permutations of 0..n-1")
        ident = None
        for e in range(n):
            if all(table[e][x] == x and table[x][e] == x for x in range(n)):
                ident = e
                break
        if ident is None:
            raise ValueError("table has no identity element")
        if n <= 64:
            for a in range(n):
                for b in range(n):
                    for c in range(n):
                        if table[table[a][b]][c] != table[a][table[b][c]]:
                            raise ValueError("table is not associative")
        self.table = [list(row) for row in table]
        self.n = n
        self.e = ident
        self._inv = [None] * n
        for a in range(n):
            for b in range(n):
                if table[a][b] == ident:
                    self._inv[a] = b
        if any(v is None for v in self._inv):
            raise ValueError("table has non-invertible elements")
        self._gens = self._greedy_generators()
        self._words = None

    @classmethod
    def trivial(cls):
        return cls([[0]])

    @classmethod
    def cyclic(cls, n):
        return cls([[(i + j) % n for j in range(n)] for i in range(n)])

    def __repr__(self):
        return f"FiniteGroup(order={self.n})"

    def describe(self):
        return f"finite group of order {self.n}"

    def _greedy_generators(self):
        if self.n == 1:
            return []
        gens = []
        closed = {self.e}
        for x in range(self.n):
            if x in closed:
                continue
            gens.append(x)
            closed = self._closure(gens)
            if len(closed) == self.n:
                break
        return gens

    def _closure(self, gens):
        seen = {self.e}
        queue = deque([self.e])
        gset = list(gens) + [self._inv[g] for g in gens]
        while queue:
            x = queue.popleft()
            for g in gset:
                y = self.table[x][g]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    # --- element protocol ---

    def identity(self):
        return self.e

    def mul(self, x, y):
        return self.table[x][y]

    def inv(self, x):
        return self._inv[x]

    def eq(self, x, y):
        return x == y

    def is_element(self, x):
        return isinstance(x, int) and 0 <= x < self.n

    def order(self):
        return self.n

    def generators(self):
        return list(self._gens)

    def decompose(self, x):
        if self._words is None:
            self._words = {self.e: []}
            queue = deque([self.e])
            while queue:
                y = queue.popleft()
                for i, g in enumerate(self._gens):
                    for s, z in ((i + 1, self.table[y][g]), (-(i + 1), self.table[y][self._inv[g]])):
                        if z not in self._words:
                            self._words[z] = self._words[y] + [s]
                            queue.append(z)
        return [(abs(s) - 1, 1 if s > 0 else -1) for s in self._words[x]]

    def serialize(self, x):
        return x

    def parse(self, obj):
        if not self.is_element(obj):
            raise ValueError(f"bad finite group element {obj!r}")
        return obj

    # --- subgroups ---

    def subgroup(self, gens):
        gens = [self.parse(g) if not self.is_element(g) else g for g in gens]
        elts = self._closure(gens)
        return FiniteSubgroup(self, gens, elts)

    def trivial_subgroup(self):
        return FiniteSubgroup(self, [], {self.e})

    def full_subgroup(self):
        return self.subgroup(self._gens)

    def express(self, target, gens):
        """BFS word over `gens` as (index, exponent) pairs, or None."""
        if target == self.e:
            return []
        seen = {self.e: []}
        queue = deque([self.e])
        while queue:
            x = queue.popleft()
            for i, g in enumerate(gens):
                for s, y in ((1, self.table[x][g]), (-1, self.table[x][self._inv[g]])):
                    if y not in seen:
                        seen[y] = seen[x] + [(i, s)]
                        if y == target:
                            return seen[y]
                        queue.append(y)
        return None

    # --- cosets ---

    def dc_set(self, H, g, K):
        return {self.mul(self.mul(h, g), k) for h in H.elts for k in K.elts}

    def dc_canon(self, H, g, K):
        return min(self.dc_set(H, g, K))

    def dc_eq(self, H, g, K, g2):
        return g2 in self.dc_set(H, g, K)

    def dc_factor(self, H, w, K, target):
        for h in H.elts:
            for k in K.elts:
                if self.mul(self.mul(h, w), k) == target:
                    return h, k
        raise ValueError("target not in the double coset")

    def coset_canon(self, H, g):
        return min(self.mul(g, h) for h in H.elts)

    # --- mono support ---

    def mono_injective(self, images, codomain):
        img = codomain.subgroup(images)
        return img.order() == self.n

    def sub_mono_injective(self, handle, images, codomain):
        img = codomain.subgroup(images)
        return img.order() == handle.order()
