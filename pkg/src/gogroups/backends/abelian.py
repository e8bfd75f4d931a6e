"""Finitely generated abelian groups Z^r x Z/d1 x ... x Z/ds.

Elements are integer tuples of length r + s with torsion coordinates kept
reduced.  Subgroups are full preimage lattices (always containing the
torsion relation lattice) in canonical Hermite normal form, which makes
handles unique per subgroup.
"""

from __future__ import annotations

from ..intlattice import Lattice, lin_solve, preimage_lattice


class AbelianSubgroup:
    __slots__ = ("group", "gens", "lat")

    def __init__(self, group, gens, lat):
        self.group = group
        self.gens = tuple(gens)
        self.lat = lat

    def __repr__(self):
        return f"AbelianSubgroup(rows={[list(r) for r in self.lat.rows]})"

    def contains(self, x):
        return self.lat.contains(x)

    def is_trivial(self):
        return self.lat == self.group.L0

    def order(self):
        return self.group.L0.index_in(self.lat)

    def index(self):
        return self.lat.index_in(self.group.FULL)

    def index_in(self, sup):
        return self.lat.index_in(sup.lat)

    def intersect(self, other):
        lat = self.lat.intersect(other.lat)
        return AbelianSubgroup(self.group, self.group.gens_of(lat), lat)

    def join(self, other):
        lat = self.lat.sum(other.lat)
        return AbelianSubgroup(self.group, self.group.gens_of(lat), lat)

    def conjugate(self, g):
        return self

    def equals(self, other):
        return self.lat == other.lat

    def decompose(self, x):
        if not self.gens:
            if any(x):
                raise ValueError("element not in subgroup")
            return []
        rows = [list(g) for g in self.gens] + [list(r) for r in self.group.L0.rows]
        sol = lin_solve(rows, list(x))
        if sol is None:
            raise ValueError("element not in subgroup")
        return [(i, sol[i]) for i in range(len(self.gens)) if sol[i]]

    def invariants(self):
        """(free_rank, [torsion divisors]) of the subgroup as a group."""
        return self.group.L0.quotient_invariants(self.lat)


class AbelianGroup:
    kind = "abelian"

    def __init__(self, rank, torsion=()):
        torsion = list(torsion)
        if any(d < 2 for d in torsion):
            raise ValueError("torsion invariant factors must be >= 2")
        for a, b in zip(torsion, torsion[1:]):
            if b % a:
                raise ValueError("invariant factors must form a divisor chain")
        self.rank = rank
        self.torsion = torsion
        self.n = rank + len(torsion)
        rows = []
        for i, d in enumerate(torsion):
            row = [0] * self.n
            row[rank + i] = d
            rows.append(row)
        self.L0 = Lattice(self.n, rows)
        self.FULL = Lattice(self.n, [[1 if i == j else 0 for j in range(self.n)]
                                     for i in range(self.n)])

    @classmethod
    def Z(cls):
        return cls(1)

    def __repr__(self):
        return f"AbelianGroup(rank={self.rank}, torsion={self.torsion})"

    def describe(self):
        parts = ["Z"] * self.rank + [f"Z/{d}" for d in self.torsion]
        return " x ".join(parts) if parts else "trivial abelian group"

    def canon(self, vec):
        return self.L0.coset_canon(vec) if self.torsion else tuple(vec)

    # --- element protocol ---

    def identity(self):
        return tuple([0] * self.n)

    def mul(self, x, y):
        return self.canon(tuple(a + b for a, b in zip(x, y)))

    def inv(self, x):
        return self.canon(tuple(-a for a in x))

    def eq(self, x, y):
        return x == y

    def is_element(self, x):
        return isinstance(x, tuple) and len(x) == self.n and all(isinstance(a, int) for a in x)

    def order(self):
        if self.rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def generators(self):
        return [tuple(1 if j == i else 0 for j in range(self.n)) for i in range(self.n)]

    def decompose(self, x):
        return [(i, c) for i, c in enumerate(x) if c]

    def serialize(self, x):
        if self.n == 1:
            return x[0]
        return list(x)

    def parse(self, obj):
        if isinstance(obj, int) and self.n == 1:
            return self.canon((obj,))
        if isinstance(obj, (list, tuple)) and len(obj) == self.n and all(isinstance(a, int) for a in obj):
            return self.canon(tuple(obj))
        raise ValueError(f"bad abelian element {obj!r} for {self.describe()}")

    # --- subgroups ---

    def gens_of(self, lat):
        """Generators of the subgroup lat/L0 (drop pure relation rows)."""
        return [self.canon(r) for r in lat.rows if not self.L0.contains(r)]

    def subgroup(self, gens):
        gens = [self.parse(g) if not self.is_element(g) else g for g in gens]
        lat = Lattice(self.n, [list(g) for g in gens] + [list(r) for r in self.L0.rows])
        return AbelianSubgroup(self, gens, lat)

    def trivial_subgroup(self):
        return AbelianSubgroup(self, [], self.L0)

    def full_subgroup(self):
        return AbelianSubgroup(self, self.generators(), self.FULL)

    def express(self, target, gens):
        if not gens:
            return [] if not any(target) else None
        rows = [list(g) for g in gens] + [list(r) for r in self.L0.rows]
        sol = lin_solve(rows, list(target))
        if sol is None:
            return None
        return [(i, sol[i]) for i in range(len(gens)) if sol[i]]

    # --- cosets (double cosets collapse to cosets of H + K) ---

    def dc_canon(self, H, g, K):
        return H.lat.sum(K.lat).coset_canon(g)

    def dc_eq(self, H, g, K, g2):
        s = H.lat.sum(K.lat)
        return s.coset_canon(g) == s.coset_canon(g2)

    def dc_factor(self, H, w, K, target):
        diff = [a - b for a, b in zip(target, w)]
        rows = [list(r) for r in H.lat.rows] + [list(r) for r in K.lat.rows]
        if not rows:
            if any(diff):
                raise ValueError("target not in the double coset")
            return self.identity(), self.identity()
        sol = lin_solve(rows, diff)
        if sol is None:
            raise ValueError("target not in the double coset")
        h = [0] * self.n
        for i in range(len(H.lat.rows)):
            if sol[i]:
                for k in range(self.n):
                    h[k] += sol[i] * H.lat.rows[i][k]
        k = [d - a for d, a in zip(diff, h)]
        return self.canon(tuple(h)), self.canon(tuple(k))

    def coset_canon(self, H, g):
        return H.lat.coset_canon(g)

    # --- mono support ---

    def mono_matrix(self, images):
        return [list(img) for img in images]

    @staticmethod
    def _ambient_relations(backend):
        return backend.L0 if hasattr(backend, "L0") else backend.ambient.L0

    def mono_well_defined(self, images, codomain):
        """Torsion generators must map to elements killed by their order."""
        cod_L0 = self._ambient_relations(codomain)
        for i, d in enumerate(self.torsion):
            img = images[self.rank + i]
            scaled = tuple(d * a for a in img)
            if not cod_L0.contains(scaled):
                return False
        return True

    def mono_injective(self, images, codomain):
        if not self.mono_well_defined(images, codomain):
            return False
        M = self.mono_matrix(images)
        ker = preimage_lattice(M, self.n, self._ambient_relations(codomain))
        return ker == self.L0

    def sub_mono_injective(self, handle, images, codomain):
        # Relations among the images (in coefficient space) must match the
        # relations among the domain generators exactly: the mono is then
        # well-defined and injective.
        k = len(handle.gens)
        if k == 0:
            return True
        M_img = [list(img) for img in images]
        ker_img = preimage_lattice(M_img, k, self._ambient_relations(codomain))
        M_dom = [list(g) for g in handle.gens]
        ker_dom = preimage_lattice(M_dom, k, self.L0)
        return ker_img == ker_dom
