"""Shared backend plumbing: the group-backend contract, generic monomorphisms
and the wrapper that presents a subgroup handle as a group backend.

A group backend is duck-typed.  Required surface (G a backend, x, y elements,
H, K subgroup handles):

  G.kind                       "finite" | "abelian" | "free"
  G.identity(); G.mul(x, y); G.inv(x); G.eq(x, y)   (elements are hashable,
                               kept in canonical form so == is equality)
  G.order()                    int or None (infinite)
  G.generators()               canonical generating list (file formats and
                               monomorphism image lists follow this order)
  G.decompose(x)               word [(gen_index, exponent), ...] over generators()
  G.subgroup(gens) / G.trivial_subgroup() / G.full_subgroup()
  G.express(target, gens)      constructive membership: word over `gens`
                               (list of signed 1-based indices) or None
  G.dc_canon(H, g, K)          canonical witness of the double coset H g K
  G.dc_eq(H, g, K, g2)
  G.dc_factor(H, w, K, target) (h, k) with target == h * w * k
  G.coset_canon(H, g)          canonical representative of the left coset g H
  G.serialize(x) / G.parse(obj)

Subgroup handles expose: .group, .gens, contains, is_trivial, order, index
([G:H], None when infinite), index_in(sup), intersect, join, conjugate,
equals, decompose (word over .gens).
"""

from __future__ import annotations


INF = None  # infinite index/order is represented by None throughout


def power(backend, x, n):
    """x^n by repeated squaring over the backend's multiplication."""
    if n == 0:
        return backend.identity()
    if n < 0:
        return power(backend, backend.inv(x), -n)
    acc = backend.identity()
    sq = x
    while n:
        if n & 1:
            acc = backend.mul(acc, sq)
        n >>= 1
        if n:
            sq = backend.mul(sq, sq)
    return acc


def evaluate_word(backend, items, word):
    """Multiply out a word of (index, exponent) pairs over items."""
    acc = backend.identity()
    for i, e in word:
        acc = backend.mul(acc, power(backend, items[i], e))
    return acc


def signed_to_pairs(flat):
    """Signed 1-based index list -> (index, exponent) pairs."""
    return [(abs(s) - 1, 1 if s > 0 else -1) for s in flat]


class Mono:
    """A homomorphism given by images of the domain's generators().

    Injectivity is a property checked on demand; the class itself does not
    promise it (validators do).
    """

    def __init__(self, domain, codomain, images):
        images = [codomain.parse(x) if not codomain.is_element(x) else x for x in images]
        if len(images) != len(domain.generators()):
            raise ValueError(
                f"expected {len(domain.generators())} generator images, got {len(images)}"
            )
        self.domain = domain
        self.codomain = codomain
        self.images = list(images)
        self._image_handle = None

    def apply(self, x):
        return evaluate_word(self.codomain, self.images, self.domain.decompose(x))

    def image(self):
        if self._image_handle is None:
            self._image_handle = self.codomain.subgroup(self.images)
        return self._image_handle

    def is_injective(self):
        return self.domain.mono_injective(self.images, self.codomain)

    def index_of_image(self):
        """Index of the image in the codomain group."""
        if isinstance(self.codomain, SubgroupBackend):
            return self.image().index_in(self.codomain.handle)
        return self.image().index()

    def is_iso(self):
        return self.is_injective() and self.index_of_image() == 1

    def preimage_elt(self, y):
        word = self.codomain.express(y, self.images)
        if word is None:
            raise ValueError("element not in the image")
        return evaluate_word(self.domain, self.domain.generators(), word)

    def preimage_sub(self, handle):
        """Preimage of a codomain subgroup, as a domain subgroup handle."""
        restricted = handle.intersect(self.image())
        gens = []
        for g in restricted.gens:
            gens.append(self.preimage_elt(g))
        return self.domain.subgroup(gens)

    def inverse(self):
        if not self.is_iso():
            raise ValueError("not an isomorphism")
        return Mono(self.codomain, self.domain,
                    [self.preimage_elt(g) for g in self.codomain.generators()])

    def compose(self, inner):
        """self o inner."""
        return Mono(inner.domain, self.codomain, [self.apply(x) for x in inner.images])

    def apply_subgroup(self, handle):
        return self.codomain.subgroup([self.apply(g) for g in handle.gens])


class SubgroupBackend:
    """Presents a subgroup handle as a group backend of its own.

    Elements stay in ambient form; generators() is the handle's generator
    list.  Used for the vertex/edge groups of constructed graphs of groups.
    """

    def __init__(self, ambient, handle):
        self.ambient = ambient
        self.handle = handle
        self.kind = ambient.kind

    def __repr__(self):
        return f"SubgroupBackend({self.ambient!r}, gens={list(self.handle.gens)})"

    def identity(self):
        return self.ambient.identity()

    def mul(self, x, y):
        return self.ambient.mul(x, y)

    def inv(self, x):
        return self.ambient.inv(x)

    def eq(self, x, y):
        return self.ambient.eq(x, y)

    def is_element(self, x):
        return self.ambient.is_element(x)

    def order(self):
        return self.handle.order()

    def generators(self):
        return list(self.handle.gens)

    def decompose(self, x):
        return self.handle.decompose(x)

    def subgroup(self, gens):
        return self.ambient.subgroup(gens)

    def trivial_subgroup(self):
        return self.ambient.trivial_subgroup()

    def full_subgroup(self):
        return self.handle

    def express(self, target, gens):
        return self.ambient.express(target, gens)

    def dc_canon(self, H, g, K):
        return self.ambient.dc_canon(H, g, K)

    def dc_eq(self, H, g, K, g2):
        return self.ambient.dc_eq(H, g, K, g2)

    def dc_factor(self, H, w, K, target):
        return self.ambient.dc_factor(H, w, K, target)

    def coset_canon(self, H, g):
        return self.ambient.coset_canon(H, g)

    def serialize(self, x):
        return self.ambient.serialize(x)

    def parse(self, obj):
        x = self.ambient.parse(obj)
        return x

    def mono_injective(self, images, codomain):
        return self.ambient.sub_mono_injective(self.handle, images, codomain)

    def describe(self):
        return f"subgroup of {self.ambient.describe()} on {len(self.handle.gens)} generators"
