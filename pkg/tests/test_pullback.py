from random import Random

import pytest

from gogroups.backends import FiniteGroup, FreeGroup
from gogroups.gog import APath, apaths_equal, reduce_apath
from gogroups.library import (bs_gog, nofgip_gog, rose_gog, word_apath)
from gogroups.morphism import identity_morphism, is_immersion, realize_subgroup
from gogroups.pullback import AProductFragment, build_product
from gogroups.words import parse_word, winv, wmul, wreduce


def nofgip_immersions():
    A = nofgip_gog()
    a1 = APath(A, 0, [(1, 0)], [])
    ehat = APath(A, 0, [(0, 0), (0, 0)], [0])
    ehat_a2 = APath(A, 0, [(0, 0), (0, 1)], [0])
    mC, _ = realize_subgroup(A, 0, [a1, ehat])
    mB, _ = realize_subgroup(A, 0, [a1, ehat_a2])
    return A, mB, mC


def test_base_vertex_trivial_groups():
    A = rose_gog(2)
    m = identity_morphism(A)
    frag = AProductFragment(m, m)
    frag.add_base()
    assert frag.vertices[0].witness == 0
    assert frag.vertices[0].key() == (0, 0, 0)


def test_identity_product_of_finite_gog():
    # B = C = identity of a finite-group gog: completes with one vertex per
    # vertex of A carrying the full group
    from gogroups.library import free_product_of_finite_gog
    t2 = [[0, 1], [1, 0]]
    t3 = [[(i + j) % 3 for j in range(3)] for i in range(3)]
    A = free_product_of_finite_gog(t2, t3)
    m = identity_morphism(A)
    frag = build_product(m, m, budget=64)
    assert frag.complete
    assert len(frag.vertices) == 2
    for i in range(2):
        D = frag.vertex_group(i)
        assert D.order() == A.vgroups[frag.vertices[i].v].order()


def test_nofgip_ray_prefix():
    A, mB, mC = nofgip_immersions()
    frag = build_product(mC, mB, budget=8)
    assert not frag.complete
    base_idxs = frag.base_component_indices()
    wits = [frag.vertices[i].witness for i in base_idxs[:4]]
    assert wits == [(0, 0), (0, 1), (0, 3), (0, 7)]
    for i in base_idxs:
        D = frag.vertex_group(i)
        assert D.gens == ((1, 0),)
    for j in range(min(3, len(frag.edges))):
        E = frag.edge_group(j)
        assert E.gens == ((1, 0),)


def test_nofgip_never_completes():
    A, mB, mC = nofgip_immersions()
    for budget in (8, 16, 32, 64):
        frag = build_product(mC, mB, budget=budget)
        assert not frag.complete
        assert len(frag.vertices) >= budget


def test_nofgip_ray_certificate_fires():
    A, mB, mC = nofgip_immersions()
    frag = build_product(mC, mB, budget=8)
    cert = frag.ray_certificate()
    assert cert is not None
    assert cert["verdict"] == "provably infinite ascending union"
    assert cert["ascent"] >= 2


def test_nofgip_generators_are_conjugated_roots():
    A, mB, mC = nofgip_immersions()
    frag = build_product(mC, mB, budget=5)
    gens, exact = frag.intersection_generators()
    assert not exact
    # expected: e^i a1 e^-i for i = 0..4
    for i, g in enumerate(gens):
        expect_elems = [(0, 0)] * i + [(1, 0)] + [(0, 0)] * i
        expect_edges = [0] * i + [1] * i
        expected = APath(A, 0, expect_elems, expect_edges)
        assert apaths_equal(g, expected)


def test_nofgip_component_labels_share_one_class():
    A, mB, mC = nofgip_immersions()
    frag = build_product(mC, mB, budget=6)
    base = frag.component_label(0)
    for i in frag.base_component_indices()[1:]:
        lab = frag.component_label(i)
        assert lab.base == base.base and lab.end == base.end


def test_incidence_witness_independence():
    # replacing an edge representative by b.rep.c gives the same endpoints
    A, mB, mC = nofgip_immersions()
    frag = build_product(mC, mB, budget=4)
    h = frag.edges[0]
    Ge = A.egroups[0]
    E1 = frag.m1.edge_image_handle(h.f >> 1)
    E2 = frag.m2.edge_image_handle(h.g >> 1)
    rng = Random(71)
    for _ in range(10):
        b = E1.gens[0] if E1.gens else Ge.identity()
        c = E2.gens[0] if E2.gens else Ge.identity()
        coeff_b = rng.randint(-2, 2)
        coeff_c = rng.randint(-2, 2)
        moved = Ge.mul(Ge.mul(tuple(coeff_b * x for x in b), h.rep),
                       tuple(coeff_c * x for x in c))
        assert Ge.dc_eq(E1, h.rep, E2, moved)
        # o and t witnesses agree after canonicalization
        e = frag.m1.edge_image(h.f)
        u = A.graph.o(e)
        Au = A.vgroups[u]
        f_a = frag.m1.twist_alpha(h.f)
        g_a = frag.m2.twist_alpha(h.g)
        o1 = Au.mul(Au.mul(f_a, A.alpha(e).apply(h.rep)), Au.inv(g_a))
        o2 = Au.mul(Au.mul(f_a, A.alpha(e).apply(moved)), Au.inv(g_a))
        H = frag._sub1(frag.vertices[h.src].v)
        K = frag._sub2(frag.vertices[h.src].w)
        assert Au.dc_canon(H, o1, K) == Au.dc_canon(H, o2, K)


def stallings_roundtrip(rng, words_h, words_k, budget=4000):
    """Pullback of two trivial-group immersions vs the Stallings intersection."""
    A = rose_gog(2)
    F = FreeGroup(2)
    mH, bH = realize_subgroup(A, 0, [word_apath(A, w) for w in words_h])
    mK, bK = realize_subgroup(A, 0, [word_apath(A, w) for w in words_k])
    frag = build_product(mH, mK, budget=budget)
    assert frag.complete
    gens, exact = frag.intersection_generators()
    assert exact
    gen_words = []
    for p in gens:
        word = []
        for e in p.edges:
            word.append((e >> 1) + 1 if e & 1 == 0 else -((e >> 1) + 1))
        gen_words.append(wreduce(tuple(word)))
    got = F.subgroup(gen_words)
    expect = F.subgroup(words_h).intersect(F.subgroup(words_k))
    assert got.equals(expect)
    return got, expect


def test_stallings_oracle_basic():
    rng = Random(72)
    stallings_roundtrip(rng, [parse_word("a")], [parse_word("aa")])
    stallings_roundtrip(rng, [parse_word("a"), parse_word("baB")],
                        [parse_word("b"), parse_word("abA")])
    stallings_roundtrip(rng, [parse_word("ab"), parse_word("ba")],
                        [parse_word("aab"), parse_word("b")])


def test_stallings_oracle_random():
    rng = Random(73)
    for _ in range(30):
        words_h = [wreduce(tuple(rng.choice([1, -1, 2, -2])
                                 for _ in range(rng.randint(1, 4))))
                   for _ in range(rng.randint(1, 3))]
        words_k = [wreduce(tuple(rng.choice([1, -1, 2, -2])
                                 for _ in range(rng.randint(1, 4))))
                   for _ in range(rng.randint(1, 3))]
        words_h = [w for w in words_h if w] or [(1,)]
        words_k = [w for w in words_k if w] or [(2,)]
        stallings_roundtrip(rng, words_h, words_k)


def test_structural_local_finiteness():
    # with abelian 1-FCIP data the fragment stays locally finite and branch
    # vertices do not multiply with the budget
    A, mB, mC = nofgip_immersions()
    for budget in (8, 24):
        frag = build_product(mC, mB, budget=budget)
        deg = frag.degree_stats()
        assert all(d <= 2 for d in deg.values())
        branch = [i for i, d in deg.items() if d >= 2]
        assert len(branch) <= 1


def test_bs12_self_intersection_completes():
    A = bs_gog(1, 2)
    a = APath(A, 0, [(1,)], [])
    ehat = APath(A, 0, [(0,), (0,)], [0])
    m, base = realize_subgroup(A, 0, [a, ehat])
    frag = build_product(m, m, budget=64)
    assert frag.complete
    gens, exact = frag.intersection_generators()
    assert exact
    # B cap B = B: membership of the defining generators
    from gogroups.morphism import trace_apath
    for g in gens:
        assert trace_apath(m, g, start=0)


def test_expand_empty_star_no_edges():
    # a source vertex with an empty star contributes no edges
    A = bs_gog(1, 2)
    a = APath(A, 0, [(1,)], [])
    m, base = realize_subgroup(A, 0, [a])     # single vertex, no edges
    frag = build_product(m, m, budget=8)
    assert frag.complete
    assert frag.edges == []
    assert len(frag.vertices) == 1
