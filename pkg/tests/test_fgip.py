import pytest

from gogroups.backends import AbelianGroup, FreeGroup, Mono
from gogroups.fgip import (DecoratedGraph, FgipVerdict, decide_components,
                           decide_fgip_free_cyclic, decide_fgip_gbs,
                           decide_fgip_vz, extract_decoration, fgip_certify,
                           reduce_decorated, w_construction)
from gogroups.gog import GraphOfGroups, validate_gog
from gogroups.graphs import Graph
from gogroups.library import (bs_gog, free_double_gog, free_hnn_gog,
                              free_product_of_finite_gog, klein_amalgam_gog,
                              nofgip_gog, segment_z_gog)


def deco(pairs, halves, nv=None):
    nv = nv if nv is not None else 1 + max((max(p) for p in pairs), default=0)
    g = Graph(nv, pairs)
    return DecoratedGraph(g, [h[0] for h in halves], [h[1] for h in halves])


def test_extract_decoration_bs():
    d = extract_decoration(bs_gog(2, 3))
    assert d.halves(0) == (2, 3)
    d = extract_decoration(bs_gog(-2, 3))
    assert d.halves(0) == (2, 3)
    d = extract_decoration(segment_z_gog(2, 2))
    assert d.halves(0) == (2, 2)


def test_reduce_decorated_segment():
    d = deco([(0, 1)], [(1, 5)], nv=2)
    r = reduce_decorated(d)
    assert r.graph.nv == 1 and r.graph.n_pairs == 0


def test_reduce_decorated_path_two_steps():
    d = deco([(0, 1), (1, 2)], [(1, 2), (1, 3)], nv=3)
    r = reduce_decorated(d)
    assert r.graph.nv == 1 and r.graph.n_pairs == 0


def test_reduce_decorated_keeps_bs23():
    d = deco([(0, 0)], [(2, 3)])
    r = reduce_decorated(d)
    assert r.graph.n_pairs == 1
    assert r.halves(0) == (2, 3)


def test_reduce_decorated_multiplicative_composition():
    # loop (1,2) at v, segment (1,3) from u to v: collapsing the segment
    # multiplies nothing on the loop (the collapsed vertex is u)
    d = deco([(0, 1), (1, 1)], [(1, 3), (1, 2)], nv=2)
    r = reduce_decorated(d)
    assert r.graph.nv == 1 and r.graph.n_pairs == 1
    assert r.halves(0) == (1, 2)
    # segment (1,3) out of u plus loop (1,2) at u: deleting u redirects the
    # loop and composes both its indices by 3
    d2 = deco([(0, 1), (0, 0)], [(1, 3), (1, 2)], nv=2)
    r2 = reduce_decorated(d2)
    assert r2.graph.nv == 1 and r2.graph.n_pairs == 1
    assert r2.halves(0) == (3, 6)


def test_subdivision_invariance():
    # subdividing the (m, n) edge then reducing is the identity on verdicts
    for m, n in [(1, 2), (2, 2), (2, 3), (3, 3)]:
        plain = deco([(0, 0 if (m, n)[0] else 0)], [(m, n)])
        plain = deco([(0, 0)], [(m, n)])
        sub = deco([(0, 1), (1, 0)], [(m, 1), (1, n)], nv=2)
        v1 = decide_components(plain)
        v2 = decide_components(sub)
        assert v1.answer == v2.answer


def test_three_forms_yes():
    assert decide_fgip_vz(deco([], [], nv=1)).answer == "yes"
    assert decide_fgip_vz(deco([(0, 1)], [(2, 2)], nv=2)).answer == "yes"
    for k in (1, 2, 3):
        v = decide_fgip_vz(deco([(0, 0)], [(1, k)]))
        assert v.answer == "yes"
        assert "unit-side-loop" in v.certificate
    v = decide_fgip_vz(deco([(0, 0)], [(5, 1)]))
    assert v.answer == "yes"


def test_forbidden_configurations():
    v = decide_fgip_vz(deco([(0, 1)], [(2, 3)], nv=2))
    assert v.answer == "no" and "amalgam-edge-not-2-2" in v.certificate
    v = decide_fgip_vz(deco([(0, 0)], [(2, 2)]))
    assert v.answer == "no" and "loop-no-unit-side" in v.certificate
    # two (2,2) edges sharing a vertex
    v = decide_fgip_vz(deco([(0, 1), (1, 2)], [(2, 2), (2, 2)], nv=3))
    assert v.answer == "no" and "adjacent-2-2-edges" in v.certificate
    # parallel (2,2) edges
    v = decide_fgip_vz(deco([(0, 1), (0, 1)], [(2, 2), (2, 2)], nv=2))
    assert v.answer == "no" and "adjacent-2-2-edges" in v.certificate
    # two unit loops at one vertex
    v = decide_fgip_vz(deco([(0, 0), (0, 0)], [(1, 1), (1, 1)]))
    assert v.answer == "no" and "two-unit-loops-at-vertex" in v.certificate
    # (2,2)-edge meeting a (1,k)-loop
    v = decide_fgip_vz(deco([(0, 1), (1, 1)], [(2, 2), (1, 2)], nv=2))
    assert v.answer == "no" and "2-2-edge-with-unit-loop" in v.certificate


def test_verdict_configuration_is_present():
    # the named configuration can be re-checked by a pattern scan
    v = decide_fgip_vz(deco([(0, 1), (1, 1)], [(2, 2), (1, 2)], nv=2))
    assert "e0" in v.certificate and "e1" in v.certificate


def test_gbs_truth_table():
    yes = [bs_gog(1, 1), bs_gog(1, 2), bs_gog(1, 3), bs_gog(1, 5)]
    for A in yes:
        assert decide_fgip_gbs(A).answer == "yes"
    no = [bs_gog(2, 3), bs_gog(2, 2), bs_gog(3, 3)]
    for A in no:
        assert decide_fgip_gbs(A).answer == "no"
    # plain Z: a single vertex, no edges
    Z = AbelianGroup.Z()
    A = GraphOfGroups(Graph(1, [], vnames=["u"], enames=[]), [Z], [], [])
    assert decide_fgip_gbs(A).answer == "yes"


def test_klein_amalgam_yes():
    assert decide_fgip_gbs(klein_amalgam_gog()).answer == "yes"
    assert decide_fgip_gbs(segment_z_gog(2, 3)).answer == "no"


def test_w_construction_double_squares():
    A = free_double_gog("aa", "aa")
    W, d, book = w_construction(A)
    assert validate_gog(W) == []
    assert W.graph.nv == 2
    assert d.halves(0) == (2, 2)
    v = decide_fgip_free_cyclic(A)
    assert v.answer == "yes"


def test_w_construction_double_cubes():
    A = free_double_gog("aaa", "aaa")
    W, d, book = w_construction(A)
    assert d.halves(0) == (3, 3)
    assert decide_fgip_free_cyclic(A).answer == "no"


def test_w_construction_double_primitives():
    A = free_double_gog("ab", "ab")
    W, d, book = w_construction(A)
    assert d.halves(0) == (1, 1)
    assert decide_fgip_free_cyclic(A).answer == "yes"


def test_w_construction_mixed_roots():
    A = free_double_gog("aa", "aaa")
    W, d, book = w_construction(A)
    assert d.halves(0) == (2, 3)
    assert decide_fgip_free_cyclic(A).answer == "no"


def test_w_construction_hnn_loop():
    # loop alpha -> a^2, omega -> a^3: both halves share the commensurator <a>
    A = free_hnn_gog("aa", "aaa")
    W, d, book = w_construction(A)
    assert W.graph.nv == 1
    assert W.graph.n_pairs == 1
    assert d.halves(0) == (2, 3)
    assert decide_fgip_free_cyclic(A).answer == "no"
    # BS(1,2) as free data
    A = free_hnn_gog("a", "aa")
    assert decide_fgip_free_cyclic(A).answer == "yes"


def test_w_construction_distinct_classes():
    # two loops with alpha-images a^2 and b^3: distinct commensurator classes
    F = FreeGroup(2)
    Z1, Z2 = FreeGroup(1), FreeGroup(1)
    g = Graph(1, [(0, 0), (0, 0)], vnames=["u"], enames=["e1", "e2"])
    A = GraphOfGroups(g, [F], [Z1, Z2],
                      [(Mono(Z1, F, ["aa"]), Mono(Z1, F, ["aa"])),
                       (Mono(Z2, F, ["bbb"]), Mono(Z2, F, ["bbb"]))])
    W, d, book = w_construction(A)
    # classes: <a> (for e1 and its inverse) and <b> (for e2 and its inverse)
    assert W.graph.nv == 2
    assert decide_fgip_free_cyclic(A).answer == "no"


def test_w_construction_conjugate_roots_merge():
    # alpha-images ab and b.a.b^-1... use (ab)^2 and (ba)^2: roots ab and ba
    # are conjugate, so the two loops share one commensurator vertex
    F = FreeGroup(2)
    Z1, Z2 = FreeGroup(1), FreeGroup(1)
    g = Graph(1, [(0, 0), (0, 0)], vnames=["u"], enames=["e1", "e2"])
    A = GraphOfGroups(g, [F], [Z1, Z2],
                      [(Mono(Z1, F, ["abab"]), Mono(Z1, F, ["abab"])),
                       (Mono(Z2, F, ["baba"]), Mono(Z2, F, ["baba"]))])
    W, d, book = w_construction(A)
    assert W.graph.nv == 1


def test_pipeline_consistency_gbs_vs_free():
    # graphs presented both as Z-data and rank-1 free data agree
    for m, n, expect in [(1, 2, "yes"), (2, 3, "no"), (2, 2, "no"), (1, 1, "yes")]:
        z_route = decide_fgip_gbs(bs_gog(m, n)).answer
        free_route = decide_fgip_free_cyclic(free_hnn_gog("a" * m, "a" * n, rank=1)).answer
        assert z_route == free_route == expect


def test_fgip_certify_routes():
    t2 = [[0, 1], [1, 0]]
    t3 = [[(i + j) % 3 for j in range(3)] for i in range(3)]
    A = free_product_of_finite_gog(t2, t3)
    v = fgip_certify(A)
    assert v.answer == "yes"
    assert v.certificate == "finite-edge-groups-with-fgip-vertices"
    assert fgip_certify(bs_gog(1, 2)).answer == "yes"
    assert fgip_certify(bs_gog(2, 3)).answer == "no"
    assert fgip_certify(free_double_gog("aa", "aa")).answer == "yes"
    assert fgip_certify(nofgip_gog()).answer == "unknown"


def test_decide_rejects_unreduced():
    with pytest.raises(ValueError):
        decide_fgip_vz(deco([(0, 1)], [(1, 2)], nv=2))
    with pytest.raises(ValueError):
        decide_fgip_vz(deco([], [], nv=2))
