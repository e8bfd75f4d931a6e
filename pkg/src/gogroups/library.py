"""Ready-made graphs of groups used across tests, docs and the CLI."""

from __future__ import annotations

from .backends import AbelianGroup, FiniteGroup, FreeGroup, Mono
from .gog import APath, GraphOfGroups
from .graphs import Graph


def bs_gog(m, n):
    """Single loop over Z: edge group Z embeds by x m and x n (BS(m, n))."""
    if m == 0 or n == 0:
        raise ValueError("multipliers must be nonzero")
    Z = AbelianGroup.Z()
    Ze = AbelianGroup.Z()
    graph = Graph(1, [(0, 0)], vnames=["u"], enames=["e"])
    alpha = Mono(Ze, Z, [(m,)])
    omega = Mono(Ze, Z, [(n,)])
    return GraphOfGroups(graph, [Z], [Ze], [(alpha, omega)])


def segment_z_gog(m, n):
    """Two Z vertices joined by one edge with maps x m and x n."""
    if m == 0 or n == 0:
        raise ValueError("multipliers must be nonzero")
    Za, Zb, Ze = AbelianGroup.Z(), AbelianGroup.Z(), AbelianGroup.Z()
    graph = Graph(2, [(0, 1)], vnames=["u", "v"], enames=["e"])
    return GraphOfGroups(graph, [Za, Zb], [Ze],
                         [(Mono(Ze, Za, [(m,)]), Mono(Ze, Zb, [(n,)]))])


def klein_amalgam_gog():
    """Z *_{2Z = 2Z} Z: the (2,2) single-edge form."""
    return segment_z_gog(2, 2)


def nofgip_gog():
    """Single vertex Z^2 = <a1, a2>, loop with edge group Z^2 = <b1, b2>,
    alpha(bi) = ai, omega(bi) = ai^2."""
    V = AbelianGroup(2)
    E = AbelianGroup(2)
    graph = Graph(1, [(0, 0)], vnames=["u"], enames=["e"])
    alpha = Mono(E, V, [(1, 0), (0, 1)])
    omega = Mono(E, V, [(2, 0), (0, 2)])
    return GraphOfGroups(graph, [V], [E], [(alpha, omega)])


def rose_gog(petals):
    """One trivial vertex group, `petals` loops with trivial edge groups;
    the fundamental group is free of rank `petals`."""
    T = FiniteGroup.trivial()
    graph = Graph(1, [(0, 0) for _ in range(petals)],
                  vnames=["u"], enames=[f"e{i}" for i in range(petals)])
    egroups = [FiniteGroup.trivial() for _ in range(petals)]
    monos = [(Mono(egroups[i], T, []), Mono(egroups[i], T, [])) for i in range(petals)]
    return GraphOfGroups(graph, [T], egroups, monos)


def free_double_gog(alpha_word, omega_word, rank1=2, rank2=2):
    """Two free vertex groups joined along a cyclic edge group: the edge
    generator maps to alpha_word on one side and omega_word on the other."""
    F1 = FreeGroup(rank1)
    F2 = FreeGroup(rank2)
    Ze = FreeGroup(1)
    graph = Graph(2, [(0, 1)], vnames=["u", "v"], enames=["e"])
    alpha = Mono(Ze, F1, [alpha_word])
    omega = Mono(Ze, F2, [omega_word])
    return GraphOfGroups(graph, [F1, F2], [Ze], [(alpha, omega)])


def free_hnn_gog(alpha_word, omega_word, rank=2):
    """One free vertex group, a loop with cyclic edge group."""
    F = FreeGroup(rank)
    Ze = FreeGroup(1)
    graph = Graph(1, [(0, 0)], vnames=["u"], enames=["e"])
    return GraphOfGroups(graph, [F], [Ze],
                         [(Mono(Ze, F, [alpha_word]), Mono(Ze, F, [omega_word]))])


def free_product_of_finite_gog(table1, table2):
    """Two finite vertex groups joined by a trivial edge group."""
    G1 = FiniteGroup(table1)
    G2 = FiniteGroup(table2)
    T = FiniteGroup.trivial()
    graph = Graph(2, [(0, 1)], vnames=["u", "v"], enames=["e"])
    return GraphOfGroups(graph, [G1, G2], [T],
                         [(Mono(T, G1, []), Mono(T, G2, []))])


def word_apath(gog, word):
    """Closed A-path over a rose_gog spelling a free-group word.

    Letters i / -i traverse loop pair i-1 positively / negatively."""
    T = gog.vgroups[0]
    edges = []
    for x in word:
        pair = abs(x) - 1
        edges.append(2 * pair if x > 0 else 2 * pair + 1)
    elems = [T.identity()] * (len(edges) + 1)
    return APath(gog, 0, elems, edges)
