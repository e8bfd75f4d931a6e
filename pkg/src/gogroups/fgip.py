"""Deciders for the finitely generated intersection property.

Graphs of (virtually) Z groups are abstracted to index-decorated graphs and
decided by the reduced three-form test: after collapsing invertible non-loop
ends, the fundamental group has the property exactly when each component is
a single vertex, a single (2,2) edge, or a loop with an invertible side.
Negative verdicts name the forbidden sub-configuration that embeds a rank-2
free group crossed with Z.

Graphs of free groups with cyclic edge groups route through the graph of
commensurators: every edge-group image has a cyclic commensurator generated
by its primitive root, edges at a shared origin whose roots are conjugate
(up to inversion) get merged into one commensurator vertex, and the
resulting graph of Z groups is decided componentwise by the same test.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .backends import AbelianGroup, FreeGroup, Mono
from .gog import GraphOfGroups
from .graphs import Graph, einv
from .words import cyclic_conjugate, format_word, primitive_root, wconj, winv


INF = None


@dataclass
class DecoratedGraph:
    """Underlying graph plus per-half indices of the edge group images."""
    graph: Graph
    idx_alpha: list      # per pair: index at the origin side
    idx_omega: list      # per pair: index at the target side

    def index_of(self, e):
        return self.idx_alpha[e >> 1] if e & 1 == 0 else self.idx_omega[e >> 1]

    def iso_half(self, e):
        return self.index_of(e) == 1

    def halves(self, p):
        return (self.idx_alpha[p], self.idx_omega[p])


@dataclass
class FgipVerdict:
    answer: str                 # "yes" | "no" | "unknown"
    certificate: str
    components: list = field(default_factory=list)

    def lines(self):
        out = [f"certificate: {self.certificate}"]
        for c in self.components:
            out.append(f"component: {c}")
        out.append(f"VERDICT: {self.answer}")
        return out


def extract_decoration(A):
    """Decorated graph of a gog whose vertex groups support index queries.

    Every edge map's image index must be computable (for Z data this is the
    absolute multiplier)."""
    g = A.graph
    ia, io = [], []
    for p in range(g.n_pairs):
        a = A.alpha_image_index(2 * p)
        o = A.omega_image_index(2 * p)
        if a == 0 or o == 0:
            raise ValueError("degenerate edge map")
        ia.append(a)
        io.append(o)
    return DecoratedGraph(Graph(g.nv, list(zip(g.org, g.tgt)),
                                vnames=list(g.vnames), enames=list(g.enames)),
                          ia, io)


def reduce_decorated(d):
    """Collapse non-loop edges with an invertible half; index data composes
    multiplicatively across the removed vertex."""
    g = d.graph
    org, tgt = list(g.org), list(g.tgt)
    ia, io = list(d.idx_alpha), list(d.idx_omega)
    vnames = list(g.vnames)
    enames = list(g.enames)
    alive_v = [True] * g.nv
    alive_p = [True] * g.n_pairs

    def find_collapsible():
        for p in range(len(org)):
            if not alive_p[p] or org[p] == tgt[p]:
                continue
            if ia[p] == 1:
                return 2 * p
            if io[p] == 1:
                return 2 * p + 1
        return None

    while True:
        e0 = find_collapsible()
        if e0 is None:
            break
        p0 = e0 >> 1
        if e0 & 1 == 0:
            u, u2, n0 = org[p0], tgt[p0], io[p0]
        else:
            u, u2, n0 = tgt[p0], org[p0], ia[p0]
        alive_p[p0] = False
        alive_v[u] = False
        for p in range(len(org)):
            if not alive_p[p]:
                continue
            if tgt[p] == u:
                tgt[p] = u2
                io[p] = None if (io[p] is None or n0 is None) else io[p] * n0
            if org[p] == u:
                org[p] = u2
                ia[p] = None if (ia[p] is None or n0 is None) else ia[p] * n0
    keep_v = [v for v in range(len(alive_v)) if alive_v[v]]
    vmap = {v: i for i, v in enumerate(keep_v)}
    keep_p = [p for p in range(len(alive_p)) if alive_p[p]]
    graph = Graph(len(keep_v), [(vmap[org[p]], vmap[tgt[p]]) for p in keep_p],
                  vnames=[vnames[v] for v in keep_v],
                  enames=[enames[p] for p in keep_p])
    return DecoratedGraph(graph, [ia[p] for p in keep_p], [io[p] for p in keep_p])


def _fmt_half(n):
    return "inf" if n is None else str(n)


def decide_fgip_vz(d):
    """Three-form decision on a reduced connected decorated graph.

    yes: single vertex | single non-loop (2,2) edge | loop with a unit half.
    no: names the forbidden configuration found (fixed scan order, loops
    before edges)."""
    g = d.graph
    if not g.is_connected():
        raise ValueError("decide on connected components separately")
    for p in range(g.n_pairs):
        if g.org[p] != g.tgt[p] and (d.idx_alpha[p] == 1 or d.idx_omega[p] == 1):
            raise ValueError("graph is not reduced")
    loops = [p for p in range(g.n_pairs) if g.org[p] == g.tgt[p]]
    nonloops = [p for p in range(g.n_pairs) if g.org[p] != g.tgt[p]]
    if g.n_pairs == 0:
        return FgipVerdict("yes", "single-vertex")
    if g.n_pairs == 1:
        if loops:
            p = loops[0]
            a, o = d.halves(p)
            if a == 1 or o == 1:
                return FgipVerdict(
                    "yes", f"unit-side-loop indices=({_fmt_half(a)},{_fmt_half(o)})")
            return FgipVerdict(
                "no", f"loop-no-unit-side at {g.vnames[g.org[p]]} "
                      f"indices=({_fmt_half(a)},{_fmt_half(o)})")
        p = nonloops[0]
        a, o = d.halves(p)
        if (a, o) == (2, 2):
            return FgipVerdict("yes", "single-2-2-edge")
        return FgipVerdict(
            "no", f"amalgam-edge-not-2-2 {g.enames[p]} "
                  f"indices=({_fmt_half(a)},{_fmt_half(o)})")
    # >= 2 edge pairs: forbidden configurations, loop checks first
    for p in loops:
        a, o = d.halves(p)
        if a != 1 and o != 1:
            return FgipVerdict(
                "no", f"loop-no-unit-side at {g.vnames[g.org[p]]} "
                      f"indices=({_fmt_half(a)},{_fmt_half(o)})")
    for i, p in enumerate(loops):
        for q in loops[i + 1:]:
            if g.org[p] == g.org[q]:
                return FgipVerdict(
                    "no", f"two-unit-loops-at-vertex {g.vnames[g.org[p]]} "
                          f"({g.enames[p]},{g.enames[q]})")
    for p in nonloops:
        a, o = d.halves(p)
        if (a, o) != (2, 2):
            return FgipVerdict(
                "no", f"amalgam-edge-not-2-2 {g.enames[p]} "
                      f"indices=({_fmt_half(a)},{_fmt_half(o)})")
    for i, p in enumerate(nonloops):
        for q in nonloops[i + 1:]:
            shared = {g.org[p], g.tgt[p]} & {g.org[q], g.tgt[q]}
            if shared:
                v = sorted(shared)[0]
                return FgipVerdict(
                    "no", f"adjacent-2-2-edges at {g.vnames[v]} "
                          f"({g.enames[p]},{g.enames[q]})")
    for p in nonloops:
        for q in loops:
            if g.org[q] in (g.org[p], g.tgt[p]):
                return FgipVerdict(
                    "no", f"2-2-edge-with-unit-loop at {g.vnames[g.org[q]]} "
                          f"({g.enames[p]},{g.enames[q]})")
    raise AssertionError("unreachable: configuration scan is exhaustive")


def decide_components(d):
    """Reduce, split into components, decide each; conjunction of answers."""
    red = reduce_decorated(d)
    n, comp = red.graph.connected_components()
    verdicts = []
    for c in range(max(n, 1)):
        keep_v = [v for v in range(red.graph.nv) if comp and comp[v] == c]
        if not comp:
            keep_v = list(range(red.graph.nv))
        vset = set(keep_v)
        keep_p = [p for p in range(red.graph.n_pairs) if red.graph.org[p] in vset]
        vmap = {v: i for i, v in enumerate(keep_v)}
        sub = Graph(len(keep_v),
                    [(vmap[red.graph.org[p]], vmap[red.graph.tgt[p]]) for p in keep_p],
                    vnames=[red.graph.vnames[v] for v in keep_v],
                    enames=[red.graph.enames[p] for p in keep_p])
        dd = DecoratedGraph(sub, [red.idx_alpha[p] for p in keep_p],
                            [red.idx_omega[p] for p in keep_p])
        verdicts.append(decide_fgip_vz(dd))
        if n == 0:
            break
    answer = "yes" if all(v.answer == "yes" for v in verdicts) else "no"
    cert = "; ".join(v.certificate for v in verdicts)
    return FgipVerdict(answer, cert, components=[v.certificate for v in verdicts])


def decide_fgip_gbs(A):
    """Z-backed route: exact decision for graphs of Z groups (GBS data)."""
    return decide_components(extract_decoration(A))


# ---------------------------------------------------------------------------
# the commensurator graph for free vertex groups with cyclic edge groups
# ---------------------------------------------------------------------------


def _is_cyclic_edge_group(G):
    if isinstance(G, FreeGroup):
        return G.rank == 1
    if isinstance(G, AbelianGroup):
        return G.rank == 1 and not G.torsion
    return False


def w_construction(A):
    """Graph of commensurators of a gog with free vertex groups and cyclic
    edge groups.

    Per directed edge, the commensurator of the edge-group image is generated
    by the primitive root of the image word.  Edges at a common origin whose
    roots are conjugate up to inversion fall into one class; their alpha maps
    are rebased by the (shortest, then lexicographically least) conjugator so
    the whole class shares one commensurator.  The output is a graph of Z
    groups: one vertex per class carrying the root, one edge per original
    edge pair carrying the root exponents at its two ends, plus bookkeeping.
    """
    g = A.graph
    for v in range(g.nv):
        if not isinstance(A.vgroups[v], FreeGroup):
            raise ValueError("vertex groups must be free")
    for p in range(g.n_pairs):
        if not _is_cyclic_edge_group(A.egroups[p]):
            raise ValueError("edge groups must be infinite cyclic")

    roots = {}
    exponents = {}
    images = {}
    for e in g.edges():
        G = A.vgroups[g.o(e)]
        z = A.egroup(e).generators()[0]
        w = A.alpha(e).apply(z)
        if isinstance(w, tuple) and not isinstance(G, FreeGroup):
            raise ValueError("unexpected image type")
        word = w
        if not word:
            raise ValueError("edge map has trivial image")
        root, k = primitive_root(word)
        images[e] = word
        roots[e] = root
        exponents[e] = k

    # conjugate-commensurable classes at each origin, with rebasing conjugators
    class_of = {}
    class_data = []   # {rep_edge, vertex, root, members: {edge: conjugator}}
    for v in range(g.nv):
        star = [e for e in g.edges() if g.o(e) == v]
        for e in sorted(star, key=lambda e: (g.enames[e >> 1], e & 1)):
            placed = False
            for ci, data in enumerate(class_data):
                if data["vertex"] != v:
                    continue
                x = cyclic_conjugate(roots[e], data["root"])
                if x is not None:
                    class_of[e] = ci
                    data["members"][e] = x
                    placed = True
                    break
            if not placed:
                class_of[e] = len(class_data)
                class_data.append({"rep_edge": e, "vertex": v,
                                   "root": roots[e], "members": {e: None}})

    nW = len(class_data)
    pairs = []
    ia, io = [], []
    enames = []
    for p in range(g.n_pairs):
        e = 2 * p
        pairs.append((class_of[e], class_of[einv(e)]))
        ia.append(exponents[e])
        io.append(exponents[einv(e)])
        enames.append(g.enames[p] + "~")
    vnames = []
    for ci, data in enumerate(class_data):
        vnames.append(f"{g.vnames[data['vertex']]}:{format_word(data['root'])}")
    graph = Graph(nW, pairs, vnames=vnames, enames=enames)

    # the graph of Z groups itself: vertex groups Z = <root>, edge groups the
    # original cyclic edge groups, maps z -> root^(+-k)
    Zs = [AbelianGroup.Z() for _ in range(nW)]
    egroups = [AbelianGroup.Z() for _ in range(g.n_pairs)]
    monos = []
    for p in range(g.n_pairs):
        e = 2 * p
        sign_a = _root_sign(images[e], class_data[class_of[e]]["root"],
                            class_of, e, class_data)
        sign_o = _root_sign(images[einv(e)], class_data[class_of[einv(e)]]["root"],
                            class_of, einv(e), class_data)
        monos.append((Mono(egroups[p], Zs[class_of[e]], [(sign_a * exponents[e],)]),
                      Mono(egroups[p], Zs[class_of[einv(e)]], [(sign_o * exponents[einv(e)],)])))
    W = GraphOfGroups(graph, Zs, egroups, monos)
    book = {"classes": class_data, "class_of": class_of,
            "roots": roots, "exponents": exponents}
    return W, DecoratedGraph(graph, ia, io), book


def _root_sign(word, class_root, class_of, e, class_data):
    """After rebasing by the class conjugator, the image is class_root^(+-k);
    the sign records orientation."""
    x = class_data[class_of[e]]["members"][e]
    if x is None:
        rebased = word
    else:
        rebased = wconj(word, x)
    root, k = primitive_root(rebased)
    if root == class_root:
        return 1
    if root == winv(class_root):
        return -1
    raise AssertionError("conjugator does not rebase the root")


def decide_fgip_free_cyclic(A):
    """Free vertex groups with cyclic edge groups: decide via the graph of
    commensurators, componentwise."""
    W, deco, book = w_construction(A)
    return decide_components(deco)


def fgip_certify(A, vertex_fgip_flags=None):
    """Route a gog to the matching decider.

    - all edge groups finite and all vertex groups flagged (or known) to have
      the property: yes, by the finite-edge-groups criterion;
    - all vertex groups Z-like: the decorated-graph decision;
    - free vertex groups with cyclic edge groups: the commensurator route;
    - otherwise unknown."""
    g = A.graph
    flags = dict(vertex_fgip_flags or {})

    def vertex_has_fgip(v):
        if v in flags:
            return flags[v]
        G = A.vgroups[v]
        # finite groups, f.g. abelian groups and free groups all qualify
        return isinstance(G, (FreeGroup, AbelianGroup)) or G.order() is not None

    edge_orders = [A.egroups[p].order() for p in range(g.n_pairs)]
    if all(o is not None for o in edge_orders):
        if all(vertex_has_fgip(v) for v in range(g.nv)):
            return FgipVerdict("yes", "finite-edge-groups-with-fgip-vertices")
        return FgipVerdict("unknown", "finite edge groups but unknown vertex status")

    def z_like(G):
        return (isinstance(G, AbelianGroup) and G.rank == 1 and not G.torsion) or \
               (isinstance(G, FreeGroup) and G.rank == 1)

    if all(z_like(A.vgroups[v]) for v in range(g.nv)) and \
            all(_is_cyclic_edge_group(A.egroups[p]) for p in range(g.n_pairs)):
        try:
            return decide_fgip_gbs(A)
        except ValueError:
            pass
    if all(isinstance(A.vgroups[v], FreeGroup) for v in range(g.nv)) and \
            all(_is_cyclic_edge_group(A.egroups[p]) for p in range(g.n_pairs)):
        return decide_fgip_free_cyclic(A)
    return FgipVerdict("unknown", "no decision route for this backend mix")
