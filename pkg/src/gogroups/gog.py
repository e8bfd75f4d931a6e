"""Graphs of groups, A-paths, Britton reduction, cores and edge collapse.

A graph of groups assigns a group backend to every vertex, one to every edge
pair (shared by the two halves), and injective edge maps into the endpoint
vertex groups.  The alpha map of the positive half doubles as the omega map
of the negative half, so the pair is stored once.
"""

from __future__ import annotations

from .backends import SubgroupBackend
from .graphs import Graph, core, core_at, einv, validate_graph


def subgroup_index_in(handle, group_backend):
    """[group : handle] where `handle` is a subgroup of `group_backend`."""
    if isinstance(group_backend, SubgroupBackend):
        return handle.index_in(group_backend.handle)
    return handle.index()


class GraphOfGroups:
    def __init__(self, graph, vgroups, egroups, monos):
        """monos[p] = (alpha, omega) for the positive half of pair p."""
        self.graph = graph
        self.vgroups = list(vgroups)
        self.egroups = list(egroups)
        self.monos = [tuple(m) for m in monos]
        if len(self.vgroups) != graph.nv or len(self.egroups) != graph.n_pairs:
            raise ValueError("group tables do not match the graph")

    def vgroup(self, v):
        return self.vgroups[v]

    def egroup(self, e):
        return self.egroups[e >> 1]

    def alpha(self, e):
        return self.monos[e >> 1][0] if e & 1 == 0 else self.monos[e >> 1][1]

    def omega(self, e):
        return self.monos[e >> 1][1] if e & 1 == 0 else self.monos[e >> 1][0]

    def omega_image_index(self, e):
        return subgroup_index_in(self.omega(e).image(), self.vgroups[self.graph.t(e)])

    def alpha_image_index(self, e):
        return subgroup_index_in(self.alpha(e).image(), self.vgroups[self.graph.o(e)])

    def omega_surjective(self, e):
        return self.omega_image_index(e) == 1

    def trivial_path(self, v):
        return APath(self, v, [self.vgroups[v].identity()], [])

    def __repr__(self):
        return f"GraphOfGroups({self.graph!r})"


def validate_gog(A):
    """Report-valued: graph invariants, mono typing and injectivity."""
    violations = [("graph",) + v for v in validate_graph(A.graph)]
    g = A.graph
    for p in range(g.n_pairs):
        alpha, omega = A.monos[p]
        name = g.enames[p]
        if alpha.domain is not A.egroups[p] or omega.domain is not A.egroups[p]:
            violations.append(("edge-domain", name))
        if alpha.codomain is not A.vgroups[g.org[p]]:
            violations.append(("alpha-codomain", name))
        if omega.codomain is not A.vgroups[g.tgt[p]]:
            violations.append(("omega-codomain", name))
        try:
            if not alpha.is_injective():
                violations.append(("alpha-not-injective", name))
            if not omega.is_injective():
                violations.append(("omega-not-injective", name))
        except Exception as exc:
            violations.append(("injectivity-check-failed", name, str(exc)))
    return violations


class APath:
    """Alternating sequence (a0, e1, a1, ..., ek, ak) based at a vertex."""

    def __init__(self, gog, base, elems, edges):
        if len(elems) != len(edges) + 1:
            raise ValueError("an A-path needs one more element than edges")
        g = gog.graph
        v = base
        for i, e in enumerate(edges):
            if g.o(e) != v:
                raise ValueError("edge sequence is not consecutive")
            v = g.t(e)
        self.gog = gog
        self.base = base
        self.elems = list(elems)
        self.edges = list(edges)
        self.end = v

    def __len__(self):
        return len(self.edges)

    def is_closed(self):
        return self.base == self.end

    def vertex_at(self, i):
        """Vertex before element i."""
        v = self.base
        for e in self.edges[:i]:
            v = self.gog.graph.t(e)
        return v

    def __repr__(self):
        gog, g = self.gog, self.gog.graph
        parts = []
        v = self.base
        for i, e in enumerate(self.edges):
            parts.append(gog.vgroups[v].serialize(self.elems[i]).__repr__())
            parts.append(g.edge_name(e))
            v = g.t(e)
        parts.append(gog.vgroups[v].serialize(self.elems[-1]).__repr__())
        return "APath[" + ", ".join(str(x) for x in parts) + "]"


def apath_concat(p, q):
    if p.gog is not q.gog:
        raise ValueError("paths over different graphs of groups")
    if p.end != q.base:
        raise ValueError("paths are not composable")
    G = p.gog.vgroups[p.end]
    elems = p.elems[:-1] + [G.mul(p.elems[-1], q.elems[0])] + q.elems[1:]
    return APath(p.gog, p.base, elems, p.edges + q.edges)


def apath_inverse(p):
    gog = p.gog
    elems = []
    v_seq = [p.base]
    for e in p.edges:
        v_seq.append(gog.graph.t(e))
    for i in range(len(p.elems) - 1, -1, -1):
        elems.append(gog.vgroups[v_seq[i]].inv(p.elems[i]))
    edges = [einv(e) for e in reversed(p.edges)]
    return APath(gog, p.end, elems, edges)


def reduce_apath(p):
    """Britton reduction: remove pinches (e, omega_e(x), e^-1) -> alpha_e(x)."""
    gog = p.gog
    elems = list(p.elems)
    edges = list(p.edges)
    i = 0
    while i < len(edges) - 1:
        e = edges[i]
        if edges[i + 1] == einv(e):
            om = gog.omega(e)
            a = elems[i + 1]
            if om.image().contains(a):
                x = om.preimage_elt(a)
                carried = gog.alpha(e).apply(x)
                Gv = gog.vgroups[gog.graph.o(e)]
                merged = Gv.mul(Gv.mul(elems[i], carried), elems[i + 2])
                elems[i:i + 3] = [merged]
                edges[i:i + 2] = []
                i = max(i - 1, 0)
                continue
        i += 1
    return APath(gog, p.base, elems, edges)


def is_reduced(p):
    gog = p.gog
    for i in range(len(p.edges) - 1):
        e = p.edges[i]
        if p.edges[i + 1] == einv(e) and gog.omega(e).image().contains(p.elems[i + 1]):
            return False
    return True


def apaths_equal(p, q):
    if p.base != q.base or p.end != q.end:
        raise ValueError("paths are not coterminal")
    r = reduce_apath(apath_concat(p, apath_inverse(q)))
    return len(r.edges) == 0 and r.elems[0] == p.gog.vgroups[p.base].identity()


def is_cyclically_reduced(p):
    if not p.is_closed():
        raise ValueError("path is not closed")
    if len(p.edges) == 0:
        return False
    if not is_reduced(p):
        return False
    e_last = p.edges[-1]
    if p.edges[0] != einv(e_last):
        return True
    G = p.gog.vgroups[p.base]
    wrap = G.mul(p.elems[-1], p.elems[0])
    return not p.gog.omega(e_last).image().contains(wrap)


def cyclically_reduce(p):
    """(conjugator, core) with p =A conjugator . core . conjugator^-1."""
    if not p.is_closed():
        raise ValueError("path is not closed")
    gog = p.gog
    conj = gog.trivial_path(p.base)
    cur = reduce_apath(p)
    while len(cur.edges) > 0 and not is_cyclically_reduced(cur):
        e1 = cur.edges[0]
        s = APath(gog, cur.base, [cur.elems[0], gog.vgroups[gog.graph.t(e1)].identity()], [e1])
        cur = reduce_apath(apath_concat(apath_concat(apath_inverse(s), cur), s))
        conj = apath_concat(conj, s)
    return conj, cur


def gog_core(A):
    """Sub-graph-of-groups on cyclically reduced closed A-paths."""
    return _restrict(A, core(A.graph, allow_backtrack=lambda e: not A.omega_surjective(e)))


def gog_core_at(A, u):
    """Sub-graph-of-groups on reduced closed A-paths at u; returns
    (sub-gog, new basepoint)."""
    sub = core_at(A.graph, u, allow_backtrack=lambda e: not A.omega_surjective(e))
    B, vmap, pmap = _restrict_with_maps(A, sub)
    return B, vmap[u]


def _restrict_with_maps(A, sub):
    old_vid = {name: i for i, name in enumerate(A.graph.vnames)}
    old_pid = {name: i for i, name in enumerate(A.graph.enames)}
    vmap = {}
    for new_i, name in enumerate(sub.vnames):
        vmap[old_vid[name]] = new_i
    pmap = {}
    for new_p, name in enumerate(sub.enames):
        pmap[old_pid[name]] = new_p
    vgroups = [A.vgroups[v] for v in sorted(vmap, key=vmap.get)]
    egroups = [A.egroups[p] for p in sorted(pmap, key=pmap.get)]
    monos = [A.monos[p] for p in sorted(pmap, key=pmap.get)]
    return GraphOfGroups(sub, vgroups, egroups, monos), vmap, pmap


def _restrict(A, sub):
    return _restrict_with_maps(A, sub)[0]


def reduce_gog(A, basepoint):
    """Collapse non-reduced edges (non-loop with an invertible end map).

    Returns (reduced gog, transported basepoint).  The fundamental group is
    unchanged; each collapse composes the surviving edges' end maps through
    the inverted map.
    """
    cur = A
    base = basepoint
    while True:
        g = cur.graph
        target_edge = None
        for e in range(2 * g.n_pairs):
            if g.o(e) == g.t(e):
                continue
            alpha = cur.alpha(e)
            if subgroup_index_in(alpha.image(), cur.vgroups[g.o(e)]) == 1:
                target_edge = e
                break
        if target_edge is None:
            return cur, base
        e0 = target_edge
        u = g.o(e0)
        u2 = g.t(e0)
        through = cur.omega(e0).compose(cur.alpha(e0).inverse())  # A_u -> A_{u2}
        new_org = list(g.org)
        new_tgt = list(g.tgt)
        new_monos = [list(m) for m in cur.monos]
        for p in range(g.n_pairs):
            if p == e0 >> 1:
                continue
            # positive half 2p has omega at tgt[p]; negative half at org[p]
            if new_tgt[p] == u:
                new_monos[p][1] = through.compose(new_monos[p][1])
                new_tgt[p] = u2
            if new_org[p] == u:
                new_monos[p][0] = through.compose(new_monos[p][0])
                new_org[p] = u2
        keep_pairs = [p for p in range(g.n_pairs) if p != e0 >> 1]
        keep_verts = [v for v in range(g.nv) if v != u]
        vmap = {v: i for i, v in enumerate(keep_verts)}
        pairs = [(vmap[new_org[p]], vmap[new_tgt[p]]) for p in keep_pairs]
        graph = Graph(len(keep_verts), pairs,
                      vnames=[g.vnames[v] for v in keep_verts],
                      enames=[g.enames[p] for p in keep_pairs])
        cur = GraphOfGroups(graph,
                            [cur.vgroups[v] for v in keep_verts],
                            [cur.egroups[p] for p in keep_pairs],
                            [tuple(new_monos[p]) for p in keep_pairs])
        base = vmap[u2 if base == u else base]
