"""Morphisms of graphs of groups with twisting elements.

Covers validation of the twisted commutation equations, pushing A-paths
forward, immersion certificates (local injectivity on edge double cosets
plus exactness of edge groups), the three-valued covering test, deterministic
membership tracing through an immersion, and a best-effort realization of a
finitely generated subgroup as a pointed immersion by iterated folding.
"""

from __future__ import annotations

from .backends import Mono, SubgroupBackend
from .gog import APath, GraphOfGroups
from .graphs import Graph, einv


class GoGMorphism:
    def __init__(self, source, target, vmap, emap, vmonos, emonos, twists):
        """emap[p]: directed target edge for the positive half of source pair p;
        twists[p] = (f_alpha, f_omega) for the positive half."""
        self.source = source
        self.target = target
        self.vmap = list(vmap)
        self.emap = list(emap)
        self.vmonos = list(vmonos)
        self.emonos = list(emonos)
        self.twists = [tuple(t) for t in twists]

    def edge_image(self, f):
        e = self.emap[f >> 1]
        return e if f & 1 == 0 else einv(e)

    def twist_alpha(self, f):
        return self.twists[f >> 1][0] if f & 1 == 0 else self.twists[f >> 1][1]

    def twist_omega(self, f):
        return self.twists[f >> 1][1] if f & 1 == 0 else self.twists[f >> 1][0]

    def vertex_image_handle(self, v):
        return self.vmonos[v].image()

    def edge_image_handle(self, p):
        return self.emonos[p].image()


def identity_morphism(A):
    vmonos = [Mono(A.vgroups[v], A.vgroups[v], A.vgroups[v].generators())
              for v in range(A.graph.nv)]
    emonos = [Mono(A.egroups[p], A.egroups[p], A.egroups[p].generators())
              for p in range(A.graph.n_pairs)]
    twists = [(A.vgroups[A.graph.org[p]].identity(),
               A.vgroups[A.graph.tgt[p]].identity())
              for p in range(A.graph.n_pairs)]
    return GoGMorphism(A, A, list(range(A.graph.nv)),
                       [2 * p for p in range(A.graph.n_pairs)],
                       vmonos, emonos, twists)


def validate_morphism(m):
    """Report-valued check of incidence, typing and twisted commutation."""
    violations = []
    S, T = m.source, m.target
    gs, gt = S.graph, T.graph
    for v in range(gs.nv):
        if m.vmonos[v].domain is not S.vgroups[v] or m.vmonos[v].codomain is not T.vgroups[m.vmap[v]]:
            violations.append(("vertex-mono-typing", gs.vnames[v]))
    for p in range(gs.n_pairs):
        f = 2 * p
        e = m.edge_image(f)
        name = gs.enames[p]
        if m.vmap[gs.o(f)] != gt.o(e) or m.vmap[gs.t(f)] != gt.t(e):
            violations.append(("graph-map-incidence", name))
            continue
        mono_f = m.emonos[p]
        if mono_f.domain is not S.egroups[p] or mono_f.codomain is not T.egroup(e):
            violations.append(("edge-mono-typing", name))
            continue
        for half in (f, einv(f)):
            eh = m.edge_image(half)
            v = gs.o(half)
            Au = T.vgroups[gt.o(eh)]
            f_alpha = m.twist_alpha(half)
            for gi, x in enumerate(S.egroup(half).generators()):
                lhs = T.alpha(eh).apply(mono_f.apply(x))
                inner = m.vmonos[v].apply(S.alpha(half).apply(x))
                rhs = Au.mul(Au.mul(Au.inv(f_alpha), inner), f_alpha)
                if not Au.eq(lhs, rhs):
                    violations.append(("twisted-commutation", name,
                                       "alpha" if half == f else "omega", gi))
    return violations


def push_apath(m, p):
    """Image A-path: twisting elements interleave around each edge crossing."""
    S, T = m.source, m.target
    v = p.base
    out_elems = []
    out_edges = []
    cur = m.vmonos[v].apply(p.elems[0])
    for i, f in enumerate(p.edges):
        e = m.edge_image(f)
        Au = T.vgroups[T.graph.o(e)]
        cur = Au.mul(cur, m.twist_alpha(f))
        out_elems.append(cur)
        out_edges.append(e)
        v = S.graph.t(f)
        Av = T.vgroups[T.graph.t(e)]
        cur = Av.mul(Av.inv(m.twist_omega(f)), m.vmonos[v].apply(p.elems[i + 1]))
    out_elems.append(cur)
    return APath(T, m.vmap[p.base], out_elems, out_edges)


class ImmersionCertificate:
    def __init__(self, vertex_blocks, edge_checks):
        self.vertex_blocks = vertex_blocks    # (v, target edge) -> [(f, witness)]
        self.edge_checks = edge_checks        # source pair -> True

    def report(self, m):
        lines = []
        gs = m.source.graph
        for (v, e), items in sorted(self.vertex_blocks.items()):
            names = ", ".join(f"{gs.edge_name(f)}:{w!r}" for f, w in items)
            lines.append(f"vertex {gs.vnames[v]} over edge "
                         f"{m.target.graph.edge_name(e)}: {names}")
        lines.append(f"edge-group equalities verified: {len(self.edge_checks)}")
        return "\n".join(lines)


class ImmersionFailure(Exception):
    def __init__(self, kind, witness):
        super().__init__(f"{kind}: {witness}")
        self.kind = kind
        self.witness = witness


def is_immersion(m):
    """ImmersionCertificate, or raises ImmersionFailure with the offending
    pair (condition 1) or edge (condition 2)."""
    S, T = m.source, m.target
    gs, gt = S.graph, T.graph
    vertex_blocks = {}
    for v in range(gs.nv):
        star = [f for f in gs.edges() if gs.o(f) == v]
        by_image = {}
        for f in star:
            by_image.setdefault(m.edge_image(f), []).append(f)
        u = m.vmap[v]
        Au = T.vgroups[u]
        H = m.vertex_image_handle(v)
        for e, fs in by_image.items():
            K = T.alpha(e).image()
            items = []
            seen = {}
            for f in fs:
                w = Au.dc_canon(H, m.twist_alpha(f), K)
                if w in seen:
                    raise ImmersionFailure(
                        "edges-not-separated",
                        (gs.edge_name(seen[w]), gs.edge_name(f), gs.vnames[v]))
                seen[w] = f
                items.append((f, Au.serialize(w)))
            vertex_blocks[(v, e)] = items
    edge_checks = {}
    for p in range(gs.n_pairs):
        for f in (2 * p, 2 * p + 1):
            e = m.edge_image(f)
            v = gs.o(f)
            H = m.vertex_image_handle(v)
            alpha_img = T.alpha(e).image()
            rhs = H.conjugate(m.twist_alpha(f)).intersect(alpha_img)
            lhs_gens = [T.alpha(e).apply(m.emonos[p].apply(x))
                        for x in S.egroup(f).generators()]
            lhs = T.vgroups[m.vmap[v]].subgroup(lhs_gens)
            if not lhs.equals(rhs):
                raise ImmersionFailure("edge-group-not-exact", gs.edge_name(f))
        edge_checks[p] = True
    return ImmersionCertificate(vertex_blocks, edge_checks)


def is_covering(m, certificate=None):
    """True / False / None (not decidable): local surjectivity on double cosets."""
    if certificate is None:
        certificate = is_immersion(m)
    S, T = m.source, m.target
    gs, gt = S.graph, T.graph
    for v in range(gs.nv):
        u = m.vmap[v]
        Au = T.vgroups[u]
        H = m.vertex_image_handle(v)
        for e in gt.edges():
            if gt.o(e) != u:
                continue
            K = T.alpha(e).image()
            witnesses = {Au.dc_canon(H, m.twist_alpha(f), K)
                         for f in gs.edges()
                         if gs.o(f) == v and m.edge_image(f) == e}
            total = _enumerate_double_cosets(Au, H, K)
            if total is None:
                return None
            if witnesses != total:
                return False
    return True


def _enumerate_double_cosets(G, H, K):
    """Set of canonical double-coset witnesses, or None when not decidable.

    Finite groups: exhaustive.  Abelian: transversal when the index of H+K is
    finite, otherwise the set is infinite and cannot be covered by finitely
    many edges, so an impossible marker is returned.  Free groups: decided
    when H or K has finite index (Schreier-graph orbit count)."""
    kind = getattr(G, "kind", None)
    if kind == "finite":
        return {G.dc_canon(H, g, K) for g in range(G.order())}
    if kind == "abelian":
        lat = H.lat.sum(K.lat)
        if lat.index_in(G.FULL) is None:
            # infinitely many cosets: no finite star can be onto
            return {object()}
        return {G.dc_canon(H, rep, K) for rep in lat.transversal(G.FULL)}
    if kind == "free":
        if H.index() is not None:
            return {G.dc_canon(H, w, K) for w in _orbit_reps(H, K)}
        if K.index() is not None:
            return {G.dc_canon(H, w, K) for w in _orbit_reps(K, H, invert=True)}
        return None
    return None


def _orbit_reps(H, K, invert=False):
    """Representatives of H\\F/K from the complete automaton of H under the
    right K-action (or of K\\F/H read backwards when invert is set)."""
    from .words import winv
    aut = H.aut
    tree_word, _ = aut.spanning()
    parent = list(range(aut.n_states))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s in range(aut.n_states):
        for k in K.gens:
            t = aut.trace(k, start=s)
            if t is None:
                continue
            rs, rt = find(s), find(t)
            if rs != rt:
                parent[rs] = rt
    reps = {}
    for s in range(aut.n_states):
        reps.setdefault(find(s), tree_word[s])
    if invert:
        return [winv(w) for w in reps.values()]
    return list(reps.values())


def trace_apath(m, p, start=None):
    """Deterministic lifting of a closed target A-path through an immersion.

    Returns True iff p lies in the image of pi_1 of the source at the start
    vertex (defaults to the vertex over p.base)."""
    S, T = m.source, m.target
    gs, gt = S.graph, T.graph
    if start is None:
        candidates = [v for v in range(gs.nv) if m.vmap[v] == p.base]
        if len(candidates) != 1:
            raise ValueError("ambiguous start vertex; pass start=")
        start = candidates[0]
    v = start
    carry = p.elems[0]
    for i, e in enumerate(p.edges):
        u = gt.o(e)
        Au = T.vgroups[u]
        H = m.vertex_image_handle(v)
        K = T.alpha(e).image()
        lifted = None
        for f in gs.edges():
            if gs.o(f) != v or m.edge_image(f) != e:
                continue
            if Au.dc_eq(H, m.twist_alpha(f), K, carry):
                lifted = f
                break
        if lifted is None:
            return False
        b, kk = Au.dc_factor(H, m.twist_alpha(lifted), K, carry)
        x = T.alpha(e).preimage_elt(kk)
        Av = T.vgroups[gt.t(e)]
        carry = Av.mul(Av.mul(m.twist_omega(lifted), T.omega(e).apply(x)),
                       p.elems[i + 1])
        v = gs.t(lifted)
    if v != start:
        return False
    return m.vertex_image_handle(v).contains(carry)


# ---------------------------------------------------------------------------
# realize_subgroup: wedge generator petals, then fold
# ---------------------------------------------------------------------------


class BudgetExceeded(Exception):
    def __init__(self, partial):
        super().__init__("folding budget exceeded")
        self.partial = partial


class _Builder:
    def __init__(self, A, u0):
        self.A = A
        self.u0 = u0
        self.verts = []           # {img, sub, alive}
        self.edges = []           # {img (directed), src, dst, ta, tw, esub, alive}
        self.base = self.new_vertex(u0)

    def new_vertex(self, img):
        self.verts.append({"img": img,
                           "sub": self.A.vgroups[img].trivial_subgroup(),
                           "alive": True})
        return len(self.verts) - 1

    def add_generator(self, p):
        if p.base != self.u0 or not p.is_closed():
            raise ValueError("generators must be closed A-paths at the basepoint")
        A = self.A
        if len(p.edges) == 0:
            G = A.vgroups[self.u0]
            self.verts[self.base]["sub"] = self.verts[self.base]["sub"].join(
                G.subgroup([p.elems[0]]))
            return
        k = len(p.edges)
        prev = self.base
        for i, e in enumerate(p.edges):
            last = i == k - 1
            nxt = self.base if last else self.new_vertex(A.graph.t(e))
            Gt = A.vgroups[A.graph.t(e)]
            self.edges.append({
                "img": e, "src": prev, "dst": nxt,
                "ta": p.elems[i],
                "tw": Gt.inv(p.elems[k]) if last else Gt.identity(),
                "esub": A.egroup(e).trivial_subgroup(),
                "alive": True,
            })
            prev = nxt

    def star(self, v):
        """(edge index, forward?) views with origin v."""
        out = []
        for i, d in enumerate(self.edges):
            if not d["alive"]:
                continue
            if d["src"] == v:
                out.append((i, True))
            if d["dst"] == v:
                out.append((i, False))
        return out

    def view(self, i, forward):
        d = self.edges[i]
        if forward:
            return d["img"], d["src"], d["dst"], d["ta"], d["tw"]
        return einv(d["img"]), d["dst"], d["src"], d["tw"], d["ta"]

    def set_view_twists(self, i, forward, ta, tw):
        d = self.edges[i]
        if forward:
            d["ta"], d["tw"] = ta, tw
        else:
            d["tw"], d["ta"] = ta, tw

    def find_fold(self):
        for v in range(len(self.verts)):
            if not self.verts[v]["alive"]:
                continue
            seen = {}
            for i, fwd in self.star(v):
                e = self.view(i, fwd)[0]
                A_u = self.A.vgroups[self.A.graph.o(e)]
                H = self.verts[v]["sub"]
                K = self.A.alpha(e).image()
                w = A_u.dc_canon(H, self.view(i, fwd)[3], K)
                key = (e, w)
                if key in seen:
                    return v, seen[key], (i, fwd)
                seen[key] = (i, fwd)
        return None

    def merge(self, v, primary, secondary):
        A = self.A
        # prefer keeping the basepoint (and then the smaller vertex id)
        y1 = self.view(*primary)[2]
        y2 = self.view(*secondary)[2]
        if (y2 == self.base and y1 != self.base) or (y1 != self.base and y2 < y1):
            primary, secondary = secondary, primary
            y1, y2 = y2, y1
        e, _, _, p_ta, p_tw = self.view(*primary)
        _, _, _, s_ta, s_tw = self.view(*secondary)
        u = A.graph.o(e)
        Au = A.vgroups[u]
        H = self.verts[v]["sub"]
        K = A.alpha(e).image()
        h, kk = Au.dc_factor(H, p_ta, K, s_ta)
        x = A.alpha(e).preimage_elt(kk)
        Gt = A.vgroups[A.graph.t(e)]
        delta = Gt.mul(Gt.mul(p_tw, A.omega(e).apply(x)), Gt.inv(s_tw))
        # transport the secondary's edge group: x S x^-1 joins the primary's
        i_p = primary[0]
        i_s = secondary[0]
        Ge = A.egroup(e)
        sec_sub = self.edges[i_s]["esub"]
        moved = Ge.subgroup([Ge.mul(Ge.mul(x, s), Ge.inv(x)) for s in sec_sub.gens])
        self.edges[i_p]["esub"] = self.edges[i_p]["esub"].join(moved)
        self.edges[i_s]["alive"] = False
        if y1 == y2:
            self.verts[y1]["sub"] = self.verts[y1]["sub"].join(Gt.subgroup([delta]))
            return
        # fold y2 into y1, re-anchoring by delta
        sub2 = self.verts[y2]["sub"]
        moved_sub = Gt.subgroup([Gt.mul(Gt.mul(delta, s), Gt.inv(delta))
                                 for s in sub2.gens])
        self.verts[y1]["sub"] = self.verts[y1]["sub"].join(moved_sub)
        self.verts[y2]["alive"] = False
        for j, d in enumerate(self.edges):
            if not d["alive"]:
                continue
            if d["src"] == y2:
                Go = A.vgroups[A.graph.o(d["img"])]
                d["ta"] = Go.mul(delta, d["ta"])
                d["src"] = y1
            if d["dst"] == y2:
                Gd = A.vgroups[A.graph.t(d["img"])]
                d["tw"] = Gd.mul(delta, d["tw"])
                d["dst"] = y1

    def saturate_edge(self, i):
        """Condition-2 growth at edge i; returns True when anything grew."""
        A = self.A
        d = self.edges[i]
        changed = False
        e = d["img"]
        alpha, omega = A.alpha(e), A.omega(e)
        Ho = self.verts[d["src"]]["sub"]
        Ht = self.verts[d["dst"]]["sub"]
        req_a = Ho.conjugate(d["ta"]).intersect(alpha.image())
        req_w = Ht.conjugate(d["tw"]).intersect(omega.image())
        S_new = d["esub"].join(alpha.preimage_sub(req_a)).join(omega.preimage_sub(req_w))
        if not S_new.equals(d["esub"]):
            d["esub"] = S_new
            changed = True
        Go = A.vgroups[A.graph.o(e)]
        Gt = A.vgroups[A.graph.t(e)]
        push_a = Go.subgroup([Go.mul(Go.mul(d["ta"], alpha.apply(s)), Go.inv(d["ta"]))
                              for s in d["esub"].gens])
        push_w = Gt.subgroup([Gt.mul(Gt.mul(d["tw"], omega.apply(s)), Gt.inv(d["tw"]))
                              for s in d["esub"].gens])
        grown_o = self.verts[d["src"]]["sub"].join(push_a)
        if not grown_o.equals(self.verts[d["src"]]["sub"]):
            self.verts[d["src"]]["sub"] = grown_o
            changed = True
        grown_t = self.verts[d["dst"]]["sub"].join(push_w)
        if not grown_t.equals(self.verts[d["dst"]]["sub"]):
            self.verts[d["dst"]]["sub"] = grown_t
            changed = True
        return changed

    def trim(self):
        """Prune pendant vertices whose single edge is omega-surjective onto
        the vertex subgroup (the core_at turn rule), plus isolated vertices."""
        A = self.A
        changed = True
        while changed:
            changed = False
            for y in range(len(self.verts)):
                if not self.verts[y]["alive"] or y == self.base:
                    continue
                incident = [(i, fwd) for i, fwd in self.star(y)]
                if len(incident) == 0:
                    self.verts[y]["alive"] = False
                    changed = True
                    continue
                if len(incident) == 1:
                    i, fwd = incident[0]
                    # view into y: reverse of the star view
                    e, _, _, ta, tw = self.view(i, not fwd)
                    omega = A.omega(e)
                    Gt = A.vgroups[A.graph.t(e)]
                    img = Gt.subgroup([Gt.mul(Gt.mul(tw, omega.apply(s)), Gt.inv(tw))
                                       for s in self.edges[i]["esub"].gens])
                    if img.equals(self.verts[y]["sub"]):
                        self.edges[i]["alive"] = False
                        self.verts[y]["alive"] = False
                        changed = True

    def to_morphism(self):
        A = self.A
        vids = [i for i, v in enumerate(self.verts) if v["alive"]]
        vmapping = {old: new for new, old in enumerate(vids)}
        eids = [i for i, d in enumerate(self.edges) if d["alive"]]
        pairs = [(vmapping[self.edges[i]["src"]], vmapping[self.edges[i]["dst"]])
                 for i in eids]
        graph = Graph(len(vids), pairs,
                      vnames=[f"b{v}" for v in vids],
                      enames=[f"f{i}" for i in eids])
        vgroups = [SubgroupBackend(A.vgroups[self.verts[v]["img"]], self.verts[v]["sub"])
                   for v in vids]
        egroups = [SubgroupBackend(A.egroup(self.edges[i]["img"]), self.edges[i]["esub"])
                   for i in eids]
        monos = []
        vmonos_src = {}
        for new_p, i in enumerate(eids):
            d = self.edges[i]
            e = d["img"]
            alpha, omega = A.alpha(e), A.omega(e)
            Go = A.vgroups[A.graph.o(e)]
            Gt = A.vgroups[A.graph.t(e)]
            af = Mono(egroups[new_p], vgroups[vmapping[d["src"]]],
                      [Go.mul(Go.mul(d["ta"], alpha.apply(s)), Go.inv(d["ta"]))
                       for s in egroups[new_p].generators()])
            wf = Mono(egroups[new_p], vgroups[vmapping[d["dst"]]],
                      [Gt.mul(Gt.mul(d["tw"], omega.apply(s)), Gt.inv(d["tw"]))
                       for s in egroups[new_p].generators()])
            monos.append((af, wf))
        B = GraphOfGroups(graph, vgroups, egroups, monos)
        vmap = [self.verts[v]["img"] for v in vids]
        emap = [self.edges[i]["img"] for i in eids]
        vmonos = [Mono(vgroups[n], A.vgroups[vmap[n]], vgroups[n].generators())
                  for n in range(len(vids))]
        emonos = [Mono(egroups[n], A.egroup(emap[n]), egroups[n].generators())
                  for n in range(len(eids))]
        twists = [(self.edges[i]["ta"], self.edges[i]["tw"]) for i in eids]
        return GoGMorphism(B, A, vmap, emap, vmonos, emonos, twists), vmapping[self.base]


def realize_subgroup(A, u0, generators, budget=2000):
    """Pointed immersion whose pi_1-image contains every generator.

    generators: closed A-paths at u0.  Folds condition-(1) violations and
    grows edge/vertex groups until condition (2) stabilizes; deterministic
    (first violating pair in scan order).  Raises BudgetExceeded with the
    partial morphism when the step budget runs out."""
    from .gog import reduce_apath
    b = _Builder(A, u0)
    for p in generators:
        b.add_generator(reduce_apath(p))
    steps = 0
    while True:
        progress = False
        while True:
            found = b.find_fold()
            if found is None:
                break
            v, primary, secondary = found
            b.merge(v, primary, secondary)
            progress = True
            steps += 1
            if steps > budget:
                raise BudgetExceeded(b.to_morphism())
        for i in range(len(b.edges)):
            if not b.edges[i]["alive"]:
                continue
            if b.saturate_edge(i):
                progress = True
                steps += 1
                if steps > budget:
                    raise BudgetExceeded(b.to_morphism())
        if not progress:
            break
    b.trim()
    m, base = b.to_morphism()
    return m, base
