"""Lazily expanded products of two immersions over a graph of groups.

Vertices of the product are double cosets mu1(B_v) a mu2(C_w) inside the
target vertex groups, edges are double cosets of edge-group images, and the
incidence maps push witnesses through the twisting elements.  Expansion is
breadth-first from the base vertex with an explicit budget, so infinite
products (which are the interesting case) are handled honestly: the fragment
records whether the frontier ever emptied and can certify one specific
infinite pattern (a periodic strictly-ascending ray).

Every explored vertex carries anchor paths into the two factors: products of
pushed edge paths and recorded double-coset factors whose defining invariant
(anchor1 . witness . anchor2^-1 = component label) makes intersection
generators fall out of the spanning tree for free.
"""

from __future__ import annotations

from collections import deque
from math import gcd

from .gog import APath, apath_concat, apath_inverse, reduce_apath
from .graphs import einv


class UnsupportedExpansion(Exception):
    pass


class ProductVertex:
    __slots__ = ("v", "w", "witness", "anchor1", "anchor2", "expanded",
                 "component", "order")

    def __init__(self, v, w, witness, anchor1, anchor2, component, order):
        self.v = v
        self.w = w
        self.witness = witness
        self.anchor1 = anchor1
        self.anchor2 = anchor2
        self.expanded = False
        self.component = component
        self.order = order

    def key(self):
        return (self.v, self.w, self.witness)


class ProductEdge:
    __slots__ = ("f", "g", "rep", "witness", "src", "dst", "tree")

    def __init__(self, f, g, rep, witness, src, dst, tree):
        self.f = f
        self.g = g
        self.rep = rep          # solver representative in the edge group
        self.witness = witness  # canonical double-coset witness (dedup key)
        self.src = src
        self.dst = dst
        self.tree = tree


class AProductFragment:
    def __init__(self, m1, m2):
        if m1.target is not m2.target:
            raise ValueError("immersions must share a target")
        self.A = m1.target
        self.m1 = m1
        self.m2 = m2
        self.vertices = []
        self.index = {}
        self.edges = []
        self.edge_keys = set()
        self.frontier = deque()
        self.complete = False
        self.unexpandable = {}
        self.budget_spent = 0

    # --- vertex/edge group handles ---

    def _sub1(self, v):
        return self.m1.vertex_image_handle(v)

    def _sub2(self, w):
        return self.m2.vertex_image_handle(w)

    def vertex_group(self, idx):
        x = self.vertices[idx]
        u = self.m1.vmap[x.v]
        return self._sub1(x.v).conjugate(x.witness).intersect(self._sub2(x.w))

    def edge_group(self, eidx):
        h = self.edges[eidx]
        E1 = self.m1.edge_image_handle(h.f >> 1)
        E2 = self.m2.edge_image_handle(h.g >> 1)
        return E1.conjugate(h.rep).intersect(E2)

    def component_label(self, idx):
        """Witness A-path for the component's double coset B g C."""
        x = self.vertices[idx]
        u = self.m1.vmap[x.v]
        middle = APath(self.A, u, [x.witness], [])
        return reduce_apath(apath_concat(apath_concat(x.anchor1, middle),
                                         apath_inverse(x.anchor2)))

    # --- construction ---

    def add_base(self, v0=None, w0=None):
        v0 = 0 if v0 is None else v0
        w0 = 0 if w0 is None else w0
        if self.m1.vmap[v0] != self.m2.vmap[w0]:
            raise ValueError("basepoint images do not match")
        u = self.m1.vmap[v0]
        Au = self.A.vgroups[u]
        idx, _ = self._intern(v0, w0, Au.identity(),
                              self.A.trivial_path(u), self.A.trivial_path(u),
                              component=0)
        return idx

    def _intern(self, v, w, raw_witness, b_anchor, c_anchor, component):
        """Returns (index, created)."""
        u = self.m1.vmap[v]
        Au = self.A.vgroups[u]
        H = self._sub1(v)
        K = self._sub2(w)
        witness = Au.dc_canon(H, raw_witness, K)
        key = (v, w, witness)
        if key in self.index:
            return self.index[key], False
        bc, cc = Au.dc_factor(H, witness, K, raw_witness)
        # raw = bc . witness . cc  =>  anchors absorb the correction
        b2 = reduce_apath(apath_concat(b_anchor, APath(self.A, u, [bc], [])))
        c2 = reduce_apath(apath_concat(c_anchor, APath(self.A, u, [Au.inv(cc)], [])))
        idx = len(self.vertices)
        pv = ProductVertex(v, w, witness, b2, c2, component, idx)
        self.vertices.append(pv)
        self.index[key] = idx
        self.frontier.append(idx)
        return idx, True

    def build(self, budget=64):
        if not self.vertices:
            self.add_base()
        while self.frontier and self.budget_spent < budget:
            idx = self.frontier.popleft()
            if self.vertices[idx].expanded or idx in self.unexpandable:
                continue
            self.expand_vertex(idx)
            self.budget_spent += 1
        if not self.frontier and not self.unexpandable:
            self.complete = True
        return self

    def expand_vertex(self, idx):
        x = self.vertices[idx]
        S, Sg = self.m1.source.graph, self.m2.source.graph
        star1 = [f for f in S.edges() if S.o(f) == x.v]
        star2 = [g for g in Sg.edges() if Sg.o(g) == x.w]
        for f in star1:
            e_f = self.m1.edge_image(f)
            for g in star2:
                if self.m2.edge_image(g) != e_f:
                    continue
                try:
                    sols = self._solve_edges(x, f, g, e_f)
                except UnsupportedExpansion as exc:
                    self.unexpandable[idx] = str(exc)
                    return
                for rep, bc0, cc0 in sols:
                    self._add_edge(idx, f, g, e_f, rep, bc0, cc0)
        x.expanded = True

    def _edge_key(self, f, g, src, dst, witness):
        a = (f, g, src, dst)
        b = (einv(f), einv(g), dst, src)
        return (min(a, b), witness)

    def _add_edge(self, idx, f, g, e, rep, bc0, cc0):
        A = self.A
        x = self.vertices[idx]
        Ge = A.egroup(e)
        E1 = self.m1.edge_image_handle(f >> 1)
        E2 = self.m2.edge_image_handle(g >> 1)
        ewitness = Ge.dc_canon(E1, rep, E2)
        u2 = A.graph.t(e)
        Au2 = A.vgroups[u2]
        f_w = self.m1.twist_omega(f)
        g_w = self.m2.twist_omega(g)
        t_raw = Au2.mul(Au2.mul(f_w, A.omega(e).apply(rep)), Au2.inv(g_w))
        v2 = self.m1.source.graph.t(f)
        w2 = self.m2.source.graph.t(g)
        u = A.graph.o(e)
        Au = A.vgroups[u]
        lam = APath(A, u, [self.m1.twist_alpha(f), Au2.inv(f_w)], [e])
        pi = APath(A, u, [self.m2.twist_alpha(g), Au2.inv(g_w)], [e])
        b_next = reduce_apath(apath_concat(apath_concat(
            x.anchor1, APath(A, u, [Au.inv(bc0)], [])), lam))
        c_next = reduce_apath(apath_concat(apath_concat(
            x.anchor2, APath(A, u, [cc0], [])), pi))
        dst, created = self._intern(v2, w2, t_raw, b_next, c_next, x.component)
        key = self._edge_key(f, g, idx, dst, ewitness)
        if key in self.edge_keys:
            return
        self.edge_keys.add(key)
        self.edges.append(ProductEdge(f, g, rep, ewitness, idx, dst, created))

    # --- expansion solvers ---

    def _solve_edges(self, x, f, g, e):
        """Representatives (one per edge double coset) with origin x, plus
        factors (b0, c0) with f_alpha alpha(rep) g_alpha^-1 = b0 . witness . c0."""
        A = self.A
        u = A.graph.o(e)
        Au = A.vgroups[u]
        Ge = A.egroup(e)
        H = self._sub1(x.v)
        K = self._sub2(x.w)
        f_a = self.m1.twist_alpha(f)
        g_a = self.m2.twist_alpha(g)
        E1 = self.m1.edge_image_handle(f >> 1)
        E2 = self.m2.edge_image_handle(g >> 1)
        alpha = A.alpha(e)
        kind = getattr(Au, "kind", None)

        def factors(rep):
            o_raw = Au.mul(Au.mul(f_a, alpha.apply(rep)), Au.inv(g_a))
            bc0, cc0 = Au.dc_factor(H, x.witness, K, o_raw)
            return rep, bc0, cc0

        if kind == "finite":
            out = []
            seen = set()
            for a in range(Ge.order()):
                o_raw = Au.mul(Au.mul(f_a, alpha.apply(a)), Au.inv(g_a))
                if not Au.dc_eq(H, x.witness, K, o_raw):
                    continue
                wcan = Ge.dc_canon(E1, a, E2)
                if wcan in seen:
                    continue
                seen.add(wcan)
                out.append(factors(a))
            return out

        if kind == "abelian":
            return self._solve_abelian(x, Au, Ge, H, K, f_a, g_a, E1, E2, alpha, factors)

        if kind == "free":
            return self._solve_free_cyclic(x, Au, Ge, H, K, f_a, g_a, E1, E2,
                                           alpha, factors)

        raise UnsupportedExpansion(f"no expansion solver for vertex backend {kind}")

    def _solve_abelian(self, x, Au, Ge, H, K, f_a, g_a, E1, E2, alpha, factors):
        from .intlattice import lin_solve, preimage_lattice
        if getattr(Ge, "kind", None) != "abelian":
            raise UnsupportedExpansion("abelian vertex with non-abelian edge group")
        # alpha(a) must fall in witness - f_a + g_a + (H + K)
        S = H.lat.sum(K.lat)
        target = [xw - fa + ga for xw, fa, ga in zip(x.witness, f_a, g_a)]
        M = [list(alpha.apply(gen)) for gen in Ge.generators()]
        rows = M + [list(r) for r in S.rows]
        sol = lin_solve(rows, target)
        if sol is None:
            return []
        a0 = Ge.canon(tuple(sol[:len(M)]))
        P = preimage_lattice(M, Ge.n, S)
        Se = E1.lat.sum(E2.lat)
        if not Se.is_sublattice_of(P):
            raise UnsupportedExpansion("edge-group cosets do not refine the fan")
        if Se.index_in(P) is None:
            raise UnsupportedExpansion("infinite-edge-fan")
        out = []
        for rep in Se.transversal(P):
            out.append(factors(Ge.mul(a0, Ge.canon(tuple(rep)))))
        return out

    def _solve_free_cyclic(self, x, Au, Ge, H, K, f_a, g_a, E1, E2, alpha, factors):
        from .backends.rational import CosetNFA, PowerPattern
        from .words import winv, wreduce
        gens = Ge.generators()
        if len(gens) != 1:
            raise UnsupportedExpansion("free vertex group with non-cyclic edge group")
        z = gens[0]
        c = alpha.apply(z)
        if not c:
            raise UnsupportedExpansion("edge map with trivial image")

        def exponent(handle):
            if getattr(Ge, "kind", None) == "abelian":
                return abs(handle.lat.rows[0][0]) if handle.lat.rows else 0
            return len(handle.gens[0]) // len(wreduce(z)) if handle.gens else 0

        k1 = exponent(E1)
        k2 = exponent(E2)
        d0 = gcd(k1, k2)
        nfa = CosetNFA(H, x.witness, K, prefix=winv(f_a), suffix=g_a)
        pattern = PowerPattern(nfa, c)

        def rep_of(n):
            if getattr(Ge, "kind", None) == "abelian":
                return Ge.canon((n,) + (0,) * (Ge.n - 1))
            letter = z[0]
            return tuple([letter] * n) if n >= 0 else tuple([-letter] * (-n))

        if d0 == 0:
            if pattern.infinite():
                raise UnsupportedExpansion("infinite-edge-fan")
            return [factors(rep_of(n)) for n in pattern.finite_solutions()]
        sols = pattern.solutions_mod(d0)
        return [factors(rep_of(n)) for r, n in sorted(sols.items())]

    # --- reports ---

    def base_component_indices(self):
        return [i for i, x in enumerate(self.vertices) if x.component == 0]

    def base_component_exact(self):
        pend = set(self.frontier) | set(self.unexpandable)
        return not any(i in pend or not self.vertices[i].expanded
                       for i in self.base_component_indices())

    def intersection_generators(self):
        """(list of closed A-paths at the base image, exactness flag).

        Spanning-tree circuits for non-tree edges plus vertex-group
        generators conjugated by the anchors; exact when the base component
        is fully explored, a lower bound otherwise."""
        gens = []
        base_idxs = set(self.base_component_indices())
        for i in sorted(base_idxs):
            x = self.vertices[i]
            u = self.m1.vmap[x.v]
            Au = self.A.vgroups[u]
            D = self.vertex_group(i)
            for d in D.gens:
                if Au.eq(d, Au.identity()):
                    continue
                b_elt = Au.mul(Au.mul(x.witness, d), Au.inv(x.witness))
                path = reduce_apath(apath_concat(apath_concat(
                    x.anchor1, APath(self.A, u, [b_elt], [])),
                    apath_inverse(x.anchor1)))
                gens.append(path)
        for h in self.edges:
            if h.tree or h.src not in base_idxs:
                continue
            xs = self.vertices[h.src]
            xd = self.vertices[h.dst]
            A = self.A
            e = self.m1.edge_image(h.f)
            u = A.graph.o(e)
            u2 = A.graph.t(e)
            Au = A.vgroups[u]
            Au2 = A.vgroups[u2]
            H = self._sub1(xs.v)
            K = self._sub2(xs.w)
            alpha = A.alpha(e)
            f_a = self.m1.twist_alpha(h.f)
            g_a = self.m2.twist_alpha(h.g)
            f_w = self.m1.twist_omega(h.f)
            g_w = self.m2.twist_omega(h.g)
            o_raw = Au.mul(Au.mul(f_a, alpha.apply(h.rep)), Au.inv(g_a))
            bc0, cc0 = Au.dc_factor(H, xs.witness, K, o_raw)
            t_raw = Au2.mul(Au2.mul(f_w, A.omega(e).apply(h.rep)), Au2.inv(g_w))
            H2 = self._sub1(xd.v)
            K2 = self._sub2(xd.w)
            bc1, cc1 = Au2.dc_factor(H2, xd.witness, K2, t_raw)
            lam = APath(A, u, [f_a, Au2.inv(f_w)], [e])
            z = apath_concat(apath_concat(apath_concat(
                xs.anchor1, APath(A, u, [Au.inv(bc0)], [])), lam),
                APath(A, u2, [bc1], []))
            z = reduce_apath(apath_concat(z, apath_inverse(xd.anchor1)))
            gens.append(z)
        return gens, self.base_component_exact()

    def ray_certificate(self, min_periods=3):
        """Detect the periodic strictly-ascending ray pattern on the base
        component; returns a description dict or None.

        The pattern: the explored base component is a simple outbound path,
        every step repeats a fixed signature (source vertices, edge pair and
        the two transport indices), and each period multiplies the vertex
        group index gap by at least 2 (an ascending union)."""
        idxs = self.base_component_indices()
        if len(idxs) < 4 or self.base_component_exact():
            return None
        comp_edges = [h for h in self.edges if h.src in set(idxs)]
        if any(not h.tree for h in comp_edges):
            return None
        succ = {}
        for h in comp_edges:
            if h.src in succ:
                return None
            succ[h.src] = h
        chain = []
        cur = idxs[0]
        while cur in succ:
            chain.append(succ[cur])
            cur = succ[cur].dst
        if len(chain) + 1 != len(idxs):
            return None
        sigs = []
        for h in chain:
            a_idx, w_idx = self._transport_indices(self.edges.index(h))
            xs, xd = self.vertices[h.src], self.vertices[h.dst]
            sigs.append((xs.v, xs.w, h.f, h.g, a_idx, w_idx))
        for period in range(1, len(sigs) // min_periods + 1):
            window = sigs[-min_periods * period:]
            if len(window) < min_periods * period:
                continue
            if any(window[i] != window[i % period] for i in range(len(window))):
                continue
            ascent = 1
            ok = True
            for sig in window[:period]:
                a_idx, w_idx = sig[4], sig[5]
                if a_idx != 1 or w_idx is None:
                    ok = False
                    break
                ascent *= w_idx
            if ok and ascent >= 2:
                return {"verdict": "provably infinite ascending union",
                        "period": period,
                        "ascent": ascent,
                        "ray_length": len(chain)}
        return None

    def _transport_indices(self, eidx):
        """([D_src : alpha-transport of D_h], [D_dst : omega-transport])."""
        A = self.A
        h = self.edges[eidx]
        e = self.m1.edge_image(h.f)
        Eh = self.edge_group(eidx)
        u, u2 = A.graph.o(e), A.graph.t(e)
        Au, Au2 = A.vgroups[u], A.vgroups[u2]
        g_a = self.m2.twist_alpha(h.g)
        g_w = self.m2.twist_omega(h.g)
        xs, xd = self.vertices[h.src], self.vertices[h.dst]
        H = self._sub1(xs.v)
        K = self._sub2(xs.w)
        alpha = A.alpha(e)
        f_a = self.m1.twist_alpha(h.f)
        o_raw = Au.mul(Au.mul(f_a, alpha.apply(h.rep)), Au.inv(g_a))
        bc0, cc0 = Au.dc_factor(H, xs.witness, K, o_raw)
        tr_a = Au.subgroup([
            Au.mul(Au.mul(Au.mul(Au.mul(cc0, g_a), alpha.apply(y)),
                          Au.inv(g_a)), Au.inv(cc0))
            for y in Eh.gens])
        D_src = self.vertex_group(h.src)
        a_idx = tr_a.index_in(D_src)
        f_w = self.m1.twist_omega(h.f)
        t_raw = Au2.mul(Au2.mul(f_w, A.omega(e).apply(h.rep)), Au2.inv(g_w))
        H2 = self._sub1(xd.v)
        K2 = self._sub2(xd.w)
        bc1, cc1 = Au2.dc_factor(H2, xd.witness, K2, t_raw)
        omega = A.omega(e)
        tr_w = Au2.subgroup([
            Au2.mul(Au2.mul(Au2.mul(Au2.mul(cc1, g_w), omega.apply(y)),
                            Au2.inv(g_w)), Au2.inv(cc1))
            for y in Eh.gens])
        D_dst = self.vertex_group(h.dst)
        w_idx = tr_w.index_in(D_dst)
        return a_idx, w_idx

    def degree_stats(self):
        out = {}
        for h in self.edges:
            out[h.src] = out.get(h.src, 0) + 1
        return out

    def dump(self):
        """Deterministic machine-readable description."""
        A = self.A
        lines = []
        for i, x in enumerate(self.vertices):
            u = self.m1.vmap[x.v]
            Au = A.vgroups[u]
            D = self.vertex_group(i)
            lines.append(
                f"vertex {i}: pair=({self.m1.source.graph.vnames[x.v]},"
                f"{self.m2.source.graph.vnames[x.w]}) witness={Au.serialize(x.witness)!r}"
                f" group=<{', '.join(repr(Au.serialize(g)) for g in D.gens)}>"
                f" component={x.component}")
        for j, h in enumerate(self.edges):
            e = self.m1.edge_image(h.f)
            Ge = A.egroup(e)
            E = self.edge_group(j)
            lines.append(
                f"edge {j}: {h.src}->{h.dst}"
                f" pair=({self.m1.source.graph.edge_name(h.f)},"
                f"{self.m2.source.graph.edge_name(h.g)})"
                f" witness={Ge.serialize(h.witness)!r}"
                f" group=<{', '.join(repr(Ge.serialize(g)) for g in E.gens)}>")
        lines.append(f"complete: {self.complete}")
        if self.unexpandable:
            for idx in sorted(self.unexpandable):
                lines.append(f"unexpandable {idx}: {self.unexpandable[idx]}")
        return "\n".join(lines)

    def dot(self):
        lines = ["digraph fragment {"]
        for i, x in enumerate(self.vertices):
            u = self.m1.vmap[x.v]
            Au = self.A.vgroups[u]
            D = self.vertex_group(i)
            label = (f"({self.m1.source.graph.vnames[x.v]},"
                     f"{self.m2.source.graph.vnames[x.w]}) "
                     f"{Au.serialize(x.witness)!r} "
                     f"<{','.join(repr(Au.serialize(g)) for g in D.gens)}>")
            lines.append(f'  {i} [label="{label}"];')
        for h in self.edges:
            lines.append(f"  {h.src} -> {h.dst};")
        lines.append("}")
        return "\n".join(lines)

    def to_json(self):
        """Machine-readable dump: the gog file shape extended with witness,
        source-pair and group fields."""
        A = self.A
        verts = {}
        for i, x in enumerate(self.vertices):
            u = self.m1.vmap[x.v]
            Au = A.vgroups[u]
            D = self.vertex_group(i)
            verts[f"x{i}"] = {
                "pair": [self.m1.source.graph.vnames[x.v],
                         self.m2.source.graph.vnames[x.w]],
                "over": A.graph.vnames[u],
                "witness": Au.serialize(x.witness),
                "group": [Au.serialize(g) for g in D.gens],
                "component": x.component,
            }
        edges = []
        for j, h in enumerate(self.edges):
            e = self.m1.edge_image(h.f)
            Ge = A.egroup(e)
            E = self.edge_group(j)
            edges.append({
                "name": f"h{j}",
                "from": f"x{h.src}",
                "to": f"x{h.dst}",
                "pair": [self.m1.source.graph.edge_name(h.f),
                         self.m2.source.graph.edge_name(h.g)],
                "over": A.graph.edge_name(e),
                "witness": Ge.serialize(h.witness),
                "group": [Ge.serialize(g) for g in E.gens],
            })
        return {"vertices": verts, "edges": edges, "complete": self.complete,
                "unexpandable": {str(k): v for k, v in self.unexpandable.items()}}


def build_product(m1, m2, budget=64):
    frag = AProductFragment(m1, m2)
    frag.add_base()
    return frag.build(budget=budget)
