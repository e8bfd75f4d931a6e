"""File formats: graphs of groups, immersions and decorated graphs.

Everything is JSON.  A gog file has `vertices` (name -> group spec),
`edges` (list of {name, from, to, group, alpha, omega}) and an optional
`basepoint`.  Group specs: {"free": r} | {"Z": true} |
{"abelian": {"rank": r, "torsion": [...]}} | {"finite": {"table": [[...]]}} |
{"trivial": true}.  Elements are serialized per backend: free-group words as
strings over a..z (uppercase = inverse), abelian elements as integer lists
(rank-1 groups accept bare integers), finite elements as table indices.
`alpha`/`omega` list the images of the edge group's canonical generators;
non-injective maps are rejected with a violation report.

A morphism file carries its source graph inline: vertex groups are subgroups
of the target's groups (`over` + generator list), edges reference a directed
target edge by name (`e` or `e^-1`) and carry the two twisting elements.

A decorated file ({"decorated": true, ...}) abstracts a graph of virtually Z
groups to its index data; indices are positive integers or "inf".
"""

from __future__ import annotations

import json

from .backends import (AbelianGroup, FiniteGroup, FreeGroup, Mono,
                       SubgroupBackend)
from .fgip import DecoratedGraph
from .gog import APath, GraphOfGroups, validate_gog
from .graphs import Graph
from .morphism import GoGMorphism


class ParseError(ValueError):
    pass


def parse_group_spec(spec):
    if not isinstance(spec, dict):
        raise ParseError(f"group spec must be an object, got {spec!r}")
    if spec.get("trivial"):
        return FiniteGroup.trivial()
    if spec.get("Z"):
        return AbelianGroup.Z()
    if "free" in spec:
        return FreeGroup(int(spec["free"]))
    if "abelian" in spec:
        body = spec["abelian"]
        return AbelianGroup(int(body.get("rank", 0)),
                            [int(d) for d in body.get("torsion", [])])
    if "finite" in spec:
        return FiniteGroup(spec["finite"]["table"])
    raise ParseError(f"unknown group spec {spec!r}")


def group_spec_of(G):
    if isinstance(G, FreeGroup):
        return {"free": G.rank}
    if isinstance(G, AbelianGroup):
        if G.rank == 1 and not G.torsion:
            return {"Z": True}
        return {"abelian": {"rank": G.rank, "torsion": list(G.torsion)}}
    if isinstance(G, FiniteGroup):
        if G.n == 1:
            return {"trivial": True}
        return {"finite": {"table": [list(r) for r in G.table]}}
    raise ParseError(f"cannot serialize group {G!r}")


def parse_gog(data):
    """(GraphOfGroups, basepoint index or None)."""
    if isinstance(data, str):
        data = json.loads(data)
    try:
        vnames = list(data["vertices"].keys())
    except (KeyError, AttributeError, TypeError) as exc:
        raise ParseError(f"missing or malformed 'vertices': {exc}")
    vid = {n: i for i, n in enumerate(vnames)}
    if len(vid) != len(vnames):
        raise ParseError("duplicate vertex names")
    vgroups = [parse_group_spec(data["vertices"][n]) for n in vnames]
    org, tgt, enames, egroups, monos = [], [], [], [], []
    for ed in data.get("edges", []):
        name = ed.get("name", f"e{len(enames)}")
        if name in enames:
            raise ParseError(f"duplicate edge name {name!r}")
        if ed["from"] not in vid or ed["to"] not in vid:
            raise ParseError(f"edge {name!r} references unknown vertices")
        o, t = vid[ed["from"]], vid[ed["to"]]
        Ge = parse_group_spec(ed["group"])
        Go, Gt = vgroups[o], vgroups[t]
        try:
            alpha = Mono(Ge, Go, [Go.parse(x) for x in ed["alpha"]])
            omega = Mono(Ge, Gt, [Gt.parse(x) for x in ed["omega"]])
        except ValueError as exc:
            raise ParseError(f"edge {name!r}: {exc}")
        org.append(o)
        tgt.append(t)
        enames.append(name)
        egroups.append(Ge)
        monos.append((alpha, omega))
    graph = Graph(len(vnames), list(zip(org, tgt)), vnames=vnames, enames=enames)
    A = GraphOfGroups(graph, vgroups, egroups, monos)
    violations = validate_gog(A)
    if violations:
        raise ParseError("invalid graph of groups: " +
                         "; ".join(str(v) for v in violations))
    base = None
    if "basepoint" in data:
        if data["basepoint"] not in vid:
            raise ParseError(f"unknown basepoint {data['basepoint']!r}")
        base = vid[data["basepoint"]]
    return A, base


def serialize_gog(A, basepoint=None):
    g = A.graph
    edges = []
    for p in range(g.n_pairs):
        alpha, omega = A.monos[p]
        Ge = A.egroups[p]
        edges.append({
            "name": g.enames[p],
            "from": g.vnames[g.org[p]],
            "to": g.vnames[g.tgt[p]],
            "group": group_spec_of(Ge),
            "alpha": [alpha.codomain.serialize(x) for x in alpha.images],
            "omega": [omega.codomain.serialize(x) for x in omega.images],
        })
    out = {"vertices": {g.vnames[v]: group_spec_of(A.vgroups[v])
                        for v in range(g.nv)},
           "edges": edges}
    if basepoint is not None:
        out["basepoint"] = g.vnames[basepoint]
    return out


def parse_decorated(data):
    if isinstance(data, str):
        data = json.loads(data)
    vnames = list(data["vertices"])
    vid = {n: i for i, n in enumerate(vnames)}
    pairs, ia, io_, enames = [], [], [], []
    for ed in data.get("edges", []):
        pairs.append((vid[ed["from"]], vid[ed["to"]]))
        a, o = ed["indices"]
        ia.append(None if a == "inf" else int(a))
        io_.append(None if o == "inf" else int(o))
        enames.append(ed.get("name", f"e{len(enames)}"))
    graph = Graph(len(vnames), pairs, vnames=vnames, enames=enames)
    return DecoratedGraph(graph, ia, io_)


def _edge_by_name(A, name):
    g = A.graph
    for p in range(g.n_pairs):
        if g.enames[p] == name:
            return 2 * p
        if g.enames[p] + "^-1" == name:
            return 2 * p + 1
    raise ParseError(f"unknown target edge {name!r}")


def parse_morphism(data, target, target_base=None):
    """(GoGMorphism, source basepoint index or None)."""
    if isinstance(data, str):
        data = json.loads(data)
    g = target.graph
    tvid = {n: i for i, n in enumerate(g.vnames)}
    vnames = list(data["vertices"].keys())
    vid = {n: i for i, n in enumerate(vnames)}
    vmap, vgroups, vmonos = [], [], []
    for n in vnames:
        body = data["vertices"][n]
        if body["over"] not in tvid:
            raise ParseError(f"vertex {n!r} lies over unknown vertex")
        u = tvid[body["over"]]
        G = target.vgroups[u]
        gens = [G.parse(x) for x in body.get("subgroup", [])]
        handle = G.subgroup(gens)
        SB = SubgroupBackend(G, handle)
        vmap.append(u)
        vgroups.append(SB)
        vmonos.append(Mono(SB, G, SB.generators()))
    org, tgt, enames, egroups, monos = [], [], [], [], []
    emap, emonos, twists = [], [], []
    for ed in data.get("edges", []):
        name = ed.get("name", f"f{len(enames)}")
        e = _edge_by_name(target, ed["over"])
        o, t = vid[ed["from"]], vid[ed["to"]]
        if vmap[o] != g.o(e) or vmap[t] != g.t(e):
            raise ParseError(f"edge {name!r} does not respect incidence")
        Ge = target.egroup(e)
        gens = [Ge.parse(x) for x in ed.get("subgroup", [])]
        handle = Ge.subgroup(gens)
        SB = SubgroupBackend(Ge, handle)
        Gto, Gtt = target.vgroups[g.o(e)], target.vgroups[g.t(e)]
        ta = Gto.parse(ed["twists"]["alpha"]) if "twists" in ed else Gto.identity()
        tw = Gtt.parse(ed["twists"]["omega"]) if "twists" in ed else Gtt.identity()
        alpha_m = Mono(SB, vgroups[o],
                       [Gto.mul(Gto.mul(ta, target.alpha(e).apply(s)), Gto.inv(ta))
                        for s in SB.generators()])
        omega_m = Mono(SB, vgroups[t],
                       [Gtt.mul(Gtt.mul(tw, target.omega(e).apply(s)), Gtt.inv(tw))
                        for s in SB.generators()])
        org.append(o)
        tgt.append(t)
        enames.append(name)
        egroups.append(SB)
        monos.append((alpha_m, omega_m))
        emap.append(e)
        emonos.append(Mono(SB, Ge, SB.generators()))
        twists.append((ta, tw))
    graph = Graph(len(vnames), list(zip(org, tgt)), vnames=vnames, enames=enames)
    B = GraphOfGroups(graph, vgroups, egroups, monos)
    m = GoGMorphism(B, target, vmap, emap, vmonos, emonos, twists)
    base = vid[data["basepoint"]] if "basepoint" in data else None
    return m, base


def serialize_morphism(m, basepoint=None):
    S, T = m.source, m.target
    gs, gt = S.graph, T.graph
    verts = {}
    for v in range(gs.nv):
        G = T.vgroups[m.vmap[v]]
        verts[gs.vnames[v]] = {
            "over": gt.vnames[m.vmap[v]],
            "subgroup": [G.serialize(x) for x in m.vmonos[v].images],
        }
    edges = []
    for p in range(gs.n_pairs):
        e = m.emap[p]
        Ge = T.egroup(e)
        Go = T.vgroups[gt.o(e)]
        Gt = T.vgroups[gt.t(e)]
        edges.append({
            "name": gs.enames[p],
            "from": gs.vnames[gs.org[p]],
            "to": gs.vnames[gs.tgt[p]],
            "over": gt.edge_name(e),
            "subgroup": [Ge.serialize(x) for x in m.emonos[p].images],
            "twists": {"alpha": Go.serialize(m.twists[p][0]),
                       "omega": Gt.serialize(m.twists[p][1])},
        })
    out = {"vertices": verts, "edges": edges}
    if basepoint is not None:
        out["basepoint"] = gs.vnames[basepoint]
    return out


def parse_apath(data, A, base):
    """A-path from [a0, "e1", a1, ...] starting at vertex index base."""
    if not isinstance(data, list) or len(data) % 2 == 0:
        raise ParseError("an A-path is an odd-length alternating list")
    elems, edges = [], []
    v = base
    for i, item in enumerate(data):
        if i % 2 == 0:
            elems.append(A.vgroups[v].parse(item))
        else:
            e = _edge_by_name(A, item)
            if A.graph.o(e) != v:
                raise ParseError(f"edge {item!r} does not start at {A.graph.vnames[v]!r}")
            edges.append(e)
            v = A.graph.t(e)
    return APath(A, base, elems, edges)


def load(path):
    with open(path) as fh:
        return json.load(fh)
