"""Ground-truth reliability by exhaustive state enumeration and by pivotal
decomposition (deletion-contraction with series-parallel reductions).

These are the independent oracles every other computation is checked
against.  All arithmetic is exact rational; answers are never rounded.
"""

from __future__ import annotations

from dataclasses import dataclass

from .families import ExplicitGraph
from .rings import Q, rational

STATE_SPACE_LIMIT = 28


class StateSpaceTooLarge(ValueError):
    """Enumeration guard: more than STATE_SPACE_LIMIT random elements."""


class _DSU:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def rel2_enum(g: ExplicitGraph) -> Q:
    """Two-terminal reliability by summing over all up/down states of edges
    and imperfect nodes; connectivity via disjoint-set union."""
    if g.terminals is None:
        raise ValueError("two-terminal oracle needs terminals")
    return _enumerate(g, all_terminal=False)


def relA_enum(g: ExplicitGraph) -> Q:
    """All-terminal reliability (node reliabilities factored out / ignored)."""
    return _enumerate(g, all_terminal=True)


def _enumerate(g: ExplicitGraph, all_terminal: bool) -> Q:
    index = {nid: i for i, (nid, _) in enumerate(g.nodes)}
    nn = len(g.nodes)
    edges = [(index[u], index[v], rational(r)) for u, v, r in g.edges]

    if all_terminal:
        random_nodes: list[tuple[int, Q]] = []
    else:
        random_nodes = [
            (index[nid], rational(r)) for nid, r in g.nodes if rational(r) != 1
        ]
    random_edges = [(u, v, r) for u, v, r in edges if r != 1]
    sure_edges = [(u, v) for u, v, r in edges if r == 1]

    n_random = len(random_edges) + len(random_nodes)
    if n_random > STATE_SPACE_LIMIT:
        raise StateSpaceTooLarge(f"{n_random} random elements > {STATE_SPACE_LIMIT}")

    if all_terminal:
        src = dst = None
    else:
        src, dst = (index[t] for t in g.terminals)

    total = Q(0)
    ne = len(random_edges)
    for state in range(1 << n_random):
        prob = Q(1)
        node_up = None
        if random_nodes:
            node_up = [True] * nn
            for k, (nid, r) in enumerate(random_nodes):
                if state >> (ne + k) & 1:
                    prob *= r
                else:
                    prob *= 1 - r
                    node_up[nid] = False
        if not all_terminal and node_up is not None:
            if not (node_up[src] and node_up[dst]):
                continue  # terminals must be up; probability not counted

        dsu = _DSU(nn)
        for k, (u, v, r) in enumerate(random_edges):
            if state >> k & 1:
                prob *= r
                if node_up is None or (node_up[u] and node_up[v]):
                    dsu.union(u, v)
            else:
                prob *= 1 - r
        for u, v in sure_edges:
            if node_up is None or (node_up[u] and node_up[v]):
                dsu.union(u, v)

        if all_terminal:
            root = dsu.find(0)
            if all(dsu.find(i) == root for i in range(1, nn)):
                total += prob
        else:
            if dsu.find(src) == dsu.find(dst):
                total += prob
    return total


# -- pivotal decomposition ----------------------------------------------------


@dataclass
class _Graph:
    """Mutable multigraph for the factoring algorithm.

    nodes: id -> reliability; edges: list of [u, v, reliability].
    Parallel edges appear as repeated (u, v) pairs and are merged lazily.
    """

    nodes: dict
    edges: list
    src: object
    dst: object

    def degree(self, x) -> int:
        return sum(1 for u, v, _ in self.edges if u == x or v == x)


def rel2_factoring(g: ExplicitGraph) -> Q:
    """Two-terminal reliability by pivotal decomposition: greedy series and
    parallel reductions, plus the three-way edge/node pivot when no
    reduction applies.  Exactly equals rel2_enum."""
    if g.terminals is None:
        raise ValueError("two-terminal oracle needs terminals")
    nodes = {nid: rational(r) for nid, r in g.nodes}
    edges = [[u, v, rational(r)] for u, v, r in g.edges]
    src, dst = g.terminals
    if src == dst:
        return nodes[src]
    # Condition on the two terminals being up; their reliabilities multiply
    # the conditional connection probability.
    factor = nodes[src] * nodes[dst]
    nodes[src] = Q(1)
    nodes[dst] = Q(1)
    return factor * _rel2_conditional(_Graph(nodes, edges, src, dst))


def _rel2_conditional(g: _Graph) -> Q:
    """Rel2 given that both terminals are up (their reliabilities are 1)."""
    if g.src == g.dst:
        return Q(1)

    # Drop dead elements.
    g.edges = [e for e in g.edges if e[2] != 0 and e[0] != e[1]]
    reachable = _component(g)
    if g.dst not in reachable:
        return Q(0)
    g.edges = [e for e in g.edges if e[0] in reachable and e[1] in reachable]
    g.nodes = {x: r for x, r in g.nodes.items() if x in reachable}

    # Parallel reduction: merge duplicate (u, v) pairs.
    seen: dict = {}
    merged = []
    changed = False
    for u, v, r in g.edges:
        key = (u, v) if u <= v else (v, u)
        if key in seen:
            e = merged[seen[key]]
            e[2] = e[2] + r - e[2] * r
            changed = True
        else:
            seen[key] = len(merged)
            merged.append([u, v, r])
    g.edges = merged

    # Degree-2 non-terminal node with perfect reliability only? No: series
    # reduction absorbs the middle node's reliability into the edge product.
    for x in list(g.nodes):
        if x in (g.src, g.dst):
            continue
        incident = [e for e in g.edges if e[0] == x or e[1] == x]
        if len(incident) == 1:
            # dangling node: irrelevant
            g.edges.remove(incident[0])
            del g.nodes[x]
            changed = True
        elif len(incident) == 2:
            e1, e2 = incident
            u = e1[0] if e1[1] == x else e1[1]
            v = e2[0] if e2[1] == x else e2[1]
            if u != v:
                r = e1[2] * e2[2] * g.nodes[x]
                g.edges.remove(e1)
                g.edges.remove(e2)
                g.edges.append([u, v, r])
                del g.nodes[x]
                changed = True
    if changed:
        return _rel2_conditional(g)

    # No reduction applies: pivot on an edge incident to a terminal
    # (preferring the highest-degree neighbour), per the three-way
    # deletion / contraction / node-failure split.
    pivot = None
    best = -1
    for e in g.edges:
        if e[0] in (g.src, g.dst) or e[1] in (g.src, g.dst):
            u = e[1] if e[0] in (g.src, g.dst) else e[0]
            d = g.degree(u)
            if d > best:
                best = d
                pivot = e
    if pivot is None:  # unreachable: dst is reachable, so it has an edge
        raise AssertionError("no pivot edge adjacent to a terminal")

    pivot_val = pivot[:]
    u, v, pe = pivot
    # Orient so that v is the terminal ("t" of the pivot formula, perfect
    # after conditioning) and u the neighbour absorbed on contraction.
    if u in (g.src, g.dst):
        u, v = v, u
    if u in (g.src, g.dst):
        # Edge joins the terminals directly; both are conditioned up.
        g_del = _clone(g)
        g_del.edges.remove(pivot_val)
        return pe + (1 - pe) * _rel2_conditional(g_del)
    pu = g.nodes[u]

    # delete e
    g_del = _clone(g)
    g_del.edges.remove(pivot_val)
    term_del = (1 - pe) * _rel2_conditional(g_del)

    # contract e: merge u into v (u must be up)
    g_con = _clone(g)
    g_con.edges = [e for e in g_con.edges if e != pivot_val]
    for e in g_con.edges:
        if e[0] == u:
            e[0] = v
        if e[1] == u:
            e[1] = v
    del g_con.nodes[u]
    term_con = pe * pu * _rel2_conditional(g_con)

    # u fails: remove u entirely
    g_fail = _clone(g)
    g_fail.edges = [e for e in g_fail.edges if u not in (e[0], e[1])]
    del g_fail.nodes[u]
    term_fail = pe * (1 - pu) * _rel2_conditional(g_fail)

    return term_del + term_con + term_fail


def _clone(g: _Graph) -> _Graph:
    return _Graph({k: v for k, v in g.nodes.items()}, [e[:] for e in g.edges], g.src, g.dst)


def _component(g: _Graph) -> set:
    adj: dict = {}
    for u, v, _ in g.edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    seen = {g.src}
    stack = [g.src]
    while stack:
        x = stack.pop()
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen
