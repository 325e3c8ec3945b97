"""Digraph view of a square max-plus matrix.

A square matrix and a weighted digraph are two descriptions of the same
object: there is an arc (i, j) of weight a_ij exactly when the entry is
finite.  This module holds the graph-side machinery: circuits and their
means, Karp's maximum cycle mean, the critical graph, cyclicity classes,
and principal eigenvectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .tropical import (
    EPSILON,
    DimensionMismatchError,
    TropicalMatrix,
    TropicalScalar,
    as_value,
    diag_conjugate,
    DiagonalScaling,
    kleene_star,
)


class WeightedDigraph:
    """Arc-list digraph with adjacency and reverse-adjacency indexes."""

    __slots__ = ("n", "arcs", "_out", "_in", "_weight")

    def __init__(self, n, arcs):
        self.n = n
        self.arcs = tuple((u, v, as_value(w)) for u, v, w in arcs)
        self._out = [[] for _ in range(n)]
        self._in = [[] for _ in range(n)]
        self._weight = {}
        for u, v, w in self.arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u}, {v}) out of range")
            if (u, v) in self._weight:
                raise ValueError(f"duplicate arc ({u}, {v})")
            self._out[u].append((v, w))
            self._in[v].append((u, w))
            self._weight[(u, v)] = w

    def out_arcs(self, u):
        return self._out[u]

    def in_arcs(self, v):
        return self._in[v]

    def weight(self, u, v):
        return self._weight.get((u, v))

    @property
    def arc_count(self):
        return len(self.arcs)

    def __repr__(self):
        return f"WeightedDigraph(n={self.n}, m={self.arc_count})"


def build_graph(a: TropicalMatrix) -> WeightedDigraph:
    """The digraph of a square matrix: one arc per finite entry."""
    if not a.is_square:
        raise DimensionMismatchError("only square matrices define a digraph")
    arcs = sorted((i, j, v) for (i, j), v in a.entries.items())
    return WeightedDigraph(a.rows, arcs)


def tarjan_scc(n, successors):
    """Strongly connected components (iterative Tarjan).

    ``successors(u)`` yields the heads of arcs leaving u.  Components come
    out in reverse topological order of the condensation.
    """
    index = [None] * n
    lowlink = [0] * n
    on_stack = [False] * n
    stack = []
    components = []
    counter = 0
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, iter(successors(root)))]
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] is None:
                    index[w] = lowlink[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(successors(w))))
                    advanced = True
                    break
                if on_stack[w]:
                    if index[w] < lowlink[v]:
                        lowlink[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if lowlink[v] < lowlink[parent]:
                    lowlink[parent] = lowlink[v]
            if lowlink[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                components.append(sorted(comp))
    return components


@dataclass(frozen=True, slots=True)
class CircuitRecord:
    """An elementary circuit: distinct nodes in cyclic order plus its weight.

    The node tuple is rotated so it starts at the smallest node, which makes
    records comparable regardless of where the cycle was entered.
    """

    nodes: tuple
    weight: object

    def __post_init__(self):
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("circuit nodes must be distinct")
        object.__setattr__(self, "weight", as_value(self.weight))

    @classmethod
    def from_nodes(cls, weight_of, nodes):
        """Build from a node sequence (no closing repeat); weights are looked up."""
        nodes = tuple(nodes)
        start = min(range(len(nodes)), key=lambda k: nodes[k])
        nodes = nodes[start:] + nodes[:start]
        total = 0
        for k, u in enumerate(nodes):
            v = nodes[(k + 1) % len(nodes)]
            w = weight_of(u, v)
            if w is None:
                raise ValueError(f"missing arc ({u}, {v}) for circuit {nodes}")
            total = total + w
        return cls(nodes, total)

    @property
    def length(self) -> int:
        return len(self.nodes)

    @property
    def mean(self):
        return as_value(Fraction(self.weight, self.length))

    def arc_pairs(self):
        ns = self.nodes
        return tuple((ns[k], ns[(k + 1) % len(ns)]) for k in range(len(ns)))

    def __str__(self):
        closed = self.nodes + (self.nodes[0],)
        return "(" + ",".join(str(v + 1) for v in closed) + ")"


def _karp_component(g: WeightedDigraph, comp):
    """Maximum cycle mean inside one strongly connected component."""
    pos = {v: k for k, v in enumerate(comp)}
    nc = len(comp)
    arcs = [
        (pos[u], pos[v], w)
        for u in comp
        for v, w in g.out_arcs(u)
        if v in pos
    ]
    if not arcs:
        return None
    # level[k][v] = best weight of a length-k walk from the component root to v
    level = [[None] * nc for _ in range(nc + 1)]
    level[0][0] = 0
    for k in range(1, nc + 1):
        prev = level[k - 1]
        cur = level[k]
        for u, v, w in arcs:
            base = prev[u]
            if base is None:
                continue
            cand = base + w
            if cur[v] is None or cand > cur[v]:
                cur[v] = cand
    top = level[nc]
    best = None
    for v in range(nc):
        if top[v] is None:
            continue
        worst = None
        for k in range(nc):
            base = level[k][v]
            if base is None:
                continue
            cand = Fraction(top[v] - base, nc - k)
            if worst is None or cand < worst:
                worst = cand
        if worst is not None and (best is None or worst > best):
            best = worst
    return None if best is None else as_value(best)


def karp_max_cycle_mean(g: WeightedDigraph) -> TropicalScalar:
    """Maximum mean weight over all elementary circuits; bottom if acyclic.

    Runs Karp's dynamic program independently on every strongly connected
    component and takes the best, so reducible matrices are handled.
    """
    best = None
    for comp in tarjan_scc(g.n, lambda u: (v for v, _ in g.out_arcs(u))):
        if len(comp) == 1 and g.weight(comp[0], comp[0]) is None:
            continue
        lam = _karp_component(g, comp)
        if lam is not None and (best is None or lam > best):
            best = lam
    return EPSILON if best is None else TropicalScalar(best)


@dataclass(frozen=True, slots=True)
class CriticalGraph:
    """Nodes and arcs lying on circuits whose mean equals the given rate."""

    nodes: frozenset
    arcs: frozenset
    rate: object

    @property
    def is_empty(self):
        return not self.nodes


def critical_graph(g: WeightedDigraph, rate) -> CriticalGraph:
    """The subgraph of arcs on circuits of mean exactly ``rate``.

    ``rate`` must be at least the maximum cycle mean (normally equal to it);
    a smaller value would leave a positive circuit after shifting, which is
    reported as an error.  An arc (u, v) is critical exactly when the
    shifted arc weight plus the best shifted return path v -> u is zero.
    """
    rate = as_value(rate)
    n = g.n
    dist = [[None] * n for _ in range(n)]
    for u, v, w in g.arcs:
        sw = w - rate
        if dist[u][v] is None or sw > dist[u][v]:
            dist[u][v] = sw
    for k in range(n):
        row_k = dist[k]
        for i in range(n):
            d_ik = dist[i][k]
            if d_ik is None:
                continue
            row_i = dist[i]
            for j in range(n):
                if row_k[j] is None:
                    continue
                cand = d_ik + row_k[j]
                if row_i[j] is None or cand > row_i[j]:
                    row_i[j] = cand
    for v in range(n):
        if dist[v][v] is not None and dist[v][v] > 0:
            raise ValueError("rate is below the maximum cycle mean")
    arcs = set()
    for u, v, w in g.arcs:
        back = dist[v][u]
        if v == u:
            back = 0 if back is None or back < 0 else back
        if back is None:
            continue
        if (w - rate) + back == 0:
            arcs.add((u, v))
    nodes = frozenset(u for u, _ in arcs) | frozenset(v for _, v in arcs)
    return CriticalGraph(nodes, frozenset(arcs), rate)


@dataclass(frozen=True, slots=True)
class CyclicityClasses:
    """Cyclicity of a critical graph and its node classes.

    ``sigma`` is the lcm over strongly connected components of the gcd of
    circuit lengths in that component.  Two critical nodes share a class
    exactly when some path between them inside the critical graph has
    length divisible by sigma; within one component that reduces to equal
    breadth-first levels modulo the component's own gcd.
    """

    sigma: int
    classes: tuple
    class_of: dict


def cyclicity_classes(cg: CriticalGraph) -> CyclicityClasses:
    if cg.is_empty:
        raise ValueError("empty critical graph has no cyclicity")
    nodes = sorted(cg.nodes)
    pos = {v: k for k, v in enumerate(nodes)}
    succ = [[] for _ in nodes]
    for u, v in cg.arcs:
        succ[pos[u]].append(pos[v])
    comps = tarjan_scc(len(nodes), lambda u: succ[u])
    sigma = 1
    classes = []
    class_of = {}
    for comp in sorted(comps, key=lambda c: nodes[c[0]]):
        comp_set = set(comp)
        root = comp[0]
        level = {root: 0}
        queue = [root]
        arcs_inside = []
        while queue:
            u = queue.pop()
            for v in succ[u]:
                if v not in comp_set:
                    continue
                arcs_inside.append((u, v))
                if v not in level:
                    level[v] = level[u] + 1
                    queue.append(v)
        g = 0
        for u, v in arcs_inside:
            g = math.gcd(g, level[u] + 1 - level[v])
        g = abs(g)
        if g == 0:
            # A component with no internal arcs carries no circuit; critical
            # graphs never produce this, but guard anyway.
            continue
        sigma = math.lcm(sigma, g)
        buckets = {}
        for u in comp:
            buckets.setdefault(level[u] % g, []).append(nodes[u])
        for _, members in sorted(buckets.items()):
            members = tuple(sorted(members))
            for v in members:
                class_of[v] = len(classes)
            classes.append(members)
    return CyclicityClasses(sigma, tuple(classes), class_of)


def principal_eigenvectors(a: TropicalMatrix):
    """Eigenvectors for the maximum eigenvalue, one per critical node.

    Returns a list of (node, column) pairs where each column is an n-by-1
    matrix x with A otimes x = rate otimes x exactly.  The columns are those
    of the Kleene star of the rate-shifted matrix at critical positions.
    """
    g = build_graph(a)
    lam = karp_max_cycle_mean(g)
    if lam.is_epsilon:
        raise ValueError("matrix has no finite eigenvalue (acyclic graph)")
    rate = lam.value
    shifted = diag_conjugate(a, DiagonalScaling.zeros(a.rows), -rate)
    star = kleene_star(shifted)
    critical = critical_graph(g, rate)
    out = []
    for node in sorted(critical.nodes):
        col = {
            (i, 0): v for (i, j), v in star.entries.items() if j == node
        }
        out.append((node, TropicalMatrix(a.rows, 1, col)))
    return out
