"""Incremental visualization of the group submatrices.

A matrix is visualized when all entries are nonpositive and the arcs of the
reference circuit are exactly zero; conjugating by a vector of path
weights achieves this.  The sweep runs backward over the groups (last
first) and inserts one node at a time: splice the new node's arcs with the
scalings accumulated so far, run one single-sink maximum-weight path
computation rooted at the new node, and fold the resulting potentials into
the running conjugation.  At every point all arc values stay nonpositive
except those incident to the newest node, which is exactly the regime where
a label-setting (Dijkstra) sweep stays correct.

Arithmetic: the growth rates may be non-integers, so the sweep works in a
common scaled-integer domain (all entries and rates multiplied by one lcm
denominator) and divides back out when the per-group matrices are built.
This keeps everything exact while the hot loops run on plain ints.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction

from .digraph import WeightedDigraph
from .partition import NodePartition
from .tropical import (
    DiagonalScaling,
    TropicalMatrix,
    as_value,
    denominator_of,
    scaled_int,
)


class InvariantViolationError(RuntimeError):
    """A runtime check on the sweep's preconditions failed."""


def _max_weight_to_sink(sink, in_arcs_of):
    """Label-setting maximum-weight-to-sink labels.

    ``in_arcs_of(v)`` yields (u, w) for arcs u -> v.  All arc weights must
    be nonpositive except those incident to the sink; that is asserted
    during the sweep.  Returns (reachable, labels) where labels[j] is the
    best weight of a j -> sink path (0 for the sink itself).
    """
    labels = {sink: 0}
    settled = set()
    heap = [(0, sink)]
    while heap:
        neg, v = heapq.heappop(heap)
        if v in settled or -neg < labels[v]:
            continue
        settled.add(v)
        base = labels[v]
        for u, w in in_arcs_of(v):
            if u in settled:
                continue
            if w > 0 and v != sink and u != sink:
                raise InvariantViolationError(
                    f"positive arc ({u}, {v}) not incident to the root {sink}"
                )
            cand = base + w
            if u not in labels or cand > labels[u]:
                labels[u] = cand
                heapq.heappush(heap, (-cand, u))
    return frozenset(settled), labels


def dijkstra_single_sink(g: WeightedDigraph, sink: int):
    """Maximum-weight paths into one sink, for graphs nonpositive off the sink.

    Returns (reachable, labels): the set of nodes with a path to the sink
    and, for each, the maximum path weight (the sink gets 0, the empty
    path).  Arcs not incident to the sink must have nonpositive weight;
    a violation raises InvariantViolationError.
    """
    if not (0 <= sink < g.n):
        raise ValueError("sink out of range")
    reachable, labels = _max_weight_to_sink(sink, g.in_arcs)
    return reachable, {v: labels[v] for v in reachable}


@dataclass(frozen=True, slots=True)
class GroupVisualization:
    """Visualized submatrix of one group: nodes, matrix, conjugation vector."""

    group: int
    nodes: tuple
    matrix: TropicalMatrix
    scaling: DiagonalScaling
    processed_order: tuple


@dataclass(frozen=True, slots=True)
class VisualizationResult:
    groups: tuple

    def group(self, s: int) -> GroupVisualization:
        """1-based access, matching group numbering in the partition."""
        return self.groups[s - 1]


def visualize_all(a: TropicalMatrix, part: NodePartition) -> VisualizationResult:
    """Visualize every group submatrix in one backward sweep.

    For group s over node set V_s the result satisfies, entry for entry,
    ``matrix = diag(-d) ((-rate) A(V_s)) diag(d)`` with every entry <= 0 and
    the quasi-critical circuit's arcs exactly 0.  Nodes inside a group are
    processed in descending index order; the d vectors depend on that order
    (they are not unique), so it is fixed and recorded.
    """
    if a.rows != a.cols or a.rows != part.n:
        raise ValueError("matrix and partition sizes disagree")
    if part.r == 0:
        return VisualizationResult(())
    n = a.rows
    scale = 1
    for v in a.entries.values():
        scale = math.lcm(scale, denominator_of(v))
    for rate in part.growth_rates:
        scale = math.lcm(scale, denominator_of(rate))
    ea = {key: scaled_int(v, scale) for key, v in a.entries.items()}
    srates = [scaled_int(rate, scale) for rate in part.growth_rates]
    row_arcs = [[] for _ in range(n)]
    col_arcs = [[] for _ in range(n)]
    for (u, v), w in ea.items():
        if u != v:
            row_arcs[u].append((v, w))
            col_arcs[v].append((u, w))

    b = {}
    in_nb = {}
    out_nb = {}
    d = [0] * n
    nprime = set()
    results = []

    def add_arc(u, v, w):
        b[(u, v)] = w
        out_nb[u].add(v)
        in_nb[v].add(u)

    for s in range(part.r, 0, -1):
        rate = srates[s - 1]
        if s < part.r:
            delta = srates[s] - rate
            if delta:
                for key in b:
                    b[key] += delta
        order = tuple(sorted(part.groups[s - 1], reverse=True))
        for i in order:
            in_nb[i] = set()
            out_nb[i] = set()
            for j, w in row_arcs[i]:
                if j in nprime:
                    add_arc(i, j, -rate + w + d[j])
            for j, w in col_arcs[i]:
                if j in nprime:
                    add_arc(j, i, -d[j] - rate + w)
            if (i, i) in ea:
                add_arc(i, i, -rate + ea[(i, i)])
            nprime.add(i)
            reachable, w_lab = _max_weight_to_sink(
                i, lambda v: ((u, b[(u, v)]) for u in in_nb[v])
            )
            crossing = []
            cross_best = None
            for (u, v), val in b.items():
                if u in reachable:
                    if v in reachable:
                        nv = val - w_lab[u] + w_lab[v]
                        if nv > 0:
                            raise InvariantViolationError(
                                f"arc ({u}, {v}) stayed positive after rescaling"
                            )
                        b[(u, v)] = nv
                    else:
                        shifted = val - w_lab[u]
                        crossing.append((u, v, shifted))
                        if cross_best is None or shifted > cross_best:
                            cross_best = shifted
                elif v in reachable:
                    raise InvariantViolationError(
                        f"arc ({u}, {v}) enters the reachable set from outside"
                    )
            w_star = -max(0, cross_best) if cross_best is not None else 0
            for u, v, shifted in crossing:
                b[(u, v)] = shifted + w_star
            for j in nprime:
                d[j] += w_lab[j] if j in reachable else w_star
        nodes = part.remaining_nodes(s)
        if tuple(sorted(nprime)) != nodes:
            raise AssertionError("sweep drifted away from the partition's node sets")
        pos = {v: k for k, v in enumerate(nodes)}
        entries = {}
        for (u, v), val in b.items():
            if val > 0:
                raise InvariantViolationError(f"visualized entry ({u}, {v}) is positive")
            if -d[u] + (ea[(u, v)] - rate) + d[v] != val:
                raise AssertionError("conjugation identity broken during the sweep")
            entries[(pos[u], pos[v])] = as_value(Fraction(val, scale))
        matrix = TropicalMatrix(len(nodes), len(nodes), entries, nodes, nodes)
        circuit = part.quasi_critical[s - 1]
        for u, v in circuit.arc_pairs():
            if b.get((u, v)) != 0:
                raise InvariantViolationError(
                    f"quasi-critical arc ({u}, {v}) is not zero after visualization"
                )
        scaling = DiagonalScaling(tuple(as_value(Fraction(d[j], scale)) for j in nodes))
        results.append(GroupVisualization(s, nodes, matrix, scaling, order))
    results.reverse()
    return VisualizationResult(tuple(results))
