"""CSR expansion of max-plus matrix powers.

Each group of the node partition contributes one term rate^t C S^t R: R
holds the best path weights leaving the group circuit with length divisible
by the circuit length, C the mirror image arriving at it, and S is the
circuit's cyclic permutation, so S^t reduces to an index rotation.  Summed
over groups, the terms reproduce the t-th power of the matrix exactly for
every t >= 2 n^2, no matter how large t is.

The weight queries "best path with length k mod ell" are answered on an
extended graph with ell layered copies of the node set, where every arc
advances the layer by one; one Dijkstra sweep from the circuit's anchor
node (and one on the reversed graph) yields a whole factor.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction

from .charpoly import characteristic_roots
from .digraph import CircuitRecord, build_graph, critical_graph, cyclicity_classes
from .partition import partition_nodes
from .tropical import (
    DiagonalScaling,
    DimensionMismatchError,
    TropicalMatrix,
    as_value,
    denominator_of,
    matrix_power,
    scaled_int,
)
from .visualize import InvariantViolationError, visualize_all


@dataclass(frozen=True, slots=True)
class ExtendedGraph:
    """Layered copies of a digraph; every arc advances the layer by one (mod layers).

    Node (v, k) has id v * layers + k; ``adj[id]`` lists (id2, weight).
    The arc count is layers times the base arc count.
    """

    base_n: int
    layers: int
    adj: tuple
    arc_count: int

    def node_id(self, v: int, k: int) -> int:
        return v * self.layers + k


def build_extended_graph(base_n, arcs, layers, reverse=False) -> ExtendedGraph:
    """Extended graph of the arc list; ``reverse`` flips every layered arc."""
    adj = [[] for _ in range(base_n * layers)]
    for u, v, w in arcs:
        for k in range(layers):
            k2 = (k + 1) % layers
            if reverse:
                adj[v * layers + k2].append((u * layers + k, w))
            else:
                adj[u * layers + k].append((v * layers + k2, w))
    return ExtendedGraph(base_n, layers, tuple(tuple(x) for x in adj), layers * len(arcs))


def _max_weight_labels(graph: ExtendedGraph, source_id: int):
    """Single-source maximum path weights on nonpositive arcs (label-setting)."""
    labels = [None] * (graph.base_n * graph.layers)
    labels[source_id] = 0
    heap = [(0, source_id)]
    adj = graph.adj
    while heap:
        neg, u = heapq.heappop(heap)
        base = -neg
        if base < labels[u]:
            continue
        for v, w in adj[u]:
            cand = base + w
            cur = labels[v]
            if cur is None or cand > cur:
                labels[v] = cand
                heapq.heappush(heap, (-cand, v))
    return labels


def _layered_max_weights(nv, layers, base_adj, source_v, backward=False):
    """Layered-graph labels without materializing the layer copies.

    Same labels as ``_max_weight_labels`` on the (possibly reversed)
    extended graph of the base adjacency, with node (v, k) at index
    v * layers + k and the source at layer 0.  Forward arcs advance the
    layer by one mod ``layers``; walking the reversed graph (``base_adj``
    holding in-arcs) steps the layer back by one instead.  Weights must be
    nonpositive ints.
    """
    labels = [None] * (nv * layers)
    source = source_v * layers
    labels[source] = 0
    heap = [(0, source)]
    push = heapq.heappush
    pop = heapq.heappop
    step = -1 if backward else 1
    while heap:
        neg, uid = pop(heap)
        base = -neg
        if base < labels[uid]:
            continue
        v, k = divmod(uid, layers)
        k2 = (k + step) % layers
        for head, w in base_adj[v]:
            wid = head * layers + k2
            cand = base + w
            cur = labels[wid]
            if cur is None or cand > cur:
                labels[wid] = cand
                push(heap, (-cand, wid))
    return labels


def _group_scale(a_vis: TropicalMatrix, scaling: DiagonalScaling):
    scale = 1
    for v in a_vis.entries.values():
        scale = math.lcm(scale, denominator_of(v))
    for v in scaling.values:
        scale = math.lcm(scale, denominator_of(v))
    return scale


def compute_cr_pair(a_vis: TropicalMatrix, scaling: DiagonalScaling, circuit: CircuitRecord, n: int):
    """The C and R factors of one group, in full n-space coordinates.

    ``a_vis`` is the visualized group submatrix (labels carry the original
    node ids), ``scaling`` the conjugation vector that produced it, and
    ``circuit`` the group's quasi-critical circuit (given in original ids;
    its arcs must be exactly 0 in ``a_vis``).  Row k of R holds the best
    weights of paths leaving the k-th circuit node with length divisible by
    the circuit length, pushed back through the scaling; columns of C
    mirror that on the reversed graph.  Nodes outside the group stay at the
    bottom element.
    """
    if a_vis.row_labels is None:
        raise ValueError("visualized submatrix must carry node labels")
    nodes = a_vis.row_labels
    pos = {v: k for k, v in enumerate(nodes)}
    nv = len(nodes)
    for v in a_vis.entries.values():
        if v > 0:
            raise InvariantViolationError("submatrix is not visualized (positive entry)")
    for u, v in circuit.arc_pairs():
        if a_vis.entries.get((pos[u], pos[v])) != 0:
            raise InvariantViolationError(
                f"circuit arc ({u}, {v}) is not zero in the visualized submatrix"
            )
    ell = circuit.length
    scale = _group_scale(a_vis, scaling)
    d = [scaled_int(v, scale) for v in scaling.values]
    anchor = pos[circuit.nodes[0]]
    out_adj = [[] for _ in range(nv)]
    in_adj = [[] for _ in range(nv)]
    for (i, j), w in a_vis.entries.items():
        sw = scaled_int(w, scale)
        out_adj[i].append((j, sw))
        in_adj[j].append((i, sw))
    labels_f = _layered_max_weights(nv, ell, out_adj, anchor)
    labels_b = _layered_max_weights(nv, ell, in_adj, anchor, backward=True)
    r_entries = {}
    c_entries = {}
    for j in range(nv):
        orig = nodes[j]
        for k in range(ell):
            lf = labels_f[j * ell + k]
            if lf is not None:
                r_entries[(k, orig)] = as_value(Fraction(lf - d[j], scale))
            lb = labels_b[j * ell + k]
            if lb is not None:
                c_entries[(orig, k)] = as_value(Fraction(d[j] + lb, scale))
    c = TropicalMatrix(n, ell, c_entries)
    r = TropicalMatrix(ell, n, r_entries)
    return c, r


def build_s(circuit: CircuitRecord) -> TropicalMatrix:
    """Cyclic-shift permutation matrix of the circuit (identity for a self-loop)."""
    ell = circuit.length
    return TropicalMatrix(ell, ell, {(k, (k + 1) % ell): 0 for k in range(ell)})


def _successor_of(s: TropicalMatrix):
    """Permutation encoded by a (0, bottom) matrix with one 0 per row and column."""
    if s.rows != s.cols:
        raise ValueError("permutation factor must be square")
    succ = [None] * s.rows
    hit_cols = set()
    for (i, j), v in s.entries.items():
        if v != 0 or succ[i] is not None or j in hit_cols:
            raise ValueError("factor is not a permutation matrix")
        succ[i] = j
        hit_cols.add(j)
    if any(x is None for x in succ):
        raise ValueError("factor is not a permutation matrix")
    return tuple(succ)


def _perm_power(succ, t: int):
    out = [0] * len(succ)
    seen = [False] * len(succ)
    for start in range(len(succ)):
        if seen[start]:
            continue
        cycle = []
        v = start
        while not seen[v]:
            seen[v] = True
            cycle.append(v)
            v = succ[v]
        shift = t % len(cycle)
        for idx, v in enumerate(cycle):
            out[v] = cycle[(idx + shift) % len(cycle)]
    return tuple(out)


@dataclass(frozen=True, slots=True)
class CsrTerm:
    """One term rate^t C S^t R of the expansion.

    C has one column (and R one row) per circuit node, in circuit order;
    for a reduced term they are indexed by cyclicity classes instead and
    ``classes`` holds the class memberships.  ``nodes`` and ``scaling``
    record the group submatrix the factors were built from.
    """

    rate: object
    C: TropicalMatrix
    S: TropicalMatrix
    R: TropicalMatrix
    circuit: CircuitRecord
    group: int
    nodes: tuple
    scaling: DiagonalScaling
    reduced: bool = False
    classes: tuple | None = None

    def __post_init__(self):
        _successor_of(self.S)  # validates the permutation structure
        if self.C.cols != self.S.rows or self.S.cols != self.R.rows:
            raise DimensionMismatchError("factor dimensions are inconsistent")

    @property
    def order(self) -> int:
        return self.S.rows

    def successor(self):
        return _successor_of(self.S)


@dataclass(frozen=True, slots=True)
class CsrExpansion:
    """Full expansion: evaluate(t) equals the t-th power for every t >= threshold.

    Below the threshold the evaluation is still defined but may differ from
    the true power in either direction; the contract starts at
    threshold = 2 n^2.  ``source`` (when present) lets the degenerate
    acyclic case answer small-t queries by naive powering.
    """

    n: int
    terms: tuple
    threshold: int
    source: TropicalMatrix | None = None

    def __post_init__(self):
        rates = [term.rate for term in self.terms]
        if any(rates[i] < rates[i + 1] for i in range(len(rates) - 1)):
            raise ValueError("term rates must be weakly decreasing")
        if len(self.terms) > self.n:
            raise ValueError("more terms than matrix order")

    def evaluate(self, t: int) -> TropicalMatrix:
        """rate^t C S^t R summed over terms; t may be arbitrarily large.

        S^t is an index rotation and the rate shift is a single scalar, so
        the cost does not depend on t.  The per-term products run on int64
        numpy arrays when the scaled factor entries are small enough for
        that to be exact; the (possibly astronomical) t * rate shifts are
        applied in unbounded Python ints either way.
        """
        if not isinstance(t, int) or t < 0:
            raise ValueError("exponent must be a nonnegative integer")
        n = self.n
        if not self.terms:
            # An acyclic matrix: every path of length >= n repeats a node,
            # so the power is all-bottom from n on.
            if t < n and self.source is not None:
                return matrix_power(self.source, t)
            return TropicalMatrix.epsilon(n, n)
        scale = 1
        max_abs = 0
        for term in self.terms:
            scale = math.lcm(scale, denominator_of(term.rate))
            for v in term.C.entries.values():
                scale = math.lcm(scale, denominator_of(v))
            for v in term.R.entries.values():
                scale = math.lcm(scale, denominator_of(v))
        acc = {}
        use_numpy = n >= 64
        if use_numpy:
            for term in self.terms:
                for v in list(term.C.entries.values()) + list(term.R.entries.values()):
                    max_abs = max(max_abs, abs(scaled_int(v, scale)))
            use_numpy = max_abs < (1 << 38)
        for rate, terms in self._rate_classes():
            shift = t * scaled_int(rate, scale)
            if use_numpy:
                self._accumulate_numpy(terms, t, scale, shift, acc)
            else:
                self._accumulate_python(terms, t, scale, shift, acc)
        if scale == 1:
            entries = dict(acc)
        else:
            entries = {key: as_value(Fraction(v, scale)) for key, v in acc.items()}
        return TropicalMatrix(n, n, entries)

    def _rate_classes(self):
        classes = []
        for term in self.terms:
            if classes and classes[-1][0] == term.rate:
                classes[-1][1].append(term)
            else:
                classes.append((term.rate, [term]))
        return classes

    def _accumulate_python(self, terms, t, scale, shift, acc):
        for term in terms:
            ell = term.order
            power = _perm_power(term.successor(), t)
            cols = [[] for _ in range(ell)]
            for (i, k), v in term.C.entries.items():
                cols[k].append((i, scaled_int(v, scale)))
            rows = [[] for _ in range(ell)]
            for (k, j), v in term.R.entries.items():
                rows[k].append((j, scaled_int(v, scale)))
            for k in range(ell):
                row = rows[power[k]]
                if not row:
                    continue
                for i, cv in cols[k]:
                    base = cv + shift
                    for j, rv in row:
                        key = (i, j)
                        cand = base + rv
                        cur = acc.get(key)
                        if cur is None or cand > cur:
                            acc[key] = cand

    def _accumulate_numpy(self, terms, t, scale, shift, acc):
        import numpy as np

        n = self.n
        neg = -(1 << 42)
        floor = -(1 << 41)
        best = np.full((n, n), neg, dtype=np.int64)
        for term in terms:
            ell = term.order
            power = _perm_power(term.successor(), t)
            cmat = np.full((n, ell), neg, dtype=np.int64)
            rmat = np.full((ell, n), neg, dtype=np.int64)
            for (i, k), v in term.C.entries.items():
                cmat[i, k] = scaled_int(v, scale)
            for (k, j), v in term.R.entries.items():
                rmat[k, j] = scaled_int(v, scale)
            for k in range(ell):
                np.maximum(best, cmat[:, k : k + 1] + rmat[power[k] : power[k] + 1, :], out=best)
        ii, jj = np.nonzero(best > floor)
        vals = best[ii, jj]
        for i, j, v in zip(ii.tolist(), jj.tolist(), vals.tolist()):
            key = (i, j)
            cand = v + shift
            cur = acc.get(key)
            if cur is None or cand > cur:
                acc[key] = cand


def expand(a: TropicalMatrix, reduce_by_cyclicity: bool = False) -> CsrExpansion:
    """CSR expansion of a square matrix: roots, partition, visualization, factors.

    Produces at most one term per partition group (so at most n), with
    weakly decreasing growth rates and validity threshold 2 n^2.  An acyclic
    matrix yields the empty expansion.  With ``reduce_by_cyclicity`` every
    term is post-processed onto the cyclicity classes of its critical
    graph, which can shrink the factors; the default is the plain
    quasi-critical-circuit form.
    """
    if not a.is_square:
        raise DimensionMismatchError("expansion needs a square matrix")
    n = a.rows
    mmcs = characteristic_roots(a)
    part = partition_nodes(mmcs, n)
    vis = visualize_all(a, part)
    terms = []
    for s in range(1, part.r + 1):
        gv = vis.group(s)
        circuit = part.quasi_critical[s - 1]
        c, r = compute_cr_pair(gv.matrix, gv.scaling, circuit, n)
        term = CsrTerm(
            rate=part.growth_rates[s - 1],
            C=c,
            S=build_s(circuit),
            R=r,
            circuit=circuit,
            group=s,
            nodes=gv.nodes,
            scaling=gv.scaling,
        )
        if reduce_by_cyclicity:
            term = reduce_term(term, gv.matrix)
        terms.append(term)
    return CsrExpansion(n=n, terms=tuple(terms), threshold=2 * n * n, source=a)


def evaluate_expansion(x: CsrExpansion, t: int) -> TropicalMatrix:
    """Evaluate the expansion at t (equals the t-th power for t >= x.threshold)."""
    return x.evaluate(t)


def reduce_term(term: CsrTerm, a_vis: TropicalMatrix) -> CsrTerm:
    """Rebuild one term over the cyclicity classes of its critical graph.

    The visualized submatrix has maximum cycle mean 0; its critical graph
    may extend beyond the quasi-critical circuit.  Grouping critical nodes
    into cyclicity classes gives factors indexed by classes, with the class
    permutation as the S factor: R has, per class, the best weights of
    paths leaving any class member with length divisible by the cyclicity
    (class members are interchangeable: they are linked by zero-weight
    critical paths of fitting length).  The sum of the reduced terms equals
    the sum of the plain terms for every t >= threshold.
    """
    if term.reduced:
        return term
    if a_vis.row_labels is None or tuple(a_vis.row_labels) != term.nodes:
        raise ValueError("visualized submatrix does not match the term's group")
    nodes = term.nodes
    nv = len(nodes)
    critical = critical_graph(build_graph(a_vis), 0)
    cyc = cyclicity_classes(critical)
    sigma = cyc.sigma
    n_classes = len(cyc.classes)
    scale = _group_scale(a_vis, term.scaling)
    d = [scaled_int(v, scale) for v in term.scaling.values]
    n = term.C.rows
    out_adj = [[] for _ in range(nv)]
    in_adj = [[] for _ in range(nv)]
    for (i, j), w in a_vis.entries.items():
        sw = scaled_int(w, scale)
        out_adj[i].append((j, sw))
        in_adj[j].append((i, sw))
    c_entries = {}
    r_entries = {}
    succ = [None] * n_classes
    for cid, members in enumerate(cyc.classes):
        rep = members[0]
        labels_f = _layered_max_weights(nv, sigma, out_adj, rep)
        labels_b = _layered_max_weights(nv, sigma, in_adj, rep, backward=True)
        for j in range(nv):
            lf = labels_f[j * sigma]
            if lf is not None:
                r_entries[(cid, nodes[j])] = as_value(Fraction(lf - d[j], scale))
            lb = labels_b[j * sigma]
            if lb is not None:
                c_entries[(nodes[j], cid)] = as_value(Fraction(d[j] + lb, scale))
        # One critical step out of any member lands in the successor class.
        for u, v in critical.arcs:
            if u == rep:
                succ[cid] = cyc.class_of[v]
                break
    if any(x is None for x in succ) or len(set(succ)) != n_classes:
        raise AssertionError("class successor map is not a permutation")
    s_matrix = TropicalMatrix(n_classes, n_classes, {(c, succ[c]): 0 for c in range(n_classes)})
    return CsrTerm(
        rate=term.rate,
        C=TropicalMatrix(n, n_classes, c_entries),
        S=s_matrix,
        R=TropicalMatrix(n_classes, n, r_entries),
        circuit=term.circuit,
        group=term.group,
        nodes=term.nodes,
        scaling=term.scaling,
        reduced=True,
        classes=tuple(tuple(nodes[m] for m in members) for members in cyc.classes),
    )
