"""Characteristic polynomial of a max-plus matrix: evaluation, roots, MMCS.

The characteristic polynomial chi(t) = det(A oplus t I) is a convex
piecewise-linear function of t.  Evaluating it at a fixed t is a maximum
weight assignment problem on the matrix whose diagonal is lifted to
max(a_ii, t); the optimal permutations decompose into a multi-circuit (the
nontrivial cycles plus diagonal picks realized by a_ii) and "t picks".
Breakpoints of chi are the finite roots; the maximal multi-circuit sequence
(MMCS) collects, per root interval, a multi-circuit that attains chi on the
whole interval.

Roots are found by supporting-line intersection on the convex function,
which costs a small number of assignment evaluations per breakpoint.  The
assignment runs on lexicographic weights (exact rational weight first, then
the count of t-realized diagonal picks) so the shortest and longest
attaining multi-circuits come out exactly, with no perturbation constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .assignment import max_assignment
from .digraph import CircuitRecord
from .tropical import (
    DimensionMismatchError,
    TropicalMatrix,
    as_value,
    denominator_of,
    scaled_int,
)


@dataclass(frozen=True, slots=True)
class MultiCircuit:
    """A set of node-disjoint elementary circuits with summed length/weight."""

    circuits: tuple

    def __post_init__(self):
        seen = set()
        for c in self.circuits:
            for v in c.nodes:
                if v in seen:
                    raise ValueError("multi-circuit members must be node-disjoint")
                seen.add(v)
        object.__setattr__(
            self, "circuits", tuple(sorted(self.circuits, key=lambda c: c.nodes))
        )

    @classmethod
    def empty(cls):
        return cls(())

    @property
    def total_length(self) -> int:
        return sum(c.length for c in self.circuits)

    @property
    def total_weight(self):
        return as_value(sum((Fraction(c.weight) for c in self.circuits), Fraction(0)))

    def node_set(self) -> frozenset:
        return frozenset(v for c in self.circuits for v in c.nodes)

    def __str__(self):
        return "{" + ", ".join(str(c) for c in self.circuits) + "}"


@dataclass(frozen=True, slots=True)
class ChiEvaluation:
    """chi evaluated at one point, with the shortest/longest attaining multi-circuits."""

    n: int
    lam: object
    value: object
    min_length: int
    max_length: int
    witness_min: MultiCircuit
    witness_max: MultiCircuit

    def __post_init__(self):
        for wit in (self.witness_min, self.witness_max):
            attained = wit.total_weight + self.lam * (self.n - wit.total_length)
            if attained != self.value:
                raise ValueError("witness does not attain the evaluated value")
        if self.witness_min.total_length != self.min_length:
            raise ValueError("min-length witness has the wrong length")
        if self.witness_max.total_length != self.max_length:
            raise ValueError("max-length witness has the wrong length")


@dataclass(frozen=True, slots=True)
class Mmcs:
    """Finite roots of chi (descending) with multiplicities and the MMCS.

    ``multicircuits[k]`` attains chi on the whole closed interval between
    root k+1 and root k (the 0th entry is the empty multi-circuit, optimal
    above the largest root).  The multiplicity of root k is the jump in
    attaining length, and the lengths increase strictly along the sequence.
    """

    roots: tuple
    multiplicities: tuple
    epsilon_multiplicity: int
    multicircuits: tuple

    def __post_init__(self):
        p = len(self.roots)
        if len(self.multiplicities) != p or len(self.multicircuits) != p + 1:
            raise ValueError("inconsistent MMCS arity")
        if any(self.roots[k] <= self.roots[k + 1] for k in range(p - 1)):
            raise ValueError("roots must be strictly decreasing")
        if self.multicircuits[0].total_length != 0:
            raise ValueError("the 0th multi-circuit must be empty")
        for k in range(p):
            jump = (
                self.multicircuits[k + 1].total_length
                - self.multicircuits[k].total_length
            )
            if jump != self.multiplicities[k] or jump <= 0:
                raise ValueError("multiplicities must equal the length jumps")

    @property
    def p(self) -> int:
        return len(self.roots)


def _lexicographic_costs(a, lam, n, scale, want_max_length):
    """Dense integer costs encoding (weight, +-t-pick count) lexicographically."""
    lam_s = scaled_int(lam, scale)
    k = n + 1
    cost = [[None] * n for _ in range(n)]
    diag_state = [None] * n  # "loop" | "lam" | "tie"
    for (i, j), v in a.entries.items():
        if i != j:
            cost[i][j] = scaled_int(v, scale) * k + (1 if want_max_length else 0)
    for i in range(n):
        av = a.entries.get((i, i))
        sv = None if av is None else scaled_int(av, scale)
        if sv is None or sv < lam_s:
            diag_state[i] = "lam"
            primary = lam_s
        elif sv > lam_s:
            diag_state[i] = "loop"
            primary = sv
        else:
            diag_state[i] = "tie"
            primary = sv
        if want_max_length:
            bonus = 1 if diag_state[i] in ("loop", "tie") else 0
        else:
            bonus = 1 if diag_state[i] in ("lam", "tie") else 0
        cost[i][i] = primary * k + bonus
    return cost, diag_state


def _witness_from_perm(a, perm, diag_state, want_max_length):
    """Cycles of the permutation, with tied diagonal picks classified per run."""
    n = len(perm)
    seen = [False] * n
    circuits = []
    lam_picks = 0
    weight_of = lambda u, v: a.entries.get((u, v))
    for start in range(n):
        if seen[start]:
            continue
        cycle = []
        v = start
        while not seen[v]:
            seen[v] = True
            cycle.append(v)
            v = perm[v]
        if len(cycle) == 1:
            i = cycle[0]
            state = diag_state[i]
            is_loop = state == "loop" or (state == "tie" and want_max_length)
            if is_loop:
                circuits.append(CircuitRecord.from_nodes(weight_of, (i,)))
            else:
                lam_picks += 1
        else:
            circuits.append(CircuitRecord.from_nodes(weight_of, tuple(cycle)))
    return MultiCircuit(tuple(circuits)), lam_picks


def chi_eval(a: TropicalMatrix, lam, force_backend=None) -> ChiEvaluation:
    """Evaluate chi at ``lam`` and report the extreme attaining multi-circuits.

    Solved as two lexicographic assignments on the lifted matrix (diagonal
    raised to max(a_ii, lam)): one maximizing and one minimizing the number
    of diagonal picks realized by ``lam``.  A tie a_ii == lam counts as a
    lam pick for the short witness and as a self-loop circuit for the long
    one, which is exactly what happens at a breakpoint.
    """
    if not a.is_square:
        raise DimensionMismatchError("chi is defined for square matrices")
    lam = as_value(lam)
    n = a.rows
    scale = denominator_of(lam)
    for v in a.entries.values():
        scale = math.lcm(scale, denominator_of(v))
    results = {}
    for want_max_length in (False, True):
        cost, diag_state = _lexicographic_costs(a, lam, n, scale, want_max_length)
        _, perm = max_assignment(cost, force_backend=force_backend)
        witness, lam_picks = _witness_from_perm(a, perm, diag_state, want_max_length)
        results[want_max_length] = (witness, n - lam_picks)
    # The attained value is reconstructed from the witness; the encoded
    # totals only order the permutations.
    value_min = results[False][0].total_weight + lam * (n - results[False][1])
    value_max = results[True][0].total_weight + lam * (n - results[True][1])
    if value_min != value_max:
        raise AssertionError("lexicographic runs disagree on the primary optimum")
    return ChiEvaluation(
        n=n,
        lam=lam,
        value=as_value(value_min),
        min_length=results[False][1],
        max_length=results[True][1],
        witness_min=results[False][0],
        witness_max=results[True][0],
    )


def _search_breakpoints(evaluate, n, lo, e_lo, hi, e_hi, found):
    """Recursive supporting-line intersection over the convex evaluation."""
    s_lo = n - e_lo.min_length
    b_lo = e_lo.witness_min.total_weight
    s_hi = n - e_hi.max_length
    b_hi = e_hi.witness_max.total_weight
    if s_lo == s_hi:
        if b_lo != b_hi:
            raise AssertionError("parallel distinct supporting lines")
        return
    lam_star = as_value(Fraction(b_lo - b_hi, s_hi - s_lo))
    if not (lo < lam_star < hi):
        raise AssertionError("line intersection escaped the search interval")
    e_star = evaluate(lam_star)
    if e_star.min_length < e_star.max_length:
        found[lam_star] = e_star
    v_star = b_lo + lam_star * s_lo
    if e_star.value == v_star:
        return
    left_line = (n - e_star.max_length, e_star.witness_max.total_weight)
    if left_line != (s_lo, b_lo):
        _search_breakpoints(evaluate, n, lo, e_lo, lam_star, e_star, found)
    right_line = (n - e_star.min_length, e_star.witness_min.total_weight)
    if right_line != (s_hi, b_hi):
        _search_breakpoints(evaluate, n, lam_star, e_star, hi, e_hi, found)


def characteristic_roots(a: TropicalMatrix, force_backend=None) -> Mmcs:
    """All finite roots of chi with multiplicities, plus the MMCS.

    The search evaluates chi at supporting-line intersections, starting from
    an interval that strictly brackets every root.  The largest root is the
    maximum cycle mean, so max entry + 1 bounds it above; below, a root is a
    slope (w2 - w1) / (l2 - l1) between envelope vertices, and multi-circuit
    weights lie in [min(0, n*min_entry), max(0, n*max_entry)], which gives a
    strict lower bound.  (Roots can fall below the smallest entry, so a
    bracket of entry values alone would not be safe.)  A matrix with no
    finite entries has no finite roots, and the MMCS degenerates to the
    empty multi-circuit.
    """
    if not a.is_square:
        raise DimensionMismatchError("roots are defined for square matrices")
    n = a.rows
    if not a.entries:
        return Mmcs((), (), n, (MultiCircuit.empty(),))
    cache = {}

    def evaluate(lam):
        lam = as_value(lam)
        if lam not in cache:
            cache[lam] = chi_eval(a, lam, force_backend=force_backend)
        return cache[lam]

    values = list(a.entries.values())
    lo = as_value(min(0, n * min(values)) - max(0, n * max(values)) - 1)
    hi = as_value(max(values) + 1)
    e_lo = evaluate(lo)
    e_hi = evaluate(hi)
    if e_lo.min_length != e_lo.max_length or e_hi.min_length != e_hi.max_length:
        raise AssertionError("bracketing points must not be breakpoints")
    found = {}
    _search_breakpoints(evaluate, n, lo, e_lo, hi, e_hi, found)
    roots = tuple(sorted(found, reverse=True))
    multicircuits = [MultiCircuit.empty()]
    multiplicities = []
    for k, lam in enumerate(roots):
        ev = found[lam]
        if ev.min_length != multicircuits[-1].total_length:
            raise AssertionError("adjacent root intervals disagree on lengths")
        multiplicities.append(ev.max_length - ev.min_length)
        multicircuits.append(ev.witness_max)
    eps_mult = n - multicircuits[-1].total_length
    return Mmcs(roots, tuple(multiplicities), eps_mult, tuple(multicircuits))


def extract_mmcs(a: TropicalMatrix, roots, force_backend=None):
    """MMCS for a given descending list of roots, verified by evaluation.

    Every returned multi-circuit is checked to attain chi at both endpoints
    of its interval; a root list that is not exactly the finite root set of
    chi fails those checks and raises ValueError.
    """
    roots = tuple(as_value(r) for r in roots)
    if any(roots[k] <= roots[k + 1] for k in range(len(roots) - 1)):
        raise ValueError("roots must be strictly decreasing")
    n = a.rows
    sequence = [MultiCircuit.empty()]
    evals = [chi_eval(a, lam, force_backend=force_backend) for lam in roots]
    for k, ev in enumerate(evals):
        if ev.min_length == ev.max_length:
            raise ValueError(f"{ev.lam} is not a root of the characteristic polynomial")
        if ev.min_length != sequence[-1].total_length:
            raise ValueError("root list is inconsistent (missing root above?)")
        prev = sequence[-1]
        if prev.total_weight + ev.lam * (n - prev.total_length) != ev.value:
            raise ValueError("previous multi-circuit fails the endpoint check")
        sequence.append(ev.witness_max)
    if evals:
        last = sequence[-1]
        below = evals[-1].lam - 1
        ev_below = chi_eval(a, below, force_backend=force_backend)
        if last.total_weight + below * (n - last.total_length) != ev_below.value:
            raise ValueError("final multi-circuit fails below the smallest root")
    return sequence
