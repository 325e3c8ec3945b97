"""Independent brute-force references for every pipeline stage.

Everything here is deliberately naive: permanents by permutation sweep,
multi-circuits by exhaustive enumeration of node-disjoint circuit families,
power checks by repeated multiplication.  These paths exist to validate the
fast implementations, so they refuse inputs large enough to take forever
instead of silently running.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .charpoly import MultiCircuit
from .digraph import CircuitRecord
from .tropical import TropicalMatrix, as_value, matrix_mul, matrix_power

_MAX_BRUTE_N = 12
_WORK_BUDGET = 5_000_000


def _guard(n):
    if n > _MAX_BRUTE_N:
        raise ValueError(f"brute-force oracle refuses n={n} (limit {_MAX_BRUTE_N})")


class _Budget:
    """Step counter so dense instances fail fast instead of running forever."""

    __slots__ = ("left",)

    def __init__(self, steps=_WORK_BUDGET):
        self.left = steps

    def spend(self, amount=1):
        self.left -= amount
        if self.left < 0:
            raise ValueError("brute-force oracle exceeded its work budget")


@dataclass(frozen=True, slots=True)
class OracleReport:
    """Outcome of one oracle comparison, with a reproducible counterexample."""

    stage: str
    instance: str
    match: bool
    counterexample: tuple | None = None
    seed: int | None = None


def brute_chi(a: TropicalMatrix, lam):
    """chi(lam) as a max over all permutations of the lifted matrix.

    The sweep branches row by row over finite cells only, so sparse
    instances stay cheap; a work budget rejects dense ones that would take
    factorial time.
    """
    n = a.rows
    _guard(n)
    lam = as_value(lam)
    rows = [[] for _ in range(n)]
    for (i, j), v in a.entries.items():
        if i != j:
            rows[i].append((j, v))
    for i in range(n):
        av = a.entries.get((i, i))
        rows[i].append((i, lam if av is None or av < lam else av))
    budget = _Budget()
    best = None

    def sweep(i, used, total):
        nonlocal best
        budget.spend()
        if i == n:
            if best is None or total > best:
                best = total
            return
        for j, v in rows[i]:
            if not (used >> j) & 1:
                sweep(i + 1, used | (1 << j), total + v)

    sweep(0, 0, 0)
    return None if best is None else as_value(best)


def elementary_circuits(a: TropicalMatrix):
    """All elementary circuits of the digraph of ``a``, as CircuitRecords."""
    n = a.rows
    _guard(n)
    succ = [[] for _ in range(n)]
    for (i, j), v in sorted(a.entries.items()):
        succ[i].append(j)
    weight_of = lambda u, v: a.entries.get((u, v))
    budget = _Budget()
    found = []

    def extend(start, path, on_path):
        u = path[-1]
        for v in succ[u]:
            budget.spend()
            if v == start:
                found.append(CircuitRecord.from_nodes(weight_of, tuple(path)))
            elif v > start and v not in on_path:
                on_path.add(v)
                path.append(v)
                extend(start, path, on_path)
                path.pop()
                on_path.remove(v)

    for start in range(n):
        extend(start, [start], {start})
    return found


@dataclass(frozen=True, slots=True)
class BruteMmcDescription:
    """Exhaustive description of chi: best multi-circuit per total length.

    ``best_by_length[k]`` is the maximum-weight multi-circuit of total
    length k (k = 0 is always present, as the empty multi-circuit).  The
    roots of chi and the MMCS lengths fall out of the concave upper
    envelope of those (length, weight) points.
    """

    n: int
    best_by_length: dict
    roots: tuple
    multiplicities: tuple
    epsilon_multiplicity: int
    mmcs_lengths: tuple

    def chi_at(self, lam):
        lam = as_value(lam)
        return as_value(
            max(
                mc.total_weight + lam * (self.n - k)
                for k, mc in self.best_by_length.items()
            )
        )


def brute_mmc(a: TropicalMatrix) -> BruteMmcDescription:
    """Enumerate every node-disjoint circuit family and summarize chi."""
    n = a.rows
    _guard(n)
    circuits = elementary_circuits(a)
    masks = [sum(1 << v for v in c.nodes) for c in circuits]
    best = {0: MultiCircuit.empty()}
    budget = _Budget()

    def walk(idx, mask, chosen):
        for k in range(idx, len(circuits)):
            if masks[k] & mask:
                continue
            budget.spend()
            chosen.append(circuits[k])
            mc = MultiCircuit(tuple(chosen))
            cur = best.get(mc.total_length)
            if cur is None or mc.total_weight > cur.total_weight:
                best[mc.total_length] = mc
            walk(k + 1, mask | masks[k], chosen)
            chosen.pop()

    walk(0, 0, [])
    # Concave upper envelope of (length, weight): its vertices are the MMCS,
    # slopes between consecutive vertices are the roots (descending, since
    # the envelope is concave in the length).
    points = sorted((k, Fraction(mc.total_weight)) for k, mc in best.items())
    hull = []
    for x3, y3 in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (x3 - x2) <= (y3 - y2) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append((x3, y3))
    roots = []
    mults = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        roots.append(as_value(Fraction(y2 - y1, x2 - x1)))
        mults.append(x2 - x1)
    mmcs_lengths = tuple(x for x, _ in hull)
    return BruteMmcDescription(
        n=n,
        best_by_length=best,
        roots=tuple(roots),
        multiplicities=tuple(mults),
        epsilon_multiplicity=n - hull[-1][0],
        mmcs_lengths=mmcs_lengths,
    )


def mod_length_closure(a_vis: TropicalMatrix, ell: int) -> TropicalMatrix:
    """Best path weights with length divisible by ell: the star of the ell-th power."""
    from .tropical import kleene_star

    return kleene_star(matrix_power(a_vis, ell))


def bellman_ford_visualization(a_sub: TropicalMatrix, rate):
    """Single-shot visualization reference, by label-correcting sweeps.

    Potential p_j = best weight of any walk leaving j in the rate-shifted
    matrix (at least 0, the empty walk); conjugating by p sends every entry
    to p_v - p_u + (a_uv - rate) <= 0.  Independent of the incremental
    sweep: no priority queue, no node insertion order.  Returns the
    conjugated matrix and the potential vector.
    """
    from .tropical import DiagonalScaling, as_value, diag_conjugate

    n = a_sub.rows
    rate = as_value(rate)
    shifted = {key: v - rate for key, v in a_sub.entries.items()}
    p = [0] * n
    for _ in range(n + 1):
        changed = False
        for (u, v), w in shifted.items():
            cand = w + p[v]
            if cand > p[u]:
                p[u] = cand
                changed = True
        if not changed:
            break
    else:
        raise ValueError("shifted matrix has a positive circuit")
    vis = diag_conjugate(a_sub, DiagonalScaling(tuple(p)), -rate)
    return vis, tuple(p)


def brute_power_check(a: TropicalMatrix, expansion, t_range, seed=None) -> OracleReport:
    """Compare the expansion against naive powers on every t in ``t_range``."""
    ts = sorted(set(int(t) for t in t_range))
    instance = f"n={a.rows}, m={a.finite_count}, t in [{ts[0]}..{ts[-1]}]" if ts else "empty range"
    if not ts:
        return OracleReport("power-check", instance, True, seed=seed)
    power = matrix_power(a, ts[0])
    prev_t = ts[0]
    for t in ts:
        for _ in range(t - prev_t):
            power = matrix_mul(power, a)
        prev_t = t
        got = expansion.evaluate(t)
        if got != power:
            bad = _first_difference(power, got)
            return OracleReport(
                "power-check",
                instance,
                False,
                counterexample=(bad[0], bad[1], t, bad[2], bad[3]),
                seed=seed,
            )
    return OracleReport("power-check", instance, True, seed=seed)


def _first_difference(expected: TropicalMatrix, got: TropicalMatrix):
    for i in range(expected.rows):
        for j in range(expected.cols):
            e = expected.get(i, j)
            g = got.get(i, j)
            if e != g:
                return (i, j, e, g)
    return None


def random_matrix(rng: random.Random, n: int, density, low=-5, high=5) -> TropicalMatrix:
    """Seeded random integer matrix; each cell is finite with the given density."""
    density = Fraction(density) if not isinstance(density, (int, float)) else density
    entries = {}
    for i in range(n):
        for j in range(n):
            if rng.random() < density:
                entries[(i, j)] = rng.randint(low, high)
    return TropicalMatrix(n, n, entries)


def random_irreducible_matrix(rng: random.Random, n: int, density, low=-5, high=5) -> TropicalMatrix:
    """Random matrix whose digraph is strongly connected (a hidden cycle plus noise)."""
    a = random_matrix(rng, n, density, low, high)
    order = list(range(n))
    rng.shuffle(order)
    entries = dict(a.entries)
    for k, u in enumerate(order):
        v = order[(k + 1) % n]
        entries.setdefault((u, v), rng.randint(low, high))
    return TropicalMatrix(n, n, entries)
