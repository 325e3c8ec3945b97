import random

import pytest

from maxplus import (
    CircuitRecord,
    TropicalMatrix,
    TropicalScalar,
    build_graph,
    critical_graph,
    cyclicity_classes,
    karp_max_cycle_mean,
    matrix_mul,
    principal_eigenvectors,
)
from maxplus.oracle import elementary_circuits, random_irreducible_matrix, random_matrix
from fixtures import E, demo_matrix, tm


def test_build_graph_demo_counts():
    g = build_graph(demo_matrix())
    assert g.n == 10
    assert g.arc_count == 18


def test_build_graph_epsilon_matrix():
    g = build_graph(TropicalMatrix.epsilon(3))
    assert g.n == 3 and g.arc_count == 0


def test_build_graph_identity():
    g = build_graph(TropicalMatrix.identity(2))
    assert sorted(g.arcs) == [(0, 0, 0), (1, 1, 0)]


class TestKarp:
    def test_demo(self):
        assert karp_max_cycle_mean(build_graph(demo_matrix())) == TropicalScalar(8)

    def test_acyclic_chain(self):
        g = build_graph(tm([[E, 1, E], [E, E, 1], [E, E, E]]))
        assert karp_max_cycle_mean(g).is_epsilon

    def test_two_cycle(self):
        g = build_graph(tm([[E, 1], [3, E]]))
        assert karp_max_cycle_mean(g) == TropicalScalar(2)

    def test_matches_circuit_enumeration(self):
        rng = random.Random(13)
        for _ in range(40):
            n = rng.randint(2, 7)
            a = random_matrix(rng, n, rng.choice([0.3, 0.5, 0.8]))
            circuits = elementary_circuits(a)
            want = max((c.mean for c in circuits), default=None)
            got = karp_max_cycle_mean(build_graph(a))
            if want is None:
                assert got.is_epsilon
            else:
                assert got == TropicalScalar(want)


class TestCriticalGraph:
    def test_demo(self):
        cg = critical_graph(build_graph(demo_matrix()), 8)
        assert cg.nodes == frozenset({0, 1})
        assert cg.arcs == frozenset({(0, 1), (1, 0)})

    def test_self_loop(self):
        cg = critical_graph(build_graph(tm([[5]])), 5)
        assert cg.nodes == frozenset({0})
        assert cg.arcs == frozenset({(0, 0)})

    def test_all_zero_matrix(self):
        cg = critical_graph(build_graph(tm([[0, 0], [0, 0]])), 0)
        assert cg.nodes == frozenset({0, 1})
        assert len(cg.arcs) == 4

    def test_rate_below_max_mean_rejected(self):
        with pytest.raises(ValueError):
            critical_graph(build_graph(tm([[E, 1], [3, E]])), 1)

    def test_critical_arcs_are_tight_after_shift(self):
        rng = random.Random(17)
        for _ in range(25):
            n = rng.randint(2, 6)
            a = random_irreducible_matrix(rng, n, 0.4)
            g = build_graph(a)
            lam = karp_max_cycle_mean(g).value
            cg = critical_graph(g, lam)
            assert cg.nodes
            # every critical arc lies on a circuit of mean exactly lam
            circuits = [c for c in elementary_circuits(a) if c.mean == lam]
            on_critical = {arc for c in circuits for arc in c.arc_pairs()}
            assert cg.arcs == on_critical


class TestCyclicityClasses:
    def test_two_cycle(self):
        cg = critical_graph(build_graph(tm([[E, 1], [3, E]])), 2)
        cyc = cyclicity_classes(cg)
        assert cyc.sigma == 2
        assert cyc.classes == ((0,), (1,))

    def test_self_loop(self):
        cg = critical_graph(build_graph(tm([[5]])), 5)
        cyc = cyclicity_classes(cg)
        assert cyc.sigma == 1
        assert cyc.classes == ((0,),)

    def test_mixed_lengths_gcd_one(self):
        cg = critical_graph(build_graph(tm([[0, 0], [0, E]])), 0)
        cyc = cyclicity_classes(cg)
        assert cyc.sigma == 1
        assert cyc.classes == ((0, 1),)

    def test_empty_rejected(self):
        from maxplus import CriticalGraph

        with pytest.raises(ValueError):
            cyclicity_classes(CriticalGraph(frozenset(), frozenset(), 0))

    def test_class_counts_divide_circuit_lengths(self):
        # Walking a critical circuit advances the class by one step per arc,
        # so the circuit visits exactly its component's gcd many classes and
        # its length is a multiple of that count (which in turn divides
        # sigma when the critical graph is strongly connected).
        rng = random.Random(19)
        for _ in range(25):
            n = rng.randint(2, 6)
            a = random_irreducible_matrix(rng, n, 0.4)
            g = build_graph(a)
            lam = karp_max_cycle_mean(g).value
            cg = critical_graph(g, lam)
            cyc = cyclicity_classes(cg)
            for circuit in elementary_circuits(a):
                if circuit.mean != lam:
                    continue
                visited = {cyc.class_of[v] for v in circuit.nodes}
                assert circuit.length % len(visited) == 0
                assert cyc.sigma % len(visited) == 0


class TestPrincipalEigenvectors:
    def test_two_cycle(self):
        a = tm([[E, 1], [3, E]])
        vecs = dict(principal_eigenvectors(a))
        assert set(vecs) == {0, 1}
        col = vecs[0]
        assert [col.get(i, 0) for i in range(2)] == [0, 1]
        product = matrix_mul(a, col)
        assert [product.get(i, 0) for i in range(2)] == [2, 3]

    def test_self_loop(self):
        vecs = principal_eigenvectors(tm([[4]]))
        assert len(vecs) == 1
        node, col = vecs[0]
        assert node == 0 and col.get(0, 0) == 0

    def test_demo_columns_are_eigenvectors(self):
        a = demo_matrix()
        vecs = principal_eigenvectors(a)
        assert [node for node, _ in vecs] == [0, 1]
        for _, col in vecs:
            product = matrix_mul(a, col)
            shifted = TropicalMatrix(
                10, 1, {key: v + 8 for key, v in col.entries.items()}
            )
            assert product == shifted

    def test_acyclic_rejected(self):
        with pytest.raises(ValueError):
            principal_eigenvectors(tm([[E, 1], [E, E]]))

    def test_random_instances_satisfy_eigen_equation(self):
        rng = random.Random(37)
        for _ in range(30):
            n = rng.randint(2, 6)
            a = random_irreducible_matrix(rng, n, 0.5)
            lam = karp_max_cycle_mean(build_graph(a)).value
            for _, col in principal_eigenvectors(a):
                product = matrix_mul(a, col)
                shifted = TropicalMatrix(
                    n, 1, {key: v + lam for key, v in col.entries.items()}
                )
                assert product == shifted


def test_circuit_record_canonical_rotation():
    weights = {(2, 0): 1, (0, 1): 2, (1, 2): 3}
    c = CircuitRecord.from_nodes(lambda u, v: weights.get((u, v)), (2, 0, 1))
    assert c.nodes == (0, 1, 2)
    assert c.weight == 6
    assert c.length == 3
    assert c.mean == 2
    assert str(c) == "(1,2,3,1)"


def test_circuit_record_rejects_repeats():
    with pytest.raises(ValueError):
        CircuitRecord((0, 1, 0), 3)
