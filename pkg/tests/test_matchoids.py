"""Matroid oracles, p-matchoid composition, rank, and the exchange rule."""

from itertools import combinations
from random import Random

import pytest

import matchstream as ms


def _state(order, nu):
    index = {e: i for i, e in enumerate(order)}
    return ms.SolutionState(order, index, nu, sum(nu.values()), 0.0,
                            next_index=len(order))


def test_uniform_matroid():
    m = ms.UniformMatroid({0, 1, 2}, 2)
    assert not m.independent({0, 1, 2})
    assert m.independent(())
    assert m.independent({0, 1})


def test_partition_matroid():
    m = ms.PartitionMatroid({0, 1, 2}, [[0, 1], [2]], [1, 1])
    assert m.independent({0, 2})
    assert not m.independent({0, 1})


def test_elements_outside_ground_subset_are_ignored():
    m = ms.UniformMatroid({0, 1}, 1)
    assert m.independent({0, 5, 9})


def test_graphic_matroid_detects_cycles():
    endpoints = {0: (0, 1), 1: (1, 2), 2: (2, 0), 3: (2, 3)}
    m = ms.GraphicMatroid(set(endpoints), endpoints)
    assert m.independent({0, 1, 3})
    assert not m.independent({0, 1, 2})


def test_transversal_matroid_matches_left_into_right():
    adjacency = {0: {0}, 1: {0, 1}, 2: {1}}
    m = ms.TransversalMatroid(set(adjacency), adjacency)
    assert m.independent({0, 1})
    assert not m.independent({0, 1, 2})


def _bipartite_matchoid():
    # four edges on left vertices {u0,u1} and right vertices {v0,v1}:
    # 0=(u0,v0) 1=(u0,v1) 2=(u1,v0) 3=(u1,v1)
    matroids = [
        ms.UniformMatroid({0, 1}, 1),   # u0
        ms.UniformMatroid({2, 3}, 1),   # u1
        ms.UniformMatroid({0, 2}, 1),   # v0
        ms.UniformMatroid({1, 3}, 1),   # v1
    ]
    return ms.PMatchoid(range(4), matroids, p=2)


def test_matchoid_feasibility_is_matching_feasibility():
    mp = _bipartite_matchoid()
    assert ms.matchoid_feasible(mp, {0, 3})        # a perfect matching
    assert not ms.matchoid_feasible(mp, {0, 1})    # shares u0
    assert mp.rank_k == 2


def test_empty_matchoid_accepts_everything():
    mp = ms.PMatchoid(range(3), [], p=1)
    assert mp.feasible({0, 1, 2})
    assert mp.rank_k == 3


def test_membership_above_p_is_rejected():
    with pytest.raises(ms.InfeasibilityError):
        ms.PMatchoid(range(2), [ms.UniformMatroid({0}, 1),
                                ms.UniformMatroid({0}, 1)], p=1)


def test_exchange_only_candidate():
    mp = ms.PMatchoid(range(2), [ms.UniformMatroid({0, 1}, 1)], p=1)
    state = _state([0], {0: 1.0})
    assert ms.exchange_set(mp, 1, state) == {0}


def test_exchange_no_violation_is_empty():
    mp = ms.PMatchoid(range(3), [ms.UniformMatroid({0, 1, 2}, 2)], p=1)
    state = _state([0], {0: 1.0})
    assert ms.exchange_set(mp, 1, state) == set()


def test_exchange_bipartite_hand_trace():
    # solution holds edge (u0,v0); edge (u0,v1) arrives: only the u0
    # matroid is violated, so just the resident edge is displaced
    mp = _bipartite_matchoid()
    state = _state([0], {0: 2.0})
    assert ms.exchange_set(mp, 1, state) == {0}
    assert mp.feasible((state.members - {0}) | {1})


def test_exchange_prefers_smaller_nu_then_earlier_arrival():
    mp = ms.PMatchoid(range(3), [ms.UniformMatroid({0, 1, 2}, 2)], p=1)
    state = _state([0, 1], {0: 2.0, 1: 1.0})
    assert ms.exchange_set(mp, 2, state) == {1}
    tied = _state([0, 1], {0: 1.0, 1: 1.0})
    assert ms.exchange_set(mp, 2, tied) == {0}


def test_exchange_rejects_member_element():
    mp = ms.PMatchoid(range(2), [ms.UniformMatroid({0, 1}, 1)], p=1)
    state = _state([0], {0: 1.0})
    with pytest.raises(ms.PreconditionError):
        ms.exchange_set(mp, 0, state)


class _BrokenMatroid(ms.Matroid):
    """Not a matroid: {0} independent but {1} is not (no exchange)."""

    kind = "broken"

    def _independent(self, restricted):
        return restricted <= {0}


def test_exchange_flags_malformed_oracle():
    mp = ms.PMatchoid(range(2), [_BrokenMatroid({0, 1})], p=1, rank=1)
    state = _state([0], {0: 1.0})
    with pytest.raises(ms.InfeasibilityError):
        ms.exchange_set(mp, 1, state)


def test_rank_examples():
    uniform = ms.PMatchoid(range(5), [ms.UniformMatroid(range(5), 3)], p=1)
    assert uniform.rank_k == 3
    partition = ms.PMatchoid(
        range(4), [ms.PartitionMatroid(range(4), [[0, 1], [2, 3]], [1, 1])], p=1)
    assert partition.rank_k == 2


def test_rank_of_pairwise_intersecting_hyperedges():
    # four hyperedges all sharing vertex 0: the vertex-0 matroid caps any
    # feasible set at one hyperedge
    inst = ms.generate_instance("3-uniform-hypergraph-matching", 0,
                                vertices=6, hyperedges=8)
    hyperedges = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5)]
    matroids = []
    for v in range(6):
        incident = [e for e, tri in enumerate(hyperedges) if v in tri]
        if incident:
            matroids.append(ms.UniformMatroid(incident, 1))
    mp = ms.PMatchoid(range(4), matroids, p=3)
    assert mp.rank_k == 1
    assert inst.build_matchoid().p == 3


def test_rank_requires_supplied_value_when_large():
    with pytest.raises(ms.SizeError):
        ms.PMatchoid(range(17), [ms.UniformMatroid(range(17), 3)], p=1)
    mp = ms.PMatchoid(range(17), [ms.UniformMatroid(range(17), 3)], p=1, rank=3)
    assert mp.rank_k == 3


def _random_matroid(rng, n):
    ground = list(range(n))
    kind = rng.choice(("uniform", "partition", "graphic", "transversal"))
    if kind == "uniform":
        return ms.UniformMatroid(ground, rng.randint(0, n))
    if kind == "partition":
        ids = ground[:]
        rng.shuffle(ids)
        parts = [sorted(ids[j::2]) for j in range(2)]
        parts = [prt for prt in parts if prt]
        return ms.PartitionMatroid(ground, parts,
                                   [rng.randint(1, 2) for _ in parts])
    if kind == "graphic":
        verts = max(2, n - rng.randint(0, 2))
        endpoints = {}
        for e in ground:
            u = rng.randrange(verts)
            v = rng.randrange(verts)
            while v == u:
                v = rng.randrange(verts)
            endpoints[e] = (u, v)
        return ms.GraphicMatroid(ground, endpoints)
    right = max(2, n - 1)
    adjacency = {e: set(rng.sample(range(right), rng.randint(1, min(3, right))))
                 for e in ground}
    return ms.TransversalMatroid(ground, adjacency)


def test_downward_closure_and_exchange_axiom_by_brute_force():
    rng = Random(23)
    for trial in range(12):
        n = rng.randint(3, 8)
        matroid = _random_matroid(rng, n)
        independents = [frozenset(c)
                        for r in range(n + 1)
                        for c in combinations(range(n), r)
                        if matroid.independent(c)]
        assert frozenset() in independents
        members = set(independents)
        for a in independents:
            for e in a:
                assert a - {e} in members, "downward closure failed"
        for a in independents:
            for b in independents:
                if len(a) < len(b):
                    assert any(a | {e} in members for e in b - a), \
                        "exchange axiom failed"


def test_rank_matches_unpruned_maximum():
    rng = Random(31)
    for trial in range(8):
        n = rng.randint(3, 8)
        matroids = [_random_matroid(rng, n) for _ in range(rng.randint(1, 2))]
        counts = {}
        for m in matroids:
            for e in m.ground_subset:
                counts[e] = counts.get(e, 0) + 1
        mp = ms.PMatchoid(range(n), matroids, p=max(counts.values(), default=1))
        best = max(len(c)
                   for r in range(n + 1)
                   for c in combinations(range(n), r)
                   if mp.feasible(c))
        assert ms.compute_rank(mp) == best
