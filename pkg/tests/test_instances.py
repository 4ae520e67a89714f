"""Instance generation, file round-trips, and loader validation."""

import json

import pytest

import matchstream as ms


def test_every_family_generates_valid_instances():
    expected_p = {
        "coverage+uniform": 1,
        "coverage+partition": 1,
        "bipartite-matching": 2,
        "3-uniform-hypergraph-matching": 3,
        "directed-cut+matroid": 1,
    }
    for family in ms.FAMILIES:
        for seed in range(5):
            inst = ms.generate_instance(family, seed)
            oracle = inst.build_oracle()
            mp = inst.build_matchoid()
            assert len(oracle.ground) == inst.n
            assert mp.p == expected_p[family]
            assert mp.rank_k >= 1
            assert oracle.monotone == inst.monotone
            # a positive optimum is guaranteed by construction
            assert any(oracle.peek({e}) > 0 for e in oracle.ground)


def test_generation_is_deterministic():
    a = ms.generate_instance("bipartite-matching", 42)
    b = ms.generate_instance("bipartite-matching", 42)
    assert a.to_dict() == b.to_dict()
    c = ms.generate_instance("bipartite-matching", 43)
    assert c.to_dict() != a.to_dict()


def test_unknown_family_rejected():
    with pytest.raises(ms.ConfigError):
        ms.generate_instance("knapsack", 0)


def test_save_load_round_trip(tmp_path):
    inst = ms.generate_instance("coverage+partition", 7)
    path = tmp_path / "inst.json"
    ms.save_instance(inst, path)
    loaded = ms.load_instance(path)
    assert loaded.to_dict() == inst.to_dict()
    ms.save_instance(loaded, tmp_path / "again.json")
    assert (tmp_path / "again.json").read_text() == path.read_text()


def test_loader_rejects_membership_violation(tmp_path):
    data = ms.generate_instance("coverage+uniform", 0, n=4).to_dict()
    data["constraint"]["matroids"].append(
        {"kind": "uniform", "ground": [0], "capacity": 1})
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(ms.ConfigError):
        ms.load_instance(path).build_matchoid()


def test_loader_rejects_unknown_kinds(tmp_path):
    data = ms.generate_instance("coverage+uniform", 0, n=4).to_dict()
    data["objective"]["kind"] = "mystery"
    path = tmp_path / "bad_obj.json"
    path.write_text(json.dumps(data))
    with pytest.raises(ms.ConfigError):
        ms.load_instance(path).build_oracle()

    data = ms.generate_instance("coverage+uniform", 0, n=4).to_dict()
    data["constraint"]["matroids"][0]["kind"] = "mystery"
    path = tmp_path / "bad_mat.json"
    path.write_text(json.dumps(data))
    with pytest.raises(ms.ConfigError):
        ms.load_instance(path).build_matchoid()


def test_loader_rejects_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ms.ConfigError):
        ms.load_instance(path)


def test_supplied_rank_is_respected_and_null_rank_computed(tmp_path):
    inst = ms.generate_instance("bipartite-matching", 3)
    assert inst.constraint["rank"] is None
    mp = inst.build_matchoid()
    assert mp.rank_k == ms.compute_rank(mp)

    data = inst.to_dict()
    data["constraint"]["rank"] = mp.rank_k
    path = tmp_path / "ranked.json"
    path.write_text(json.dumps(data))
    assert ms.load_instance(path).build_matchoid().rank_k == mp.rank_k


def test_graphic_and_transversal_instance_files(tmp_path):
    data = {
        "schema_version": 1,
        "n": 4,
        "monotone": True,
        "objective": {"kind": "modular", "weights": [1, 2, 3, 4]},
        "constraint": {"p": 2, "rank": None, "matroids": [
            {"kind": "graphic", "ground": [0, 1, 2],
             "endpoints": [[0, 0, 1], [1, 1, 2], [2, 2, 0]]},
            {"kind": "transversal", "ground": [2, 3],
             "adjacency": [[2, [0]], [3, [0, 1]]]},
        ]},
    }
    path = tmp_path / "mixed.json"
    path.write_text(json.dumps(data))
    inst = ms.load_instance(path)
    mp = inst.build_matchoid()
    assert not mp.feasible({0, 1, 2})     # triangle
    assert mp.feasible({0, 1, 3})
    assert mp.rank_k == 3                 # two forest edges plus element 3


def test_stream_order_default_and_shuffle():
    assert ms.stream_order(5) == [0, 1, 2, 3, 4]
    a = ms.stream_order(10, shuffle_seed=3)
    b = ms.stream_order(10, shuffle_seed=3)
    assert a == b
    assert sorted(a) == list(range(10))
    assert a != list(range(10))
