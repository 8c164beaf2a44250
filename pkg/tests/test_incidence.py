import itertools

import pytest

from conftest import SAMPLE8, K3, LOOP, P2
from topoplan import Topology, build_turan, parse_rotation_system
from topoplan.generate import triangulation, with_extras
from topoplan.incidence import CountIndex, IncidenceIndex, default_f_inc
from topoplan.oracle import NaiveTopology


def _setup(rs, f_inc=None, f_cnt=16):
    core, sc = build_turan(rs)
    topo = Topology(core)
    o = NaiveTopology(rs)
    fmap = [None] + [o.face_of[tuple(int(t) for t in sc.face_rep[x])] for x in range(1, topo.nfaces + 1)]
    return topo, sc, o, fmap, IncidenceIndex.build(topo, f_inc), CountIndex.build(topo, f_cnt)


def test_default_threshold():
    assert default_f_inc(2**10) == 100
    assert default_f_inc(1) == 2


@pytest.mark.parametrize("f_inc", [2, 4, 7, None])
def test_node_on_face_matches_oracle(f_inc):
    rs = with_extras(triangulation(70, 5), loops=5, parallels=10, seed=3)
    topo, sc, o, fmap, inc, _ = _setup(rs, f_inc)
    assert len(inc) <= 16 * rs.m / inc.f_inc
    for u, x in itertools.product(range(1, topo.n + 1), range(1, topo.nfaces + 1)):
        assert inc.node_on_face(u, x) == o.node_on_face(int(sc.node_to_input[u]), fmap[x])


def test_heavy_pairs_cover_heavy_incidences():
    rs = triangulation(200, 8)
    topo, sc, o, fmap, inc, _ = _setup(rs, 3)
    heavy_nodes = [u for u in range(1, topo.n + 1) if topo.primal.degree_at_least(u, 3)]
    assert len(inc) == sum(len(set(topo.list_node_faces(u))) for u in heavy_nodes)


def test_sample8_node_on_face_f():
    rs = parse_rotation_system(SAMPLE8)
    topo, sc, o, fmap, inc, _ = _setup(rs)
    face_f = fmap.index(2)  # oracle face with boundary 1, 8, 7, 6
    node = {int(sc.node_to_input[u]): u for u in range(1, topo.n + 1)}
    assert inc.node_on_face(node[7], face_f)
    assert not inc.node_on_face(node[3], face_f)


def test_p2_node_on_only_face():
    topo, *_ , inc, counts = _setup(parse_rotation_system(P2))
    assert inc.node_on_face(2, 1)
    assert counts.count_face(1, "edges") == 2
    assert counts.count_face(1, "nodes", distinct=True) == 2


def test_k3_counts():
    *_, counts = _setup(parse_rotation_system(K3))
    assert counts.count_node(1, "edges") == 2
    assert counts.count_node(1, "nodes", distinct=True) == 2


def test_self_loop_only_node():
    *_, counts = _setup(parse_rotation_system(LOOP))
    assert counts.count_node(1, "edges") == 2
    assert counts.count_node(1, "nodes", distinct=True) == 1
    assert counts.count_node(1, "nodes") == 2


@pytest.mark.parametrize("f_cnt", [1, 3, 16])
def test_counts_match_oracle(f_cnt):
    rs = with_extras(triangulation(60, 2), loops=6, parallels=9, seed=4)
    topo, sc, o, fmap, _, counts = _setup(rs, f_cnt=f_cnt)
    for kind in ("edges", "nodes", "faces"):
        for distinct in (False, True):
            for u in range(1, topo.n + 1):
                assert counts.count_node(u, kind, distinct) == o.count_node(int(sc.node_to_input[u]), kind, distinct)
            for x in range(1, topo.nfaces + 1):
                assert counts.count_face(x, kind, distinct) == o.count_face(fmap[x], kind, distinct)
    assert sum(counts.count_node(u, "edges") for u in range(1, topo.n + 1)) == 2 * rs.m
    assert sum(counts.count_face(x, "edges") for x in range(1, topo.nfaces + 1)) == 2 * rs.m


def test_bad_count_arguments():
    *_, counts = _setup(parse_rotation_system(K3))
    with pytest.raises(ValueError):
        counts.count_node(1, "corners")
    with pytest.raises(IndexError):
        counts.count_face(3, "edges")
