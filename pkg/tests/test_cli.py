import json

import pytest

from conftest import K3, P2
from topoplan.cli import main


@pytest.fixture
def k3_index(tmp_path):
    src = tmp_path / "k3.txt"
    src.write_text(K3)
    idx = tmp_path / "k3.idx"
    assert main(["build", str(src), str(idx)]) == 0
    return idx


def test_build_prints_core_payload(tmp_path, capsys):
    src = tmp_path / "p2.txt"
    src.write_text(P2)
    assert main(["build", str(src), str(tmp_path / "p2.idx")]) == 0
    out = capsys.readouterr().out
    assert "core payload: 4m+8 = 12 bits" in out
    assert "primal levels" in out


def test_query_outputs(k3_index, capsys):
    assert main(["query", str(k3_index), "neighbor", "1", "3"]) == 0
    assert capsys.readouterr().out == "true\n"
    assert main(["query", str(k3_index), "list-face-nodes", "2"]) == 0
    assert capsys.readouterr().out.split() == ["3", "2", "1"]
    assert main(["query", str(k3_index), "nodes-share-neighbor", "1", "2"]) == 0
    assert capsys.readouterr().out.split() == ["true", "3"]
    assert main(["query", str(k3_index), "connecting-edge", "1", "1"]) == 0
    assert capsys.readouterr().out == "none\n"


def test_count_face_distinct(tmp_path, capsys):
    src = tmp_path / "p2.txt"
    src.write_text(P2)
    idx = tmp_path / "p2.idx"
    main(["build", str(src), str(idx)])
    capsys.readouterr()
    assert main(["query", str(idx), "count-face", "1", "nodes", "--distinct"]) == 0
    assert capsys.readouterr().out == "2\n"
    assert main(["query", str(idx), "count-face", "1", "nodes"]) == 0
    assert capsys.readouterr().out == "2\n"


def test_batch_queries(k3_index, tmp_path, capsys):
    batch = tmp_path / "q.txt"
    batch.write_text("neighbor 1 2\n# comment\nfaces-adjacent 1 2\nlist-node-edges 1\n")
    assert main(["query", str(k3_index), "--batch", str(batch)]) == 0
    assert capsys.readouterr().out.splitlines() == ["true", "true", "3 2", "5 3"]


@pytest.mark.parametrize(
    "args",
    [["no-such-op", "1"], ["neighbor", "1"], ["neighbor", "1", "7"], ["count-node", "1", "corners"], []],
)
def test_query_usage_errors(k3_index, args):
    assert main(["query", str(k3_index), *args]) == 1


def test_usage_and_validation_exit_codes(tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("PLANAREMB 1\n3 1\n1 1\n1 1\n0\n1 2\nroot 1 1\n")
    assert main(["build", str(bad), str(tmp_path / "x.idx")]) == 2
    src = tmp_path / "k3.txt"
    src.write_text(K3)
    assert main(["build", str(src), str(tmp_path / "x.idx"), "--f", "3"]) == 1
    assert main(["build", str(src), str(tmp_path / "x.idx"), "--f", "3", "--allow-small-f"]) == 0


def test_corrupted_file_exit_code(k3_index):
    data = bytearray(k3_index.read_bytes())
    data[-3] ^= 0xFF
    k3_index.write_bytes(bytes(data))
    assert main(["stats", str(k3_index)]) == 2


def test_verify_pass_and_saved_index(tmp_path, capsys):
    src = tmp_path / "t.txt"
    assert main(["gen", "triangulation", "40", "--seed", "2", "--loops", "2", "--parallels", "2", "-o", str(src)]) == 0
    assert main(["verify", str(src), "--budget", "2000"]) == 0
    out = capsys.readouterr().out
    assert "overall: PASS" in out and "FAIL" not in out
    idx = tmp_path / "t.idx"
    main(["build", str(src), str(idx), "--heavy-pairs=with-witness", "--f-hp", "5"])
    assert main(["verify", str(src), "--index", str(idx), "--budget", "2000"]) == 0


def test_verify_reports_mismatch_for_wrong_index(tmp_path, capsys):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    main(["gen", "triangulation", "30", "--seed", "1", "-o", str(a)])
    main(["gen", "triangulation", "30", "--seed", "2", "-o", str(b)])
    idx = tmp_path / "a.idx"
    main(["build", str(a), str(idx)])
    capsys.readouterr()
    assert main(["verify", str(b), "--index", str(idx), "--budget", "500"]) == 3
    out = capsys.readouterr().out
    assert "FAIL" in out


def test_gen_shapes(capsys):
    assert main(["gen", "grid", "2", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[:2] == ["PLANAREMB 1", "4 4"]
    assert main(["gen", "grid", "20", "20"]) == 0
    assert capsys.readouterr().out.splitlines()[1] == "400 760"
    assert main(["gen", "triangulation", "1000"]) == 0
    assert capsys.readouterr().out.splitlines()[1] == "1000 2994"
    assert main(["gen", "grid", "0", "3"]) == 1
    assert main(["gen", "grid", "3"]) == 1


def test_bench_rows_and_empty_workload(k3_index, capsys):
    assert main(["bench", str(k3_index), "--ops", "neighbor,list-face-nodes,node-on-face", "--queries", "50", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    rows = {r["op"]: r for r in doc["rows"]}
    assert rows["neighbor"]["max_probes"] <= doc["bound_8_k_plus_f"]
    assert rows["list-face-nodes"]["probe_unit"] == "per item"
    assert main(["bench", str(k3_index), "--ops", ""]) == 0
    assert capsys.readouterr().out.strip().count("\n") == 0


def test_stats(k3_index, capsys):
    assert main(["stats", str(k3_index)]) == 0
    assert "core payload: 4m+8 = 20 bits" in capsys.readouterr().out
