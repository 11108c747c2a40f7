import json

import pytest

from semindex.cli import Config, load_config, main, parse_threshold
from semindex.errors import SemindexError
from semindex.lexicon import MinCount, TopN

from conftest import MINI

CONFIG = str(MINI / "config.ini")


def run_cli(*argv):
    return main(list(argv))


def test_load_config_defaults_and_overrides(tmp_path):
    path = tmp_path / "c.ini"
    path.write_text("tau = 0.5\nk = 3\n", encoding="utf-8")
    config = load_config(path)
    assert config.tau == 0.5
    assert config.k == 3
    assert config.refine_passes == 1


def test_bad_tau_rejected(tmp_path):
    path = tmp_path / "c.ini"
    path.write_text("tau = 2.0\n", encoding="utf-8")
    with pytest.raises(SemindexError):
        load_config(path)


def test_parse_threshold():
    assert parse_threshold("min_count:2") == MinCount(2)
    assert parse_threshold("top_n:5") == TopN(5)
    with pytest.raises(SemindexError):
        parse_threshold("whatever")


def test_index_writes_blackboard_and_store(tmp_path):
    out = tmp_path / "out"
    assert run_cli("index", "--config", CONFIG, "--out_dir", str(out)) == 0
    board = (out / "blackboard.xml").read_text(encoding="utf-8")
    assert board.count("<doc ") == 11  # one per non-discarded document
    store = json.loads((out / "index_store.json").read_text(encoding="utf-8"))
    assert store["documents"]["d05"]["routing"] == "Discard"
    assert store["documents"]["d12"]["routing"] == "StoreOnly"


def test_cluster_deterministic(tmp_path):
    reports = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert run_cli("index", "--config", CONFIG, "--out_dir", str(out)) == 0
        assert run_cli("cluster", "--config", CONFIG, "--out_dir", str(out), "--k", "2", "--seed", "7") == 0
        reports.append((out / "clusters.json").read_bytes())
    assert reports[0] == reports[1]


def test_export_ego_network(tmp_path):
    out = tmp_path / "out"
    assert run_cli("index", "--config", CONFIG, "--out_dir", str(out)) == 0
    assert run_cli("export", "--config", CONFIG, "--out_dir", str(out), "--term", "america") == 0
    lines = (out / "ego_america.net").read_text(encoding="utf-8").splitlines()
    assert lines[1] == '1 "america"'


def test_domain_error_exit_code(tmp_path, capsys):
    out = tmp_path / "out"
    assert run_cli("index", "--config", CONFIG, "--out_dir", str(out)) == 0
    code = run_cli("export", "--config", CONFIG, "--out_dir", str(out), "--term", "zzz")
    assert code == 1
    err = capsys.readouterr().err
    assert "UnknownTerm" in err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as excinfo:
        run_cli("no-such-command")
    assert excinfo.value.code == 2


def test_eval_prints_metrics(tmp_path, capsys):
    out = tmp_path / "out"
    assert run_cli("index", "--config", CONFIG, "--out_dir", str(out)) == 0
    assert run_cli("eval", "--config", CONFIG, "--out_dir", str(out)) == 0
    captured = capsys.readouterr().out
    assert captured.startswith("precision\t")
    assert "recall\t" in captured


def test_pipeline_end_to_end_byte_identical(tmp_path):
    artifacts = ("index_store.json", "blackboard.xml", "vocabulary.tsv", "clusters.json", "clusters.net")
    snapshots = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert run_cli("pipeline", "--config", CONFIG, "--out_dir", str(out)) == 0
        snapshots.append({f: (out / f).read_bytes() for f in artifacts})
    assert snapshots[0] == snapshots[1]


def test_pragmatic_level_rejected(tmp_path):
    out = tmp_path / "out"
    code = run_cli("index", "--config", CONFIG, "--out_dir", str(out), "--level", "pragmatic")
    assert code == 1
